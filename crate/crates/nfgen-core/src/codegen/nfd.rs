//! Non-linear function definition documents: the user-facing configuration
//! naming the target expression, domain, accuracy, number format, and
//! output target.

use serde::{Deserialize, Serialize};

use crate::expr::Expression;
use crate::fitter::FitConfig;
use crate::fxp::FxpFormat;

use super::CodegenError;

fn default_template() -> String {
    "sim".to_string()
}

fn default_output() -> String {
    "generated_function.txt".to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NfdDocument {
    /// Expression string over the single variable `x`.
    pub function: String,
    /// Input domain `[a, b]`.
    pub range: (f64, f64),
    /// Target accuracy epsilon.
    pub tol: f64,
    /// Soft zero; must stay below `tol`.
    pub zero_mask: f64,
    pub n: u32,
    pub f: u32,
    /// Constant values installed left and right of the domain.
    #[serde(default)]
    pub default_values: (f64, f64),
    /// Operation names the target platform provides.
    #[serde(default)]
    pub ops: Vec<String>,
    /// Target id (`sim`, `spdz-style`) or a template file path.
    #[serde(default = "default_template")]
    pub template: String,
    /// Where the generated source goes.
    #[serde(default = "default_output")]
    pub output: String,
    pub k_range: Option<(u32, u32)>,
    pub m_max: Option<usize>,
    pub max_samples: Option<usize>,
}

impl NfdDocument {
    pub fn from_json(text: &str) -> Result<Self, CodegenError> {
        let doc: NfdDocument =
            serde_json::from_str(text).map_err(|e| CodegenError::Nfd(format!("NFD JSON: {e}")))?;
        doc.validate()?;
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("NFD serializes")
    }

    pub fn validate(&self) -> Result<(), CodegenError> {
        FxpFormat::new(self.n, self.f)
            .map_err(|e| CodegenError::Nfd(format!("field `n`/`f`: {e}")))?;
        if !(self.zero_mask > 0.0 && self.zero_mask < self.tol) {
            return Err(CodegenError::Nfd(format!(
                "field `zero_mask`: {} must lie in (0, tol = {})",
                self.zero_mask, self.tol
            )));
        }
        self.expression()?;
        self.fit_config()?;
        Ok(())
    }

    pub fn expression(&self) -> Result<Expression, CodegenError> {
        Expression::parse(&self.function)
            .map_err(|e| CodegenError::Nfd(format!("field `function`: {e}")))
    }

    /// Fitting configuration with the documented defaults applied:
    /// `k_range` [3, 10], `m_max` 50, `max_samples` 1000.
    pub fn fit_config(&self) -> Result<FitConfig, CodegenError> {
        let format = FxpFormat::new(self.n, self.f)
            .map_err(|e| CodegenError::Nfd(format!("field `n`/`f`: {e}")))?;
        let mut cfg = FitConfig::new(self.range, self.tol, self.zero_mask, format)
            .map_err(|e| CodegenError::Nfd(e.to_string()))?;
        if let Some(kr) = self.k_range {
            cfg.k_range = kr;
        }
        if let Some(m) = self.m_max {
            cfg.m_max = m;
        }
        if let Some(ms) = self.max_samples {
            cfg.max_samples = ms;
        }
        cfg.defaults = self.default_values;
        cfg.validate()
            .map_err(|e| CodegenError::Nfd(e.to_string()))?;
        Ok(cfg)
    }
}
