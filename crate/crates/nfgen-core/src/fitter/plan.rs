//! The piecewise plan: breakpoints plus per-piece scaled polynomials, and
//! its JSON document form with mantissas as decimal-string integers for
//! bit-exactness.

use serde::{Deserialize, Serialize};

use crate::fxp::{FxpFormat, FxpValue};

use super::piece::ScaledPolynomial;
use super::FitError;

/// A discrete piecewise polynomial: `m` pieces of common order `k` over
/// ascending breakpoints, all parameters grid-representable.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePlan {
    format: FxpFormat,
    /// Left endpoints `w_0..w_{m-1}`, strictly increasing.
    breaks: Vec<FxpValue>,
    /// Right endpoint `w_m = b`, kept separately.
    end: FxpValue,
    pieces: Vec<ScaledPolynomial>,
    order: usize,
    /// Constant values installed outside `[a, b]` when the plan is finalized.
    defaults: (f64, f64),
}

impl PiecewisePlan {
    pub fn new(
        format: FxpFormat,
        breaks: Vec<FxpValue>,
        end: FxpValue,
        pieces: Vec<ScaledPolynomial>,
        order: usize,
        defaults: (f64, f64),
    ) -> Result<Self, FitError> {
        if breaks.is_empty() || breaks.len() != pieces.len() {
            return Err(FitError::BadPlan("piece/breakpoint count mismatch".into()));
        }
        if !breaks.windows(2).all(|w| w[0].mantissa() < w[1].mantissa()) {
            return Err(FitError::BadPlan(
                "breakpoints not strictly increasing".into(),
            ));
        }
        if breaks.last().unwrap().mantissa() >= end.mantissa() {
            return Err(FitError::BadPlan(
                "endpoint not past the last breakpoint".into(),
            ));
        }
        for p in &pieces {
            if p.order() != order {
                return Err(FitError::BadPlan(
                    "pieces not padded to a common order".into(),
                ));
            }
            if p.format() != format {
                return Err(FitError::BadPlan("piece format mismatch".into()));
            }
        }
        Ok(PiecewisePlan {
            format,
            breaks,
            end,
            pieces,
            order,
            defaults,
        })
    }

    pub fn format(&self) -> FxpFormat {
        self.format
    }

    pub fn breaks(&self) -> &[FxpValue] {
        &self.breaks
    }

    pub fn end(&self) -> FxpValue {
        self.end
    }

    pub fn pieces(&self) -> &[ScaledPolynomial] {
        &self.pieces
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn defaults(&self) -> (f64, f64) {
        self.defaults
    }

    /// Greatest piece index `j` with `x >= w_j`; `None` below `w_0`.
    pub fn select_piece(&self, x: FxpValue) -> Option<usize> {
        let idx = self
            .breaks
            .partition_point(|w| w.mantissa() <= x.mantissa());
        idx.checked_sub(1)
    }

    /// Plain select-then-evaluate (the non-oblivious reference path).
    pub fn eval_select(&self, x: FxpValue) -> Option<FxpValue> {
        self.select_piece(x).map(|j| self.pieces[j].eval_fxp(x))
    }

    /// Whether the out-of-domain default pieces have been installed.
    pub fn is_finalized(&self) -> bool {
        self.breaks[0] == FxpValue::min_representable(self.format)
    }

    /// Serialize to the interchange document.
    pub fn to_doc(&self) -> PlanDoc {
        PlanDoc {
            format: self.format,
            breaks: self
                .breaks
                .iter()
                .map(|b| b.mantissa().to_string())
                .collect(),
            end: self.end.mantissa().to_string(),
            coeff: self
                .pieces
                .iter()
                .map(|p| {
                    p.coeffs()
                        .iter()
                        .map(|c| c.mantissa().to_string())
                        .collect()
                })
                .collect(),
            scaler: self
                .pieces
                .iter()
                .map(|p| {
                    p.scalers()
                        .iter()
                        .map(|s| s.mantissa().to_string())
                        .collect()
                })
                .collect(),
            defaults: self.defaults,
            k: self.order,
            m: self.pieces.len(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("plan serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, FitError> {
        let doc: PlanDoc =
            serde_json::from_str(text).map_err(|e| FitError::BadPlan(format!("plan JSON: {e}")))?;
        doc.into_plan()
    }
}

/// JSON document form. Mantissas are decimal-string integers; values are
/// `mantissa * 2^-f` in the embedded format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlanDoc {
    pub format: FxpFormat,
    pub breaks: Vec<String>,
    pub end: String,
    pub coeff: Vec<Vec<String>>,
    pub scaler: Vec<Vec<String>>,
    pub defaults: (f64, f64),
    pub k: usize,
    pub m: usize,
}

impl PlanDoc {
    pub fn into_plan(self) -> Result<PiecewisePlan, FitError> {
        let format = self.format;
        let parse = |s: &String| -> Result<FxpValue, FitError> {
            let m: i128 = s
                .parse()
                .map_err(|_| FitError::BadPlan(format!("bad mantissa `{s}`")))?;
            FxpValue::from_mantissa(m, format).map_err(|e| FitError::BadPlan(e.to_string()))
        };
        let breaks: Vec<FxpValue> = self.breaks.iter().map(parse).collect::<Result<_, _>>()?;
        let end = parse(&self.end)?;
        if self.coeff.len() != self.m || self.scaler.len() != self.m {
            return Err(FitError::BadPlan("m does not match piece arrays".into()));
        }
        let mut pieces = Vec::with_capacity(self.m);
        for (cs, ss) in self.coeff.iter().zip(&self.scaler) {
            if cs.len() != self.k + 1 || ss.len() != self.k + 1 {
                return Err(FitError::BadPlan(
                    "piece not padded to k+1 parameters".into(),
                ));
            }
            let coeffs: Vec<FxpValue> = cs.iter().map(parse).collect::<Result<_, _>>()?;
            let scalers: Vec<FxpValue> = ss.iter().map(parse).collect::<Result<_, _>>()?;
            for s in &scalers {
                if s.mantissa() <= 0 || s.to_f64() > 1.0 {
                    return Err(FitError::BadPlan("scaler outside (0, 1]".into()));
                }
            }
            pieces.push(ScaledPolynomial::from_pairs(coeffs, scalers));
        }
        PiecewisePlan::new(format, breaks, end, pieces, self.k, self.defaults)
    }
}
