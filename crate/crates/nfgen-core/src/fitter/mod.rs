//! Fitting of feasible discrete piecewise polynomials: recursive split plus
//! merge over the domain, per-piece Chebyshev/Lagrange interpolation,
//! coefficient scaling, residual boosting, and sampled-SRD verification.

mod fit;
mod interp;
mod piece;
mod plan;
mod scale;
mod srd;
mod verify;

pub use fit::{
    constrain_k, fit_candidates, fit_one_piece, fit_piecewise, fit_piecewise_with_stats,
    residual_boost, FitStats, KFitResult,
};
pub use interp::{cheby_interpolate, cheby_nodes, eval_poly, lagrange_interpolate};
pub use piece::ScaledPolynomial;
pub use plan::{PiecewisePlan, PlanDoc};
pub use scale::{round_poly_unscaled, scale_c, scale_poly};
pub use srd::{srd, srd_bound_report};
pub use verify::{verify_plan, VerifyReport};

use std::fmt;

use crate::expr::{EvalContext, Expression};
use crate::fxp::{FxpError, FxpFormat};

/// Target function evaluated in continuous space during fitting.
pub trait TargetFn: Fn(f64) -> Result<f64, String> + Sync {}
impl<T: Fn(f64) -> Result<f64, String> + Sync + ?Sized> TargetFn for T {}

/// Adapt a parsed expression to a fitting target. Quadrature-backed
/// builtins run at a hundredth of the accuracy target, floored at 1e-9:
/// the error metric turns relative wherever the target clears the soft
/// zero, so absolute quadrature noise must stay below `epsilon` times the
/// smallest such magnitude, not just below `epsilon`.
pub fn expression_target(expr: &Expression, epsilon: f64) -> impl TargetFn + '_ {
    let ctx = EvalContext {
        quad_tol: (epsilon / 100.0).min(1e-9),
    };
    move |x: f64| expr.eval_with(x, &ctx).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitError {
    /// The target function failed to evaluate at a required point.
    Target {
        x: f64,
        message: String,
    },
    DuplicatePoint(f64),
    BadConfig(String),
    BadPlan(String),
    Fxp(FxpError),
}

impl fmt::Display for FitError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::Target { x, message } => {
                write!(out, "target evaluation failed at x = {x}: {message}")
            }
            FitError::DuplicatePoint(x) => write!(out, "duplicate interpolation point {x}"),
            FitError::BadConfig(msg) => write!(out, "invalid fit configuration: {msg}"),
            FitError::BadPlan(msg) => write!(out, "invalid plan: {msg}"),
            FitError::Fxp(e) => write!(out, "{e}"),
        }
    }
}

impl std::error::Error for FitError {}

impl From<FxpError> for FitError {
    fn from(e: FxpError) -> Self {
        FitError::Fxp(e)
    }
}

/// Everything the fitting algorithms need to know: accuracy targets, the
/// number format, and search limits.
#[derive(Debug, Clone)]
pub struct FitConfig {
    pub domain: (f64, f64),
    pub epsilon: f64,
    pub soft_zero: f64,
    pub format: FxpFormat,
    /// Inclusive range of polynomial orders to try.
    pub k_range: (u32, u32),
    /// Hard cap on pieces per candidate.
    pub m_max: usize,
    /// Per-piece sample cap for accuracy checks.
    pub max_samples: usize,
    /// Constant values installed left and right of the domain on finalize.
    pub defaults: (f64, f64),
    /// Ablation switches; both on in normal operation.
    pub scaling: bool,
    pub boosting: bool,
}

impl FitConfig {
    pub fn new(
        domain: (f64, f64),
        epsilon: f64,
        soft_zero: f64,
        format: FxpFormat,
    ) -> Result<Self, FitError> {
        let cfg = FitConfig {
            domain,
            epsilon,
            soft_zero,
            format,
            k_range: (3, 10),
            m_max: 50,
            max_samples: 1000,
            defaults: (0.0, 0.0),
            scaling: true,
            boosting: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), FitError> {
        let (a, b) = self.domain;
        let ordered = a.is_finite() && b.is_finite() && a < b;
        if !ordered {
            return Err(FitError::BadConfig(format!(
                "domain [{a}, {b}] must be finite and ascending"
            )));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(FitError::BadConfig("epsilon must be positive".into()));
        }
        let soft_zero_ok = self.soft_zero > 0.0 && self.soft_zero < self.epsilon;
        if !soft_zero_ok {
            return Err(FitError::BadConfig(format!(
                "soft zero {} must lie in (0, epsilon = {})",
                self.soft_zero, self.epsilon
            )));
        }
        if self.k_range.0 < 1 || self.k_range.0 > self.k_range.1 {
            return Err(FitError::BadConfig(format!(
                "order range [{}, {}] must be ascending and start at 1 or above",
                self.k_range.0, self.k_range.1
            )));
        }
        if self.m_max < 1 {
            return Err(FitError::BadConfig("m_max must be at least 1".into()));
        }
        if self.max_samples < 2 {
            return Err(FitError::BadConfig("max_samples must be at least 2".into()));
        }
        if !self.defaults.0.is_finite() || !self.defaults.1.is_finite() {
            return Err(FitError::BadConfig("default values must be finite".into()));
        }
        Ok(())
    }
}
