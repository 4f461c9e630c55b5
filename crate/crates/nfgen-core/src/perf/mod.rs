//! Performance profiling artifacts and plan selection: profiling suites,
//! the regression cost model, cost prediction, and the direct-evaluation
//! fallback rule.

mod model;
mod profile;
mod select;
mod suite;

pub use model::{fit_cost_model, CostModel, FEATURE_COUNT};
pub use profile::{ckx_elements, MpcSetting, PerfProfile, TimeDict};
pub use select::{predict_direct_cost, select_plan, Decision};
pub use suite::{generate_profiling_suite, synthetic_plan, trace_cost, SamplePlan};

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum PerfError {
    /// The expression uses an operation kind the dictionary cannot price.
    Unpriced {
        op: String,
    },
    NoFeasiblePlan {
        reason: String,
    },
    /// Regression failure (rank-deficient design, too few samples).
    Fitting(String),
    BadProfile(String),
}

impl fmt::Display for PerfError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PerfError::Unpriced { op } => write!(
                out,
                "operation `{op}` has no unit cost in the time dictionary"
            ),
            PerfError::NoFeasiblePlan { reason } => write!(out, "no feasible plan: {reason}"),
            PerfError::Fitting(msg) => write!(out, "cost model fitting failed: {msg}"),
            PerfError::BadProfile(msg) => write!(out, "invalid performance profile: {msg}"),
        }
    }
}

impl std::error::Error for PerfError {}
