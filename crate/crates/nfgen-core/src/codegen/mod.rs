//! NFD ingestion and template-based code generation: the selected plan is
//! rendered into target source with its parameters embedded as literals.

mod nfd;
mod pipeline;
mod render;
mod template;

pub use nfd::NfdDocument;
pub use pipeline::{
    expression_and_config, function_name, pipeline, pipeline_with_template, KSummary,
    PipelineOutput, PipelineReport, VERIFY_SAMPLES,
};
pub use render::render;
pub use template::{Template, SIM_TEMPLATE, SPDZ_TEMPLATE};

use std::fmt;

use crate::fitter::FitError;
use crate::perf::PerfError;

#[derive(Debug)]
pub enum CodegenError {
    /// NFD schema or validation failure; names the offending field.
    Nfd(String),
    Template {
        missing: String,
    },
    UnknownTemplate(String),
    Fit(FitError),
    Perf(PerfError),
    NoFeasiblePlan {
        details: String,
    },
}

impl fmt::Display for CodegenError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodegenError::Nfd(msg) => write!(out, "invalid NFD: {msg}"),
            CodegenError::Template { missing } => {
                write!(out, "unbound template placeholder `{{{missing}}}`")
            }
            CodegenError::UnknownTemplate(id) => write!(out, "unknown template target `{id}`"),
            CodegenError::Fit(e) => write!(out, "{e}"),
            CodegenError::Perf(e) => write!(out, "{e}"),
            CodegenError::NoFeasiblePlan { details } => write!(out, "no feasible plan: {details}"),
        }
    }
}

impl std::error::Error for CodegenError {}

impl From<FitError> for CodegenError {
    fn from(e: FitError) -> Self {
        CodegenError::Fit(e)
    }
}

impl From<PerfError> for CodegenError {
    fn from(e: PerfError) -> Self {
        CodegenError::Perf(e)
    }
}
