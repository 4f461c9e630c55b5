//! The end-to-end workflow: fit candidates, select against the cost model,
//! finalize, render, verify.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::expr::Expression;
use crate::fitter::{expression_target, fit_candidates, verify_plan, FitConfig, PiecewisePlan};
use crate::oppe::finalize_plan;
use crate::perf::{fit_cost_model, select_plan, Decision, PerfError, PerfProfile};

use super::nfd::NfdDocument;
use super::render::render;
use super::template::Template;
use super::CodegenError;

pub const VERIFY_SAMPLES: usize = 10_000;

/// One row of the per-order fitting table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KSummary {
    pub k: u32,
    pub m: Option<usize>,
    pub max_srd: Option<f64>,
    pub seconds: f64,
    pub error: Option<String>,
}

/// Machine-readable run report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub decision: String,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub predicted_cost: f64,
    pub max_srd: Option<f64>,
    pub mean_srd: Option<f64>,
    pub worst_x: Option<f64>,
    pub verify_samples: Option<usize>,
    pub verify_pass: Option<bool>,
    pub fit_seconds: f64,
    /// True when the chosen `(k, m)` lies outside the profiled grid.
    pub extrapolated: bool,
    pub per_k: Vec<KSummary>,
}

#[derive(Debug)]
pub struct PipelineOutput {
    pub decision: Decision,
    /// Rendered target source; absent when direct evaluation was chosen.
    pub source: Option<String>,
    pub finalized: Option<PiecewisePlan>,
    pub report: PipelineReport,
}

/// Run the workflow with the template named by the NFD (built-in ids only;
/// callers resolving template files pass one through
/// [`pipeline_with_template`]).
pub fn pipeline(nfd: &NfdDocument, ppd: &PerfProfile) -> Result<PipelineOutput, CodegenError> {
    pipeline_with_template(nfd, ppd, None)
}

pub fn pipeline_with_template(
    nfd: &NfdDocument,
    ppd: &PerfProfile,
    template: Option<Template>,
) -> Result<PipelineOutput, CodegenError> {
    nfd.validate()?;
    let expr = nfd.expression()?;
    let cfg = nfd.fit_config()?;
    let template = match template {
        Some(t) => t,
        None => Template::builtin(&nfd.template)
            .ok_or_else(|| CodegenError::UnknownTemplate(nfd.template.clone()))?,
    };

    let target = expression_target(&expr, cfg.epsilon);
    let started = Instant::now();
    let results = fit_candidates(&target, &cfg);
    let fit_seconds = started.elapsed().as_secs_f64();

    let mut per_k = Vec::with_capacity(results.len());
    let mut candidates = Vec::new();
    for r in results {
        let mut row = KSummary {
            k: r.k,
            m: None,
            max_srd: None,
            seconds: r.seconds,
            error: r.error,
        };
        if let Some(plan) = r.plan {
            row.m = Some(plan.piece_count());
            let report =
                verify_plan(&plan, &target, &cfg, cfg.max_samples).map_err(CodegenError::Fit)?;
            row.max_srd = Some(report.max_srd);
            candidates.push(plan);
        } else if row.error.is_none() {
            row.error = Some("no feasible plan within the piece budget".to_string());
        }
        per_k.push(row);
    }

    let model = fit_cost_model(ppd).map_err(CodegenError::Perf)?;
    let decision = match select_plan(&candidates, &model, &ppd.time_dict, &expr) {
        Ok(d) => d,
        Err(PerfError::NoFeasiblePlan { reason }) => {
            let details: Vec<String> = per_k
                .iter()
                .map(|r| format!("k={}: {}", r.k, r.error.as_deref().unwrap_or("ok")))
                .collect();
            return Err(CodegenError::NoFeasiblePlan {
                details: format!("{reason} ({})", details.join("; ")),
            });
        }
        Err(e) => return Err(CodegenError::Perf(e)),
    };

    match decision {
        Decision::Plan {
            index,
            k,
            m,
            predicted_cost,
        } => {
            let finalized = finalize_plan(&candidates[index]);
            let source = render(&finalized, &template, &function_name(nfd))?;
            let verify = verify_plan(&finalized, &target, &cfg, VERIFY_SAMPLES)
                .map_err(CodegenError::Fit)?;
            let report = PipelineReport {
                decision: "plan".to_string(),
                k: Some(k),
                m: Some(m),
                predicted_cost,
                max_srd: Some(verify.max_srd),
                mean_srd: Some(verify.mean_srd),
                worst_x: Some(verify.worst_x),
                verify_samples: Some(verify.samples),
                verify_pass: Some(verify.pass),
                fit_seconds,
                extrapolated: !model.in_trained_range(k as u32, m as u32),
                per_k,
            };
            Ok(PipelineOutput {
                decision,
                source: Some(source),
                finalized: Some(finalized),
                report,
            })
        }
        Decision::DirectEval { predicted_cost } => {
            let report = PipelineReport {
                decision: "direct_eval".to_string(),
                k: None,
                m: None,
                predicted_cost,
                max_srd: None,
                mean_srd: None,
                worst_x: None,
                verify_samples: None,
                verify_pass: None,
                fit_seconds,
                extrapolated: false,
                per_k,
            };
            Ok(PipelineOutput {
                decision,
                source: None,
                finalized: None,
                report,
            })
        }
    }
}

/// Generated function name, derived from the output path stem.
pub fn function_name(nfd: &NfdDocument) -> String {
    let stem = std::path::Path::new(&nfd.output)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("generated_function");
    let cleaned: String = stem
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if cleaned.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        format!("f_{cleaned}")
    } else if cleaned.is_empty() {
        "generated_function".to_string()
    } else {
        cleaned
    }
}

/// Adapter for callers that already hold the parsed pieces.
pub fn expression_and_config(nfd: &NfdDocument) -> Result<(Expression, FitConfig), CodegenError> {
    Ok((nfd.expression()?, nfd.fit_config()?))
}
