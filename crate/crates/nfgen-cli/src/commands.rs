//! Subcommand implementations. Reports are machine-readable JSON plus a
//! human-readable table on standard output.

use std::error::Error;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use nfgen_core::codegen::{
    expression_and_config, pipeline_with_template, CodegenError, NfdDocument, Template,
};
use nfgen_core::expr::Expression;
use nfgen_core::fitter::{
    expression_target, fit_candidates, verify_plan, FitConfig, KFitResult, PiecewisePlan, PlanDoc,
};
use nfgen_core::fxp::FxpValue;
use nfgen_core::oppe::{finalize_plan, trace_of, OpKind, SimContext, Stage};
use nfgen_core::perf::{
    ckx_elements, fit_cost_model, generate_profiling_suite, select_plan, trace_cost, Decision,
    MpcSetting, PerfError, PerfProfile,
};

use crate::{EXIT_NO_CANDIDATES, EXIT_OK, EXIT_VERIFY_FAILED};

type CliResult = Result<u8, Box<dyn Error>>;

/// Candidate-set file: every fitted plan plus the per-order table.
#[derive(Serialize, Deserialize)]
struct CandidateSet {
    function: String,
    plans: Vec<PlanDoc>,
    per_k: Vec<KRow>,
}

#[derive(Serialize, Deserialize)]
struct KRow {
    k: u32,
    m: Option<usize>,
    max_srd: Option<f64>,
    seconds: f64,
    error: Option<String>,
}

fn read(path: &Path) -> Result<String, Box<dyn Error>> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()).into())
}

fn load_nfd(path: &Path) -> Result<(NfdDocument, Expression, FitConfig), Box<dyn Error>> {
    let nfd = NfdDocument::from_json(&read(path)?)?;
    let (expr, cfg) = expression_and_config(&nfd)?;
    Ok((nfd, expr, cfg))
}

pub fn fit(nfd_path: &Path, out_path: &Path) -> CliResult {
    let (nfd, expr, cfg) = load_nfd(nfd_path)?;
    let target = expression_target(&expr, cfg.epsilon);
    let results: Vec<KFitResult> = fit_candidates(&target, &cfg);

    println!(
        "{:>3} {:>4} {:>12} {:>8}  note",
        "k", "m", "max SRD", "fit s"
    );
    let mut rows = Vec::new();
    let mut plans = Vec::new();
    for r in results {
        let mut row = KRow {
            k: r.k,
            m: None,
            max_srd: None,
            seconds: r.seconds,
            error: r.error.clone(),
        };
        if let Some(plan) = r.plan {
            let report = verify_plan(&plan, &target, &cfg, cfg.max_samples)?;
            row.m = Some(plan.piece_count());
            row.max_srd = Some(report.max_srd);
            println!(
                "{:>3} {:>4} {:>12.3e} {:>8.2}",
                r.k,
                plan.piece_count(),
                report.max_srd,
                r.seconds
            );
            plans.push(plan.to_doc());
        } else {
            println!(
                "{:>3} {:>4} {:>12} {:>8.2}  {}",
                r.k,
                "-",
                "-",
                r.seconds,
                row.error
                    .as_deref()
                    .unwrap_or("no feasible plan within the piece budget")
            );
        }
        rows.push(row);
    }

    if plans.is_empty() {
        eprintln!("no feasible candidates for any order");
        return Ok(EXIT_NO_CANDIDATES);
    }
    let set = CandidateSet {
        function: nfd.function.clone(),
        plans,
        per_k: rows,
    };
    fs::write(out_path, serde_json::to_string_pretty(&set)?)?;
    println!("wrote {}", out_path.display());
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct DecisionReport {
    decision: &'static str,
    k: Option<usize>,
    m: Option<usize>,
    predicted_cost: f64,
    extrapolated: bool,
}

pub fn select(
    candidates_path: &Path,
    ppd_path: &Path,
    nfd_path: &Path,
    out: Option<&Path>,
) -> CliResult {
    let set: CandidateSet = serde_json::from_str(&read(candidates_path)?)?;
    let plans: Vec<PiecewisePlan> = set
        .plans
        .into_iter()
        .map(|d| d.into_plan())
        .collect::<Result<_, _>>()?;
    let profile = PerfProfile::from_json(&read(ppd_path)?)?;
    let (_, expr, _) = load_nfd(nfd_path)?;
    let model = fit_cost_model(&profile)?;

    let report = match select_plan(&plans, &model, &profile.time_dict, &expr) {
        Ok(Decision::Plan {
            k,
            m,
            predicted_cost,
            ..
        }) => {
            let extrapolated = !model.in_trained_range(k as u32, m as u32);
            if extrapolated {
                eprintln!("warning: (k={k}, m={m}) lies outside the profiled grid; prediction extrapolates");
            }
            DecisionReport {
                decision: "plan",
                k: Some(k),
                m: Some(m),
                predicted_cost,
                extrapolated,
            }
        }
        Ok(Decision::DirectEval { predicted_cost }) => DecisionReport {
            decision: "direct_eval",
            k: None,
            m: None,
            predicted_cost,
            extrapolated: false,
        },
        Err(PerfError::NoFeasiblePlan { reason }) => {
            eprintln!("no feasible plan: {reason}");
            return Ok(EXIT_NO_CANDIDATES);
        }
        Err(e) => return Err(e.into()),
    };
    let text = serde_json::to_string_pretty(&report)?;
    match out {
        Some(path) => fs::write(path, &text)?,
        None => println!("{text}"),
    }
    eprintln!(
        "decision: {} (predicted cost {:.3})",
        report.decision, report.predicted_cost
    );
    Ok(EXIT_OK)
}

pub fn gen(nfd_path: &Path, ppd_path: &Path) -> CliResult {
    let nfd = NfdDocument::from_json(&read(nfd_path)?)?;
    let profile = PerfProfile::from_json(&read(ppd_path)?)?;

    // resolve a built-in target id, or a template file path relative to
    // the NFD's directory
    let template = match Template::builtin(&nfd.template) {
        Some(t) => t,
        None => {
            let base = nfd_path.parent().unwrap_or_else(|| Path::new("."));
            let path = base.join(&nfd.template);
            Template::from_text(&nfd.template, &read(&path)?)
        }
    };

    let out = match pipeline_with_template(&nfd, &profile, Some(template)) {
        Ok(out) => out,
        Err(CodegenError::NoFeasiblePlan { details }) => {
            eprintln!("no feasible plan: {details}");
            return Ok(EXIT_NO_CANDIDATES);
        }
        Err(e) => return Err(e.into()),
    };

    let report_path = format!("{}.report.json", nfd.output);
    fs::write(&report_path, serde_json::to_string_pretty(&out.report)?)?;
    match &out.source {
        Some(source) => {
            fs::write(&nfd.output, source)?;
            println!(
                "decision: plan (k={}, m={}); wrote {} and {}",
                out.report.k.unwrap(),
                out.report.m.unwrap(),
                nfd.output,
                report_path
            );
            println!(
                "verified: max SRD {:.3e}, mean {:.3e} over {} samples ({})",
                out.report.max_srd.unwrap(),
                out.report.mean_srd.unwrap(),
                out.report.verify_samples.unwrap(),
                if out.report.verify_pass.unwrap() {
                    "pass"
                } else {
                    "FAIL"
                }
            );
        }
        None => {
            println!(
                "decision: direct_eval (predicted cost {:.3}); no source emitted, report in {}",
                out.report.predicted_cost, report_path
            );
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct VerifyJson {
    samples: usize,
    max_srd: f64,
    mean_srd: f64,
    worst_x: f64,
    epsilon: f64,
    pass: bool,
}

pub fn verify(plan_path: &Path, nfd_path: &Path, samples: usize) -> CliResult {
    let plan = PiecewisePlan::from_json(&read(plan_path)?)?;
    let (nfd, expr, cfg) = load_nfd(nfd_path)?;
    if (plan.format().n(), plan.format().f()) != (nfd.n, nfd.f) {
        return Err(format!(
            "plan format {} does not match the NFD's <{},{}>",
            plan.format(),
            nfd.n,
            nfd.f
        )
        .into());
    }
    let target = expression_target(&expr, cfg.epsilon);
    let report = verify_plan(&plan, &target, &cfg, samples)?;
    let json = VerifyJson {
        samples: report.samples,
        max_srd: report.max_srd,
        mean_srd: report.mean_srd,
        worst_x: report.worst_x,
        epsilon: report.epsilon,
        pass: report.pass,
    };
    println!("{}", serde_json::to_string_pretty(&json)?);
    eprintln!(
        "max SRD {:.3e} (epsilon {:.1e}) at x = {}: {}",
        report.max_srd,
        report.epsilon,
        report.worst_x,
        if report.pass { "pass" } else { "FAIL" }
    );
    Ok(if report.pass {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

pub fn profile_suite(
    setting_id: &str,
    k_range: (u32, u32),
    m_range: (u32, u32),
    repeats: Option<u32>,
    out: &Path,
    accountant: bool,
    seed: u64,
) -> CliResult {
    let setting =
        MpcSetting::from_id(setting_id).ok_or_else(|| format!("unknown setting `{setting_id}`"))?;
    let suite = generate_profiling_suite(k_range, m_range, repeats, seed);
    let time_dict = setting.time_dict();

    let samples = if accountant {
        // time every synthetic plan through the simulator's cost accountant
        suite
            .iter()
            .map(|s| {
                let finalized = finalize_plan(&s.plan);
                let x = FxpValue::from_real(0.25, finalized.format()).expect("probe input");
                (s.k, s.m, trace_cost(&trace_of(&finalized, x), &time_dict))
            })
            .collect()
    } else {
        // deployment-mirror timings for the same grid
        suite
            .iter()
            .map(|s| (s.k, s.m, setting.sample_time(s.k, s.m)))
            .collect()
    };

    let profile = PerfProfile { time_dict, samples };
    fs::write(out, profile.to_json())?;
    println!(
        "wrote {} with {} samples over k in [{}, {}], m in [{}, {}] ({})",
        out.display(),
        profile.samples.len(),
        k_range.0,
        k_range.1,
        m_range.0,
        m_range.1,
        if accountant {
            "accountant-timed"
        } else {
            "deployment mirror"
        }
    );
    Ok(EXIT_OK)
}

pub fn trace(plan_path: &Path, inputs: &str, prob_trunc: bool, seed: u64) -> CliResult {
    let plan = finalize_plan(&PiecewisePlan::from_json(&read(plan_path)?)?);
    let format = plan.format();
    let values: Vec<f64> = inputs
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad input `{s}`: {e}"))
        })
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err("need at least one input".into());
    }

    let mut traces = Vec::new();
    for &x in &values {
        let xv = FxpValue::from_real(x, format)?;
        let mut ctx = if prob_trunc {
            SimContext::with_probabilistic_truncation(seed)
        } else {
            SimContext::new()
        };
        let result = ctx.oppe_eval(&plan, xv);
        let trace = ctx.take_trace();
        println!("# input {x} -> {result}");
        print!("{}", trace.dump());
        traces.push(trace);
    }

    let k = plan.order();
    let m = plan.piece_count();
    let reference = &traces[0];
    println!("# op-count summary (k={k}, m={m} incl. default pieces)");
    println!("GT: {} (expected {m})", reference.count(OpKind::Gt));
    println!(
        "MUL_cc in power table: {} (expected {})",
        reference.count_in(OpKind::MulCc, Stage::Powers),
        ckx_elements(k)
    );
    println!(
        "MUL_pc in selection: {} (expected {})",
        reference.count_in(OpKind::MulPc, Stage::Select),
        2 * (k + 1) * m
    );
    if values.len() >= 2 {
        let identical = traces.iter().all(|t| t == reference);
        println!(
            "verdict: {}",
            if identical { "identical" } else { "DIFFERING" }
        );
    }
    Ok(EXIT_OK)
}
