//! Plan selection: predicted cost of every candidate against the
//! direct-evaluation fallback rule.

use crate::expr::{Expr, Expression, Func};
use crate::fitter::PiecewisePlan;

use super::model::CostModel;
use super::profile::TimeDict;
use super::PerfError;

/// Outcome of selection: either the cheapest feasible plan or direct
/// evaluation of the expression with platform builtins.
#[derive(Debug, Clone, PartialEq)]
pub enum Decision {
    Plan {
        index: usize,
        k: usize,
        m: usize,
        predicted_cost: f64,
    },
    DirectEval {
        predicted_cost: f64,
    },
}

/// Predicted cost of evaluating the expression step by step: census counts
/// times unit costs. Errors when the expression uses an operation kind the
/// dictionary cannot price.
pub fn predict_direct_cost(td: &TimeDict, expr: &Expression) -> Result<f64, PerfError> {
    let census = expr.census();
    if census.other_nonlinear > 0 {
        let op = first_unpriced(expr.root()).unwrap_or("special function");
        return Err(PerfError::Unpriced { op: op.to_string() });
    }
    Ok(census.add as f64 * td.add
        + census.mul as f64 * td.mul
        + census.comparison as f64 * td.gt
        + census.div as f64 * td.reciprocal
        + census.exp as f64 * td.exp
        + census.log as f64 * td.log
        + census.sqrt as f64 * td.sqrt)
}

fn first_unpriced(e: &Expr) -> Option<&'static str> {
    match e {
        Expr::Num(_) | Expr::Var => None,
        Expr::Neg(a) => first_unpriced(a),
        Expr::Bin(_, a, b) => first_unpriced(a).or_else(|| first_unpriced(b)),
        Expr::Call(func, args) => {
            let own = match func {
                Func::Floor
                | Func::Erf
                | Func::NormalCdf
                | Func::LowerIncGamma { .. }
                | Func::UpperIncGamma { .. } => Some(func.name()),
                _ => None,
            };
            own.or_else(|| args.iter().find_map(first_unpriced))
        }
    }
}

/// Direct evaluation is viable only when the expression contains no `e^x`
/// step (overflow-prone), has fewer than three nonlinear steps (error
/// accumulation), and beats every candidate's predicted cost.
pub fn select_plan(
    candidates: &[PiecewisePlan],
    model: &CostModel,
    td: &TimeDict,
    expr: &Expression,
) -> Result<Decision, PerfError> {
    let census = expr.census();
    let direct_cost = if !census.contains_exp() && census.nonlinear_steps() < 3 {
        predict_direct_cost(td, expr).ok()
    } else {
        None
    };

    // deterministic argmin with (cost, m, k) tie-break
    let best = candidates
        .iter()
        .enumerate()
        .map(|(index, plan)| {
            let (k, m) = (plan.order(), plan.piece_count());
            (model.predict(k as u32, m as u32), m, k, index)
        })
        .min_by(|a, b| {
            (a.0, a.1, a.2)
                .partial_cmp(&(b.0, b.1, b.2))
                .expect("finite predicted costs")
        });

    match (best, direct_cost) {
        (Some((cost, ..)), Some(direct)) if direct < cost => Ok(Decision::DirectEval {
            predicted_cost: direct,
        }),
        (Some((cost, m, k, index)), _) => Ok(Decision::Plan {
            index,
            k,
            m,
            predicted_cost: cost,
        }),
        (None, Some(direct)) => Ok(Decision::DirectEval {
            predicted_cost: direct,
        }),
        (None, None) => Err(PerfError::NoFeasiblePlan {
            reason: "no candidate plans and the function is ineligible for direct evaluation"
                .into(),
        }),
    }
}
