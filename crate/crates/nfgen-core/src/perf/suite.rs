//! Profiling-suite generation: synthetic plans covering the `(k, m)` grid,
//! for timing on a real platform or on the simulator's cost accountant.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::fitter::{PiecewisePlan, ScaledPolynomial};
use crate::fxp::{FxpFormat, FxpValue};
use crate::oppe::{OpKind, OpTrace};

use super::profile::TimeDict;

/// One profiling configuration.
#[derive(Debug, Clone)]
pub struct SamplePlan {
    pub k: u32,
    pub m: u32,
    pub plan: PiecewisePlan,
}

/// A structurally valid plan with random parameters; evaluation time
/// depends only on `(k, m)`, so the values are immaterial.
pub fn synthetic_plan(rng: &mut ChaCha8Rng, k: u32, m: u32, format: FxpFormat) -> PiecewisePlan {
    let step_cap = (format.max_value() / (m as f64 + 2.0)).min(16.0);
    let mut edge = -(step_cap * (m as f64 + 1.0) / 2.0);
    let mut cuts = Vec::with_capacity(m as usize + 1);
    for _ in 0..=m {
        cuts.push(FxpValue::from_real(edge, format).expect("finite breakpoint"));
        edge += rng.gen_range(step_cap * 0.5..step_cap);
    }
    let breaks = cuts[..m as usize].to_vec();
    let end = cuts[m as usize];

    let x_char = cuts[0].to_f64().abs().max(end.to_f64().abs());
    let pieces = (0..m)
        .map(|_| {
            let (coeffs, scalers) = (0..=k)
                .map(|i| {
                    // keep c * x_char^i inside range so the plan validates
                    let bound = (format.max_value() / x_char.powi(i as i32)).min(4.0);
                    let c = rng.gen_range(-bound..bound);
                    let s = (2.0f64).powi(-rng.gen_range(0..(format.f() as i32 / 2)));
                    (
                        FxpValue::from_real(c, format).expect("finite coefficient"),
                        FxpValue::from_real(s, format).expect("finite scaler"),
                    )
                })
                .unzip();
            ScaledPolynomial::from_pairs(coeffs, scalers)
        })
        .collect();

    PiecewisePlan::new(format, breaks, end, pieces, k as usize, (0.0, 0.0))
        .expect("synthetic plan satisfies the plan invariants")
}

/// Synthetic plans covering `k_range x m_range`, repeated so the total
/// sample count lands near `target_total` (2000 by default).
pub fn generate_profiling_suite(
    k_range: (u32, u32),
    m_range: (u32, u32),
    repeats: Option<u32>,
    seed: u64,
) -> Vec<SamplePlan> {
    assert!(k_range.0 >= 1 && k_range.0 <= k_range.1, "bad order range");
    assert!(m_range.0 >= 1 && m_range.0 <= m_range.1, "bad piece range");
    let grid = ((k_range.1 - k_range.0 + 1) * (m_range.1 - m_range.0 + 1)) as f64;
    let repeats = repeats.unwrap_or_else(|| ((2000.0 / grid).round() as u32).max(1));
    let format = FxpFormat::new(96, 48).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for k in k_range.0..=k_range.1 {
        for m in m_range.0..=m_range.1 {
            for _ in 0..repeats {
                out.push(SamplePlan {
                    k,
                    m,
                    plan: synthetic_plan(&mut rng, k, m, format),
                });
            }
        }
    }
    out
}

/// The simulator's cost accountant: price a trace against a time
/// dictionary, each vectorized record costing `unit * len / 100` (units
/// are per 100-element vector op).
pub fn trace_cost(trace: &OpTrace, td: &TimeDict) -> f64 {
    trace
        .records()
        .iter()
        .map(|r| {
            let unit = match r.kind {
                OpKind::Add => td.add,
                OpKind::MulCc | OpKind::MulPc => td.mul,
                OpKind::Gt => td.gt,
            };
            unit * r.len as f64 / 100.0
        })
        .sum()
}
