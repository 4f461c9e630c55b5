//! The fitting pipeline: order constraining, single-piece fits, residual
//! boosting, recursive split with a merge pass, and the per-order candidate
//! sweep.

use std::time::Instant;

use rayon::prelude::*;

use crate::fxp::{linspace_fxp, power_table, FxpFormat, FxpValue};

use super::interp::{cheby_interpolate, lagrange_interpolate};
use super::piece::ScaledPolynomial;
use super::plan::PiecewisePlan;
use super::scale::{round_poly_unscaled, scale_poly};
use super::srd::srd;
use super::{FitConfig, FitError, TargetFn};

fn eval_target<F: TargetFn + ?Sized>(f: &F, x: f64) -> Result<f64, FitError> {
    match f(x) {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(v) => Err(FitError::Target {
            x,
            message: format!("non-finite value {v}"),
        }),
        Err(message) => Err(FitError::Target { x, message }),
    }
}

/// Largest safe polynomial order `k_bar <= k` such that `x^k_bar` neither
/// overflows nor underflows anywhere on the snapped domain grid.
///
/// Overflow: `k_O = floor((n-f-1) / log2 |x|_max)` when `|x|_max > 1`.
/// Underflow: a domain containing zero caps the order at 3 heuristically
/// (points arbitrarily close to zero always underflow eventually);
/// otherwise `k_U = floor(f / -log2 |x|_min)` when `|x|_min < 1`.
/// The result is verified against the actual power table and tightened if
/// truncation lands exactly on the clamp or zero boundary.
pub fn constrain_k(domain: (f64, f64), format: FxpFormat, k: u32) -> u32 {
    let (a, b) = domain;
    let x_max = a.abs().max(b.abs());
    let x_min = a.abs().min(b.abs());
    let spans_zero = a * b <= 0.0;

    let k_o = if x_max <= 1.0 {
        k
    } else {
        ((format.n() - format.f() - 1) as f64 / x_max.log2()).floor() as u32
    };
    let k_u = if spans_zero {
        3
    } else if x_min >= 1.0 {
        k
    } else {
        (format.f() as f64 / -x_min.log2()).floor() as u32
    };
    let mut k_bar = k.min(k_o).min(k_u).max(1);

    // Tighten against the actual truncating arithmetic: the ratio bounds
    // above are real-valued and can land exactly on the clamp or on zero.
    let snap = |x: f64| FxpValue::from_real(x, format).expect("finite domain endpoint");
    let extreme = if a.abs() >= b.abs() { snap(a) } else { snap(b) };
    let inner = if a.abs() >= b.abs() { snap(b) } else { snap(a) };
    let max_mantissa = format.max_mantissa();
    while k_bar > 1 {
        let powers = power_table(extreme, k_bar as usize);
        let clamps = powers
            .iter()
            .any(|p| p.mantissa().unsigned_abs() == max_mantissa as u128);
        let underflows = !spans_zero
            && !inner.is_zero()
            && power_table(inner, k_bar as usize)
                .iter()
                .any(|p| p.is_zero());
        if !clamps && !underflows {
            break;
        }
        k_bar -= 1;
    }
    k_bar
}

/// Fixed sample grid over one piece: snapped inputs, target values, and the
/// power table each accuracy check reuses.
struct PieceGrid {
    f_vals: Vec<f64>,
    powers: Vec<Vec<FxpValue>>,
}

impl PieceGrid {
    fn build<F: TargetFn + ?Sized>(
        f: &F,
        lo: f64,
        hi: f64,
        count: usize,
        order: usize,
        format: FxpFormat,
    ) -> Result<Self, FitError> {
        let xs = linspace_fxp(lo, hi, count, format)?;
        let f_vals = xs
            .iter()
            .map(|x| eval_target(f, x.to_f64()))
            .collect::<Result<Vec<_>, _>>()?;
        let powers = xs.iter().map(|&x| power_table(x, order)).collect();
        Ok(PieceGrid { f_vals, powers })
    }

    fn max_srd(&self, poly: &ScaledPolynomial, soft_zero: f64) -> f64 {
        self.f_vals
            .iter()
            .zip(&self.powers)
            .map(|(&fv, pw)| srd(fv, poly.eval_with_powers(pw).to_f64(), soft_zero))
            .fold(0.0, f64::max)
    }
}

fn sample_count(cfg: &FitConfig, lo: f64, hi: f64) -> usize {
    let steps = cfg.format.steps_in(lo, hi);
    if steps.is_finite() && steps < cfg.max_samples as f64 {
        (steps as usize).max(2)
    } else {
        cfg.max_samples
    }
}

/// All representable grid points inside `[lo, hi]`. Only used when the
/// interval holds at most a handful of them.
fn grid_points_in(lo: f64, hi: f64, format: FxpFormat) -> Vec<f64> {
    let scale = crate::fxp::exp2i(format.f() as i32);
    let max = format.max_mantissa();
    let lo_m = ((lo * scale).ceil() as i128).clamp(-max, max);
    let hi_m = ((hi * scale).floor() as i128).clamp(-max, max);
    (lo_m..=hi_m)
        .map(|m| {
            FxpValue::from_mantissa(m, format)
                .expect("clamped mantissa")
                .to_f64()
        })
        .collect()
}

/// Fit one feasible scaled polynomial of order at most `k` on `[lo, hi]`,
/// or report that the order cannot meet the accuracy target there.
///
/// Steps: constrain the order; interpolate in continuous space (Chebyshev,
/// or Lagrange over all representable points when the interval is
/// resolution-limited); scale coefficients onto the grid; residual-boost;
/// zero-pad to `k`; accept iff the max sampled SRD is below epsilon.
pub fn fit_one_piece<F: TargetFn + ?Sized>(
    f: &F,
    lo: f64,
    hi: f64,
    k: u32,
    cfg: &FitConfig,
) -> Result<Option<ScaledPolynomial>, FitError> {
    let format = cfg.format;
    let k_bar = constrain_k((lo, hi), format, k);
    let steps = format.steps_in(lo, hi);

    let coeffs = if steps > (k_bar + 1) as f64 {
        cheby_interpolate(|x| eval_target(f, x), lo, hi, k_bar as usize)?
    } else {
        let points = grid_points_in(lo, hi, format);
        if points.len() < 2 {
            return Ok(None); // interval shrank below the grid
        }
        lagrange_interpolate(|x| eval_target(f, x), &points)?
    };
    // Intervals so narrow that interpolation nodes collide in double
    // precision produce non-finite coefficients; no feasible fit here.
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Ok(None);
    }

    let mut poly = if cfg.scaling {
        scale_poly(&coeffs, (lo, hi), format)
    } else {
        round_poly_unscaled(&coeffs, format)
    };

    let grid = PieceGrid::build(f, lo, hi, sample_count(cfg, lo, hi), k as usize, format)?;
    if cfg.boosting {
        poly = boost_against_grid(poly, f, (lo, hi), cfg, &grid)?;
    }
    poly.pad_to(k as usize);

    if grid.max_srd(&poly, cfg.soft_zero) < cfg.epsilon {
        Ok(Some(poly))
    } else {
        Ok(None)
    }
}

/// Residual boosting: repeatedly fit a lower-order correction to the gap
/// between the target and the discretized polynomial (evaluated with
/// fixed-point semantics, so the residual captures rounding loss), keeping
/// a correction only when the max sampled SRD strictly decreases.
pub fn residual_boost<F: TargetFn + ?Sized>(
    poly: ScaledPolynomial,
    f: &F,
    domain: (f64, f64),
    cfg: &FitConfig,
) -> Result<ScaledPolynomial, FitError> {
    let grid = PieceGrid::build(
        f,
        domain.0,
        domain.1,
        sample_count(cfg, domain.0, domain.1),
        poly.order(),
        cfg.format,
    )?;
    boost_against_grid(poly, f, domain, cfg, &grid)
}

fn boost_against_grid<F: TargetFn + ?Sized>(
    poly: ScaledPolynomial,
    f: &F,
    domain: (f64, f64),
    cfg: &FitConfig,
    grid: &PieceGrid,
) -> Result<ScaledPolynomial, FitError> {
    let format = cfg.format;
    let order = poly.order();
    let mut best = poly;
    let mut best_srd = grid.max_srd(&best, cfg.soft_zero);
    for k_prime in (0..order).rev() {
        let current = &best;
        let residual = |x: f64| -> Result<f64, FitError> {
            let fx = eval_target(f, x)?;
            let snapped = FxpValue::from_real(x, format)?;
            Ok(fx - current.eval_fxp(snapped).to_f64())
        };
        let correction = match cheby_interpolate(residual, domain.0, domain.1, k_prime) {
            Ok(c) => c,
            // A residual that fails to evaluate just means no boost here.
            Err(FitError::Target { .. }) => continue,
            Err(e) => return Err(e),
        };
        let candidate = merge_boost(&best, &correction, domain, cfg);
        let candidate_srd = grid.max_srd(&candidate, cfg.soft_zero);
        if candidate_srd < best_srd {
            best = candidate;
            best_srd = candidate_srd;
        }
    }
    Ok(best)
}

/// Merge a continuous correction into the low orders: sum `c_hat*s_hat` with
/// the correction coefficient in continuous space, rescale that prefix, and
/// keep the higher-order scaled terms unchanged.
fn merge_boost(
    base: &ScaledPolynomial,
    correction: &[f64],
    domain: (f64, f64),
    cfg: &FitConfig,
) -> ScaledPolynomial {
    let merged: Vec<f64> = correction
        .iter()
        .enumerate()
        .map(|(i, &r)| base.coeffs()[i].to_f64() * base.scalers()[i].to_f64() + r)
        .collect();
    let low = if cfg.scaling {
        scale_poly(&merged, domain, cfg.format)
    } else {
        round_poly_unscaled(&merged, cfg.format)
    };
    let mut coeffs = low.coeffs().to_vec();
    let mut scalers = low.scalers().to_vec();
    coeffs.extend_from_slice(&base.coeffs()[correction.len()..]);
    scalers.extend_from_slice(&base.scalers()[correction.len()..]);
    ScaledPolynomial::from_pairs(coeffs, scalers)
}

/// Work counters for one piecewise fit: how often the single-piece fitter
/// ran and how often it came back infeasible (forcing a split or blocking
/// a merge). The ablation checks compare these across configurations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FitStats {
    pub one_piece_attempts: usize,
    pub one_piece_failures: usize,
}

/// Split budget per order: a feasible plan needs at most a few failed
/// attempts per final piece, while an infeasible order can otherwise grow
/// an exponential tree of coin-flip splits near the resolution limit.
fn split_budget(cfg: &FitConfig) -> usize {
    8 * cfg.m_max
}

/// Recursive bisection plus a merge pass. Returns `None` when no feasible
/// plan exists within the piece budget.
pub fn fit_piecewise<F: TargetFn + ?Sized>(
    f: &F,
    cfg: &FitConfig,
    k: u32,
) -> Result<Option<PiecewisePlan>, FitError> {
    fit_piecewise_with_stats(f, cfg, k).map(|(plan, _)| plan)
}

pub fn fit_piecewise_with_stats<F: TargetFn + ?Sized>(
    f: &F,
    cfg: &FitConfig,
    k: u32,
) -> Result<(Option<PiecewisePlan>, FitStats), FitError> {
    cfg.validate()?;
    let (a, b) = cfg.domain;
    let mut stats = FitStats::default();
    let mut pieces: Vec<(f64, f64, ScaledPolynomial)> = Vec::new();
    if !split_fit(f, cfg, k, a, b, &mut pieces, &mut stats)? {
        return Ok((None, stats));
    }

    // Merge pass: retry adjacent pairs on their combined range, staying on
    // the same index after a success so chains of merges collapse greedily.
    let mut i = 0;
    while i + 1 < pieces.len() {
        let lo = pieces[i].0;
        let hi = pieces[i + 1].1;
        stats.one_piece_attempts += 1;
        match fit_one_piece(f, lo, hi, k, cfg)? {
            Some(merged) => {
                pieces[i] = (lo, hi, merged);
                pieces.remove(i + 1);
            }
            None => {
                stats.one_piece_failures += 1;
                i += 1;
            }
        }
    }

    build_plan(pieces, cfg, k).map(|plan| (plan, stats))
}

fn split_fit<F: TargetFn + ?Sized>(
    f: &F,
    cfg: &FitConfig,
    k: u32,
    lo: f64,
    hi: f64,
    pieces: &mut Vec<(f64, f64, ScaledPolynomial)>,
    stats: &mut FitStats,
) -> Result<bool, FitError> {
    if pieces.len() >= cfg.m_max || stats.one_piece_failures > split_budget(cfg) {
        return Ok(false); // piece or split budget exhausted for this order
    }
    stats.one_piece_attempts += 1;
    if let Some(p) = fit_one_piece(f, lo, hi, k, cfg)? {
        pieces.push((lo, hi, p));
        return Ok(true);
    }
    stats.one_piece_failures += 1;
    if hi - lo < 2.0 * cfg.format.resolution() {
        return Ok(false); // below resolution with no Lagrange solution
    }
    let mid = 0.5 * (lo + hi);
    Ok(split_fit(f, cfg, k, lo, mid, pieces, stats)?
        && split_fit(f, cfg, k, mid, hi, pieces, stats)?)
}

fn build_plan(
    pieces: Vec<(f64, f64, ScaledPolynomial)>,
    cfg: &FitConfig,
    k: u32,
) -> Result<Option<PiecewisePlan>, FitError> {
    let format = cfg.format;
    let end = FxpValue::from_real(cfg.domain.1, format)?;
    let mut breaks = Vec::with_capacity(pieces.len());
    let mut polys = Vec::with_capacity(pieces.len());
    for (lo, _, poly) in pieces {
        let mut snapped = FxpValue::from_real(lo, format)?;
        // Resolution-width pieces can snap onto the previous break; nudge by
        // one grid step to keep breaks strictly increasing.
        if let Some(prev) = breaks.last() {
            let prev: &FxpValue = prev;
            if snapped.mantissa() <= prev.mantissa() {
                snapped = FxpValue::from_mantissa(prev.mantissa() + 1, format)?;
            }
        }
        if snapped.mantissa() >= end.mantissa() {
            return Err(FitError::BadPlan(
                "breakpoints collapsed onto the domain end".into(),
            ));
        }
        breaks.push(snapped);
        polys.push(poly);
    }
    PiecewisePlan::new(format, breaks, end, polys, k as usize, cfg.defaults).map(Some)
}

/// Outcome of one order in the candidate sweep.
#[derive(Debug, Clone)]
pub struct KFitResult {
    pub k: u32,
    pub plan: Option<PiecewisePlan>,
    pub error: Option<String>,
    pub seconds: f64,
}

impl KFitResult {
    pub fn failed(&self) -> bool {
        self.plan.is_none()
    }
}

/// Fit a plan for every order in the configured range, in parallel; results
/// come back ordered by `k`. An empty candidate set is a valid outcome.
pub fn fit_candidates<F: TargetFn + ?Sized>(f: &F, cfg: &FitConfig) -> Vec<KFitResult> {
    let orders: Vec<u32> = (cfg.k_range.0..=cfg.k_range.1).collect();
    orders
        .into_par_iter()
        .map(|k| {
            let start = Instant::now();
            let (plan, error) = match fit_piecewise(f, cfg, k) {
                Ok(plan) => (plan, None),
                Err(e) => (None, Some(e.to_string())),
            };
            KFitResult {
                k,
                plan,
                error,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect()
}
