//! Oblivious piecewise polynomial evaluation over simulated ciphertexts:
//! a fixed, input-independent sequence of vectorized ADD/MUL/GT steps.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::fitter::{PiecewisePlan, ScaledPolynomial};
use crate::fxp::{FxpValue, Rounding};

use super::trace::{OpKind, OpTrace, Stage};

/// Truncation behaviour of ciphertext multiplications.
#[derive(Debug)]
#[allow(clippy::large_enum_variant)]
pub enum TruncPolicy {
    /// Bit-exact deterministic truncation.
    Deterministic(Rounding),
    /// Round the dropped fraction up with probability equal to it, as
    /// probabilistic-truncation platforms do; seeded for reproducibility.
    Probabilistic(ChaCha8Rng),
}

/// Whether mask selection runs before the power table or after. The two
/// sub-sequences touch disjoint data, so results are bit-identical; only
/// the trace order differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalOrder {
    #[default]
    MaskFirst,
    PowersFirst,
}

/// One evaluation context: owns the active trace and the arithmetic modes.
/// Contexts are independent; batch evaluation gives each worker its own.
#[derive(Debug)]
pub struct SimContext {
    trace: OpTrace,
    trunc: TruncPolicy,
    order: EvalOrder,
}

impl Default for SimContext {
    fn default() -> Self {
        SimContext::new()
    }
}

impl SimContext {
    pub fn new() -> Self {
        SimContext {
            trace: OpTrace::default(),
            trunc: TruncPolicy::Deterministic(Rounding::Floor),
            order: EvalOrder::MaskFirst,
        }
    }

    pub fn with_probabilistic_truncation(seed: u64) -> Self {
        SimContext {
            trace: OpTrace::default(),
            trunc: TruncPolicy::Probabilistic(ChaCha8Rng::seed_from_u64(seed)),
            order: EvalOrder::MaskFirst,
        }
    }

    pub fn with_order(mut self, order: EvalOrder) -> Self {
        self.order = order;
        self
    }

    pub fn trace(&self) -> &OpTrace {
        &self.trace
    }

    pub fn take_trace(&mut self) -> OpTrace {
        std::mem::take(&mut self.trace)
    }

    fn mul_cipher(&mut self, a: FxpValue, b: FxpValue) -> FxpValue {
        match &mut self.trunc {
            TruncPolicy::Deterministic(_) => a.mul(b),
            TruncPolicy::Probabilistic(rng) => {
                let (floored, remainder) = a.mul_with_remainder(b);
                if remainder == 0 {
                    return floored;
                }
                let f = a.format().f();
                let draw = uniform_below(rng, 1u128 << f);
                if draw < remainder {
                    floored.add(FxpValue::from_mantissa(1, a.format()).expect("one ulp"))
                } else {
                    floored
                }
            }
        }
    }

    /// `[1, x, x^2, ..., x^k]` by doubling: one vectorized ciphertext MUL
    /// round per `shift = 1, 2, 4, ... <= k`.
    pub fn calculate_kx(&mut self, x: FxpValue, k: usize) -> Vec<FxpValue> {
        let mut res = Vec::with_capacity(k + 1);
        res.push(FxpValue::one(x.format()));
        res.extend(std::iter::repeat_n(x, k));
        let mut shift = 1;
        while shift <= k {
            self.trace.push(OpKind::MulCc, k + 1 - shift, Stage::Powers);
            for i in (shift..=k).rev() {
                res[i] = self.mul_cipher(res[i], res[i - shift]);
            }
            shift *= 2;
        }
        res
    }

    /// Piece-membership mask: `comp_j = (x >= w_j)`, then
    /// `mask_j = comp_j - comp_{j+1}` with `comp_m = 0`. Exactly one entry
    /// is 1 for any `x >= w_0`, all entries are 0 below `w_0`.
    pub fn piece_mask(&mut self, x: FxpValue, breaks: &[FxpValue]) -> Vec<FxpValue> {
        let m = breaks.len();
        self.trace.push(OpKind::Gt, m, Stage::Select);
        let comp: Vec<FxpValue> = breaks.iter().map(|&w| x.ge(w)).collect();
        self.trace.push(OpKind::Add, m, Stage::Select);
        (0..m)
            .map(|j| {
                if j + 1 < m {
                    comp[j].sub(comp[j + 1])
                } else {
                    comp[j]
                }
            })
            .collect()
    }

    /// Evaluate a finalized plan at a secret input. The execution path is
    /// a fixed function of `(k, m)`: one vectorized GT, one ADD, `2(k+1)`
    /// plaintext-ciphertext MUL rounds of length `m`, the power-table
    /// rounds, and two combine MULs of length `k+1`.
    pub fn oppe_eval(&mut self, plan: &PiecewisePlan, x: FxpValue) -> FxpValue {
        assert!(
            plan.is_finalized(),
            "oppe_eval needs a finalized plan (run finalize_plan first)"
        );
        assert_eq!(
            x.format(),
            plan.format(),
            "input format does not match the plan"
        );
        let k = plan.order();

        let (mask, xterm) = match self.order {
            EvalOrder::MaskFirst => {
                let mask = self.piece_mask(x, plan.breaks());
                let xterm = self.calculate_kx(x, k);
                (mask, xterm)
            }
            EvalOrder::PowersFirst => {
                let xterm = self.calculate_kx(x, k);
                let mask = self.piece_mask(x, plan.breaks());
                (mask, xterm)
            }
        };

        let coeff = self.select_row(&mask, plan, |p, i| p.coeffs()[i]);
        let scaler = self.select_row(&mask, plan, |p, i| p.scalers()[i]);

        // coefficient times power strictly before times scaler
        let format = plan.format();
        self.trace.push(OpKind::MulCc, k + 1, Stage::Combine);
        let partial: Vec<FxpValue> = (0..=k)
            .map(|i| self.mul_cipher(coeff[i], xterm[i]))
            .collect();
        self.trace.push(OpKind::MulCc, k + 1, Stage::Combine);
        let terms: Vec<FxpValue> = (0..=k)
            .map(|i| self.mul_cipher(partial[i], scaler[i]))
            .collect();
        if k > 0 {
            self.trace.push(OpKind::Add, k, Stage::Combine);
        }
        terms
            .into_iter()
            .fold(FxpValue::zero(format), |acc, t| acc.add(t))
    }

    /// Oblivious selection of per-order parameters: for each order `i`, one
    /// vectorized plaintext-ciphertext MUL of the mask against column `i`,
    /// summed by ADD.
    fn select_row(
        &mut self,
        mask: &[FxpValue],
        plan: &PiecewisePlan,
        column: impl Fn(&ScaledPolynomial, usize) -> FxpValue,
    ) -> Vec<FxpValue> {
        let m = plan.piece_count();
        let format = plan.format();
        (0..=plan.order())
            .map(|i| {
                self.trace.push(OpKind::MulPc, m, Stage::Select);
                let products: Vec<FxpValue> = plan
                    .pieces()
                    .iter()
                    .zip(mask)
                    .map(|(p, &g)| self.mul_cipher(g, column(p, i)))
                    .collect();
                if m > 1 {
                    self.trace.push(OpKind::Add, m - 1, Stage::Select);
                }
                products
                    .into_iter()
                    .fold(FxpValue::zero(format), |acc, v| acc.add(v))
            })
            .collect()
    }
}

fn uniform_below(rng: &mut ChaCha8Rng, bound: u128) -> u128 {
    // bound is a power of two (2^f), so masking is unbiased
    let hi = (rng.next_u64() as u128) << 64;
    (hi | rng.next_u64() as u128) & (bound - 1)
}

/// Install the out-of-domain default pieces: a constant `default_left`
/// piece from the most negative representable value up to `a`, and a
/// constant `default_right` piece from `b` on. Idempotent.
pub fn finalize_plan(plan: &PiecewisePlan) -> PiecewisePlan {
    if plan.is_finalized() {
        return plan.clone();
    }
    let format = plan.format();
    let order = plan.order();
    let (left, right) = plan.defaults();

    let mut breaks = Vec::with_capacity(plan.piece_count() + 2);
    breaks.push(FxpValue::min_representable(format));
    breaks.extend_from_slice(plan.breaks());
    breaks.push(plan.end());

    let mut pieces = Vec::with_capacity(plan.piece_count() + 2);
    pieces.push(ScaledPolynomial::constant(left, order, format));
    pieces.extend_from_slice(plan.pieces());
    pieces.push(ScaledPolynomial::constant(right, order, format));

    PiecewisePlan::new(
        format,
        breaks,
        FxpValue::max_representable(format),
        pieces,
        order,
        plan.defaults(),
    )
    .expect("finalizing a valid plan keeps it valid")
}

/// Evaluate with a fresh deterministic context.
pub fn oppe_eval(plan: &PiecewisePlan, x: FxpValue) -> FxpValue {
    SimContext::new().oppe_eval(plan, x)
}

/// The full ordered trace of one evaluation.
pub fn trace_of(plan: &PiecewisePlan, x: FxpValue) -> OpTrace {
    let mut ctx = SimContext::new();
    ctx.oppe_eval(plan, x);
    ctx.take_trace()
}

/// Batch evaluation: inputs are partitioned across workers, each with its
/// own context; results and traces come back in batch index order.
pub fn oppe_eval_batch(plan: &PiecewisePlan, inputs: &[FxpValue]) -> Vec<(FxpValue, OpTrace)> {
    inputs
        .par_iter()
        .map(|&x| {
            let mut ctx = SimContext::new();
            let v = ctx.oppe_eval(plan, x);
            (v, ctx.take_trace())
        })
        .collect()
}
