//! Static operation census: what the target platform would execute if the
//! expression were evaluated step by step on secret values. Constant
//! subtrees fold to plaintext and contribute nothing.

use super::{BinOp, Expr, Func};

/// Counts per operation kind. Comparisons count as nonlinear steps (abs,
/// sign, min/max and branches all lower to secure comparisons).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCensus {
    pub add: u64,
    pub mul: u64,
    pub div: u64,
    pub comparison: u64,
    pub exp: u64,
    pub log: u64,
    pub sqrt: u64,
    pub other_nonlinear: u64,
}

impl OpCensus {
    /// Any `e^x` anywhere disqualifies direct evaluation (overflow-prone).
    pub fn contains_exp(&self) -> bool {
        self.exp > 0
    }

    pub fn nonlinear_steps(&self) -> u64 {
        self.div + self.comparison + self.exp + self.log + self.sqrt + self.other_nonlinear
    }
}

pub fn census(e: &Expr) -> OpCensus {
    let mut counts = OpCensus::default();
    walk(e, &mut counts);
    counts
}

fn walk(e: &Expr, counts: &mut OpCensus) {
    if e.is_const() {
        return;
    }
    match e {
        Expr::Num(_) | Expr::Var => {}
        Expr::Neg(a) => {
            // negation is a plaintext-scalar multiply
            counts.mul += 1;
            walk(a, counts);
        }
        Expr::Bin(op, a, b) => {
            match op {
                BinOp::Add | BinOp::Sub => counts.add += 1,
                BinOp::Mul => counts.mul += 1,
                // dividing by a plaintext constant is a scalar multiply;
                // a secret denominator needs a reciprocal
                BinOp::Div => {
                    if b.is_const() {
                        counts.mul += 1;
                    } else {
                        counts.div += 1;
                    }
                }
                BinOp::Pow => pow_census(b, counts),
            }
            walk(a, counts);
            walk(b, counts);
        }
        Expr::Call(func, args) => {
            match func {
                Func::Exp => counts.exp += 1,
                Func::Ln | Func::Log2 => counts.log += 1,
                Func::Sqrt => counts.sqrt += 1,
                // |x| = sign bit comparison plus a sign multiply
                Func::Abs => {
                    counts.comparison += 1;
                    counts.mul += 1;
                }
                Func::Sign | Func::Min | Func::Max | Func::Ite => counts.comparison += 1,
                // tanh composes two e^x and one reciprocal
                Func::Tanh => {
                    counts.exp += 2;
                    counts.div += 1;
                }
                // e^(-x^2/2) / sqrt(2 pi): one exp, square and plaintext scale
                Func::NormalPdf => {
                    counts.exp += 1;
                    counts.mul += 2;
                }
                Func::Pow => {
                    pow_census(&args[1], counts);
                }
                Func::Floor
                | Func::Erf
                | Func::NormalCdf
                | Func::LowerIncGamma { .. }
                | Func::UpperIncGamma { .. } => {
                    counts.other_nonlinear += 1;
                }
            }
            for a in args {
                walk(a, counts);
            }
        }
    }
}

/// `^` with a constant integer exponent lowers to repeated multiplication;
/// anything else routes through exp/ln.
fn pow_census(exponent: &Expr, counts: &mut OpCensus) {
    let folded = if exponent.is_const() {
        super::eval::eval(exponent, f64::NAN, &super::EvalContext::default()).ok()
    } else {
        None
    };
    if let Some(v) = folded {
        if v.fract() == 0.0 && v.abs() <= 64.0 {
            let e = v.abs() as u64;
            counts.mul += e.saturating_sub(1);
            if v < 0.0 {
                counts.div += 1;
            }
            return;
        }
    }
    counts.exp += 1;
    counts.log += 1;
}
