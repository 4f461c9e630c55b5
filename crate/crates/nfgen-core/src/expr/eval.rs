//! Double-precision evaluation of expression trees.

use std::fmt;

use super::quad::integrate_simpson;
use super::{BinOp, Expr, Func};

const SQRT_2PI: f64 = 2.5066282746310002;

/// Evaluation settings. Integral-defined builtins (erf, normal_cdf, the
/// incomplete gammas) run adaptive quadrature at `quad_tol`; the fitter
/// lowers this to a fraction of the accuracy target so quadrature error is
/// negligible against fitting error.
#[derive(Debug, Clone)]
pub struct EvalContext {
    pub quad_tol: f64,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext { quad_tol: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalError {
    /// Division by zero, log/sqrt of a negative value, or a non-finite
    /// result; carries the evaluation point.
    Domain { what: String, x: f64 },
    /// Quadrature for an integral-defined builtin did not converge.
    Convergence { what: String, x: f64 },
}

impl fmt::Display for EvalError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Domain { what, x } => write!(out, "domain error at x = {x}: {what}"),
            EvalError::Convergence { what, x } => {
                write!(out, "convergence failure at x = {x}: {what}")
            }
        }
    }
}

impl std::error::Error for EvalError {}

fn domain(what: impl Into<String>, x: f64) -> EvalError {
    EvalError::Domain {
        what: what.into(),
        x,
    }
}

pub fn eval(e: &Expr, x: f64, ctx: &EvalContext) -> Result<f64, EvalError> {
    let v = eval_inner(e, x, ctx)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(domain("non-finite result", x))
    }
}

fn eval_inner(e: &Expr, x: f64, ctx: &EvalContext) -> Result<f64, EvalError> {
    match e {
        Expr::Num(v) => Ok(*v),
        Expr::Var => Ok(x),
        Expr::Neg(a) => Ok(-eval(a, x, ctx)?),
        Expr::Bin(op, a, b) => {
            let lhs = eval(a, x, ctx)?;
            let rhs = eval(b, x, ctx)?;
            match op {
                BinOp::Add => Ok(lhs + rhs),
                BinOp::Sub => Ok(lhs - rhs),
                BinOp::Mul => Ok(lhs * rhs),
                BinOp::Div => {
                    if rhs == 0.0 {
                        Err(domain("division by zero", x))
                    } else {
                        Ok(lhs / rhs)
                    }
                }
                BinOp::Pow => pow(lhs, rhs, x),
            }
        }
        Expr::Call(func, args) => call(func, args, x, ctx),
    }
}

/// Integer exponents go through repeated multiplication (negative bases
/// stay legal); anything else routes through exp/ln.
fn pow(base: f64, exponent: f64, x: f64) -> Result<f64, EvalError> {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        if base == 0.0 && exponent < 0.0 {
            return Err(domain("zero raised to a negative power", x));
        }
        return Ok(base.powi(exponent as i32));
    }
    if base < 0.0 {
        return Err(domain("negative base with non-integer exponent", x));
    }
    if base == 0.0 && exponent < 0.0 {
        return Err(domain("zero raised to a negative power", x));
    }
    Ok(base.powf(exponent))
}

fn call(func: &Func, args: &[Expr], x: f64, ctx: &EvalContext) -> Result<f64, EvalError> {
    let arg = |i: usize| eval(&args[i], x, ctx);
    match func {
        Func::Exp => Ok(arg(0)?.exp()),
        Func::Ln => {
            let v = arg(0)?;
            if v <= 0.0 {
                Err(domain("log of non-positive value", x))
            } else {
                Ok(v.ln())
            }
        }
        Func::Log2 => {
            let v = arg(0)?;
            if v <= 0.0 {
                Err(domain("log of non-positive value", x))
            } else {
                Ok(v.log2())
            }
        }
        Func::Sqrt => {
            let v = arg(0)?;
            if v < 0.0 {
                Err(domain("sqrt of negative value", x))
            } else {
                Ok(v.sqrt())
            }
        }
        Func::Abs => Ok(arg(0)?.abs()),
        Func::Tanh => Ok(arg(0)?.tanh()),
        Func::Sign => {
            let v = arg(0)?;
            Ok(if v > 0.0 {
                1.0
            } else if v < 0.0 {
                -1.0
            } else {
                0.0
            })
        }
        Func::Floor => Ok(arg(0)?.floor()),
        Func::Min => Ok(arg(0)?.min(arg(1)?)),
        Func::Max => Ok(arg(0)?.max(arg(1)?)),
        Func::Pow => pow(arg(0)?, arg(1)?, x),
        Func::Ite => {
            // sign-based select: condition > 0 picks the first branch
            if arg(0)? > 0.0 {
                arg(1)
            } else {
                arg(2)
            }
        }
        Func::NormalPdf => {
            let v = arg(0)?;
            Ok((-0.5 * v * v).exp() / SQRT_2PI)
        }
        Func::Erf => {
            let v = arg(0)?;
            let integral = quadrature(|t| (-t * t).exp(), 0.0, v, ctx.quad_tol, "erf", x)?;
            Ok(2.0 / std::f64::consts::PI.sqrt() * integral)
        }
        Func::NormalCdf => {
            let v = arg(0)?;
            let integral = quadrature(
                |t| (-0.5 * t * t).exp(),
                0.0,
                v,
                ctx.quad_tol,
                "normal_cdf",
                x,
            )?;
            Ok(0.5 + integral / SQRT_2PI)
        }
        Func::LowerIncGamma { z } => {
            let v = arg(0)?;
            if v < 0.0 {
                return Err(domain("lower_inc_gamma of negative value", x));
            }
            let z = *z;
            gamma_integral(z, 0.0, v, ctx.quad_tol, "lower_inc_gamma", x)
        }
        Func::UpperIncGamma { z } => {
            let v = arg(0)?;
            if v < 0.0 {
                return Err(domain("upper_inc_gamma of negative value", x));
            }
            // past v + 120 the e^-t tail is far below any tolerance used here
            let z = *z;
            gamma_integral(z, v, v + 120.0, ctx.quad_tol, "upper_inc_gamma", x)
        }
    }
}

fn quadrature<F>(f: F, lo: f64, hi: f64, tol: f64, what: &str, x: f64) -> Result<f64, EvalError>
where
    F: Fn(f64) -> f64,
{
    integrate_simpson(f, lo, hi, tol).map_err(|e| EvalError::Convergence {
        what: format!("{what}: {e}"),
        x,
    })
}

/// `t^(z-1) e^-t` integrated over `[lo, hi]` in geometrically widening
/// panels. The integrand's mass sits in a band the plain adaptive rule can
/// step over entirely when the interval is long.
fn gamma_integral(
    z: f64,
    lo: f64,
    hi: f64,
    tol: f64,
    what: &str,
    x: f64,
) -> Result<f64, EvalError> {
    let integrand = |t: f64| t.powf(z - 1.0) * (-t).exp();
    let mut total = 0.0;
    let mut left = lo;
    let mut width = 2.0;
    while left < hi {
        let right = (left + width).min(hi);
        total += quadrature(integrand, left, right, tol / 8.0, what, x)?;
        left = right;
        width *= 2.0;
    }
    Ok(total)
}
