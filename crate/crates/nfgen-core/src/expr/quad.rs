//! Adaptive Simpson quadrature with the standard error-halving criterion.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum QuadError {
    /// The integrand produced a non-finite sample.
    NonFinite(f64),
    /// The interval refinement hit the recursion limit before converging.
    DepthExceeded {
        lo: f64,
        hi: f64,
    },
    BadTolerance(f64),
}

impl fmt::Display for QuadError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuadError::NonFinite(x) => write!(out, "integrand is non-finite at {x}"),
            QuadError::DepthExceeded { lo, hi } => {
                write!(out, "quadrature failed to converge on [{lo}, {hi}]")
            }
            QuadError::BadTolerance(t) => write!(out, "tolerance must be positive, got {t}"),
        }
    }
}

impl std::error::Error for QuadError {}

const MAX_DEPTH: u32 = 48;

/// Integrate `f` over `[lo, hi]` to absolute tolerance `tol`. For smooth
/// integrands the result satisfies `|result - true| <= tol`; polynomials of
/// degree <= 3 come out exact up to rounding (Simpson exactness).
pub fn integrate_simpson<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, QuadError>
where
    F: Fn(f64) -> f64,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(QuadError::BadTolerance(tol));
    }
    if lo == hi {
        return Ok(0.0);
    }
    if lo > hi {
        return integrate_simpson(f, hi, lo, tol).map(|v| -v);
    }
    let sample = |x: f64| -> Result<f64, QuadError> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadError::NonFinite(x))
        }
    };
    let mid = 0.5 * (lo + hi);
    let (fa, fm, fb) = (sample(lo)?, sample(mid)?, sample(hi)?);
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    adaptive(&sample, lo, mid, hi, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn adaptive<F>(
    f: &F,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, QuadError>
where
    F: Fn(f64) -> Result<f64, QuadError>,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let split = left + right;
    if (split - whole).abs() <= 15.0 * tol || b - a <= f64::EPSILON * a.abs().max(b.abs()) {
        // Richardson extrapolation term of the composite rule
        return Ok(split + (split - whole) / 15.0);
    }
    if depth == 0 {
        return Err(QuadError::DepthExceeded { lo: a, hi: b });
    }
    let l = adaptive(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = adaptive(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Ok(l + r)
}
