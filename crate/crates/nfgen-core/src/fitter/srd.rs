//! The soft relative distance and its sampled-to-true diagnostic bound.

/// Soft relative distance between a reference value and an approximation:
/// relative error when `|reference|` exceeds the soft zero, absolute error
/// otherwise. The soft zero keeps the metric finite near roots of the
/// target function.
pub fn srd(reference: f64, approx: f64, soft_zero: f64) -> f64 {
    let diff = (reference - approx).abs();
    if reference.abs() > soft_zero {
        diff / reference.abs()
    } else {
        diff
    }
}

/// Diagnostic upper bound on the true maximum SRD given that the sampled
/// maximum passed at `epsilon`, for Lipschitz constants of the target and
/// the fitted polynomial and sampling interval `r`. `f_abs` is the smallest
/// target magnitude above the soft zero on the region of interest.
pub fn srd_bound_report(
    lipschitz_target: f64,
    lipschitz_poly: f64,
    r: f64,
    epsilon: f64,
    soft_zero: f64,
    f_abs: f64,
) -> f64 {
    let c = lipschitz_target + lipschitz_poly + epsilon * lipschitz_target;
    if f_abs > soft_zero {
        c * r / f_abs + epsilon
    } else {
        c * r + epsilon
    }
}
