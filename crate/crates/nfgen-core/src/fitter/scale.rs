//! Coefficient scaling: each continuous coefficient becomes a pair
//! `(c_hat, s_hat)` with `c_hat * s_hat ~ c`, where the magnified `c_hat`
//! preserves significant bits that plain grid rounding would discard and the
//! scaling factor `s_hat <= 1` restores magnitude at evaluation time.

use crate::fxp::{exp2i, FxpFormat, FxpValue};

use super::piece::ScaledPolynomial;

/// Scale one coefficient of the `i`-th order term. `x_char` is the domain
/// point most likely to overflow, `max(|a|, |b|)`.
///
/// The factor is the smallest grid value satisfying all three feasibility
/// requirements: `s_hat >= 2^-f` (itself representable and positive),
/// `|c_hat| * x_char^i <= 2^(n-f-1)` (the magnified term cannot overflow),
/// and `|c_hat| <= maxval` (the magnified coefficient is itself on the
/// grid unclamped), capped at 1 so it never shrinks the coefficient.
pub fn scale_c(c: f64, format: FxpFormat, i: u32, x_char: f64) -> (FxpValue, FxpValue) {
    let one = FxpValue::one(format);
    if c == 0.0 {
        return (FxpValue::zero(format), one);
    }
    let range_top = exp2i(format.n() as i32 - format.f() as i32 - 1);
    let s_cuf = format.resolution();
    let s_cof = c.abs() * x_char.powi(i as i32) / range_top;
    let s_rep = c.abs() / format.max_value();
    let s_raw = s_cuf.max(s_cof).max(s_rep).min(1.0);
    // Round the factor up to the grid so the bounds above keep holding.
    let mut s_hat = FxpValue::from_real_ceil(s_raw, format).expect("scaling factor is finite");
    loop {
        let c_hat =
            FxpValue::from_real(c / s_hat.to_f64(), format).expect("scaled coefficient is finite");
        // The closed formula can land the magnified coefficient exactly on
        // the clamp after rounding; grow the factor one grid step until the
        // coefficient is strictly inside the representable range.
        if c_hat.mantissa().unsigned_abs() < format.max_mantissa() as u128 || s_hat.to_f64() >= 1.0
        {
            return (c_hat, s_hat);
        }
        s_hat =
            FxpValue::from_mantissa(s_hat.mantissa() + 1, format).expect("scaler stays on grid");
    }
}

/// Apply [`scale_c`] to every coefficient with the shared `x_char`.
pub fn scale_poly(coeffs: &[f64], domain: (f64, f64), format: FxpFormat) -> ScaledPolynomial {
    let x_char = domain.0.abs().max(domain.1.abs());
    let (c_hats, s_hats) = coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| scale_c(c, format, i as u32, x_char))
        .unzip();
    ScaledPolynomial::from_pairs(c_hats, s_hats)
}

/// Grid rounding without a scaling factor (`s_hat` forced to 1); used by the
/// ablation mode that disables scaling.
pub fn round_poly_unscaled(coeffs: &[f64], format: FxpFormat) -> ScaledPolynomial {
    let one = FxpValue::one(format);
    let (c_hats, s_hats) = coeffs
        .iter()
        .map(|&c| {
            (
                FxpValue::from_real(c, format).expect("finite coefficient"),
                one,
            )
        })
        .unzip();
    ScaledPolynomial::from_pairs(c_hats, s_hats)
}
