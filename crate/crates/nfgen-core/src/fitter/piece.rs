//! One piece of a piecewise plan: coefficients paired with scaling factors,
//! evaluated with the exact multiplication ordering of the oblivious
//! runtime so fitting-time accuracy checks see runtime arithmetic.

use crate::fxp::{power_table, FxpFormat, FxpValue};

/// Coefficients `c_hat_0..c_hat_k` with paired scaling factors
/// `s_hat_0..s_hat_k`. Scalers lie in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledPolynomial {
    coeffs: Vec<FxpValue>,
    scalers: Vec<FxpValue>,
}

impl ScaledPolynomial {
    pub fn from_pairs(coeffs: Vec<FxpValue>, scalers: Vec<FxpValue>) -> Self {
        assert_eq!(
            coeffs.len(),
            scalers.len(),
            "coefficient/scaler length mismatch"
        );
        assert!(
            !coeffs.is_empty(),
            "polynomial needs at least the constant term"
        );
        ScaledPolynomial { coeffs, scalers }
    }

    /// A constant piece (used for out-of-domain default values).
    pub fn constant(value: f64, order: usize, format: FxpFormat) -> Self {
        let mut coeffs = vec![FxpValue::zero(format); order + 1];
        let scalers = vec![FxpValue::one(format); order + 1];
        coeffs[0] = FxpValue::from_real(value, format).expect("finite default value");
        ScaledPolynomial { coeffs, scalers }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn format(&self) -> FxpFormat {
        self.coeffs[0].format()
    }

    pub fn coeffs(&self) -> &[FxpValue] {
        &self.coeffs
    }

    pub fn scalers(&self) -> &[FxpValue] {
        &self.scalers
    }

    /// Zero-pad coefficients and scaling factors up to order `k`.
    pub fn pad_to(&mut self, k: usize) {
        let format = self.format();
        while self.coeffs.len() < k + 1 {
            self.coeffs.push(FxpValue::zero(format));
            self.scalers.push(FxpValue::one(format));
        }
    }

    /// Evaluate at a grid point with the runtime ordering: coefficient times
    /// power strictly before times scaler, terms summed in index order.
    pub fn eval_fxp(&self, x: FxpValue) -> FxpValue {
        self.eval_with_powers(&power_table(x, self.order()))
    }

    /// Evaluate against a precomputed power table (entries beyond the order
    /// are ignored; the table must come from the shared doubling schedule).
    pub fn eval_with_powers(&self, powers: &[FxpValue]) -> FxpValue {
        let mut acc = FxpValue::zero(self.format());
        for (i, (&c, &s)) in self.coeffs.iter().zip(&self.scalers).enumerate() {
            acc = acc.add(c.mul(powers[i]).mul(s));
        }
        acc
    }
}
