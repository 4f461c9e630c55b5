//! Bit-exact simulation of `<n,f>` fixed-point values and arithmetic.
//!
//! A `<n,f>` number is a signed `n`-bit integer mantissa scaled by `2^-f`:
//! range `±2^(n-f-1)`, resolution `2^-f`. All values store the integer
//! mantissa so equality and tests are bit-exact. Operations are pure
//! functions over immutable values and safe to call concurrently.

use std::fmt;

use num_bigint::BigUint;

/// Errors from format construction and real-to-fixed conversion.
#[derive(Debug, Clone, PartialEq)]
pub enum FxpError {
    /// Width constraints violated: need `2 <= n <= 128` and `1 <= f <= n-2`.
    InvalidFormat { n: u32, f: u32 },
    /// Conversion input was NaN or infinite.
    NonFinite(f64),
    /// linspace endpoints out of order.
    EmptyRange { lo: f64, hi: f64 },
    /// linspace needs at least two points.
    TooFewPoints(usize),
    /// A decimal literal does not land on the `2^-f` grid.
    OffGrid(String),
}

impl fmt::Display for FxpError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FxpError::InvalidFormat { n, f } => {
                write!(
                    out,
                    "invalid fixed-point format <{n},{f}>: need 2 <= n <= 128 and 1 <= f <= n-2"
                )
            }
            FxpError::NonFinite(x) => {
                write!(out, "cannot convert non-finite value {x} to fixed point")
            }
            FxpError::EmptyRange { lo, hi } => write!(out, "range [{lo}, {hi}] is empty"),
            FxpError::TooFewPoints(c) => write!(out, "linspace needs at least 2 points, got {c}"),
            FxpError::OffGrid(s) => write!(
                out,
                "literal {s} is not representable on the fixed-point grid"
            ),
        }
    }
}

impl std::error::Error for FxpError {}

/// The `<n,f>` format: `n` total bits, `f` fraction bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "RawFormat", into = "RawFormat")]
pub struct FxpFormat {
    n: u32,
    f: u32,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct RawFormat {
    n: u32,
    f: u32,
}

impl TryFrom<RawFormat> for FxpFormat {
    type Error = FxpError;
    fn try_from(raw: RawFormat) -> Result<Self, FxpError> {
        FxpFormat::new(raw.n, raw.f)
    }
}

impl From<FxpFormat> for RawFormat {
    fn from(fmt: FxpFormat) -> Self {
        RawFormat { n: fmt.n, f: fmt.f }
    }
}

impl FxpFormat {
    pub fn new(n: u32, f: u32) -> Result<Self, FxpError> {
        if !(2..=128).contains(&n) || f < 1 || f + 2 > n {
            return Err(FxpError::InvalidFormat { n, f });
        }
        Ok(FxpFormat { n, f })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    /// Largest representable mantissa, `2^(n-1) - 1`.
    pub fn max_mantissa(&self) -> i128 {
        if self.n == 128 {
            i128::MAX
        } else {
            (1i128 << (self.n - 1)) - 1
        }
    }

    /// Grid spacing `2^-f`.
    pub fn resolution(&self) -> f64 {
        exp2i(-(self.f as i32))
    }

    /// Largest representable value, `(2^(n-1) - 1) * 2^-f`.
    pub fn max_value(&self) -> f64 {
        self.max_mantissa() as f64 * self.resolution()
    }

    /// Number of grid steps covered by `[lo, hi]`, `(hi - lo) * 2^f`.
    pub fn steps_in(&self, lo: f64, hi: f64) -> f64 {
        (hi - lo) * exp2i(self.f as i32)
    }
}

impl fmt::Display for FxpFormat {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "<{},{}>", self.n, self.f)
    }
}

/// Rounding applied when the exact result falls between grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    /// Round toward negative infinity (bit truncation of two's complement).
    #[default]
    Floor,
    /// Round toward zero.
    TowardZero,
}

/// What happens when a result exceeds the representable range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Overflow {
    /// Clamp sign-preservingly to `±(2^(n-1) - 1)`.
    #[default]
    Saturate,
    /// Two's-complement wraparound modulo `2^n`, as on real ring platforms.
    Wrap,
}

/// A grid-constrained number: integer mantissa times `2^-f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FxpValue {
    mantissa: i128,
    format: FxpFormat,
}

impl FxpValue {
    pub fn zero(format: FxpFormat) -> Self {
        FxpValue {
            mantissa: 0,
            format,
        }
    }

    pub fn one(format: FxpFormat) -> Self {
        FxpValue {
            mantissa: 1i128 << format.f,
            format,
        }
    }

    /// Most negative representable value, `-(2^(n-1) - 1) * 2^-f`.
    pub fn min_representable(format: FxpFormat) -> Self {
        FxpValue {
            mantissa: -format.max_mantissa(),
            format,
        }
    }

    pub fn max_representable(format: FxpFormat) -> Self {
        FxpValue {
            mantissa: format.max_mantissa(),
            format,
        }
    }

    pub fn from_mantissa(mantissa: i128, format: FxpFormat) -> Result<Self, FxpError> {
        if mantissa.unsigned_abs() > format.max_mantissa() as u128 {
            return Err(FxpError::InvalidFormat {
                n: format.n,
                f: format.f,
            });
        }
        Ok(FxpValue { mantissa, format })
    }

    /// Load a real value onto the grid: zero below resolution, sign-preserving
    /// clamp past the largest magnitude, otherwise truncation toward zero of
    /// the fraction bits beyond `f`.
    pub fn from_real(x: f64, format: FxpFormat) -> Result<Self, FxpError> {
        if !x.is_finite() {
            return Err(FxpError::NonFinite(x));
        }
        // Scaling by a power of two is exact in binary floating point unless
        // it overflows to infinity, which the clamp below absorbs.
        Ok(Self::from_scaled(
            x * exp2i(format.f as i32),
            format,
            f64::trunc,
        ))
    }

    /// Like [`from_real`](Self::from_real) but rounding the mantissa up.
    /// Used for scaling factors, which must never round below their bound.
    pub fn from_real_ceil(x: f64, format: FxpFormat) -> Result<Self, FxpError> {
        if !x.is_finite() {
            return Err(FxpError::NonFinite(x));
        }
        Ok(Self::from_scaled(
            x * exp2i(format.f as i32),
            format,
            f64::ceil,
        ))
    }

    fn from_scaled(scaled: f64, format: FxpFormat, round: fn(f64) -> f64) -> Self {
        // 2^(n-1) is exactly representable in f64 for every valid n, so this
        // comparison is safe even where max_mantissa itself is not.
        let limit = exp2i(format.n as i32 - 1);
        if scaled >= limit {
            return Self::max_representable(format);
        }
        if scaled <= -limit {
            return Self::min_representable(format);
        }
        let mantissa = round(scaled) as i128;
        let max = format.max_mantissa();
        FxpValue {
            mantissa: mantissa.clamp(-max, max),
            format,
        }
    }

    pub fn mantissa(&self) -> i128 {
        self.mantissa
    }

    pub fn format(&self) -> FxpFormat {
        self.format
    }

    /// Nearest double; exact whenever the mantissa fits in 53 bits.
    pub fn to_f64(&self) -> f64 {
        self.mantissa as f64 * self.format.resolution()
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0
    }

    fn check_format(&self, rhs: &FxpValue, op: &str) {
        assert_eq!(
            self.format, rhs.format,
            "fixed-point format mismatch in {op}: {} vs {}",
            self.format, rhs.format
        );
    }

    /// Saturating addition. Exact when no overflow occurs.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: FxpValue) -> FxpValue {
        self.add_mode(rhs, Overflow::Saturate)
    }

    pub fn add_mode(self, rhs: FxpValue, overflow: Overflow) -> FxpValue {
        self.check_format(&rhs, "add");
        let format = self.format;
        match self.mantissa.checked_add(rhs.mantissa) {
            Some(sum) => match overflow {
                Overflow::Saturate => {
                    let max = format.max_mantissa();
                    FxpValue {
                        mantissa: sum.clamp(-max, max),
                        format,
                    }
                }
                Overflow::Wrap => FxpValue {
                    mantissa: reduce_signed(sum, format.n),
                    format,
                },
            },
            None => match overflow {
                // i128 overflow needs both operands on the same side of zero.
                Overflow::Saturate => {
                    if self.mantissa > 0 {
                        Self::max_representable(format)
                    } else {
                        Self::min_representable(format)
                    }
                }
                Overflow::Wrap => {
                    let sum = self.mantissa.wrapping_add(rhs.mantissa);
                    FxpValue {
                        mantissa: reduce_signed(sum, format.n),
                        format,
                    }
                }
            },
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: FxpValue) -> FxpValue {
        self.check_format(&rhs, "sub");
        self.add(FxpValue {
            mantissa: -rhs.mantissa,
            format: rhs.format,
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> FxpValue {
        FxpValue {
            mantissa: -self.mantissa,
            format: self.format,
        }
    }

    /// Fixed-point product: mantissas multiplied, arithmetically shifted
    /// right by `f` bits (truncation toward negative infinity), saturating.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: FxpValue) -> FxpValue {
        self.mul_mode(rhs, Rounding::Floor, Overflow::Saturate)
    }

    pub fn mul_mode(self, rhs: FxpValue, rounding: Rounding, overflow: Overflow) -> FxpValue {
        self.mul_inner(rhs, rounding, overflow).0
    }

    /// Floor product plus the dropped fraction as a numerator of `2^f`.
    /// The exact product is `result + dropped/2^f` on the value grid; the
    /// mock-sharing layer uses this for probabilistic truncation.
    pub fn mul_with_remainder(self, rhs: FxpValue) -> (FxpValue, u128) {
        self.mul_inner(rhs, Rounding::Floor, Overflow::Saturate)
    }

    fn mul_inner(self, rhs: FxpValue, rounding: Rounding, overflow: Overflow) -> (FxpValue, u128) {
        self.check_format(&rhs, "mul");
        let format = self.format;
        let f = format.f;
        let negative = (self.mantissa < 0) != (rhs.mantissa < 0);
        let (hi, lo) = widening_mul_u128(self.mantissa.unsigned_abs(), rhs.mantissa.unsigned_abs());

        let dropped = lo & ((1u128 << f) - 1);
        let mut magnitude = (lo >> f) | (hi << (128 - f));
        let mut too_big = (hi >> f) != 0;

        // floor(-q) = -(floor(q) + 1) when the fraction is nonzero
        let adjust = negative && dropped != 0 && rounding == Rounding::Floor;
        if adjust {
            match magnitude.checked_add(1) {
                Some(m) => magnitude = m,
                None => too_big = true,
            }
        }
        // Remainder of the floored product, measured upward to the exact value.
        let remainder = if dropped == 0 {
            0
        } else if negative && rounding == Rounding::Floor {
            (1u128 << f) - dropped
        } else {
            dropped
        };

        let value = match overflow {
            Overflow::Saturate => {
                let max = format.max_mantissa();
                if too_big || magnitude > max as u128 {
                    if negative {
                        Self::min_representable(format)
                    } else {
                        Self::max_representable(format)
                    }
                } else {
                    let m = magnitude as i128;
                    FxpValue {
                        mantissa: if negative { -m } else { m },
                        format,
                    }
                }
            }
            Overflow::Wrap => {
                let width_mask = if format.n == 128 {
                    u128::MAX
                } else {
                    (1u128 << format.n) - 1
                };
                let low = magnitude & width_mask;
                let signed = if negative {
                    (low as i128).wrapping_neg()
                } else {
                    low as i128
                };
                FxpValue {
                    mantissa: reduce_signed(signed, format.n),
                    format,
                }
            }
        };
        (value, remainder)
    }

    /// Secure-comparison semantics: `1.0` if `self >= rhs`, else `0.0`.
    pub fn ge(self, rhs: FxpValue) -> FxpValue {
        self.check_format(&rhs, "ge");
        if self.mantissa >= rhs.mantissa {
            Self::one(self.format)
        } else {
            Self::zero(self.format)
        }
    }

    /// Exact decimal rendering of `mantissa * 2^-f`. Dyadic rationals have
    /// finite decimal expansions, so no precision is lost.
    pub fn to_decimal_string(&self) -> String {
        let f = self.format.f;
        let magnitude = self.mantissa.unsigned_abs();
        let int_part = magnitude >> f;
        let frac_part = magnitude & ((1u128 << f) - 1);
        let sign = if self.mantissa < 0 { "-" } else { "" };
        if frac_part == 0 {
            return format!("{sign}{int_part}.0");
        }
        // frac/2^f == frac * 5^f / 10^f: render as f decimal digits.
        let digits = (BigUint::from(frac_part) * BigUint::from(5u8).pow(f)).to_string();
        let padded = format!("{digits:0>width$}", width = f as usize);
        let trimmed = padded.trim_end_matches('0');
        format!("{sign}{int_part}.{trimmed}")
    }

    /// Parse a decimal literal back to the exact mantissa. Errors unless the
    /// literal lands exactly on the `2^-f` grid.
    pub fn from_decimal_string(text: &str, format: FxpFormat) -> Result<Self, FxpError> {
        let bad = || FxpError::OffGrid(text.to_string());
        let trimmed = text.trim();
        let (sign, body) = match trimmed.strip_prefix('-') {
            Some(rest) => (-1i128, rest),
            None => (1i128, trimmed),
        };
        let (int_text, frac_text) = match body.split_once('.') {
            Some((i, d)) => (i, d),
            None => (body, ""),
        };
        if int_text.is_empty() && frac_text.is_empty() {
            return Err(bad());
        }
        let int_part: u128 = if int_text.is_empty() {
            0
        } else {
            int_text.parse().map_err(|_| bad())?
        };
        let f = format.f;
        let frac_scaled = if frac_text.is_empty() {
            BigUint::from(0u8)
        } else {
            let digits: BigUint = frac_text.parse().map_err(|_| bad())?;
            // frac * 2^f / 10^len must be an integer for an on-grid literal.
            let numer = digits << f;
            let denom = BigUint::from(10u8).pow(frac_text.len() as u32);
            if (&numer % &denom) != BigUint::from(0u8) {
                return Err(bad());
            }
            numer / denom
        };
        let total = (BigUint::from(int_part) << f) + frac_scaled;
        let digits = total.to_u64_digits();
        if digits.len() > 2 {
            return Err(bad());
        }
        let mut magnitude = 0u128;
        for (i, d) in digits.iter().enumerate() {
            magnitude |= (*d as u128) << (64 * i);
        }
        if magnitude > format.max_mantissa() as u128 {
            return Err(bad());
        }
        Ok(FxpValue {
            mantissa: sign * magnitude as i128,
            format,
        })
    }
}

impl fmt::Display for FxpValue {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.to_decimal_string())
    }
}

/// Map an i128 into two's-complement range `[-2^(n-1), 2^(n-1))` modulo `2^n`.
fn reduce_signed(m: i128, n: u32) -> i128 {
    if n == 128 {
        return m;
    }
    let modulus = 1i128 << n;
    let half = 1i128 << (n - 1);
    let mut r = m % modulus;
    if r >= half {
        r -= modulus;
    } else if r < -half {
        r += modulus;
    }
    r
}

fn widening_mul_u128(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = (1u128 << 64) - 1;
    let (a0, a1) = (a & MASK, a >> 64);
    let (b0, b1) = (b & MASK, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | ((mid & MASK) << 64);
    let hi = a1 * b1 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

/// Exact `2^e` as f64.
pub(crate) fn exp2i(e: i32) -> f64 {
    f64::exp2(e as f64)
}

/// `count` evenly spaced reals from `lo` to `hi` inclusive, each snapped to
/// the grid. Duplicates after snapping are retained.
pub fn linspace_fxp(
    lo: f64,
    hi: f64,
    count: usize,
    format: FxpFormat,
) -> Result<Vec<FxpValue>, FxpError> {
    // NaN endpoints land here too: nothing orders against them
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(FxpError::EmptyRange { lo, hi });
    }
    if count < 2 {
        return Err(FxpError::TooFewPoints(count));
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count)
        .map(|i| {
            let x = if i == count - 1 {
                hi
            } else {
                lo + step * i as f64
            };
            FxpValue::from_real(x, format)
        })
        .collect()
}

/// Lengths of the vectorized multiplication rounds the doubling power table
/// performs for order `k`: one round per `shift = 1, 2, 4, ... <= k`.
pub fn power_round_lengths(k: usize) -> Vec<usize> {
    let mut lens = Vec::new();
    let mut shift = 1;
    while shift <= k {
        lens.push(k + 1 - shift);
        shift *= 2;
    }
    lens
}

/// `[1, x, x^2, ..., x^k]` via the doubling schedule, with a caller-supplied
/// product so the oblivious evaluator can trace or re-round each step.
pub fn power_table_with<M>(x: FxpValue, k: usize, mut mul: M) -> Vec<FxpValue>
where
    M: FnMut(FxpValue, FxpValue) -> FxpValue,
{
    let mut res = Vec::with_capacity(k + 1);
    res.push(FxpValue::one(x.format()));
    res.extend(std::iter::repeat_n(x, k));
    let mut shift = 1;
    while shift <= k {
        // Descending order reads the pre-round value of res[i - shift],
        // matching a vectorized multiply of res[shift..] by res[..-shift].
        for i in (shift..=k).rev() {
            res[i] = mul(res[i], res[i - shift]);
        }
        shift *= 2;
    }
    res
}

/// `[1, x, x^2, ..., x^k]` with default truncation, the shared power table
/// for both the fitter's checks and the oblivious evaluator.
pub fn power_table(x: FxpValue, k: usize) -> Vec<FxpValue> {
    power_table_with(x, k, |a, b| a.mul(b))
}
