//! Multivariate polynomial regression over `(k, m)` evaluation times.
//!
//! The feature set spans the analytic complexity terms of the oblivious
//! evaluator (`km` and `k log k` multiplications, `m` comparisons) plus
//! low-order curvature.

use serde::{Deserialize, Serialize};

use super::profile::PerfProfile;
use super::PerfError;

pub const FEATURE_COUNT: usize = 7;

/// `[1, k, m, k*m, k*log2(k), m^2, k^2]`
fn features(k: f64, m: f64) -> [f64; FEATURE_COUNT] {
    [1.0, k, m, k * m, k * k.log2(), m * m, k * k]
}

/// Least-squares regression coefficients plus the trained range.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CostModel {
    coefficients: [f64; FEATURE_COUNT],
    k_range: (u32, u32),
    m_range: (u32, u32),
    /// Root-mean-square residual over the training samples.
    pub residual_rms: f64,
}

impl CostModel {
    pub fn coefficients(&self) -> &[f64; FEATURE_COUNT] {
        &self.coefficients
    }

    pub fn predict(&self, k: u32, m: u32) -> f64 {
        features(k as f64, m as f64)
            .iter()
            .zip(&self.coefficients)
            .map(|(f, c)| f * c)
            .sum()
    }

    /// False when `(k, m)` lies outside the trained grid (extrapolation).
    pub fn in_trained_range(&self, k: u32, m: u32) -> bool {
        (self.k_range.0..=self.k_range.1).contains(&k)
            && (self.m_range.0..=self.m_range.1).contains(&m)
    }
}

/// Fit the regression by ordinary least squares on the profile samples.
pub fn fit_cost_model(profile: &PerfProfile) -> Result<CostModel, PerfError> {
    profile.validate()?;
    let n = profile.samples.len();
    if n < FEATURE_COUNT {
        return Err(PerfError::Fitting(format!(
            "need at least {FEATURE_COUNT} samples, got {n}"
        )));
    }

    // normal equations: (X^T X) c = X^T y
    let mut xtx = [[0.0f64; FEATURE_COUNT]; FEATURE_COUNT];
    let mut xty = [0.0f64; FEATURE_COUNT];
    for &(k, m, t) in &profile.samples {
        let row = features(k as f64, m as f64);
        for i in 0..FEATURE_COUNT {
            xty[i] += row[i] * t;
            for j in 0..FEATURE_COUNT {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    let coefficients = solve(xtx, xty)?;

    let mut sq = 0.0;
    for &(k, m, t) in &profile.samples {
        let row = features(k as f64, m as f64);
        let pred: f64 = row.iter().zip(&coefficients).map(|(f, c)| f * c).sum();
        sq += (pred - t) * (pred - t);
    }

    let ks = profile.samples.iter().map(|s| s.0);
    let ms = profile.samples.iter().map(|s| s.1);
    Ok(CostModel {
        coefficients,
        k_range: (ks.clone().min().unwrap(), ks.max().unwrap()),
        m_range: (ms.clone().min().unwrap(), ms.max().unwrap()),
        residual_rms: (sq / n as f64).sqrt(),
    })
}

/// Gaussian elimination with partial pivoting on the (small, symmetric)
/// normal matrix. A vanishing pivot signals a rank-deficient design.
fn solve(
    mut a: [[f64; FEATURE_COUNT]; FEATURE_COUNT],
    mut b: [f64; FEATURE_COUNT],
) -> Result<[f64; FEATURE_COUNT], PerfError> {
    let n = FEATURE_COUNT;
    let scale: f64 = a.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col].abs() <= scale * 1e-12 {
            return Err(PerfError::Fitting("rank-deficient design matrix".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            let (pivot_rows, rest) = a.split_at_mut(row);
            let pivot_row = pivot_rows[col];
            for (x, p) in rest[0].iter_mut().zip(&pivot_row).skip(col) {
                *x -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0f64; FEATURE_COUNT];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for j in col + 1..n {
            acc -= a[col][j] * x[j];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}
