//! Polynomial interpolation in continuous (double-precision) space:
//! Chebyshev nodes for near-minimax fits, Lagrange over explicit points for
//! resolution-limited intervals. Both return monomial coefficients built by
//! Newton divided differences and basis expansion, which keeps conditioning
//! acceptable for the orders used here (k <= 10).

use super::FitError;

/// The k+1 Chebyshev interpolation nodes on `[lo, hi]`:
/// `(lo+hi)/2 + (hi-lo)/2 * cos((2j+1)pi / (2(k+1)))`.
pub fn cheby_nodes(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..=k)
        .map(|j| {
            let theta = (2 * j + 1) as f64 * std::f64::consts::PI / (2 * (k + 1)) as f64;
            mid + half * theta.cos()
        })
        .collect()
}

/// Interpolate `f` on the Chebyshev nodes of `[lo, hi]`; returns monomial
/// coefficients `c_0..c_k` of the unique degree-<=k interpolant.
pub fn cheby_interpolate<F>(f: F, lo: f64, hi: f64, k: usize) -> Result<Vec<f64>, FitError>
where
    F: FnMut(f64) -> Result<f64, FitError>,
{
    let nodes = cheby_nodes(lo, hi, k);
    interpolate_at(f, &nodes)
}

/// Degree `points.len()-1` interpolant through the given distinct points,
/// exact at every point to double precision.
pub fn lagrange_interpolate<F>(f: F, points: &[f64]) -> Result<Vec<f64>, FitError>
where
    F: FnMut(f64) -> Result<f64, FitError>,
{
    for (i, a) in points.iter().enumerate() {
        if points[i + 1..].contains(a) {
            return Err(FitError::DuplicatePoint(*a));
        }
    }
    interpolate_at(f, points)
}

fn interpolate_at<F>(mut f: F, nodes: &[f64]) -> Result<Vec<f64>, FitError>
where
    F: FnMut(f64) -> Result<f64, FitError>,
{
    assert!(!nodes.is_empty(), "interpolation needs at least one node");
    let n = nodes.len();
    // Newton divided differences: table[j] holds f[x_0..x_j] after pass j.
    let mut table: Vec<f64> = nodes.iter().map(|&x| f(x)).collect::<Result<_, _>>()?;
    for j in 1..n {
        for i in (j..n).rev() {
            table[i] = (table[i] - table[i - 1]) / (nodes[i] - nodes[i - j]);
        }
    }
    // Expand the Newton form onto the monomial basis.
    let mut coeffs = vec![0.0; n];
    let mut basis = vec![0.0; n]; // running product of (x - x_0)..(x - x_{j-1})
    basis[0] = 1.0;
    let mut basis_len = 1;
    for j in 0..n {
        for i in 0..basis_len {
            coeffs[i] += table[j] * basis[i];
        }
        if j + 1 < n {
            // multiply basis by (x - nodes[j])
            for i in (0..basis_len).rev() {
                basis[i + 1] += basis[i];
                basis[i] *= -nodes[j];
            }
            basis_len += 1;
        }
    }
    Ok(coeffs)
}

/// Horner evaluation of monomial coefficients, low order first.
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Result<f64, FitError> {
        move |x| Ok(f(x))
    }

    #[test]
    fn line_is_recovered() {
        let c = cheby_interpolate(ok(|x| x), -1.0, 1.0, 1).unwrap();
        assert!(c[0].abs() < 1e-15);
        assert!((c[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn square_is_recovered() {
        let c = cheby_interpolate(ok(|x| x * x), -1.0, 1.0, 2).unwrap();
        assert!(c[0].abs() < 1e-12 && c[1].abs() < 1e-12);
        assert!((c[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exp_on_unit_interval_is_close() {
        // dense-grid max error of the independently computed interpolant
        let c = cheby_interpolate(ok(f64::exp), 0.0, 1.0, 3).unwrap();
        let mut worst = 0.0f64;
        for i in 0..1000 {
            let x = i as f64 / 999.0;
            worst = worst.max((eval_poly(&c, x) - x.exp()).abs());
        }
        assert!(worst <= 0.01, "max error {worst}");
    }

    #[test]
    fn lagrange_constant_and_cubic() {
        let c = lagrange_interpolate(ok(|_| 5.0), &[0.0]).unwrap();
        assert_eq!(c, vec![5.0]);
        let c = lagrange_interpolate(ok(|x| x * x * x), &[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(c[0].abs() < 1e-10 && c[1].abs() < 1e-10 && c[2].abs() < 1e-10);
        assert!((c[3] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lagrange_hits_every_point() {
        let pts = [0.0, 0.5, 1.0];
        let c = lagrange_interpolate(ok(f64::sin), &pts).unwrap();
        for &p in &pts {
            assert!((eval_poly(&c, p) - p.sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn duplicate_points_rejected() {
        let err = lagrange_interpolate(ok(|x| x), &[0.0, 1.0, 0.0]).unwrap_err();
        assert!(matches!(err, FitError::DuplicatePoint(_)));
    }

    #[test]
    fn node_error_propagates() {
        let err = cheby_interpolate(
            |x| {
                Err(FitError::Target {
                    x,
                    message: "bad".into(),
                })
            },
            0.0,
            1.0,
            2,
        )
        .unwrap_err();
        assert!(matches!(err, FitError::Target { .. }));
    }
}
