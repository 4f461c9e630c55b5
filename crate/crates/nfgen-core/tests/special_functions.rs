//! Integral-defined targets through the full pipeline: the quadrature
//! builtins are pre-evaluated at fit time, so functions without closed
//! forms fit like any other target.

use nfgen_core::expr::Expression;
use nfgen_core::fitter::{expression_target, fit_candidates, verify_plan, FitConfig};
use nfgen_core::fxp::FxpFormat;

fn fit_and_verify(text: &str, domain: (f64, f64), k_range: (u32, u32), m_cap: usize) {
    let expr = Expression::parse(text).unwrap();
    let target = expression_target(&expr, 1e-3);
    let mut cfg = FitConfig::new(domain, 1e-3, 1e-6, FxpFormat::new(96, 48).unwrap()).unwrap();
    cfg.k_range = k_range;
    let results = fit_candidates(&target, &cfg);
    let best = results
        .iter()
        .filter_map(|r| r.plan.as_ref())
        .min_by_key(|p| p.piece_count())
        .unwrap_or_else(|| panic!("no feasible plan for {text}"));
    assert!(
        best.piece_count() <= m_cap,
        "{text}: m = {} exceeds cap {m_cap}",
        best.piece_count()
    );
    let report = verify_plan(best, &target, &cfg, 2000).unwrap();
    assert!(report.pass, "{text}: max SRD {:.3e}", report.max_srd);
}

#[test]
fn erf_fits_via_quadrature() {
    fit_and_verify("erf(x)", (0.0, 5.0), (4, 6), 12);
}

#[test]
fn lower_incomplete_gamma_fits() {
    // order parameter fixed at parse time; integrand evaluated by
    // adaptive quadrature during fitting
    fit_and_verify("lower_inc_gamma(2, x)", (0.0, 15.0), (5, 7), 12);
}

#[test]
fn upper_incomplete_gamma_fits() {
    fit_and_verify("upper_inc_gamma(2, x)", (0.0, 10.0), (5, 8), 12);
}

#[test]
fn chi_square_p_value_fits() {
    // survival function of the chi-square distribution with four degrees
    // of freedom: p = 1 - gamma(2, x/2) / Gamma(2)
    fit_and_verify("1 - lower_inc_gamma(2, x/2)", (0.001, 30.0), (4, 7), 14);
}

#[test]
fn normal_cdf_fits() {
    fit_and_verify("normal_cdf(x)", (-5.0, 5.0), (5, 8), 12);
}
