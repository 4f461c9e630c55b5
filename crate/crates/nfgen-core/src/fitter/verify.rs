//! Grid verification of fitted plans: max and mean sampled SRD against the
//! target, with the worst offending input.

use crate::fxp::linspace_fxp;

use super::srd::srd;
use super::{FitConfig, FitError, PiecewisePlan, TargetFn};

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub samples: usize,
    pub max_srd: f64,
    pub mean_srd: f64,
    /// Input with the largest SRD.
    pub worst_x: f64,
    pub epsilon: f64,
    pub pass: bool,
}

/// Evaluate every grid point through the selected piece with runtime
/// arithmetic and compare against the target under the SRD metric.
pub fn verify_plan<F: TargetFn + ?Sized>(
    plan: &PiecewisePlan,
    f: &F,
    cfg: &FitConfig,
    samples: usize,
) -> Result<VerifyReport, FitError> {
    if samples < 2 {
        return Err(FitError::BadConfig(
            "verification needs at least 2 samples".into(),
        ));
    }
    let xs = linspace_fxp(cfg.domain.0, cfg.domain.1, samples, plan.format())?;
    let mut max_srd = 0.0f64;
    let mut sum = 0.0f64;
    let mut worst_x = xs[0].to_f64();
    for x in xs {
        let fx = match f(x.to_f64()) {
            Ok(v) if v.is_finite() => v,
            Ok(v) => {
                return Err(FitError::Target {
                    x: x.to_f64(),
                    message: format!("non-finite value {v}"),
                })
            }
            Err(message) => {
                return Err(FitError::Target {
                    x: x.to_f64(),
                    message,
                })
            }
        };
        let approx = plan
            .eval_select(x)
            .ok_or_else(|| FitError::BadPlan(format!("sample {x} below the first breakpoint")))?;
        let d = srd(fx, approx.to_f64(), cfg.soft_zero);
        sum += d;
        if d > max_srd {
            max_srd = d;
            worst_x = x.to_f64();
        }
    }
    Ok(VerifyReport {
        samples,
        max_srd,
        mean_srd: sum / samples as f64,
        worst_x,
        epsilon: cfg.epsilon,
        pass: max_srd < cfg.epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::super::fit::fit_piecewise;
    use super::*;
    use crate::fxp::{FxpFormat, FxpValue};

    fn f96() -> FxpFormat {
        FxpFormat::new(96, 48).unwrap()
    }

    #[test]
    fn fitted_plan_passes() {
        let cfg = FitConfig::new((0.5, 4.0), 1e-3, 1e-6, f96()).unwrap();
        let target = |x: f64| Ok(1.0 / x);
        let plan = fit_piecewise(&target, &cfg, 5).unwrap().expect("feasible");
        let report = verify_plan(&plan, &target, &cfg, 2000).unwrap();
        assert!(report.pass, "max SRD {}", report.max_srd);
        assert!(report.mean_srd <= report.max_srd);
    }

    #[test]
    fn identity_plan_is_exact_on_grid() {
        // hand-built identity piece: c_1 = 1, s_1 = 1
        use super::super::piece::ScaledPolynomial;
        let fmt = f96();
        let cfg = FitConfig::new((0.0, 1.0), 1e-3, 1e-6, fmt).unwrap();
        let target = |x: f64| Ok(x);
        let zero = FxpValue::zero(fmt);
        let one = FxpValue::one(fmt);
        let ident = ScaledPolynomial::from_pairs(vec![zero, one], vec![one, one]);
        let plan = PiecewisePlan::new(
            fmt,
            vec![zero],
            FxpValue::from_real(1.0, fmt).unwrap(),
            vec![ident],
            1,
            (0.0, 0.0),
        )
        .unwrap();
        let report = verify_plan(&plan, &target, &cfg, 500).unwrap();
        assert_eq!(report.max_srd, 0.0);
    }

    #[test]
    fn corrupted_coefficient_fails_in_its_piece() {
        let cfg = FitConfig::new((-4.0, 4.0), 1e-3, 1e-6, f96()).unwrap();
        let target = |x: f64| Ok(0.1 * x * x + 1.0);
        let plan = fit_piecewise(&target, &cfg, 4).unwrap().expect("feasible");

        // corrupt the constant coefficient of the last piece via the document
        let mut doc = plan.to_doc();
        let m = doc.m;
        doc.coeff[m - 1][0] = (FxpValue::from_real(7.0, f96()).unwrap().mantissa()).to_string();
        doc.scaler[m - 1][0] = FxpValue::one(f96()).mantissa().to_string();
        let corrupted = doc.into_plan().unwrap();

        let report = verify_plan(&corrupted, &target, &cfg, 2000).unwrap();
        assert!(!report.pass);
        // worst x sits inside the corrupted piece
        let piece_lo = corrupted.breaks()[m - 1].to_f64();
        assert!(
            report.worst_x >= piece_lo,
            "worst x {} not in piece",
            report.worst_x
        );
    }

    #[test]
    fn minimal_two_sample_run() {
        let cfg = FitConfig::new((0.0, 1.0), 1e-3, 1e-6, f96()).unwrap();
        let target = |x: f64| Ok(x);
        let plan = fit_piecewise(&target, &cfg, 3).unwrap().expect("feasible");
        let report = verify_plan(&plan, &target, &cfg, 2).unwrap();
        assert_eq!(report.samples, 2);
        assert!(verify_plan(&plan, &target, &cfg, 1).is_err());
    }
}
