use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::closed_form::omega_sq_unchecked;
use crate::model::params::{DriveSpec, ResonatorParams, TimeWindow};

/// Grid density for the positivity scan, in points per pump period.
const POINTS_PER_PUMP_PERIOD: f64 = 256.0;
/// Minimum number of scan points regardless of horizon length.
const MIN_SCAN_POINTS: usize = 256;

/// Outcome of the ω²(t) > 0 check over a horizon.
///
/// `analytic_lower_bound` treats the two cosines in the frequency bracket as
/// independently extremal (ω_r² − |ε| − βε²Q/(ω_rω_p) for β ≥ 0); it is
/// conservative, so a positive bound proves validity while a negative bound
/// is settled by the sampled minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub analytic_lower_bound: f64,
    pub min_omega_sq_sampled: f64,
    pub min_omega_sq_t: f64,
    pub scan_points: usize,
    pub horizon: (f64, f64),
}

/// Always returns the positivity report; errors only on type-invariant
/// violations of the inputs.
pub fn validation_report(
    params: &ResonatorParams,
    drive: &DriveSpec,
    horizon: TimeWindow,
) -> Result<ValidationReport> {
    params.validate()?;
    drive.validate()?;

    let shift = params.beta * params.epsilon * params.epsilon * params.q_factor
        / (2.0 * params.omega_r * params.omega_p);
    let bound = params.omega_r * params.omega_r - params.epsilon.abs() - (2.0 * shift).max(0.0);

    let periods = horizon.span() * params.omega_p / (2.0 * std::f64::consts::PI);
    let n = ((periods * POINTS_PER_PUMP_PERIOD).ceil() as usize).max(MIN_SCAN_POINTS);
    let dt = horizon.span() / n as f64;
    let mut min_val = f64::INFINITY;
    let mut min_t = horizon.start;
    for i in 0..=n {
        let t = if i == n {
            horizon.end
        } else {
            horizon.start + i as f64 * dt
        };
        let b = omega_sq_unchecked(params, t);
        if b < min_val {
            min_val = b;
            min_t = t;
        }
    }

    Ok(ValidationReport {
        valid: bound > 0.0 || min_val > 0.0,
        analytic_lower_bound: bound,
        min_omega_sq_sampled: min_val,
        min_omega_sq_t: min_t,
        scan_points: n + 1,
        horizon: (horizon.start, horizon.end),
    })
}

/// Checks ω²(t) > 0 across the horizon; errors with the offending time when
/// the regime is invalid.
pub fn validate_params(
    params: &ResonatorParams,
    drive: &DriveSpec,
    horizon: TimeWindow,
) -> Result<ValidationReport> {
    let report = validation_report(params, drive, horizon)?;
    if !report.valid {
        return Err(Error::NonPositiveFrequencySquared {
            t: report.min_omega_sq_t,
            omega_sq: report.min_omega_sq_sampled,
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> ResonatorParams {
        ResonatorParams {
            omega_r: 0.5,
            q_factor: 5.0,
            epsilon: 0.1,
            omega_p: 1.0,
            beta: 1.0,
            alpha: 0.0,
            lambda_corr: 0.0,
            capacitance: 1.0,
        }
    }

    #[test]
    fn fig1_horizon_is_valid() {
        let horizon = TimeWindow::new(0.0, 50.0).unwrap();
        let r = validate_params(&fig1(), &DriveSpec::Zero, horizon).unwrap();
        assert!(r.valid);
        // interior minimum of 0.15 + 0.1 c + 0.1 c^2 over c = cos(t) is 0.125
        assert!(r.min_omega_sq_sampled >= 0.125 - 1e-12);
        assert!(
            r.min_omega_sq_sampled < 0.1251,
            "{}",
            r.min_omega_sq_sampled
        );
        assert!((r.analytic_lower_bound - 0.05).abs() < 1e-12);
    }

    #[test]
    fn strong_pump_regime_is_rejected() {
        let p = ResonatorParams {
            omega_r: 1.0,
            q_factor: 10.0,
            epsilon: 0.5,
            omega_p: 1.0,
            beta: 0.5,
            alpha: 0.0,
            lambda_corr: 0.0,
            capacitance: 1.0,
        };
        let horizon = TimeWindow::new(0.0, 50.0).unwrap();
        let report = validation_report(&p, &DriveSpec::Zero, horizon).unwrap();
        assert!(!report.valid);
        // independent-extremes bound: 1 - 0.5 - 1.25
        assert_eq!(report.analytic_lower_bound, -0.75);
        // true minimum of -0.25 + 0.5 c + 1.25 c^2 is -0.3 at c = -0.2
        assert!((report.min_omega_sq_sampled - (-0.3)).abs() < 1e-4);
        assert!(matches!(
            validate_params(&p, &DriveSpec::Zero, horizon),
            Err(Error::NonPositiveFrequencySquared { .. })
        ));
    }

    #[test]
    fn no_pump_is_always_valid() {
        let p = ResonatorParams {
            epsilon: 0.0,
            ..fig1()
        };
        let horizon = TimeWindow::new(0.0, 1000.0).unwrap();
        let r = validate_params(&p, &DriveSpec::Zero, horizon).unwrap();
        assert!(r.valid);
        assert_eq!(r.analytic_lower_bound, 0.25);
        assert_eq!(r.min_omega_sq_sampled, 0.25);
    }

    #[test]
    fn negative_beta_bound_ignores_beta_term() {
        // for beta < 0 the pump-shift term only raises the bracket
        let p = ResonatorParams {
            beta: -2.0,
            ..fig1()
        };
        let horizon = TimeWindow::new(0.0, 20.0).unwrap();
        let r = validation_report(&p, &DriveSpec::Zero, horizon).unwrap();
        assert!((r.analytic_lower_bound - (0.25 - 0.1)).abs() < 1e-15);
        assert!(r.valid);
    }
}
