//! Scripted parameter sweeps and the adiabatic convergence study.

use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate, upward_crossings, IntegratorConfig};
use crate::error::{Error, Result};
use crate::invariant::{
    drift_metrics, invariant_series_closed_form, invariant_series_numerical, DriftMetrics,
    InvariantSeries,
};
use crate::model::{
    closed_form_energy, validate_params, DriveSpec, InitialConditions, ResonatorParams, TimeWindow,
};

/// The parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    OmegaR,
    QFactor,
    Epsilon,
    OmegaP,
    Beta,
    Alpha,
    LambdaCorr,
    Capacitance,
    E0,
    Xi0,
    OmegaD,
    Theta,
    /// Offset added to the power-of-ω drive exponent.
    Delta,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::OmegaR => "omega_r",
            SweepAxis::QFactor => "q_factor",
            SweepAxis::Epsilon => "epsilon",
            SweepAxis::OmegaP => "omega_p",
            SweepAxis::Beta => "beta",
            SweepAxis::Alpha => "alpha",
            SweepAxis::LambdaCorr => "lambda",
            SweepAxis::Capacitance => "capacitance",
            SweepAxis::E0 => "e0",
            SweepAxis::Xi0 => "xi0",
            SweepAxis::OmegaD => "omega_d",
            SweepAxis::Theta => "theta",
            SweepAxis::Delta => "delta",
        }
    }
}

/// A sweep: a base configuration, the axis to vary, and the values to take.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub params: ResonatorParams,
    pub drive: DriveSpec,
    pub init: InitialConditions,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub horizon: TimeWindow,
    pub sample_dt: f64,
    pub window: TimeWindow,
    /// Also integrate each point and attach the numerical invariant series.
    pub include_numerical: bool,
    pub integrator: Option<IntegratorConfig>,
}

/// One sweep point: the fully resolved inputs (provenance) and its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub value: f64,
    pub params: ResonatorParams,
    pub drive: DriveSpec,
    pub init: InitialConditions,
    pub series: InvariantSeries,
    pub metrics: DriftMetrics,
    pub numerical: Option<(InvariantSeries, DriftMetrics)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub entries: Vec<SweepEntry>,
}

/// Materializes the base configuration with `axis` set to `value`.
pub fn apply_axis(
    params: &ResonatorParams,
    drive: &DriveSpec,
    init: &InitialConditions,
    axis: SweepAxis,
    value: f64,
) -> Result<(ResonatorParams, DriveSpec, InitialConditions)> {
    let mut p = *params;
    let mut d = drive.clone();
    let mut i = *init;
    match axis {
        SweepAxis::OmegaR => p.omega_r = value,
        SweepAxis::QFactor => p.q_factor = value,
        SweepAxis::Epsilon => p.epsilon = value,
        SweepAxis::OmegaP => p.omega_p = value,
        SweepAxis::Beta => p.beta = value,
        SweepAxis::Alpha => p.alpha = value,
        SweepAxis::LambdaCorr => p.lambda_corr = value,
        SweepAxis::Capacitance => p.capacitance = value,
        SweepAxis::E0 => match &mut i {
            InitialConditions::Energy { e0 } => *e0 = value,
            InitialConditions::State { .. } => {
                return Err(Error::InvalidParameter(
                    "axis e0 requires an Energy initial condition".into(),
                ))
            }
        },
        SweepAxis::Xi0 => match &mut d {
            DriveSpec::Sinusoid { xi0, .. } | DriveSpec::PowerOfOmega { xi0, .. } => *xi0 = value,
            _ => {
                return Err(Error::InvalidParameter(
                    "axis xi0 requires a sinusoid or power-of-omega drive".into(),
                ))
            }
        },
        SweepAxis::OmegaD => match &mut d {
            DriveSpec::Sinusoid { omega_d, .. } => *omega_d = value,
            _ => {
                return Err(Error::InvalidParameter(
                    "axis omega_d requires a sinusoid drive".into(),
                ))
            }
        },
        SweepAxis::Theta => match &mut d {
            DriveSpec::Sinusoid { theta, .. } => *theta = value,
            _ => {
                return Err(Error::InvalidParameter(
                    "axis theta requires a sinusoid drive".into(),
                ))
            }
        },
        SweepAxis::Delta => match (&mut d, drive) {
            (
                DriveSpec::PowerOfOmega { exponent, .. },
                DriveSpec::PowerOfOmega { exponent: base, .. },
            ) => *exponent = base + value,
            _ => {
                return Err(Error::InvalidParameter(
                    "axis delta requires a power-of-omega drive".into(),
                ))
            }
        },
    }
    Ok((p, d, i))
}

/// Runs the sweep. Points are independent pure computations; results are
/// keyed by value and do not depend on evaluation order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.values.is_empty() {
        return Err(Error::InvalidParameter(
            "sweep values must be non-empty".into(),
        ));
    }
    if spec.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "sweep values must be finite".into(),
        ));
    }
    let mut entries = Vec::with_capacity(spec.values.len());
    for &value in &spec.values {
        let entry = run_point(spec, value).map_err(|e| Error::SweepPointFailed {
            axis: spec.axis.name().into(),
            value,
            source: Box::new(e),
        })?;
        entries.push(entry);
    }
    Ok(SweepResult {
        axis: spec.axis,
        entries,
    })
}

fn run_point(spec: &SweepSpec, value: f64) -> Result<SweepEntry> {
    let (params, drive, init) =
        apply_axis(&spec.params, &spec.drive, &spec.init, spec.axis, value)?;
    validate_params(&params, &drive, spec.horizon)?;
    let series =
        invariant_series_closed_form(&params, &drive, &init, spec.horizon, spec.sample_dt)?;
    let metrics = drift_metrics(&series, spec.window)?;
    let numerical = if spec.include_numerical {
        let cfg = spec.integrator.unwrap_or(IntegratorConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-9,
            max_step: None,
            sample_dt: spec.sample_dt,
            damping_enabled: true,
        });
        let traj = integrate(&params, &drive, &init, &cfg, spec.horizon)?;
        let num_series = invariant_series_numerical(&traj)?;
        let num_metrics = drift_metrics(&num_series, spec.window)?;
        Some((num_series, num_metrics))
    } else {
        None
    };
    Ok(SweepEntry {
        value,
        params,
        drive,
        init,
        series,
        metrics,
        numerical,
    })
}

/// One rung of the convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRung {
    /// Factor applied to (ε, ω_p, ω_d).
    pub scale: f64,
    /// Max over complete cycles of |E_cyc(t_c) − E_cf(t_c)| / |E_cf(t_c)|,
    /// where E_cyc is the sampled energy at the cycle midpoint and E_cf the
    /// closed form.
    pub max_rel_discrepancy: f64,
    pub cycles: usize,
}

/// Scales (ε, ω_p, ω_d) by 2^−k for k = 0..rungs−1 and reports, per rung,
/// the worst relative disagreement between the integrated cycle energy and
/// the closed form. Requires α = 0 (the closed form is derived for the
/// linear oscillator) and a horizon starting at t = 0 (the closed form is
/// anchored at E(0)).
pub fn run_convergence_study(
    params: &ResonatorParams,
    drive: &DriveSpec,
    init: &InitialConditions,
    config: &IntegratorConfig,
    horizon: TimeWindow,
    rungs: usize,
) -> Result<Vec<ConvergenceRung>> {
    if params.alpha != 0.0 {
        return Err(Error::NonlinearUnsupported(params.alpha));
    }
    if rungs == 0 {
        return Err(Error::InvalidParameter("rungs must be >= 1".into()));
    }
    if horizon.start != 0.0 {
        return Err(Error::InvalidParameter(
            "convergence study requires a horizon starting at t = 0".into(),
        ));
    }
    let e0 = match init {
        InitialConditions::Energy { e0 } => *e0,
        InitialConditions::State { .. } => {
            return Err(Error::InitialEnergyRequired);
        }
    };

    let mut out = Vec::with_capacity(rungs);
    for k in 0..rungs {
        let scale = 0.5f64.powi(k as i32);
        let p = ResonatorParams {
            epsilon: params.epsilon * scale,
            omega_p: params.omega_p * scale,
            ..*params
        };
        let d = match drive {
            DriveSpec::Sinusoid {
                xi0,
                omega_d,
                theta,
            } => DriveSpec::Sinusoid {
                xi0: *xi0,
                omega_d: omega_d * scale,
                theta: *theta,
            },
            other => other.clone(),
        };
        validate_params(&p, &d, horizon)?;
        let traj = integrate(&p, &d, init, config, horizon).map_err(|e| match e {
            Error::NumericalFailure { t, reason } => Error::NumericalFailure {
                t,
                reason: format!("rung {k} (scale {scale}): {reason}"),
            },
            other => other,
        })?;
        let xs = upward_crossings(&traj);
        if xs.len() < 2 {
            return Err(Error::InsufficientCycles {
                found: xs.len().saturating_sub(1),
                needed: 1,
            });
        }
        let init_energy = InitialConditions::Energy { e0 };
        let mut worst = 0.0f64;
        for w in xs.windows(2) {
            let t_c = 0.5 * (w[0] + w[1]);
            let e_num = traj.energy_at(t_c);
            let e_cf = closed_form_energy(&p, &d, &init_energy, t_c)?;
            worst = worst.max((e_num - e_cf).abs() / e_cf.abs());
        }
        out.push(ConvergenceRung {
            scale,
            max_rel_discrepancy: worst,
            cycles: xs.len() - 1,
        });
    }
    Ok(out)
}
