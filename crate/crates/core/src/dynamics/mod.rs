//! Direct numerical integration of the flux equation
//! φ̈ + (ω_r/Q) φ̇ + ω²(t) φ − α Λ(t) φ³ = ξ(t),
//! per-sample energies, and the classical action J = ∮ q dφ over detected
//! oscillation cycles. This is the independent route against which the
//! closed forms in [`crate::model`] are verified.

mod cycles;
mod integrator;

pub use cycles::{action_energy_identity_check, compute_action, upward_crossings};
pub use integrator::{integrate, integrate_between};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    eval_drive, eval_lambda, eval_omega_squared, DriveSpec, InitialConditions, ResonatorParams,
};

/// A phase-space point of the oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorState {
    pub t: f64,
    pub phi: f64,
    pub phidot: f64,
}

/// Integrator controls.
///
/// `max_step`, when unset, defaults to 2π/(32 max(ω_r, ω_p, ω_d)). Output is
/// sampled on the uniform grid t₀ + k·`sample_dt`; the solver lands on every
/// grid point exactly, so samples are true integration states rather than
/// interpolants. `damping_enabled = false` removes the (ω_r/Q) φ̇ term
/// entirely (the Q → ∞ sentinel).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: Option<f64>,
    pub sample_dt: f64,
    pub damping_enabled: bool,
}

impl IntegratorConfig {
    pub fn with_sample_dt(sample_dt: f64) -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-9,
            max_step: None,
            sample_dt,
            damping_enabled: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.rel_tol.is_finite()
            || self.rel_tol <= 0.0
            || !self.abs_tol.is_finite()
            || self.abs_tol <= 0.0
        {
            return Err(Error::InvalidParameter(format!(
                "integrator tolerances must be > 0, got rel {} abs {}",
                self.rel_tol, self.abs_tol
            )));
        }
        if !self.sample_dt.is_finite() || self.sample_dt <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sample_dt must be finite and > 0, got {}",
                self.sample_dt
            )));
        }
        if let Some(h) = self.max_step {
            if !h.is_finite() || h <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "max_step must be finite and > 0, got {h}"
                )));
            }
        }
        Ok(())
    }

    /// The step cap actually used for a given system.
    pub fn resolved_max_step(&self, params: &ResonatorParams, drive: &DriveSpec) -> f64 {
        if let Some(h) = self.max_step {
            return h;
        }
        let mut w = params.omega_r.max(params.omega_p);
        if let DriveSpec::Sinusoid { omega_d, .. } = drive {
            w = w.max(*omega_d);
        }
        2.0 * std::f64::consts::PI / (32.0 * w)
    }
}

/// One output sample: state plus the canonical charge q = C e^{γt} φ̇ and the
/// instantaneous energy from [`energy_a1`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub phi: f64,
    pub phidot: f64,
    pub q: f64,
    pub energy: f64,
}

/// An integrated trajectory sampled on a uniform grid, with snapshots of the
/// inputs that produced it. `gamma` is the damping rate actually applied
/// (zero when damping was disabled).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub params: ResonatorParams,
    pub drive: DriveSpec,
    pub gamma: f64,
}

impl Trajectory {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    /// Linear interpolation of the stored energy samples.
    pub fn energy_at(&self, t: f64) -> f64 {
        interp_samples(&self.samples, t, |s| s.energy)
    }

    /// Linear interpolation of the stored flux samples.
    pub fn phi_at(&self, t: f64) -> f64 {
        interp_samples(&self.samples, t, |s| s.phi)
    }
}

pub(crate) fn interp_samples<F: Fn(&TrajectorySample) -> f64>(
    samples: &[TrajectorySample],
    t: f64,
    value: F,
) -> f64 {
    let n = samples.len();
    if t <= samples[0].t {
        return value(&samples[0]);
    }
    if t >= samples[n - 1].t {
        return value(&samples[n - 1]);
    }
    let hi = samples.partition_point(|s| s.t <= t);
    let (a, b) = (&samples[hi - 1], &samples[hi]);
    let frac = (t - a.t) / (b.t - a.t);
    value(a) + (value(b) - value(a)) * frac
}

/// Right-hand side of the flux equation: returns (dφ/dt, dφ̇/dt).
pub fn rhs(
    params: &ResonatorParams,
    drive: &DriveSpec,
    state: &OscillatorState,
) -> Result<(f64, f64)> {
    rhs_gamma(params.gamma(), params, drive, state)
}

pub(crate) fn rhs_gamma(
    gamma: f64,
    params: &ResonatorParams,
    drive: &DriveSpec,
    state: &OscillatorState,
) -> Result<(f64, f64)> {
    let w_sq = eval_omega_squared(params, state.t)?;
    let xi = eval_drive(drive, params, state.t)?;
    let cubic = if params.alpha == 0.0 {
        0.0
    } else {
        params.alpha * eval_lambda(params, state.t) * state.phi * state.phi * state.phi
    };
    Ok((
        state.phidot,
        -gamma * state.phidot - w_sq * state.phi + cubic + xi,
    ))
}

/// Instantaneous energy of the quadratic oscillator,
/// E = C φ̇²/2 + (C/2)(ω²(t) φ² − 2 ξ(t) φ),
/// equivalent to e^{−2γt} q²/(2C) + (C/2)(ω²φ² − 2ξφ) with q = C e^{γt} φ̇.
pub fn energy_a1(
    params: &ResonatorParams,
    drive: &DriveSpec,
    state: &OscillatorState,
) -> Result<f64> {
    let w_sq = eval_omega_squared(params, state.t)?;
    let xi = eval_drive(drive, params, state.t)?;
    let c = params.capacitance;
    Ok(0.5 * c * state.phidot * state.phidot
        + 0.5 * c * (w_sq * state.phi * state.phi - 2.0 * xi * state.phi))
}

/// Phase-space realization at t₀ of the initial conditions. The Energy
/// variant maps to the all-kinetic state φ = 0, φ̇ = sqrt(2E(0)/C), which
/// realizes E(0) exactly for any drive since the −2ξφ term vanishes at φ = 0.
pub fn initial_state(
    params: &ResonatorParams,
    init: &InitialConditions,
    t0: f64,
) -> OscillatorState {
    match init {
        InitialConditions::Energy { e0 } => OscillatorState {
            t: t0,
            phi: 0.0,
            phidot: (2.0 * e0 / params.capacitance).sqrt(),
        },
        InitialConditions::State { phi0, phidot0 } => OscillatorState {
            t: t0,
            phi: *phi0,
            phidot: *phidot0,
        },
    }
}
