//! Adaptive embedded Runge–Kutta 5(4) (Dormand–Prince) stepper.
//!
//! Steps are clamped so the solver lands exactly on every requested output
//! time; emitted samples are accepted integration states, never
//! interpolants. Integration is plain f64 arithmetic with a deterministic
//! control flow, so identical inputs give bit-identical trajectories.

use crate::error::{Error, Result};
use crate::model::{validate_params, DriveSpec, InitialConditions, ResonatorParams, TimeWindow};

use super::{
    energy_a1, initial_state, rhs_gamma, IntegratorConfig, OscillatorState, Trajectory,
    TrajectorySample,
};

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - bhat, the embedded error coefficients
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

type Vec2 = [f64; 2];

struct Stepper<'a> {
    gamma: f64,
    params: &'a ResonatorParams,
    drive: &'a DriveSpec,
    rel_tol: f64,
    abs_tol: f64,
    max_step: f64,
    t: f64,
    y: Vec2,
    k1: Vec2,
    h: f64,
    dir: f64,
}

impl<'a> Stepper<'a> {
    fn new(
        gamma: f64,
        params: &'a ResonatorParams,
        drive: &'a DriveSpec,
        config: &IntegratorConfig,
        start: OscillatorState,
        dir: f64,
    ) -> Result<Self> {
        let max_step = config.resolved_max_step(params, drive);
        let y = [start.phi, start.phidot];
        let k1 = eval(gamma, params, drive, start.t, y)?;
        let h = max_step.min(config.sample_dt);
        Ok(Self {
            gamma,
            params,
            drive,
            rel_tol: config.rel_tol,
            abs_tol: config.abs_tol,
            max_step,
            t: start.t,
            y,
            k1,
            h,
            dir,
        })
    }

    /// Advance to exactly `target` (the final accepted state has t == target).
    fn advance_to(&mut self, target: f64) -> Result<()> {
        loop {
            let remaining = target - self.t;
            if remaining == 0.0 || remaining.abs() <= 1e-14 * target.abs().max(1.0) {
                self.t = target;
                return Ok(());
            }
            let mut h = self.h.min(self.max_step) * self.dir;
            let mut lands = false;
            if remaining.abs() <= h.abs() {
                h = remaining;
                lands = true;
            }

            let (y_new, k_last, err) = self.try_step(h)?;
            if !err.is_finite() {
                return Err(Error::NumericalFailure {
                    t: self.t,
                    reason: "non-finite state during step".into(),
                });
            }
            if err <= 1.0 {
                self.t = if lands { target } else { self.t + h };
                self.y = y_new;
                self.k1 = k_last;
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                self.h = (h.abs() * factor).min(self.max_step);
            } else {
                let factor = (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
                self.h = h.abs() * factor;
                if self.h < 1e-14 * self.t.abs().max(1.0) {
                    return Err(Error::NumericalFailure {
                        t: self.t,
                        reason: format!("step size underflow ({})", self.h),
                    });
                }
            }
        }
    }

    fn try_step(&self, h: f64) -> Result<(Vec2, Vec2, f64)> {
        let (t, y, k1) = (self.t, self.y, self.k1);
        let g = |ti: f64, yi: Vec2| eval(self.gamma, self.params, self.drive, ti, yi);

        let y2 = axpy(y, h, &[(A21, k1)]);
        let k2 = g(t + h / 5.0, y2)?;
        let y3 = axpy(y, h, &[(A31, k1), (A32, k2)]);
        let k3 = g(t + 3.0 * h / 10.0, y3)?;
        let y4 = axpy(y, h, &[(A41, k1), (A42, k2), (A43, k3)]);
        let k4 = g(t + 4.0 * h / 5.0, y4)?;
        let y5 = axpy(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]);
        let k5 = g(t + 8.0 * h / 9.0, y5)?;
        let y6 = axpy(
            y,
            h,
            &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)],
        );
        let k6 = g(t + h, y6)?;
        let y_new = axpy(y, h, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
        // FSAL: the 7th stage is the derivative at the new point
        let k7 = g(t + h, y_new)?;

        let mut err_sq = 0.0;
        for i in 0..2 {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = self.abs_tol + self.rel_tol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / scale) * (e / scale);
        }
        Ok((y_new, k7, (err_sq / 2.0).sqrt()))
    }
}

fn axpy(y: Vec2, h: f64, terms: &[(f64, Vec2)]) -> Vec2 {
    let mut out = y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

fn eval(gamma: f64, params: &ResonatorParams, drive: &DriveSpec, t: f64, y: Vec2) -> Result<Vec2> {
    if !y[0].is_finite() || !y[1].is_finite() {
        return Err(Error::NumericalFailure {
            t,
            reason: "non-finite state".into(),
        });
    }
    let state = OscillatorState {
        t,
        phi: y[0],
        phidot: y[1],
    };
    let (dphi, dphidot) = rhs_gamma(gamma, params, drive, &state)?;
    Ok([dphi, dphidot])
}

/// Integrates over `horizon`, sampling at t₀ + k·sample_dt. The last sample
/// is the largest grid point not beyond the horizon end.
pub fn integrate(
    params: &ResonatorParams,
    drive: &DriveSpec,
    init: &InitialConditions,
    config: &IntegratorConfig,
    horizon: TimeWindow,
) -> Result<Trajectory> {
    config.validate()?;
    init.validate()?;
    validate_params(params, drive, horizon)?;

    let gamma = if config.damping_enabled {
        params.gamma()
    } else {
        0.0
    };
    let start = initial_state(params, init, horizon.start);
    let n = (horizon.span() / config.sample_dt + 1e-9).floor() as usize;
    if n == 0 {
        return Err(Error::InvalidParameter(format!(
            "sample_dt {} exceeds the horizon span {}",
            config.sample_dt,
            horizon.span()
        )));
    }

    let mut stepper = Stepper::new(gamma, params, drive, config, start, 1.0)?;
    let mut samples = Vec::with_capacity(n + 1);
    push_sample(
        &mut samples,
        gamma,
        params,
        drive,
        start.t,
        [start.phi, start.phidot],
    )?;
    for k in 1..=n {
        let target = horizon.start + k as f64 * config.sample_dt;
        stepper.advance_to(target)?;
        push_sample(&mut samples, gamma, params, drive, stepper.t, stepper.y)?;
    }

    Ok(Trajectory {
        samples,
        params: *params,
        drive: drive.clone(),
        gamma,
    })
}

/// Integrates from `state` to `t_end` (either direction) and returns only the
/// final state. Useful for reversibility checks.
pub fn integrate_between(
    params: &ResonatorParams,
    drive: &DriveSpec,
    state: OscillatorState,
    config: &IntegratorConfig,
    t_end: f64,
) -> Result<OscillatorState> {
    config.validate()?;
    if t_end == state.t {
        return Ok(state);
    }
    let gamma = if config.damping_enabled {
        params.gamma()
    } else {
        0.0
    };
    let dir = (t_end - state.t).signum();
    let mut stepper = Stepper::new(gamma, params, drive, config, state, dir)?;
    stepper.advance_to(t_end)?;
    Ok(OscillatorState {
        t: stepper.t,
        phi: stepper.y[0],
        phidot: stepper.y[1],
    })
}

fn push_sample(
    samples: &mut Vec<TrajectorySample>,
    gamma: f64,
    params: &ResonatorParams,
    drive: &DriveSpec,
    t: f64,
    y: Vec2,
) -> Result<()> {
    let state = OscillatorState {
        t,
        phi: y[0],
        phidot: y[1],
    };
    let q = params.capacitance * (gamma * t).exp() * y[1];
    let energy = energy_a1(params, drive, &state)?;
    samples.push(TrajectorySample {
        t,
        phi: y[0],
        phidot: y[1],
        q,
        energy,
    });
    Ok(())
}
