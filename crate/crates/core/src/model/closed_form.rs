use crate::error::{Error, Result};
use crate::model::params::{DriveSpec, InitialConditions, ResonatorParams};

/// The frequency bracket ω²(t) = ω_r² + ε cos(ω_p t)
/// − (β ε² Q / (2 ω_r ω_p)) (1 − cos(2 ω_p t)), without the positivity check.
pub(crate) fn omega_sq_unchecked(params: &ResonatorParams, t: f64) -> f64 {
    let shift = params.beta * params.epsilon * params.epsilon * params.q_factor
        / (2.0 * params.omega_r * params.omega_p);
    params.omega_r * params.omega_r + params.epsilon * (params.omega_p * t).cos()
        - shift * (1.0 - (2.0 * params.omega_p * t).cos())
}

/// ω²(t); errors when the bracket is not strictly positive.
pub fn eval_omega_squared(params: &ResonatorParams, t: f64) -> Result<f64> {
    let b = omega_sq_unchecked(params, t);
    if b <= 0.0 {
        return Err(Error::NonPositiveFrequencySquared { t, omega_sq: b });
    }
    Ok(b)
}

/// The instantaneous angular frequency ω(t).
pub fn eval_omega(params: &ResonatorParams, t: f64) -> Result<f64> {
    Ok(eval_omega_squared(params, t)?.sqrt())
}

/// The Duffing modulation Λ(t) = 1 − 3 λ Q ε cos(ω_p t) / (2 ω_r ω_p).
pub fn eval_lambda(params: &ResonatorParams, t: f64) -> f64 {
    1.0 - 3.0 * params.lambda_corr * params.q_factor * params.epsilon * (params.omega_p * t).cos()
        / (2.0 * params.omega_r * params.omega_p)
}

/// The drive signal ξ(t).
pub fn eval_drive(drive: &DriveSpec, params: &ResonatorParams, t: f64) -> Result<f64> {
    match drive {
        DriveSpec::Zero => Ok(0.0),
        DriveSpec::Sinusoid {
            xi0,
            omega_d,
            theta,
        } => Ok(xi0 * (omega_d * t + theta).cos()),
        DriveSpec::PowerOfOmega { xi0, exponent } => {
            Ok(xi0 * eval_omega(params, t)?.powf(*exponent))
        }
        DriveSpec::Tabulated { samples } => {
            let first = samples[0];
            let last = samples[samples.len() - 1];
            if t <= first.0 {
                return Ok(first.1);
            }
            if t >= last.0 {
                return Ok(last.1);
            }
            // partition_point returns the first sample with time > t
            let hi = samples.partition_point(|(ts, _)| *ts <= t);
            let (t0, x0) = samples[hi - 1];
            let (t1, x1) = samples[hi];
            Ok(x0 + (x1 - x0) * (t - t0) / (t1 - t0))
        }
    }
}

/// Strength of the drive term in the energy expression, C ξ²(t) / (2 ω²(t)).
fn drive_term(params: &ResonatorParams, drive: &DriveSpec, t: f64) -> Result<(f64, f64)> {
    let w_sq = eval_omega_squared(params, t)?;
    let xi = eval_drive(drive, params, t)?;
    Ok((params.capacitance * xi * xi / (2.0 * w_sq), w_sq))
}

/// Closed-form oscillator energy
/// E(t) = e^{−ω_r t/Q} (ω(t)/ω(0)) (E(0) + Cξ²(0)/(2ω²(0))) − Cξ²(t)/(2ω²(t)).
///
/// Grouped so that E(0) comes back exactly: the two drive terms cancel
/// bit-for-bit at t = 0.
pub fn closed_form_energy(
    params: &ResonatorParams,
    drive: &DriveSpec,
    init: &InitialConditions,
    t: f64,
) -> Result<f64> {
    let e0 = match init {
        InitialConditions::Energy { e0 } => *e0,
        InitialConditions::State { .. } => return Err(Error::InitialEnergyRequired),
    };
    let (s0, w0_sq) = drive_term(params, drive, 0.0)?;
    let (s_t, wt_sq) = drive_term(params, drive, t)?;
    let decay = (-params.gamma() * t).exp();
    let ratio = (wt_sq / w0_sq).sqrt();
    Ok(decay * ratio * e0 + (decay * ratio * s0 - s_t))
}

/// Closed-form Rayleigh–Lorentz invariant
/// I(t) = e^{−ω_r t/Q}/ω(0) (E(0) + Cξ²(0)/(2ω²(0))) − Cξ²(t)/(2ω³(t)).
///
/// Identically equals `closed_form_energy` / `eval_omega`.
pub fn closed_form_invariant(
    params: &ResonatorParams,
    drive: &DriveSpec,
    init: &InitialConditions,
    t: f64,
) -> Result<f64> {
    let e0 = match init {
        InitialConditions::Energy { e0 } => *e0,
        InitialConditions::State { .. } => return Err(Error::InitialEnergyRequired),
    };
    let (s0, w0_sq) = drive_term(params, drive, 0.0)?;
    let (s_t, wt_sq) = drive_term(params, drive, t)?;
    let decay = (-params.gamma() * t).exp();
    Ok(decay * (e0 + s0) / w0_sq.sqrt() - s_t / wt_sq.sqrt())
}
