use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Circuit and pump constants of the resonator, in dimensionless simulation
/// units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonatorParams {
    /// Resonant angular frequency ω_r (> 0).
    pub omega_r: f64,
    /// Quality factor Q (> 0); the damping rate is ω_r/Q.
    pub q_factor: f64,
    /// Pump strength ε (adds to ω_r² inside the frequency bracket).
    pub epsilon: f64,
    /// Pump angular frequency ω_p (> 0).
    pub omega_p: f64,
    /// Dimensionless pump-shift parameter β.
    pub beta: f64,
    /// Duffing coefficient α.
    pub alpha: f64,
    /// Correction λ to the Duffing nonlinearity from pump modulation.
    pub lambda_corr: f64,
    /// Resonator capacitance C (> 0).
    pub capacitance: f64,
}

impl ResonatorParams {
    /// Damping rate ω_r/Q.
    pub fn gamma(&self) -> f64 {
        self.omega_r / self.q_factor
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_r", self.omega_r),
            ("q_factor", self.q_factor),
            ("epsilon", self.epsilon),
            ("omega_p", self.omega_p),
            ("beta", self.beta),
            ("alpha", self.alpha),
            ("lambda_corr", self.lambda_corr),
            ("capacitance", self.capacitance),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("omega_r", self.omega_r),
            ("q_factor", self.q_factor),
            ("omega_p", self.omega_p),
            ("capacitance", self.capacitance),
        ] {
            if v <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// The external signal ξ(t).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DriveSpec {
    /// ξ(t) = 0.
    Zero,
    /// ξ(t) = ξ₀ cos(ω_d t + θ).
    Sinusoid { xi0: f64, omega_d: f64, theta: f64 },
    /// ξ(t) = ξ₀ ω(t)^p; p = 3/2 is the drift-free exponent.
    PowerOfOmega { xi0: f64, exponent: f64 },
    /// Linear interpolation through ordered (t, ξ) samples, clamped at the
    /// endpoints.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DriveSpec::Zero => Ok(()),
            DriveSpec::Sinusoid {
                xi0,
                omega_d,
                theta,
            } => {
                for (name, v) in [("xi0", *xi0), ("omega_d", *omega_d), ("theta", *theta)] {
                    if !v.is_finite() {
                        return Err(Error::InvalidParameter(format!(
                            "drive {name} must be finite, got {v}"
                        )));
                    }
                }
                if *omega_d < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "drive omega_d must be >= 0, got {omega_d}"
                    )));
                }
                Ok(())
            }
            DriveSpec::PowerOfOmega { xi0, exponent } => {
                if !xi0.is_finite() || !exponent.is_finite() {
                    return Err(Error::InvalidParameter(
                        "drive xi0 and exponent must be finite".into(),
                    ));
                }
                Ok(())
            }
            DriveSpec::Tabulated { samples } => {
                if samples.len() < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "tabulated drive needs >= 2 samples, got {}",
                        samples.len()
                    )));
                }
                for w in samples.windows(2) {
                    if w[1].0 <= w[0].0 {
                        return Err(Error::InvalidParameter(format!(
                            "tabulated drive times must be strictly increasing ({} then {})",
                            w[0].0, w[1].0
                        )));
                    }
                }
                if samples
                    .iter()
                    .any(|(t, x)| !t.is_finite() || !x.is_finite())
                {
                    return Err(Error::InvalidParameter(
                        "tabulated drive samples must be finite".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// How the oscillator starts out: either an initial energy (realized as an
/// all-kinetic state at φ = 0) or an explicit phase-space point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InitialConditions {
    Energy { e0: f64 },
    State { phi0: f64, phidot0: f64 },
}

impl InitialConditions {
    pub fn validate(&self) -> Result<()> {
        match self {
            InitialConditions::Energy { e0 } => {
                if !e0.is_finite() || *e0 < 0.0 {
                    return Err(Error::InvalidParameter(format!(
                        "initial energy must be finite and >= 0, got {e0}"
                    )));
                }
                Ok(())
            }
            InitialConditions::State { phi0, phidot0 } => {
                if !phi0.is_finite() || !phidot0.is_finite() {
                    return Err(Error::InvalidParameter(
                        "initial state must be finite".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// A closed time interval [start, end] with start < end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
}

impl TimeWindow {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() || end <= start {
            return Err(Error::InvalidParameter(format!(
                "time window requires finite start < end, got [{start}, {end}]"
            )));
        }
        Ok(Self { start, end })
    }

    pub fn span(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start && t <= self.end
    }
}
