//! Error type shared by all modules.

/// Errors raised while configuring or running resonator computations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter or input violates a type invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The frequency bracket ω²(t) is not strictly positive, so the model
    /// leaves the oscillatory regime it presumes.
    #[error("non-positive frequency squared: omega^2 = {omega_sq} at t = {t}")]
    NonPositiveFrequencySquared { t: f64, omega_sq: f64 },

    /// The integrator could not continue (step underflow or non-finite state).
    #[error("numerical failure at t = {t}: {reason}")]
    NumericalFailure { t: f64, reason: String },

    /// A cycle-based operation needs more oscillation cycles than the
    /// trajectory contains.
    #[error("insufficient cycles: found {found}, need {needed}")]
    InsufficientCycles { found: usize, needed: usize },

    /// Fewer than two series samples fall inside the requested window.
    #[error("window [{start}, {end}] contains fewer than two samples")]
    EmptyWindow { start: f64, end: f64 },

    /// The optimization objective does not vary over the search interval
    /// (zero drive amplitude or a degenerate window).
    #[error("flat objective over the search interval (is the drive amplitude zero?)")]
    FlatObjective,

    /// A closed-form evaluation was given state initial conditions; it needs
    /// the initial energy.
    #[error("closed-form evaluation requires an Energy initial condition")]
    InitialEnergyRequired,

    /// The operation is derived for the linear oscillator only.
    #[error("operation requires alpha = 0 (linear oscillator), got alpha = {0}")]
    NonlinearUnsupported(f64),

    /// A sweep point failed; names the offending axis value.
    #[error("sweep point {axis} = {value}: {source}")]
    SweepPointFailed {
        axis: String,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
