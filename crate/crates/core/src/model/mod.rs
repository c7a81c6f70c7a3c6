//! Closed-form evaluation of the resonator's analytic expressions: the
//! pumped frequency ω(t), the Duffing modulation Λ(t), the drive ξ(t), the
//! energy E(t), and the adiabatic invariant I(t) = E(t)/ω(t), plus parameter
//! validation guarding ω²(t) > 0.

mod closed_form;
mod params;
mod validate;

pub use closed_form::{
    closed_form_energy, closed_form_invariant, eval_drive, eval_lambda, eval_omega,
    eval_omega_squared,
};
pub use params::{DriveSpec, InitialConditions, ResonatorParams, TimeWindow};
pub use validate::{validate_params, validation_report, ValidationReport};
