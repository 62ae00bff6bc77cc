//! Longitudinal flight dynamics toolkit: model assembly from stability
//! derivatives, controllability/observability and modal analysis, LQR
//! synthesis through the continuous algebraic Riccati equation, and
//! fixed-step simulation of microburst encounters.

pub mod analysis;
pub mod error;
pub mod io;
pub mod plot;
pub mod report;
pub mod riccati;
pub mod sim;
pub mod statespace;
pub mod wind;

pub use error::{Error, Result};

#[cfg(test)]
pub(crate) fn navion_model() -> statespace::LongitudinalModel {
    use statespace::{assemble_model, FlightCondition, StabilityDerivatives};
    assemble_model(
        &StabilityDerivatives {
            X_u: -0.0454,
            X_alpha: 1.9609,
            X_q: 0.0,
            X_de: 0.0,
            Z_u: -0.3722,
            Z_alpha: -116.9207,
            Z_q: 0.0,
            Z_de: -8.7016,
            M_u: 0.0,
            M_alpha: -8.9246,
            M_q: -2.0968,
            M_de: -12.0606,
        },
        FlightCondition { u0: 54.0, g: 9.8066 },
    )
    .expect("valid reference data")
}
