//! Correlation quantifiers for two-qubit states.
//!
//! Every quantity with a Bell-diagonal closed form also has a numeric route
//! that works on an arbitrary density matrix, so the two can be checked
//! against each other.

mod concurrence;
mod discord;
mod geometric;

pub use concurrence::{
    concurrence, concurrence_bf_analytic, concurrence_gad_analytic, concurrence_xxx_analytic, wootters_value,
};
pub use discord::{
    classical_correlation, conditional_entropy, mutual_information, qd_bds, qd_numeric, MeasurementBasis,
    DISCORD_CLAMP_TOL,
};
pub use geometric::{closest_classical_quantum, gqd1_bds, gqd1_numeric, ClassicalQuantumState};
