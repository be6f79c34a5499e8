//! Quantum discord, trace-norm geometric discord and Wootters concurrence
//! for the two-qubit thermal Heisenberg XXX state, with and without
//! bit-flip or generalized amplitude damping noise.

pub mod channels;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod optimize;
pub mod states;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
