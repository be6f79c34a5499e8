use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("expected a {expected}x{expected} matrix, got {actual}x{actual}")]
    BadDimension { expected: usize, actual: usize },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("temperature must be positive and finite, got T = {t} (J = {j})")]
    InvalidTemperature { j: f64, t: f64 },

    #[error("coefficients ({0}, {1}, {2}) do not describe a physical Bell-diagonal state")]
    UnphysicalCoefficients(f64, f64, f64),

    #[error("{name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("no entanglement at the cold end of the bracket (J = {j}, T = {t})")]
    NoEntanglementAnywhere { j: f64, t: f64 },

    #[error("invalid sweep configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown figure id {0} (expected 1..=8)")]
    UnknownFigure(u8),

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
