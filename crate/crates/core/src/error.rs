use alloc::boxed::Box;

/// Errors produced by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("state vector is (numerically) zero")]
    ZeroVector,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{name} = {value} is outside [{low}, {high}]")]
    OutOfRange { name: &'static str, value: f64, low: f64, high: f64 },

    #[error("density matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("density matrix trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("density matrix is not positive semidefinite (determinant {0:e})")]
    NotPositive(f64),

    #[error("time step must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("invalid noise model: {0}")]
    InvalidNoiseModel(&'static str),

    #[error("cannot estimate from an empty sample")]
    EmptySample,

    #[error("projection branch has zero probability ({0:e})")]
    ZeroProbabilityBranch(f64),

    #[error("cell {cell} is mixed (purity {purity}); erasure needs a pure state")]
    MixedStateCell { cell: usize, purity: f64 },

    #[error("{0} must be positive")]
    NonPositiveInput(&'static str),

    #[error("pore diameter {diameter} nm exceeds pitch {pitch} nm")]
    GeometryViolation { diameter: f64, pitch: f64 },

    #[error("redundancy must be at least 1")]
    NoCells,

    #[error("time series cycle index {next} does not follow {last}")]
    NonIncreasingCycle { last: u64, next: u64 },

    #[error("repetition {repetition}, cycle {cycle}: {source}")]
    AtCycle {
        repetition: u64,
        cycle: u64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any cycle context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtCycle { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
