//! Parameter sweeps over the simplex lattice-point engine.

pub mod commands;
pub mod config;
pub mod fit;
pub mod grid;
pub mod table;

use simplex_lattice::counting::CountError;
use simplex_lattice::diophantine::DiophantineError;

pub use config::{ConfigError, Format, GridKind, SweepConfig};
pub use table::{Cell, Table};

/// Raised when an identity suite reports failures (exit code 3).
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityFailure(pub usize);

impl std::fmt::Display for IdentityFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} identity check(s) failed", self.0)
    }
}

impl std::error::Error for IdentityFailure {}

/// Process exit code for an error chain.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return 2;
        }
        if cause.is::<IdentityFailure>() {
            return 3;
        }
        if let Some(CountError::BoundaryAmbiguity { .. }) = cause.downcast_ref::<CountError>() {
            return 4;
        }
        if let Some(DiophantineError::PrecisionExhausted { .. }) = cause.downcast_ref::<DiophantineError>() {
            return 4;
        }
    }
    1
}
