//! Exact lattice-point counting in weighted right-angled simplices, the
//! multiple Bernoulli polynomials that give their leading terms, and the
//! Diophantine quantities that control the error terms.

pub mod bernoulli;
pub mod combinatorics;
pub mod counting;
pub mod diophantine;
pub mod fourier;
pub mod latticesums;
pub mod numeric;
pub mod quadrature;
pub mod surd;
pub mod weights;

pub use numeric::HighPrec;
pub use surd::Surd;
pub use weights::{Real, Weights};
