//! Differential operators with trigonometric-polynomial coefficients.
//!
//! `D_j = -i ∂/∂x_j`, so the symbol of `D^α` at frequency `k` is `k^α` and
//! `D_j` is formally self-adjoint under the `L²` pairing.

mod ellipticity;
mod estimate;
pub mod examples;
mod literal;
mod matrix;
mod poly;
mod scalar;

pub use ellipticity::{ellipticity_check, sphere_grid, EllipticityConfig, EllipticityReport};
pub use estimate::{boundedness_estimate, doubling_schedule, SampleConfig};
pub use literal::{EntryLiteral, OperatorLiteral, TermLiteral};
pub use matrix::{MatrixDiffOp, SymbolMatrix};
pub use poly::{determinant, Polynomial};
pub use scalar::ScalarDiffOp;
