//! Hörmander spaces `H^φ` with RO-varying smoothness parameter, realized
//! spectrally on the flat n-torus, together with the machinery needed to study
//! Petrovskii elliptic systems in that scale.
//!
//! The crate is organized bottom-up:
//!
//! * [`rofunc`]: the RO-varying weights `φ`, their Matuszewska indices,
//!   interpolation parameters and convergence decisions for weighted integrals.
//! * [`torus`]: bandlimited functions on the torus and the `H^φ` norms.
//! * [`operators`]: scalar and matrix differential operators, principal
//!   symbols, ellipticity and formal adjoints.
//! * [`fredholm`]: kernel, cokernel, index and solvers for `Au = f`.
//! * [`verify`]: executable experiments producing auditable reports.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fredholm;
pub mod operators;
pub mod rofunc;
pub mod torus;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
