//! Reference systems used by the test suite and the command-line presets.

use num_complex::Complex64;

use super::{MatrixDiffOp, ScalarDiffOp};
use crate::torus::TrigPoly;

fn constant(n: usize, c: f64) -> ScalarDiffOp {
    ScalarDiffOp::constant(n, Complex64::new(c, 0.0))
}

fn d(n: usize, j: usize) -> ScalarDiffOp {
    ScalarDiffOp::d(n, j)
}

/// `diag(D_1, D_1)` on `T^n`.
pub fn diag_d(n: usize) -> MatrixDiffOp {
    MatrixDiffOp::diagonal(vec![d(n, 0), d(n, 0)]).expect("2x2")
}

/// `[[D - 1, 0], [0, D]]` on `T¹`.
pub fn shifted_diag() -> MatrixDiffOp {
    MatrixDiffOp::diagonal(vec![&d(1, 0) - &constant(1, 1.0), d(1, 0)]).expect("2x2")
}

/// `[[D, 1], [-1, D]]` on `T¹`.
pub fn rotation() -> MatrixDiffOp {
    MatrixDiffOp::new(vec![
        vec![d(1, 0), constant(1, 1.0)],
        vec![constant(1, -1.0), d(1, 0)],
    ])
    .expect("2x2")
}

/// `[[D + eps·2cos x, 1], [-1, D]]` on `T¹`.
pub fn variable_rotation(eps: f64) -> MatrixDiffOp {
    let top = &d(1, 0) + &ScalarDiffOp::multiplication(TrigPoly::cos(vec![1], 2.0 * eps));
    MatrixDiffOp::new(vec![
        vec![top, constant(1, 1.0)],
        vec![constant(1, -1.0), d(1, 0)],
    ])
    .expect("2x2")
}

/// `[[D, 1], [1, D]]` on `T¹`.
pub fn coupled() -> MatrixDiffOp {
    MatrixDiffOp::new(vec![
        vec![d(1, 0), constant(1, 1.0)],
        vec![constant(1, 1.0), d(1, 0)],
    ])
    .expect("2x2")
}

/// `[[D_1, -D_2], [D_2, D_1]]` on `T²`.
pub fn cauchy_riemann() -> MatrixDiffOp {
    MatrixDiffOp::new(vec![vec![d(2, 0), -&d(2, 1)], vec![d(2, 1), d(2, 0)]]).expect("2x2")
}

/// `[[D_1, D_2], [D_2, D_1]]` on `T²`, determinant `ξ₁² - ξ₂²`.
pub fn hyperbolic() -> MatrixDiffOp {
    MatrixDiffOp::new(vec![vec![d(2, 0), d(2, 1)], vec![d(2, 1), d(2, 0)]]).expect("2x2")
}

/// `p × p` identity on `T^n`.
pub fn identity(p: usize, n: usize) -> MatrixDiffOp {
    MatrixDiffOp::diagonal(vec![ScalarDiffOp::identity(n); p]).expect("square")
}
