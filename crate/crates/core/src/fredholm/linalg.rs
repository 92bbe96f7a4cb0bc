use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// SVD with singular values sorted in decreasing order and both factors square.
pub(crate) struct SortedSvd {
    pub u: DMatrix<Complex64>,
    pub sigma: Vec<f64>,
    /// Right singular vectors as columns.
    pub v: DMatrix<Complex64>,
}

pub(crate) fn svd(m: DMatrix<Complex64>) -> SortedSvd {
    let (rows, cols) = m.shape();
    debug_assert_eq!(rows, cols, "square systems only");
    let s = m.svd(true, true);
    let u = s.u.expect("requested");
    let v = s.v_t.expect("requested").adjoint();
    let mut order: Vec<usize> = (0..s.singular_values.len()).collect();
    order.sort_by(|&a, &b| s.singular_values[b].total_cmp(&s.singular_values[a]));
    SortedSvd {
        u: DMatrix::from_fn(rows, order.len(), |i, j| u[(i, order[j])]),
        sigma: order.iter().map(|&i| s.singular_values[i]).collect(),
        v: DMatrix::from_fn(cols, order.len(), |i, j| v[(i, order[j])]),
    }
}

impl SortedSvd {
    /// Number of singular values at or below `threshold`.
    pub fn nullity(&self, threshold: f64) -> usize {
        self.sigma.iter().filter(|&&s| s <= threshold).count()
    }

    pub fn rank(&self, threshold: f64) -> usize {
        self.sigma.len() - self.nullity(threshold)
    }

    /// Minimum-norm least-squares solution, treating singular values at or
    /// below `threshold` as zero.
    pub fn solve(&self, b: &DVector<Complex64>, threshold: f64) -> DVector<Complex64> {
        let r = self.rank(threshold);
        let mut x = DVector::zeros(self.v.nrows());
        for i in 0..r {
            let coef = self.u.column(i).dotc(b) / self.sigma[i];
            x += self.v.column(i) * coef;
        }
        x
    }

    /// Right null vectors (kernel of the matrix).
    pub fn right_null(&self, threshold: f64) -> Vec<DVector<Complex64>> {
        let r = self.rank(threshold);
        (r..self.v.ncols())
            .map(|i| self.v.column(i).into_owned())
            .collect()
    }

    /// Left null vectors (kernel of the conjugate transpose).
    pub fn left_null(&self, threshold: f64) -> Vec<DVector<Complex64>> {
        let r = self.rank(threshold);
        (r..self.u.ncols())
            .map(|i| self.u.column(i).into_owned())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn min_norm_solution_of_singular_system() {
        // diag(0, 2): min-norm solution of x = (1, 4)^T restricted to the range is (0, 2).
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(0.0), c(2.0)]);
        let s = svd(m);
        assert_eq!(s.sigma, vec![2.0, 0.0]);
        let x = s.solve(&DVector::from_vec(vec![c(1.0), c(4.0)]), 1e-12);
        assert!((x[0]).norm() < 1e-15 && (x[1] - c(2.0)).norm() < 1e-15);
        assert_eq!(s.right_null(1e-12).len(), 1);
    }

    #[test]
    fn inverse_of_rotation() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(-1.0), c(0.0)]);
        let s = svd(m.clone());
        let b = DVector::from_vec(vec![c(1.0), c(0.0)]);
        let x = s.solve(&b, 1e-12);
        assert!((&m * &x - b).norm() < 1e-14);
    }
}
