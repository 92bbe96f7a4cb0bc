use nalgebra::DMatrix;
use num_complex::Complex64;

use super::scalar::ScalarDiffOp;
use crate::error::{Error, Result};
use crate::torus::{Frequency, TrigPoly, TrigVector};

/// Principal symbol or full symbol evaluated at one point.
pub type SymbolMatrix = DMatrix<Complex64>;

/// A `p × p` system `Σ_k A_{j,k} u_k = f_j` on the n-torus.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDiffOp {
    p: usize,
    n: usize,
    /// Row-major.
    entries: Vec<ScalarDiffOp>,
}

impl MatrixDiffOp {
    pub fn new(rows: Vec<Vec<ScalarDiffOp>>) -> Result<Self> {
        let p = rows.len();
        if p == 0 {
            return Err(Error::ShapeMismatch(
                "operator needs at least one row".into(),
            ));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != p) {
            return Err(Error::ShapeMismatch(format!(
                "{p} rows but a row of length {}",
                r.len()
            )));
        }
        let n = rows[0][0].dim();
        let entries: Vec<ScalarDiffOp> = rows.into_iter().flatten().collect();
        if let Some(e) = entries.iter().find(|e| e.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: e.dim(),
            });
        }
        Ok(MatrixDiffOp { p, n, entries })
    }

    /// `diag(L_1, …, L_p)`
    pub fn diagonal(diag: Vec<ScalarDiffOp>) -> Result<Self> {
        let p = diag.len();
        let n = diag.first().map(ScalarDiffOp::dim).unwrap_or(0);
        let mut rows = vec![vec![ScalarDiffOp::zero(n); p]; p];
        for (j, l) in diag.into_iter().enumerate() {
            rows[j][j] = l;
        }
        Self::new(rows)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, j: usize, k: usize) -> &ScalarDiffOp {
        &self.entries[j * self.p + k]
    }

    pub fn rows(&self) -> Vec<Vec<ScalarDiffOp>> {
        self.entries.chunks(self.p).map(<[_]>::to_vec).collect()
    }

    /// `m_k = max_j ord A_{j,k}`
    pub fn column_orders(&self) -> Vec<u32> {
        (0..self.p)
            .map(|k| {
                (0..self.p)
                    .map(|j| self.entry(j, k).order())
                    .max()
                    .unwrap_or(0)
            })
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(ScalarDiffOp::is_constant)
    }

    pub fn coefficient_bandwidth(&self) -> u64 {
        self.entries
            .iter()
            .map(ScalarDiffOp::coefficient_bandwidth)
            .max()
            .unwrap_or(0)
    }

    /// Component `j` of the result is `Σ_k A_{j,k} u_k`.
    pub fn apply(&self, u: &TrigVector) -> Result<TrigVector> {
        if u.p() != self.p || u.dim() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} operator on T^{} applied to a {}-vector on T^{}",
                self.p,
                self.p,
                self.n,
                u.p(),
                u.dim()
            )));
        }
        let mut out = Vec::with_capacity(self.p);
        for j in 0..self.p {
            let mut acc = TrigPoly::zero(self.n);
            for k in 0..self.p {
                acc = &acc + &self.entry(j, k).apply(u.component(k))?;
            }
            out.push(acc);
        }
        TrigVector::new(out)
    }

    /// `(A⁺)_{k,j} = (A_{j,k})⁺`
    pub fn adjoint(&self) -> Self {
        let p = self.p;
        let entries = (0..p * p)
            .map(|idx| {
                let (k, j) = (idx / p, idx % p);
                self.entry(j, k).adjoint()
            })
            .collect();
        MatrixDiffOp {
            p,
            n: self.n,
            entries,
        }
    }

    /// Entry `(j,k)` is `Σ_{|α| = m_k} a_α(x) ξ^α`; entries of lower order vanish.
    pub fn principal_symbol(&self, x: &[f64], xi: &[f64]) -> SymbolMatrix {
        let m = self.column_orders();
        DMatrix::from_fn(self.p, self.p, |j, k| {
            self.entry(j, k).homogeneous_symbol(m[k], x, xi)
        })
    }

    /// `A(k)` with entries `Σ_α a_α k^α` over all orders.
    pub fn full_symbol_const(&self, k: &Frequency) -> Result<SymbolMatrix> {
        if !self.is_constant() {
            return Err(Error::NonConstantCoefficients);
        }
        if k.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: k.dim(),
            });
        }
        Ok(DMatrix::from_fn(self.p, self.p, |j, l| {
            self.entry(j, l).full_symbol_const(k)
        }))
    }
}
