use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{linalg, SolveResult};
use crate::error::{Error, Result};
use crate::operators::{ellipticity_check, EllipticityConfig, MatrixDiffOp};
use crate::rofunc::RoFunction;
use crate::torus::{band, hnorm_vec, Frequency, TrigPoly, TrigVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GalerkinConfig {
    /// Singular values below `rank_tol · σ_max` span the numerical kernel.
    pub rank_tol: f64,
    /// Largest accepted matrix dimension `p (2K+1)^n`.
    pub max_rows: usize,
    /// Allowed entrywise gap between the conjugate transpose and the adjoint's matrix, relative to the largest entry.
    pub adjoint_tol: f64,
    pub ellipticity: EllipticityConfig,
}

impl Default for GalerkinConfig {
    fn default() -> Self {
        GalerkinConfig {
            rank_tol: 1e-8,
            max_rows: 20_000,
            adjoint_tol: 1e-8,
            ellipticity: EllipticityConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GalerkinResult {
    pub solve: SolveResult,
    pub bandwidth: u64,
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    /// Largest entrywise gap between `M*` and the adjoint's Galerkin matrix.
    pub adjoint_discrepancy: f64,
    /// Smallest few singular values, ascending.
    pub smallest_singular_values: Vec<f64>,
}

/// Basis `e^{ik·x} e_j` for `|k|∞ ≤ K`, ordered by frequency then component.
fn basis(n: usize, bandwidth: u64) -> Vec<Frequency> {
    band(n, bandwidth).collect()
}

/// `M[(q,i),(k,j)] = (A e^{ik·x} e_j, e^{iq·x} e_i)` over the band `|k|∞, |q|∞ ≤ K`.
pub fn galerkin_matrix(a: &MatrixDiffOp, bandwidth: u64) -> Result<DMatrix<Complex64>> {
    let p = a.p();
    let ks = basis(a.dim(), bandwidth);
    let index: std::collections::HashMap<&Frequency, usize> =
        ks.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let dim = p * ks.len();
    let columns = (0..dim)
        .into_par_iter()
        .map(|col| {
            let (kpos, j) = (col / p, col % p);
            let e = TrigVector::unit(
                p,
                j,
                TrigPoly::monomial(ks[kpos].clone(), Complex64::new(1.0, 0.0)),
            );
            let image = a.apply(&e)?;
            let mut out = Vec::new();
            for (i, comp) in image.components().iter().enumerate() {
                for (q, c) in comp.iter() {
                    if let Some(&qpos) = index.get(q) {
                        out.push((qpos * p + i, *c));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut m = DMatrix::zeros(dim, dim);
    for (col, entries) in columns.into_iter().enumerate() {
        for (row, c) in entries {
            m[(row, col)] = c;
        }
    }
    Ok(m)
}

/// Least-squares solve of the Galerkin truncation of `Au = f` to bandwidth `K`.
///
/// The returned `u` is the minimum-norm solution, hence orthogonal to the
/// numerical kernel. The residual is measured with the untruncated operator.
pub fn solve_galerkin(
    a: &MatrixDiffOp,
    f: &TrigVector,
    bandwidth: u64,
    phi: &RoFunction,
    cfg: &GalerkinConfig,
) -> Result<GalerkinResult> {
    let p = a.p();
    let n = a.dim();
    if f.p() != p || f.dim() != n {
        return Err(Error::ShapeMismatch(format!(
            "data is a {}-vector on T^{}, operator is {p}x{p} on T^{n}",
            f.p(),
            f.dim()
        )));
    }
    let rows = (2 * bandwidth as usize + 1)
        .checked_pow(n as u32)
        .and_then(|v| v.checked_mul(p))
        .unwrap_or(usize::MAX);
    if rows > cfg.max_rows {
        return Err(Error::MatrixTooLarge {
            rows,
            cap: cfg.max_rows,
        });
    }
    let coef_bw = a.coefficient_bandwidth();
    if f.bandwidth() + coef_bw > bandwidth {
        return Err(Error::Domain(format!(
            "data bandwidth {} plus coefficient bandwidth {coef_bw} exceeds K = {bandwidth}",
            f.bandwidth()
        )));
    }
    let ell = ellipticity_check(a, &cfg.ellipticity);
    if !ell.elliptic {
        return Err(Error::NotElliptic {
            min_abs_det: ell.min_abs_det,
        });
    }

    let m = galerkin_matrix(a, bandwidth)?;
    let m_adj = galerkin_matrix(&a.adjoint(), bandwidth)?;
    let scale = m.iter().map(|c| c.norm()).fold(1.0, f64::max);
    let adjoint_discrepancy = m
        .adjoint()
        .iter()
        .zip(m_adj.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    if adjoint_discrepancy > cfg.adjoint_tol * scale {
        return Err(Error::Consistency(format!(
            "conjugate transpose and adjoint Galerkin matrices differ by {adjoint_discrepancy:e}"
        )));
    }

    let ks = basis(n, bandwidth);
    let b = DVector::from_iterator(
        ks.len() * p,
        ks.iter()
            .flat_map(|k| f.components().iter().map(move |c| c.coeff(k))),
    );
    let s = linalg::svd(m);
    let thr = cfg.rank_tol * s.sigma[0];
    let x = s.solve(&b, thr);
    let left = s.left_null(thr);
    let violation = left.iter().map(|w| w.dotc(&b).norm()).fold(0.0, f64::max);

    let mut comps = vec![Vec::with_capacity(ks.len()); p];
    for (kpos, k) in ks.iter().enumerate() {
        for (j, comp) in comps.iter_mut().enumerate() {
            comp.push((k.clone(), x[kpos * p + j]));
        }
    }
    let u = TrigVector::new(
        comps
            .into_iter()
            .map(|t| TrigPoly::from_terms(n, t))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let residual = hnorm_vec(&(&a.apply(&u)? - f), phi)?;
    let mut smallest: Vec<f64> = s.sigma.iter().rev().take(4).copied().collect();
    smallest.dedup();
    Ok(GalerkinResult {
        kernel_dim: s.nullity(thr),
        cokernel_dim: left.len(),
        solve: SolveResult {
            u,
            residual,
            compatibility_violation: violation,
            projected: true,
        },
        bandwidth,
        adjoint_discrepancy,
        smallest_singular_values: smallest,
    })
}
