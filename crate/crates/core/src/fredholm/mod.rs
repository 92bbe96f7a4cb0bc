//! Solvability of `Au = f`: kernel, cokernel, index, compatibility, solvers
//! and the projectors onto the complements of `N` and `N⁺`.

mod galerkin;
mod linalg;
mod singular;

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use galerkin::{galerkin_matrix, solve_galerkin, GalerkinConfig, GalerkinResult};
pub use singular::{singular_frequencies, Guarantee, SingularConfig, SingularScan};

use crate::error::{Error, Result};
use crate::operators::MatrixDiffOp;
use crate::rofunc::RoFunction;
use crate::torus::{hnorm_vec, inner_product, Frequency, TrigPoly, TrigVector};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FredholmReport {
    /// Orthonormal basis of `N`.
    pub kernel_basis: Vec<TrigVector>,
    /// Orthonormal basis of `N⁺`.
    pub cokernel_basis: Vec<TrigVector>,
    pub index: i64,
    /// Frequencies where `A(k)` is singular, with the nullity of `A(k)`.
    pub singular_frequencies: Vec<(Frequency, usize)>,
    /// Nullity of `A(k)*` at the same frequencies.
    pub adjoint_nullities: Vec<usize>,
    pub guarantee: Guarantee,
    pub scan_radius: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveResult {
    pub u: TrigVector,
    /// `‖Au - f‖` in `(H^φ)^p`.
    pub residual: f64,
    /// `max |(f, v)|` over unit cokernel directions met by the data.
    pub compatibility_violation: f64,
    /// `u` is orthogonal to the kernel.
    pub projected: bool,
}

fn to_dvector(u: &TrigVector, k: &Frequency) -> DVector<Complex64> {
    DVector::from_iterator(u.p(), u.components().iter().map(|c| c.coeff(k)))
}

fn mode(p: usize, k: &Frequency, v: &DVector<Complex64>) -> TrigVector {
    TrigVector::new(
        (0..p)
            .map(|j| TrigPoly::monomial(k.clone(), v[j]))
            .collect(),
    )
    .expect("p ≥ 1")
}

/// Kernel and cokernel of a constant-coefficient elliptic system.
///
/// Each singular frequency `k` contributes `e^{ik·x} v` for `v` in the null
/// space of `A(k)` to `N`, and `e^{ik·x} w` for `w` in the null space of
/// `A(k)*` to `N⁺`.
pub fn kernel_cokernel(a: &MatrixDiffOp, cfg: &SingularConfig) -> Result<FredholmReport> {
    let scan = singular_frequencies(a, cfg)?;
    let p = a.p();
    let mut kernel = Vec::new();
    let mut cokernel = Vec::new();
    let mut adjoint_nullities = Vec::new();
    for (k, _) in &scan.frequencies {
        let s = linalg::svd(a.full_symbol_const(k)?);
        let thr = cfg.rank_threshold(&s.sigma);
        kernel.extend(s.right_null(thr).iter().map(|v| mode(p, k, v)));
        let left = s.left_null(thr);
        adjoint_nullities.push(left.len());
        cokernel.extend(left.iter().map(|w| mode(p, k, w)));
    }
    Ok(FredholmReport {
        index: kernel.len() as i64 - cokernel.len() as i64,
        kernel_basis: kernel,
        cokernel_basis: cokernel,
        singular_frequencies: scan.frequencies,
        adjoint_nullities,
        guarantee: scan.guarantee,
        scan_radius: scan.radius,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveConfig {
    /// Singular values at or below `rank_tol · max(1, σ_max)` count as zero.
    pub rank_tol: f64,
    /// Data is compatible when every violation is at most `tol · (1 + ‖f‖_{L²})`.
    pub tol: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            rank_tol: 1e-10,
            tol: 1e-10,
        }
    }
}

/// Frequency-by-frequency solve of a constant-coefficient system, returning
/// the minimum-norm solution (the one orthogonal to `N`).
pub fn solve_const(
    a: &MatrixDiffOp,
    f: &TrigVector,
    phi: &RoFunction,
    cfg: &SolveConfig,
) -> Result<SolveResult> {
    if !a.is_constant() {
        return Err(Error::NonConstantCoefficients);
    }
    if f.p() != a.p() || f.dim() != a.dim() {
        return Err(Error::ShapeMismatch(format!(
            "data is a {}-vector on T^{}, operator is {}x{} on T^{}",
            f.p(),
            f.dim(),
            a.p(),
            a.p(),
            a.dim()
        )));
    }
    let p = a.p();
    let mut support: Vec<Frequency> = f
        .components()
        .iter()
        .flat_map(|c| c.iter().map(|(k, _)| k.clone()))
        .collect();
    support.sort();
    support.dedup();

    struct Local {
        k: Frequency,
        u: DVector<Complex64>,
        violation: f64,
        witness: Option<DVector<Complex64>>,
    }
    let locals = support
        .par_iter()
        .map(|k| {
            let s = linalg::svd(a.full_symbol_const(k)?);
            let thr = cfg.rank_tol * s.sigma[0].max(1.0);
            let fk = to_dvector(f, k);
            let mut violation = 0.0;
            let mut witness = None;
            for w in s.left_null(thr) {
                let v = w.dotc(&fk).norm();
                if v > violation {
                    violation = v;
                    witness = Some(w);
                }
            }
            Ok(Local {
                k: k.clone(),
                u: s.solve(&fk, thr),
                violation,
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let worst = locals
        .iter()
        .filter(|l| l.witness.is_some())
        .max_by(|x, y| x.violation.total_cmp(&y.violation));
    let violation = worst.map_or(0.0, |l| l.violation);
    if let Some(l) = worst {
        if violation > cfg.tol * (1.0 + f.l2_norm_sq().sqrt()) {
            return Err(Error::IncompatibleData {
                violation,
                cokernel_vector: Box::new(mode(p, &l.k, l.witness.as_ref().expect("filtered"))),
            });
        }
    }

    let mut comps = vec![Vec::new(); p];
    for l in &locals {
        for (j, comp) in comps.iter_mut().enumerate() {
            comp.push((l.k.clone(), l.u[j]));
        }
    }
    let u = TrigVector::new(
        comps
            .into_iter()
            .map(|terms| TrigPoly::from_terms(a.dim(), terms))
            .collect::<Result<Vec<_>>>()?,
    )?;
    let residual = hnorm_vec(&(&a.apply(&u)? - f), phi)?;
    Ok(SolveResult {
        u,
        residual,
        compatibility_violation: violation,
        projected: true,
    })
}

fn project(u: &TrigVector, basis: &[TrigVector]) -> Result<TrigVector> {
    let mut out = u.clone();
    for w in basis {
        let c = inner_product(u, w)?;
        out = &out - &w.scale(c);
    }
    Ok(out)
}

/// Removes the components of `u` along the kernel basis, so that `(Pu, w) = 0` for all `w ∈ N`.
pub fn project_p(u: &TrigVector, report: &FredholmReport) -> Result<TrigVector> {
    project(u, &report.kernel_basis)
}

/// Removes the components of `f` along the cokernel basis, so that `(P⁺f, v) = 0` for all `v ∈ N⁺`.
pub fn project_pplus(f: &TrigVector, report: &FredholmReport) -> Result<TrigVector> {
    project(f, &report.cokernel_basis)
}
