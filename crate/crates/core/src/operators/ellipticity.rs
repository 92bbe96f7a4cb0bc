use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::scalar::real_pow;
use super::MatrixDiffOp;
use crate::torus::{band, MultiIndex};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EllipticityConfig {
    /// Grid points per torus axis.
    pub x_points: usize,
    /// Directions on the unit circle for `n = 2`; sets the cube-shell resolution for `n ≥ 3`.
    pub sphere_points: usize,
    pub tol: f64,
}

impl Default for EllipticityConfig {
    fn default() -> Self {
        EllipticityConfig {
            x_points: 64,
            sphere_points: 360,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipticityReport {
    pub min_abs_det: f64,
    pub elliptic: bool,
    pub argmin_x: Vec<f64>,
    pub argmin_xi: Vec<f64>,
    pub x_grid_points: usize,
    pub sphere_grid_points: usize,
    /// Largest distance from a unit vector to the nearest grid direction.
    pub sphere_spacing: f64,
}

/// Unit directions used for symbol scans, with the covering radius of the set.
pub fn sphere_grid(n: usize, points: usize) -> (Vec<Vec<f64>>, f64) {
    match n {
        0 => (vec![vec![]], 0.0),
        1 => (vec![vec![-1.0], vec![1.0]], 0.0),
        2 => {
            let m = points.max(4);
            let dirs = (0..m)
                .map(|i| {
                    let a = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect();
            (dirs, 2.0 * (std::f64::consts::PI / (2 * m) as f64).sin())
        }
        _ => {
            // Lattice points on the surface of the cube of half-side g, projected radially.
            let g = ((points as f64).powf(1.0 / (n - 1) as f64) / 2.0)
                .floor()
                .max(2.0) as u64;
            let dirs = band(n, g)
                .filter(|k| k.sup_norm() == g)
                .map(|k| {
                    let norm = k.norm_sq().sqrt();
                    k.0.iter().map(|&v| v as f64 / norm).collect()
                })
                .collect();
            (dirs, ((n - 1) as f64).sqrt() / (2.0 * g as f64))
        }
    }
}

/// Uniform grid `x_i = 2π i / m` in every axis.
fn torus_grid(n: usize, m: usize) -> Vec<Vec<f64>> {
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut x = vec![0.0; n];
            for slot in x.iter_mut().rev() {
                *slot = 2.0 * std::f64::consts::PI * (idx % m) as f64 / m as f64;
                idx /= m;
            }
            x
        })
        .collect()
}

/// Minimum of `|det A⁽⁰⁾(x, ξ)|` over a torus grid and unit directions.
///
/// Grid-based, so a failure is conclusive while success is not a proof.
/// Constant-coefficient systems are scanned at a single `x`.
pub fn ellipticity_check(a: &MatrixDiffOp, cfg: &EllipticityConfig) -> EllipticityReport {
    let n = a.dim();
    let p = a.p();
    let m = a.column_orders();
    let xs = if a.is_constant() {
        vec![vec![0.0; n]]
    } else {
        torus_grid(n, cfg.x_points.max(1))
    };
    let (dirs, spacing) = sphere_grid(n, cfg.sphere_points);

    let best = xs
        .par_iter()
        .enumerate()
        .map(|(xi_idx, x)| {
            // Leading coefficients frozen at x: per entry, (α, a_α(x)) with |α| = m_k.
            let frozen: Vec<Vec<(MultiIndex, Complex64)>> = (0..p * p)
                .map(|idx| {
                    let (j, k) = (idx / p, idx % p);
                    a.entry(j, k)
                        .terms()
                        .filter(|(alpha, _)| alpha.order() == m[k])
                        .map(|(alpha, c)| (alpha.clone(), c.eval(x)))
                        .collect()
                })
                .collect();
            let mut local = (f64::INFINITY, xi_idx, 0usize);
            for (d_idx, xi) in dirs.iter().enumerate() {
                let s = DMatrix::from_fn(p, p, |j, k| {
                    frozen[j * p + k]
                        .iter()
                        .map(|(alpha, c)| c * real_pow(xi, alpha))
                        .sum::<Complex64>()
                });
                let v = s.determinant().norm();
                if v < local.0 {
                    local = (v, xi_idx, d_idx);
                }
            }
            local
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |l, r| {
                if (r.0, r.1, r.2) < (l.0, l.1, l.2) {
                    r
                } else {
                    l
                }
            },
        );

    EllipticityReport {
        min_abs_det: best.0,
        elliptic: best.0 > cfg.tol,
        argmin_x: xs[best.1].clone(),
        argmin_xi: dirs[best.2].clone(),
        x_grid_points: xs.len(),
        sphere_grid_points: dirs.len(),
        sphere_spacing: spacing,
    }
}
