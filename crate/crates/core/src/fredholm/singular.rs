use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::linalg;
use crate::error::{Error, Result};
use crate::operators::{ellipticity_check, EllipticityConfig, MatrixDiffOp};
use crate::torus::{band, Frequency};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Guarantee {
    /// Every singular frequency lies inside the scanned box.
    Exact,
    /// Only `|k|∞ ≤ R` was scanned without a certificate that nothing lies beyond.
    HeuristicRadius(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SingularConfig {
    /// Minimum scan radius in `|k|∞`.
    pub radius: u64,
    pub rank_tol: f64,
    pub ellipticity: EllipticityConfig,
    /// Largest number of frequencies scanned.
    pub max_scan_points: u64,
}

impl Default for SingularConfig {
    fn default() -> Self {
        SingularConfig {
            radius: 8,
            rank_tol: 1e-10,
            ellipticity: EllipticityConfig::default(),
            max_scan_points: 4_000_000,
        }
    }
}

impl SingularConfig {
    /// Singular values at or below this count as zero.
    pub(crate) fn rank_threshold(&self, sigma: &[f64]) -> f64 {
        self.rank_tol * sigma.first().copied().unwrap_or(0.0).max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularScan {
    /// Sorted lexicographically, with the nullity of `A(k)`.
    pub frequencies: Vec<(Frequency, usize)>,
    pub guarantee: Guarantee,
    pub radius: u64,
    /// Lower bound of `|det A⁽⁰⁾|` on the unit sphere used for the radius, if certified.
    pub certified_min_det: Option<f64>,
}

/// Locates the frequencies where the full symbol `A(k)` of a constant-coefficient
/// elliptic system is singular.
///
/// For `n = 1` all roots of `det A(k)` lie within the Cauchy bound of the
/// polynomial. For `n ≥ 2` the principal part dominates the lower-order part
/// beyond `C_low / c_e`, where `c_e` is a certified lower bound of the
/// principal determinant on the unit sphere.
pub fn singular_frequencies(a: &MatrixDiffOp, cfg: &SingularConfig) -> Result<SingularScan> {
    if !a.is_constant() {
        return Err(Error::NonConstantCoefficients);
    }
    let ell = ellipticity_check(a, &cfg.ellipticity);
    if !ell.elliptic {
        return Err(Error::NotElliptic {
            min_abs_det: ell.min_abs_det,
        });
    }
    let n = a.dim();
    let det = a.symbol_determinant()?;
    let order: u32 = a.column_orders().iter().sum();

    let (needed, certified) = if n == 1 {
        let c = det.univariate();
        if c.len() != order as usize + 1 {
            return Err(Error::NotElliptic { min_abs_det: 0.0 });
        }
        let top = c[order as usize].norm();
        let cauchy = 1.0
            + c[..order as usize]
                .iter()
                .map(|x| x.norm() / top)
                .fold(0.0, f64::max);
        (cauchy.floor(), Some(top))
    } else {
        let principal = det.homogeneous_part(order);
        let c_low = det.lower_part(order).coefficient_l1();
        let lower = ell.min_abs_det - principal.gradient_bound() * ell.sphere_spacing;
        if lower > 0.0 {
            ((c_low / lower).ceil() + 1.0, Some(lower))
        } else {
            ((c_low / ell.min_abs_det).ceil() + 1.0, None)
        }
    };

    let side_cap = (cfg.max_scan_points as f64).powf(1.0 / n as f64);
    let cap = ((side_cap - 1.0) / 2.0).floor().max(0.0) as u64;
    let wanted = if needed.is_finite() {
        needed.max(cfg.radius as f64)
    } else {
        f64::INFINITY
    };
    let (radius, guarantee) = if wanted <= cap as f64 {
        let r = wanted as u64;
        (
            r,
            if certified.is_some() {
                Guarantee::Exact
            } else {
                Guarantee::HeuristicRadius(r)
            },
        )
    } else {
        (cap, Guarantee::HeuristicRadius(cap))
    };

    let ks: Vec<Frequency> = band(n, radius).collect();
    let found = ks
        .par_iter()
        .map(|k| {
            let s = linalg::svd(a.full_symbol_const(k)?);
            let nullity = s.nullity(cfg.rank_threshold(&s.sigma));
            Ok((nullity > 0).then(|| (k.clone(), nullity)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SingularScan {
        frequencies: found.into_iter().flatten().collect(),
        guarantee,
        radius,
        certified_min_det: if n == 1 { None } else { certified },
    })
}
