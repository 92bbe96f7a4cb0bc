//! Lower and upper Matuszewska indices.
//!
//! With `M(λ) = sup_t φ(λt)/φ(t)` and `m(λ) = inf_t φ(λt)/φ(t)`, the function
//! `ln M` is subadditive in `h = ln λ` and `ln m` superadditive, so
//! `σ₁ = lim ln M(λ)/ln λ` and `σ₀ = lim ln m(λ)/ln λ` as `λ → ∞`. The estimator
//! measures the asymptotic slopes of `ln M` and `ln m` against `h` on a window
//! of large `h`, and derives a half-width from how much the slope still moves
//! between the last two windows.

use serde::{Deserialize, Serialize};

use super::repr::least_squares_slope;
use super::RoFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexMethod {
    Exact,
    Estimated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatuszewskaIndices {
    pub sigma0: f64,
    pub sigma1: f64,
    pub method: IndexMethod,
    /// Confidence half-width; zero for exact indices.
    pub half_width: f64,
}

impl MatuszewskaIndices {
    pub fn exact(sigma0: f64, sigma1: f64) -> Self {
        MatuszewskaIndices {
            sigma0,
            sigma1,
            method: IndexMethod::Exact,
            half_width: 0.0,
        }
    }

    /// `x < σ₀` holds even at the pessimistic end of the confidence interval.
    pub fn lower_exceeds(&self, x: f64) -> bool {
        self.sigma0 - self.half_width > x
    }

    /// `σ₁ < x` holds even at the pessimistic end of the confidence interval.
    pub fn upper_below(&self, x: f64) -> bool {
        self.sigma1 + self.half_width < x
    }

    /// Indices of `φ · t^m`.
    pub fn shifted(&self, m: f64) -> Self {
        MatuszewskaIndices {
            sigma0: self.sigma0 + m,
            sigma1: self.sigma1 + m,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexEstimatorConfig {
    /// Uniform part of the `u = ln t` grid: `[0, fine_max]` with this step.
    pub fine_max: f64,
    pub fine_step: f64,
    /// Geometric part of the `u` grid: `(fine_max, u_max]`.
    pub u_max: f64,
    pub coarse_points: usize,
    /// Largest `h = ln λ`; slopes are fitted on `[h_max/4, h_max]`.
    pub h_max: f64,
    pub h_points: usize,
    /// Smallest reported half-width.
    pub min_half_width: f64,
    /// Estimates wider than this are reported as failures.
    pub max_half_width: f64,
}

impl Default for IndexEstimatorConfig {
    fn default() -> Self {
        IndexEstimatorConfig {
            fine_max: 64.0,
            fine_step: 1.0 / 16.0,
            u_max: 1e5,
            coarse_points: 400,
            h_max: 1000.0,
            h_points: 97,
            min_half_width: 1e-3,
            max_half_width: 0.25,
        }
    }
}

/// Exact indices for the log-power family, numeric estimate otherwise.
pub fn matuszewska(phi: &RoFunction) -> Result<MatuszewskaIndices> {
    matuszewska_with(phi, &IndexEstimatorConfig::default())
}

pub fn matuszewska_with(
    phi: &RoFunction,
    cfg: &IndexEstimatorConfig,
) -> Result<MatuszewskaIndices> {
    match phi {
        // Both log factors are slowly varying and leave the indices at s.
        RoFunction::LogPower { s, .. } => Ok(MatuszewskaIndices::exact(*s, *s)),
        _ => matuszewska_estimate(phi, cfg),
    }
}

/// The numeric estimator, applicable to every variant.
pub fn matuszewska_estimate(
    phi: &RoFunction,
    cfg: &IndexEstimatorConfig,
) -> Result<MatuszewskaIndices> {
    let base = base_grid(cfg);
    let base_vals: Vec<f64> = base.iter().map(|&u| phi.ln_at_log(u)).collect();
    check_finite(phi, &base, &base_vals)?;

    let h_lo = cfg.h_max / 4.0;
    let hs: Vec<f64> = (0..cfg.h_points)
        .map(|i| h_lo + (cfg.h_max - h_lo) * i as f64 / (cfg.h_points - 1) as f64)
        .collect();

    let mut upper = Vec::with_capacity(hs.len());
    let mut lower = Vec::with_capacity(hs.len());
    for &h in &hs {
        let mut sup = f64::NEG_INFINITY;
        let mut inf = f64::INFINITY;
        for (&u, &l) in base.iter().zip(&base_vals) {
            let d = phi.ln_at_log(u + h) - l;
            if !d.is_finite() {
                return Err(Error::InvalidFunction {
                    variant: phi.variant_name(),
                    t: (u + h).exp(),
                });
            }
            sup = sup.max(d);
            inf = inf.min(d);
        }
        upper.push(sup);
        lower.push(inf);
    }
    let raw = || -> Vec<(f64, f64, f64)> {
        hs.iter()
            .zip(upper.iter().zip(&lower))
            .map(|(&h, (&a, &b))| (h, a, b))
            .collect()
    };

    let mid = hs.len() / 2;
    let (s1, w1) = tail_slope(&hs, &upper, mid, cfg.min_half_width);
    let (s0, w0) = tail_slope(&hs, &lower, mid, cfg.min_half_width);
    let half_width = w0.max(w1);
    if !(half_width <= cfg.max_half_width) {
        return Err(Error::EstimationFailed {
            reason: format!("slope did not settle: half-width {half_width:.3e}"),
            raw: raw(),
        });
    }
    if s0 > s1 + 2.0 * half_width {
        return Err(Error::EstimationFailed {
            reason: format!("lower index {s0} exceeds upper index {s1}"),
            raw: raw(),
        });
    }
    Ok(MatuszewskaIndices {
        sigma0: s0.min(s1),
        sigma1: s1.max(s0),
        method: IndexMethod::Estimated,
        half_width,
    })
}

/// Slope on the last window and a half-width from the drift against the
/// previous window plus twice the standard error of the fit.
fn tail_slope(h: &[f64], y: &[f64], mid: usize, floor: f64) -> (f64, f64) {
    let last = least_squares_slope(&h[mid..], &y[mid..]);
    let prev = least_squares_slope(&h[..=mid], &y[..=mid]);
    let se = slope_stderr(&h[mid..], &y[mid..], last);
    let w = (2.0 * (last - prev).abs() + 2.0 * se).max(floor);
    (last, w)
}

fn slope_stderr(x: &[f64], y: &[f64], slope: f64) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut ss_res = 0.0;
    let mut sxx = 0.0;
    for (a, b) in x.iter().zip(y) {
        let r = (b - my) - slope * (a - mx);
        ss_res += r * r;
        sxx += (a - mx) * (a - mx);
    }
    (ss_res / (n - 2.0) / sxx).sqrt()
}

fn base_grid(cfg: &IndexEstimatorConfig) -> Vec<f64> {
    let fine = (cfg.fine_max / cfg.fine_step).round() as usize;
    let mut grid: Vec<f64> = (0..=fine).map(|i| i as f64 * cfg.fine_step).collect();
    let ratio = (cfg.u_max / cfg.fine_max).powf(1.0 / cfg.coarse_points as f64);
    grid.extend((1..=cfg.coarse_points).map(|i| cfg.fine_max * ratio.powi(i as i32)));
    grid
}

fn check_finite(phi: &RoFunction, grid: &[f64], vals: &[f64]) -> Result<()> {
    match grid.iter().zip(vals).find(|(_, v)| !v.is_finite()) {
        Some((&u, _)) => Err(Error::InvalidFunction {
            variant: phi.variant_name(),
            t: u.exp(),
        }),
        None => Ok(()),
    }
}
