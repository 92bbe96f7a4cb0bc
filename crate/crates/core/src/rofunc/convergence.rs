//! Convergence of `∫₁^∞ t^{2r+n-1-2m} ω^{-2}(t) dt`.
//!
//! This integral is finite exactly when `H^{ω ρ^m}` embeds into `C^r` on an
//! n-dimensional manifold. The decision ladder is: Matuszewska index
//! criterion, closed-form log-scale criterion for the borderline log-power
//! case, then quadrature over expanding intervals.

use serde::{Deserialize, Serialize};

use super::indices::matuszewska;
use super::RoFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Converges,
    Diverges,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecidedBy {
    IndexCriterion,
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceDecision {
    pub verdict: Verdict,
    pub decided_by: DecidedBy,
    pub value_estimate: Option<f64>,
    /// `(T, ∫₁ᵀ)` after each expansion step.
    pub partial_sums: Vec<(f64, f64)>,
    /// The inequality or rule that produced the verdict.
    pub criterion: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub horizon: f64,
    /// Each step multiplies the upper limit by this factor.
    pub growth: f64,
    pub rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            horizon: 1e12,
            growth: 2.0,
            rel_tol: 1e-9,
        }
    }
}

pub fn embedding_integral(
    omega: &RoFunction,
    r: u32,
    n: u32,
    m: u32,
) -> Result<ConvergenceDecision> {
    embedding_integral_with(omega, r, n, m, &QuadratureConfig::default())
}

pub fn embedding_integral_with(
    omega: &RoFunction,
    r: u32,
    n: u32,
    m: u32,
    cfg: &QuadratureConfig,
) -> Result<ConvergenceDecision> {
    if n == 0 {
        return Err(Error::Config("dimension n must be at least 1".into()));
    }
    let exponent = (2 * r + n) as f64 - 1.0 - 2.0 * m as f64;
    let target = r as f64 + n as f64 / 2.0 - m as f64;
    let idx = matuszewska(omega)?;

    if idx.lower_exceeds(target) {
        let sums = partial_sums(omega, exponent, cfg)?;
        return Ok(ConvergenceDecision {
            verdict: Verdict::Converges,
            decided_by: DecidedBy::IndexCriterion,
            value_estimate: sums.value,
            partial_sums: sums.points,
            criterion: format!(
                "σ₀(ω) = {} (± {}) > r + n/2 - m = {target}",
                idx.sigma0, idx.half_width
            ),
        });
    }
    if idx.upper_below(target) {
        return Ok(ConvergenceDecision {
            verdict: Verdict::Diverges,
            decided_by: DecidedBy::IndexCriterion,
            value_estimate: None,
            partial_sums: Vec::new(),
            criterion: format!(
                "σ₁(ω) = {} (± {}) < r + n/2 - m = {target}",
                idx.sigma1, idx.half_width
            ),
        });
    }

    if let RoFunction::LogPower { s, b1, b2 } = omega {
        debug_assert!(*s == target);
        // Integrand is 1 / (t (1+ln t)^{2b1} (1+ln(1+ln t))^{2b2}); with
        // v = 1 + ln t this is ∫ v^{-2b1} (1 + ln v)^{-2b2} dv.
        let converges = *b1 > 0.5 || (*b1 == 0.5 && *b2 > 0.5);
        let sums = partial_sums(omega, exponent, cfg)?;
        return Ok(ConvergenceDecision {
            verdict: if converges {
                Verdict::Converges
            } else {
                Verdict::Diverges
            },
            decided_by: DecidedBy::ClosedForm,
            value_estimate: if converges { sums.value } else { None },
            partial_sums: sums.points,
            criterion: format!(
                "borderline s = {target}: converges iff b1 > 1/2, or b1 = 1/2 and b2 > 1/2 (b1 = {b1}, b2 = {b2})"
            ),
        });
    }

    let sums = partial_sums(omega, exponent, cfg)?;
    let (verdict, value) = if sums.settled {
        (Verdict::Converges, sums.value)
    } else {
        (Verdict::Inconclusive, None)
    };
    Ok(ConvergenceDecision {
        verdict,
        decided_by: DecidedBy::Quadrature,
        value_estimate: value,
        partial_sums: sums.points,
        criterion: format!(
            "quadrature to T = {:e}: extrapolated tail {} rel_tol {:e} of the partial integral",
            cfg.horizon,
            if sums.settled { "within" } else { "not within" },
            cfg.rel_tol
        ),
    })
}

struct PartialSums {
    points: Vec<(f64, f64)>,
    value: Option<f64>,
    settled: bool,
}

/// Integrates `t^exponent ω^{-2}(t)` over `[1, g], [g, g²], …` in the
/// variable `u = ln t`. The tail beyond the last upper limit is extrapolated
/// geometrically from the ratio of the last two increments, which is exact
/// for pure powers.
fn partial_sums(omega: &RoFunction, exponent: f64, cfg: &QuadratureConfig) -> Result<PartialSums> {
    let integrand = |u: f64| ((exponent + 1.0) * u - 2.0 * omega.ln_at_log(u)).exp();
    let step = cfg.growth.ln();
    let steps = (cfg.horizon.ln() / step).ceil() as usize;

    let mut points = Vec::with_capacity(steps);
    let mut total = 0.0;
    let mut prev_inc: Option<f64> = None;
    let mut value = None;
    let mut settled = false;
    for j in 0..steps {
        let (a, b) = (j as f64 * step, (j + 1) as f64 * step);
        let scale = integrand(a).max(integrand(b)) * step;
        if !scale.is_finite() {
            return Err(Error::InvalidFunction {
                variant: omega.variant_name(),
                t: a.exp(),
            });
        }
        let inc = quadrature::integrate(integrand, a, b, 1e-3 * cfg.rel_tol * (total + scale))
            .integral
            .max(0.0);
        total += inc;
        points.push((b.exp(), total));
        if let Some(p) = prev_inc {
            if p > 0.0 && inc < 0.999 * p {
                let q = inc / p;
                let tail = inc * q / (1.0 - q);
                value = Some(total + tail);
                if j >= 3 && tail <= cfg.rel_tol * total {
                    settled = true;
                    break;
                }
            } else {
                value = None;
            }
        }
        prev_inc = Some(inc);
    }
    Ok(PartialSums {
        points,
        value,
        settled,
    })
}
