use serde::{Deserialize, Serialize};

use super::indices::matuszewska;
use super::repr::least_squares_slope;
use super::RoFunction;
use crate::error::Result;

/// How `H^{φ1}` sits inside `H^{φ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `φ/φ1 → 0`: compact (and continuous) embedding.
    CompactEmbedding,
    /// `φ/φ1` bounded but not vanishing.
    ContinuousEmbedding,
    /// `φ/φ1` unbounded.
    None,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonMethod {
    /// Lexicographic comparison of log-power exponents.
    Exponents,
    IndexArithmetic,
    Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub relation: Relation,
    pub method: ComparisonMethod,
    /// `max ln(φ/φ1)` over the grid on `[1, t_max]`.
    pub max_log_ratio: f64,
    /// `ln(φ/φ1)` at `t_max`.
    pub end_log_ratio: f64,
    /// Slope of `ln(φ/φ1)` against `ln t` over the upper half of the grid.
    pub tail_slope: f64,
}

const GRID_POINTS: usize = 512;
const SLOPE_TOL: f64 = 1e-2;

/// Decides whether `φ/φ1` is bounded, vanishing or unbounded at infinity.
pub fn compare(phi: &RoFunction, phi1: &RoFunction, t_max: f64) -> Result<Comparison> {
    let u_max = t_max.max(std::f64::consts::E).ln();
    let us: Vec<f64> = (0..GRID_POINTS)
        .map(|i| u_max * i as f64 / (GRID_POINTS - 1) as f64)
        .collect();
    let mut g = Vec::with_capacity(us.len());
    for &u in &us {
        let t = u.exp();
        g.push(phi.ln_eval(t)? - phi1.ln_eval(t)?);
    }
    let half = us.len() / 2;
    let tail_slope = least_squares_slope(&us[half..], &g[half..]);
    let max_log_ratio = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let end_log_ratio = *g.last().unwrap();
    let with = |relation, method| Comparison {
        relation,
        method,
        max_log_ratio,
        end_log_ratio,
        tail_slope,
    };

    if let (
        RoFunction::LogPower { s, b1, b2 },
        RoFunction::LogPower {
            s: s_1,
            b1: c1,
            b2: c2,
        },
    ) = (phi, phi1)
    {
        let diff = [s - s_1, b1 - c1, b2 - c2];
        let relation = match diff.iter().find(|d| **d != 0.0) {
            None => Relation::ContinuousEmbedding,
            Some(d) if *d < 0.0 => Relation::CompactEmbedding,
            Some(_) => Relation::None,
        };
        return Ok(with(relation, ComparisonMethod::Exponents));
    }

    let (a, b) = (matuszewska(phi)?, matuszewska(phi1)?);
    if a.upper_below(b.sigma0 - b.half_width) {
        return Ok(with(
            Relation::CompactEmbedding,
            ComparisonMethod::IndexArithmetic,
        ));
    }
    if a.lower_exceeds(b.sigma1 + b.half_width) {
        return Ok(with(Relation::None, ComparisonMethod::IndexArithmetic));
    }

    let relation = if tail_slope < -SLOPE_TOL {
        Relation::CompactEmbedding
    } else if tail_slope > SLOPE_TOL {
        Relation::None
    } else {
        Relation::Inconclusive
    };
    Ok(with(relation, ComparisonMethod::Grid))
}
