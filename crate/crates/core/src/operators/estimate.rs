use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::MatrixDiffOp;
use crate::error::Result;
use crate::rofunc::RoFunction;
use crate::torus::{hnorm_vec, random_trig_vector, vec_hnorm};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub samples: usize,
    pub seed: u64,
    /// Decay margin of the random samples.
    pub delta: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            samples: 20,
            seed: 0,
            delta: 1.0,
        }
    }
}

/// Bandwidths `4, 8, …` up to and including `b_max`.
pub fn doubling_schedule(b_max: u64) -> Vec<u64> {
    std::iter::successors(Some(4u64), |b| Some(b * 2))
        .take_while(|&b| b <= b_max)
        .collect()
}

/// Per bandwidth, the largest `‖Au‖_{(H^φ)^p} / ‖u‖_{⊕ H^{φρ^{m_k}}}` over random samples.
pub fn boundedness_estimate(
    a: &MatrixDiffOp,
    phi: &RoFunction,
    bandwidths: &[u64],
    cfg: &SampleConfig,
) -> Result<Vec<(u64, f64)>> {
    let m: Vec<f64> = a.column_orders().iter().map(|&v| v as f64).collect();
    let weights: Vec<RoFunction> = m.iter().map(|&mk| phi.times_power(mk)).collect();
    bandwidths
        .iter()
        .map(|&b| {
            let ratios = (0..cfg.samples as u64)
                .into_par_iter()
                .map(|s| {
                    let u = random_trig_vector(a.dim(), b, &weights, cfg.delta, cfg.seed, s)?;
                    let num = hnorm_vec(&a.apply(&u)?, phi)?;
                    Ok(num / vec_hnorm(&u, phi, &m)?)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok((b, ratios.into_iter().fold(0.0, f64::max)))
        })
        .collect()
}
