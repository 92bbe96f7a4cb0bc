//! Executable experiments for the solvability and regularity statements.
//!
//! Every experiment returns an [`ExperimentReport`] carrying its inputs, the
//! raw observations and a verdict that can be recomputed from the
//! observations alone.

mod estimates;
mod regularity;
mod report;
mod scale;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::rofunc::RoFunction;

pub use estimates::{apriori_experiment, coefficient_shift_bound, scalar_norm_check};
pub use regularity::{
    classical_solution_check, continuity_experiment, local_regularity_diagnostic,
    regularity_lift_experiment,
};
pub use report::{max_by_bandwidth, Criterion, ExperimentReport, Observation, Verdict};
pub use scale::{embedding_chain_check, interpolation_identity_check};

/// Sampling parameters shared by the experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Ascending bandwidth schedule.
    pub bandwidths: Vec<u64>,
    /// Samples per bandwidth.
    pub samples: usize,
    pub seed: u64,
    /// Decay margin of the random coefficients.
    pub delta: f64,
    /// Relative growth threshold of the plateau rule.
    pub plateau_growth: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            bandwidths: vec![8, 16, 32, 64],
            samples: 20,
            seed: 0,
            delta: 1.0,
            plateau_growth: 0.05,
        }
    }
}

impl ExperimentConfig {
    pub(crate) fn parameters(&self) -> BTreeMap<String, Value> {
        let mut out = BTreeMap::new();
        out.insert("bandwidths".into(), json!(self.bandwidths));
        out.insert("samples".into(), json!(self.samples));
        out.insert("seed".into(), json!(self.seed));
        out.insert("delta".into(), json!(self.delta));
        out.insert("plateau_growth".into(), json!(self.plateau_growth));
        out
    }
}

/// The literal of `φ`, or its variant name when it has none.
pub(crate) fn phi_value(phi: &RoFunction) -> Value {
    match phi.to_literal() {
        Ok(lit) => json!(lit),
        Err(_) => json!(phi.variant_name()),
    }
}
