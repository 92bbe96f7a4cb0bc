use rayon::prelude::*;
use serde_json::json;

use super::report::{obs, Criterion, ExperimentReport, Observation};
use super::{phi_value, ExperimentConfig};
use crate::error::{Error, Result};
use crate::operators::{ellipticity_check, EllipticityConfig, MatrixDiffOp, ScalarDiffOp};
use crate::rofunc::RoFunction;
use crate::torus::{hnorm, hnorm_vec, random_trig_from, random_trig_vector, stream_rng, vec_hnorm};

/// Empirical constant of the a priori estimate
/// `‖u‖_{⊕ H^{φρ^{m_k}}} ≤ c (‖Au‖_{(H^φ)^p}² + ‖u‖_{⊕ H^{φρ^{m_k-σ}}}²)^{1/2}`
/// over random `u`, per bandwidth.
///
/// `ratio` uses the root-sum-square denominator above; `ratio_sum` uses the
/// plain sum `‖Au‖ + ‖u‖_{m-σ}` and is never larger. Both are recorded; the
/// plateau criterion applies to `ratio`.
pub fn apriori_experiment(
    a: &MatrixDiffOp,
    phi: &RoFunction,
    sigma: f64,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    if !(sigma > 0.0) {
        return Err(Error::Config(format!("σ must be positive, got {sigma}")));
    }
    let ell = ellipticity_check(a, &EllipticityConfig::default());
    if !ell.elliptic {
        return Err(Error::NotElliptic {
            min_abs_det: ell.min_abs_det,
        });
    }
    let m: Vec<f64> = a.column_orders().iter().map(|&v| v as f64).collect();
    let lowered: Vec<f64> = m.iter().map(|v| v - sigma).collect();
    let weights: Vec<RoFunction> = m.iter().map(|&v| phi.times_power(v)).collect();

    let mut observations = Vec::new();
    for &b in &cfg.bandwidths {
        let rows = (0..cfg.samples as u64)
            .into_par_iter()
            .map(|s| {
                let u = random_trig_vector(a.dim(), b, &weights, cfg.delta, cfg.seed, s)?;
                let top = vec_hnorm(&u, phi, &m)?;
                let f = hnorm_vec(&a.apply(&u)?, phi)?;
                let low = vec_hnorm(&u, phi, &lowered)?;
                Ok([
                    obs(b, s, "ratio", top / f.hypot(low)),
                    obs(b, s, "ratio_sum", top / (f + low)),
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        observations.extend(rows.into_iter().flatten());
    }

    let mut params = cfg.parameters();
    params.insert("operator".into(), json!(a.to_literal()));
    params.insert("phi".into(), phi_value(phi));
    params.insert("sigma".into(), json!(sigma));
    let report = ExperimentReport::new(
        "apriori",
        params,
        observations,
        Criterion::Plateau {
            quantity: "ratio".into(),
            growth: cfg.plateau_growth,
        },
    );
    let c = report.max_of("ratio");
    let c_sum = report.max_of("ratio_sum");
    Ok(report.with_constant("c", c).with_constant("c_sum", c_sum))
}

/// Empirical norm of `L : H^{φ ρ^l} → H^φ` per bandwidth, judged by the plateau rule.
pub fn scalar_norm_check(
    l: &ScalarDiffOp,
    phi: &RoFunction,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let order = l.order();
    let weight = phi.times_power(order as f64);
    let mut observations: Vec<Observation> = Vec::new();
    for &b in &cfg.bandwidths {
        let rows = (0..cfg.samples as u64)
            .into_par_iter()
            .map(|s| {
                let u =
                    random_trig_from(&mut stream_rng(cfg.seed, s), l.dim(), b, &weight, cfg.delta)?;
                let num = hnorm(&l.apply(&u)?, phi)?;
                Ok(obs(b, s, "ratio", num / hnorm(&u, &weight)?))
            })
            .collect::<Result<Vec<_>>>()?;
        observations.extend(rows);
    }
    let mut params = cfg.parameters();
    params.insert("operator".into(), json!(l.to_literal()));
    params.insert("order".into(), json!(order));
    params.insert("phi".into(), phi_value(phi));
    let report = ExperimentReport::new(
        "scalar_norm",
        params,
        observations,
        Criterion::Plateau {
            quantity: "ratio".into(),
            growth: cfg.plateau_growth,
        },
    );
    let c = report.max_of("ratio");
    Ok(report.with_constant("c", c))
}

/// Coefficient-shift bound `Σ_q |â(q)| · sup_j φ(⟨j+q⟩) |j^α| / (φ(⟨j⟩) ⟨j⟩^l)`
/// summed over the terms `a D^α` of `L`, with `j` ranging over `|j|∞ ≤ bandwidth`.
pub fn coefficient_shift_bound(l: &ScalarDiffOp, phi: &RoFunction, bandwidth: u64) -> Result<f64> {
    use crate::torus::{band, bracket};
    let order = l.order() as f64;
    let mut total = 0.0;
    for (alpha, a) in l.terms() {
        for (q, c) in a.iter() {
            let mut worst: f64 = 0.0;
            for j in band(l.dim(), bandwidth) {
                let jq = j.add(q);
                let ratio = (phi.ln_eval(bracket(&jq))?
                    - phi.ln_eval(bracket(&j))?
                    - order * bracket(&j).ln())
                .exp()
                    * j.pow(alpha).abs();
                worst = worst.max(ratio);
            }
            total += c.norm() * worst;
        }
    }
    Ok(total)
}
