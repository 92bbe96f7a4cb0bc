use rayon::prelude::*;
use serde_json::json;

use super::report::{obs, Criterion, ExperimentReport, Observation};
use super::{phi_value, ExperimentConfig};
use crate::error::{Error, Result};
use crate::fredholm::{
    kernel_cokernel, project_pplus, solve_const, FredholmReport, SingularConfig, SolveConfig,
};
use crate::operators::MatrixDiffOp;
use crate::rofunc::{embedding_integral, ConvergenceDecision, RoFunction, Verdict as Decision};
use crate::torus::{
    band, bracket, hnorm, hnorm_vec, random_trig_vector, shell_counts, shell_energies,
    sup_norm_deriv, vec_hnorm, TrigPoly, TrigVector,
};

/// Slack for rounding in inequalities that hold exactly in exact arithmetic.
const ROUNDING: f64 = 1e-12;

/// Random data in `(H^φ)^p`, projected onto the range and solved.
fn solved_pair(
    a: &MatrixDiffOp,
    phi: &RoFunction,
    fredholm: &FredholmReport,
    cfg: &ExperimentConfig,
    bandwidth: u64,
    sample: u64,
) -> Result<(TrigVector, TrigVector)> {
    let weights = vec![phi.clone(); a.p()];
    let f = random_trig_vector(a.dim(), bandwidth, &weights, cfg.delta, cfg.seed, sample)?;
    let f = project_pplus(&f, fredholm)?;
    let u = solve_const(a, &f, phi, &SolveConfig::default())?.u;
    Ok((f, u))
}

fn add_shells(total: &mut Vec<f64>, shells: Vec<f64>) {
    if total.len() < shells.len() {
        total.resize(shells.len(), 0.0);
    }
    for (t, e) in total.iter_mut().zip(shells) {
        *t += e;
    }
}

fn column_weights(a: &MatrixDiffOp, phi: &RoFunction) -> Vec<RoFunction> {
    a.column_orders()
        .iter()
        .map(|&m| phi.times_power(m as f64))
        .collect()
}

/// Shell-by-shell comparison of the solution energy in `⊕ H^{φρ^{m_k}}` with
/// the data energy in `(H^φ)^p`, for data sampled in `(H^φ)^p` and projected
/// onto the range.
///
/// `shell_ratio` holds the largest ratio over samples in each shell; the
/// plateau rule is applied to its per-bandwidth maximum.
pub fn regularity_lift_experiment(
    a: &MatrixDiffOp,
    phi: &RoFunction,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let fredholm = kernel_cokernel(a, &SingularConfig::default())?;
    let m: Vec<f64> = a.column_orders().iter().map(|&v| v as f64).collect();
    let weights = column_weights(a, phi);

    let mut observations = Vec::new();
    for &b in &cfg.bandwidths {
        let rows = (0..cfg.samples as u64)
            .into_par_iter()
            .map(|s| {
                let (f, u) = solved_pair(a, phi, &fredholm, cfg, b, s)?;
                let mut ef = Vec::new();
                for c in f.components() {
                    add_shells(&mut ef, shell_energies(c, phi)?);
                }
                let mut eu = Vec::new();
                for (c, w) in u.components().iter().zip(&weights) {
                    add_shells(&mut eu, shell_energies(c, w)?);
                }
                eu.resize(eu.len().max(ef.len()), 0.0);
                ef.resize(eu.len(), 0.0);
                let ratios: Vec<Option<f64>> = ef
                    .iter()
                    .zip(&eu)
                    .map(|(&df, &du)| (df > 0.0 || du > 0.0).then(|| du / df))
                    .collect();
                let nf = hnorm_vec(&f, phi)?;
                let nu = vec_hnorm(&u, phi, &m)?;
                let norm_ratio = if nf == 0.0 && nu == 0.0 { 0.0 } else { nu / nf };
                Ok((ratios, obs(b, s, "norm_ratio", norm_ratio)))
            })
            .collect::<Result<Vec<_>>>()?;
        let shells = rows.iter().map(|(r, _)| r.len()).max().unwrap_or(0);
        for shell in 0..shells {
            let worst = rows
                .iter()
                .filter_map(|(r, _)| r.get(shell).copied().flatten())
                .fold(None, |acc: Option<f64>, v| {
                    Some(acc.map_or(v, |a| if v.is_nan() { v } else { a.max(v) }))
                });
            if let Some(v) = worst {
                observations.push(obs(b, shell as u64, "shell_ratio", v));
            }
        }
        observations.extend(rows.into_iter().map(|(_, o)| o));
    }

    let mut params = cfg.parameters();
    params.insert("operator".into(), json!(a.to_literal()));
    params.insert("phi".into(), phi_value(phi));
    let report = ExperimentReport::new(
        "regularity",
        params,
        observations,
        Criterion::Plateau {
            quantity: "shell_ratio".into(),
            growth: cfg.plateau_growth,
        },
    );
    let c = report.max_of("shell_ratio");
    let c_norm = report.max_of("norm_ratio");
    Ok(report.with_constant("c", c).with_constant("c_norm", c_norm))
}

/// `S_B = (Σ_{|q|∞ ≤ B} ⟨q⟩^{2r} / ω(⟨q⟩)²)^{1/2}`, summed in log space.
fn embedding_constant(n: usize, bandwidth: u64, r: u32, omega: &RoFunction) -> Result<f64> {
    let logs = band(n, bandwidth)
        .map(|q| {
            let t = bracket(&q);
            Ok(2.0 * (r as f64 * t.ln() - omega.ln_eval(t)?))
        })
        .collect::<Result<Vec<f64>>>()?;
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    Ok((0.5 * (top + sum.ln())).exp())
}

fn hypothesis_value(d: &ConvergenceDecision) -> f64 {
    if d.verdict == Decision::Converges {
        1.0
    } else {
        0.0
    }
}

/// Ratios `sup |D^β u_k| / (S_B ‖u_k‖_{φρ^{m_k}})` over `|β| ≤ r` for each sample,
/// under quantity names suffixed by `suffix`.
fn continuity_observations(
    a: &MatrixDiffOp,
    phi: &RoFunction,
    fredholm: &FredholmReport,
    targets: &[(usize, u32)],
    cfg: &ExperimentConfig,
    suffix: impl Fn(usize) -> String + Sync,
) -> Result<Vec<Observation>> {
    let weights = column_weights(a, phi);
    let mut observations = Vec::new();
    for &b in &cfg.bandwidths {
        let mut constants = Vec::with_capacity(targets.len());
        for &(k, r) in targets {
            let s = embedding_constant(a.dim(), b, r, &weights[k])?;
            observations.push(obs(b, 0, &format!("S{}", suffix(k)), s));
            constants.push(s);
        }
        let rows = (0..cfg.samples as u64)
            .into_par_iter()
            .map(|s| {
                let (_, u) = solved_pair(a, phi, fredholm, cfg, b, s)?;
                targets
                    .iter()
                    .zip(&constants)
                    .map(|(&(k, r), &big_s)| {
                        let uk = u.component(k);
                        let sup = sup_norm_deriv(uk, r);
                        let norm = hnorm(uk, &weights[k])?;
                        let ratio = if sup == 0.0 && norm == 0.0 {
                            0.0
                        } else {
                            sup / (big_s * norm)
                        };
                        Ok(obs(b, s, &format!("sup_ratio{}", suffix(k)), ratio))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        observations.extend(rows.into_iter().flatten());
    }
    Ok(observations)
}

fn check_hypothesis(decision: &ConvergenceDecision) -> Result<()> {
    if decision.verdict == Decision::Diverges {
        return Err(Error::HypothesisUnmet(format!(
            "embedding integral diverges: {}",
            decision.criterion
        )));
    }
    Ok(())
}

/// Checks `sup_{|β| ≤ r} |D^β u_k| ≤ S_B ‖u_k‖_{φρ^{m_k}}` on solutions of
/// `Au = f` for data sampled in `(H^φ)^p`.
///
/// Refuses to run when `∫ t^{2r+n-1-2m_k} φ^{-2}(t) dt` diverges. An
/// undecided integral leaves the verdict inconclusive.
pub fn continuity_experiment(
    a: &MatrixDiffOp,
    phi: &RoFunction,
    r: u32,
    component: usize,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    if component >= a.p() {
        return Err(Error::Config(format!(
            "component {component} out of range for a {}x{} system",
            a.p(),
            a.p()
        )));
    }
    let m = a.column_orders()[component];
    let decision = embedding_integral(phi, r, a.dim() as u32, m)?;
    check_hypothesis(&decision)?;
    let fredholm = kernel_cokernel(a, &SingularConfig::default())?;

    let mut observations =
        continuity_observations(a, phi, &fredholm, &[(component, r)], cfg, |_| String::new())?;
    observations.push(obs(0, 0, "hypothesis", hypothesis_value(&decision)));

    let mut params = cfg.parameters();
    params.insert("operator".into(), json!(a.to_literal()));
    params.insert("phi".into(), phi_value(phi));
    params.insert("r".into(), json!(r));
    params.insert("component".into(), json!(component));
    let report = ExperimentReport::new(
        "continuity",
        params,
        observations,
        Criterion::All {
            parts: vec![
                Criterion::Within {
                    quantity: "sup_ratio".into(),
                    min: None,
                    max: Some(1.0 + ROUNDING),
                },
                Criterion::Requires {
                    quantity: "hypothesis".into(),
                },
            ],
        },
    );
    let worst = report.max_of("sup_ratio");
    let mut report = report
        .with_constant("max_sup_ratio", worst)
        .with_note(decision.criterion.clone());
    if let Some(v) = decision.value_estimate {
        report = report.with_constant("integral", v);
    }
    Ok(report)
}

/// Runs the continuity check with `r = m_k` for every component under the
/// hypothesis `∫ t^{n-1} φ^{-2}(t) dt < ∞`.
pub fn classical_solution_check(
    a: &MatrixDiffOp,
    phi: &RoFunction,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let decision = embedding_integral(phi, 0, a.dim() as u32, 0)?;
    check_hypothesis(&decision)?;
    let fredholm = kernel_cokernel(a, &SingularConfig::default())?;
    let targets: Vec<(usize, u32)> = a.column_orders().into_iter().enumerate().collect();
    let suffix = |k: usize| format!("_c{k}");

    let mut observations = continuity_observations(a, phi, &fredholm, &targets, cfg, suffix)?;
    observations.push(obs(0, 0, "hypothesis", hypothesis_value(&decision)));

    let mut parts: Vec<Criterion> = targets
        .iter()
        .map(|&(k, _)| Criterion::Within {
            quantity: format!("sup_ratio{}", suffix(k)),
            min: None,
            max: Some(1.0 + ROUNDING),
        })
        .collect();
    parts.push(Criterion::Requires {
        quantity: "hypothesis".into(),
    });

    let mut params = cfg.parameters();
    params.insert("operator".into(), json!(a.to_literal()));
    params.insert("phi".into(), phi_value(phi));
    let mut report =
        ExperimentReport::new("classical", params, observations, Criterion::All { parts })
            .with_note(decision.criterion.clone());
    for &(k, _) in &targets {
        let worst = report.max_of(&format!("sup_ratio{}", suffix(k)));
        report = report.with_constant(&format!("max_sup_ratio{}", suffix(k)), worst);
    }
    Ok(report)
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Dyadic-shell profile of `χ u_k` under `φ² ⟨·⟩^{2m_k}`, normalized by the
/// number of lattice points per shell, with its log₂ slope per component.
///
/// Local membership cannot be decided from finite data, so the verdict is
/// always inconclusive.
pub fn local_regularity_diagnostic(
    a: &MatrixDiffOp,
    phi: &RoFunction,
    cutoff: &TrigPoly,
    u: &TrigVector,
) -> Result<ExperimentReport> {
    if u.p() != a.p() || u.dim() != a.dim() || cutoff.dim() != a.dim() {
        return Err(Error::ShapeMismatch(format!(
            "operator is {}x{} on T^{}, solution is a {}-vector on T^{}, cutoff lives on T^{}",
            a.p(),
            a.p(),
            a.dim(),
            u.p(),
            u.dim(),
            cutoff.dim()
        )));
    }
    let weights = column_weights(a, phi);
    let mut observations = Vec::new();
    let mut slopes = Vec::new();
    for (k, (uk, w)) in u.components().iter().zip(&weights).enumerate() {
        let local = cutoff.multiply(uk);
        let bw = local.bandwidth();
        let energies = shell_energies(&local, w)?;
        let counts = shell_counts(a.dim(), bw);
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (s, (&e, &c)) in energies.iter().zip(&counts).enumerate() {
            if c == 0 {
                continue;
            }
            let normalized = e / c as f64;
            observations.push(obs(bw, s as u64, &format!("shell_energy_c{k}"), e));
            observations.push(obs(
                bw,
                s as u64,
                &format!("normalized_energy_c{k}"),
                normalized,
            ));
            xs.push(s as f64);
            ys.push((normalized + 1e-300).log2());
        }
        let sl = if xs.len() >= 2 {
            slope(&xs, &ys)
        } else {
            f64::NAN
        };
        observations.push(obs(bw, 0, &format!("slope_c{k}"), sl));
        slopes.push(sl);
    }

    let mut params = std::collections::BTreeMap::new();
    params.insert("operator".into(), json!(a.to_literal()));
    params.insert("phi".into(), phi_value(phi));
    params.insert("cutoff".into(), json!(cutoff));
    params.insert("u".into(), json!(u));
    let mut report = ExperimentReport::new(
        "local_regularity",
        params,
        observations,
        Criterion::Diagnostic,
    );
    for (k, s) in slopes.into_iter().enumerate() {
        report = report.with_constant(&format!("slope_c{k}"), s);
    }
    Ok(report)
}
