use rayon::prelude::*;
use serde_json::json;

use super::report::{obs, Criterion, ExperimentReport};
use super::{phi_value, ExperimentConfig};
use crate::error::{Error, Result};
use crate::rofunc::{interpolation_parameter, matuszewska, RoFunction};
use crate::torus::{band, bracket, hnorm, random_trig_from, stream_rng};

/// Relative slack for identities that are exact in exact arithmetic.
const IDENTITY_TOL: f64 = 1e-12;

/// Compares `‖u‖_φ` with the interpolation norm
/// `(Σ ψ²(⟨k⟩^{s1-s0}) ⟨k⟩^{2 s0} |û(k)|²)^{1/2}` of the Sobolev pair `(s0, s1)`.
///
/// The generating operator of the pair acts as the multiplier `⟨k⟩^{s1-s0}`,
/// so the two norms agree frequency by frequency. The pseudoconcavity ratio of
/// `ψ` is recorded as a constant without being judged.
pub fn interpolation_identity_check(
    phi: &RoFunction,
    s0: f64,
    s1: f64,
    n: usize,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let psi = interpolation_parameter(phi, s0, s1)?;
    let d = s1 - s0;
    let mut observations = Vec::new();
    for &b in &cfg.bandwidths {
        let rows = (0..cfg.samples as u64)
            .into_par_iter()
            .map(|s| {
                let u = random_trig_from(&mut stream_rng(cfg.seed, s), n, b, phi, cfg.delta)?;
                let mut sum = 0.0;
                for (k, c) in u.iter() {
                    let t = bracket(k);
                    sum += (psi.eval(t.powf(d))? * t.powf(s0)).powi(2) * c.norm_sqr();
                }
                let interp = sum.sqrt();
                let direct = hnorm(&u, phi)?;
                Ok(obs(b, s, "rel_dev", (interp - direct).abs() / direct))
            })
            .collect::<Result<Vec<_>>>()?;
        observations.extend(rows);
    }

    let mut params = cfg.parameters();
    params.insert("phi".into(), phi_value(phi));
    params.insert("s0".into(), json!(s0));
    params.insert("s1".into(), json!(s1));
    params.insert("n".into(), json!(n));
    let report = ExperimentReport::new(
        "interp_check",
        params,
        observations,
        Criterion::Within {
            quantity: "rel_dev".into(),
            min: None,
            max: Some(IDENTITY_TOL),
        },
    );
    let worst = report.max_of("rel_dev");
    let concavity = psi.pseudoconcavity(1.0, 1e6, 400)?;
    Ok(report
        .with_constant("max_rel_dev", worst)
        .with_constant("pseudoconcavity", concavity))
}

/// Octaves covered by the tail scan and grid points per octave.
const TAIL_OCTAVES: usize = 30;
const TAIL_DENSITY: usize = 16;

/// Checks `‖u‖_{s0} ≤ C₀ ‖u‖_φ` and `‖u‖_φ ≤ C₁ ‖u‖_{s1}` on random samples,
/// with `C₀ = sup ⟨k⟩^{s0}/φ(⟨k⟩)` and `C₁ = sup φ(⟨k⟩)/⟨k⟩^{s1}` over the band.
///
/// The compactness diagnostic records `sup_{t > T}` of both ratios for
/// `T = 2^j` on a geometric grid of `t`.
pub fn embedding_chain_check(
    phi: &RoFunction,
    s0: f64,
    s1: f64,
    n: usize,
    cfg: &ExperimentConfig,
) -> Result<ExperimentReport> {
    let idx = matuszewska(phi)?;
    if !(idx.lower_exceeds(s0) && idx.upper_below(s1)) {
        return Err(Error::Domain(format!(
            "need s0 < σ₀ and σ₁ < s1, got s0 = {s0}, s1 = {s1}, indices [{}, {}] ± {}",
            idx.sigma0, idx.sigma1, idx.half_width
        )));
    }
    let lower = RoFunction::power(s0);
    let upper = RoFunction::power(s1);
    let ln_low = |t: f64| -> Result<f64> { Ok(s0 * t.ln() - phi.ln_eval(t)?) };
    let ln_up = |t: f64| -> Result<f64> { Ok(phi.ln_eval(t)? - s1 * t.ln()) };

    let mut observations = Vec::new();
    let (mut c0, mut c1) = (0.0, 0.0);
    for &b in &cfg.bandwidths {
        let (mut l0, mut l1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for k in band(n, b) {
            let t = bracket(&k);
            l0 = l0.max(ln_low(t)?);
            l1 = l1.max(ln_up(t)?);
        }
        (c0, c1) = (l0.exp(), l1.exp());
        observations.push(obs(b, 0, "C0", c0));
        observations.push(obs(b, 0, "C1", c1));
        let rows = (0..cfg.samples as u64)
            .into_par_iter()
            .map(|s| {
                let u = random_trig_from(&mut stream_rng(cfg.seed, s), n, b, phi, cfg.delta)?;
                let (ns0, nphi, ns1) = (hnorm(&u, &lower)?, hnorm(&u, phi)?, hnorm(&u, &upper)?);
                Ok([
                    obs(b, s, "lower_ratio", ns0 / (c0 * nphi)),
                    obs(b, s, "upper_ratio", nphi / (c1 * ns1)),
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        observations.extend(rows.into_iter().flatten());
    }

    // Suffix maxima over the grid t_i = 2^{i / TAIL_DENSITY}.
    let points = TAIL_OCTAVES * TAIL_DENSITY;
    let grid: Vec<f64> = (0..=points)
        .map(|i| (i as f64 / TAIL_DENSITY as f64).exp2())
        .collect();
    let mut tail0 = vec![f64::NEG_INFINITY; grid.len() + 1];
    let mut tail1 = vec![f64::NEG_INFINITY; grid.len() + 1];
    for i in (0..grid.len()).rev() {
        tail0[i] = tail0[i + 1].max(ln_low(grid[i])?);
        tail1[i] = tail1[i + 1].max(ln_up(grid[i])?);
    }
    for j in 0..TAIL_OCTAVES {
        let first = j * TAIL_DENSITY + 1;
        observations.push(obs(0, j as u64, "tail_lower", tail0[first].exp()));
        observations.push(obs(0, j as u64, "tail_upper", tail1[first].exp()));
    }

    let mut params = cfg.parameters();
    params.insert("phi".into(), phi_value(phi));
    params.insert("s0".into(), json!(s0));
    params.insert("s1".into(), json!(s1));
    params.insert("n".into(), json!(n));
    let bound = Some(1.0 + IDENTITY_TOL);
    let report = ExperimentReport::new(
        "embedding",
        params,
        observations,
        Criterion::All {
            parts: vec![
                Criterion::Within {
                    quantity: "lower_ratio".into(),
                    min: None,
                    max: bound,
                },
                Criterion::Within {
                    quantity: "upper_ratio".into(),
                    min: None,
                    max: bound,
                },
                Criterion::NonIncreasing {
                    quantity: "tail_lower".into(),
                },
                Criterion::NonIncreasing {
                    quantity: "tail_upper".into(),
                },
            ],
        },
    );
    let last = TAIL_OCTAVES - 1;
    let t_lower = tail0[last * TAIL_DENSITY + 1].exp();
    let t_upper = tail1[last * TAIL_DENSITY + 1].exp();
    Ok(report
        .with_constant("C0", c0)
        .with_constant("C1", c1)
        .with_constant("tail_lower_last", t_lower)
        .with_constant("tail_upper_last", t_upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::{Frequency, TrigPoly};
    use crate::verify::Verdict;
    use num_complex::Complex64;

    fn cfg(samples: usize) -> ExperimentConfig {
        ExperimentConfig {
            bandwidths: vec![8, 32],
            samples,
            ..Default::default()
        }
    }

    #[test]
    fn identity_is_exact() {
        for (phi, s0, s1) in [
            (RoFunction::power(1.0), 0.0, 2.0),
            (RoFunction::log_power(1.0, -1.0, 0.0), 0.0, 3.0),
            (RoFunction::power_sine_log(1.0, 0.3).unwrap(), 0.5, 1.5),
        ] {
            let r = interpolation_identity_check(&phi, s0, s1, 1, &cfg(20)).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{}", r.constants["max_rel_dev"]);
        }
    }

    #[test]
    fn single_frequency_interpolation() {
        // Both sides reduce to φ(√10) for u = e^{i3x}.
        let phi = RoFunction::log_power(1.0, -1.0, 0.0);
        let psi = interpolation_parameter(&phi, 0.0, 3.0).unwrap();
        let t = 10f64.sqrt();
        let u = TrigPoly::monomial(Frequency(vec![3]), Complex64::new(1.0, 0.0));
        assert!((psi.eval(t.powi(3)).unwrap() - phi.eval(t).unwrap()).abs() < 1e-13);
        assert!((hnorm(&u, &phi).unwrap() - phi.eval(t).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn identity_rejects_bad_pair() {
        assert!(matches!(
            interpolation_identity_check(&RoFunction::power(1.0), 1.5, 2.0, 1, &cfg(2)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn power_chain_constants() {
        let r = embedding_chain_check(&RoFunction::power(1.0), 0.0, 2.0, 1, &cfg(10)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!((r.constants["C0"] - 1.0).abs() < 1e-15);
        assert!((r.constants["C1"] - 1.0).abs() < 1e-15);
        // Tails behave like T^{-1}.
        let tail: Vec<f64> = r
            .observations
            .iter()
            .filter(|o| o.quantity == "tail_lower")
            .map(|o| o.value)
            .collect();
        for (j, v) in tail.iter().enumerate() {
            let t = (j as f64).exp2() * (1.0 / TAIL_DENSITY as f64).exp2();
            assert!((v - 1.0 / t).abs() < 1e-12 * (1.0 / t));
        }
    }

    #[test]
    fn oscillating_chain() {
        let phi = RoFunction::power_sine_log(1.0, 0.3).unwrap();
        let r = embedding_chain_check(&phi, 0.5, 1.5, 1, &cfg(10)).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.constants["tail_lower_last"] < 1e-3);
        assert!(r.constants["tail_upper_last"] < 1e-3);
        assert!(embedding_chain_check(&phi, 1.2, 1.5, 1, &cfg(2)).is_err());
    }
}
