use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{band, bracket, TrigPoly, TrigVector};
use crate::error::{Error, Result};
use crate::rofunc::RoFunction;

/// Deterministic generator for sample `stream` of a run seeded with `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random polynomial with `û(k) = z_k / (φ(⟨k⟩) ⟨k⟩^{(n+δ)/2})` for `|k|∞ ≤ bandwidth`,
/// `z_k` standard complex normal. `‖u‖_φ` stays bounded in expectation as the
/// bandwidth grows.
pub fn random_trig(
    n: usize,
    bandwidth: u64,
    phi: &RoFunction,
    delta: f64,
    seed: u64,
) -> Result<TrigPoly> {
    random_trig_from(&mut stream_rng(seed, 0), n, bandwidth, phi, delta)
}

/// As [`random_trig`], drawing from a caller-supplied generator.
pub fn random_trig_from<R: Rng>(
    rng: &mut R,
    n: usize,
    bandwidth: u64,
    phi: &RoFunction,
    delta: f64,
) -> Result<TrigPoly> {
    if !(delta > 0.0) {
        return Err(Error::Config(format!(
            "margin must be positive, got {delta}"
        )));
    }
    let decay = (n as f64 + delta) / 2.0;
    let mut terms = Vec::new();
    for k in band(n, bandwidth) {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        let b = bracket(&k);
        let scale = (-(phi.ln_eval(b)? + decay * b.ln())).exp();
        terms.push((
            k,
            Complex64::new(re, im) * (scale / std::f64::consts::SQRT_2),
        ));
    }
    TrigPoly::from_terms(n, terms)
}

/// Vector with component `j` drawn by [`random_trig`] under `weights[j]`, from
/// stream `sample · p + j` of `seed`.
pub fn random_trig_vector(
    n: usize,
    bandwidth: u64,
    weights: &[RoFunction],
    delta: f64,
    seed: u64,
    sample: u64,
) -> Result<TrigVector> {
    let p = weights.len() as u64;
    let comps = weights
        .iter()
        .enumerate()
        .map(|(j, w)| {
            random_trig_from(
                &mut stream_rng(seed, sample * p + j as u64),
                n,
                bandwidth,
                w,
                delta,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    TrigVector::new(comps)
}
