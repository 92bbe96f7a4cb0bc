use num_complex::Complex64;

use super::{Frequency, TrigPoly, TrigVector};
use crate::error::{Error, Result};
use crate::rofunc::RoFunction;

/// `⟨k⟩ = (1 + |k|²)^{1/2}`
pub fn bracket(k: &Frequency) -> f64 {
    (1.0 + k.norm_sq()).sqrt()
}

/// `‖u‖_φ = (Σ_k φ²(⟨k⟩) |û(k)|²)^{1/2}`.
///
/// Accumulates in log space per term so that weights beyond `f64` range still
/// produce a finite norm whenever the result itself is representable.
pub fn hnorm(u: &TrigPoly, phi: &RoFunction) -> Result<f64> {
    let mut logs = Vec::with_capacity(u.len());
    for (k, c) in u.iter() {
        logs.push(phi.ln_eval(bracket(k))? + c.norm().ln());
    }
    Ok(log_sum_sq(&logs))
}

/// `sqrt(Σ exp(2 l_i))` without overflow.
fn log_sum_sq(logs: &[f64]) -> f64 {
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return 0.0;
    }
    let s: f64 = logs.iter().map(|l| (2.0 * (l - top)).exp()).sum();
    top.exp() * s.sqrt()
}

/// Weighted vector norm `(Σ_j ‖u_j‖²_{φ ρ^{s_j}})^{1/2}` with per-component
/// power shifts `s_j`.
pub fn vec_hnorm(u: &TrigVector, phi: &RoFunction, shifts: &[f64]) -> Result<f64> {
    if shifts.len() != u.p() {
        return Err(Error::ShapeMismatch(format!(
            "{} shifts for a vector of {} components",
            shifts.len(),
            u.p()
        )));
    }
    let mut logs = Vec::new();
    for (comp, &s) in u.components().iter().zip(shifts) {
        for (k, c) in comp.iter() {
            let b = bracket(k);
            logs.push(phi.ln_eval(b)? + s * b.ln() + c.norm().ln());
        }
    }
    Ok(log_sum_sq(&logs))
}

/// Every component measured in the same space `H^φ`.
pub fn hnorm_vec(u: &TrigVector, phi: &RoFunction) -> Result<f64> {
    vec_hnorm(u, phi, &vec![0.0; u.p()])
}

/// `(u, v) = Σ_j Σ_k û_j(k) conj(v̂_j(k))`, the `L²` pairing normalised by the torus volume.
pub fn inner_product(u: &TrigVector, v: &TrigVector) -> Result<Complex64> {
    if u.p() != v.p() || u.dim() != v.dim() {
        return Err(Error::ShapeMismatch(format!(
            "pairing a {}-vector on T^{} with a {}-vector on T^{}",
            u.p(),
            u.dim(),
            v.p(),
            v.dim()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b) in u.components().iter().zip(v.components()) {
        let (small, large, flip) = if a.len() <= b.len() {
            (a, b, false)
        } else {
            (b, a, true)
        };
        for (k, x) in small.iter() {
            let y = large.coeff(k);
            acc += if flip { y * x.conj() } else { x * y.conj() };
        }
    }
    Ok(acc)
}

/// Dyadic shell of a frequency: `s` with `2^s ≤ ⟨k⟩ < 2^{s+1}`.
fn shell_of(k: &Frequency) -> usize {
    bracket(k).log2().floor() as usize
}

/// Weighted energy per dyadic shell, `E_s = Σ_{2^s ≤ ⟨k⟩ < 2^{s+1}} φ²(⟨k⟩) |û(k)|²`.
pub fn shell_energies(u: &TrigPoly, phi: &RoFunction) -> Result<Vec<f64>> {
    let mut out = vec![0.0; shell_of(&Frequency(vec![u.bandwidth() as i64; u.dim()])) + 1];
    for (k, c) in u.iter() {
        out[shell_of(k)] += phi.eval(bracket(k))?.powi(2) * c.norm_sqr();
    }
    Ok(out)
}

/// Number of lattice points with `|k|∞ ≤ bandwidth` in each dyadic shell.
pub fn shell_counts(n: usize, bandwidth: u64) -> Vec<u64> {
    let top = shell_of(&Frequency(vec![bandwidth as i64; n]));
    let mut out = vec![0u64; top + 1];
    for k in super::band(n, bandwidth) {
        out[shell_of(&k)] += 1;
    }
    out
}
