use std::fmt;
use std::sync::Mutex;

use super::bounded::BoundedFn;
use crate::error::{Error, Result};

/// Default absolute tolerance for each unit-length quadrature piece of the
/// `∫ γ(τ)/τ dτ` term.
pub const BG_ABS_TOL: f64 = 1e-12;

/// `φ(t) = exp(β(t) + ∫₁ᵗ γ(τ)/τ dτ)`.
///
/// In the log variable `u = ln t` the integral is `∫₀ᵘ γ(eᵛ) dv`. Prefix
/// integrals at the integer knots `u = 0, 1, 2, …` are memoized, so repeated
/// evaluations only integrate over a sub-unit piece.
pub struct BgRepr {
    pub(crate) beta: BoundedFn,
    pub(crate) gamma: BoundedFn,
    beta_bound: f64,
    gamma_bound: f64,
    abs_tol: f64,
    prefix: Mutex<Vec<f64>>,
}

impl BgRepr {
    pub fn new(beta: BoundedFn, gamma: BoundedFn) -> Result<Self> {
        let beta_bound = beta
            .bound()
            .ok_or_else(|| Error::Config("bound for β is missing".into()))?;
        let gamma_bound = gamma
            .bound()
            .ok_or_else(|| Error::Config("bound for γ is missing".into()))?;
        if !beta_bound.is_finite() || !gamma_bound.is_finite() {
            return Err(Error::Config("bounds for β and γ must be finite".into()));
        }
        Ok(BgRepr {
            beta,
            gamma,
            beta_bound,
            gamma_bound,
            abs_tol: BG_ABS_TOL,
            prefix: Mutex::new(vec![0.0]),
        })
    }

    pub fn beta(&self) -> &BoundedFn {
        &self.beta
    }

    pub fn gamma(&self) -> &BoundedFn {
        &self.gamma
    }

    pub fn beta_bound(&self) -> f64 {
        self.beta_bound
    }

    pub fn gamma_bound(&self) -> f64 {
        self.gamma_bound
    }

    /// Absolute tolerance requested from the quadrature on each unit piece.
    pub fn quadrature_tolerance(&self) -> f64 {
        self.abs_tol
    }

    fn integrate_piece(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        let gamma = &self.gamma;
        quadrature::integrate(|v: f64| gamma.eval_log(v), a, b, self.abs_tol).integral
    }

    /// `∫₀ᵘ γ(eᵛ) dv` for `u ≥ 0`.
    pub fn log_integral(&self, u: f64) -> f64 {
        let knot = u.floor();
        let j = knot as usize;
        let base = {
            let mut prefix = self.prefix.lock().unwrap_or_else(|e| e.into_inner());
            while prefix.len() <= j {
                let i = prefix.len() - 1;
                let next = prefix[i] + self.integrate_piece(i as f64, (i + 1) as f64);
                prefix.push(next);
            }
            prefix[j]
        };
        base + self.integrate_piece(knot, u)
    }

    /// `ln φ(eᵘ)`.
    pub fn ln_at_log(&self, u: f64) -> f64 {
        self.beta.eval_log(u) + self.log_integral(u)
    }
}

impl fmt::Debug for BgRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BgRepr")
            .field("beta", &self.beta)
            .field("gamma", &self.gamma)
            .field("beta_bound", &self.beta_bound)
            .field("gamma_bound", &self.gamma_bound)
            .finish()
    }
}

impl PartialEq for BgRepr {
    fn eq(&self, other: &Self) -> bool {
        self.beta == other.beta && self.gamma == other.gamma
    }
}

/// Samples of `φ` on a geometric grid starting at `t = 1`, log-linearly
/// interpolated and extended by a power law beyond the last sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    t: Vec<f64>,
    phi: Vec<f64>,
    log_t: Vec<f64>,
    log_phi: Vec<f64>,
    tail_exponent: f64,
}

impl Tabulated {
    pub fn new(t: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        if t.len() != phi.len() {
            return Err(Error::Config(format!(
                "tabulated grid has {} abscissae but {} values",
                t.len(),
                phi.len()
            )));
        }
        if t.len() < 2 {
            return Err(Error::Config(
                "tabulated grid needs at least two samples".into(),
            ));
        }
        if t[0] != 1.0 {
            return Err(Error::Config("tabulated grid must start at t = 1".into()));
        }
        if t.iter().chain(phi.iter()).any(|v| !v.is_finite()) {
            return Err(Error::Config("tabulated samples must be finite".into()));
        }
        let ratio = t[1] / t[0];
        if ratio <= 1.0 {
            return Err(Error::Config("tabulated grid must be increasing".into()));
        }
        for w in t.windows(2) {
            let r = w[1] / w[0];
            if (r - ratio).abs() > 1e-9 * ratio {
                return Err(Error::Config("tabulated grid must be geometric".into()));
            }
        }
        let log_t: Vec<f64> = t.iter().map(|v| v.ln()).collect();
        let log_phi: Vec<f64> = phi.iter().map(|v| v.ln()).collect();
        let tail_exponent = fit_tail_exponent(&log_t, &log_phi);
        Ok(Tabulated {
            t,
            phi,
            log_t,
            log_phi,
            tail_exponent,
        })
    }

    /// Samples `f` on `count` points `1, ratio, ratio², …`.
    pub fn sample<F: Fn(f64) -> f64>(f: F, ratio: f64, count: usize) -> Result<Self> {
        let t: Vec<f64> = (0..count).map(|i| ratio.powi(i as i32)).collect();
        let phi = t.iter().map(|&x| f(x)).collect();
        Self::new(t, phi)
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }

    pub(crate) fn times_power(&self, m: f64) -> Self {
        let phi = self
            .t
            .iter()
            .zip(&self.phi)
            .map(|(t, p)| p * t.powf(m))
            .collect();
        // Grid was validated already; only the values change.
        Self::new(self.t.clone(), phi).expect("validated grid")
    }

    pub fn ln_at_log(&self, u: f64) -> f64 {
        let last = self.log_t.len() - 1;
        if u >= self.log_t[last] {
            return self.log_phi[last] + self.tail_exponent * (u - self.log_t[last]);
        }
        let i = self.log_t.partition_point(|&x| x <= u) - 1;
        let (u0, u1) = (self.log_t[i], self.log_t[i + 1]);
        if u == u0 {
            return self.log_phi[i];
        }
        let w = (u - u0) / (u1 - u0);
        (1.0 - w) * self.log_phi[i] + w * self.log_phi[i + 1]
    }
}

/// Least-squares slope of `ln φ` against `ln t` over the last decade of samples.
fn fit_tail_exponent(log_t: &[f64], log_phi: &[f64]) -> f64 {
    let last = *log_t.last().unwrap();
    let cutoff = last - std::f64::consts::LN_10;
    let mut start = log_t.partition_point(|&x| x < cutoff - 1e-12);
    if log_t.len() - start < 2 {
        start = log_t.len() - 2;
    }
    least_squares_slope(&log_t[start..], &log_phi[start..])
}

pub(crate) fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    sxy / sxx
}
