//! RO-varying weights on `[1, ∞)`.
//!
//! A weight `φ` is RO-varying when `φ(λt)/φ(t)` stays within `[c⁻¹, c]` for
//! `t ≥ 1` and `λ` in some interval `[1, a]`. Every weight here is evaluated
//! through `ln φ(eᵘ)`, which keeps index estimation and weighted integrals
//! free of overflow for very large `t`.

mod bounded;
mod compare;
mod convergence;
mod indices;
mod interp;
mod literal;
mod repr;

use std::sync::Arc;

pub use bounded::BoundedFn;
pub use compare::{compare, Comparison, ComparisonMethod, Relation};
pub use convergence::{
    embedding_integral, embedding_integral_with, ConvergenceDecision, DecidedBy, QuadratureConfig,
    Verdict,
};
pub use indices::{
    matuszewska, matuszewska_estimate, matuszewska_with, IndexEstimatorConfig, IndexMethod,
    MatuszewskaIndices,
};
pub use interp::{interpolation_parameter, pseudoconcavity_check, InterpolationParameter};
pub use literal::{BoundedLiteral, RoLiteral};
pub use repr::{BgRepr, Tabulated, BG_ABS_TOL};

use crate::error::{Error, Result};

/// A positive RO-varying weight on `[1, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub enum RoFunction {
    /// `t^s · (1 + ln t)^b1 · (1 + ln(1 + ln t))^b2`
    LogPower {
        s: f64,
        b1: f64,
        b2: f64,
    },
    /// `t^s · exp(θ · sin(ln t))`
    PowerSineLog {
        s: f64,
        theta: f64,
    },
    /// `exp(β(t) + ∫₁ᵗ γ(τ)/τ dτ)`
    Bg(Arc<BgRepr>),
    Tabulated(Arc<Tabulated>),
}

impl RoFunction {
    pub fn log_power(s: f64, b1: f64, b2: f64) -> Self {
        RoFunction::LogPower { s, b1, b2 }
    }

    /// `t^s`
    pub fn power(s: f64) -> Self {
        Self::log_power(s, 0.0, 0.0)
    }

    /// `φ ≡ 1`
    pub fn one() -> Self {
        Self::power(0.0)
    }

    pub fn power_sine_log(s: f64, theta: f64) -> Result<Self> {
        if !(theta >= 0.0) || !theta.is_finite() || !s.is_finite() {
            return Err(Error::Config(format!(
                "power_sine_log needs finite s and θ ≥ 0, got s = {s}, θ = {theta}"
            )));
        }
        Ok(RoFunction::PowerSineLog { s, theta })
    }

    /// Builds `exp(β + ∫ γ/τ)`; both callables must carry a sup-norm bound.
    pub fn from_bg(beta: BoundedFn, gamma: BoundedFn) -> Result<Self> {
        Ok(RoFunction::Bg(Arc::new(BgRepr::new(beta, gamma)?)))
    }

    pub fn tabulated(t: Vec<f64>, phi: Vec<f64>) -> Result<Self> {
        Ok(RoFunction::Tabulated(Arc::new(Tabulated::new(t, phi)?)))
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            RoFunction::LogPower { .. } => "log_power",
            RoFunction::PowerSineLog { .. } => "power_sine_log",
            RoFunction::Bg(_) => "bg",
            RoFunction::Tabulated(_) => "tabulated",
        }
    }

    /// `ln φ(eᵘ)` for `u ≥ 0`. May be non-finite for an invalid weight.
    pub fn ln_at_log(&self, u: f64) -> f64 {
        match self {
            RoFunction::LogPower { s, b1, b2 } => {
                let l1 = u.ln_1p();
                let mut v = s * u;
                if *b1 != 0.0 {
                    v += b1 * l1;
                }
                if *b2 != 0.0 {
                    v += b2 * l1.ln_1p();
                }
                v
            }
            RoFunction::PowerSineLog { s, theta } => s * u + theta * u.sin(),
            RoFunction::Bg(bg) => bg.ln_at_log(u),
            RoFunction::Tabulated(tab) => tab.ln_at_log(u),
        }
    }

    /// `ln φ(t)` for `t ≥ 1`.
    pub fn ln_eval(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(Error::Domain(format!("weight evaluated at t = {t} < 1")));
        }
        let v = self.ln_at_log(t.ln());
        if v.is_nan() || v == f64::NEG_INFINITY {
            return Err(Error::InvalidFunction {
                variant: self.variant_name(),
                t,
            });
        }
        Ok(v)
    }

    /// `φ(t)` for `t ≥ 1`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let v = self.ln_eval(t)?.exp();
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::InvalidFunction {
                variant: self.variant_name(),
                t,
            });
        }
        Ok(v)
    }

    /// `φ(t) · t^m`, staying inside the same variant.
    pub fn times_power(&self, m: f64) -> Self {
        if m == 0.0 {
            return self.clone();
        }
        match self {
            RoFunction::LogPower { s, b1, b2 } => RoFunction::LogPower {
                s: s + m,
                b1: *b1,
                b2: *b2,
            },
            RoFunction::PowerSineLog { s, theta } => RoFunction::PowerSineLog {
                s: s + m,
                theta: *theta,
            },
            RoFunction::Bg(bg) => {
                let gamma = BoundedFn::Sum(vec![bg.gamma().clone(), BoundedFn::Const(m)]);
                RoFunction::Bg(Arc::new(
                    BgRepr::new(bg.beta().clone(), gamma).expect("bounds carried over"),
                ))
            }
            RoFunction::Tabulated(tab) => RoFunction::Tabulated(Arc::new(tab.times_power(m))),
        }
    }

    /// Pointwise product; closed under the log-power family only.
    pub fn product(&self, other: &RoFunction) -> Result<RoFunction> {
        match (self, other) {
            (
                RoFunction::LogPower { s, b1, b2 },
                RoFunction::LogPower {
                    s: s2,
                    b1: c1,
                    b2: c2,
                },
            ) => Ok(RoFunction::log_power(s + s2, b1 + c1, b2 + c2)),
            _ => Err(Error::Unsupported(format!(
                "product of {} and {} weights",
                self.variant_name(),
                other.variant_name()
            ))),
        }
    }
}

/// Grid estimate of the RO constant `c` for a given `a`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RoCheck {
    pub c_estimate: f64,
    pub ok: bool,
}

/// Scans `max(φ(λt)/φ(t), φ(t)/φ(λt))` over a geometric `t`-grid on
/// `[1, t_max]` and a uniform `λ`-grid on `[1, a]`.
pub fn ro_check(phi: &RoFunction, a: f64, t_max: f64) -> RoCheck {
    const T_POINTS: usize = 400;
    const LAMBDA_POINTS: usize = 33;
    let u_max = t_max.max(1.0).ln();
    let mut c: f64 = 1.0;
    for i in 0..T_POINTS {
        let t = (u_max * i as f64 / (T_POINTS - 1) as f64).exp();
        let base = match phi.eval(t) {
            Ok(v) => v,
            Err(_) => {
                return RoCheck {
                    c_estimate: f64::INFINITY,
                    ok: false,
                }
            }
        };
        for j in 0..LAMBDA_POINTS {
            let lambda = 1.0 + (a - 1.0) * j as f64 / (LAMBDA_POINTS - 1) as f64;
            let v = match phi.eval(lambda * t) {
                Ok(v) => v,
                Err(_) => {
                    return RoCheck {
                        c_estimate: f64::INFINITY,
                        ok: false,
                    }
                }
            };
            let r = v / base;
            c = c.max(r).max(1.0 / r);
        }
    }
    RoCheck {
        c_estimate: c,
        ok: c.is_finite(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    #[test]
    fn eval_closed_forms() {
        assert_relative_eq!(
            RoFunction::power(1.0).eval(4.0).unwrap(),
            4.0,
            max_relative = 1e-15
        );
        assert_eq!(
            RoFunction::log_power(2.0, -3.0, 1.0).eval(1.0).unwrap(),
            1.0
        );
        assert_relative_eq!(
            RoFunction::log_power(1.0, 1.0, 0.0).eval(E).unwrap(),
            2.0 * E,
            max_relative = 1e-14
        );
        let psl = RoFunction::power_sine_log(0.0, 0.3).unwrap();
        assert_eq!(psl.eval(1.0).unwrap(), 1.0);
    }

    #[test]
    fn eval_rejects_t_below_one() {
        assert!(matches!(RoFunction::one().eval(0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn eval_positive_on_stress_grid() {
        let weights = vec![
            RoFunction::log_power(2.0, -3.0, 1.0),
            RoFunction::log_power(-1.5, 2.0, -1.0),
            RoFunction::power_sine_log(1.0, 0.3).unwrap(),
            RoFunction::from_bg(
                BoundedFn::SinLog {
                    amp: 0.2,
                    freq: 1.0,
                    phase: 0.0,
                },
                BoundedFn::InvOnePlusLog { scale: 1.0 },
            )
            .unwrap(),
            RoFunction::tabulated(vec![1.0, 10.0, 100.0], vec![1.0, 3.0, 10.0]).unwrap(),
        ];
        for phi in &weights {
            for i in 0..=80 {
                let t = 10f64.powf(i as f64 * 0.1);
                let v = phi.eval(t).unwrap();
                assert!(v.is_finite() && v > 0.0, "{phi:?} at {t}");
            }
        }
    }

    #[test]
    fn ro_check_pure_power_is_exact() {
        let rc = ro_check(&RoFunction::power(1.5), 2.0, 1e6);
        assert!(rc.ok);
        assert_relative_eq!(rc.c_estimate, 2f64.powf(1.5), max_relative = 1e-12);
        let rc = ro_check(&RoFunction::power(-0.5), 3.0, 1e6);
        assert_relative_eq!(rc.c_estimate, 3f64.powf(0.5), max_relative = 1e-12);
    }

    #[test]
    fn ro_check_sine_log_within_bound() {
        let rc = ro_check(&RoFunction::power_sine_log(0.0, 0.3).unwrap(), 2.0, 1e8);
        assert!(rc.ok);
        assert!(rc.c_estimate <= 0.6f64.exp());
        // |sin(x + h) - sin x| ≤ 2 sin(h/2), attained up to grid resolution.
        let sharp = (0.6 * (2f64.ln() / 2.0).sin()).exp();
        assert!(rc.c_estimate <= sharp + 1e-12);
        assert!(rc.c_estimate > sharp * 0.999);
    }

    #[test]
    fn ro_check_flags_zero_sample() {
        let tab =
            RoFunction::tabulated(vec![1.0, 2.0, 4.0, 8.0], vec![1.0, 2.0, 0.0, 8.0]).unwrap();
        assert!(matches!(
            tab.eval(4.0),
            Err(Error::InvalidFunction {
                variant: "tabulated",
                ..
            })
        ));
        let rc = ro_check(&tab, 2.0, 100.0);
        assert!(!rc.ok);
    }

    #[test]
    fn bg_constant_gamma_is_power() {
        let phi = RoFunction::from_bg(BoundedFn::Const(0.0), BoundedFn::Const(1.5)).unwrap();
        for t in [1.0, 2.0, 17.3, 1e4, 3.3e7] {
            assert_relative_eq!(
                phi.eval(t).unwrap(),
                f64::powf(t, 1.5),
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn bg_sine_beta_matches_power_sine_log() {
        let bg = RoFunction::from_bg(
            BoundedFn::SinLog {
                amp: 0.3,
                freq: 1.0,
                phase: 0.0,
            },
            BoundedFn::Const(0.0),
        )
        .unwrap();
        let psl = RoFunction::power_sine_log(0.0, 0.3).unwrap();
        for t in [1.0, 3.0, 55.0, 1e5, 1e9] {
            assert_relative_eq!(
                bg.eval(t).unwrap(),
                psl.eval(t).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn bg_inverse_log_gamma_matches_antiderivative() {
        // ∫ dτ / (τ (1 + ln τ)) = ln(1 + ln t)
        let phi = RoFunction::from_bg(
            BoundedFn::Const(0.0),
            BoundedFn::InvOnePlusLog { scale: 1.0 },
        )
        .unwrap();
        let tol = 1e3 * BG_ABS_TOL;
        for t in [1.0, 1.5, E, 100.0, 1e6, 1e12] {
            let oracle = 1.0 + f64::ln(t);
            assert!(
                (phi.eval(t).unwrap() - oracle).abs() <= tol * oracle,
                "t = {t}"
            );
        }
    }

    #[test]
    fn bg_missing_bound_is_config_error() {
        let err = RoFunction::from_bg(
            BoundedFn::Const(0.0),
            BoundedFn::custom(|t| t.ln().cos(), None),
        );
        assert!(matches!(err, Err(Error::Config(_))));
        let ok = RoFunction::from_bg(
            BoundedFn::Const(0.0),
            BoundedFn::custom(|t| t.ln().cos(), Some(1.0)),
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn tabulated_interpolates_and_extends() {
        let tab = RoFunction::Tabulated(Arc::new(
            Tabulated::sample(|t| t.powf(0.75), 2.0, 20).unwrap(),
        ));
        if let RoFunction::Tabulated(inner) = &tab {
            assert_relative_eq!(inner.tail_exponent(), 0.75, max_relative = 1e-12);
        }
        for t in [1.0, 3.0, 1000.0, 1e9] {
            assert_relative_eq!(tab.eval(t).unwrap(), t.powf(0.75), max_relative = 1e-10);
        }
    }

    #[test]
    fn tabulated_rejects_bad_grids() {
        assert!(RoFunction::tabulated(vec![2.0, 4.0], vec![1.0, 1.0]).is_err());
        assert!(RoFunction::tabulated(vec![1.0, 2.0, 3.0], vec![1.0, 1.0, 1.0]).is_err());
        assert!(RoFunction::tabulated(vec![1.0], vec![1.0]).is_err());
        assert!(RoFunction::tabulated(vec![1.0, 2.0], vec![1.0]).is_err());
    }

    #[test]
    fn times_power_every_variant() {
        let weights = vec![
            RoFunction::log_power(0.5, 1.0, -1.0),
            RoFunction::power_sine_log(0.2, 0.3).unwrap(),
            RoFunction::from_bg(
                BoundedFn::SinLog {
                    amp: 0.1,
                    freq: 2.0,
                    phase: 0.5,
                },
                BoundedFn::Const(0.3),
            )
            .unwrap(),
            RoFunction::tabulated(vec![1.0, 4.0, 16.0, 64.0], vec![1.0, 1.5, 3.0, 4.0]).unwrap(),
        ];
        for phi in &weights {
            let shifted = phi.times_power(2.0);
            assert_eq!(shifted.variant_name(), phi.variant_name());
            for t in [1.0, 2.5, 40.0, 1e3] {
                assert_relative_eq!(
                    shifted.eval(t).unwrap(),
                    phi.eval(t).unwrap() * t * t,
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn product_of_log_powers() {
        let a = RoFunction::log_power(1.0, 2.0, 0.5);
        let b = RoFunction::log_power(-0.5, -1.0, 0.5);
        assert_eq!(a.product(&b).unwrap(), RoFunction::log_power(0.5, 1.0, 1.0));
        assert!(a
            .product(&RoFunction::power_sine_log(0.0, 0.1).unwrap())
            .is_err());
    }
}
