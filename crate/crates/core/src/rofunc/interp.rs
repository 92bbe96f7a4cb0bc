use super::indices::{matuszewska, MatuszewskaIndices};
use super::RoFunction;
use crate::error::{Error, Result};

/// The function parameter `ψ` that interpolates `H^φ` between the Sobolev
/// spaces of orders `s0 < s1`:
///
/// `ψ(t) = t^{-s0/(s1-s0)} φ(t^{1/(s1-s0)})` for `t ≥ 1`, and `ψ(t) = φ(1)` on `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationParameter {
    phi: RoFunction,
    s0: f64,
    s1: f64,
}

/// Checks `s0 < σ₀(φ)` and `s1 > σ₁(φ)` (against the widened interval for
/// estimated indices) and returns `ψ`.
pub fn interpolation_parameter(
    phi: &RoFunction,
    s0: f64,
    s1: f64,
) -> Result<InterpolationParameter> {
    let idx = matuszewska(phi)?;
    InterpolationParameter::with_indices(phi, s0, s1, &idx)
}

impl InterpolationParameter {
    /// Same as [`interpolation_parameter`] with indices computed by the caller.
    pub fn with_indices(
        phi: &RoFunction,
        s0: f64,
        s1: f64,
        idx: &MatuszewskaIndices,
    ) -> Result<Self> {
        if !(s0 < s1) {
            return Err(Error::Domain(format!(
                "need s0 < s1, got s0 = {s0}, s1 = {s1}"
            )));
        }
        if !idx.lower_exceeds(s0) {
            return Err(Error::Domain(format!(
                "s0 < σ₀(φ) violated: s0 = {s0}, σ₀ = {} ± {}",
                idx.sigma0, idx.half_width
            )));
        }
        if !idx.upper_below(s1) {
            return Err(Error::Domain(format!(
                "s1 > σ₁(φ) violated: s1 = {s1}, σ₁ = {} ± {}",
                idx.sigma1, idx.half_width
            )));
        }
        Ok(InterpolationParameter {
            phi: phi.clone(),
            s0,
            s1,
        })
    }

    pub fn phi(&self) -> &RoFunction {
        &self.phi
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    /// `ψ(t)` for `t > 0`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("ψ evaluated at t = {t} ≤ 0")));
        }
        if t < 1.0 {
            return self.phi.eval(1.0);
        }
        let d = self.s1 - self.s0;
        Ok(t.powf(-self.s0 / d) * self.phi.eval(t.powf(1.0 / d))?)
    }

    /// Sup over a geometric grid of the least concave majorant of `ψ` divided by `ψ`.
    pub fn pseudoconcavity(&self, t_lo: f64, t_hi: f64, points: usize) -> Result<f64> {
        let mut err = None;
        let ratio = pseudoconcavity_check(
            |t| match self.eval(t) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NAN
                }
            },
            t_lo,
            t_hi,
            points,
        );
        match err {
            Some(e) => Err(e),
            None => Ok(ratio),
        }
    }
}

/// Least concave majorant of `psi` sampled on a geometric grid over
/// `[t_lo, t_hi]` (the upper convex hull of the sampled graph), returning
/// `max majorant/ψ` over the grid. Values near 1 indicate `ψ` is equivalent
/// to a concave function on that range.
pub fn pseudoconcavity_check<F: FnMut(f64) -> f64>(
    mut psi: F,
    t_lo: f64,
    t_hi: f64,
    points: usize,
) -> f64 {
    assert!(points >= 2 && t_lo > 0.0 && t_hi > t_lo);
    let ratio = (t_hi / t_lo).powf(1.0 / (points - 1) as f64);
    let xs: Vec<f64> = (0..points).map(|i| t_lo * ratio.powi(i as i32)).collect();
    let ys: Vec<f64> = xs.iter().map(|&t| psi(t)).collect();

    // Monotone chain, keeping right turns only.
    let mut hull: Vec<usize> = Vec::with_capacity(points);
    for i in 0..points {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (xs[b] - xs[a]) * (ys[i] - ys[a]) - (ys[b] - ys[a]) * (xs[i] - xs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }

    let mut worst: f64 = 1.0;
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        for i in a..=b {
            let lam = (xs[i] - xs[a]) / (xs[b] - xs[a]);
            let maj = ys[a] + lam * (ys[b] - ys[a]);
            worst = worst.max(maj / ys[i]);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn power_case_gives_square_root() {
        let psi = interpolation_parameter(&RoFunction::power(1.0), 0.0, 2.0).unwrap();
        for t in [1.0f64, 4.0, 9.0, 1e6] {
            assert_relative_eq!(psi.eval(t).unwrap(), t.sqrt(), max_relative = 1e-14);
        }
    }

    #[test]
    fn constant_branch_below_one() {
        let phi = RoFunction::log_power(1.0, -1.0, 0.0);
        let psi = interpolation_parameter(&phi, 0.0, 3.0).unwrap();
        assert_eq!(psi.eval(0.5).unwrap(), phi.eval(1.0).unwrap());
        assert_eq!(psi.eval(1e-9).unwrap(), 1.0);
    }

    #[test]
    fn log_power_substitution() {
        let phi = RoFunction::log_power(1.0, 1.0, 0.0);
        let psi = interpolation_parameter(&phi, 0.0, 2.0).unwrap();
        for t in [1.0f64, 2.0, 100.0, 1e8] {
            let oracle = t.sqrt() * (1.0 + t.sqrt().ln());
            assert_relative_eq!(psi.eval(t).unwrap(), oracle, max_relative = 1e-13);
        }
    }

    #[test]
    fn index_preconditions() {
        let phi = RoFunction::power(1.0);
        assert!(
            matches!(interpolation_parameter(&phi, 1.0, 2.0), Err(Error::Domain(m)) if m.contains("σ₀"))
        );
        assert!(
            matches!(interpolation_parameter(&phi, 0.0, 1.0), Err(Error::Domain(m)) if m.contains("σ₁"))
        );
        assert!(interpolation_parameter(&phi, 2.0, 0.0).is_err());
    }

    #[test]
    fn defining_identity() {
        let phi = RoFunction::log_power(0.7, -2.0, 1.5);
        let (s0, s1) = (-0.4, 2.1);
        let psi = interpolation_parameter(&phi, s0, s1).unwrap();
        let d = s1 - s0;
        for i in 0..60 {
            let t = 10f64.powf(i as f64 * 0.2);
            let lhs = psi.eval(t).unwrap() * t.powf(s0 / d);
            let rhs = phi.eval(t.powf(1.0 / d)).unwrap();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
        }
    }

    #[test]
    fn concave_and_linear_have_unit_ratio() {
        assert_relative_eq!(
            pseudoconcavity_check(|t| t.sqrt(), 1.0, 1e6, 200),
            1.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            pseudoconcavity_check(|t| t, 1.0, 1e6, 200),
            1.0,
            max_relative = 1e-9
        );
    }

    #[test]
    fn oscillating_parameter_ratio_is_stable() {
        // Convex stretches appear where sin ln t < -0.4.
        let f = |t: f64| t.sqrt() * (1.0 + 0.5 * t.ln().sin());
        let coarse = pseudoconcavity_check(f, 1.0, 1e8, 400);
        let fine = pseudoconcavity_check(f, 1.0, 1e8, 1600);
        assert!(coarse.is_finite() && coarse > 1.0);
        assert!((coarse - fine).abs() < 0.05 * fine, "{coarse} vs {fine}");
    }

    #[test]
    fn convex_function_is_flagged() {
        let r = pseudoconcavity_check(|t| t * t, 1.0, 100.0, 100);
        assert!(r > 10.0);
    }
}
