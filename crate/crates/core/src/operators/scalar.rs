use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::torus::{Frequency, MultiIndex, TrigPoly};

/// `L = Σ_α a_α(x) D^α` with trigonometric-polynomial coefficients.
///
/// Terms are keyed by multi-index; zero coefficients are never stored, so
/// the order is read off the stored keys.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarDiffOp {
    n: usize,
    terms: BTreeMap<MultiIndex, TrigPoly>,
}

impl ScalarDiffOp {
    pub fn zero(n: usize) -> Self {
        ScalarDiffOp {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Sums coefficients of repeated multi-indices.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, TrigPoly)>,
    {
        let mut op = Self::zero(n);
        for (alpha, a) in terms {
            if alpha.dim() != n || a.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if alpha.dim() != n {
                        alpha.dim()
                    } else {
                        a.dim()
                    },
                });
            }
            op.add_term(alpha, a);
        }
        Ok(op)
    }

    fn add_term(&mut self, alpha: MultiIndex, a: TrigPoly) {
        let sum = match self.terms.remove(&alpha) {
            Some(prev) => &prev + &a,
            None => a,
        };
        if !sum.is_zero() {
            self.terms.insert(alpha, sum);
        }
    }

    /// Multiplication by a constant.
    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::multiplication(TrigPoly::constant(n, c))
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(n, Complex64::new(1.0, 0.0))
    }

    /// Multiplication by `a(x)`.
    pub fn multiplication(a: TrigPoly) -> Self {
        let n = a.dim();
        Self::from_terms(n, [(MultiIndex::zero(n), a)]).expect("dimensions agree")
    }

    /// `D_j = -i ∂/∂x_j`
    pub fn d(n: usize, j: usize) -> Self {
        Self::monomial(MultiIndex::unit(n, j), Complex64::new(1.0, 0.0))
    }

    /// `c D^α`
    pub fn monomial(alpha: MultiIndex, c: Complex64) -> Self {
        let n = alpha.dim();
        Self::from_terms(n, [(alpha, TrigPoly::constant(n, c))]).expect("dimensions agree")
    }

    /// `a(x) D^α`
    pub fn term(alpha: MultiIndex, a: TrigPoly) -> Result<Self> {
        Self::from_terms(alpha.dim(), [(alpha, a)])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Largest `|α|` with a non-zero coefficient; 0 for the zero operator.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &TrigPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Option<&TrigPoly> {
        self.terms.get(alpha)
    }

    pub fn is_constant(&self) -> bool {
        self.coefficient_bandwidth() == 0
    }

    pub fn coefficient_bandwidth(&self) -> u64 {
        self.terms
            .values()
            .map(TrigPoly::bandwidth)
            .max()
            .unwrap_or(0)
    }

    /// `Σ a_α · D^α u`, exact.
    pub fn apply(&self, u: &TrigPoly) -> Result<TrigPoly> {
        if u.dim() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: u.dim(),
            });
        }
        let mut out = TrigPoly::zero(self.n);
        for (alpha, a) in &self.terms {
            out = &out + &a.multiply(&u.derivative(alpha));
        }
        Ok(out)
    }

    /// Formal adjoint under the `L²` pairing: `(a D^α)⁺ v = D^α(ā v)`, expanded
    /// by Leibniz into `Σ_β binom(α,β) (D^{α-β} ā) D^β`.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (alpha, a) in &self.terms {
            let abar = a.conj_fn();
            for beta in alpha.below() {
                let c = alpha.binomial(&beta);
                let coeff = abar
                    .derivative(&alpha.sub(&beta))
                    .scale(Complex64::new(c, 0.0));
                out.add_term(beta, coeff);
            }
        }
        out
    }

    /// `Σ_{|α| = order} a_α(x) ξ^α` for a given order; coefficients summed directly at `x`.
    pub fn homogeneous_symbol(&self, order: u32, x: &[f64], xi: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .filter(|(alpha, _)| alpha.order() == order)
            .map(|(alpha, a)| a.eval(x) * real_pow(xi, alpha))
            .sum()
    }

    /// `Σ_α â_α(0) k^α`, the full symbol of a constant-coefficient operator.
    pub fn full_symbol_const(&self, k: &Frequency) -> Complex64 {
        let zero = Frequency::zero(self.n);
        self.terms
            .iter()
            .map(|(alpha, a)| a.coeff(&zero) * k.pow(alpha))
            .sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (alpha, a) in &self.terms {
            out.add_term(alpha.clone(), a.scale(c));
        }
        out
    }

    /// `a(x) · L`
    pub fn left_multiply(&self, a: &TrigPoly) -> Self {
        let mut out = Self::zero(self.n);
        for (alpha, c) in &self.terms {
            out.add_term(alpha.clone(), a.multiply(c));
        }
        out
    }
}

/// `ξ^α` for a real vector.
pub(crate) fn real_pow(xi: &[f64], alpha: &MultiIndex) -> f64 {
    xi.iter()
        .zip(&alpha.0)
        .map(|(&x, &a)| x.powi(a as i32))
        .product()
}

impl Add<&ScalarDiffOp> for &ScalarDiffOp {
    type Output = ScalarDiffOp;

    fn add(self, rhs: &ScalarDiffOp) -> ScalarDiffOp {
        assert_eq!(self.n, rhs.n, "torus dimension");
        let mut out = self.clone();
        for (alpha, a) in &rhs.terms {
            out.add_term(alpha.clone(), a.clone());
        }
        out
    }
}

impl Sub<&ScalarDiffOp> for &ScalarDiffOp {
    type Output = ScalarDiffOp;

    fn sub(self, rhs: &ScalarDiffOp) -> ScalarDiffOp {
        self + &(-rhs)
    }
}

impl Neg for &ScalarDiffOp {
    type Output = ScalarDiffOp;

    fn neg(self) -> ScalarDiffOp {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<&ScalarDiffOp> for Complex64 {
    type Output = ScalarDiffOp;

    fn mul(self, rhs: &ScalarDiffOp) -> ScalarDiffOp {
        rhs.scale(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rofunc::RoFunction;
    use crate::torus::{inner_product, random_trig, TrigVector};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn apply_examples() {
        let u = TrigPoly::monomial(vec![1], c(1.0, 0.0));
        assert_eq!(ScalarDiffOp::d(1, 0).apply(&u).unwrap(), u);
        let cos = TrigPoly::cos(vec![1], 2.0);
        let one = TrigPoly::constant(1, c(1.0, 0.0));
        assert_eq!(
            ScalarDiffOp::multiplication(cos.clone())
                .apply(&one)
                .unwrap(),
            cos
        );
        let d2 = ScalarDiffOp::monomial(MultiIndex(vec![2]), c(1.0, 0.0));
        let u3 = TrigPoly::monomial(vec![3], c(1.0, 0.0));
        assert_eq!(d2.apply(&u3).unwrap(), u3.scale(c(9.0, 0.0)));
        assert!(d2.apply(&TrigPoly::zero(2)).is_err());
    }

    #[test]
    fn order_ignores_cancelled_terms() {
        let d = ScalarDiffOp::d(2, 1);
        let op = &(&d + &ScalarDiffOp::identity(2)) - &d;
        assert_eq!(op.order(), 0);
        assert_eq!(ScalarDiffOp::zero(2).order(), 0);
        assert_eq!(
            ScalarDiffOp::monomial(MultiIndex(vec![2, 1]), c(1.0, 0.0)).order(),
            3
        );
    }

    #[test]
    fn adjoint_of_constant_real_is_self() {
        let op = &ScalarDiffOp::d(1, 0) - &ScalarDiffOp::identity(1);
        assert_eq!(op.adjoint(), op);
        // i·D has adjoint -i·D.
        let op = ScalarDiffOp::d(1, 0).scale(c(0.0, 1.0));
        assert_eq!(op.adjoint(), ScalarDiffOp::d(1, 0).scale(c(0.0, -1.0)));
    }

    #[test]
    fn adjoint_of_variable_first_order() {
        // (a D)⁺ = ā D + (D ā); with a = e^{ix}: ā = e^{-ix}, D ā = -e^{-ix}.
        let a = TrigPoly::monomial(vec![1], c(1.0, 0.0));
        let op = ScalarDiffOp::term(MultiIndex(vec![1]), a).unwrap();
        let abar = TrigPoly::monomial(vec![-1], c(1.0, 0.0));
        let expect = ScalarDiffOp::from_terms(
            1,
            [
                (MultiIndex(vec![1]), abar.clone()),
                (MultiIndex(vec![0]), abar.scale(c(-1.0, 0.0))),
            ],
        )
        .unwrap();
        assert_eq!(op.adjoint(), expect);
    }

    #[test]
    fn adjoint_pairing_identity() {
        let a = TrigPoly::from_terms(
            2,
            [
                (Frequency(vec![1, 0]), c(0.3, -0.2)),
                (Frequency(vec![0, -1]), c(0.0, 1.0)),
            ],
        )
        .unwrap();
        let op = &ScalarDiffOp::term(MultiIndex(vec![1, 1]), a.clone()).unwrap()
            + &ScalarDiffOp::term(MultiIndex(vec![0, 2]), a.conj_fn()).unwrap();
        let adj = op.adjoint();
        let phi = RoFunction::power(2.0);
        for s in 0..20 {
            let u = random_trig(2, 4, &phi, 1.0, 2 * s).unwrap();
            let v = random_trig(2, 4, &phi, 1.0, 2 * s + 1).unwrap();
            let lhs = inner_product(
                &TrigVector::new(vec![op.apply(&u).unwrap()]).unwrap(),
                &TrigVector::new(vec![v.clone()]).unwrap(),
            )
            .unwrap();
            let rhs = inner_product(
                &TrigVector::new(vec![u]).unwrap(),
                &TrigVector::new(vec![adj.apply(&v).unwrap()]).unwrap(),
            )
            .unwrap();
            assert!((lhs - rhs).norm() < 1e-12 * (1.0 + lhs.norm()));
        }
        assert_eq!(adj.adjoint(), op);
    }
}
