use std::collections::BTreeMap;

use num_complex::Complex64;

use super::scalar::real_pow;
use super::MatrixDiffOp;
use crate::error::{Error, Result};
use crate::torus::MultiIndex;

/// Polynomial in `n` variables with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    coeffs: BTreeMap<MultiIndex, Complex64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut p = Self::zero(n);
        p.add_at(MultiIndex::zero(n), c);
        p
    }

    fn add_at(&mut self, alpha: MultiIndex, c: Complex64) {
        let v = self.coeffs.get(&alpha).copied().unwrap_or_default() + c;
        if v == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&alpha);
        } else {
            self.coeffs.insert(alpha, v);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.coeffs.iter()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Polynomial {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(a, _)| a.order() == d)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    /// Terms of total degree below `d`.
    pub fn lower_part(&self, d: u32) -> Self {
        Polynomial {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(a, _)| a.order() < d)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.coeffs.iter().map(|(a, c)| c * real_pow(x, a)).sum()
    }

    /// `Σ |c_α|`
    pub fn coefficient_l1(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    /// `Σ |c_α| |α|`, a Lipschitz constant on the closed unit ball.
    pub fn gradient_bound(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(a, c)| c.norm() * a.order() as f64)
            .sum()
    }

    /// Coefficients `c_0, …, c_d` of a univariate polynomial.
    pub fn univariate(&self) -> Vec<Complex64> {
        assert_eq!(self.n, 1, "univariate view of a multivariate polynomial");
        let mut out = vec![Complex64::new(0.0, 0.0); self.degree() as usize + 1];
        for (a, c) in &self.coeffs {
            out[a.0[0] as usize] = *c;
        }
        out
    }

    pub fn add(&self, other: &Polynomial) -> Self {
        let mut out = self.clone();
        for (a, c) in &other.coeffs {
            out.add_at(a.clone(), *c);
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Self {
        let mut out = Self::zero(self.n);
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                let ab = MultiIndex(a.0.iter().zip(&b.0).map(|(i, j)| i + j).collect());
                out.add_at(ab, x * y);
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (a, x) in &self.coeffs {
            out.add_at(a.clone(), x * c);
        }
        out
    }
}

/// Determinant by cofactor expansion along the first column.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let p = m.len();
    let n = m[0][0].dim();
    match p {
        1 => m[0][0].clone(),
        2 => m[0][0]
            .mul(&m[1][1])
            .add(&m[0][1].mul(&m[1][0]).scale(Complex64::new(-1.0, 0.0))),
        _ => {
            let mut acc = Polynomial::zero(n);
            for i in 0..p {
                if m[i][0].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = (0..p)
                    .filter(|&r| r != i)
                    .map(|r| m[r][1..].to_vec())
                    .collect();
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                acc = acc.add(
                    &m[i][0]
                        .mul(&determinant(&minor))
                        .scale(Complex64::new(sign, 0.0)),
                );
            }
            acc
        }
    }
}

impl MatrixDiffOp {
    /// `det A(k)` as a polynomial in `k` for a constant-coefficient system.
    pub fn symbol_determinant(&self) -> Result<Polynomial> {
        if !self.is_constant() {
            return Err(Error::NonConstantCoefficients);
        }
        let n = self.dim();
        let zero = crate::torus::Frequency::zero(n);
        let rows: Vec<Vec<Polynomial>> = (0..self.p())
            .map(|j| {
                (0..self.p())
                    .map(|k| {
                        let mut poly = Polynomial::zero(n);
                        for (alpha, a) in self.entry(j, k).terms() {
                            poly.add_at(alpha.clone(), a.coeff(&zero));
                        }
                        poly
                    })
                    .collect()
            })
            .collect();
        Ok(determinant(&rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::examples;

    #[test]
    fn determinant_polynomials() {
        let c = |v: f64| Complex64::new(v, 0.0);
        let d = examples::shifted_diag().symbol_determinant().unwrap();
        assert_eq!(d.univariate(), vec![c(0.0), c(-1.0), c(1.0)]);
        let d = examples::rotation().symbol_determinant().unwrap();
        assert_eq!(d.univariate(), vec![c(1.0), c(0.0), c(1.0)]);
        let d = examples::cauchy_riemann().symbol_determinant().unwrap();
        assert_eq!(d.degree(), 2);
        assert_eq!(d.eval(&[0.6, 0.8]), c(1.0));
        let d = examples::hyperbolic().symbol_determinant().unwrap();
        assert!(d.eval(&[1.0, 1.0]).norm() == 0.0);
    }

    #[test]
    fn three_by_three_matches_numeric() {
        use crate::operators::ScalarDiffOp;
        use crate::torus::Frequency;
        let k = |c: f64| ScalarDiffOp::constant(1, Complex64::new(c, 0.0));
        let d = ScalarDiffOp::d(1, 0);
        let a = MatrixDiffOp::new(vec![
            vec![&d + &k(1.0), k(2.0), k(0.0)],
            vec![k(-1.0), d.clone(), k(3.0)],
            vec![k(0.5), k(0.0), &d - &k(2.0)],
        ])
        .unwrap();
        let poly = a.symbol_determinant().unwrap();
        for kk in -4..=4 {
            let s = a.full_symbol_const(&Frequency(vec![kk])).unwrap();
            assert!((s.determinant() - poly.eval(&[kk as f64])).norm() < 1e-10);
        }
    }
}
