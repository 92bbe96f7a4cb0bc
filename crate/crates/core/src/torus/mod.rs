//! Bandlimited functions on the flat torus `[0, 2π)^n`.
//!
//! A [`TrigPoly`] stores its Fourier coefficients in a sparse map ordered
//! lexicographically by frequency. Coefficients follow
//! `û(k) = (2π)^{-n} ∫ u(x) e^{-ik·x} dx`, so `e^{ik·x}` has coefficient 1 and
//! `H^φ` norms carry no stray factors of `2π`. Derivatives use `D_j = -i ∂_j`,
//! making the symbol of `D^α` equal to `k^α`.

mod grid;
mod literal;
mod norm;
mod random;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use grid::{eval_on_grid, sup_norm_deriv};
pub use literal::CoeffLiteral;
pub use norm::{bracket, hnorm, hnorm_vec, inner_product, shell_counts, shell_energies, vec_hnorm};
pub use random::{random_trig, random_trig_from, random_trig_vector, stream_rng};

use crate::error::{Error, Result};

/// An integer frequency vector `k ∈ ℤⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Frequency(pub Vec<i64>);

impl Frequency {
    pub fn zero(n: usize) -> Self {
        Frequency(vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sup_norm(&self) -> u64 {
        self.0.iter().map(|k| k.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|&k| (k * k) as f64).sum()
    }

    /// `k^α = Π k_j^{α_j}`
    pub fn pow(&self, alpha: &MultiIndex) -> f64 {
        self.0
            .iter()
            .zip(&alpha.0)
            .map(|(&k, &a)| (k as f64).powi(a as i32))
            .product()
    }

    pub fn neg(&self) -> Self {
        Frequency(self.0.iter().map(|k| -k).collect())
    }

    pub fn add(&self, other: &Frequency) -> Self {
        Frequency(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<i64>> for Frequency {
    fn from(v: Vec<i64>) -> Self {
        Frequency(v)
    }
}

impl fmt::Display for Frequency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A multi-index `α ∈ ℕⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `e_j` in dimension `n`.
    pub fn unit(n: usize, j: usize) -> Self {
        let mut a = vec![0; n];
        a[j] = 1;
        MultiIndex(a)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// All `β ≤ α` componentwise.
    pub fn below(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &a in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=a).map(move |b| {
                        let mut p = prefix.clone();
                        p.push(b);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// All multi-indices of dimension `n` with `|β| ≤ r`.
    pub fn up_to_order(n: usize, r: u32) -> Vec<MultiIndex> {
        MultiIndex(vec![r; n])
            .below()
            .into_iter()
            .filter(|b| b.order() <= r)
            .collect()
    }

    /// `Π binom(α_j, β_j)`
    pub fn binomial(&self, beta: &MultiIndex) -> f64 {
        self.0
            .iter()
            .zip(&beta.0)
            .map(|(&a, &b)| binom(a, b))
            .product()
    }

    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

fn binom(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A trigonometric polynomial `Σ c_k e^{ik·x}` on the n-torus.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    n: usize,
    coeffs: BTreeMap<Frequency, Complex64>,
}

impl TrigPoly {
    pub fn zero(n: usize) -> Self {
        TrigPoly {
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::monomial(Frequency::zero(n), c)
    }

    /// `c · e^{ik·x}`
    pub fn monomial(k: impl Into<Frequency>, c: Complex64) -> Self {
        let k = k.into();
        let mut p = Self::zero(k.dim());
        if c != Complex64::new(0.0, 0.0) {
            p.coeffs.insert(k, c);
        }
        p
    }

    /// Sums coefficients per frequency and drops exact zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Frequency, Complex64)>,
    {
        let mut p = Self::zero(n);
        for (k, c) in terms {
            if k.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: k.dim(),
                });
            }
            p.add_at(k, c);
        }
        Ok(p)
    }

    /// `2cos(k·x) = e^{ik·x} + e^{-ik·x}` scaled by `c`.
    pub fn cos(k: impl Into<Frequency>, c: f64) -> Self {
        let k = k.into();
        let nk = k.neg();
        let n = k.dim();
        Self::from_terms(
            n,
            [
                (k, Complex64::new(c / 2.0, 0.0)),
                (nk, Complex64::new(c / 2.0, 0.0)),
            ],
        )
        .expect("same dimension")
    }

    fn add_at(&mut self, k: Frequency, c: Complex64) {
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(k) {
            Entry::Vacant(e) => {
                if c != Complex64::new(0.0, 0.0) {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v == Complex64::new(0.0, 0.0) {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, k: &Frequency) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Coefficients in lexicographic frequency order.
    pub fn iter(&self) -> impl Iterator<Item = (&Frequency, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest sup-norm of a stored frequency.
    pub fn bandwidth(&self) -> u64 {
        self.coeffs
            .keys()
            .map(Frequency::sup_norm)
            .max()
            .unwrap_or(0)
    }

    /// True when the coefficient map is conjugate-symmetric, i.e. `u` is real-valued.
    pub fn is_real(&self) -> bool {
        self.is_real_within(0.0)
    }

    pub fn is_real_within(&self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .all(|(k, c)| (self.coeff(&k.neg()).conj() - c).norm() <= tol)
    }

    /// The function `x ↦ conj(u(x))`.
    pub fn conj_fn(&self) -> Self {
        TrigPoly {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (k.neg(), c.conj()))
                .collect(),
        }
    }

    /// `D^α u` with `D_j = -i ∂_j`: the coefficient at `k` is multiplied by `k^α`.
    pub fn derivative(&self, alpha: &MultiIndex) -> Self {
        assert_eq!(alpha.dim(), self.n, "multi-index dimension");
        let mut out = Self::zero(self.n);
        for (k, c) in &self.coeffs {
            let f = k.pow(alpha);
            if f != 0.0 {
                out.add_at(k.clone(), c * f);
            }
        }
        out
    }

    /// Exact sparse convolution of the coefficient maps.
    pub fn multiply(&self, other: &TrigPoly) -> Self {
        assert_eq!(self.n, other.n, "torus dimension");
        let mut out = Self::zero(self.n);
        for (k, a) in &self.coeffs {
            for (q, b) in &other.coeffs {
                out.add_at(k.add(q), a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.n);
        for (k, v) in &self.coeffs {
            out.add_at(k.clone(), v * c);
        }
        out
    }

    /// `Σ |û(k)|²`
    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// Direct Fourier summation at a point.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        assert_eq!(x.len(), self.n, "point dimension");
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let phase: f64 = k.0.iter().zip(x).map(|(&kj, &xj)| kj as f64 * xj).sum();
                c * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }

    /// Largest coefficient-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &TrigPoly) -> f64 {
        let d = self - other;
        d.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add<&TrigPoly> for &TrigPoly {
    type Output = TrigPoly;

    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        assert_eq!(self.n, rhs.n, "torus dimension");
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_at(k.clone(), *c);
        }
        out
    }
}

impl Sub<&TrigPoly> for &TrigPoly {
    type Output = TrigPoly;

    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        assert_eq!(self.n, rhs.n, "torus dimension");
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_at(k.clone(), -c);
        }
        out
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;

    fn neg(self) -> TrigPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<&TrigPoly> for &TrigPoly {
    type Output = TrigPoly;

    fn mul(self, rhs: &TrigPoly) -> TrigPoly {
        self.multiply(rhs)
    }
}

/// A column `(u_1, …, u_p)` of trigonometric polynomials on a common torus.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigVector {
    n: usize,
    comps: Vec<TrigPoly>,
}

impl TrigVector {
    pub fn new(comps: Vec<TrigPoly>) -> Result<Self> {
        let n = comps
            .first()
            .map(TrigPoly::dim)
            .ok_or_else(|| Error::ShapeMismatch("vector needs at least one component".into()))?;
        if let Some(bad) = comps.iter().find(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.dim(),
            });
        }
        Ok(TrigVector { n, comps })
    }

    pub fn zeros(p: usize, n: usize) -> Self {
        TrigVector {
            n,
            comps: vec![TrigPoly::zero(n); p],
        }
    }

    /// `poly · e_j` in a `p`-vector.
    pub fn unit(p: usize, j: usize, poly: TrigPoly) -> Self {
        let mut v = Self::zeros(p, poly.dim());
        v.comps[j] = poly;
        v
    }

    pub fn p(&self) -> usize {
        self.comps.len()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn component(&self, j: usize) -> &TrigPoly {
        &self.comps[j]
    }

    pub fn components(&self) -> &[TrigPoly] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<TrigPoly> {
        self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(TrigPoly::is_zero)
    }

    pub fn bandwidth(&self) -> u64 {
        self.comps
            .iter()
            .map(TrigPoly::bandwidth)
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        TrigVector {
            n: self.n,
            comps: self.comps.iter().map(|u| u.scale(c)).collect(),
        }
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.comps.iter().map(TrigPoly::l2_norm_sq).sum()
    }

    pub fn max_abs_diff(&self, other: &TrigVector) -> f64 {
        self.comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    fn check_shape(&self, other: &TrigVector) {
        assert!(
            self.n == other.n && self.p() == other.p(),
            "vector shape mismatch"
        );
    }
}

impl Add<&TrigVector> for &TrigVector {
    type Output = TrigVector;

    fn add(self, rhs: &TrigVector) -> TrigVector {
        self.check_shape(rhs);
        TrigVector {
            n: self.n,
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub<&TrigVector> for &TrigVector {
    type Output = TrigVector;

    fn sub(self, rhs: &TrigVector) -> TrigVector {
        self.check_shape(rhs);
        TrigVector {
            n: self.n,
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// All frequencies with `|k|∞ ≤ bandwidth`, in lexicographic order.
pub fn band(n: usize, bandwidth: u64) -> impl Iterator<Item = Frequency> {
    let b = bandwidth as i64;
    let side = (2 * b + 1) as usize;
    let total = side.pow(n as u32);
    (0..total).map(move |mut idx| {
        let mut k = vec![0i64; n];
        for slot in k.iter_mut().rev() {
            *slot = (idx % side) as i64 - b;
            idx /= side;
        }
        Frequency(k)
    })
}
