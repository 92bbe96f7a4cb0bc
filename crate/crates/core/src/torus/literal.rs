//! Literal form `[{"k":[1,0],"re":0.5,"im":0.0}, …]`, sorted by frequency.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Frequency, TrigPoly, TrigVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffLiteral {
    pub k: Vec<i64>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl TrigPoly {
    pub fn to_literal(&self) -> Vec<CoeffLiteral> {
        self.iter()
            .map(|(k, c)| CoeffLiteral {
                k: k.0.clone(),
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    /// Rejects duplicate frequencies, wrong dimensions and non-finite values.
    pub fn from_literal(n: usize, terms: &[CoeffLiteral]) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            if t.k.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t.k.len(),
                });
            }
            if !(t.re.is_finite() && t.im.is_finite()) {
                return Err(Error::Config(format!(
                    "non-finite coefficient at k = {:?}",
                    t.k
                )));
            }
            if t.k.iter().any(|k| k.unsigned_abs() > 1 << 20) {
                return Err(Error::Config(format!("frequency {:?} out of range", t.k)));
            }
            if !seen.insert(t.k.clone()) {
                return Err(Error::Config(format!("duplicate frequency {:?}", t.k)));
            }
            out.push((Frequency(t.k.clone()), Complex64::new(t.re, t.im)));
        }
        TrigPoly::from_terms(n, out)
    }

    /// Parses a literal, taking the dimension from the first term.
    /// An empty list needs `n` from context, so it is rejected here.
    pub fn from_json(s: &str) -> Result<Self> {
        let terms: Vec<CoeffLiteral> = serde_json::from_str(s)?;
        let n = terms
            .first()
            .map(|t| t.k.len())
            .ok_or_else(|| Error::Config("empty polynomial literal has no dimension".into()))?;
        TrigPoly::from_literal(n, &terms)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_literal()).expect("finite literal serializes")
    }
}

impl Serialize for TrigPoly {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.to_literal().serialize(serializer)
    }
}

impl TrigVector {
    pub fn to_literal(&self) -> Vec<Vec<CoeffLiteral>> {
        self.components().iter().map(TrigPoly::to_literal).collect()
    }

    pub fn from_literal(n: usize, comps: &[Vec<CoeffLiteral>]) -> Result<Self> {
        TrigVector::new(
            comps
                .iter()
                .map(|c| TrigPoly::from_literal(n, c))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

impl Serialize for TrigVector {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        self.to_literal().serialize(serializer)
    }
}
