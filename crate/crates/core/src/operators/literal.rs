//! Literal form of a system:
//! `{"p":2,"entries":[[{"terms":[{"alpha":[1],"coeff":[{"k":[0],"re":1,"im":0}]}]}, …], …]}`.

use serde::{Deserialize, Serialize};

use super::{MatrixDiffOp, ScalarDiffOp};
use crate::error::{Error, Result};
use crate::torus::{CoeffLiteral, MultiIndex, TrigPoly};

/// Largest accepted derivative order per axis and system size.
const MAX_ORDER: u32 = 32;
const MAX_P: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorLiteral {
    pub p: usize,
    /// Row-major `p × p` grid.
    pub entries: Vec<Vec<EntryLiteral>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryLiteral {
    #[serde(default)]
    pub terms: Vec<TermLiteral>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermLiteral {
    pub alpha: Vec<u32>,
    pub coeff: Vec<CoeffLiteral>,
}

impl OperatorLiteral {
    /// Dimension implied by the first multi-index or frequency present.
    pub fn inferred_dim(&self) -> Option<usize> {
        self.entries
            .iter()
            .flatten()
            .flat_map(|e| &e.terms)
            .map(|t| t.alpha.len())
            .next()
    }
}

impl ScalarDiffOp {
    pub fn to_literal(&self) -> EntryLiteral {
        EntryLiteral {
            terms: self
                .terms()
                .map(|(alpha, a)| TermLiteral {
                    alpha: alpha.0.clone(),
                    coeff: a.to_literal(),
                })
                .collect(),
        }
    }

    pub fn from_literal(n: usize, lit: &EntryLiteral) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        let mut terms = Vec::with_capacity(lit.terms.len());
        for t in &lit.terms {
            if t.alpha.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: t.alpha.len(),
                });
            }
            if t.alpha.iter().any(|&a| a > MAX_ORDER) {
                return Err(Error::Config(format!(
                    "derivative order in {:?} exceeds {MAX_ORDER}",
                    t.alpha
                )));
            }
            if !seen.insert(t.alpha.clone()) {
                return Err(Error::Config(format!(
                    "duplicate multi-index {:?}",
                    t.alpha
                )));
            }
            terms.push((
                MultiIndex(t.alpha.clone()),
                TrigPoly::from_literal(n, &t.coeff)?,
            ));
        }
        ScalarDiffOp::from_terms(n, terms)
    }
}

impl MatrixDiffOp {
    pub fn to_literal(&self) -> OperatorLiteral {
        OperatorLiteral {
            p: self.p(),
            entries: self
                .rows()
                .iter()
                .map(|row| row.iter().map(ScalarDiffOp::to_literal).collect())
                .collect(),
        }
    }

    /// `n` is taken from the literal when any term is present, else from `n_hint`.
    pub fn from_literal(lit: &OperatorLiteral, n_hint: Option<usize>) -> Result<Self> {
        if lit.p == 0 || lit.p > MAX_P {
            return Err(Error::Config(format!(
                "system size p = {} outside 1..={MAX_P}",
                lit.p
            )));
        }
        if lit.entries.len() != lit.p || lit.entries.iter().any(|r| r.len() != lit.p) {
            return Err(Error::ShapeMismatch(format!(
                "entries must form a {0}x{0} grid",
                lit.p
            )));
        }
        let n = match (lit.inferred_dim(), n_hint) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::DimensionMismatch {
                    expected: b,
                    found: a,
                })
            }
            (Some(a), _) | (None, Some(a)) => a,
            (None, None) => {
                return Err(Error::Config(
                    "operator has no terms; torus dimension unknown".into(),
                ))
            }
        };
        if n == 0 {
            return Err(Error::Config("torus dimension must be at least 1".into()));
        }
        let rows = lit
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| ScalarDiffOp::from_literal(n, e))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        MatrixDiffOp::new(rows)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_literal(&serde_json::from_str(s)?, None)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_literal()).expect("finite literal serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::examples;

    #[test]
    fn parses_documented_form() {
        let json = r#"{"p":2,"entries":[
            [{"terms":[{"alpha":[1],"coeff":[{"k":[0],"re":1,"im":0}]}]}, {"terms":[{"alpha":[0],"coeff":[{"k":[0],"re":1,"im":0}]}]}],
            [{"terms":[{"alpha":[0],"coeff":[{"k":[0],"re":-1,"im":0}]}]}, {"terms":[{"alpha":[1],"coeff":[{"k":[0],"re":1,"im":0}]}]}]
        ]}"#;
        assert_eq!(MatrixDiffOp::from_json(json).unwrap(), examples::rotation());
    }

    #[test]
    fn round_trips() {
        for a in [
            examples::rotation(),
            examples::cauchy_riemann(),
            examples::variable_rotation(0.1),
            examples::shifted_diag(),
        ] {
            assert_eq!(MatrixDiffOp::from_json(&a.to_json()).unwrap(), a);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(MatrixDiffOp::from_json(r#"{"p":2,"entries":[[{}]]}"#).is_err());
        assert!(MatrixDiffOp::from_json(r#"{"p":1,"entries":[[{}]]}"#).is_err());
        assert!(MatrixDiffOp::from_literal(
            &serde_json::from_str(r#"{"p":1,"entries":[[{}]]}"#).unwrap(),
            Some(2)
        )
        .is_ok());
        assert!(MatrixDiffOp::from_json(
            r#"{"p":1,"entries":[[{"terms":[{"alpha":[1],"coeff":[]},{"alpha":[1],"coeff":[]}]}]]}"#
        )
        .is_err());
        assert!(MatrixDiffOp::from_json(
            r#"{"p":1,"entries":[[{"terms":[{"alpha":[1],"coeff":[{"k":[0,0],"re":1}]}]}]]}"#
        )
        .is_err());
        assert!(MatrixDiffOp::from_json(r#"{"p":1,"n":1,"entries":[[{}]]}"#).is_err());
    }
}
