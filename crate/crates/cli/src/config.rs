//! The run configuration file.

use std::path::Path;

use hscale::fredholm::{GalerkinConfig, SingularConfig, SolveConfig};
use hscale::operators::{
    EllipticityConfig, EntryLiteral, MatrixDiffOp, OperatorLiteral, ScalarDiffOp,
};
use hscale::rofunc::RoFunction;
use hscale::torus::{CoeffLiteral, TrigVector};
use hscale::verify::ExperimentConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// Torus dimension; inferred from the operator when absent.
    #[serde(default)]
    pub n: Option<usize>,
    /// System size; checked against the operator when present.
    #[serde(default)]
    pub p: Option<usize>,
    #[serde(default)]
    pub operator: Option<OperatorLiteral>,
    #[serde(default = "RoFunction::one")]
    pub phi: RoFunction,
    /// Right-hand side for `solve`, one coefficient list per component.
    #[serde(default)]
    pub data: Option<Vec<Vec<CoeffLiteral>>>,
    #[serde(default)]
    pub experiment: ExperimentParams,
    #[serde(default)]
    pub sampling: ExperimentConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentParams {
    pub sigma: f64,
    pub r: u32,
    pub component: usize,
    pub s0: Option<f64>,
    pub s1: Option<f64>,
    /// Scalar operator for `lemma41`.
    pub scalar_operator: Option<EntryLiteral>,
    /// Truncation bandwidth for variable-coefficient solves.
    pub galerkin_bandwidth: Option<u64>,
    /// Dilation range `[1, a]` and horizon of the RO check in `ro-info`.
    pub ro_a: f64,
    pub ro_t_max: f64,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        ExperimentParams {
            sigma: 1.0,
            r: 0,
            component: 0,
            s0: None,
            s1: None,
            scalar_operator: None,
            galerkin_bandwidth: None,
            ro_a: 2.0,
            ro_t_max: 1e6,
        }
    }
}

/// `ellipticity` is copied into the nested ellipticity settings of `singular`
/// and `galerkin` when the config is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub ellipticity: EllipticityConfig,
    pub singular: SingularConfig,
    pub solve: SolveConfig,
    pub galerkin: GalerkinConfig,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    /// `section.field=value` under `tolerances`, e.g. `solve.tol=1e-8`.
    pub tolerances: Vec<String>,
}

fn parse_with_path<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Config(format!(
            "at `{path}` (line {}, column {}): {inner}",
            inner.line(),
            inner.column()
        ))
    })
}

fn apply_tolerance(root: &mut Value, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("tolerance override `{spec}` is not key=value")))?;
    let value: Value = serde_json::from_str(raw)
        .map_err(|_| CliError::Usage(format!("tolerance value `{raw}` is not a number")))?;
    let mut node = root
        .as_object_mut()
        .ok_or_else(|| CliError::Config("config must be an object".into()))?
        .entry("tolerances")
        .or_insert_with(|| Value::Object(Default::default()));
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = node.as_object_mut().ok_or_else(|| {
            CliError::Usage(format!("tolerance key `{key}` does not name a section"))
        })?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value.clone());
            return Ok(());
        }
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    Err(CliError::Usage(format!("empty tolerance key in `{spec}`")))
}

impl ProblemConfig {
    pub fn from_json_str(text: &str, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg: ProblemConfig = parse_with_path(text)?;
        if !overrides.tolerances.is_empty() {
            let mut root =
                serde_json::to_value(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
            for spec in &overrides.tolerances {
                apply_tolerance(&mut root, spec)?;
            }
            cfg = parse_with_path(&root.to_string())?;
        }
        if let Some(seed) = overrides.seed {
            cfg.sampling.seed = seed;
        }
        cfg.tolerances.singular.ellipticity = cfg.tolerances.ellipticity;
        cfg.tolerances.galerkin.ellipticity = cfg.tolerances.ellipticity;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json_str(&text, overrides)
    }

    /// Builds the operator and records the resolved `n`, `p` and canonical literal.
    pub fn operator(&mut self) -> Result<MatrixDiffOp, CliError> {
        let lit = self
            .operator
            .as_ref()
            .ok_or_else(|| CliError::Config("this subcommand needs an `operator`".into()))?;
        let op = MatrixDiffOp::from_literal(lit, self.n).map_err(config_error)?;
        if let Some(p) = self.p {
            if p != op.p() {
                return Err(CliError::Config(format!(
                    "`p` is {p} but the operator is {0}x{0}",
                    op.p()
                )));
            }
        }
        self.n = Some(op.dim());
        self.p = Some(op.p());
        self.operator = Some(op.to_literal());
        Ok(op)
    }

    pub fn data(&self, n: usize) -> Result<TrigVector, CliError> {
        let data = self
            .data
            .as_ref()
            .ok_or_else(|| CliError::Config("`solve` needs `data`".into()))?;
        TrigVector::from_literal(n, data).map_err(config_error)
    }

    pub fn scalar_operator(&mut self) -> Result<ScalarDiffOp, CliError> {
        let lit = self.experiment.scalar_operator.as_ref().ok_or_else(|| {
            CliError::Config("`lemma41` needs `experiment.scalar_operator`".into())
        })?;
        let n = match self.n {
            Some(n) => n,
            None => lit.terms.first().map(|t| t.alpha.len()).ok_or_else(|| {
                CliError::Config("cannot infer `n` from an empty scalar operator".into())
            })?,
        };
        self.n = Some(n);
        let l = ScalarDiffOp::from_literal(n, lit).map_err(config_error)?;
        self.experiment.scalar_operator = Some(l.to_literal());
        Ok(l)
    }

    pub fn pair(&self) -> Result<(f64, f64), CliError> {
        match (self.experiment.s0, self.experiment.s1) {
            (Some(s0), Some(s1)) => Ok((s0, s1)),
            _ => Err(CliError::Config(
                "this subcommand needs `experiment.s0` and `experiment.s1`".into(),
            )),
        }
    }
}

fn config_error(e: hscale::Error) -> CliError {
    CliError::Config(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_in() {
        let cfg = ProblemConfig::from_json_str("{}", &Overrides::default()).unwrap();
        assert_eq!(cfg.phi, RoFunction::one());
        assert_eq!(cfg.sampling, ExperimentConfig::default());
        assert_eq!(cfg.experiment.sigma, 1.0);
        assert!(cfg.operator.is_none());
    }

    #[test]
    fn operator_shape_is_checked() {
        let text = r#"{"p": 3, "operator": {"p": 1, "entries": [[{"terms": [{"alpha": [1], "coeff": [{"k": [0], "re": 1.0}]}]}]]}}"#;
        let mut cfg = ProblemConfig::from_json_str(text, &Overrides::default()).unwrap();
        assert!(matches!(cfg.operator(), Err(CliError::Config(_))));
        cfg.p = None;
        let op = cfg.operator().unwrap();
        assert_eq!((op.p(), cfg.n, cfg.p), (1, Some(1), Some(1)));
    }

    #[test]
    fn malformed_override() {
        let o = Overrides {
            seed: None,
            tolerances: vec!["solve.tol".into()],
        };
        assert!(matches!(
            ProblemConfig::from_json_str("{}", &o),
            Err(CliError::Usage(_))
        ));
    }
}
