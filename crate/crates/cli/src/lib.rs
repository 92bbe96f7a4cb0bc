//! Command line front end: one config file in, one report per run out.
//!
//! Exit codes: 0 pass, 2 fail, 3 inconclusive, 1 usage or config error.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use hscale::fredholm::{kernel_cokernel, solve_const, solve_galerkin, Guarantee};
use hscale::operators::ellipticity_check;
use hscale::rofunc::{matuszewska, ro_check};
use hscale::torus::hnorm_vec;
use hscale::verify::{
    apriori_experiment, classical_solution_check, continuity_experiment, embedding_chain_check,
    interpolation_identity_check, regularity_lift_experiment, scalar_norm_check, ExperimentReport,
    Verdict,
};
use hscale::Error;
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{Overrides, ProblemConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "hscale",
    version,
    about = "Elliptic systems in the extended Sobolev scale on the torus"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Problem configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory receiving the report files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Overrides `sampling.seed`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides a tolerance, e.g. `--tolerance solve.tol=1e-8`. Repeatable.
    #[arg(long, global = true)]
    pub tolerance: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Minimum of |det| of the principal symbol over the x- and sphere grids.
    CheckEllipticity,
    /// Kernel, cokernel and index of a constant-coefficient system.
    Fredholm,
    /// Solve Au = f for the configured data.
    Solve,
    /// Empirical constant of the a priori estimate.
    Apriori,
    /// Shell comparison of solution and data energies.
    Regularity,
    /// Sup-norm bound on derivatives of solution components.
    Continuity,
    /// Continuity check with r = m_k for every component.
    Classical,
    /// Interpolation norm against the weighted norm.
    InterpCheck,
    /// Sobolev embedding chain around the weight.
    Embedding,
    /// Norm of a scalar operator between weighted spaces.
    #[command(name = "lemma41")]
    ScalarNorm,
    /// Matuszewska indices and RO constant of the weight.
    RoInfo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CheckEllipticity => "check-ellipticity",
            Command::Fredholm => "fredholm",
            Command::Solve => "solve",
            Command::Apriori => "apriori",
            Command::Regularity => "regularity",
            Command::Continuity => "continuity",
            Command::Classical => "classical",
            Command::InterpCheck => "interp-check",
            Command::Embedding => "embedding",
            Command::ScalarNorm => "lemma41",
            Command::RoInfo => "ro-info",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Inconclusive => 3,
        }
    }
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
        }
    }
}

/// What a subcommand produced, before it is written out.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    pub summary: String,
    pub result: Value,
    pub error: Option<String>,
    /// Observations for the CSV file, when the subcommand ran an experiment.
    pub csv: Option<String>,
}

impl Outcome {
    fn new(status: Status, summary: String, result: Value) -> Self {
        Outcome {
            status,
            summary,
            result,
            error: None,
            csv: None,
        }
    }

    fn experiment(report: ExperimentReport) -> Self {
        let summary = format!(
            "{} verdict {:?}, constants {:?}",
            report.experiment, report.verdict, report.constants
        );
        Outcome {
            status: report.verdict.into(),
            summary,
            csv: Some(report.to_csv()),
            result: to_value(&report),
            error: None,
        }
    }

    /// Library errors: config-like ones abort, refusals are inconclusive, the rest fail.
    fn from_error(e: Error) -> Result<Self, CliError> {
        match e {
            Error::Config(_)
            | Error::Parse(_)
            | Error::DimensionMismatch { .. }
            | Error::ShapeMismatch(_)
            | Error::Domain(_) => Err(CliError::Config(e.to_string())),
            Error::HypothesisUnmet(_) => Ok(Outcome {
                status: Status::Inconclusive,
                summary: e.to_string(),
                result: Value::Null,
                error: Some(e.to_string()),
                csv: None,
            }),
            Error::IncompatibleData {
                violation,
                ref cokernel_vector,
            } => Ok(Outcome {
                status: Status::Fail,
                summary: e.to_string(),
                result: json!({
                    "violation": violation,
                    "cokernel_vector": cokernel_vector.to_literal(),
                }),
                error: Some(e.to_string()),
                csv: None,
            }),
            other => Ok(Outcome {
                status: Status::Fail,
                summary: other.to_string(),
                result: Value::Null,
                error: Some(other.to_string()),
                csv: None,
            }),
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

/// Runs one subcommand against a loaded config. `cfg` is updated with the
/// values resolved along the way.
pub fn execute(command: Command, cfg: &mut ProblemConfig) -> Result<Outcome, CliError> {
    match dispatch(command, cfg)? {
        Ok(outcome) => Ok(outcome),
        Err(e) => Outcome::from_error(e),
    }
}

fn dispatch(
    command: Command,
    cfg: &mut ProblemConfig,
) -> Result<hscale::Result<Outcome>, CliError> {
    let sampling = cfg.sampling.clone();
    let phi = cfg.phi.clone();
    let tol = cfg.tolerances;
    Ok(match command {
        Command::CheckEllipticity => {
            let a = cfg.operator()?;
            let r = ellipticity_check(&a, &tol.ellipticity);
            let status = if r.elliptic {
                Status::Pass
            } else {
                Status::Fail
            };
            Ok(Outcome::new(
                status,
                format!("min |det| = {:e}", r.min_abs_det),
                to_value(&r),
            ))
        }
        Command::Fredholm => {
            let a = cfg.operator()?;
            kernel_cokernel(&a, &tol.singular).map(|r| {
                let status = match r.guarantee {
                    Guarantee::Exact => Status::Pass,
                    Guarantee::HeuristicRadius(_) => Status::Inconclusive,
                };
                let summary = format!(
                    "dim N = {}, dim N+ = {}, index = {}, guarantee {:?}",
                    r.kernel_basis.len(),
                    r.cokernel_basis.len(),
                    r.index,
                    r.guarantee
                );
                Outcome::new(status, summary, to_value(&r))
            })
        }
        Command::Solve => {
            let a = cfg.operator()?;
            let f = cfg.data(a.dim())?;
            if a.is_constant() {
                solve_const(&a, &f, &phi, &tol.solve).map(|r| {
                    let summary = format!("residual {:e}", r.residual);
                    Outcome::new(Status::Pass, summary, to_value(&r))
                })
            } else {
                let k = cfg
                    .experiment
                    .galerkin_bandwidth
                    .unwrap_or_else(|| (2 * (f.bandwidth() + a.coefficient_bandwidth())).max(8));
                cfg.experiment.galerkin_bandwidth = Some(k);
                solve_galerkin(&a, &f, k, &phi, &tol.galerkin).and_then(|r| {
                    let scale = 1.0 + hnorm_vec(&f, &hscale::rofunc::RoFunction::one())?;
                    let status = if r.solve.compatibility_violation <= tol.solve.tol * scale {
                        Status::Pass
                    } else {
                        Status::Fail
                    };
                    let summary = format!(
                        "K = {k}, residual {:e}, compatibility violation {:e}",
                        r.solve.residual, r.solve.compatibility_violation
                    );
                    Ok(Outcome::new(status, summary, to_value(&r)))
                })
            }
        }
        Command::Apriori => {
            let a = cfg.operator()?;
            apriori_experiment(&a, &phi, cfg.experiment.sigma, &sampling).map(Outcome::experiment)
        }
        Command::Regularity => {
            let a = cfg.operator()?;
            regularity_lift_experiment(&a, &phi, &sampling).map(Outcome::experiment)
        }
        Command::Continuity => {
            let a = cfg.operator()?;
            continuity_experiment(
                &a,
                &phi,
                cfg.experiment.r,
                cfg.experiment.component,
                &sampling,
            )
            .map(Outcome::experiment)
        }
        Command::Classical => {
            let a = cfg.operator()?;
            classical_solution_check(&a, &phi, &sampling).map(Outcome::experiment)
        }
        Command::InterpCheck => {
            let (s0, s1) = cfg.pair()?;
            let n = *cfg.n.get_or_insert(1);
            interpolation_identity_check(&phi, s0, s1, n, &sampling).map(Outcome::experiment)
        }
        Command::Embedding => {
            let (s0, s1) = cfg.pair()?;
            let n = *cfg.n.get_or_insert(1);
            embedding_chain_check(&phi, s0, s1, n, &sampling).map(Outcome::experiment)
        }
        Command::ScalarNorm => {
            let l = cfg.scalar_operator()?;
            scalar_norm_check(&l, &phi, &sampling).map(Outcome::experiment)
        }
        Command::RoInfo => {
            let check = ro_check(&phi, cfg.experiment.ro_a, cfg.experiment.ro_t_max);
            matuszewska(&phi).map(|idx| {
                let status = if check.ok { Status::Pass } else { Status::Fail };
                let summary = format!(
                    "σ₀ = {:.4}, σ₁ = {:.4} (± {:.4}, {:?}), RO constant on [1, {}] ≈ {:.4}",
                    idx.sigma0,
                    idx.sigma1,
                    idx.half_width,
                    idx.method,
                    cfg.experiment.ro_a,
                    check.c_estimate
                );
                Outcome::new(
                    status,
                    summary,
                    json!({ "variant": phi.variant_name(), "indices": idx, "ro_check": check }),
                )
            })
        }
    })
}

/// The JSON report written for a run. `timestamp` is the only field that
/// varies between identical runs.
pub fn report_document(
    command: Command,
    cfg: &ProblemConfig,
    outcome: &Outcome,
    timestamp: u64,
) -> String {
    let doc = json!({
        "subcommand": command.name(),
        "status": outcome.status,
        "summary": outcome.summary,
        "error": outcome.error,
        "config": cfg,
        "result": outcome.result,
        "timestamp": timestamp,
        "nondeterministic_fields": ["timestamp"],
    });
    serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
}

/// Writes `contents` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    let target = dir.join(name);
    tmp.persist(&target).map_err(|e| io(e.error))?;
    Ok(target)
}

fn run_parsed(cli: &Cli) -> Result<Status, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Usage("--config PATH is required".into()))?;
    let overrides = Overrides {
        seed: cli.seed,
        tolerances: cli.tolerance.clone(),
    };
    let mut cfg = ProblemConfig::load(path, &overrides)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let outcome = pool.install(|| execute(cli.command, &mut cfg))?;

    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let name = cli.command.name();
    let json_path = write_atomic(
        &cli.out,
        &format!("{name}.json"),
        &report_document(cli.command, &cfg, &outcome, timestamp),
    )?;
    if let Some(csv) = &outcome.csv {
        write_atomic(&cli.out, &format!("{name}.csv"), csv)?;
    }
    println!("{name}: {:?}: {}", outcome.status, outcome.summary);
    println!("report: {}", json_path.display());
    Ok(outcome.status)
}

/// Parses arguments, runs, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run_parsed(&cli) {
        Ok(status) => status.exit_code(),
        Err(e) => {
            eprintln!("{e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn exit_codes() {
        assert_eq!(Status::Pass.exit_code(), 0);
        assert_eq!(Status::Fail.exit_code(), 2);
        assert_eq!(Status::Inconclusive.exit_code(), 3);
    }

    #[test]
    fn subcommand_names_match_the_parser() {
        Cli::command().debug_assert();
        let all = [
            Command::CheckEllipticity,
            Command::Fredholm,
            Command::Solve,
            Command::Apriori,
            Command::Regularity,
            Command::Continuity,
            Command::Classical,
            Command::InterpCheck,
            Command::Embedding,
            Command::ScalarNorm,
            Command::RoInfo,
        ];
        for c in all {
            let cli = Cli::try_parse_from(["hscale", c.name(), "--config", "x.json"]).unwrap();
            assert_eq!(cli.command, c);
        }
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "r.json", "old").unwrap();
        let path = write_atomic(dir.path(), "r.json", "new").unwrap();
        assert_eq!(std::fs::read_to_string(path).unwrap(), "new");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn timestamp_is_the_only_varying_field() {
        let mut cfg = ProblemConfig::from_json_str("{}", &Overrides::default()).unwrap();
        let outcome = execute(Command::RoInfo, &mut cfg).unwrap();
        let a = report_document(Command::RoInfo, &cfg, &outcome, 1);
        let b = report_document(Command::RoInfo, &cfg, &outcome, 2);
        let diff: Vec<_> = a.lines().zip(b.lines()).filter(|(x, y)| x != y).collect();
        assert_eq!(diff.len(), 1);
        assert!(diff[0].0.contains("\"timestamp\""));
    }
}
