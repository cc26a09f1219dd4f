//! Experiment runner behind the `symtest` binary.
//!
//! A run reads an [`ExperimentConfig`], evaluates one or more rows and
//! produces a [`ResultFile`] with a stable JSON schema:
//!
//! ```json
//! {"schema": 1, "experiment": "suite", "group": "d3", "kind": "bsym",
//!  "rows": [{"state": "phi_plus", "method": "closed_form", "value": 0.6667,
//!            "reference": 0.6666, "deviation": 0.0001}],
//!  "meta": {"seed": null, "tolerances": {...}, "runtime_ms": 3}}
//! ```

pub mod config;

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use symtest::presets::{self, Suite};
use symtest::qmath::DensityMatrix;
use symtest::symmetry_tests::{bose_acceptance, optimal_acceptance_with, Method, TestKind, TestSpec};
use symtest::variational::{noise_resilient_eval, train, Ansatz, TrainingTrace};
use symtest::{groups, Error};

pub use config::{ExperimentConfig, ExperimentKind};

/// Version of the result schema.
pub const SCHEMA_VERSION: u32 = 1;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const NOT_CONVERGED: i32 = 3;
}

/// Failure of a CLI run.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Toolkit(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => exit::FAILURE,
            CliError::Toolkit(Error::NotConverged { .. }) => exit::NOT_CONVERGED,
            CliError::Toolkit(
                Error::InvalidConfig(_)
                | Error::UnknownGroup(_)
                | Error::UnknownPreset(_)
                | Error::RegisterMismatch(_)
                | Error::InvalidGroup(_)
                | Error::Math(_),
            ) => exit::VALIDATION,
            CliError::Toolkit(_) => exit::FAILURE,
        }
    }
}

/// One evaluated row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub state: String,
    pub method: String,
    pub value: f64,
    pub reference: Option<f64>,
    pub deviation: Option<f64>,
}

impl Row {
    fn new(state: &str, method: Method, value: f64, reference: Option<f64>) -> Self {
        Row {
            state: state.to_string(),
            method: method.as_str().to_string(),
            value,
            reference,
            deviation: reference.map(|r| (value - r).abs()),
        }
    }
}

/// Tolerances the values were computed with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub solver_gap: f64,
    pub construction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Meta {
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub runtime_ms: u128,
}

/// Contents of the result JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultFile {
    pub schema: u32,
    pub experiment: String,
    pub group: String,
    pub kind: String,
    /// Value of the single row for non-suite runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acceptance: Option<f64>,
    pub rows: Vec<Row>,
    pub meta: Meta,
}

impl ResultFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialises") + "\n"
    }
}

/// Outcome of [`run`]: the result and, for train runs, the trace.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub result: ResultFile,
    pub trace: Option<TrainingTrace>,
}

/// Table row matching `(group, kind, state)`, if any.
fn table_row(group: &str, kind: TestKind, state: &str) -> Option<presets::SuiteRow> {
    presets::suites()
        .iter()
        .filter(|s| s.group == group && s.kind == kind)
        .flat_map(|s| s.rows.iter())
        .find(|r| r.state == state)
        .copied()
}

fn exact_row(spec: &TestSpec, label: &str, reference: Option<f64>, cfg: &ExperimentConfig) -> Result<Row, Error> {
    if spec.kind == TestKind::BoseSymmetry {
        let v = bose_acceptance(&spec.rep, &spec.state)?;
        Ok(Row::new(label, Method::ClosedForm, v, reference))
    } else {
        let r = optimal_acceptance_with(spec, cfg.solver.options())?;
        Ok(Row::new(label, r.method, r.acceptance, reference))
    }
}

fn train_row(
    spec: &TestSpec,
    label: &str,
    reference: Option<f64>,
    cfg: &ExperimentConfig,
) -> Result<(Vec<Row>, TrainingTrace), Error> {
    let ansatz = Ansatz::for_spec(spec, cfg.train.layers(), cfg.train.extra_qubits())?;
    let tc = cfg.train.config(cfg.seed.unwrap_or(0));
    let trace = train(spec, ansatz, &tc)?;
    let mut rows = vec![Row::new(label, Method::Variational, trace.final_objective, reference)];
    if tc.noise.unwrap_or(0.0) > 0.0 {
        let r = noise_resilient_eval(&trace, spec, ansatz)?;
        rows.push(Row::new(&format!("{label} (noiseless re-evaluation)"), Method::Variational, r.noiseless_objective, reference));
    }
    Ok((rows, trace))
}

fn run_suite(suite: &Suite, cfg: &ExperimentConfig) -> Result<Vec<Row>, Error> {
    let per_row: Vec<Vec<Row>> = suite
        .rows
        .par_iter()
        .map(|r| {
            let spec = suite.spec(r)?;
            let mut rows = vec![exact_row(&spec, r.state, Some(r.reference), cfg)?];
            if cfg.variational && spec.kind != TestKind::BoseSymmetry {
                rows.extend(train_row(&spec, r.state, Some(r.noiseless), cfg)?.0);
            }
            Ok(rows)
        })
        .collect::<Result<_, Error>>()?;
    Ok(per_row.into_iter().flatten().collect())
}

/// Runs a validated configuration.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut trace = None;
    let (group, kind, rows) = if cfg.experiment == ExperimentKind::Suite {
        let suite = presets::suite(cfg.suite.as_deref().unwrap_or_default())?;
        (suite.group.to_string(), suite.kind, run_suite(suite, cfg)?)
    } else {
        let group = cfg.group.clone().unwrap_or_default();
        let kind = TestKind::parse(cfg.kind.as_deref().unwrap_or_default())?;
        let (label, state): (String, DensityMatrix) = cfg.state()?;
        let spec = TestSpec::new(kind, groups::builtin(&group)?, state)?;
        let table = if cfg.state.is_some() { table_row(&group, kind, &label) } else { None };
        let rows = match cfg.experiment {
            ExperimentKind::Exact => vec![exact_row(&spec, &label, table.map(|r| r.reference), cfg)?],
            ExperimentKind::Maxfid => {
                let r = optimal_acceptance_with(&spec, cfg.solver.options())?;
                vec![Row::new(&label, r.method, r.acceptance, table.map(|r| r.reference))]
            }
            ExperimentKind::Train => {
                let (rows, t) = train_row(&spec, &label, table.map(|r| r.noiseless), cfg)?;
                trace = Some(t);
                rows
            }
            ExperimentKind::Suite => unreachable!("handled above"),
        };
        (group, kind, rows)
    };
    let acceptance = (cfg.experiment != ExperimentKind::Suite).then(|| rows[0].value);
    let result = ResultFile {
        schema: SCHEMA_VERSION,
        experiment: cfg.experiment.as_str().to_string(),
        group,
        kind: kind.short_name().to_string(),
        acceptance,
        rows,
        meta: Meta {
            seed: cfg.seed,
            tolerances: Tolerances { solver_gap: cfg.solver.options().gap_tol, construction: 1e-10 },
            runtime_ms: start.elapsed().as_millis(),
        },
    };
    Ok(RunOutput { result, trace })
}

/// Writes `contents` to `path` through a temporary file and a rename, so
/// readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.display().to_string(), source };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let mut f = std::fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)?;
    f.sync_all().map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

/// Reads a configuration file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(ExperimentConfig::parse(&text)?)
}

/// Text listing of groups, state presets and suites.
pub fn list_presets() -> String {
    presets::listing()
}
