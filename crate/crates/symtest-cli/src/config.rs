//! Experiment configuration files (TOML).
//!
//! ```toml
//! experiment = "train"          # exact | maxfid | train | suite
//! group = "d3"
//! kind = "sym"                  # bsym | sym | bse | symext
//! state = "phi_plus"            # preset name, or a [matrix] table
//! seed = 7
//! out = "result.json"
//! trace = "trace.csv"           # train only
//!
//! [train]
//! layers = 2
//! max_iterations = 500
//!
//! [matrix]                      # explicit state instead of a preset
//! re = [[0.5, 0.0], [0.0, 0.5]]
//! im = [[0.0, 0.0], [0.0, 0.0]]
//! ```

use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;
use symtest::maxfid::SolverOptions;
use symtest::qmath::{from_rows, DensityMatrix};
use symtest::symmetry_tests::TestKind;
use symtest::variational::{Optimizer, TrainConfig};
use symtest::{presets, Error};

/// Which computation to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    /// Closed-form Bose-symmetry value (solver value for the other kinds).
    Exact,
    /// Maximum symmetric fidelity from the convex solver.
    Maxfid,
    /// Variational training of a prover circuit.
    Train,
    /// Every row of a reference table.
    Suite,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Exact => "exact",
            ExperimentKind::Maxfid => "maxfid",
            ExperimentKind::Train => "train",
            ExperimentKind::Suite => "suite",
        }
    }
}

/// Explicit density matrix given row by row.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Vec<Vec<f64>>,
    #[serde(default)]
    pub label: Option<String>,
}

impl MatrixSpec {
    pub fn density(&self) -> Result<DensityMatrix, Error> {
        let d = self.re.len();
        let bad = |m: &Vec<Vec<f64>>| m.iter().any(|r| r.len() != d);
        if d == 0 || bad(&self.re) || (!self.im.is_empty() && (self.im.len() != d || bad(&self.im))) {
            return Err(Error::InvalidConfig("matrix must be square with matching re/im shapes".into()));
        }
        let rows: Vec<Vec<Complex64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| Complex64::new(self.re[i][j], self.im.get(i).map_or(0.0, |r| r[j])))
                    .collect()
            })
            .collect();
        Ok(DensityMatrix::new(from_rows(&rows))?)
    }
}

/// Overrides applied to [`TrainConfig::default`].
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainOverrides {
    pub layers: Option<usize>,
    pub extra_qubits: Option<usize>,
    pub optimizer: Option<Optimizer>,
    pub step_size: Option<f64>,
    pub max_iterations: Option<usize>,
    pub restarts: Option<usize>,
    pub noise: Option<f64>,
    pub shift: Option<f64>,
    pub patience: Option<usize>,
}

impl TrainOverrides {
    pub fn layers(&self) -> usize {
        self.layers.unwrap_or(2)
    }

    pub fn extra_qubits(&self) -> usize {
        self.extra_qubits.unwrap_or(0)
    }

    pub fn config(&self, seed: u64) -> TrainConfig {
        let d = TrainConfig::default();
        TrainConfig {
            optimizer: self.optimizer.unwrap_or(d.optimizer),
            step_size: self.step_size.unwrap_or(d.step_size),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            restarts: self.restarts.unwrap_or(d.restarts),
            seed,
            noise: self.noise.or(d.noise),
            shift: self.shift.unwrap_or(d.shift),
            patience: self.patience.or(d.patience),
        }
    }
}

/// Overrides applied to [`SolverOptions::default`].
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    pub max_iterations: Option<usize>,
    pub gap_tol: Option<f64>,
}

impl SolverOverrides {
    pub fn options(&self) -> SolverOptions {
        let d = SolverOptions::default();
        SolverOptions {
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            gap_tol: self.gap_tol.unwrap_or(d.gap_tol),
            ..d
        }
    }
}

/// A parsed configuration file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub state: Option<String>,
    #[serde(default)]
    pub matrix: Option<MatrixSpec>,
    #[serde(default)]
    pub suite: Option<String>,
    /// Also train a prover for every suite row.
    #[serde(default)]
    pub variational: bool,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub trace: Option<PathBuf>,
    #[serde(default)]
    pub train: TrainOverrides,
    #[serde(default)]
    pub solver: SolverOverrides,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, Error> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))
    }

    /// Checks that every name resolves and required fields are present.
    pub fn validate(&self) -> Result<(), Error> {
        let missing = |what: &str| Error::InvalidConfig(format!("`{what}` is required for {} runs", self.experiment.as_str()));
        if self.experiment == ExperimentKind::Suite {
            presets::suite(self.suite.as_deref().ok_or_else(|| missing("suite"))?)?;
        } else {
            symtest::groups::builtin(self.group.as_deref().ok_or_else(|| missing("group"))?)?;
            TestKind::parse(self.kind.as_deref().ok_or_else(|| missing("kind"))?)?;
            match (&self.state, &self.matrix) {
                (Some(name), None) => {
                    presets::state(name)?;
                }
                (None, Some(m)) => {
                    m.density()?;
                }
                _ => return Err(Error::InvalidConfig("give exactly one of `state` or `[matrix]`".into())),
            }
        }
        if (self.experiment == ExperimentKind::Train || self.variational) && self.seed.is_none() {
            return Err(missing("seed"));
        }
        if self.trace.is_some() && self.experiment != ExperimentKind::Train {
            return Err(Error::InvalidConfig("`trace` only applies to train runs".into()));
        }
        self.train.config(self.seed.unwrap_or(0)).validate()
    }

    /// Input state and its label.
    pub fn state(&self) -> Result<(String, DensityMatrix), Error> {
        match (&self.state, &self.matrix) {
            (Some(name), _) => Ok((name.clone(), presets::state(name)?)),
            (None, Some(m)) => Ok((m.label.clone().unwrap_or_else(|| "matrix".into()), m.density()?)),
            (None, None) => Err(Error::InvalidConfig("no input state".into())),
        }
    }
}
