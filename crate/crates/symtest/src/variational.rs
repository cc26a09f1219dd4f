//! Variational provers: a parameterised circuit replaces the optimal prover.
//!
//! The objective is the exact acceptance probability of the test with the
//! ansatz circuit as prover, evaluated from the statevector when noiseless
//! and from the density matrix of the full circuit under depolarizing noise.
//! It never exceeds the optimum computed by [`crate::maxfid`].

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{CMatrix, C64};
use crate::simulator::{self, Circuit, Gate, NoiseModel};
use crate::symmetry_tests::{TestCircuit, TestKind, TestSpec};

/// Layered hardware-efficient ansatz: per layer an `Ry` then an `Rz` on every
/// qubit, followed by a linear chain of CNOTs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ansatz {
    pub num_qubits: usize,
    pub layers: usize,
}

impl Ansatz {
    pub fn new(num_qubits: usize, layers: usize) -> Result<Self> {
        if num_qubits == 0 || layers == 0 {
            return Err(Error::InvalidConfig("ansatz needs at least one qubit and one layer".into()));
        }
        Ok(Self { num_qubits, layers })
    }

    /// Ansatz sized to the prover register of `spec` with `extra` ancillas.
    pub fn for_spec(spec: &TestSpec, layers: usize, extra: usize) -> Result<Self> {
        Self::new(spec.prover_qubits(extra).max(1), layers)
    }

    pub fn num_params(&self) -> usize {
        2 * self.num_qubits * self.layers
    }

    /// Circuit for a parameter vector of length [`Self::num_params`].
    pub fn circuit(&self, params: &[f64]) -> Result<Circuit> {
        if params.len() != self.num_params() {
            return Err(Error::InvalidConfig(format!(
                "ansatz takes {} parameters, got {}",
                self.num_params(),
                params.len()
            )));
        }
        let n = self.num_qubits;
        let mut c = Circuit::new(n);
        for layer in params.chunks(2 * n) {
            for q in 0..n {
                c.push(Gate::Ry(q, layer[q]))?;
            }
            for q in 0..n {
                c.push(Gate::Rz(q, layer[n + q]))?;
            }
            for q in 0..n.saturating_sub(1) {
                c.push(Gate::Cnot { control: q, target: q + 1 })?;
            }
        }
        Ok(c)
    }
}

/// Gradient estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimizer {
    /// Central finite differences on every parameter.
    FiniteDifference,
    /// Simultaneous perturbation along a random sign vector.
    Spsa,
}

/// Training settings. Ascent steps use first and second moment estimates of
/// the gradient (Adam) with learning rate `step_size`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub optimizer: Optimizer,
    pub step_size: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Per-gate depolarizing probability; `None` trains noiselessly.
    pub noise: Option<f64>,
    /// Finite-difference shift (SPSA uses it as the perturbation size).
    pub shift: f64,
    /// Stop a restart after this many iterations without improvement above 1e-10.
    pub patience: Option<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            optimizer: Optimizer::FiniteDifference,
            step_size: 0.05,
            max_iterations: 2000,
            restarts: 3,
            seed: 0,
            noise: None,
            shift: 1e-4,
            patience: Some(200),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0) || !(self.shift > 0.0) {
            return Err(Error::InvalidConfig("step size and shift must be positive".into()));
        }
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidConfig("need at least one restart and one iteration".into()));
        }
        if let Some(p) = self.noise {
            NoiseModel::new(p)?;
        }
        Ok(())
    }

    fn noise_model(&self) -> Result<Option<NoiseModel>> {
        self.noise.filter(|&p| p > 0.0).map(NoiseModel::new).transpose()
    }
}

/// One recorded iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub iteration: usize,
    /// Objective at the current parameters.
    pub objective: f64,
    /// Best objective so far.
    pub best: f64,
    pub params: Vec<f64>,
}

/// Record of a training run (the best of all restarts).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingTrace {
    pub steps: Vec<TraceStep>,
    pub final_objective: f64,
    pub best_params: Vec<f64>,
    pub restart: usize,
    /// Best objective of every restart.
    pub restart_objectives: Vec<f64>,
    pub seed: u64,
    pub ansatz: Ansatz,
    pub config: TrainConfig,
    pub wall_time_ms: u128,
}

impl TrainingTrace {
    /// CSV with columns `iteration,objective,best`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::InvalidConfig(format!("csv: {e}"));
        w.write_record(["iteration", "objective", "best"]).map_err(io)?;
        for s in &self.steps {
            w.write_record([s.iteration.to_string(), format!("{:.12}", s.objective), format!("{:.12}", s.best)])
                .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Full trace, configuration and parameters as JSON.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidConfig(format!("json: {e}")))
    }
}

/// Exact objective for one spec and ansatz.
struct Evaluator<'a> {
    spec: &'a TestSpec,
    ansatz: Ansatz,
    noise: Option<NoiseModel>,
    qubits: Vec<usize>,
    pi: CMatrix,
    input: Vec<C64>,
}

impl<'a> Evaluator<'a> {
    fn new(spec: &'a TestSpec, ansatz: Ansatz, noise: Option<NoiseModel>) -> Result<Self> {
        if spec.kind == TestKind::BoseSymmetry {
            return Err(Error::InvalidConfig("the Bose-symmetry test has no prover to train".into()));
        }
        let w = ansatz.num_qubits;
        if w < spec.prover_qubits(0) {
            return Err(Error::RegisterMismatch(format!(
                "ansatz on {w} qubits, prover register needs {}",
                spec.prover_qubits(0)
            )));
        }
        let (qubits, pi) = spec.data_projector(w)?;
        let input = spec.data_input(w)?;
        Ok(Self { spec, ansatz, noise, qubits, pi, input })
    }

    fn eval(&self, params: &[f64]) -> Result<f64> {
        let prover = self.ansatz.circuit(params)?;
        match self.noise {
            None => {
                let ns = self.spec.system_qubits;
                let w = self.ansatz.num_qubits;
                let map: Vec<usize> = (ns..ns + w).collect();
                let mut amps = self.input.clone();
                simulator::run_mapped(&prover, &mut amps, ns + w, &map);
                simulator::apply_operator(&mut amps, ns + w, &self.qubits, &self.pi);
                Ok(amps.iter().map(|z| z.norm_sqr()).sum::<f64>().clamp(0.0, 1.0))
            }
            Some(noise) => TestCircuit::build(self.spec, Some(&prover), self.ansatz.num_qubits)?.acceptance(Some(noise)),
        }
    }
}

/// Objective of `spec` with the ansatz at `params`, optionally noisy.
pub fn evaluate(spec: &TestSpec, ansatz: Ansatz, params: &[f64], noise: Option<f64>) -> Result<f64> {
    let noise = noise.filter(|&p| p > 0.0).map(NoiseModel::new).transpose()?;
    Evaluator::new(spec, ansatz, noise)?.eval(params)
}

struct Adam {
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl Adam {
    fn new(n: usize) -> Self {
        Self { m: vec![0.0; n], v: vec![0.0; n], t: 0 }
    }

    fn ascend(&mut self, params: &mut [f64], grad: &[f64], lr: f64) {
        const B1: f64 = 0.9;
        const B2: f64 = 0.999;
        self.t += 1;
        let (c1, c2) = (1.0 - B1.powi(self.t), 1.0 - B2.powi(self.t));
        for i in 0..params.len() {
            self.m[i] = B1 * self.m[i] + (1.0 - B1) * grad[i];
            self.v[i] = B2 * self.v[i] + (1.0 - B2) * grad[i] * grad[i];
            params[i] += lr * (self.m[i] / c1) / ((self.v[i] / c2).sqrt() + 1e-8);
        }
    }
}

fn gradient(eval: &Evaluator, params: &[f64], cfg: &TrainConfig, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let h = cfg.shift;
    let mut p = params.to_vec();
    match cfg.optimizer {
        Optimizer::FiniteDifference => {
            let mut g = vec![0.0; params.len()];
            for i in 0..params.len() {
                p[i] = params[i] + h;
                let up = eval.eval(&p)?;
                p[i] = params[i] - h;
                let down = eval.eval(&p)?;
                p[i] = params[i];
                g[i] = (up - down) / (2.0 * h);
            }
            Ok(g)
        }
        Optimizer::Spsa => {
            let delta: Vec<f64> = (0..params.len()).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
            let plus: Vec<f64> = params.iter().zip(&delta).map(|(a, d)| a + h * d).collect();
            let minus: Vec<f64> = params.iter().zip(&delta).map(|(a, d)| a - h * d).collect();
            let diff = (eval.eval(&plus)? - eval.eval(&minus)?) / (2.0 * h);
            Ok(delta.iter().map(|d| diff * d).collect())
        }
    }
}

fn run_restart(eval: &Evaluator, cfg: &TrainConfig, restart: usize) -> Result<(Vec<TraceStep>, Vec<f64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let n = eval.ansatz.num_params();
    let pi = std::f64::consts::PI;
    let mut params: Vec<f64> = (0..n).map(|_| rng.gen_range(-pi..pi)).collect();
    let mut adam = Adam::new(n);
    let mut steps = Vec::new();
    let mut best = f64::MIN;
    let mut best_params = params.clone();
    let mut last_improvement = 0;
    for it in 0..cfg.max_iterations {
        let value = eval.eval(&params)?;
        if value > best + 1e-10 {
            last_improvement = it;
        }
        if value > best {
            best = value;
            best_params.clone_from(&params);
        }
        steps.push(TraceStep { iteration: it, objective: value, best, params: params.clone() });
        if cfg.patience.is_some_and(|p| it - last_improvement >= p) || it + 1 == cfg.max_iterations {
            break;
        }
        let g = gradient(eval, &params, cfg, &mut rng)?;
        adam.ascend(&mut params, &g, cfg.step_size);
    }
    Ok((steps, best_params, best))
}

/// Trains the ansatz as prover for `spec`; returns the best restart.
/// Restarts run in parallel and are individually seeded, so the result is
/// deterministic for a fixed configuration.
pub fn train(spec: &TestSpec, ansatz: Ansatz, cfg: &TrainConfig) -> Result<TrainingTrace> {
    cfg.validate()?;
    let start = Instant::now();
    let eval = Evaluator::new(spec, ansatz, cfg.noise_model()?)?;
    let runs: Vec<(Vec<TraceStep>, Vec<f64>, f64)> =
        (0..cfg.restarts).into_par_iter().map(|r| run_restart(&eval, cfg, r)).collect::<Result<_>>()?;
    let restart_objectives: Vec<f64> = runs.iter().map(|r| r.2).collect();
    let restart = restart_objectives
        .iter()
        .enumerate()
        .fold(0, |b, (i, &v)| if v > restart_objectives[b] { i } else { b });
    let (steps, best_params, final_objective) = runs.into_iter().nth(restart).expect("at least one restart");
    Ok(TrainingTrace {
        steps,
        final_objective,
        best_params,
        restart,
        restart_objectives,
        seed: cfg.seed,
        ansatz,
        config: cfg.clone(),
        wall_time_ms: start.elapsed().as_millis(),
    })
}

/// Noiseless re-evaluation of parameters trained under noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseResilience {
    pub noisy_objective: f64,
    pub noiseless_objective: f64,
    /// Whether the noiseless value is at least the noisy one, the usual
    /// pattern for noise-resilient training. Reported, not enforced.
    pub improved: bool,
}

/// Evaluates the trained parameters of `trace` without noise.
pub fn noise_resilient_eval(trace: &TrainingTrace, spec: &TestSpec, ansatz: Ansatz) -> Result<NoiseResilience> {
    let noiseless_objective = if trace.config.noise.unwrap_or(0.0) > 0.0 {
        evaluate(spec, ansatz, &trace.best_params, None)?
    } else {
        trace.final_objective
    };
    let improved = noiseless_objective >= trace.final_objective - 1e-12;
    if !improved {
        log::warn!(
            "noiseless re-evaluation {noiseless_objective:.6} below noisy objective {:.6}",
            trace.final_objective
        );
    }
    Ok(NoiseResilience { noisy_objective: trace.final_objective, noiseless_objective, improved })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::builtin;
    use crate::maxfid;
    use crate::qmath::{self, DensityMatrix, PureState};
    use crate::symmetry_tests::optimal_acceptance;
    use approx::assert_abs_diff_eq;

    fn spec(kind: TestKind, group: &str, rho: DensityMatrix) -> TestSpec {
        TestSpec::new(kind, builtin(group).unwrap(), rho).unwrap()
    }

    fn quick(seed: u64) -> TrainConfig {
        TrainConfig { max_iterations: 400, seed, ..TrainConfig::default() }
    }

    #[test]
    fn ansatz_shape_and_unitarity() {
        let a = Ansatz::new(3, 2).unwrap();
        assert_eq!(a.num_params(), 12);
        let c = a.circuit(&[0.3; 12]).unwrap();
        assert!(qmath::is_unitary(&c.unitary(), 1e-10));
        assert!(a.circuit(&[0.0; 5]).is_err());
        assert!(Ansatz::new(0, 1).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig { step_size: 0.0, ..TrainConfig::default() }.validate().is_err());
        assert!(TrainConfig { restarts: 0, ..TrainConfig::default() }.validate().is_err());
        assert!(TrainConfig { noise: Some(1.0), ..TrainConfig::default() }.validate().is_err());
    }

    #[test]
    fn z2_symmetry_of_maximally_mixed_trains_to_one() {
        let s = spec(TestKind::Symmetry, "z2", DensityMatrix::maximally_mixed(2));
        let a = Ansatz::for_spec(&s, 2, 0).unwrap();
        let t = train(&s, a, &quick(1)).unwrap();
        assert!(t.final_objective >= 0.999);
    }

    #[test]
    fn dihedral_symmetry_of_phi_plus_and_upper_bound() {
        let phi = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap().to_density();
        let s = spec(TestKind::Symmetry, "d3", phi);
        let opt = optimal_acceptance(&s).unwrap().acceptance;
        let a = Ansatz::for_spec(&s, 3, 0).unwrap();
        let t = train(&s, a, &quick(2)).unwrap();
        assert_abs_diff_eq!(t.final_objective, 2.0 / 3.0, epsilon = 5e-3);
        for step in &t.steps {
            assert!(step.objective <= opt + 1e-6);
        }
        assert!(t.steps.windows(2).all(|w| w[1].best >= w[0].best));
    }

    #[test]
    fn training_is_deterministic_and_serialises() {
        let s = spec(TestKind::BoseSymmetricExtendibility, "d3", PureState::basis(2, 1).to_density());
        let a = Ansatz::for_spec(&s, 2, 0).unwrap();
        let cfg = TrainConfig { max_iterations: 60, optimizer: Optimizer::Spsa, seed: 9, ..TrainConfig::default() };
        let t1 = train(&s, a, &cfg).unwrap();
        let t2 = train(&s, a, &cfg).unwrap();
        assert_eq!(t1.steps, t2.steps);
        assert_eq!(t1.to_csv().unwrap(), t2.to_csv().unwrap());
        let json = t1.to_json().unwrap();
        let back: TrainingTrace = serde_json::from_str(&json).unwrap();
        assert_eq!(back.best_params, t1.best_params);
        assert!(t1.to_csv().unwrap().starts_with("iteration,objective,best\n0,"));
    }

    #[test]
    fn noiseless_objective_matches_full_circuit() {
        let s = spec(TestKind::SymmetricExtendibility, "d3", PureState::basis(2, 0).to_density());
        let a = Ansatz::for_spec(&s, 2, 1).unwrap();
        let params: Vec<f64> = (0..a.num_params()).map(|i| 0.37 * i as f64).collect();
        let exact = evaluate(&s, a, &params, None).unwrap();
        let tc = TestCircuit::build(&s, Some(&a.circuit(&params).unwrap()), a.num_qubits).unwrap();
        assert_abs_diff_eq!(exact, tc.acceptance(None).unwrap(), epsilon = 1e-10);
        assert!(evaluate(&s, a, &params, Some(0.05)).unwrap() < exact + 1e-12 || exact < 0.5);
    }

    #[test]
    fn register_mismatch_is_rejected() {
        let s = spec(TestKind::SymmetricExtendibility, "d3", PureState::basis(2, 0).to_density());
        assert!(train(&s, Ansatz::new(2, 1).unwrap(), &quick(0)).is_err());
        let b = spec(TestKind::BoseSymmetry, "z2", PureState::basis(2, 0).to_density());
        assert!(train(&b, Ansatz::new(1, 1).unwrap(), &quick(0)).is_err());
    }

    #[test]
    fn noise_resilience_workflow() {
        let s = spec(TestKind::Symmetry, "z2", DensityMatrix::maximally_mixed(2));
        let a = Ansatz::for_spec(&s, 1, 0).unwrap();
        let clean = train(&s, a, &quick(3)).unwrap();
        let r = noise_resilient_eval(&clean, &s, a).unwrap();
        assert_eq!(r.noiseless_objective, clean.final_objective);
        for seed in 0..10 {
            let cfg = TrainConfig { noise: Some(0.01), max_iterations: 150, restarts: 1, seed, ..TrainConfig::default() };
            let noisy = train(&s, a, &cfg).unwrap();
            let r = noise_resilient_eval(&noisy, &s, a).unwrap();
            assert!(r.improved, "seed {seed}: {r:?}");
        }
    }

    #[test]
    fn objective_never_exceeds_optimum() {
        let psi = PureState::from_real(&[0.0, 1.0, 1.0, 0.0]).unwrap().to_density();
        let s = spec(TestKind::SymmetricExtendibility, "s2", psi);
        let opt = maxfid::solve(&s.fidelity_problem().unwrap()).unwrap().value;
        let a = Ansatz::for_spec(&s, 1, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let p: Vec<f64> = (0..a.num_params()).map(|_| rng.gen_range(-3.0..3.0)).collect();
            assert!(evaluate(&s, a, &p, None).unwrap() <= opt + 1e-6);
        }
    }
}
