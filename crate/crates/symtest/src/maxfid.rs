//! Maximum fidelity between a state and a convex set of symmetric states.
//!
//! Every feasible set is the image `{ Tr_R[S(omega)] }` of density matrices
//! `omega` under a symmetrising map `S` followed by a partial trace over a
//! trailing register `R`:
//!
//! | set                        | `S`                                   | `R`        |
//! |----------------------------|---------------------------------------|------------|
//! | Bose symmetric             | restriction to the range of `Pi`      | trivial    |
//! | symmetric                  | group twirl                           | trivial    |
//! | Bose-symmetric extendible  | restriction to the range of `Pi_RS`   | extension  |
//! | symmetric extendible       | group twirl on `RS`                   | extension  |
//!
//! The root fidelity `sqrt F(rho, sigma)` is concave in `sigma`, so it is
//! maximised by conditional gradient (Frank-Wolfe). The linear subproblem
//! `max_omega Tr[G Tr_R S(omega)]` is solved exactly by a top eigenvector of
//! `S^dagger(G ⊗ I_R)`. The Frank-Wolfe gap bounds the distance to the optimum.

use argmin::core::{CostFunction, Executor, Gradient as ArgminGradient, State};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::LBFGS;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::groups::{self, GroupRep};
use crate::qmath::{
    self, c, fidelity_mat, hermitian_part, identity, kron, range_basis, root_fidelity_mat,
    top_eigvec, trace_re, trace_tail, CMatrix, DensityMatrix,
};

/// Which symmetric set the problem optimises over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SetKind {
    BoseSymmetric,
    Symmetric,
    BoseExtendible,
    SymmetricExtendible,
    /// Symmetric and block diagonal in a trailing classical register.
    QuantumClassicalSymmetric,
}

/// Map `S` whose image (after tracing `R`) is the feasible set.
#[derive(Debug, Clone)]
pub enum Symmetrizer {
    /// States supported on the column span of an isometry `basis`.
    Subspace { basis: CMatrix },
    /// Group twirl, optionally followed by dephasing of a trailing register of
    /// dimension `dephase_dim` (which must commute with the twirl).
    Twirl { unitaries: Vec<CMatrix>, dephase_dim: Option<usize> },
}

impl Symmetrizer {
    fn dim(&self) -> usize {
        match self {
            Symmetrizer::Subspace { basis } => basis.nrows(),
            Symmetrizer::Twirl { unitaries, .. } => unitaries[0].nrows(),
        }
    }

    /// Dimension of the space of generating states `x` with `omega = embed(x)`.
    fn factor_dim(&self) -> usize {
        match self {
            Symmetrizer::Subspace { basis } => basis.ncols(),
            Symmetrizer::Twirl { unitaries, .. } => unitaries[0].nrows(),
        }
    }

    /// Applies `S` (self-adjoint for the twirl variant) to a matrix.
    fn apply(&self, m: &CMatrix) -> CMatrix {
        match self {
            Symmetrizer::Subspace { basis } => {
                let p = basis * basis.adjoint();
                &p * m * &p
            }
            Symmetrizer::Twirl { unitaries, dephase_dim } => {
                let t = groups::twirl_mat(unitaries, m);
                match dephase_dim {
                    Some(dx) => dephase_tail(&t, *dx),
                    None => t,
                }
            }
        }
    }

    /// Maps a generating state `x` to the feasible extension `omega`.
    fn embed(&self, x: &CMatrix) -> CMatrix {
        match self {
            Symmetrizer::Subspace { basis } => basis * x * basis.adjoint(),
            Symmetrizer::Twirl { .. } => self.apply(x),
        }
    }

    /// Adjoint of [`Self::embed`], applied to a Hermitian operator.
    fn lift(&self, h: &CMatrix) -> CMatrix {
        let m = match self {
            Symmetrizer::Subspace { basis } => basis.adjoint() * h * basis,
            Symmetrizer::Twirl { .. } => self.apply(h),
        };
        hermitian_part(&m)
    }
}

fn dephase_tail(m: &CMatrix, dx: usize) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        if i % dx == j % dx {
            m[(i, j)]
        } else {
            c(0.0, 0.0)
        }
    })
}

/// Maximise `F(rho, sigma)` over `sigma = Tr_R[S(omega)]`.
#[derive(Debug, Clone)]
pub struct ConstrainedFidelityProblem {
    pub kind: SetKind,
    pub rho: DensityMatrix,
    pub symmetrizer: Symmetrizer,
    /// Dimension of the traced register `R` (1 when absent).
    pub traced_dim: usize,
}

impl ConstrainedFidelityProblem {
    fn build(kind: SetKind, rho: &DensityMatrix, symmetrizer: Symmetrizer, traced_dim: usize) -> Result<Self> {
        let d = symmetrizer.dim();
        if d != rho.dim() * traced_dim {
            return Err(Error::RegisterMismatch(format!(
                "feasible set acts on dimension {d}, state has {} and the extension {traced_dim}",
                rho.dim()
            )));
        }
        if let Symmetrizer::Subspace { basis } = &symmetrizer {
            if basis.ncols() == 0 {
                return Err(Error::InvalidGroup("empty symmetric subspace".into()));
            }
        }
        Ok(Self { kind, rho: rho.clone(), symmetrizer, traced_dim })
    }

    /// States supported on the range of a projector `pi` acting on `S ⊗ R`.
    pub fn from_projector(kind: SetKind, rho: &DensityMatrix, pi: &CMatrix, traced_dim: usize) -> Result<Self> {
        let basis = range_basis(pi, 0.5);
        Self::build(kind, rho, Symmetrizer::Subspace { basis }, traced_dim)
    }

    /// States invariant under conjugation by `unitaries` on `S ⊗ R`.
    pub fn from_unitaries(kind: SetKind, rho: &DensityMatrix, unitaries: Vec<CMatrix>, traced_dim: usize) -> Result<Self> {
        Self::build(kind, rho, Symmetrizer::Twirl { unitaries, dephase_dim: None }, traced_dim)
    }

    /// Bose-symmetric set of a representation.
    pub fn bose_symmetric(rho: &DensityMatrix, rep: &GroupRep) -> Result<Self> {
        let pi = groups::group_projector(rep)?;
        Self::from_projector(SetKind::BoseSymmetric, rho, &pi, 1)
    }

    /// Symmetric set of a representation.
    pub fn symmetric(rho: &DensityMatrix, rep: &GroupRep) -> Result<Self> {
        Self::from_unitaries(SetKind::Symmetric, rho, rep.unitaries.clone(), 1)
    }

    /// Bose-symmetric extendible set; `rep` acts on `S ⊗ R` with `S` leading.
    pub fn bose_extendible(rho: &DensityMatrix, rep: &GroupRep) -> Result<Self> {
        let pi = groups::group_projector(rep)?;
        let traced = rep.dim() / rho.dim().max(1);
        Self::from_projector(SetKind::BoseExtendible, rho, &pi, traced)
    }

    /// Symmetric extendible set; `rep` acts on `S ⊗ R` with `S` leading.
    pub fn symmetric_extendible(rho: &DensityMatrix, rep: &GroupRep) -> Result<Self> {
        let traced = rep.dim() / rho.dim().max(1);
        Self::from_unitaries(SetKind::SymmetricExtendible, rho, rep.unitaries.clone(), traced)
    }

    /// Symmetric states that are block diagonal in a trailing classical register
    /// of dimension `classical_dim`.
    pub fn quantum_classical(rho: &DensityMatrix, unitaries: Vec<CMatrix>, classical_dim: usize) -> Result<Self> {
        Self::build(
            SetKind::QuantumClassicalSymmetric,
            rho,
            Symmetrizer::Twirl { unitaries, dephase_dim: Some(classical_dim) },
            1,
        )
    }

    /// Same problem expressed in the basis `w` (`rho -> w rho w^dagger`,
    /// `U -> (w ⊗ I) U (w ⊗ I)^dagger`). Fidelities are unchanged; a basis that
    /// block-diagonalises the representation makes the structure explicit.
    pub fn in_basis(&self, w: &CMatrix) -> Result<Self> {
        if w.nrows() != self.rho.dim() || !qmath::is_unitary(w, 1e-10) {
            return Err(Error::NotUnitary("change of basis".into()));
        }
        let rho = DensityMatrix::with_tol(w * self.rho.mat() * w.adjoint(), 1e-9)?;
        let big = kron(w, &identity(self.traced_dim));
        let symmetrizer = match &self.symmetrizer {
            Symmetrizer::Subspace { basis } => Symmetrizer::Subspace { basis: &big * basis },
            Symmetrizer::Twirl { unitaries, dephase_dim } => Symmetrizer::Twirl {
                unitaries: unitaries.iter().map(|u| &big * u * big.adjoint()).collect(),
                dephase_dim: *dephase_dim,
            },
        };
        Ok(Self { kind: self.kind, rho, symmetrizer, traced_dim: self.traced_dim })
    }

    fn system_dim(&self) -> usize {
        self.rho.dim()
    }

    /// Feasible `sigma` generated by an unnormalised extension `omega`.
    pub fn feasible_from(&self, omega: &CMatrix) -> CMatrix {
        let s = self.symmetrizer.apply(omega);
        let s = trace_tail(&s, self.system_dim(), self.traced_dim);
        let tr = trace_re(&s);
        hermitian_part(&s.unscale(tr))
    }

    /// Feasible `sigma` generated by an unnormalised generating state `x`.
    fn sigma_of(&self, x: &CMatrix) -> CMatrix {
        let s = trace_tail(&self.symmetrizer.embed(x), self.system_dim(), self.traced_dim);
        let tr = trace_re(&s);
        hermitian_part(&s.unscale(tr))
    }

    /// A feasible point: the image of the maximally mixed state.
    pub fn center(&self) -> CMatrix {
        self.sigma_of(&identity(self.symmetrizer.factor_dim()))
    }

    /// `S^dagger(G ⊗ I_R)` in generating coordinates.
    fn lift_gradient(&self, g: &CMatrix) -> CMatrix {
        self.symmetrizer.lift(&kron(g, &identity(self.traced_dim)))
    }

    /// Linear maximisation oracle: the feasible `sigma` maximising `Tr[G sigma]`.
    pub fn linear_oracle(&self, g: &CMatrix) -> CMatrix {
        let (_, v) = top_eigvec(&self.lift_gradient(g));
        self.sigma_of(&qmath::outer(&v))
    }

    /// Largest entry of `S(sigma) - sigma` for sets without an extension
    /// (zero for members); extendible sets always report zero.
    pub fn membership_residual(&self, sigma: &CMatrix) -> f64 {
        match (&self.symmetrizer, self.traced_dim) {
            (Symmetrizer::Subspace { basis }, 1) => {
                let p = basis * basis.adjoint();
                qmath::max_abs_diff(&(&p * sigma * &p), sigma)
            }
            (Symmetrizer::Twirl { .. }, 1) => qmath::max_abs_diff(&self.symmetrizer.apply(sigma), sigma),
            _ => 0.0,
        }
    }
}

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Budget of Frank-Wolfe iterations.
    pub max_iterations: usize,
    pub gap_tol: f64,
    /// Mixing weight of `I/d` in `sigma` during gradient evaluation only.
    pub epsilon: f64,
    /// Frank-Wolfe iterations before switching to the factorised refinement.
    pub refine_after: usize,
    /// Iteration budget of each refinement run.
    pub refine_iterations: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iterations: 50_000, gap_tol: 1e-7, epsilon: 1e-9, refine_after: 200, refine_iterations: 3_000 }
    }
}

/// Solver output.
#[derive(Debug, Clone)]
pub struct OptReport {
    /// Fidelity `F(rho, sigma_star)`.
    pub value: f64,
    pub sigma_star: DensityMatrix,
    /// Frank-Wolfe plus refinement iterations.
    pub iterations: usize,
    /// Upper bound on `optimum - value` implied by the final Frank-Wolfe gap.
    pub gap: f64,
    pub converged: bool,
}

/// Root fidelity and its gradient in the frame spanned by the feasible set.
struct Objective<'a> {
    problem: &'a ConstrainedFidelityProblem,
    /// Isometry onto the common support of all feasible states.
    frame: CMatrix,
    /// Compressed `rho = F F^dagger`, restricted to its support.
    factor: CMatrix,
    rho: CMatrix,
    epsilon: f64,
}

impl<'a> Objective<'a> {
    fn new(problem: &'a ConstrainedFidelityProblem, epsilon: f64) -> Self {
        // Every feasible state is supported inside the support of the centre.
        // Working in those coordinates keeps the regularised gradient from
        // pointing out of the feasible set.
        let frame = range_basis(&problem.center(), 1e-10);
        let rho = hermitian_part(&(frame.adjoint() * problem.rho.mat() * &frame));
        let factor = qmath::support_factor(&rho);
        Self { problem, frame, factor, rho, epsilon }
    }

    fn compress(&self, m: &CMatrix) -> CMatrix {
        hermitian_part(&(self.frame.adjoint() * m * &self.frame))
    }

    fn root(&self, sigma: &CMatrix) -> f64 {
        root_fidelity_mat(&self.rho, &self.compress(sigma))
    }

    /// `d sqrt F / d sigma = (1/2) F (F^dagger sigma F)^{-1/2} F^dagger` at the
    /// regularised `sigma`, expressed in the full space.
    fn gradient(&self, sigma: &CMatrix) -> CMatrix {
        let k = self.frame.ncols();
        let reg = self.compress(sigma).scale(1.0 - self.epsilon) + identity(k).scale(self.epsilon / k as f64);
        let a = hermitian_part(&(self.factor.adjoint() * reg * &self.factor));
        let inv_sqrt = qmath::hermitian_fn(&a, |x| if x > 1e-300 { 1.0 / x.sqrt() } else { 0.0 });
        let g = (&self.factor * inv_sqrt * self.factor.adjoint()).scale(0.5);
        &self.frame * g * self.frame.adjoint()
    }

    /// Frank-Wolfe gap `max_s Tr[G (s - sigma)]` and the maximising atom.
    fn gap(&self, sigma: &CMatrix) -> (f64, CMatrix, CMatrix) {
        let g = self.gradient(sigma);
        let (top, v) = top_eigvec(&self.problem.lift_gradient(&g));
        let atom = qmath::outer(&v);
        (top - qmath::trace_prod_re(&g, sigma), atom, g)
    }
}

/// Frank-Wolfe state: generating state `x` and its image `sigma`.
struct Iterate {
    x: CMatrix,
    sigma: CMatrix,
    root: f64,
    gap: f64,
}

/// Runs up to `budget` Frank-Wolfe steps; returns the number taken.
fn frank_wolfe(obj: &Objective, it: &mut Iterate, budget: usize, tol: f64) -> usize {
    let mut steps = 0;
    loop {
        let (gap, atom, _) = obj.gap(&it.sigma);
        it.gap = gap;
        if gap < tol || steps >= budget {
            return steps;
        }
        steps += 1;
        let sigma_dir = obj.problem.sigma_of(&atom) - &it.sigma;
        let (step, val) = golden_max(|t| obj.root(&(&it.sigma + sigma_dir.scale(t))));
        if step == 0.0 || val < it.root {
            // The regularised gradient promises ascent that the exact objective
            // does not deliver; the gap stays as the accuracy bound.
            return steps;
        }
        it.x = hermitian_part(&(&it.x + (&atom - &it.x).scale(step)));
        it.sigma = hermitian_part(&(&it.sigma + sigma_dir.scale(step)));
        it.root = val;
    }
}

/// Unconstrained parametrisation `x = Y Y^dagger / Tr[Y Y^dagger]`, refined by
/// L-BFGS. With square `Y` every local maximum is global.
struct Factorised<'a, 'b> {
    obj: &'b Objective<'a>,
    m: usize,
}

impl Factorised<'_, '_> {
    fn unpack(&self, p: &[f64]) -> CMatrix {
        let m = self.m;
        CMatrix::from_fn(m, m, |i, j| c(p[i + m * j], p[m * m + i + m * j]))
    }

    fn pack(&self, y: &CMatrix) -> Vec<f64> {
        let mut p: Vec<f64> = y.iter().map(|z| z.re).collect();
        p.extend(y.iter().map(|z| z.im));
        p
    }

    fn state(&self, p: &[f64]) -> (CMatrix, CMatrix, f64) {
        let y = self.unpack(p);
        let x = &y * y.adjoint();
        let t = trace_re(&x);
        let sigma = self.obj.problem.sigma_of(&x);
        (y, sigma, t)
    }
}

impl CostFunction for Factorised<'_, '_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> std::result::Result<f64, argmin::core::Error> {
        let (_, sigma, _) = self.state(p);
        Ok(-self.obj.root(&sigma))
    }
}

impl ArgminGradient for Factorised<'_, '_> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, p: &Self::Param) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        let (y, sigma, t) = self.state(p);
        let g = self.obj.gradient(&sigma);
        let shift = qmath::trace_prod_re(&g, &sigma);
        let a = self.obj.problem.lift_gradient(&g) - identity(self.m).scale(shift);
        Ok(self.pack(&(a * y).scale(-2.0 / t)))
    }
}

fn refine(obj: &Objective, it: &Iterate, iterations: u64) -> Option<(Iterate, u64)> {
    let f = Factorised { obj, m: it.x.nrows() };
    let init = f.pack(&qmath::psd_sqrt(&it.x));
    let solver = LBFGS::new(MoreThuenteLineSearch::new(), 10)
        .with_tolerance_grad(1e-13)
        .ok()?
        .with_tolerance_cost(0.0)
        .ok()?;
    let res = Executor::new(Factorised { obj, m: f.m }, solver)
        .configure(|s| s.param(init).max_iters(iterations))
        .run()
        .ok()?;
    let state = res.state();
    let best = state.get_best_param()?;
    let (y, sigma, t) = f.state(best);
    let x = (&y * y.adjoint()).unscale(t);
    let root = obj.root(&sigma);
    let gap = obj.gap(&sigma).0;
    Some((Iterate { x: hermitian_part(&x), sigma, root, gap }, state.get_iter()))
}

fn golden_max(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (0.0f64, 1.0f64);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..60 {
        if b - a < 1e-12 {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    let candidates = [(0.0, f(0.0)), (1.0, f(1.0)), ((a + b) / 2.0, f((a + b) / 2.0))];
    candidates.into_iter().fold((0.0, f64::MIN), |best, cand| if cand.1 > best.1 { cand } else { best })
}

/// Maximum fidelity between `problem.rho` and the feasible set.
///
/// Frank-Wolfe steps run first. When the gap is still open after
/// `refine_after` steps (typical when the optimal extension is rank
/// deficient), a factorised L-BFGS refinement takes over and Frank-Wolfe
/// resumes from its result. Convergence is always judged by the Frank-Wolfe
/// gap. Returns an error only when the budget runs out with a gap above
/// `1e-5`; smaller residual gaps are reported with `converged = false`.
pub fn max_symmetric_fidelity(problem: &ConstrainedFidelityProblem, opts: SolverOptions) -> Result<OptReport> {
    let obj = Objective::new(problem, opts.epsilon);
    let m = problem.symmetrizer.factor_dim();
    let x = identity(m).unscale(m as f64);
    let sigma = problem.sigma_of(&x);
    if obj.factor.ncols() == 0 {
        // `rho` is orthogonal to every feasible state.
        let sigma_star = DensityMatrix::with_tol(sigma, 1e-8)?;
        return Ok(OptReport { value: 0.0, sigma_star, iterations: 0, gap: 0.0, converged: true });
    }
    let root = obj.root(&sigma);
    let mut it = Iterate { x, sigma, root, gap: f64::INFINITY };
    let mut iterations = frank_wolfe(&obj, &mut it, opts.refine_after.min(opts.max_iterations), opts.gap_tol);
    let mut refinements = 0;
    while it.gap >= opts.gap_tol && iterations < opts.max_iterations && refinements < 3 {
        refinements += 1;
        if let Some((better, n)) = refine(&obj, &it, opts.refine_iterations) {
            iterations += n as usize;
            if better.root >= it.root || better.gap < it.gap {
                it = better;
            }
        }
        let budget = opts.refine_after.min(opts.max_iterations.saturating_sub(iterations));
        iterations += frank_wolfe(&obj, &mut it, budget, opts.gap_tol);
    }
    if it.gap >= opts.gap_tol && iterations < opts.max_iterations {
        let budget = opts.max_iterations - iterations;
        iterations += frank_wolfe(&obj, &mut it, budget, opts.gap_tol);
    }
    let gap = it.gap.max(0.0);
    let converged = gap < opts.gap_tol;
    if !converged && gap > 1e-5 {
        return Err(Error::NotConverged { gap, iterations });
    }
    let value = it.root.powi(2).clamp(0.0, 1.0);
    let bound_gap = ((it.root + gap).min(1.0).powi(2) - value).max(0.0);
    let sigma_star = DensityMatrix::with_tol(it.sigma, 1e-8)?;
    Ok(OptReport { value, sigma_star, iterations, gap: bound_gap, converged })
}

/// Solves with default options.
pub fn solve(problem: &ConstrainedFidelityProblem) -> Result<OptReport> {
    max_symmetric_fidelity(problem, SolverOptions::default())
}

/// Independent lower bound: best fidelity over randomly sampled feasible
/// states, refined by a seeded random local search. Limited to total
/// dimension 16.
pub fn brute_force_fidelity_bound(problem: &ConstrainedFidelityProblem, samples: usize, seed: u64) -> Result<f64> {
    let dim = problem.symmetrizer.dim();
    if dim > 16 {
        return Err(Error::InvalidConfig(format!("brute force limited to dimension 16, got {dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rho = problem.rho.mat();
    let gauss = |rng: &mut ChaCha8Rng| -> CMatrix {
        CMatrix::from_fn(dim, dim, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
    };
    let value_of = |y: &CMatrix| -> f64 {
        let omega = y * y.adjoint();
        fidelity_mat(rho, &problem.feasible_from(&omega))
    };
    let global = samples / 2;
    let mut best_y = gauss(&mut rng);
    let mut best = value_of(&best_y);
    for k in 0..global {
        // Vary the rank so that pure and mixed candidates are both explored.
        let rank = 1 + k % dim;
        let mut y = gauss(&mut rng);
        for j in rank..dim {
            for i in 0..dim {
                y[(i, j)] = c(0.0, 0.0);
            }
        }
        let v = value_of(&y);
        if v > best {
            best = v;
            best_y = y;
        }
    }
    let mut step = 0.3;
    for _ in global..samples {
        let norm = best_y.norm();
        let cand = &best_y + gauss(&mut rng).scale(step * norm / (dim as f64));
        let v = value_of(&cand);
        if v > best {
            best = v;
            best_y = cand;
            step *= 1.5;
        } else {
            step = (step * 0.93).max(1e-6);
        }
    }
    Ok(best)
}

/// Lower bound `F(rho, T(rho))` for the symmetric set, since the twirled
/// state is itself symmetric.
pub fn twirl_lower_bound(problem: &ConstrainedFidelityProblem) -> Result<f64> {
    match (&problem.symmetrizer, problem.kind) {
        (Symmetrizer::Twirl { .. }, SetKind::Symmetric) => {
            let t = problem.symmetrizer.apply(problem.rho.mat());
            Ok(fidelity_mat(problem.rho.mat(), &t))
        }
        _ => Err(Error::InvalidConfig("twirl bound applies to the symmetric set only".into())),
    }
}

/// Exact value of the Bose-symmetric problem, `Tr[Pi rho]`.
pub fn bose_closed_form(rho: &DensityMatrix, pi: &CMatrix) -> f64 {
    qmath::trace_prod_re(pi, rho.mat()).clamp(0.0, 1.0)
}
