//! Statevector and density-matrix execution of small circuits.
//!
//! Qubit 0 is the most significant bit of a basis index. Gates are applied by
//! index arithmetic on the amplitude array; no full `2^n x 2^n` gate matrix is
//! ever built. Density matrices are evolved as vectors on `2n` qubits, with
//! the row index on the first `n` and the column index on the last `n`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::groups::GroupRep;
use crate::qmath::{
    self, complex_conjugate, cr, gates, is_projector, is_unitary, kron, CMatrix, CVector,
    DensityMatrix, PureState, C64, MAX_DIM, TOL_CONSTRUCT,
};

/// Controlled representation: applies `U(g)` (and optionally `conj(U(g))` on a
/// second register) whenever the control register holds the basis state of `g`.
#[derive(Debug, Clone)]
pub struct ControlledGroup {
    /// Name of the representation, for display only.
    pub rep_name: String,
    /// Control register qubits, most significant first.
    pub control: Vec<usize>,
    /// Qubits acted on by `U(g)` followed by those acted on by `conj(U(g))`.
    pub targets: Vec<usize>,
    /// Whether the conjugate copy is present.
    pub conjugated: bool,
    /// `(control basis state, block unitary on targets)` pairs.
    pub blocks: Vec<(usize, CMatrix)>,
}

impl ControlledGroup {
    /// Builds the controlled gate for `rep`.
    ///
    /// With `conjugated` set, `conj_targets` receives `conj(U(g))` and must
    /// have the same width as `targets`.
    pub fn new(
        rep: &GroupRep,
        control: Vec<usize>,
        targets: Vec<usize>,
        conj_targets: Option<Vec<usize>>,
    ) -> Result<Self> {
        if control.len() != rep.control_qubits {
            return Err(Error::RegisterMismatch(format!(
                "{} needs {} control qubits, got {}",
                rep.name,
                rep.control_qubits,
                control.len()
            )));
        }
        if targets.len() != rep.system_qubits {
            return Err(Error::RegisterMismatch(format!(
                "{} acts on {} qubits, got {}",
                rep.name,
                rep.system_qubits,
                targets.len()
            )));
        }
        let conjugated = conj_targets.is_some();
        let mut all_targets = targets;
        if let Some(ct) = conj_targets {
            if ct.len() != rep.system_qubits {
                return Err(Error::RegisterMismatch(format!(
                    "conjugate register of {} needs {} qubits, got {}",
                    rep.name,
                    rep.system_qubits,
                    ct.len()
                )));
            }
            all_targets.extend(ct);
        }
        let blocks = rep
            .unitaries
            .iter()
            .zip(&rep.control_map)
            .map(|(u, &cstate)| {
                let m = if conjugated { kron(u, &complex_conjugate(u)) } else { u.clone() };
                (cstate, m)
            })
            .collect();
        Ok(Self { rep_name: rep.name.clone(), control, targets: all_targets, conjugated, blocks })
    }

    /// Full unitary on `(control, targets)` in that qubit order. Unmapped
    /// control states get identity blocks.
    pub fn matrix(&self) -> CMatrix {
        let dc = 1usize << self.control.len();
        let dt = 1usize << self.targets.len();
        let mut m = CMatrix::identity(dc * dt, dc * dt);
        for (cstate, block) in &self.blocks {
            let off = cstate * dt;
            m.view_mut((off, off), (dt, dt)).copy_from(block);
        }
        m
    }
}

/// A single circuit instruction.
#[derive(Debug, Clone)]
pub enum Gate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
    Ry(usize, f64),
    Rz(usize, f64),
    /// Arbitrary unitary on the listed qubits (first listed = most significant).
    Unitary { qubits: Vec<usize>, matrix: Arc<CMatrix> },
    ControlledGroup(Arc<ControlledGroup>),
}

impl Gate {
    /// Arbitrary-unitary gate, validated to `1e-10`.
    pub fn unitary(qubits: Vec<usize>, matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != 1 << qubits.len() || !is_unitary(&matrix, TOL_CONSTRUCT) {
            return Err(Error::NotUnitary(format!(
                "{}x{} matrix on {} qubits",
                matrix.nrows(),
                matrix.ncols(),
                qubits.len()
            )));
        }
        Ok(Gate::Unitary { qubits, matrix: Arc::new(matrix) })
    }

    /// Qubits the gate touches, in matrix order.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::Ry(q, _) | Gate::Rz(q, _) => {
                vec![*q]
            }
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::Unitary { qubits, .. } => qubits.clone(),
            Gate::ControlledGroup(cg) => cg.control.iter().chain(&cg.targets).copied().collect(),
        }
    }

    /// Matrix of the gate on [`Gate::qubits`].
    pub fn matrix(&self) -> CMatrix {
        match self {
            Gate::H(_) => gates::h(),
            Gate::X(_) => gates::x(),
            Gate::Y(_) => gates::y(),
            Gate::Z(_) => gates::z(),
            Gate::Cnot { .. } => gates::cnot(),
            Gate::Swap(..) => gates::swap(),
            Gate::Ry(_, t) => gates::ry(*t),
            Gate::Rz(_, t) => gates::rz(*t),
            Gate::Unitary { matrix, .. } => (**matrix).clone(),
            Gate::ControlledGroup(cg) => cg.matrix(),
        }
    }

    /// Same gate with every qubit index passed through `map`.
    pub fn remapped(&self, map: &dyn Fn(usize) -> usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(map(*q)),
            Gate::X(q) => Gate::X(map(*q)),
            Gate::Y(q) => Gate::Y(map(*q)),
            Gate::Z(q) => Gate::Z(map(*q)),
            Gate::Ry(q, t) => Gate::Ry(map(*q), *t),
            Gate::Rz(q, t) => Gate::Rz(map(*q), *t),
            Gate::Cnot { control, target } => Gate::Cnot { control: map(*control), target: map(*target) },
            Gate::Swap(a, b) => Gate::Swap(map(*a), map(*b)),
            Gate::Unitary { qubits, matrix } => Gate::Unitary {
                qubits: qubits.iter().map(|&q| map(q)).collect(),
                matrix: matrix.clone(),
            },
            Gate::ControlledGroup(cg) => {
                let mut cg2 = (**cg).clone();
                cg2.control = cg.control.iter().map(|&q| map(q)).collect();
                cg2.targets = cg.targets.iter().map(|&q| map(q)).collect();
                Gate::ControlledGroup(Arc::new(cg2))
            }
        }
    }

    /// Inverse gate.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Ry(q, t) => Gate::Ry(*q, -t),
            Gate::Rz(q, t) => Gate::Rz(*q, -t),
            Gate::Unitary { qubits, matrix } => {
                Gate::Unitary { qubits: qubits.clone(), matrix: Arc::new(matrix.adjoint()) }
            }
            Gate::ControlledGroup(cg) => {
                let mut cg2 = (**cg).clone();
                cg2.blocks = cg.blocks.iter().map(|(s, b)| (*s, b.adjoint())).collect();
                Gate::ControlledGroup(Arc::new(cg2))
            }
            other => other.clone(),
        }
    }
}

/// Contiguous named range of qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Register {
    /// Qubit indices of the register.
    pub fn qubits(&self) -> Vec<usize> {
        (self.start..self.start + self.len).collect()
    }
}

/// Ordered gate list over a fixed number of qubits.
#[derive(Debug, Clone, Default)]
pub struct Circuit {
    num_qubits: usize,
    registers: Vec<Register>,
    gates: Vec<Gate>,
}

impl Circuit {
    /// Empty circuit on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, registers: Vec::new(), gates: Vec::new() }
    }

    /// Empty circuit laid out from `(name, width)` registers in order.
    pub fn with_registers(layout: &[(&str, usize)]) -> Self {
        let mut c = Self::new(0);
        for (name, len) in layout {
            c.add_register(name, *len);
        }
        c
    }

    /// Appends a register after the existing qubits and returns it.
    pub fn add_register(&mut self, name: &str, len: usize) -> Register {
        let reg = Register { name: name.to_string(), start: self.num_qubits, len };
        self.num_qubits += len;
        self.registers.push(reg.clone());
        reg
    }

    /// Register by name.
    pub fn register(&self, name: &str) -> Option<&Register> {
        self.registers.iter().find(|r| r.name == name)
    }

    /// All registers.
    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    /// Number of qubits.
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Gates in order.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Appends a gate after checking its qubit indices.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qs = gate.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::QubitOutOfRange { index: q, num_qubits: self.num_qubits });
            }
            if qs[..i].contains(&q) {
                return Err(Error::RepeatedQubit(q));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends every gate of `other`, mapping its qubit `i` to `qubits[i]`.
    pub fn append_mapped(&mut self, other: &Circuit, qubits: &[usize]) -> Result<()> {
        if qubits.len() != other.num_qubits {
            return Err(Error::RegisterMismatch(format!(
                "sub-circuit has {} qubits, mapping lists {}",
                other.num_qubits,
                qubits.len()
            )));
        }
        for g in &other.gates {
            self.push(g.remapped(&|q| qubits[q]))?;
        }
        Ok(())
    }

    /// Circuit implementing the inverse unitary.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            registers: self.registers.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Dense unitary of the whole circuit (intended for small circuits and tests).
    pub fn unitary(&self) -> CMatrix {
        let d = 1usize << self.num_qubits;
        let mut m = CMatrix::zeros(d, d);
        for col in 0..d {
            let mut v = vec![C64::new(0.0, 0.0); d];
            v[col] = cr(1.0);
            for g in &self.gates {
                apply_gate(&mut v, self.num_qubits, g);
            }
            for (r, a) in v.into_iter().enumerate() {
                m[(r, col)] = a;
            }
        }
        m
    }
}

/// Per-gate depolarizing noise on the qubits each gate touches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    p: f64,
}

impl NoiseModel {
    /// Depolarizing probability `p` in `[0, 1)`.
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::InvalidConfig(format!("depolarizing probability {p} outside [0, 1)")));
        }
        Ok(Self { p })
    }

    /// The depolarizing probability.
    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Input to a circuit run.
#[derive(Debug, Clone)]
pub enum CircuitInput {
    Pure(PureState),
    Mixed(DensityMatrix),
}

fn bit_pos(n: usize, q: usize) -> usize {
    n - 1 - q
}

/// Applies a `k`-qubit matrix to `qubits` of an `n`-qubit amplitude array,
/// restricted to indices where `(idx & ctrl_mask) == ctrl_val`.
fn apply_matrix_masked(
    state: &mut [C64],
    n: usize,
    qubits: &[usize],
    m: &CMatrix,
    ctrl_mask: usize,
    ctrl_val: usize,
) {
    let k = qubits.len();
    let dk = 1usize << k;
    let offsets: Vec<usize> = (0..dk)
        .map(|j| {
            (0..k)
                .filter(|&i| (j >> (k - 1 - i)) & 1 == 1)
                .map(|i| 1usize << bit_pos(n, qubits[i]))
                .sum()
        })
        .collect();
    let qmask: usize = offsets[dk - 1];
    let mut buf = vec![C64::new(0.0, 0.0); dk];
    for base in 0..state.len() {
        if base & qmask != 0 || base & ctrl_mask != ctrl_val {
            continue;
        }
        for j in 0..dk {
            buf[j] = state[base + offsets[j]];
        }
        for r in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..dk {
                acc += m[(r, j)] * buf[j];
            }
            state[base + offsets[r]] = acc;
        }
    }
}

fn apply_single(state: &mut [C64], n: usize, q: usize, m: &CMatrix) {
    let bit = 1usize << bit_pos(n, q);
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    for i in 0..state.len() {
        if i & bit == 0 {
            let x = state[i];
            let y = state[i | bit];
            state[i] = a * x + b * y;
            state[i | bit] = c * x + d * y;
        }
    }
}

fn apply_gate_with(state: &mut [C64], n: usize, g: &Gate, conj: bool) {
    let fix = |m: CMatrix| if conj { complex_conjugate(&m) } else { m };
    match g {
        Gate::H(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::Ry(q, _) | Gate::Rz(q, _) => {
            apply_single(state, n, *q, &fix(g.matrix()))
        }
        Gate::Cnot { control, target } => {
            let cb = 1usize << bit_pos(n, *control);
            let tb = 1usize << bit_pos(n, *target);
            for i in 0..state.len() {
                if i & cb != 0 && i & tb == 0 {
                    state.swap(i, i | tb);
                }
            }
        }
        Gate::Swap(a, b) => {
            let ab = 1usize << bit_pos(n, *a);
            let bb = 1usize << bit_pos(n, *b);
            for i in 0..state.len() {
                if i & ab != 0 && i & bb == 0 {
                    state.swap(i, (i & !ab) | bb);
                }
            }
        }
        Gate::Unitary { qubits, matrix } => {
            let m = if conj { complex_conjugate(matrix) } else { (**matrix).clone() };
            apply_matrix_masked(state, n, qubits, &m, 0, 0);
        }
        Gate::ControlledGroup(cg) => {
            let kc = cg.control.len();
            let ctrl_mask: usize = cg.control.iter().map(|&q| 1usize << bit_pos(n, q)).sum();
            for (cstate, block) in &cg.blocks {
                let ctrl_val: usize = (0..kc)
                    .filter(|&i| (cstate >> (kc - 1 - i)) & 1 == 1)
                    .map(|i| 1usize << bit_pos(n, cg.control[i]))
                    .sum();
                let m = if conj { complex_conjugate(block) } else { block.clone() };
                apply_matrix_masked(state, n, &cg.targets, &m, ctrl_mask, ctrl_val);
            }
        }
    }
}

fn apply_gate(state: &mut [C64], n: usize, g: &Gate) {
    apply_gate_with(state, n, g, false);
}

/// Replaces qubit `q` of a vectorised `n`-qubit density matrix by `I/2`.
fn depolarize_qubit_fully(state: &mut [C64], n: usize, q: usize) {
    let rb = 1usize << bit_pos(2 * n, q);
    let cb = 1usize << bit_pos(2 * n, n + q);
    for i in 0..state.len() {
        if i & rb == 0 && i & cb == 0 {
            let avg = (state[i] + state[i | rb | cb]) * 0.5;
            state[i] = avg;
            state[i | rb | cb] = avg;
            state[i | rb] = C64::new(0.0, 0.0);
            state[i | cb] = C64::new(0.0, 0.0);
        }
    }
}

fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(qmath::QmathError::DimensionMismatch(format!(
            "circuit expects dimension {expected}, input has {got}"
        ))
        .into());
    }
    Ok(())
}

/// Runs a circuit on a pure input.
pub fn run_statevector(c: &Circuit, input: &PureState) -> Result<PureState> {
    let n = c.num_qubits();
    check_dim(1 << n, input.dim())?;
    let mut v: Vec<C64> = input.amplitudes().iter().copied().collect();
    for g in c.gates() {
        apply_gate(&mut v, n, g);
    }
    Ok(PureState::normalized(CVector::from_vec(v))?)
}

/// Runs a circuit on raw amplitudes in place, without normalisation checks.
pub fn run_in_place(c: &Circuit, amps: &mut [C64]) {
    let n = c.num_qubits();
    for g in c.gates() {
        apply_gate(amps, n, g);
    }
}

/// Runs a circuit on qubits `map` of a larger `n`-qubit amplitude array; circuit
/// qubit `q` is array qubit `map[q]`.
pub fn run_mapped(c: &Circuit, amps: &mut [C64], n: usize, map: &[usize]) {
    for g in c.gates() {
        apply_gate(amps, n, &g.remapped(&|q| map[q]));
    }
}

/// Applies an arbitrary (not necessarily unitary) operator to `qubits` of an
/// `n`-qubit amplitude array.
pub fn apply_operator(amps: &mut [C64], n: usize, qubits: &[usize], m: &CMatrix) {
    apply_matrix_masked(amps, n, qubits, m, 0, 0);
}

/// Runs a circuit on a density matrix with optional per-gate depolarizing noise.
pub fn run_density(c: &Circuit, input: &DensityMatrix, noise: Option<NoiseModel>) -> Result<DensityMatrix> {
    let n = c.num_qubits();
    let d = 1usize << n;
    check_dim(d, input.dim())?;
    if d * d > MAX_DIM * MAX_DIM / 16 {
        return Err(qmath::QmathError::TooLarge(d).into());
    }
    let mut v: Vec<C64> = Vec::with_capacity(d * d);
    for r in 0..d {
        for col in 0..d {
            v.push(input.mat()[(r, col)]);
        }
    }
    let p = noise.map(|nm| nm.p()).unwrap_or(0.0);
    for g in c.gates() {
        apply_gate_with(&mut v, 2 * n, g, false);
        let shifted = g.remapped(&|q| q + n);
        apply_gate_with(&mut v, 2 * n, &shifted, true);
        if p > 0.0 {
            let mut dep = v.clone();
            for q in g.qubits() {
                depolarize_qubit_fully(&mut dep, n, q);
            }
            for (x, y) in v.iter_mut().zip(dep) {
                *x = *x * (1.0 - p) + y * p;
            }
        }
    }
    let m = CMatrix::from_fn(d, d, |r, col| v[r * d + col]);
    Ok(DensityMatrix::with_tol(m, 1e-8)?)
}

/// Projector `|+><+|_C` for a representation's control register, where
/// `|+>_C` is the uniform superposition over the mapped control states.
pub fn plus_projector(rep: &GroupRep) -> CMatrix {
    let dc = 1usize << rep.control_qubits;
    let amp = 1.0 / (rep.order() as f64).sqrt();
    let mut v = CVector::zeros(dc);
    for &s in &rep.control_map {
        v[s] = cr(amp);
    }
    qmath::outer(&v)
}

/// Applies `P` on `qubits` of an `n`-qubit amplitude array and returns the squared norm.
fn projected_norm_sq(amps: &[C64], n: usize, qubits: &[usize], p: &CMatrix) -> f64 {
    let mut w = amps.to_vec();
    apply_matrix_masked(&mut w, n, qubits, p, 0, 0);
    w.iter().map(|z| z.norm_sqr()).sum()
}

/// Probability that a projective measurement `accept` on the `control`
/// qubits succeeds after running `c` on `input`.
pub fn acceptance_probability(
    c: &Circuit,
    input: &CircuitInput,
    control: &[usize],
    accept: &CMatrix,
    noise: Option<NoiseModel>,
) -> Result<f64> {
    if accept.nrows() != 1 << control.len() || !is_projector(accept, 1e-9) {
        return Err(Error::NotProjector(format!(
            "{}x{} operator on {} control qubits",
            accept.nrows(),
            accept.ncols(),
            control.len()
        )));
    }
    for &q in control {
        if q >= c.num_qubits() {
            return Err(Error::QubitOutOfRange { index: q, num_qubits: c.num_qubits() });
        }
    }
    let n = c.num_qubits();
    let noisy = noise.map(|nm| nm.p() > 0.0).unwrap_or(false);
    let value = match input {
        CircuitInput::Pure(psi) if !noisy => {
            let out = run_statevector(c, psi)?;
            let amps: Vec<C64> = out.amplitudes().iter().copied().collect();
            projected_norm_sq(&amps, n, control, accept)
        }
        other => {
            let rho = match other {
                CircuitInput::Pure(psi) => psi.to_density(),
                CircuitInput::Mixed(r) => r.clone(),
            };
            let out = run_density(c, &rho, noise)?;
            let d = 1usize << n;
            let m = out.mat();
            let mut v: Vec<C64> = (0..d * d).map(|i| m[(i / d, i % d)]).collect();
            apply_matrix_masked(&mut v, 2 * n, control, accept, 0, 0);
            (0..d).map(|i| v[i * d + i].re).sum()
        }
    };
    Ok(value.clamp(0.0, 1.0))
}
