//! Finite groups, their unitary representations, group projectors and twirls.
//!
//! Each [`GroupRep`] carries a control-register layout (which computational
//! basis state of the control register encodes which element) and a
//! preparation circuit producing the uniform superposition over those states.
//! The builtin registry covers the groups used throughout the crate:
//! `z2`, `c3`, `c4`, `d3`, `q8`, `s2`, `s3`, `collective_u` and
//! `collective_phase_n2`, plus `product(a, b, ...)` compositions.

use std::f64::consts::{FRAC_PI_3, PI};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::qmath::{
    self, c, complex_conjugate, cr, gates, identity, is_projector, is_unitary, kron, kron_all,
    max_abs_diff, CMatrix, CVector, DensityMatrix, PureState, TOL_CONSTRUCT,
};
use crate::simulator::{run_statevector, Circuit, Gate};

/// Abstract finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates a multiplication table where `table[g][h]` is the index of `g h`
    /// and element 0 is the identity.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = names.len();
        if n == 0 || table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidGroup("table must be square with one row per element".into()));
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(Error::InvalidGroup(format!("element 0 is not an identity for {}", names[g])));
            }
        }
        for i in 0..n {
            let row: Vec<usize> = table[i].iter().copied().sorted().collect();
            let col: Vec<usize> = (0..n).map(|j| table[j][i]).sorted().collect();
            if row != (0..n).collect::<Vec<_>>() || col != (0..n).collect::<Vec<_>>() {
                return Err(Error::InvalidGroup(format!(
                    "row or column {} is not a permutation (rearrangement theorem)",
                    names[i]
                )));
            }
        }
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for cc in 0..n {
                        if table[table[a][b]][cc] != table[a][table[b][cc]] {
                            return Err(Error::InvalidGroup(format!(
                                "associativity fails on ({}, {}, {})",
                                names[a], names[b], names[cc]
                            )));
                        }
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|g| (0..n).find(|&h| table[g][h] == 0).expect("row is a permutation"))
            .collect();
        Ok(Self { names, table, inverse })
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.names.len()
    }

    /// Element labels.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of the element labelled `name`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Index of the product `g h`.
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    /// Index of the inverse of `g`.
    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    /// Full multiplication table.
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// Unitary representation of a finite group on `system_qubits` qubits, with a
/// control-register encoding for circuit-level tests.
#[derive(Debug, Clone)]
pub struct GroupRep {
    /// Registry name.
    pub name: String,
    /// Abstract group, derived from the unitaries.
    pub group: FiniteGroup,
    /// Number of qubits the unitaries act on.
    pub system_qubits: usize,
    /// `U(g)` per element, in element order.
    pub unitaries: Vec<CMatrix>,
    /// `phases[g][h] = phi` with `U(g) U(h) = e^{i phi} U(gh)`.
    pub phases: Vec<Vec<f64>>,
    /// Width of the control register.
    pub control_qubits: usize,
    /// Control basis state encoding each element.
    pub control_map: Vec<usize>,
    /// Circuit on the control register preparing the uniform superposition.
    pub prep: Circuit,
}

impl GroupRep {
    /// Builds a representation from labelled unitaries. The multiplication
    /// table is recovered by matching products up to a global phase.
    pub fn new(
        name: &str,
        names: Vec<String>,
        unitaries: Vec<CMatrix>,
        control_qubits: usize,
        control_map: Vec<usize>,
        prep: Circuit,
    ) -> Result<Self> {
        let n = unitaries.len();
        if names.len() != n || control_map.len() != n || n == 0 {
            return Err(Error::InvalidGroup(format!("{name}: element, unitary and control lists differ in length")));
        }
        let d = unitaries[0].nrows();
        if !d.is_power_of_two() {
            return Err(Error::InvalidGroup(format!("{name}: dimension {d} is not a power of two")));
        }
        for (u, label) in unitaries.iter().zip(&names) {
            if u.nrows() != d || !is_unitary(u, TOL_CONSTRUCT) {
                return Err(Error::NotUnitary(format!("{name}: U({label})")));
            }
        }
        let mut table = vec![vec![0usize; n]; n];
        let mut phases = vec![vec![0.0; n]; n];
        for g in 0..n {
            for h in 0..n {
                let prod = &unitaries[g] * &unitaries[h];
                let found = (0..n).find_map(|k| phase_match(&prod, &unitaries[k]).map(|ph| (k, ph)));
                match found {
                    Some((k, ph)) => {
                        table[g][h] = k;
                        phases[g][h] = ph;
                    }
                    None => {
                        return Err(Error::InvalidGroup(format!(
                            "{name}: U({})U({}) is not in the set up to phase",
                            names[g], names[h]
                        )))
                    }
                }
            }
        }
        if !max_abs_diff(&unitaries[0], &identity(d)).lt(&TOL_CONSTRUCT) {
            return Err(Error::InvalidGroup(format!("{name}: element 0 must be represented by the identity")));
        }
        let group = FiniteGroup::new(names, table)?;
        let dc = 1usize << control_qubits;
        let mut seen = control_map.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != n || control_map.iter().any(|&s| s >= dc) {
            return Err(Error::InvalidGroup(format!("{name}: control map must be injective into {control_qubits} qubits")));
        }
        if prep.num_qubits() != control_qubits {
            return Err(Error::RegisterMismatch(format!("{name}: preparation circuit width")));
        }
        let rep = Self {
            name: name.to_string(),
            group,
            system_qubits: d.trailing_zeros() as usize,
            unitaries,
            phases,
            control_qubits,
            control_map,
            prep,
        };
        rep.check_prep()?;
        Ok(rep)
    }

    /// Checks that the preparation circuit yields amplitude `1/sqrt|G|` on every
    /// mapped control state and zero elsewhere.
    pub fn check_prep(&self) -> Result<()> {
        let out = run_statevector(&self.prep, &PureState::zero_qubits(self.control_qubits))?;
        let amp = 1.0 / (self.order() as f64).sqrt();
        for (s, a) in out.amplitudes().iter().enumerate() {
            let expected = if self.control_map.contains(&s) { amp } else { 0.0 };
            if (a - cr(expected)).norm() > TOL_CONSTRUCT {
                return Err(Error::InvalidGroup(format!(
                    "{}: preparation amplitude on |{s:0w$b}> is {a}, expected {expected}",
                    self.name,
                    w = self.control_qubits
                )));
            }
        }
        Ok(())
    }

    /// Group order.
    pub fn order(&self) -> usize {
        self.unitaries.len()
    }

    /// Hilbert-space dimension of the representation.
    pub fn dim(&self) -> usize {
        1 << self.system_qubits
    }

    /// True when every cocycle phase vanishes (a genuine representation).
    pub fn is_genuine(&self) -> bool {
        self.phases.iter().flatten().all(|p| p.abs() < 1e-9)
    }

    /// `U(g)` for the element labelled `name`.
    pub fn unitary_of(&self, name: &str) -> Option<&CMatrix> {
        self.group.index_of(name).map(|i| &self.unitaries[i])
    }

    /// Representation `U(g) ⊗ conj(U(g))`, used by the symmetry tests.
    pub fn with_conjugate(&self) -> Vec<CMatrix> {
        self.unitaries.iter().map(|u| kron(u, &complex_conjugate(u))).collect()
    }
}

fn phase_match(a: &CMatrix, b: &CMatrix) -> Option<f64> {
    // Find the phase from the largest entry of b, then compare.
    let (idx, _) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    let (ai, bi) = (a.as_slice()[idx], b.as_slice()[idx]);
    if ai.norm() < 1e-9 {
        return None;
    }
    let ph = (ai / bi).arg();
    let rot = C64Phase(ph).apply(b);
    (max_abs_diff(a, &rot) < 1e-9).then_some(ph)
}

struct C64Phase(f64);
impl C64Phase {
    fn apply(&self, m: &CMatrix) -> CMatrix {
        m.map(|z| z * qmath::C64::from_polar(1.0, self.0))
    }
}

/// Group projector `(1/|G|) sum_g U(g)` for an arbitrary unitary list.
pub fn average(unitaries: &[CMatrix]) -> CMatrix {
    let d = unitaries[0].nrows();
    let sum = unitaries.iter().fold(CMatrix::zeros(d, d), |acc, u| acc + u);
    sum.unscale(unitaries.len() as f64)
}

/// Group projector of a representation; refuses non-idempotent averages.
pub fn group_projector(rep: &GroupRep) -> Result<CMatrix> {
    projector_of(&rep.unitaries, &rep.name)
}

/// Projector from an explicit unitary group, checked to `1e-9`.
pub fn projector_of(unitaries: &[CMatrix], label: &str) -> Result<CMatrix> {
    let p = average(unitaries);
    if !is_projector(&p, 1e-9) {
        return Err(Error::NotProjector(format!(
            "averaged representation of {label} is not idempotent; its projective phases obstruct a Bose test"
        )));
    }
    Ok(qmath::hermitian_part(&p))
}

/// Twirl `(1/|G|) sum_g U(g) m U(g)^dagger` of an arbitrary matrix.
pub fn twirl_mat(unitaries: &[CMatrix], m: &CMatrix) -> CMatrix {
    let d = m.nrows();
    let sum = unitaries
        .iter()
        .fold(CMatrix::zeros(d, d), |acc, u| acc + u * m * u.adjoint());
    sum.unscale(unitaries.len() as f64)
}

/// Twirl of a state under a representation.
pub fn twirl(rep: &GroupRep, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != rep.dim() {
        return Err(qmath::QmathError::DimensionMismatch(format!(
            "{} acts on dimension {}, state has {}",
            rep.name,
            rep.dim(),
            rho.dim()
        ))
        .into());
    }
    Ok(DensityMatrix::with_tol(twirl_mat(&rep.unitaries, rho.mat()), 1e-9)?)
}

/// Projector onto computational basis states of Hamming weight `k` on `n` qubits.
pub fn hamming_projector(n: usize, k: usize) -> Result<CMatrix> {
    if k > n {
        return Err(Error::InvalidConfig(format!("Hamming weight {k} exceeds {n}")));
    }
    let d = 1usize << n;
    Ok(CMatrix::from_fn(d, d, |i, j| {
        if i == j && i.count_ones() as usize == k {
            cr(1.0)
        } else {
            cr(0.0)
        }
    }))
}

/// Projector onto the symmetric subspace of `k` systems of dimension `local_dim`.
pub fn symmetric_subspace_projector(k: usize, local_dim: usize) -> CMatrix {
    let perms: Vec<CMatrix> = (0..k)
        .permutations(k)
        .map(|p| qmath::subsystem_permutation(&p, local_dim))
        .collect();
    average(&perms)
}

/// All permutation operators of `k` subsystems of dimension `local_dim`.
pub fn permutation_operators(k: usize, local_dim: usize) -> Vec<CMatrix> {
    (0..k)
        .permutations(k)
        .map(|p| qmath::subsystem_permutation(&p, local_dim))
        .collect()
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// Matrix applying `u` to the last qubits when the leading control qubits
/// equal `ctrl_value`, identity otherwise.
pub fn controlled_on(u: &CMatrix, ctrl_qubits: usize, ctrl_value: usize) -> CMatrix {
    let dt = u.nrows();
    let dc = 1usize << ctrl_qubits;
    let mut m = identity(dc * dt);
    m.view_mut((ctrl_value * dt, ctrl_value * dt), (dt, dt)).copy_from(u);
    m
}

fn hadamard_prep(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push(Gate::H(q)).expect("in range");
    }
    c
}

/// Three-qubit preparation of the uniform superposition over `|000>..|101>`.
pub fn six_state_prep() -> Circuit {
    let theta = 2.0 * (1.0 / 2f64.sqrt()).atan();
    let mut c = Circuit::new(3);
    c.push(Gate::Ry(0, theta)).expect("in range");
    c.push(Gate::H(2)).expect("in range");
    c.push(Gate::unitary(vec![0, 1], controlled_on(&gates::h(), 1, 0)).expect("unitary"))
        .expect("in range");
    c
}

/// Two-qubit preparation of `(|00> + |01> + |11>)/sqrt 3`.
pub fn three_state_prep() -> Circuit {
    let theta = 2.0 * 2f64.sqrt().atan();
    let mut c = Circuit::new(2);
    c.push(Gate::Ry(1, theta)).expect("in range");
    c.push(Gate::unitary(vec![1, 0], controlled_on(&gates::h(), 1, 1)).expect("unitary"))
        .expect("in range");
    c
}

/// Five-qubit preparation for the collective-U control register: the top two
/// qubits hold `(|00>+|01>+|10>)/sqrt 3`, the bottom three
/// `(|000>+|001>+|010>+|100>)/2`.
pub fn collective_u_prep() -> Circuit {
    let t13 = 2.0 * (1.0 / 2f64.sqrt()).atan();
    let t2 = FRAC_PI_3;
    let mut c = Circuit::new(5);
    c.push(Gate::Ry(0, t13)).expect("in range");
    c.push(Gate::unitary(vec![0, 1], controlled_on(&gates::h(), 1, 0)).expect("unitary"))
        .expect("in range");
    c.push(Gate::Ry(2, t2)).expect("in range");
    c.push(Gate::unitary(vec![2, 3], controlled_on(&gates::ry(t13), 1, 0)).expect("unitary"))
        .expect("in range");
    c.push(Gate::unitary(vec![2, 3, 4], controlled_on(&gates::h(), 2, 0)).expect("unitary"))
        .expect("in range");
    c
}

/// Unitary on `n` qubits mapping `|0...0>` to the uniform superposition over
/// `states` (a real Householder reflection).
pub fn uniform_superposition_unitary(n: usize, states: &[usize]) -> CMatrix {
    let d = 1usize << n;
    let amp = 1.0 / (states.len() as f64).sqrt();
    let mut target = CVector::zeros(d);
    for &s in states {
        target[s] = cr(amp);
    }
    let mut u = -target.clone();
    u[0] += cr(1.0);
    let norm = u.norm();
    if norm < 1e-14 {
        return identity(d);
    }
    let u = u.unscale(norm);
    identity(d) - qmath::outer(&u).scale(2.0)
}

fn ceil_log2(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

/// Generic preparation for `order` elements mapped to control states `0..order`.
fn generic_prep(order: usize) -> (usize, Vec<usize>, Circuit) {
    let nc = ceil_log2(order).max(1);
    let map: Vec<usize> = (0..order).collect();
    let mut c = Circuit::new(nc);
    if order.is_power_of_two() {
        c = hadamard_prep(nc);
        if order == 1 {
            c = Circuit::new(nc);
        }
    } else {
        c.push(Gate::unitary((0..nc).collect(), uniform_superposition_unitary(nc, &map)).expect("unitary"))
            .expect("in range");
    }
    (nc, map, c)
}

fn bits(s: &str) -> usize {
    usize::from_str_radix(s, 2).expect("binary literal")
}

fn z2() -> Result<GroupRep> {
    GroupRep::new("z2", names(&["e", "g"]), vec![identity(2), gates::z()], 1, vec![0, 1], hadamard_prep(1))
}

fn d3() -> Result<GroupRep> {
    let f = gates::cnot();
    let r = gates::cnot() * gates::swap();
    let r2 = &r * &r;
    GroupRep::new(
        "d3",
        names(&["e", "f", "r", "r2", "fr", "fr2"]),
        vec![identity(4), f.clone(), r.clone(), r2.clone(), &f * &r, &f * &r2],
        3,
        vec![bits("000"), bits("100"), bits("011"), bits("101"), bits("010"), bits("001")],
        six_state_prep(),
    )
}

fn c3() -> Result<GroupRep> {
    let a = gates::swap() * gates::cnot();
    let b = &a * &a;
    GroupRep::new(
        "c3",
        names(&["e", "a", "b"]),
        vec![identity(4), a, b],
        2,
        vec![bits("00"), bits("01"), bits("11")],
        three_state_prep(),
    )
}

fn c4() -> Result<GroupRep> {
    let x0 = kron(&gates::x(), &identity(2));
    let x1 = kron(&identity(2), &gates::x());
    GroupRep::new(
        "c4",
        names(&["e", "a", "b", "c"]),
        vec![identity(4), &x0 * gates::swap(), &x0 * &x1, &x1 * gates::swap()],
        2,
        vec![0, 1, 2, 3],
        hadamard_prep(2),
    )
}

fn q8() -> Result<GroupRep> {
    let block = |m: CMatrix| {
        let mut u = identity(4);
        u.view_mut((2, 2), (2, 2)).copy_from(&m);
        u
    };
    let mi = c(0.0, -1.0);
    let i2 = identity(2);
    let unitaries = vec![
        block(i2.clone()),
        block(-i2),
        block(gates::x().scale(1.0).map(|z| z * mi)),
        block(gates::x().map(|z| -z * mi)),
        block(gates::y().map(|z| z * mi)),
        block(gates::y().map(|z| -z * mi)),
        block(gates::z().map(|z| z * mi)),
        block(gates::z().map(|z| -z * mi)),
    ];
    GroupRep::new(
        "q8",
        names(&["e", "e_bar", "i", "i_bar", "j", "j_bar", "k", "k_bar"]),
        unitaries,
        3,
        vec![
            bits("000"),
            bits("111"),
            bits("110"),
            bits("001"),
            bits("010"),
            bits("101"),
            bits("100"),
            bits("011"),
        ],
        hadamard_prep(3),
    )
}

fn s2() -> Result<GroupRep> {
    GroupRep::new(
        "s2",
        names(&["e", "a"]),
        vec![identity(8), kron(&identity(2), &gates::swap())],
        1,
        vec![0, 1],
        hadamard_prep(1),
    )
}

/// Swap of `B_i` and `B_j` on the register `A B_1 B_2 B_3`.
fn s3_flip(i: usize, j: usize) -> CMatrix {
    let mut p: Vec<usize> = (0..4).collect();
    p.swap(i, j);
    qmath::subsystem_permutation(&p, 2)
}

fn s3() -> Result<GroupRep> {
    let (f12, f13, f23) = (s3_flip(1, 2), s3_flip(1, 3), s3_flip(2, 3));
    GroupRep::new(
        "s3",
        names(&["e", "a", "b", "c", "d", "f"]),
        vec![identity(16), f23.clone(), f13.clone(), f12.clone(), &f12 * &f23, &f13 * &f23],
        3,
        vec![bits("000"), bits("001"), bits("010"), bits("100"), bits("101"), bits("011")],
        six_state_prep(),
    )
}

/// Bilateral rotation `R_a(-pi/2) ⊗ R_a(-pi/2)`.
fn bilateral(axis: &CMatrix) -> CMatrix {
    let theta = -PI / 2.0;
    let (s, co) = (theta / 2.0).sin_cos();
    let r = identity(2).scale(co) - axis.map(|z| z * c(0.0, s));
    kron(&r, &r)
}

fn collective_u() -> Result<GroupRep> {
    let bx = bilateral(&gates::x());
    let by = bilateral(&gates::y());
    let bz = bilateral(&gates::z());
    let unitaries = vec![
        identity(4),
        &bx * &bx,
        &by * &by,
        &bz * &bz,
        &bx * &by,
        &by * &bx * &by * &bx,
        &bz * &bx,
        &by * &bz,
        &by * &bx,
        &bz * &bx * &bz * &bx,
        &bx * &by * &bx * &by,
        &by * &bz * &by * &bz,
    ];
    GroupRep::new(
        "collective_u",
        names(&["e", "a", "b", "c", "g", "ga", "gb", "gc", "h", "ha", "hb", "hc"]),
        unitaries,
        5,
        vec![
            bits("00000"),
            bits("00001"),
            bits("00010"),
            bits("00100"),
            bits("01000"),
            bits("01001"),
            bits("01010"),
            bits("01100"),
            bits("10000"),
            bits("10001"),
            bits("10010"),
            bits("10100"),
        ],
        collective_u_prep(),
    )
}

/// Collective phase unitary `U_y = sum_x exp[i pi/(n+1) (2y-n)(2x-n)] P_x` on `n` qubits.
pub fn collective_phase_unitary(n: usize, y: usize) -> CMatrix {
    let d = 1usize << n;
    let nf = n as f64;
    CMatrix::from_fn(d, d, |i, j| {
        if i != j {
            return cr(0.0);
        }
        let x = i.count_ones() as f64;
        let phase = PI / (nf + 1.0) * (2.0 * y as f64 - nf) * (2.0 * x - nf);
        qmath::C64::from_polar(1.0, phase)
    })
}

fn collective_phase_n2() -> Result<GroupRep> {
    GroupRep::new(
        "collective_phase_n2",
        names(&["u1", "u0", "u2"]),
        vec![
            collective_phase_unitary(2, 1),
            collective_phase_unitary(2, 0),
            collective_phase_unitary(2, 2),
        ],
        2,
        vec![bits("00"), bits("01"), bits("11")],
        three_state_prep(),
    )
}

/// Permutation representation of `S_k` acting on `B_1..B_k` (each `local_qubits`
/// wide) with `lead_qubits` untouched qubits in front, as used by k-extendibility.
pub fn symmetric_group_rep(k: usize, local_qubits: usize, lead_qubits: usize) -> Result<GroupRep> {
    let perms: Vec<Vec<usize>> = (0..k).permutations(k).collect();
    let dl = 1usize << local_qubits;
    let lead = identity(1 << lead_qubits);
    let unitaries: Vec<CMatrix> = perms
        .iter()
        .map(|p| kron(&lead, &qmath::subsystem_permutation(p, dl)))
        .collect();
    let labels = perms.iter().map(|p| p.iter().map(|x| x.to_string()).join("")).collect();
    let (nc, map, prep) = generic_prep(perms.len());
    GroupRep::new(&format!("sym_{k}"), labels, unitaries, nc, map, prep)
}

/// Direct product of representations acting on concatenated registers.
pub fn product(factors: &[GroupRep]) -> Result<GroupRep> {
    let first = factors
        .first()
        .ok_or_else(|| Error::InvalidGroup("product of no factors".into()))?;
    let mut acc = first.clone();
    for f in &factors[1..] {
        acc = product_pair(&acc, f)?;
    }
    acc.name = format!("product({})", factors.iter().map(|f| f.name.as_str()).join(","));
    Ok(acc)
}

fn product_pair(a: &GroupRep, b: &GroupRep) -> Result<GroupRep> {
    let mut labels = Vec::new();
    let mut unitaries = Vec::new();
    let mut map = Vec::new();
    for i in 0..a.order() {
        for j in 0..b.order() {
            labels.push(format!("({},{})", a.group.names()[i], b.group.names()[j]));
            unitaries.push(kron(&a.unitaries[i], &b.unitaries[j]));
            map.push((a.control_map[i] << b.control_qubits) | b.control_map[j]);
        }
    }
    let nc = a.control_qubits + b.control_qubits;
    let mut prep = Circuit::new(nc);
    prep.append_mapped(&a.prep, &(0..a.control_qubits).collect::<Vec<_>>())?;
    prep.append_mapped(&b.prep, &(a.control_qubits..nc).collect::<Vec<_>>())?;
    GroupRep::new(&format!("{}x{}", a.name, b.name), labels, unitaries, nc, map, prep)
}

/// Names accepted by [`builtin`].
pub fn builtin_names() -> &'static [&'static str] {
    &["z2", "c3", "c4", "d3", "q8", "s2", "s3", "collective_u", "collective_phase_n2"]
}

/// Looks up a builtin representation or a `product(a, b, ...)` expression.
pub fn builtin(name: &str) -> Result<GroupRep> {
    let trimmed = name.trim();
    if let Some(inner) = trimmed.strip_prefix("product(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<GroupRep> = split_top_level(inner)
            .iter()
            .map(|p| builtin(p))
            .collect::<Result<_>>()?;
        return product(&parts);
    }
    match trimmed {
        "z2" => z2(),
        "c3" => c3(),
        "c4" => c4(),
        "d3" => d3(),
        "q8" => q8(),
        "s2" => s2(),
        "s3" => s3(),
        "collective_u" => collective_u(),
        "collective_phase_n2" => collective_phase_n2(),
        other => Err(Error::UnknownGroup(other.to_string())),
    }
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch)
            }
            ')' => {
                depth -= 1;
                cur.push(ch)
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    out.push(cur);
    out.into_iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

/// Convenience: all builtin representations.
pub fn all_builtins() -> Vec<GroupRep> {
    builtin_names().iter().map(|n| builtin(n).expect("builtin is valid")).collect()
}

/// Tensor product of per-element unitaries with an identity on `extra_qubits` trailing qubits.
pub fn pad_identity(unitaries: &[CMatrix], extra_qubits: usize) -> Vec<CMatrix> {
    let id = identity(1 << extra_qubits);
    unitaries.iter().map(|u| kron_all(&[u.clone(), id.clone()])).collect()
}
