//! Named states, groups and reference suites.
//!
//! Every state that appears in a reference table has a preset tagged with the
//! tables that use it. A suite is one table: a group, a test kind and rows of
//! `(state, reference value, noiseless training value)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::{self, GroupRep};
use crate::qmath::{from_rows, CMatrix, DensityMatrix, PureState, C64};
use crate::symmetry_tests::{TestKind, TestSpec};

/// A named input state.
#[derive(Debug, Clone, Copy)]
pub struct StatePreset {
    pub name: &'static str,
    pub description: &'static str,
    /// Tables the state appears in.
    pub tables: &'static [&'static str],
    build: fn() -> Result<DensityMatrix>,
}

impl StatePreset {
    pub fn state(&self) -> Result<DensityMatrix> {
        (self.build)()
    }
}

fn pure(amps: &[f64]) -> Result<DensityMatrix> {
    Ok(PureState::from_real(amps)?.to_density())
}

fn basis(bits: &str) -> Result<DensityMatrix> {
    let idx = usize::from_str_radix(bits, 2).expect("binary label");
    Ok(PureState::basis(1 << bits.len(), idx).to_density())
}

fn product(a: Result<DensityMatrix>, b: Result<DensityMatrix>) -> Result<DensityMatrix> {
    Ok(a?.tensor(&b?))
}

fn mixed(rows: &[&[C64]]) -> Result<DensityMatrix> {
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.to_vec()).collect();
    let m: CMatrix = from_rows(&rows);
    Ok(DensityMatrix::new(m)?)
}

fn re(x: f64) -> C64 {
    Complex64::new(x, 0.0)
}

const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

static STATES: &[StatePreset] = &[
    StatePreset { name: "zero", description: "|0>", tables: &["Dihedral_GBSE", "Dihedral_GSE", "CollectiveU_GSE", "CollectiveZ_GBSE", "CollectiveZ_GSE", "CS4_GBSE", "CS4_GSE", "Q8_GBSE", "Q8_GSE", "Z2_GBS", "Z2_GS"], build: || basis("0") },
    StatePreset { name: "one", description: "|1>", tables: &["Z2_GBS", "Z2_GS", "Dihedral_GBSE", "Dihedral_GSE", "CollectiveU_GBSE", "CS3_GBSE", "CS3_GSE"], build: || basis("1") },
    StatePreset { name: "plus", description: "|+>", tables: &["Z2_GBS", "Z2_GS", "CollectiveZ_GSE", "CS4_GBSE", "Q8_GSE"], build: || pure(&[S2, S2]) },
    StatePreset { name: "minus", description: "|->", tables: &["CollectiveZ_GBSE"], build: || pure(&[S2, -S2]) },
    StatePreset { name: "pi", description: "maximally mixed qubit I/2", tables: &["Z2_GBS", "Z2_GS", "Dihedral_GBSE", "Dihedral_GSE", "CollectiveU_GBSE", "CollectiveU_GSE", "CS3_GBSE", "CS3_GSE", "CS4_GSE", "Q8_GBSE", "Q8_GSE"], build: || Ok(DensityMatrix::maximally_mixed(2)) },
    StatePreset { name: "zero_zero", description: "|00>", tables: &["Dihedral_GBS", "Dihedral_GS", "CollectiveU_GBS", "CollectiveZ_GBS", "CollectiveZ_GS", "S2_GBSE", "S2_GSE", "S3_GBSE", "S3_GSE", "CS3_GBS", "CS4_GBS", "CS4_GS", "Q8_GBS", "Q8_GS"], build: || basis("00") },
    StatePreset { name: "one_zero", description: "|10>", tables: &["CollectiveU_GS"], build: || basis("10") },
    StatePreset { name: "phi_plus", description: "(|00> + |11>)/sqrt2", tables: &["Dihedral_GBS", "Dihedral_GS", "CollectiveZ_GS", "CS3_GS"], build: || pure(&[S2, 0.0, 0.0, S2]) },
    StatePreset { name: "psi_plus", description: "(|01> + |10>)/sqrt2", tables: &["CollectiveU_GBS", "CollectiveU_GS", "CollectiveZ_GBS", "CollectiveZ_GS", "S2_GBSE", "S2_GSE", "S3_GBSE", "S3_GSE"], build: || pure(&[0.0, S2, S2, 0.0]) },
    StatePreset { name: "psi_minus", description: "(|01> - |10>)/sqrt2", tables: &["CollectiveU_GBS"], build: || pure(&[0.0, S2, -S2, 0.0]) },
    StatePreset { name: "pi_tensor_2", description: "I/4", tables: &["Dihedral_GBS", "Dihedral_GS", "CollectiveU_GS", "CollectiveZ_GBS", "CollectiveZ_GS", "CS3_GBS", "CS3_GS", "CS4_GBS", "CS4_GS", "Q8_GBS", "Q8_GS"], build: || Ok(DensityMatrix::maximally_mixed(4)) },
    StatePreset { name: "zero_plus", description: "|0> (x) |+>", tables: &["CollectiveZ_GBS"], build: || pure(&[S2, S2, 0.0, 0.0]) },
    StatePreset { name: "plus_plus", description: "|++>", tables: &["CS4_GBS"], build: || pure(&[0.5; 4]) },
    StatePreset { name: "plus_zero", description: "|+0>, tabulated as |+0><0+| in Q8_GBS", tables: &["CS4_GBS", "Q8_GBS"], build: || pure(&[S2, 0.0, S2, 0.0]) },
    StatePreset { name: "minus_plus", description: "|-+>", tables: &["CS3_GBS", "CS3_GS"], build: || pure(&[0.5, 0.5, -0.5, -0.5]) },
    StatePreset { name: "plus_minus", description: "|+->, tabulated as |+-><-+|", tables: &["CS4_GS"], build: || pure(&[0.5, -0.5, 0.5, -0.5]) },
    StatePreset { name: "one_plus", description: "|1+>", tables: &["Q8_GBS", "Q8_GS"], build: || pure(&[0.0, 0.0, S2, S2]) },
    StatePreset { name: "pi_tensor_plus", description: "I/2 (x) |+><+|, tabulated as pi (x) |0><0| in CS4_GS", tables: &["CS4_GS"], build: || product(Ok(DensityMatrix::maximally_mixed(2)), pure(&[S2, S2])) },
    StatePreset { name: "w_01_10_11", description: "(|01> + |10> + |11>)/sqrt3", tables: &["Dihedral_GBS", "Dihedral_GS", "CS3_GBS"], build: || pure(&[0.0, 1.0, 1.0, 1.0]) },
    StatePreset { name: "w_00_10_11", description: "(|00> + |10> + |11>)/sqrt3", tables: &["CS3_GS"], build: || pure(&[1.0, 0.0, 1.0, 1.0]) },
    StatePreset { name: "w_00_m01_10", description: "(|00> - |01> + |10>)/sqrt3", tables: &["CollectiveU_GBS", "CollectiveU_GS"], build: || pure(&[1.0, -1.0, 1.0, 0.0]) },
    StatePreset { name: "sqrt3_00_11", description: "(sqrt3|00> + |11>)/2", tables: &["Q8_GS"], build: || pure(&[3f64.sqrt(), 0.0, 0.0, 1.0]) },
    StatePreset { name: "s2_gse_rho", description: "|11>/sqrt2 + (|00> + |01> + |10>)/sqrt6", tables: &["S2_GSE"], build: || pure(&[1.0, 1.0, 1.0, 3f64.sqrt()]) },
    StatePreset { name: "mix_00_11", description: "3/4 |00><00| + 1/4 |11><11|", tables: &["S2_GBSE", "S3_GBSE", "S3_GSE"], build: || Ok(DensityMatrix::diagonal(&[0.75, 0.0, 0.0, 0.25])?) },
    StatePreset { name: "mix_0_1", description: "3/4 |0><0| + 1/4 |1><1|", tables: &["CollectiveZ_GBSE"], build: || Ok(DensityMatrix::diagonal(&[0.75, 0.25])?) },
    StatePreset { name: "dihedral_gbse_rho", description: "[[1/3, 1/3], [1/3, 2/3]]", tables: &["Dihedral_GBSE"], build: || mixed(&[&[re(1.0 / 3.0), re(1.0 / 3.0)], &[re(1.0 / 3.0), re(2.0 / 3.0)]]) },
    StatePreset { name: "dihedral_gse_rho", description: "[[1/2, -i/sqrt8], [i/sqrt8, 1/2]], tabulated with rounded 0.354 entries", tables: &["Dihedral_GSE"], build: || { let c = 0.125f64.sqrt(); mixed(&[&[re(0.5), Complex64::new(0.0, -c)], &[Complex64::new(0.0, c), re(0.5)]]) } },
    StatePreset { name: "cu_gbse_diag", description: "diag(cos^2(pi/12), sin^2(pi/12)), tabulated as diag(0.93, 0.07)", tables: &["CollectiveU_GBSE"], build: || { let c = (PI / 12.0).cos().powi(2); Ok(DensityMatrix::diagonal(&[c, 1.0 - c])?) } },
    StatePreset { name: "cu_gse_diag", description: "diag(0.95, 0.05)", tables: &["CollectiveU_GSE"], build: || Ok(DensityMatrix::diagonal(&[0.95, 0.05])?) },
    StatePreset { name: "cos_pi12", description: "cos(pi/12)|0> + sin(pi/12)|1>, tabulated as [[0.93, 0.25], [0.25, 0.07]]", tables: &["CollectiveZ_GBSE", "Q8_GBSE"], build: || pure(&[(PI / 12.0).cos(), (PI / 12.0).sin()]) },
    StatePreset { name: "sqrt3_0_1", description: "(sqrt3|0> + |1>)/2, tabulated as [[0.75, 0.43], [0.43, 0.25]]", tables: &["CollectiveZ_GSE", "CS4_GBSE"], build: || pure(&[3f64.sqrt(), 1.0]) },
    StatePreset { name: "sqrt3_0_m1", description: "(sqrt3|0> - |1>)/2", tables: &["CS3_GBSE", "CS3_GSE"], build: || pure(&[3f64.sqrt(), -1.0]) },
    StatePreset { name: "cs4_gse_diag", description: "diag(0.854, 0.146)", tables: &["CS4_GSE"], build: || Ok(DensityMatrix::diagonal(&[0.854, 0.146])?) },
];

/// All state presets.
pub fn states() -> &'static [StatePreset] {
    STATES
}

/// Looks up a state preset by name.
pub fn state(name: &str) -> Result<DensityMatrix> {
    STATES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?
        .state()
}

/// One row of a reference table.
#[derive(Debug, Clone, Copy)]
pub struct SuiteRow {
    pub state: &'static str,
    /// Exact optimum reported in the table.
    pub reference: f64,
    /// Noiseless variational value reported in the table, if any.
    pub noiseless: f64,
}

/// A reference table.
#[derive(Debug, Clone, Copy)]
pub struct Suite {
    pub name: &'static str,
    pub table: &'static str,
    pub group: &'static str,
    pub kind: TestKind,
    pub rows: &'static [SuiteRow],
}

impl Suite {
    pub fn rep(&self) -> Result<GroupRep> {
        groups::builtin(self.group)
    }

    /// Test instance for one row.
    pub fn spec(&self, row: &SuiteRow) -> Result<TestSpec> {
        TestSpec::new(self.kind, self.rep()?, state(row.state)?)
    }
}

const fn row(state: &'static str, reference: f64, noiseless: f64) -> SuiteRow {
    SuiteRow { state, reference, noiseless }
}

use TestKind::{BoseSymmetricExtendibility as Bse, BoseSymmetry as Bsym, Symmetry as Sym, SymmetricExtendibility as SymExt};

static SUITES: &[Suite] = &[
    Suite { name: "z2_gbs", table: "Z2_GBS", group: "z2", kind: Bsym, rows: &[row("zero", 1.0, 1.0), row("one", 0.0, 0.0), row("plus", 0.5, 0.5), row("pi", 0.5, 0.5)] },
    Suite { name: "z2_gs", table: "Z2_GS", group: "z2", kind: Sym, rows: &[row("zero", 1.0, 0.9999), row("one", 1.0, 1.0), row("plus", 0.5, 0.5), row("pi", 1.0, 0.9999)] },
    Suite { name: "dihedral_gbs", table: "Dihedral_GBS", group: "d3", kind: Bsym, rows: &[row("zero_zero", 1.0, 1.0), row("w_01_10_11", 1.0, 0.9999), row("phi_plus", 0.6666, 0.6666), row("pi_tensor_2", 0.5, 0.5)] },
    Suite { name: "dihedral_gs", table: "Dihedral_GS", group: "d3", kind: Sym, rows: &[row("zero_zero", 1.0, 0.9999), row("w_01_10_11", 1.0, 0.9999), row("phi_plus", 0.6666, 0.6666), row("pi_tensor_2", 1.0, 0.9989)] },
    Suite { name: "dihedral_gbse", table: "Dihedral_GBSE", group: "d3", kind: Bse, rows: &[row("zero", 1.0, 1.0), row("one", 0.6670, 0.6667), row("pi", 1.0, 1.0), row("dihedral_gbse_rho", 1.0, 0.9999)] },
    Suite { name: "dihedral_gse", table: "Dihedral_GSE", group: "d3", kind: SymExt, rows: &[row("zero", 1.0, 0.9998), row("one", 0.6666, 0.6641), row("pi", 1.0, 0.9988), row("dihedral_gse_rho", 0.9714, 0.9662)] },
    Suite { name: "collectiveu_gbs", table: "CollectiveU_GBS", group: "collective_u", kind: Bsym, rows: &[row("zero_zero", 0.0, 0.0), row("w_00_m01_10", 0.6667, 0.6667), row("psi_plus", 0.0, 0.0), row("psi_minus", 1.0, 1.0)] },
    Suite { name: "collectiveu_gs", table: "CollectiveU_GS", group: "collective_u", kind: Sym, rows: &[row("one_zero", 0.5, 0.4997), row("w_00_m01_10", 0.6667, 0.6666), row("psi_plus", 0.3333, 0.3332), row("pi_tensor_2", 1.0, 0.9988)] },
    Suite { name: "collectiveu_gbse", table: "CollectiveU_GBSE", group: "collective_u", kind: Bse, rows: &[row("one", 0.5, 0.5), row("pi", 1.0, 0.9998), row("cu_gbse_diag", 0.75, 0.7499)] },
    Suite { name: "collectiveu_gse", table: "CollectiveU_GSE", group: "collective_u", kind: SymExt, rows: &[row("zero", 0.5, 0.4995), row("pi", 1.0, 0.9996), row("cu_gse_diag", 0.7169, 0.7095)] },
    Suite { name: "collectivez_gbs", table: "CollectiveZ_GBS", group: "collective_phase_n2", kind: Bsym, rows: &[row("zero_zero", 0.0, 0.0), row("psi_plus", 1.0, 1.0), row("zero_plus", 0.5, 0.5), row("pi_tensor_2", 0.5, 0.5)] },
    Suite { name: "collectivez_gs", table: "CollectiveZ_GS", group: "collective_phase_n2", kind: Sym, rows: &[row("zero_zero", 1.0, 0.9999), row("psi_plus", 1.0, 1.0), row("phi_plus", 0.5001, 0.5), row("pi_tensor_2", 1.0, 0.9998)] },
    Suite { name: "collectivez_gbse", table: "CollectiveZ_GBSE", group: "collective_phase_n2", kind: Bse, rows: &[row("zero", 1.0, 1.0), row("mix_0_1", 1.0, 1.0), row("minus", 0.5002, 0.5), row("cos_pi12", 0.9330, 0.9330)] },
    Suite { name: "collectivez_gse", table: "CollectiveZ_GSE", group: "collective_phase_n2", kind: SymExt, rows: &[row("zero", 1.0, 0.9960), row("plus", 0.5, 0.5), row("sqrt3_0_1", 0.75, 0.7494)] },
    Suite { name: "s2_gbse", table: "S2_GBSE", group: "s2", kind: Bse, rows: &[row("zero_zero", 1.0, 1.0), row("mix_00_11", 1.0, 1.0), row("psi_plus", 0.75, 0.75)] },
    Suite { name: "s2_gse", table: "S2_GSE", group: "s2", kind: SymExt, rows: &[row("zero_zero", 1.0, 0.9991), row("s2_gse_rho", 0.9925, 0.9901), row("psi_plus", 0.7506, 0.7498)] },
    Suite { name: "s3_gbse", table: "S3_GBSE", group: "s3", kind: Bse, rows: &[row("zero_zero", 1.0, 0.9999), row("mix_00_11", 1.0, 0.9994), row("psi_plus", 0.6675, 0.6667)] },
    Suite { name: "s3_gse", table: "S3_GSE", group: "s3", kind: SymExt, rows: &[row("zero_zero", 1.0, 0.9970), row("mix_00_11", 1.0, 0.9988), row("psi_plus", 0.6670, 0.6650)] },
    Suite { name: "cs3_gbs", table: "CS3_GBS", group: "c3", kind: Bsym, rows: &[row("zero_zero", 1.0, 1.0), row("minus_plus", 0.3333, 0.3333), row("w_01_10_11", 1.0, 1.0), row("pi_tensor_2", 0.5, 0.5)] },
    Suite { name: "cs3_gs", table: "CS3_GS", group: "c3", kind: Sym, rows: &[row("minus_plus", 0.3339, 0.3333), row("phi_plus", 0.6666, 0.6666), row("w_00_10_11", 0.7778, 0.7775), row("pi_tensor_2", 1.0, 0.9998)] },
    Suite { name: "cs3_gbse", table: "CS3_GBSE", group: "c3", kind: Bse, rows: &[row("one", 0.6670, 0.6667), row("pi", 1.0, 1.0), row("sqrt3_0_m1", 0.8382, 0.8380)] },
    Suite { name: "cs3_gse", table: "CS3_GSE", group: "c3", kind: SymExt, rows: &[row("one", 0.6667, 0.6660), row("pi", 1.0, 0.9942), row("sqrt3_0_m1", 0.8383, 0.8322)] },
    Suite { name: "cs4_gbs", table: "CS4_GBS", group: "c4", kind: Bsym, rows: &[row("zero_zero", 0.25, 0.25), row("plus_plus", 1.0, 1.0), row("plus_zero", 0.5, 0.5), row("pi_tensor_2", 0.25, 0.25)] },
    Suite { name: "cs4_gs", table: "CS4_GS", group: "c4", kind: Sym, rows: &[row("zero_zero", 0.2502, 0.25), row("plus_minus", 0.5008, 0.5), row("pi_tensor_plus", 0.7501, 0.7498), row("pi_tensor_2", 1.0, 0.9992)] },
    Suite { name: "cs4_gbse", table: "CS4_GBSE", group: "c4", kind: Bse, rows: &[row("zero", 0.5, 0.5), row("plus", 1.0, 1.0), row("sqrt3_0_1", 0.9330, 0.9330)] },
    Suite { name: "cs4_gse", table: "CS4_GSE", group: "c4", kind: SymExt, rows: &[row("zero", 0.5, 0.4997), row("pi", 1.0, 0.9996), row("cs4_gse_diag", 0.8535, 0.8533)] },
    Suite { name: "q8_gbs", table: "Q8_GBS", group: "q8", kind: Bsym, rows: &[row("zero_zero", 1.0, 1.0), row("one_plus", 0.0, 0.0), row("plus_zero", 0.5, 0.4999), row("pi_tensor_2", 0.5, 0.4999)] },
    Suite { name: "q8_gs", table: "Q8_GS", group: "q8", kind: Sym, rows: &[row("zero_zero", 1.0, 0.9998), row("one_plus", 0.5, 0.4999), row("sqrt3_00_11", 0.75, 0.7499), row("pi_tensor_2", 1.0, 0.9998)] },
    Suite { name: "q8_gbse", table: "Q8_GBSE", group: "q8", kind: Bse, rows: &[row("zero", 1.0, 1.0), row("pi", 0.5, 0.5), row("cos_pi12", 0.9330, 0.9330)] },
    Suite { name: "q8_gse", table: "Q8_GSE", group: "q8", kind: SymExt, rows: &[row("zero", 1.0, 0.9995), row("plus", 0.5, 0.5), row("pi", 1.0, 0.9985)] },
];

/// All reference suites.
pub fn suites() -> &'static [Suite] {
    SUITES
}

/// Looks up a suite by name (case-insensitive).
pub fn suite(name: &str) -> Result<&'static Suite> {
    let key = name.to_ascii_lowercase();
    SUITES.iter().find(|s| s.name == key).ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// A training case with its noiseless reference value.
#[derive(Debug, Clone, Copy)]
pub struct VariationalCase {
    pub suite: &'static str,
    pub state: &'static str,
    pub target: f64,
    pub layers: usize,
    /// Ancillas beyond the minimal prover register.
    pub extra_qubits: usize,
}

impl VariationalCase {
    pub fn spec(&self) -> Result<TestSpec> {
        let suite = suite(self.suite)?;
        TestSpec::new(suite.kind, suite.rep()?, state(self.state)?)
    }
}

static VARIATIONAL: &[VariationalCase] = &[
    VariationalCase { suite: "z2_gs", state: "pi", target: 0.9999, layers: 1, extra_qubits: 0 },
    VariationalCase { suite: "dihedral_gs", state: "phi_plus", target: 0.6666, layers: 2, extra_qubits: 0 },
    VariationalCase { suite: "dihedral_gbse", state: "one", target: 0.6667, layers: 1, extra_qubits: 0 },
    VariationalCase { suite: "dihedral_gse", state: "zero", target: 0.9998, layers: 2, extra_qubits: 0 },
    VariationalCase { suite: "collectivez_gs", state: "psi_plus", target: 1.0, layers: 2, extra_qubits: 0 },
    VariationalCase { suite: "collectiveu_gbse", state: "cu_gbse_diag", target: 0.7499, layers: 1, extra_qubits: 0 },
    VariationalCase { suite: "s2_gse", state: "psi_plus", target: 0.7498, layers: 3, extra_qubits: 0 },
    VariationalCase { suite: "s3_gbse", state: "psi_plus", target: 0.6667, layers: 2, extra_qubits: 0 },
];

/// The training cases with noiseless reference values.
pub fn variational_cases() -> &'static [VariationalCase] {
    VARIATIONAL
}

/// Human-readable listing of groups, state presets and suites.
pub fn listing() -> String {
    let mut out = String::from("groups:\n");
    for g in groups::builtin_names() {
        out.push_str(&format!("  {g}\n"));
    }
    out.push_str("states:\n");
    for s in STATES {
        out.push_str(&format!("  {:<18} {}  [{}]\n", s.name, s.description, s.tables.join(", ")));
    }
    out.push_str("suites:\n");
    for s in SUITES {
        out.push_str(&format!("  {:<18} {} / {} covering table {}\n", s.name, s.group, s.kind.short_name(), s.table));
    }
    out
}
