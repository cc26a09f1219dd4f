//! Quantum channels and the resource theories of symmetry.
//!
//! Free operations are covariant channels (`N ∘ U_A(g) = V_B(g) ∘ N`) and
//! Bose-symmetric channels (`N^dagger(Pi_B) >= Pi_A`). Extendible variants
//! are represented through a user-supplied extension channel that is checked,
//! never searched for. The acceptance probabilities of the symmetry tests are
//! monotone under the matching free channels; [`monotone_check`] verifies this
//! on concrete states.

use crate::error::{Error, Result};
use crate::groups;
use crate::maxfid::{self, ConstrainedFidelityProblem, SetKind};
use crate::qmath::{
    self, c, hermitian_eig, hermitian_part, identity, is_psd, kron, max_abs_diff, partial_trace, CMatrix,
    DensityMatrix,
};
use crate::symmetry_tests::TestKind;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Debug, Clone)]
pub struct Channel {
    kraus: Vec<CMatrix>,
    in_dim: usize,
    out_dim: usize,
}

impl Channel {
    /// Validates `sum_k K_k^dagger K_k = I` within 1e-9.
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let (out_dim, in_dim) = first.shape();
        if kraus.iter().any(|k| k.shape() != (out_dim, in_dim)) {
            return Err(Error::InvalidChannel("Kraus operators of different shapes".into()));
        }
        let sum = kraus.iter().fold(CMatrix::zeros(in_dim, in_dim), |acc, k| acc + k.adjoint() * k);
        let err = max_abs_diff(&sum, &identity(in_dim));
        if err > 1e-9 {
            return Err(Error::InvalidChannel(format!("not trace preserving (deviation {err:.2e})")));
        }
        Ok(Self { kraus, in_dim, out_dim })
    }

    /// `rho -> U rho U^dagger`.
    pub fn unitary(u: &CMatrix) -> Result<Self> {
        if !qmath::is_unitary(u, 1e-10) {
            return Err(Error::NotUnitary("channel".into()));
        }
        Self::new(vec![u.clone()])
    }

    pub fn identity(d: usize) -> Self {
        Self { kraus: vec![identity(d)], in_dim: d, out_dim: d }
    }

    /// Channel of an isometry `V: A -> B ⊗ E` with the environment `E` (of
    /// dimension `env_dim`, trailing) traced out.
    pub fn from_isometry(v: &CMatrix, env_dim: usize) -> Result<Self> {
        let (rows, in_dim) = v.shape();
        if env_dim == 0 || rows % env_dim != 0 {
            return Err(Error::InvalidChannel(format!("{rows} rows do not split with environment {env_dim}")));
        }
        if max_abs_diff(&(v.adjoint() * v), &identity(in_dim)) > 1e-9 {
            return Err(Error::InvalidChannel("dilation is not an isometry".into()));
        }
        let out_dim = rows / env_dim;
        let kraus = (0..env_dim)
            .map(|e| CMatrix::from_fn(out_dim, in_dim, |b, a| v[(b * env_dim + e, a)]))
            .collect();
        Self::new(kraus)
    }

    /// Channel with unnormalised Choi operator `J = sum_ij |i><j| ⊗ N(|i><j|)`.
    pub fn from_choi(j: &CMatrix, in_dim: usize, out_dim: usize) -> Result<Self> {
        if j.nrows() != in_dim * out_dim {
            return Err(Error::InvalidChannel("Choi operator has the wrong dimension".into()));
        }
        let (vals, vecs) = hermitian_eig(j)?;
        let kraus: Vec<CMatrix> = vals
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 1e-12)
            .map(|(k, &l)| CMatrix::from_fn(out_dim, in_dim, |b, i| vecs[(i * out_dim + b, k)] * l.sqrt()))
            .collect();
        Self::new(kraus)
    }

    /// `rho -> (1 - p) rho + p I/d`.
    pub fn depolarizing(d: usize, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidChannel(format!("depolarizing probability {p}")));
        }
        let omega = qmath::outer(&qmath::CVector::from_fn(d * d, |k, _| if k / d == k % d { c(1.0, 0.0) } else { c(0.0, 0.0) }));
        let j = omega.scale(1.0 - p) + identity(d * d).scale(p / d as f64);
        Self::from_choi(&j, d, d)
    }

    /// Group twirl `rho -> (1/|G|) sum_g U(g) rho U(g)^dagger`.
    pub fn twirl(unitaries: &[CMatrix]) -> Result<Self> {
        let w = 1.0 / (unitaries.len() as f64).sqrt();
        Self::new(unitaries.iter().map(|u| u.scale(w)).collect())
    }

    /// Discards the input and prepares `omega` (trivial input when `in_dim = 1`).
    pub fn replacer(in_dim: usize, omega: &DensityMatrix) -> Result<Self> {
        let (vals, vecs) = hermitian_eig(omega.mat())?;
        let mut kraus = Vec::new();
        for (k, &l) in vals.iter().enumerate() {
            if l <= 1e-14 {
                continue;
            }
            for i in 0..in_dim {
                let mut m = CMatrix::zeros(omega.dim(), in_dim);
                m.set_column(i, &vecs.column(k).scale(l.sqrt()));
                kraus.push(m);
            }
        }
        Self::new(kraus)
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// `N(X)` for an arbitrary operator `X`.
    pub fn apply_mat(&self, x: &CMatrix) -> CMatrix {
        self.kraus.iter().fold(CMatrix::zeros(self.out_dim, self.out_dim), |acc, k| acc + k * x * k.adjoint())
    }

    /// `N(rho)`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.in_dim {
            return Err(Error::RegisterMismatch(format!("channel input {} vs state {}", self.in_dim, rho.dim())));
        }
        Ok(DensityMatrix::with_tol(hermitian_part(&self.apply_mat(rho.mat())), 1e-8)?)
    }

    /// Heisenberg-picture map `N^dagger(Y) = sum_k K_k^dagger Y K_k`.
    pub fn adjoint_apply(&self, y: &CMatrix) -> CMatrix {
        self.kraus.iter().fold(CMatrix::zeros(self.in_dim, self.in_dim), |acc, k| acc + k.adjoint() * y * k)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Channel) -> Result<Channel> {
        if self.out_dim != next.in_dim {
            return Err(Error::RegisterMismatch("composed channels do not chain".into()));
        }
        let kraus = next.kraus.iter().flat_map(|b| self.kraus.iter().map(move |a| b * a)).collect();
        Channel::new(kraus)
    }

    /// `N ⊗ M`.
    pub fn tensor(&self, other: &Channel) -> Result<Channel> {
        let kraus = self.kraus.iter().flat_map(|a| other.kraus.iter().map(move |b| kron(a, b))).collect();
        Channel::new(kraus)
    }

    /// Normalised Choi state `(id_R ⊗ N)(Phi+_RA)` with the reference `R` leading.
    pub fn choi(&self) -> DensityMatrix {
        let (di, dout) = (self.in_dim, self.out_dim);
        let mut j = CMatrix::zeros(di * dout, di * dout);
        for i in 0..di {
            for k in 0..di {
                let mut e = CMatrix::zeros(di, di);
                e[(i, k)] = c(1.0, 0.0);
                let block = self.apply_mat(&e);
                j.view_mut((i * dout, k * dout), (dout, dout)).copy_from(&block);
            }
        }
        DensityMatrix::from_unnormalized(hermitian_part(&j)).expect("Choi operator of a valid channel")
    }
}

/// Channel together with the representations on its input and output. The
/// unitary lists are aligned by group element.
#[derive(Debug, Clone)]
pub struct ChannelRep {
    pub channel: Channel,
    pub in_unitaries: Vec<CMatrix>,
    pub out_unitaries: Vec<CMatrix>,
    /// Optional extension used by the extendibility resource theories.
    pub extension: Option<ChannelExtension>,
}

impl ChannelRep {
    pub fn new(channel: Channel, in_unitaries: Vec<CMatrix>, out_unitaries: Vec<CMatrix>) -> Result<Self> {
        check_rep_pair(&in_unitaries, &out_unitaries, channel.in_dim, channel.out_dim)?;
        Ok(Self { channel, in_unitaries, out_unitaries, extension: None })
    }

    /// Same channel with input and output representations from registry groups.
    pub fn with_reps(channel: Channel, in_rep: &groups::GroupRep, out_rep: &groups::GroupRep) -> Result<Self> {
        Self::new(channel, in_rep.unitaries.clone(), out_rep.unitaries.clone())
    }

    /// Trivial-input channel preparing `omega`, with the trivial representation
    /// on the one-dimensional input.
    pub fn trivial_input(omega: &DensityMatrix, out_unitaries: Vec<CMatrix>) -> Result<Self> {
        let ones = vec![identity(1); out_unitaries.len()];
        Self::new(Channel::replacer(1, omega)?, ones, out_unitaries)
    }

    pub fn with_extension(mut self, extension: ChannelExtension) -> Self {
        self.extension = Some(extension);
        self
    }
}

fn check_rep_pair(a: &[CMatrix], b: &[CMatrix], da: usize, db: usize) -> Result<()> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::RegisterMismatch(format!("{} input vs {} output group elements", a.len(), b.len())));
    }
    if a.iter().any(|u| u.nrows() != da) || b.iter().any(|u| u.nrows() != db) {
        return Err(Error::RegisterMismatch("representation dimension does not match channel".into()));
    }
    Ok(())
}

/// Extension `M: A ⊗ R -> B ⊗ R'` of a channel `N: A -> B`, with
/// representations on `A R` and `B R'` (system registers leading).
#[derive(Debug, Clone)]
pub struct ChannelExtension {
    pub channel: Channel,
    pub ref_in_dim: usize,
    pub ref_out_dim: usize,
    pub in_unitaries: Vec<CMatrix>,
    pub out_unitaries: Vec<CMatrix>,
}

/// Which defining conditions an extension satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtensionReport {
    /// `Tr_R' ∘ M = N ∘ Tr_R` on a full operator basis. This is also the
    /// no-signalling condition from `R` to `B`.
    pub marginal: bool,
    /// `M ∘ U_AR(g) = U_BR'(g) ∘ M`.
    pub covariant: bool,
    /// `M^dagger(Pi_BR') >= Pi_AR`.
    pub bose_symmetric: bool,
}

impl ChannelExtension {
    pub fn new(
        channel: Channel,
        ref_in_dim: usize,
        ref_out_dim: usize,
        in_unitaries: Vec<CMatrix>,
        out_unitaries: Vec<CMatrix>,
    ) -> Result<Self> {
        check_rep_pair(&in_unitaries, &out_unitaries, channel.in_dim, channel.out_dim)?;
        if channel.in_dim % ref_in_dim != 0 || channel.out_dim % ref_out_dim != 0 {
            return Err(Error::RegisterMismatch("reference dimensions do not divide the extension".into()));
        }
        Ok(Self { channel, ref_in_dim, ref_out_dim, in_unitaries, out_unitaries })
    }

    /// Checks the extension against the base channel `base`.
    pub fn verify(&self, base: &Channel, tol: f64) -> Result<ExtensionReport> {
        let da = self.channel.in_dim / self.ref_in_dim;
        let db = self.channel.out_dim / self.ref_out_dim;
        if da != base.in_dim || db != base.out_dim {
            return Err(Error::RegisterMismatch("extension does not extend the base channel".into()));
        }
        let din = self.channel.in_dim;
        let mut marginal = true;
        for i in 0..din {
            for j in 0..din {
                let mut e = CMatrix::zeros(din, din);
                e[(i, j)] = c(1.0, 0.0);
                let lhs = partial_trace(&self.channel.apply_mat(&e), &[db, self.ref_out_dim], &[0])?;
                let rhs = base.apply_mat(&partial_trace(&e, &[da, self.ref_in_dim], &[0])?);
                marginal &= max_abs_diff(&lhs, &rhs) <= tol;
            }
        }
        let covariant = covariant_on_basis(&self.channel, &self.in_unitaries, &self.out_unitaries, tol);
        let bose_symmetric = bose_condition(&self.channel, &self.in_unitaries, &self.out_unitaries, tol);
        Ok(ExtensionReport { marginal, covariant, bose_symmetric })
    }
}

fn covariant_on_basis(ch: &Channel, ins: &[CMatrix], outs: &[CMatrix], tol: f64) -> bool {
    let d = ch.in_dim;
    ins.iter().zip(outs).all(|(u, v)| {
        (0..d * d).all(|idx| {
            let mut e = CMatrix::zeros(d, d);
            e[(idx / d, idx % d)] = c(1.0, 0.0);
            let lhs = ch.apply_mat(&(u * &e * u.adjoint()));
            let rhs = v * ch.apply_mat(&e) * v.adjoint();
            max_abs_diff(&lhs, &rhs) <= tol
        })
    })
}

fn bose_condition(ch: &Channel, ins: &[CMatrix], outs: &[CMatrix], tol: f64) -> bool {
    let pa = groups::average(ins);
    let pb = groups::average(outs);
    is_psd(&hermitian_part(&(ch.adjoint_apply(&pb) - pa)), tol)
}

/// `N ∘ U_A(g) = V_B(g) ∘ N` for every group element, checked on the
/// matrix-unit basis.
pub fn is_covariant_channel(ch: &ChannelRep, tol: f64) -> bool {
    covariant_on_basis(&ch.channel, &ch.in_unitaries, &ch.out_unitaries, tol)
}

/// `N^dagger(Pi_B) - Pi_A` is positive semidefinite within `tol`.
pub fn is_bose_symmetric_channel(ch: &ChannelRep, tol: f64) -> bool {
    bose_condition(&ch.channel, &ch.in_unitaries, &ch.out_unitaries, tol)
}

/// Values of a symmetry measure before and after a free channel.
#[derive(Debug, Clone)]
pub struct MonotoneReport {
    pub kind: TestKind,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    /// `after - before` per state.
    pub margins: Vec<f64>,
    /// Number of margins below `-1e-8`.
    pub violations: usize,
}

/// Tolerance used when certifying that a channel is free.
pub const FREE_TOL: f64 = 1e-8;

/// Evaluates the acceptance measure of `kind` before and after `ch` on each
/// state. Refuses to run unless `ch` is free for `kind`, since monotonicity
/// is only claimed for free channels. Extendibility kinds use the channel's
/// extension.
pub fn monotone_check(kind: TestKind, ch: &ChannelRep, states: &[DensityMatrix]) -> Result<MonotoneReport> {
    let mut before = Vec::with_capacity(states.len());
    let mut after = Vec::with_capacity(states.len());
    match kind {
        TestKind::BoseSymmetry => {
            if !is_bose_symmetric_channel(ch, FREE_TOL) {
                return Err(Error::NotFree("channel is not Bose symmetric".into()));
            }
            let pa = groups::average(&ch.in_unitaries);
            let pb = groups::average(&ch.out_unitaries);
            for rho in states {
                before.push(qmath::trace_prod_re(&pa, rho.mat()));
                after.push(qmath::trace_prod_re(&pb, ch.channel.apply(rho)?.mat()));
            }
        }
        TestKind::Symmetry => {
            if !is_covariant_channel(ch, FREE_TOL) {
                return Err(Error::NotFree("channel is not covariant".into()));
            }
            for rho in states {
                before.push(sym_value(SetKind::Symmetric, rho, &ch.in_unitaries, 1)?);
                after.push(sym_value(SetKind::Symmetric, &ch.channel.apply(rho)?, &ch.out_unitaries, 1)?);
            }
        }
        TestKind::BoseSymmetricExtendibility | TestKind::SymmetricExtendibility => {
            let ext = ch
                .extension
                .as_ref()
                .ok_or_else(|| Error::NotFree("extendibility requires a channel extension".into()))?;
            let report = ext.verify(&ch.channel, FREE_TOL)?;
            let bose = kind == TestKind::BoseSymmetricExtendibility;
            if !report.marginal || (bose && !report.bose_symmetric) || (!bose && !report.covariant) {
                return Err(Error::NotFree(format!("extension fails its defining conditions: {report:?}")));
            }
            let set = if bose { SetKind::BoseExtendible } else { SetKind::SymmetricExtendible };
            for rho in states {
                before.push(sym_value(set, rho, &ext.in_unitaries, ext.ref_in_dim)?);
                after.push(sym_value(set, &ch.channel.apply(rho)?, &ext.out_unitaries, ext.ref_out_dim)?);
            }
        }
    }
    let margins: Vec<f64> = after.iter().zip(&before).map(|(a, b)| a - b).collect();
    let violations = margins.iter().filter(|&&m| m < -1e-8).count();
    Ok(MonotoneReport { kind, before, after, margins, violations })
}

fn sym_value(kind: SetKind, rho: &DensityMatrix, unitaries: &[CMatrix], traced: usize) -> Result<f64> {
    let p = match kind {
        SetKind::BoseSymmetric | SetKind::BoseExtendible => {
            let pi = groups::projector_of(unitaries, "representation")?;
            ConstrainedFidelityProblem::from_projector(kind, rho, &pi, traced)?
        }
        _ => ConstrainedFidelityProblem::from_unitaries(kind, rho, unitaries.to_vec(), traced)?,
    };
    Ok(maxfid::solve(&p)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::builtin;
    use crate::qmath::{gates, random_density, random_unitary, PureState};
    use crate::symmetry_tests::bose_acceptance;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pauli_pair() -> (Vec<CMatrix>, Vec<CMatrix>) {
        (vec![identity(2), gates::x()], vec![identity(2), gates::x()])
    }

    #[test]
    fn kraus_validation_and_choi_round_trip() {
        assert!(Channel::new(vec![identity(2).scale(0.5)]).is_err());
        let mut r = ChaCha8Rng::seed_from_u64(1);
        let dep = Channel::depolarizing(2, 0.3).unwrap();
        let rho = random_density(2, 2, &mut r);
        let expected = rho.mat().scale(0.7) + identity(2).scale(0.15);
        assert!(max_abs_diff(dep.apply(&rho).unwrap().mat(), &expected) < 1e-12);
        let j = dep.choi().mat().scale(2.0);
        let back = Channel::from_choi(&j, 2, 2).unwrap();
        assert!(max_abs_diff(back.apply(&rho).unwrap().mat(), &expected) < 1e-12);
        let v = random_unitary(4, &mut r).columns(0, 2).into_owned();
        let iso = Channel::from_isometry(&v, 2).unwrap();
        assert_eq!((iso.in_dim(), iso.out_dim()), (2, 2));
        assert!(Channel::from_isometry(&v.scale(2.0), 2).is_err());
    }

    #[test]
    fn covariance_predicate_examples() {
        let (a, b) = pauli_pair();
        assert!(is_covariant_channel(&ChannelRep::new(Channel::identity(2), a.clone(), b.clone()).unwrap(), 1e-9));
        let rz = Channel::unitary(&gates::rz(std::f64::consts::FRAC_PI_3)).unwrap();
        assert!(!is_covariant_channel(&ChannelRep::new(rz, a, b).unwrap(), 1e-9));
        let d3 = builtin("d3").unwrap();
        let tw = Channel::twirl(&d3.unitaries).unwrap();
        assert!(is_covariant_channel(&ChannelRep::with_reps(tw, &d3, &d3).unwrap(), 1e-9));
        let cu = builtin("collective_u").unwrap();
        let dep = Channel::depolarizing(4, 0.4).unwrap();
        assert!(is_covariant_channel(&ChannelRep::with_reps(dep, &cu, &cu).unwrap(), 1e-9));
    }

    #[test]
    fn bose_channel_predicate_examples() {
        let d3 = builtin("d3").unwrap();
        let id = ChannelRep::with_reps(Channel::identity(4), &d3, &d3).unwrap();
        assert!(is_bose_symmetric_channel(&id, 1e-9));
        // Measure "inside / outside the symmetric subspace", then map both
        // outcomes into the symmetric subspace with an isometry.
        let pi = groups::group_projector(&d3).unwrap();
        let sym = qmath::range_basis(&pi, 0.5);
        let target = sym.column(0).into_owned();
        let perp = identity(4) - &pi;
        let mut kraus = vec![pi.clone()];
        let (vals, vecs) = hermitian_eig(&perp).unwrap();
        for (k, &l) in vals.iter().enumerate() {
            if l > 0.5 {
                kraus.push(&target * vecs.column(k).adjoint());
            }
        }
        let ch = ChannelRep::with_reps(Channel::new(kraus).unwrap(), &d3, &d3).unwrap();
        assert!(is_bose_symmetric_channel(&ch, 1e-9));
        let x = Channel::unitary(&kron(&gates::x(), &identity(2))).unwrap();
        assert!(!is_bose_symmetric_channel(&ChannelRep::with_reps(x, &d3, &d3).unwrap(), 1e-9));
    }

    #[test]
    fn trivial_input_channel_matches_bose_acceptance() {
        let mut r = ChaCha8Rng::seed_from_u64(2);
        for rep in groups::all_builtins() {
            let pi = groups::group_projector(&rep).unwrap();
            let member = DensityMatrix::from_unnormalized(&pi * random_density(rep.dim(), 2, &mut r).mat() * &pi).unwrap();
            let other = random_density(rep.dim(), 2, &mut r);
            for omega in [member, other] {
                let ch = ChannelRep::trivial_input(&omega, rep.unitaries.clone()).unwrap();
                let accepted = (bose_acceptance(&rep, &omega).unwrap() - 1.0).abs() < 1e-8;
                assert_eq!(is_bose_symmetric_channel(&ch, 1e-8), accepted, "{}", rep.name);
            }
        }
    }

    fn random_bose_channel(rep: &groups::GroupRep, rng: &mut ChaCha8Rng) -> Channel {
        // Symmetric-subspace preserving unitary mixed with a reset into the subspace.
        let pi = groups::group_projector(rep).unwrap();
        let basis = qmath::range_basis(&pi, 0.5);
        let k = basis.ncols();
        let w = random_unitary(k, rng);
        let inner = &basis * w * basis.adjoint() + (identity(rep.dim()) - &pi);
        let p: f64 = rng.gen_range(0.0..1.0);
        let omega = DensityMatrix::from_unnormalized(&basis * random_density(k, 2, rng).mat() * basis.adjoint()).unwrap();
        let reset = Channel::replacer(rep.dim(), &omega).unwrap();
        let mut kraus: Vec<CMatrix> = vec![inner.scale((1.0 - p).sqrt())];
        kraus.extend(reset.kraus().iter().map(|m| m.scale(p.sqrt())));
        Channel::new(kraus).unwrap()
    }

    #[test]
    fn bose_monotonicity_and_transitivity() {
        let mut r = ChaCha8Rng::seed_from_u64(3);
        let rep = builtin("d3").unwrap();
        let states: Vec<DensityMatrix> = (0..20).map(|i| random_density(4, 1 + i % 4, &mut r)).collect();
        for _ in 0..20 {
            let a = random_bose_channel(&rep, &mut r);
            let b = random_bose_channel(&rep, &mut r);
            let ch = ChannelRep::with_reps(a.then(&b).unwrap(), &rep, &rep).unwrap();
            assert!(is_bose_symmetric_channel(&ch, 1e-9));
            let report = monotone_check(TestKind::BoseSymmetry, &ch, &states).unwrap();
            assert_eq!(report.violations, 0);
        }
        let x = Channel::unitary(&kron(&gates::x(), &identity(2))).unwrap();
        let bad = ChannelRep::with_reps(x, &rep, &rep).unwrap();
        assert!(matches!(monotone_check(TestKind::BoseSymmetry, &bad, &states), Err(Error::NotFree(_))));
    }

    #[test]
    fn symmetric_monotonicity_under_covariant_channels() {
        let mut r = ChaCha8Rng::seed_from_u64(4);
        let rep = builtin("c4").unwrap();
        let states: Vec<DensityMatrix> = (0..6).map(|_| random_density(4, 2, &mut r)).collect();
        let tw = ChannelRep::with_reps(Channel::twirl(&rep.unitaries).unwrap(), &rep, &rep).unwrap();
        let report = monotone_check(TestKind::Symmetry, &tw, &states).unwrap();
        assert_eq!(report.violations, 0);
        for v in &report.after {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-6);
        }
        let dep = ChannelRep::with_reps(Channel::depolarizing(4, 0.2).unwrap(), &rep, &rep).unwrap();
        assert!(is_covariant_channel(&dep, 1e-9));
        assert_eq!(monotone_check(TestKind::Symmetry, &dep, &states).unwrap().violations, 0);
        // Covariant channels map symmetric states to symmetric states.
        for rho in &states {
            let sigma = groups::twirl(&rep, rho).unwrap();
            let out = dep.channel.apply(&sigma).unwrap();
            assert!(max_abs_diff(groups::twirl(&rep, &out).unwrap().mat(), out.mat()) < 1e-8);
        }
    }

    #[test]
    fn extension_conditions_and_no_signalling() {
        // N = depolarizing on A; M = N ⊗ id_R extends it and is covariant for
        // the swap-symmetric representation of two qubits.
        let mut r = ChaCha8Rng::seed_from_u64(5);
        let n = Channel::depolarizing(2, 0.25).unwrap();
        let m = n.tensor(&Channel::identity(2)).unwrap();
        let s2 = vec![identity(4), gates::swap()];
        let ext = ChannelExtension::new(m.clone(), 2, 2, s2.clone(), s2.clone()).unwrap();
        let report = ext.verify(&n, 1e-9).unwrap();
        assert!(report.marginal);
        // Depolarizing only one half breaks swap covariance.
        assert!(!report.covariant);
        let mm = n.tensor(&n).unwrap();
        let ext2 = ChannelExtension::new(mm.clone(), 2, 2, s2.clone(), s2.clone()).unwrap();
        let rep2 = ext2.verify(&n, 1e-9).unwrap();
        assert!(rep2.marginal && rep2.covariant);
        // No signalling: the B marginal ignores local operations on R.
        for _ in 0..5 {
            let rho = random_density(4, 2, &mut r);
            let u = kron(&identity(2), &random_unitary(2, &mut r));
            let rotated = DensityMatrix::with_tol(&u * rho.mat() * u.adjoint(), 1e-9).unwrap();
            let b1 = partial_trace(mm.apply(&rho).unwrap().mat(), &[2, 2], &[0]).unwrap();
            let b2 = partial_trace(mm.apply(&rotated).unwrap().mat(), &[2, 2], &[0]).unwrap();
            assert!(max_abs_diff(&b1, &b2) < 1e-12);
        }
        let ch = ChannelRep::new(n.clone(), vec![identity(2); 2], vec![identity(2); 2]).unwrap().with_extension(ext2);
        let states: Vec<DensityMatrix> = (0..5).map(|_| random_density(2, 2, &mut r)).collect();
        let report = monotone_check(TestKind::SymmetricExtendibility, &ch, &states).unwrap();
        assert_eq!(report.violations, 0);
        let bad = ChannelRep::new(n, vec![identity(2); 2], vec![identity(2); 2]).unwrap().with_extension(ext);
        assert!(monotone_check(TestKind::SymmetricExtendibility, &bad, &states).is_err());
        // N ⊗ N shrinks the swap component, so it is not Bose symmetric.
        let psi = PureState::from_real(&[1.0, 0.0]).unwrap().to_density();
        assert!(matches!(
            monotone_check(TestKind::BoseSymmetricExtendibility, &ch, &[psi]),
            Err(Error::NotFree(_))
        ));
    }
}
