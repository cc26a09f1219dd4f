//! Dense complex linear algebra and quantum-information primitives.
//!
//! Every matrix in the crate is a [`CMatrix`], a dense square matrix of
//! [`C64`] entries. Tensor products follow the usual Kronecker ordering:
//! subsystem 0 is the most significant digit of a computational-basis index,
//! so `kron(a, b)` places `a` on the leading factor.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Dense complex matrix.
pub type CMatrix = DMatrix<C64>;

/// Dense complex column vector.
pub type CVector = DVector<C64>;

/// Tolerance for construction invariants (hermiticity, normalisation).
pub const TOL_CONSTRUCT: f64 = 1e-10;
/// Tolerance for reconstruction and oracle comparisons.
pub const TOL_ORACLE: f64 = 1e-9;
/// Tolerance expected from optimisation outputs.
pub const TOL_OPT: f64 = 1e-6;
/// Largest matrix dimension the dense routines accept.
pub const MAX_DIM: usize = 1 << 12;

/// Errors raised by the linear-algebra layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QmathError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),
    #[error("trace {0:.12} differs from 1")]
    BadTrace(f64),
    #[error("vector norm {0:.12} differs from 1")]
    BadNorm(f64),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("dimension {0} exceeds the supported maximum")]
    TooLarge(usize),
}

/// Shorthand for a complex number from real and imaginary parts.
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Shorthand for a real complex number.
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Identity matrix of dimension `d`.
pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Builds a matrix from real row-major entries.
pub fn from_real_rows(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    CMatrix::from_fn(n, rows[0].len(), |i, j| cr(rows[i][j]))
}

/// Builds a matrix from complex row-major entries.
pub fn from_rows(rows: &[Vec<C64>]) -> CMatrix {
    let n = rows.len();
    CMatrix::from_fn(n, rows[0].len(), |i, j| rows[i][j])
}

/// Kronecker product with `a` as the most significant factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of matrices, left to right.
pub fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors
        .iter()
        .fold(identity(1), |acc, f| acc.kronecker(f))
}

/// Kronecker product of vectors.
pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

/// Outer product `|v><v|`.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Entrywise complex conjugate.
pub fn complex_conjugate(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

/// Real part of the trace.
pub fn trace_re(m: &CMatrix) -> f64 {
    m.trace().re
}

/// Real part of `Tr[a b]` without forming the product.
pub fn trace_prod_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            let x = a[(i, k)] * b[(k, i)];
            acc += x.re;
        }
    }
    acc
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `(m + m^dagger) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// True when `m` equals its adjoint within `tol` entrywise.
pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

/// True when `m^dagger m` is the identity within `tol` entrywise.
pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(&(m.adjoint() * m), &identity(m.nrows())) <= tol
}

/// True when `m` is Hermitian with no eigenvalue below `-tol`.
pub fn is_psd(m: &CMatrix, tol: f64) -> bool {
    if !is_hermitian(m, tol) {
        return false;
    }
    let (vals, _) = eig_unchecked(m);
    vals.iter().all(|&v| v >= -tol)
}

/// True when `m` is a Hermitian idempotent within `tol`.
pub fn is_projector(m: &CMatrix, tol: f64) -> bool {
    is_hermitian(m, tol) && max_abs_diff(&(m * m), m) <= tol
}

fn eig_unchecked(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(n, n, |r, k| eig.eigenvectors[(r, order[k])]);
    (vals, vecs)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in descending order and the matching orthonormal
/// eigenvectors as columns.
pub fn hermitian_eig(m: &CMatrix) -> Result<(Vec<f64>, CMatrix), QmathError> {
    if !m.is_square() {
        return Err(QmathError::DimensionMismatch(format!(
            "{}x{} is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let dev = max_abs_diff(m, &m.adjoint());
    if dev > TOL_ORACLE * scale {
        return Err(QmathError::NotHermitian(dev));
    }
    Ok(eig_unchecked(m))
}

/// Applies `f` to the eigenvalues of a Hermitian matrix.
pub fn hermitian_fn(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = eig_unchecked(m);
    let n = m.nrows();
    let mut scaled = vecs.clone();
    for k in 0..n {
        let fk = f(vals[k]);
        for r in 0..n {
            scaled[(r, k)] *= fk;
        }
    }
    scaled * vecs.adjoint()
}

/// Principal square root of a PSD matrix, clipping tiny negative eigenvalues.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_fn(m, |x| x.max(0.0).sqrt())
}

/// Eigenvector for the largest eigenvalue of a Hermitian matrix.
pub fn top_eigvec(m: &CMatrix) -> (f64, CVector) {
    let (vals, vecs) = eig_unchecked(m);
    (vals[0], vecs.column(0).into_owned())
}

/// Orthonormal basis (as columns) of the eigenspace of `m` with eigenvalue above `threshold`.
pub fn range_basis(m: &CMatrix, threshold: f64) -> CMatrix {
    let (vals, vecs) = eig_unchecked(m);
    let r = vals.iter().filter(|&&v| v > threshold).count();
    vecs.columns(0, r).into_owned()
}

/// Partial trace keeping the subsystems listed in `keep`.
///
/// `dims` lists subsystem dimensions, most significant first. The kept
/// subsystems appear in the output in their original relative order.
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix, QmathError> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(QmathError::DimensionMismatch(format!(
            "matrix is {}x{} but subsystem dims multiply to {}",
            m.nrows(),
            m.ncols(),
            total
        )));
    }
    if let Some(&bad) = keep.iter().find(|&&k| k >= dims.len()) {
        return Err(QmathError::DimensionMismatch(format!(
            "kept subsystem {bad} out of range"
        )));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep_sorted.contains(i)).collect();
    let dk: usize = keep_sorted.iter().map(|&i| dims[i]).product();
    let dt: usize = traced.iter().map(|&i| dims[i]).product();

    // Strides of each subsystem inside the full index.
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let offsets = |sel: &[usize], mut idx: usize| -> usize {
        let mut off = 0;
        for &s in sel.iter().rev() {
            off += (idx % dims[s]) * strides[s];
            idx /= dims[s];
        }
        off
    };
    let keep_off: Vec<usize> = (0..dk).map(|i| offsets(&keep_sorted, i)).collect();
    let trace_off: Vec<usize> = (0..dt).map(|i| offsets(&traced, i)).collect();

    let mut out = CMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &trace_off {
                acc += m[(keep_off[a] + t, keep_off[b] + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Traces out the trailing factor of dimension `d_tail` from a matrix on `d_head * d_tail`.
pub fn trace_tail(m: &CMatrix, d_head: usize, d_tail: usize) -> CMatrix {
    let mut out = CMatrix::zeros(d_head, d_head);
    for a in 0..d_head {
        for b in 0..d_head {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..d_tail {
                acc += m[(a * d_tail + t, b * d_tail + t)];
            }
            out[(a, b)] = acc;
        }
    }
    out
}

/// Density operator: Hermitian, PSD and unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates and wraps a matrix.
    pub fn new(mat: CMatrix) -> Result<Self, QmathError> {
        Self::with_tol(mat, TOL_CONSTRUCT)
    }

    /// Validates with a caller-chosen tolerance, then symmetrises exactly.
    pub fn with_tol(mat: CMatrix, tol: f64) -> Result<Self, QmathError> {
        if !mat.is_square() {
            return Err(QmathError::DimensionMismatch("density matrix must be square".into()));
        }
        if mat.nrows() > MAX_DIM {
            return Err(QmathError::TooLarge(mat.nrows()));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QmathError::NonFinite);
        }
        let dev = max_abs_diff(&mat, &mat.adjoint());
        if dev > tol {
            return Err(QmathError::NotHermitian(dev));
        }
        let mat = hermitian_part(&mat);
        let tr = trace_re(&mat);
        if (tr - 1.0).abs() > tol {
            return Err(QmathError::BadTrace(tr));
        }
        let (vals, _) = eig_unchecked(&mat);
        let min = *vals.last().unwrap_or(&0.0);
        if min < -tol {
            return Err(QmathError::NotPsd(min));
        }
        Ok(Self { mat })
    }

    /// Normalises a PSD matrix to unit trace.
    pub fn from_unnormalized(mat: CMatrix) -> Result<Self, QmathError> {
        let tr = trace_re(&mat);
        if tr <= 0.0 || !tr.is_finite() {
            return Err(QmathError::BadTrace(tr));
        }
        Self::new(mat.unscale(tr))
    }

    /// Projector onto a pure state.
    pub fn from_pure(psi: &PureState) -> Self {
        Self { mat: outer(psi.amplitudes()) }
    }

    /// Maximally mixed state of dimension `d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self { mat: identity(d).unscale(d as f64) }
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &[f64]) -> Result<Self, QmathError> {
        Self::new(CMatrix::from_diagonal(&DVector::from_iterator(
            probs.len(),
            probs.iter().map(|&p| cr(p)),
        )))
    }

    /// Underlying matrix.
    pub fn mat(&self) -> &CMatrix {
        &self.mat
    }

    /// Consumes the wrapper.
    pub fn into_mat(self) -> CMatrix {
        self.mat
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Tensor product of two states.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        Self { mat: kron(&self.mat, &other.mat) }
    }

    /// `Tr[rho^k]` for a positive integer `k`.
    pub fn trace_power(&self, k: u32) -> f64 {
        let mut acc = self.mat.clone();
        for _ in 1..k {
            acc = &acc * &self.mat;
        }
        trace_re(&acc)
    }

    /// Rank counting eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        let (vals, _) = eig_unchecked(&self.mat);
        vals.iter().filter(|&&v| v > tol).count()
    }
}

/// Normalised state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: CVector,
}

impl PureState {
    /// Validates and wraps an amplitude vector.
    pub fn new(amps: CVector) -> Result<Self, QmathError> {
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QmathError::NonFinite);
        }
        let n = amps.norm();
        if (n - 1.0).abs() > TOL_CONSTRUCT {
            return Err(QmathError::BadNorm(n));
        }
        Ok(Self { amps })
    }

    /// Normalises a nonzero vector.
    pub fn normalized(amps: CVector) -> Result<Self, QmathError> {
        let n = amps.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(QmathError::BadNorm(n));
        }
        Self::new(amps.unscale(n))
    }

    /// Normalised state from real amplitudes.
    pub fn from_real(amps: &[f64]) -> Result<Self, QmathError> {
        Self::normalized(CVector::from_iterator(amps.len(), amps.iter().map(|&a| cr(a))))
    }

    /// Computational basis state `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = cr(1.0);
        Self { amps: v }
    }

    /// All-zero state on `n` qubits.
    pub fn zero_qubits(n: usize) -> Self {
        Self::basis(1 << n, 0)
    }

    /// Amplitudes.
    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    /// Consumes the wrapper.
    pub fn into_amplitudes(self) -> CVector {
        self.amps
    }

    /// Dimension of the vector.
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &PureState) -> PureState {
        Self { amps: kron_vec(&self.amps, &other.amps) }
    }

    /// Density matrix of the state.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

/// Fidelity `F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64, QmathError> {
    if rho.dim() != sigma.dim() {
        return Err(QmathError::DimensionMismatch(format!(
            "fidelity of dims {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    Ok(fidelity_mat(rho.mat(), sigma.mat()))
}

/// Eigenvalues below this are treated as roundoff when restricting a state to its support.
pub const SUPPORT_CUTOFF: f64 = 1e-14;

/// Factor `V Lambda^{1/2}` of a PSD matrix restricted to its support, so that
/// `m = F F^dagger`.
pub fn support_factor(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = eig_unchecked(m);
    let r = vals.iter().filter(|&&v| v > SUPPORT_CUTOFF).count();
    let mut f = vecs.columns(0, r).into_owned();
    for k in 0..r {
        let s = vals[k].sqrt();
        for i in 0..f.nrows() {
            f[(i, k)] *= s;
        }
    }
    f
}

/// Root fidelity on raw PSD matrices of equal dimension.
///
/// The square roots of the eigenvalues of `sqrt(rho) sigma sqrt(rho)` are the
/// singular values of `F_rho^dagger F_sigma` for support factors
/// `rho = F_rho F_rho^dagger`, `sigma = F_sigma F_sigma^dagger`; computing them
/// as singular values avoids square roots of roundoff-level eigenvalues.
pub fn root_fidelity_mat(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let fr = support_factor(rho);
    let fs = support_factor(sigma);
    if fr.ncols() == 0 || fs.ncols() == 0 {
        return 0.0;
    }
    let m = fr.adjoint() * fs;
    m.singular_values().iter().sum()
}

/// Fidelity on raw PSD matrices, clamped to `[0, 1]`.
pub fn fidelity_mat(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    root_fidelity_mat(rho, sigma).powi(2).clamp(0.0, 1.0)
}

/// Purification `|psi>_{S S'}` of `rho` with the system first.
///
/// The purifying register has dimension `rank(rho)` rounded up to a power of
/// two; a pure input therefore gets a one-dimensional purifying factor.
pub fn purify(rho: &DensityMatrix) -> PureState {
    let (vals, vecs) = eig_unchecked(rho.mat());
    let rank = vals.iter().filter(|&&v| v > TOL_CONSTRUCT).count().max(1);
    let dp = rank.next_power_of_two();
    let d = rho.dim();
    let mut amps = CVector::zeros(d * dp);
    for k in 0..rank {
        let w = vals[k].max(0.0).sqrt();
        for i in 0..d {
            amps[i * dp + k] += vecs[(i, k)] * w;
        }
    }
    let n = amps.norm();
    PureState { amps: amps.unscale(n) }
}

/// Number of qubits in the purifying register produced by [`purify`].
pub fn purifying_qubits(rho: &DensityMatrix) -> usize {
    let rank = rho.rank(TOL_CONSTRUCT).max(1);
    rank.next_power_of_two().trailing_zeros() as usize
}

/// Haar-random pure state of dimension `d`.
pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    let v = CVector::from_fn(d, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    PureState::normalized(v).expect("Gaussian vector is nonzero")
}

/// Random density matrix of dimension `d` and rank at most `rank` (Ginibre ensemble).
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = CMatrix::from_fn(d, rank.max(1), |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let m = &g * g.adjoint();
    let tr = trace_re(&m);
    DensityMatrix::new(hermitian_part(&m.unscale(tr))).expect("Wishart matrix is a valid state")
}

/// Haar-random unitary of dimension `d` from the QR decomposition of a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| {
        c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for k in 0..d {
        let rk = r[(k, k)];
        let phase = if rk.norm() > 0.0 { rk / rk.norm() } else { cr(1.0) };
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    q
}

/// Isometry `V` (columns orthonormal) completed to a unitary whose first
/// columns agree with `V`.
pub fn complete_to_unitary(v: &CMatrix) -> CMatrix {
    let (d, k) = v.shape();
    let mut cols: Vec<CVector> = (0..k).map(|j| v.column(j).into_owned()).collect();
    for e in 0..d {
        if cols.len() == d {
            break;
        }
        let mut cand = CVector::zeros(d);
        cand[e] = cr(1.0);
        for q in &cols {
            let proj = q.dotc(&cand);
            cand -= q * proj;
        }
        let n = cand.norm();
        if n > 1e-8 {
            cols.push(cand.unscale(n));
        }
    }
    CMatrix::from_columns(&cols)
}

/// Single-qubit Pauli and Clifford matrices.
pub mod gates {
    use super::{c, cr, CMatrix};

    /// Pauli X.
    pub fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)])
    }
    /// Pauli Y.
    pub fn y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)])
    }
    /// Pauli Z.
    pub fn z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)])
    }
    /// Hadamard.
    pub fn h() -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_row_slice(2, 2, &[cr(s), cr(s), cr(s), cr(-s)])
    }
    /// T gate, `diag(1, e^{i pi/4})`.
    pub fn t() -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[cr(1.0), cr(0.0), cr(0.0), C64Ext::cis(std::f64::consts::FRAC_PI_4)],
        )
    }
    /// `Ry(theta) = exp(-i theta Y / 2)`.
    pub fn ry(theta: f64) -> CMatrix {
        let (s, co) = (theta / 2.0).sin_cos();
        CMatrix::from_row_slice(2, 2, &[cr(co), cr(-s), cr(s), cr(co)])
    }
    /// `Rz(theta) = exp(-i theta Z / 2)`.
    pub fn rz(theta: f64) -> CMatrix {
        CMatrix::from_row_slice(
            2,
            2,
            &[C64Ext::cis(-theta / 2.0), cr(0.0), cr(0.0), C64Ext::cis(theta / 2.0)],
        )
    }
    /// `Rx(theta) = exp(-i theta X / 2)`.
    pub fn rx(theta: f64) -> CMatrix {
        let (s, co) = (theta / 2.0).sin_cos();
        CMatrix::from_row_slice(2, 2, &[cr(co), c(0.0, -s), c(0.0, -s), cr(co)])
    }
    /// CNOT with control on the leading qubit.
    pub fn cnot() -> CMatrix {
        permutation(&[0, 1, 3, 2])
    }
    /// Two-qubit SWAP.
    pub fn swap() -> CMatrix {
        permutation(&[0, 2, 1, 3])
    }
    /// Permutation matrix sending basis state `j` to `images[j]`.
    pub fn permutation(images: &[usize]) -> CMatrix {
        let n = images.len();
        let mut m = CMatrix::zeros(n, n);
        for (j, &i) in images.iter().enumerate() {
            m[(i, j)] = cr(1.0);
        }
        m
    }

    struct C64Ext;
    impl C64Ext {
        fn cis(phi: f64) -> super::C64 {
            super::C64::from_polar(1.0, phi)
        }
    }
}

/// Unitary permuting `n` subsystems of local dimension `local_dim`:
/// subsystem `i` of the input is moved to position `perm[i]` of the output.
pub fn subsystem_permutation(perm: &[usize], local_dim: usize) -> CMatrix {
    let n = perm.len();
    let d = local_dim.pow(n as u32);
    let mut images = vec![0usize; d];
    let mut digits = vec![0usize; n];
    let mut out_digits = vec![0usize; n];
    for (x, image) in images.iter_mut().enumerate() {
        let mut rem = x;
        for i in (0..n).rev() {
            digits[i] = rem % local_dim;
            rem /= local_dim;
        }
        for i in 0..n {
            out_digits[perm[i]] = digits[i];
        }
        *image = out_digits.iter().fold(0, |acc, &dg| acc * local_dim + dg);
    }
    gates::permutation(&images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn kron_identities_and_ordering() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
        let zi = kron(&gates::z(), &identity(2));
        let expected = [1.0, 1.0, -1.0, -1.0];
        for (i, e) in expected.iter().enumerate() {
            assert_abs_diff_eq!(zi[(i, i)].re, e, epsilon = 1e-15);
        }
        let hh = kron(&gates::h(), &gates::h());
        for i in 0..4 {
            assert_abs_diff_eq!(hh[(i, 0)].re, 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let phi = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let red = partial_trace(phi.to_density().mat(), &[2, 2], &[1]).unwrap();
        assert!(max_abs_diff(&red, &identity(2).unscale(2.0)) < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_returns_factor() {
        let mut r = rng(1);
        let a = random_density(2, 2, &mut r);
        let b = random_density(3, 3, &mut r);
        let red = partial_trace(a.tensor(&b).mat(), &[2, 3], &[0]).unwrap();
        assert!(max_abs_diff(&red, a.mat()) < 1e-12);
        let red_b = partial_trace(a.tensor(&b).mat(), &[2, 3], &[1]).unwrap();
        assert!(max_abs_diff(&red_b, b.mat()) < 1e-12);
    }

    #[test]
    fn partial_trace_matches_index_summation_oracle() {
        let mut r = rng(2);
        let rho = random_density(8, 8, &mut r);
        let m = rho.mat();
        // keep subsystems {0, 2} of [2, 2, 2]
        let mut oracle = CMatrix::zeros(4, 4);
        for a0 in 0..2 {
            for a2 in 0..2 {
                for b0 in 0..2 {
                    for b2 in 0..2 {
                        for t in 0..2 {
                            let i = a0 * 4 + t * 2 + a2;
                            let j = b0 * 4 + t * 2 + b2;
                            oracle[(a0 * 2 + a2, b0 * 2 + b2)] += m[(i, j)];
                        }
                    }
                }
            }
        }
        let got = partial_trace(m, &[2, 2, 2], &[0, 2]).unwrap();
        assert!(max_abs_diff(&got, &oracle) < 1e-14);
        assert!(partial_trace(m, &[2, 3], &[0]).is_err());
    }

    #[test]
    fn trace_tail_agrees_with_partial_trace() {
        let mut r = rng(3);
        let rho = random_density(12, 5, &mut r);
        let a = trace_tail(rho.mat(), 4, 3);
        let b = partial_trace(rho.mat(), &[4, 3], &[0]).unwrap();
        assert!(max_abs_diff(&a, &b) < 1e-14);
    }

    #[test]
    fn eig_of_z_and_projector() {
        let (vals, _) = hermitian_eig(&gates::z()).unwrap();
        assert_abs_diff_eq!(vals[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], -1.0, epsilon = 1e-14);
        let p = outer(&CVector::from_vec(vec![cr(0.6), cr(0.0), c(0.0, 0.8)]));
        let (vals, _) = hermitian_eig(&p).unwrap();
        for v in vals {
            assert!(v.abs() < 1e-9 || (v - 1.0).abs() < 1e-9);
        }
        assert!(hermitian_eig(&gates::cnot().map(|z| z * c(0.0, 1.0))).is_err());
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut r = rng(4);
        let g = random_unitary(8, &mut r) + random_unitary(8, &mut r).scale(0.3);
        let h = hermitian_part(&g);
        let (vals, vecs) = hermitian_eig(&h).unwrap();
        let lam = CMatrix::from_diagonal(&DVector::from_iterator(8, vals.iter().map(|&v| cr(v))));
        let rec = &vecs * lam * vecs.adjoint();
        assert!(max_abs_diff(&rec, &h) < 1e-9 * 8.0);
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn fidelity_basic_cases() {
        let mut r = rng(5);
        let rho = random_density(4, 4, &mut r);
        assert_abs_diff_eq!(fidelity(&rho, &rho).unwrap(), 1.0, epsilon = 1e-9);
        let zero = PureState::basis(2, 0).to_density();
        let one = PureState::basis(2, 1).to_density();
        assert_abs_diff_eq!(fidelity(&zero, &one).unwrap(), 0.0, epsilon = 1e-12);
        assert!(fidelity(&zero, &rho).is_err());
    }

    #[test]
    fn fidelity_pure_closed_form_oracle() {
        let mut r = rng(6);
        for _ in 0..20 {
            let psi = random_pure(4, &mut r);
            let sigma = random_density(4, 3, &mut r);
            let closed = psi.amplitudes().dotc(&(sigma.mat() * psi.amplitudes())).re;
            // Trace-norm route: ||sqrt(psi) sqrt(sigma)||_1^2 via singular values.
            let prod = outer(psi.amplitudes()) * psd_sqrt(sigma.mat());
            let tn: f64 = prod.singular_values().iter().sum();
            let f = fidelity(&psi.to_density(), &sigma).unwrap();
            assert_abs_diff_eq!(f, closed, epsilon = 1e-9);
            assert_abs_diff_eq!(f, tn * tn, epsilon = 1e-9);
        }
    }

    #[test]
    fn purify_examples() {
        let zero = PureState::basis(2, 0).to_density();
        let p = purify(&zero);
        assert_eq!(p.dim(), 2);
        assert_abs_diff_eq!(p.amplitudes()[0].norm(), 1.0, epsilon = 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2);
        let p = purify(&mixed);
        assert_eq!(p.dim(), 4);
        let red = partial_trace(p.to_density().mat(), &[2, 2], &[1]).unwrap();
        assert!(max_abs_diff(&red, &identity(2).unscale(2.0)) < 1e-12);
        assert_eq!(purifying_qubits(&mixed), 1);
        assert_eq!(purifying_qubits(&zero), 0);
    }

    #[test]
    fn purify_marginals_random() {
        let mut r = rng(7);
        for k in 0..50 {
            let d = 2 + k % 7;
            let rank = 1 + k % d;
            let rho = random_density(d, rank, &mut r);
            let p = purify(&rho);
            let dp = p.dim() / d;
            assert!(dp.is_power_of_two() && dp >= rank);
            let red = trace_tail(p.to_density().mat(), d, dp);
            assert!(max_abs_diff(&red, rho.mat()) < 1e-9);
        }
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(complex_conjugate(&gates::cnot()), gates::cnot());
        let th = 0.7;
        assert!(max_abs_diff(&complex_conjugate(&gates::rz(th)), &gates::rz(-th)) < 1e-15);
        assert!(max_abs_diff(&complex_conjugate(&gates::t()), &gates::t().adjoint()) < 1e-15);
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::new(gates::z()).is_err());
        assert!(DensityMatrix::new(identity(2)).is_err());
        assert!(DensityMatrix::new(gates::x().unscale(2.0) + identity(2).unscale(2.0)).is_ok());
        assert!(PureState::new(CVector::from_vec(vec![cr(1.0), cr(1.0)])).is_err());
    }

    #[test]
    fn subsystem_permutation_matches_swap() {
        assert_eq!(subsystem_permutation(&[1, 0], 2), gates::swap());
        let p = subsystem_permutation(&[1, 2, 0], 2);
        assert!(is_unitary(&p, 1e-14));
        // |100> : qubit0 = 1 moves to position 1 -> |010>
        assert_eq!(p[(0b010, 0b100)], cr(1.0));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut r = rng(8);
        assert!(is_unitary(&random_unitary(6, &mut r), 1e-12));
        let v = random_unitary(6, &mut r).columns(0, 2).into_owned();
        let u = complete_to_unitary(&v);
        assert!(is_unitary(&u, 1e-12));
        assert!(max_abs_diff(&u.columns(0, 2).into_owned(), &v) < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn fidelity_bounds_symmetry_and_unitary_invariance(seed in any::<u64>(), qubits in 1usize..=3) {
            let mut r = rng(seed);
            let d = 1 << qubits;
            let rho = random_density(d, 1 + (seed as usize) % d, &mut r);
            let sigma = random_density(d, d, &mut r);
            let u = random_unitary(d, &mut r);
            let f = fidelity(&rho, &sigma).unwrap();
            let g = fidelity(&sigma, &rho).unwrap();
            let rot = |m: &DensityMatrix| DensityMatrix::new(hermitian_part(&(&u * m.mat() * u.adjoint()))).unwrap();
            let h = fidelity(&rot(&rho), &rot(&sigma)).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!((f - g).abs() < 1e-9);
            prop_assert!((f - h).abs() < 1e-9);
        }

        #[test]
        fn projector_eigenvalues_are_binary(seed in any::<u64>(), d in 2usize..8) {
            let mut r = rng(seed);
            let u = random_unitary(d, &mut r);
            let k = 1 + (seed as usize) % d;
            let v = u.columns(0, k).into_owned();
            let p = &v * v.adjoint();
            prop_assert!(is_projector(&p, 1e-10));
            let (vals, _) = hermitian_eig(&p).unwrap();
            for x in vals {
                prop_assert!(x.abs() < 1e-9 || (x - 1.0).abs() < 1e-9);
            }
        }
    }
}
