//! Acceptance suite. Each criterion prints one `PASS`/`FAIL` line to stderr
//! (bypassing the test harness capture) and the test fails if any criterion
//! fails.

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symtest::groups::{self, builtin, GroupRep};
use symtest::maxfid::{self, ConstrainedFidelityProblem};
use symtest::presets;
use symtest::qmath::{self, gates, identity, kron, max_abs_diff, random_density, random_pure, random_unitary, CMatrix, DensityMatrix, PureState};
use symtest::resource::{monotone_check, Channel, ChannelExtension, ChannelRep};
use symtest::symmetry_tests::{
    bose_acceptance, channel_covariance_acceptance, optimal_acceptance, povm_covariance_acceptance,
    pure_separability_acceptance, pure_separability_projector, TestKind,
};
use symtest::variational::{noise_resilient_eval, train, Ansatz, TrainConfig};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn report(n: usize, title: &str, o: &Outcome) {
    let line = format!("criterion {n} [{}] {title}: {}\n", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn bose_tables() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut rows = 0;
    for suite in presets::suites().iter().filter(|s| s.kind == TestKind::BoseSymmetry) {
        let rep = suite.rep().unwrap();
        for r in suite.rows {
            let v = bose_acceptance(&rep, &presets::state(r.state).unwrap()).unwrap();
            worst = worst.max((v - r.reference).abs());
            rows += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(worst <= 1e-3 && secs < 1.0, format!("{rows} rows, max deviation {worst:.2e} (tol 1e-3), {secs:.3} s (limit 1 s)"))
}

fn solver_tables() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0f64, String::new());
    let mut rows = 0;
    for suite in presets::suites().iter().filter(|s| s.kind != TestKind::BoseSymmetry) {
        for r in suite.rows {
            let v = optimal_acceptance(&suite.spec(r).unwrap()).unwrap().acceptance;
            let dev = (v - r.reference).abs();
            if dev >= worst.0 {
                worst = (dev, format!("{} / {}", suite.table, r.state));
            }
            rows += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst.0 <= 2e-3 && secs < 60.0,
        format!("{rows} rows, max deviation {:.2e} at {} (tol 2e-3), {secs:.1} s (limit 60 s)", worst.0, worst.1),
    )
}

fn bose_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = 0.0f64;
    let reps = groups::all_builtins();
    for rep in &reps {
        let pi = groups::group_projector(rep).unwrap();
        for i in 0..20 {
            let rho = random_density(rep.dim(), 1 + i % rep.dim(), &mut rng);
            let p = ConstrainedFidelityProblem::bose_symmetric(&rho, rep).unwrap();
            let v = maxfid::solve(&p).unwrap().value;
            worst = worst.max((v - qmath::trace_prod_re(&pi, rho.mat())).abs());
        }
    }
    outcome(worst <= 1e-6, format!("{} groups x 20 states, max |solver - Tr[Pi rho]| = {worst:.2e} (tol 1e-6)", reps.len()))
}

fn separability_ordering() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut ordered = 0;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let psi = random_pure(4, &mut rng);
        let p: Vec<f64> = (2..=4).map(|k| pure_separability_acceptance(&psi, 1, k).unwrap()).collect();
        for (k, &v) in (2..=4).zip(&p) {
            worst = worst.max((v - pure_separability_projector(&psi, 1, k).unwrap()).abs());
        }
        if p[0] >= p[1] - 1e-12 && p[1] >= p[2] - 1e-12 {
            ordered += 1;
        }
    }
    outcome(
        ordered == 100 && worst <= 1e-9,
        format!("{ordered}/100 ordered p2 >= p3 >= p4, closed form vs projector {worst:.2e} (tol 1e-9)"),
    )
}

fn variational_floor() -> Outcome {
    let start = Instant::now();
    let mut worst = (0.0f64, String::new());
    let mut max_steps = 0;
    for case in presets::variational_cases() {
        let spec = case.spec().unwrap();
        let ansatz = Ansatz::for_spec(&spec, case.layers, case.extra_qubits).unwrap();
        let cfg = TrainConfig { max_iterations: 2000, restarts: 3, seed: 2024, ..TrainConfig::default() };
        let trace = train(&spec, ansatz, &cfg).unwrap();
        max_steps = max_steps.max(trace.steps.len());
        let dev = (trace.final_objective - case.target).abs();
        if dev >= worst.0 {
            worst = (dev, format!("{} / {}", case.suite, case.state));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst.0 <= 5e-3 && max_steps <= 2000 && secs < 1800.0,
        format!(
            "{} cases, max |trained - table| = {:.2e} at {} (tol 5e-3), <= {max_steps} iterations, {secs:.1} s",
            presets::variational_cases().len(),
            worst.0,
            worst.1
        ),
    )
}

fn noise_resilience() -> Outcome {
    let spec = presets::suite("z2_gs").unwrap();
    let row = spec.rows.iter().find(|r| r.state == "pi").unwrap();
    let spec = spec.spec(row).unwrap();
    let ansatz = Ansatz::for_spec(&spec, 1, 0).unwrap();
    let mut improved = 0;
    for seed in 0..10 {
        let cfg = TrainConfig { noise: Some(0.01), max_iterations: 300, seed, ..TrainConfig::default() };
        let trace = train(&spec, ansatz, &cfg).unwrap();
        if noise_resilient_eval(&trace, &spec, ansatz).unwrap().improved {
            improved += 1;
        }
    }
    outcome(improved >= 9, format!("noiseless re-evaluation >= noisy objective for {improved}/10 seeds (need 9)"))
}

fn random_channel(d: usize, rank: usize, rng: &mut ChaCha8Rng) -> Channel {
    let v = random_unitary(d * rank, rng).columns(0, d).into_owned();
    Channel::from_isometry(&v, rank).unwrap()
}

fn random_bose_channel(rep: &GroupRep, rng: &mut ChaCha8Rng) -> Channel {
    let pi = groups::group_projector(rep).unwrap();
    let basis = qmath::range_basis(&pi, 0.5);
    let k = basis.ncols();
    let inner = &basis * random_unitary(k, rng) * basis.adjoint() + (identity(rep.dim()) - &pi);
    let p: f64 = rng.gen_range(0.0..1.0);
    let omega = DensityMatrix::from_unnormalized(&basis * random_density(k, 2, rng).mat() * basis.adjoint()).unwrap();
    let mut kraus = vec![inner.scale((1.0 - p).sqrt())];
    kraus.extend(Channel::replacer(rep.dim(), &omega).unwrap().kraus().iter().map(|m| m.scale(p.sqrt())));
    Channel::new(kraus).unwrap()
}

/// Group-averaged random channel, covariant for `rep` on input and output.
fn random_covariant_channel(rep: &GroupRep, rng: &mut ChaCha8Rng) -> Channel {
    let base = random_channel(rep.dim(), 2, rng);
    let w = (rep.order() as f64).sqrt().recip();
    let kraus = rep
        .unitaries
        .iter()
        .flat_map(|u| base.kraus().iter().map(move |k| (u.adjoint() * k * u).scale(w)))
        .collect();
    Channel::new(kraus).unwrap()
}

/// Qubit channel `N` with a Bose-symmetric two-copy extension `M`: a random
/// mixture of `V ⊗ V` conjugations and a reset onto a swap-symmetric state.
fn random_bse_channel(swap_rep: &[CMatrix], rng: &mut ChaCha8Rng) -> ChannelRep {
    let p: f64 = rng.gen_range(0.0..1.0);
    let q: f64 = rng.gen_range(0.0..1.0 - p);
    let (v1, v2) = (random_unitary(2, rng), random_unitary(2, rng));
    let sym = groups::average(swap_rep);
    let omega_ext = DensityMatrix::from_unnormalized(&sym * random_density(4, 2, rng).mat() * &sym).unwrap();
    let omega = DensityMatrix::new(qmath::partial_trace(omega_ext.mat(), &[2, 2], &[0]).unwrap()).unwrap();
    let r = 1.0 - p - q;
    let mut n = vec![v1.scale(p.sqrt()), v2.scale(q.sqrt())];
    n.extend(Channel::replacer(2, &omega).unwrap().kraus().iter().map(|k| k.scale(r.sqrt())));
    let mut m = vec![kron(&v1, &v1).scale(p.sqrt()), kron(&v2, &v2).scale(q.sqrt())];
    m.extend(Channel::replacer(4, &omega_ext).unwrap().kraus().iter().map(|k| k.scale(r.sqrt())));
    let ext = ChannelExtension::new(Channel::new(m).unwrap(), 2, 2, swap_rep.to_vec(), swap_rep.to_vec()).unwrap();
    let trivial = vec![identity(2); 2];
    ChannelRep::new(Channel::new(n).unwrap(), trivial.clone(), trivial).unwrap().with_extension(ext)
}

fn random_symext_channel(swap_rep: &[CMatrix], rng: &mut ChaCha8Rng) -> ChannelRep {
    let n = random_channel(2, 2, rng);
    let ext = ChannelExtension::new(n.tensor(&n).unwrap(), 2, 2, swap_rep.to_vec(), swap_rep.to_vec()).unwrap();
    let trivial = vec![identity(2); 2];
    ChannelRep::new(n, trivial.clone(), trivial).unwrap().with_extension(ext)
}

fn resource_monotones() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let d3 = builtin("d3").unwrap();
    let swap_rep = vec![identity(4), gates::swap()];
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    let mut checks = 0;
    for kind in TestKind::ALL {
        let dim = if kind.extendible() { 2 } else { 4 };
        let states: Vec<DensityMatrix> = (0..20).map(|i| random_density(dim, 1 + i % dim, &mut rng)).collect();
        for _ in 0..20 {
            let ch = match kind {
                TestKind::BoseSymmetry => ChannelRep::with_reps(random_bose_channel(&d3, &mut rng), &d3, &d3).unwrap(),
                TestKind::Symmetry => ChannelRep::with_reps(random_covariant_channel(&d3, &mut rng), &d3, &d3).unwrap(),
                TestKind::BoseSymmetricExtendibility => random_bse_channel(&swap_rep, &mut rng),
                TestKind::SymmetricExtendibility => random_symext_channel(&swap_rep, &mut rng),
            };
            let r = monotone_check(kind, &ch, &states).unwrap();
            violations += r.violations;
            worst = r.margins.iter().copied().fold(worst, f64::min);
            checks += r.margins.len();
        }
    }
    outcome(
        violations == 0 && worst >= -1e-8,
        format!("{checks} checks over 4 kinds, {violations} violations, min margin {worst:.2e} (floor -1e-8)"),
    )
}

fn structural_identities() -> Outcome {
    let avg = groups::average(&(0..=2).map(|y| groups::collective_phase_unitary(2, y)).collect::<Vec<_>>());
    let phase = max_abs_diff(&avg, &groups::hamming_projector(2, 1).unwrap());
    let singlet = PureState::from_real(&[0.0, 1.0, -1.0, 0.0]).unwrap().to_density();
    let cu = max_abs_diff(&groups::group_projector(&builtin("collective_u").unwrap()).unwrap(), singlet.mat());
    let mut rank = 0.0f64;
    for (k, d, expected) in [(2, 2, 3.0), (3, 2, 4.0), (2, 4, 10.0)] {
        rank = rank.max((qmath::trace_re(&groups::symmetric_subspace_projector(k, d)) - expected).abs());
    }
    let worst = phase.max(cu).max(rank);
    outcome(
        worst <= 1e-10,
        format!("phase average {phase:.1e}, collective-U projector {cu:.1e}, symmetric ranks {rank:.1e} (tol 1e-10)"),
    )
}

fn covariance_checks() -> Outcome {
    let cu = builtin("collective_u").unwrap();
    let dep = Channel::depolarizing(4, 0.3).unwrap();
    let dep_value = channel_covariance_acceptance(&dep, &cu.unitaries, &cu.unitaries).unwrap();
    let flips = vec![identity(2), gates::x()];
    let comp = vec![qmath::outer(PureState::basis(2, 0).amplitudes()), qmath::outer(PureState::basis(2, 1).amplitudes())];
    let perms = vec![vec![0, 1], vec![1, 0]];
    let povm_value = povm_covariance_acceptance(&comp, &flips, &perms).unwrap();
    let rz = Channel::unitary(&gates::rz(std::f64::consts::FRAC_PI_3)).unwrap();
    let bad_channel = channel_covariance_acceptance(&rz, &flips, &flips).unwrap();
    let h = gates::h();
    let hadamard_basis: Vec<CMatrix> = comp.iter().map(|e| &h * e * &h).collect();
    let bad_povm = povm_covariance_acceptance(&hadamard_basis, &flips, &perms).unwrap();
    let pass = (dep_value - 1.0).abs() <= 1e-6
        && (povm_value - 1.0).abs() <= 1e-6
        && bad_channel < 1.0 - 1e-3
        && bad_povm < 1.0 - 1e-3;
    outcome(
        pass,
        format!(
            "depolarizing {dep_value:.6}, computational POVM {povm_value:.6}, witnesses Rz {bad_channel:.4} and Hadamard-basis POVM {bad_povm:.4} (< 0.999)"
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Bose-symmetry tables", bose_tables),
        ("convex-solver tables", solver_tables),
        ("solver agrees with Tr[Pi rho]", bose_identity),
        ("separability ordering", separability_ordering),
        ("variational floor", variational_floor),
        ("noise-resilience workflow", noise_resilience),
        ("resource monotones", resource_monotones),
        ("structural identities", structural_identities),
        ("channel and POVM covariance", covariance_checks),
    ];
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let o = run();
        report(i + 1, title, &o);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
