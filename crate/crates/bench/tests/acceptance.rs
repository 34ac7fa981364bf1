//! One line per acceptance criterion. Criteria listed in `KNOWN_RED` are
//! expected to fail; the test breaks if any other criterion fails or if a
//! known-red one starts passing.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use clusterq::clusterlab::{build_cluster, contract_x_pair, verify_stabilizers, ClusterGraph};
use clusterq::entanglement::{noisy_pair_state, pair_scan, PairAnalysis, ENTANGLEMENT_TOL};
use clusterq::oneway::{
    config_cnot15, config_cnot16_bridged, config_cnot4, derive_decoding_table, gate_fidelity_once, run_gate_with_thetas,
    wire_fidelity_mc, Decoding, GateConfig, OutcomeMode, Pauli, PauliString,
};
use clusterq::phasenoise::{
    dephasing_fidelity, overlap_avg, overlap_exact, overlap_mc, PhaseDistribution, StateFamily,
};
use clusterq::qstate::{
    dephase, fidelity, fidelity_pure_mixed, init_register, partial_trace, DensityMatrix, DephasingChannel,
    InputQubit, MeasureMode, PureState, C64,
};
use clusterq_bench::{run_experiment, Experiment, ExperimentSpec, Value};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_RED: [usize; 2] = [6, 7];

type Criterion = (usize, fn() -> Verdict, Duration);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn ghz(n: usize) -> PureState {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[(1 << n) - 1] = amps[0];
    PureState::from_amplitudes(amps).unwrap()
}

fn w_state(n: usize) -> PureState {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for q in 0..n {
        amps[1 << q] = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    }
    PureState::from_amplitudes(amps).unwrap()
}

fn ideal(g: &ClusterGraph) -> PureState {
    build_cluster(g, &BTreeMap::new()).unwrap()
}

fn dephased_fidelity(psi: &PureState, gamma: f64) -> f64 {
    let rho = dephase(&DensityMatrix::from_pure(psi).unwrap(), DephasingChannel::new(gamma).unwrap());
    fidelity_pure_mixed(psi, &rho).unwrap()
}

fn criterion_1() -> Verdict {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for gamma in [0.01, 0.062, 0.3] {
        for n in 3..=8 {
            let chain = ideal(&ClusterGraph::chain(n).unwrap());
            for (fam, psi) in [(StateFamily::Ghz, ghz(n)), (StateFamily::W, w_state(n)), (StateFamily::LinearCluster, chain)] {
                worst = worst.max((dephasing_fidelity(fam, n, gamma).unwrap() - dephased_fidelity(&psi, gamma)).abs());
                cases += 1;
            }
        }
        for side in 2..=3 {
            let sq = ideal(&ClusterGraph::grid(side, side).unwrap());
            let f = dephasing_fidelity(StateFamily::SquareCluster, side, gamma).unwrap();
            worst = worst.max((f - dephased_fidelity(&sq, gamma)).abs());
            cases += 1;
        }
    }
    verdict(worst < 1e-10, format!("{cases} closed forms vs density-matrix simulation, max |Δ| = {worst:.1e}"))
}

fn criterion_2() -> Verdict {
    let g: f64 = 0.062;
    let f = |fam, n| dephasing_fidelity(fam, n, g).unwrap();
    let ordered = (3..=25).all(|n| {
        f(StateFamily::W, n) > f(StateFamily::Ghz, n)
            && f(StateFamily::Ghz, n) > f(StateFamily::LinearCluster, n)
            && f(StateFamily::LinearCluster, n) > f(StateFamily::SquareCluster, n)
    });
    let lin25 = f(StateFamily::LinearCluster, 25);
    let formula = ((1.0 + (-g).exp()) / 2.0).powi(25);
    let spot = (lin25 - formula).abs() < 1e-12 && (lin25 - 0.466270461604).abs() < 1e-10;
    verdict(
        ordered && spot,
        format!(
            "W > GHZ > lin > square for N=3..25: {ordered}; F_lin(25) = {lin25:.12} equals ((1+e^-Γ)/2)^25; \
             stated constant 0.46633 differs by {:.1e} and is not asserted",
            (lin25 - 0.46633).abs()
        ),
    )
}

fn direct_overlap(thetas: &[f64]) -> C64 {
    let n = thetas.len() + 1;
    let mut acc = C64::new(0.0, 0.0);
    for z in 0..1usize << n {
        let bit = |j: usize| (z >> (n - 1 - j)) & 1;
        let phase: f64 = thetas.iter().enumerate().filter(|&(j, _)| bit(j) & bit(j + 1) == 1).map(|(_, t)| t).sum();
        acc += C64::from_polar(1.0, phase);
    }
    acc / (1u64 << n) as f64
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for k in 0..100 {
        let n = 2 + k % 13;
        let thetas: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-PI..PI)).collect();
        worst = worst.max((overlap_exact(&thetas).unwrap() - direct_overlap(&thetas)).norm());
    }
    // The direct sum itself against explicitly built states.
    let thetas = [0.3, -1.1, 2.0, 0.7];
    let mut g = ClusterGraph::chain(5).unwrap();
    g.set_thetas(&thetas).unwrap();
    let built = fidelity(&ideal(&ClusterGraph::chain(5).unwrap()), &ideal(&g)).unwrap();
    let anchor = (built - direct_overlap(&thetas).norm_sqr()).abs() < 1e-12;

    let mut max_z = 0.0f64;
    let dists = [0.3, 0.8, 1.5, 3.0, 6.0]
        .map(|w| PhaseDistribution::flat(w).unwrap())
        .into_iter()
        .chain([0.1, 0.3, 0.6, 1.0, 2.0].map(|s| PhaseDistribution::gaussian(s).unwrap()));
    for (i, d) in dists.enumerate() {
        let exact = overlap_avg(d, 6).unwrap().mean_fidelity;
        let mc = overlap_mc(d, 6, 10_000, 100 + i as u64).unwrap();
        max_z = max_z.max((mc.mean - exact).abs() / mc.stderr.max(1e-15));
    }
    verdict(
        worst < 1e-10 && anchor && max_z < 4.0,
        format!("transfer vs 2^N sum (N≤14, 100 vectors) max |Δ| = {worst:.1e}; MC max deviation {max_z:.2} stderr"),
    )
}

fn criterion_4() -> Verdict {
    let lambdas: Vec<f64> = (0..=64).map(|k| TAU * k as f64 / 64.0).collect();
    let fom = |n: usize, l: f64| overlap_avg(PhaseDistribution::flat(l).unwrap(), n).unwrap().fidelity_of_mean;
    let table: Vec<Vec<f64>> = (3..=10).map(|n| lambdas.iter().map(|&l| fom(n, l)).collect()).collect();
    let at_zero = table.iter().all(|row| (row[0] - 1.0).abs() < 1e-12);
    let in_n = (1..lambdas.len()).all(|k| table.windows(2).all(|w| w[1][k] < w[0][k]));
    let in_lambda = table.iter().all(|row| row[1..].windows(2).all(|w| w[1] < w[0]));
    verdict(
        at_zero && in_n && in_lambda,
        format!("value 1 at λ=0: {at_zero}; decreasing in N: {in_n}; decreasing in λ: {in_lambda}"),
    )
}

fn cnot_reference(c: InputQubit, t: InputQubit) -> PureState {
    let a = init_register(&[c, t]).unwrap();
    let v = a.amplitudes();
    PureState::from_amplitudes(vec![v[0], v[1], v[3], v[2]]).unwrap()
}

fn zero_noise_fidelity(cfg: &GateConfig, c: InputQubit, t: InputQubit, mode: OutcomeMode<'_>) -> f64 {
    let run = run_gate_with_thetas(cfg, &[c, t], &vec![0.0; cfg.graph.num_edges()], mode).unwrap();
    fidelity(&cnot_reference(c, t), &run.output).unwrap()
}

fn criterion_5() -> Verdict {
    let (zero, one, plus) = (InputQubit::zero(), InputQubit::one(), InputQubit::plus());
    let inputs = [(zero, zero), (zero, one), (one, zero), (one, one), (plus, zero)];
    let mut worst = 0.0f64;
    let cnot4 = config_cnot4();
    for bits in [[0, 0], [0, 1], [1, 0], [1, 1]] {
        for &(c, t) in &inputs {
            worst = worst.max(1.0 - zero_noise_fidelity(&cnot4, c, t, OutcomeMode::Force(bits.to_vec())));
        }
    }
    for cfg in [config_cnot15(), config_cnot16_bridged()] {
        for &(c, t) in &inputs {
            worst = worst.max(1.0 - zero_noise_fidelity(&cfg, c, t, OutcomeMode::PostselectZero));
        }
    }
    // Footnote decoding, keyed by (s1, s3), outputs (control on 4, target on 2).
    let x = |b: u8| Pauli::new(b, 0);
    let footnote: BTreeMap<Vec<u8>, PauliString> = [[0, 0], [0, 1], [1, 0], [1, 1]]
        .into_iter()
        .map(|[s1, s3]| (vec![s1, s3], PauliString(vec![x(s1 ^ s3), x(s1)])))
        .collect();
    let footnote_ok = derive_decoding_table(&cnot4).unwrap() == Decoding::Table(footnote);
    let z_i = Decoding::PostselectOnly(PauliString(vec![Pauli::Z, Pauli::I]));
    let all_zero_ok = config_cnot15().pattern.decoding == z_i && config_cnot16_bridged().pattern.decoding == z_i;
    verdict(
        worst < 1e-10 && footnote_ok && all_zero_ok,
        format!("max infidelity {worst:.1e}; cnot4 footnote table re-derived: {footnote_ok}; σ_z⊗1 all-zero decoding: {all_zero_ok}"),
    )
}

fn criterion_6() -> Verdict {
    let spec = ExperimentSpec { experiment: Experiment::fig_cnot_default(), output_path: None };
    let table = run_experiment(&spec).unwrap();
    let mut curves: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for row in &table.rows {
        let Value::Text(name) = &row[0] else { panic!("config column") };
        curves.entry(name.clone()).or_default().push((row[2].as_f64().unwrap(), row[3].as_f64().unwrap()));
    }
    let separated = |hi: &[(f64, f64)], lo: &[(f64, f64)]| {
        hi.iter().zip(lo).filter(|((m1, e1), (m2, e2))| m1 - m2 < 4.0 * e1.hypot(*e2)).count()
    };
    let (c4, c15, c16) = (&curves["cnot4"], &curves["cnot15"], &curves["cnot16_bridged"]);
    let bad_4_15 = separated(c4, c15);
    let bad_15_16 = separated(c15, c16);
    let decreasing = curves.values().all(|c| c.windows(2).all(|w| w[1].0 < w[0].0));
    let fmt = |c: &[(f64, f64)], k: usize| format!("{:.4}±{:.4}", c[k].0, c[k].1);
    verdict(
        bad_4_15 == 0 && bad_15_16 == 0 && decreasing,
        format!(
            "σ-points failing 4-stderr order: cnot4>cnot15 {bad_4_15}/10, cnot15>cnot16_bridged {bad_15_16}/10; \
             decreasing: {decreasing}; σ=0.1: {} {} {}; σ=1.0: {} {} {}",
            fmt(c4, 0), fmt(c15, 0), fmt(c16, 0), fmt(c4, 9), fmt(c15, 9), fmt(c16, 9)
        ),
    )
}

fn criterion_7() -> Verdict {
    // (i) ideal chains: every reduced pair separable.
    let mut worst_ideal = 0.0f64;
    for n in 3..=8 {
        let psi = ideal(&ClusterGraph::chain(n).unwrap());
        for i in 1..=n {
            for j in i + 1..=n {
                let rho = partial_trace(&psi, &[i, j]).unwrap();
                worst_ideal = worst_ideal.max(PairAnalysis::of(&rho, (i, j)).unwrap().concurrence);
            }
        }
    }
    let part_i = worst_ideal < ENTANGLEMENT_TOL;

    // (ii) noisy chain(3), pair (1, 2).
    let npt = |t1: f64, t2: f64| {
        let a = PairAnalysis::of(&noisy_pair_state(&[t1, t2], (1, 2)).unwrap(), (1, 2)).unwrap();
        a.ppt_min_eig < -ENTANGLEMENT_TOL
    };
    let mut failures = Vec::new();
    for t1 in [0.0, PI / 2.0] {
        for t2 in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
            if !npt(t1, t2) {
                failures.push(format!("θ=({t1:.3},{t2:.3}) not NPT"));
            }
        }
        for t2 in [0.0, PI] {
            if npt(t1, t2) {
                let c = PairAnalysis::of(&noisy_pair_state(&[t1, t2], (1, 2)).unwrap(), (1, 2)).unwrap().concurrence;
                failures.push(format!("θ=({t1:.3},{t2:.3}) entangled, C={c:.6}"));
            }
        }
    }
    let part_ii = failures.is_empty();

    // (iii) Gaussian-averaged chains: only nearest neighbours, mirror symmetric.
    let mut part_iii = true;
    for n in 4..=8 {
        let scan = pair_scan(n, PhaseDistribution::gaussian(0.7).unwrap()).unwrap();
        let c = |i, j| scan.iter().find(|a| a.pair == (i, j)).unwrap().concurrence;
        part_iii &= scan.iter().filter(|a| a.pair.1 > a.pair.0 + 1).all(|a| a.concurrence < ENTANGLEMENT_TOL);
        part_iii &= (c(1, 2) - c(n - 1, n)).abs() < 1e-10;
    }

    // (iv) σ = 1, N = 5.
    let scan = pair_scan(5, PhaseDistribution::gaussian(1.0).unwrap()).unwrap();
    let c = |i, j| scan.iter().find(|a| a.pair == (i, j)).unwrap().concurrence;
    let part_iv = c(2, 3) < ENTANGLEMENT_TOL && c(3, 4) < ENTANGLEMENT_TOL && c(1, 2) > 0.0 && c(4, 5) > 0.0;

    verdict(
        part_i && part_ii && part_iii && part_iv,
        format!(
            "(i) {part_i} (max C {worst_ideal:.1e}); (ii) {part_ii}{}; (iii) {part_iii}; (iv) {part_iv} (C12={:.6}, C23={:.1e})",
            if failures.is_empty() { String::new() } else { format!(" [{}]", failures.join("; ")) },
            c(1, 2),
            c(2, 3)
        ),
    )
}

fn criterion_8() -> Verdict {
    let g = ClusterGraph::chain(5).unwrap();
    let psi = ideal(&g);
    let mut ok = true;
    for s3 in 0..2u8 {
        for s4 in 0..2u8 {
            let r = contract_x_pair(&psi, &g, 3, 4, MeasureMode::Force(s3), MeasureMode::Force(s4)).unwrap();
            ok &= r.graph.sites() == [1, 2, 5]
                && r.graph.kappas() == vec![0, s4, s3]
                && verify_stabilizers(&r.state, &r.graph).unwrap().pass;
        }
    }
    verdict(ok, "κ′ = {0, s4, s3} with stabilizers verified for all four (s3, s4)")
}

fn criterion_9() -> Verdict {
    let dist = PhaseDistribution::gaussian(0.5).unwrap();
    let stats: Vec<_> = [2, 4, 6, 8, 10]
        .into_iter()
        .map(|n| wire_fidelity_mc(n, InputQubit::plus(), dist, 2000, 42).unwrap())
        .collect();
    let min_gap = stats
        .windows(2)
        .map(|w| (w[0].mean - w[1].mean) / w[0].stderr.hypot(w[1].stderr))
        .fold(f64::INFINITY, f64::min);
    let means: Vec<String> = stats.iter().map(|s| format!("{:.4}", s.mean)).collect();
    verdict(min_gap >= 4.0, format!("means {} ; smallest gap {min_gap:.1} stderr", means.join(", ")))
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_clusterq")).args(args).output().unwrap();
    assert!(out.status.success());
    out.stdout
}

fn criterion_10() -> Verdict {
    // Regression constants, each first produced by an independent path.
    let mut mismatches = Vec::new();
    let mut check = |what: &str, got: f64, want: f64, tol: f64| {
        if (got - want).abs() >= tol {
            mismatches.push(format!("{what}: {got} vs {want}"));
        }
    };
    check("GHZ3 dephasing (density matrix)", dephased_fidelity(&ghz(3), 0.062), 0.915136797491, 1e-10);
    check("W3 dephasing (density matrix)", dephased_fidelity(&w_state(3), 0.062), 0.922253227255, 1e-10);
    let sq3 = ideal(&ClusterGraph::grid(3, 3).unwrap());
    check("square 3x3 dephasing (density matrix)", dephased_fidelity(&sq3, 0.062), 0.759818118229, 1e-10);
    check("lin25 dephasing", dephasing_fidelity(StateFamily::LinearCluster, 25, 0.062).unwrap(), 0.466270461604, 1e-10);
    let q = InputQubit::from_first_amplitude(0.5).unwrap();
    let phases = |t: f64| BTreeMap::from([((1, 2), t), ((2, 3), t), ((3, 4), t)]);
    // tools/oracles/cnot4.py
    check("cnot4 θ=0.2", gate_fidelity_once(&config_cnot4(), &[q, q], &phases(0.2)).unwrap(), 0.956901051881120, 1e-10);
    check("cnot4 θ=π", gate_fidelity_once(&config_cnot4(), &[q, q], &phases(PI)).unwrap(), 0.0625, 1e-12);
    // tools/oracles/concurrence.py
    let c = |t1, t2| PairAnalysis::of(&noisy_pair_state(&[t1, t2], (1, 2)).unwrap(), (1, 2)).unwrap().concurrence;
    check("C(0, π/4)", c(0.0, PI / 4.0), 0.382683432365, 1e-9);
    check("C(π/2, π/4)", c(PI / 2.0, PI / 4.0), 0.270598050073, 1e-9);
    let end = pair_scan(3, PhaseDistribution::gaussian(1.0).unwrap()).unwrap()[0].concurrence;
    check("averaged C12 N=3 σ=1", end, 0.158030139707, 1e-9);

    let runs: [&[&str]; 2] = [
        &["fig-cnot", "--grid", "0.1:1.0:9", "--samples", "200", "--seed", "42", "--no-meta"],
        &["wire-scan", "--samples", "500", "--seed", "42", "--no-meta"],
    ];
    let identical = runs.iter().all(|args| cli(args) == cli(args));
    verdict(
        mismatches.is_empty() && identical,
        format!("pinned oracle constants: {}; repeated seeded CLI runs byte-identical: {identical}",
            if mismatches.is_empty() { "all match".to_string() } else { mismatches.join("; ") }),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        (1, criterion_1, Duration::from_secs(10)),
        (2, criterion_2, Duration::from_secs(10)),
        (3, criterion_3, Duration::from_secs(30)),
        (4, criterion_4, Duration::from_secs(10)),
        (5, criterion_5, Duration::from_secs(5)),
        (6, criterion_6, Duration::from_secs(300)),
        (7, criterion_7, Duration::from_secs(60)),
        (8, criterion_8, Duration::from_secs(10)),
        (9, criterion_9, Duration::from_secs(60)),
        (10, criterion_10, Duration::from_secs(120)),
    ];
    let mut unexpected = Vec::new();
    for (id, run, budget) in criteria {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let pass = v.pass && elapsed <= budget;
        let known_red = KNOWN_RED.contains(&id);
        // Written to the raw stderr handle so the lines survive output capture.
        let _ = writeln!(
            std::io::stderr(),
            "criterion {id:>2}: {}{} [{:.1}s/{}s] {}",
            if pass { "PASS" } else { "FAIL" },
            if known_red { " (known red)" } else { "" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            v.detail
        );
        if pass == known_red {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected status: {unexpected:?}");
}
