use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use super::OutcomeMode;
use crate::clifford::Clifford1;
use crate::clusterlab::{build_with_phases, derive_local_correction_multi, ClusterGraph, Site};
use crate::error::{Error, Result};
use crate::phasenoise::PhaseDistribution;
use crate::qstate::{fidelity, measure, InputQubit, LocalGate, MeasureMode, MeasurementBasis, PureState};
use crate::stats::{monte_carlo, SampleStats};

#[derive(Debug, Clone)]
pub struct WireRun {
    pub outcomes: Vec<u8>,
    pub probability: f64,
    /// Corrected state of site `N`.
    pub output: PureState,
    /// Fidelity of `output` with the input qubit.
    pub fidelity: f64,
}

/// Measures sites `1..n-1` of a chain in `σ_x`; returns the raw state of
/// site `n`.
fn run_chain(input: InputQubit, thetas: &[f64], mode: &mut OutcomeMode<'_>) -> Result<(Vec<u8>, f64, PureState)> {
    let n = thetas.len() + 1;
    let graph = ClusterGraph::chain(n)?;
    let mut state = build_with_phases(&graph, &BTreeMap::from([(1 as Site, input)]), thetas.iter().copied())?;
    let mut outcomes = Vec::with_capacity(n - 1);
    let mut probability = 1.0;
    for k in 0..n - 1 {
        let m_mode = match mode {
            OutcomeMode::PostselectZero => MeasureMode::Force(0),
            OutcomeMode::Force(bits) => MeasureMode::Force(*bits.get(k).ok_or(Error::DimensionMismatch(bits.len(), n - 1))?),
            OutcomeMode::Sample(rng) => MeasureMode::Sample(&mut **rng),
        };
        let m = measure(&state, 1, MeasurementBasis::X, m_mode)?;
        outcomes.push(m.outcome);
        probability *= m.probability;
        state = m.state;
    }
    Ok((outcomes, probability, state))
}

/// Clifford that maps the ideal wire's output back to its input for the
/// given branch, found once over the probes `|0⟩, |+⟩, |+i⟩`.
fn wire_correction(outcomes: &[u8]) -> Result<Clifford1> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<u8>, Clifford1>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("cache lock").get(outcomes) {
        return Ok(c.clone());
    }
    let zeros = vec![0.0; outcomes.len()];
    let pairs = [InputQubit::zero(), InputQubit::plus(), InputQubit::plus_y()]
        .into_iter()
        .map(|p| {
            let (_, _, out) = run_chain(p, &zeros, &mut OutcomeMode::Force(outcomes.to_vec()))?;
            Ok((out, p.to_state()))
        })
        .collect::<Result<Vec<_>>>()?;
    let corr = derive_local_correction_multi(&pairs, &[1])?;
    let c = corr.on(1).cloned().ok_or(Error::NoLocalCorrection)?;
    cache.lock().expect("cache lock").insert(outcomes.to_vec(), c.clone());
    Ok(c)
}

/// Teleports `input` from site 1 to site `N = thetas.len() + 1` of a noisy
/// chain by `σ_x` measurements, then undoes the zero-noise byproduct.
pub fn wire_transfer(input: InputQubit, thetas: &[f64], mode: OutcomeMode<'_>) -> Result<WireRun> {
    if thetas.is_empty() {
        return Err(Error::InvalidParameter("a wire needs at least 2 sites".into()));
    }
    let mut mode = mode;
    let (outcomes, probability, mut output) = run_chain(input, thetas, &mut mode)?;
    output.apply_mat2(1, &wire_correction(&outcomes)?.matrix());
    let fidelity = fidelity(&input.to_state(), &output)?;
    Ok(WireRun { outcomes, probability, output, fidelity })
}

/// Mean all-zero-branch transfer fidelity over i.i.d. phases on `n − 1` bonds.
pub fn wire_fidelity_mc(
    n: usize,
    input: InputQubit,
    dist: PhaseDistribution,
    n_samples: usize,
    master_seed: u64,
) -> Result<SampleStats> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("wire length {n}")));
    }
    let dist = dist.validated()?;
    monte_carlo(n_samples, master_seed, |rng| {
        Ok(wire_transfer(input, &dist.sample_phases(n - 1, rng), OutcomeMode::PostselectZero)?.fidelity)
    })
}

#[derive(Debug, Clone)]
pub struct SingleQubitRun {
    pub outcome: u8,
    pub probability: f64,
    /// Site 2 as produced; the byproduct is not undone.
    pub output: PureState,
    /// What the measurement implements at zero noise, e.g. `"X·H·Rz(0.5)"`.
    pub gate: String,
    /// Ideal output for this outcome at zero noise.
    pub expected: PureState,
}

/// Two-site chain with phase `theta`; site 1 holds `input` and is measured
/// in the equatorial basis at angle `−alpha`. Outcome `s` realises
/// `X^s·H·R_z(α)` with `R_z(α) = diag(1, e^{iα})`.
pub fn single_qubit_gate(alpha: f64, input: InputQubit, theta: f64, mode: MeasureMode<'_>) -> Result<SingleQubitRun> {
    let graph = ClusterGraph::chain(2)?;
    let state = build_with_phases(&graph, &BTreeMap::from([(1 as Site, input)]), [theta])?;
    let m = measure(&state, 1, MeasurementBasis::planar(-alpha), mode)?;
    let mut expected = input.to_state();
    expected.apply_local_in_place(1, &LocalGate::PhaseZ(alpha));
    expected.apply_local_in_place(1, &LocalGate::Hadamard);
    let mut gate = format!("H·Rz({alpha})");
    if m.outcome == 1 {
        expected.apply_pauli_x(1);
        gate = format!("X·{gate}");
    }
    Ok(SingleQubitRun { outcome: m.outcome, probability: m.probability, output: m.state, gate, expected })
}
