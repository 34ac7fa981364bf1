//! Measurement patterns on cluster states: CNOT configurations, pattern and
//! byproduct derivation by exhaustive search, wires, and gate fidelities under
//! random entangling phases.

mod configs;
mod search;
mod wire;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::RngCore;

use crate::clusterlab::{build_with_phases, ClusterGraph, Site};
use crate::error::{Error, Result};
use crate::phasenoise::PhaseDistribution;
use crate::qstate::{
    fidelity, init_register, measure, InputQubit, LocalGate, MeasureMode, MeasurementBasis, PureState,
};
use crate::stats::{monte_carlo, SampleStats};

pub use configs::{config_cnot15, config_cnot16_bridged, config_cnot4, skeleton_cnot4, skeleton_squashed_i};
pub use search::{derive_decoding_table, derive_xy_pattern, ConfigSkeleton};
pub use wire::{single_qubit_gate, wire_fidelity_mc, wire_transfer, SingleQubitRun, WireRun};


/// `σ_x^x σ_z^z` on one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Pauli {
    pub x: u8,
    pub z: u8,
}

impl Pauli {
    pub const I: Pauli = Pauli { x: 0, z: 0 };
    pub const X: Pauli = Pauli { x: 1, z: 0 };
    pub const Z: Pauli = Pauli { x: 0, z: 1 };

    pub fn new(x: u8, z: u8) -> Self {
        Self { x: x & 1, z: z & 1 }
    }

    pub(crate) fn apply(self, state: &mut PureState, qubit: usize) {
        if self.z == 1 {
            state.apply_pauli_z(qubit);
        }
        if self.x == 1 {
            state.apply_pauli_x(qubit);
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match (self.x, self.z) {
            (0, 0) => "I",
            (1, 0) => "X",
            (0, _) => "Z",
            _ => "XZ",
        })
    }
}

/// One Pauli per output site, in output order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    pub fn identity(n: usize) -> Self {
        Self(vec![Pauli::I; n])
    }

    pub fn apply(&self, state: &mut PureState) {
        for (q, p) in self.0.iter().enumerate() {
            p.apply(state, q + 1);
        }
    }

    /// All `4^n` strings, `I < X < Z < XZ` per qubit, first qubit slowest.
    pub fn all(n: usize) -> Vec<Self> {
        let one = [Pauli::I, Pauli::X, Pauli::Z, Pauli::new(1, 1)];
        (0..4usize.pow(n as u32))
            .map(|mut code| {
                let mut v = vec![Pauli::I; n];
                for slot in v.iter_mut().rev() {
                    *slot = one[code % 4];
                    code /= 4;
                }
                Self(v)
            })
            .collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join("⊗"))
    }
}

/// Outcome-dependent Pauli undone on the outputs (before the output frame).
#[derive(Debug, Clone, PartialEq)]
pub enum Decoding {
    /// One entry per outcome bitstring.
    Table(BTreeMap<Vec<u8>, PauliString>),
    /// Only the all-zero branch is supported.
    PostselectOnly(PauliString),
}

impl Decoding {
    pub fn lookup(&self, outcomes: &[u8]) -> Result<&PauliString> {
        let missing = || Error::MissingDecoding(outcomes.to_vec());
        match self {
            Decoding::Table(t) => t.get(outcomes).ok_or_else(missing),
            Decoding::PostselectOnly(p) if outcomes.iter().all(|&s| s == 0) => Ok(p),
            Decoding::PostselectOnly(_) => Err(missing()),
        }
    }

    pub fn all_zero(&self, steps: usize) -> Result<&PauliString> {
        self.lookup(&vec![0; steps])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementPattern {
    /// Executed in order.
    pub steps: Vec<(Site, MeasurementBasis)>,
    /// Surviving sites in logical order.
    pub outputs: Vec<Site>,
    pub decoding: Decoding,
}

impl MeasurementPattern {
    pub fn measured_sites(&self) -> Vec<Site> {
        self.steps.iter().map(|&(s, _)| s).collect()
    }
}

#[derive(Debug, Clone)]
pub struct GateConfig {
    pub name: String,
    pub graph: ClusterGraph,
    /// Sites receiving the logical inputs, in logical order.
    pub input_sites: Vec<Site>,
    pub pattern: MeasurementPattern,
    /// Target unitary on the logical register (first logical qubit = MSB).
    pub ideal_gate: DMatrix<C64>,
    /// Applied to each output after decoding.
    pub output_frame: Vec<LocalGate>,
}

impl GateConfig {
    pub fn num_logical(&self) -> usize {
        self.input_sites.len()
    }

    /// Checks that inputs, measured sites and outputs fit the graph.
    pub fn validate(&self) -> Result<()> {
        let mut seen: Vec<Site> = self.pattern.measured_sites();
        seen.extend(&self.pattern.outputs);
        let mut sorted = seen.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != seen.len() {
            return Err(Error::InvalidGraph(format!("{}: site measured twice or also an output", self.name)));
        }
        let mut all = self.graph.sites().to_vec();
        all.sort_unstable();
        if sorted != all {
            return Err(Error::InvalidGraph(format!("{}: pattern does not cover the graph", self.name)));
        }
        for &s in &self.input_sites {
            if !self.graph.contains(s) {
                return Err(Error::UnknownSite(s));
            }
        }
        let dim = 1usize << self.num_logical();
        if self.pattern.outputs.len() != self.num_logical()
            || self.output_frame.len() != self.num_logical()
            || self.ideal_gate.shape() != (dim, dim)
        {
            return Err(Error::InvalidGraph(format!("{}: logical sizes disagree", self.name)));
        }
        Ok(())
    }

    /// Phases in ascending edge order taken from the graph.
    pub fn graph_thetas(&self) -> Vec<f64> {
        self.graph.edges().map(|(_, t)| t).collect()
    }

    /// Per-edge phases from a map; absent edges get 0.
    pub fn thetas_from_map(&self, map: &BTreeMap<(Site, Site), f64>) -> Result<Vec<f64>> {
        for &(a, b) in map.keys() {
            if !self.graph.has_edge(a, b) {
                return Err(Error::InvalidGraph(format!("no edge ({a}, {b}) in {}", self.name)));
            }
        }
        Ok(self
            .graph
            .edges()
            .map(|((a, b), _)| map.get(&(a, b)).or_else(|| map.get(&(b, a))).copied().unwrap_or(0.0))
            .collect())
    }

    /// `ideal_gate` applied to the product of `inputs`.
    pub fn ideal_output(&self, inputs: &[InputQubit]) -> Result<PureState> {
        let psi = init_register(inputs)?;
        if psi.num_qubits() != self.num_logical() {
            return Err(Error::DimensionMismatch(psi.num_qubits(), self.num_logical()));
        }
        let v = &self.ideal_gate * DVector::from_column_slice(psi.amplitudes());
        PureState::from_amplitudes(v.iter().copied().collect())
    }
}

/// How measurement outcomes are chosen in [`run_gate`].
pub enum OutcomeMode<'a> {
    /// Every outcome forced to 0 (the `+1` eigenvector).
    PostselectZero,
    Sample(&'a mut dyn RngCore),
    /// One bit per pattern step.
    Force(Vec<u8>),
}

#[derive(Debug, Clone)]
pub struct GateRun {
    pub outcomes: Vec<u8>,
    /// Born probability of the realised branch.
    pub probability: f64,
    /// Decoded, framed logical output.
    pub output: PureState,
}

/// Executes `config` on `inputs` (one per input site, logical order) with
/// entangling phases `thetas` (one per edge, ascending edge order).
pub fn run_gate_with_thetas(
    config: &GateConfig,
    inputs: &[InputQubit],
    thetas: &[f64],
    mode: OutcomeMode<'_>,
) -> Result<GateRun> {
    if inputs.len() != config.num_logical() {
        return Err(Error::DimensionMismatch(inputs.len(), config.num_logical()));
    }
    if thetas.len() != config.graph.num_edges() {
        return Err(Error::DimensionMismatch(thetas.len(), config.graph.num_edges()));
    }
    let steps = &config.pattern.steps;
    if let OutcomeMode::Force(bits) = &mode {
        if bits.len() != steps.len() {
            return Err(Error::DimensionMismatch(bits.len(), steps.len()));
        }
    }
    let placed: BTreeMap<Site, InputQubit> = config.input_sites.iter().copied().zip(inputs.iter().copied()).collect();
    let mut state = build_with_phases(&config.graph, &placed, thetas.iter().copied())?;
    let mut live: Vec<Site> = config.graph.sites().to_vec();
    let mut outcomes = Vec::with_capacity(steps.len());
    let mut probability = 1.0;
    let mut mode = mode;
    for (k, &(site, basis)) in steps.iter().enumerate() {
        let idx = live.iter().position(|&s| s == site).ok_or(Error::UnknownSite(site))?;
        let m_mode = match &mut mode {
            OutcomeMode::PostselectZero => MeasureMode::Force(0),
            OutcomeMode::Force(bits) => MeasureMode::Force(bits[k]),
            OutcomeMode::Sample(rng) => MeasureMode::Sample(&mut **rng),
        };
        let m = measure(&state, idx + 1, basis, m_mode)?;
        state = m.state;
        probability *= m.probability;
        outcomes.push(m.outcome);
        live.remove(idx);
    }
    let mut output = to_logical_order(&state, &live, &config.pattern.outputs)?;
    config.pattern.decoding.lookup(&outcomes)?.apply(&mut output);
    for (q, g) in config.output_frame.iter().enumerate() {
        output.apply_local_in_place(q + 1, g);
    }
    Ok(GateRun { outcomes, probability, output })
}

fn to_logical_order(state: &PureState, live: &[Site], outputs: &[Site]) -> Result<PureState> {
    let order = outputs
        .iter()
        .map(|o| live.iter().position(|s| s == o).map(|i| i + 1).ok_or(Error::UnknownSite(*o)))
        .collect::<Result<Vec<usize>>>()?;
    state.permuted(&order)
}

/// [`run_gate_with_thetas`] with phases given per edge; missing edges are 0.
pub fn run_gate(
    config: &GateConfig,
    inputs: &[InputQubit],
    thetas: &BTreeMap<(Site, Site), f64>,
    mode: OutcomeMode<'_>,
) -> Result<GateRun> {
    run_gate_with_thetas(config, inputs, &config.thetas_from_map(thetas)?, mode)
}

fn fidelity_with_thetas(config: &GateConfig, inputs: &[InputQubit], thetas: &[f64]) -> Result<f64> {
    let ideal = config.ideal_output(inputs)?;
    let run = run_gate_with_thetas(config, inputs, thetas, OutcomeMode::PostselectZero)?;
    fidelity(&ideal, &run.output)
}

/// `|⟨ψ_ideal|ψ_noisy⟩|²` on the all-zero branch.
pub fn gate_fidelity_once(
    config: &GateConfig,
    inputs: &[InputQubit],
    thetas: &BTreeMap<(Site, Site), f64>,
) -> Result<f64> {
    fidelity_with_thetas(config, inputs, &config.thetas_from_map(thetas)?)
}

/// Gate fidelity averaged over i.i.d. edge phases from `dist`.
pub fn gate_fidelity_mc(
    config: &GateConfig,
    inputs: &[InputQubit],
    dist: PhaseDistribution,
    n_samples: usize,
    master_seed: u64,
) -> Result<SampleStats> {
    let dist = dist.validated()?;
    let edges = config.graph.num_edges();
    monte_carlo(n_samples, master_seed, |rng| {
        fidelity_with_thetas(config, inputs, &dist.sample_phases(edges, rng))
    })
}

/// `CNOT` with the first logical qubit as control.
pub fn cnot_matrix() -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |r, c| {
        let target = [0, 1, 3, 2][c];
        C64::new(if r == target { 1.0 } else { 0.0 }, 0.0)
    })
}
