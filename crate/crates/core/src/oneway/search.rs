use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{
    run_gate_with_thetas, to_logical_order, Decoding, GateConfig, MeasurementPattern, OutcomeMode, PauliString,
};
use crate::clusterlab::{build_cluster, ClusterGraph, Site};
use crate::error::{Error, Result};
use crate::qstate::{fidelity, measure, InputQubit, LocalGate, MeasureMode, MeasurementBasis, PureState};

const MATCH_TOL: f64 = 1e-9;
const MAX_TABLE_STEPS: usize = 10;

/// Everything about a gate layout except the X/Y choice on searched sites.
#[derive(Debug, Clone)]
pub struct ConfigSkeleton {
    pub name: String,
    pub graph: ClusterGraph,
    pub input_sites: Vec<Site>,
    pub outputs: Vec<Site>,
    /// Measured first with outcome 0, before any searched site.
    pub prefix: Vec<(Site, MeasurementBasis)>,
    /// Sites to assign `X` or `Y`, measured in this order.
    pub search_sites: Vec<Site>,
    pub ideal_gate: DMatrix<C64>,
    pub output_frame: Vec<LocalGate>,
}

impl ConfigSkeleton {
    pub fn with_pattern(&self, pattern: MeasurementPattern) -> GateConfig {
        GateConfig {
            name: self.name.clone(),
            graph: self.graph.clone(),
            input_sites: self.input_sites.clone(),
            pattern,
            ideal_gate: self.ideal_gate.clone(),
            output_frame: self.output_frame.clone(),
        }
    }

    fn pattern(&self, bases: &[MeasurementBasis], decoding: PauliString) -> MeasurementPattern {
        let mut steps = self.prefix.clone();
        steps.extend(self.search_sites.iter().copied().zip(bases.iter().copied()));
        MeasurementPattern { steps, outputs: self.outputs.clone(), decoding: Decoding::PostselectOnly(decoding) }
    }
}

/// Computational inputs plus one superposition on each logical qubit.
fn search_probes(n: usize) -> Vec<Vec<InputQubit>> {
    let mut probes: Vec<Vec<InputQubit>> = (0..1usize << n)
        .map(|bits| {
            (0..n)
                .map(|q| if (bits >> (n - 1 - q)) & 1 == 1 { InputQubit::one() } else { InputQubit::zero() })
                .collect()
        })
        .collect();
    for q in 0..n {
        let mut p = vec![InputQubit::zero(); n];
        p[q] = InputQubit::plus();
        probes.push(p);
    }
    probes
}

/// Products of `|0⟩, |1⟩, |+⟩, |+i⟩`: enough to fix a linear map up to one
/// global phase.
pub(crate) fn full_probes(n: usize) -> Vec<Vec<InputQubit>> {
    let one = [InputQubit::zero(), InputQubit::one(), InputQubit::plus(), InputQubit::plus_y()];
    (0..4usize.pow(n as u32))
        .map(|mut code| {
            let mut v = vec![InputQubit::zero(); n];
            for slot in v.iter_mut().rev() {
                *slot = one[code % 4];
                code /= 4;
            }
            v
        })
        .collect()
}

/// Zero-noise all-zero branch reproduces the ideal gate on every full probe.
fn confirms(config: &GateConfig) -> Result<bool> {
    let zeros = vec![0.0; config.graph.num_edges()];
    for p in full_probes(config.num_logical()) {
        let run = match run_gate_with_thetas(config, &p, &zeros, OutcomeMode::PostselectZero) {
            Ok(r) => r,
            Err(Error::ZeroProbabilityOutcome { .. }) => return Ok(false),
            Err(e) => return Err(e),
        };
        if fidelity(&config.ideal_output(&p)?, &run.output)? < 1.0 - MATCH_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Dfs<'a> {
    skel: &'a ConfigSkeleton,
    required: Option<&'a PauliString>,
    ideals: Vec<PureState>,
    candidates: Vec<PauliString>,
    bases: Vec<MeasurementBasis>,
}

impl Dfs<'_> {
    fn leaf(&self, states: &[PureState], live: &[Site]) -> Result<Option<PauliString>> {
        let outs = states
            .iter()
            .map(|s| to_logical_order(s, live, &self.skel.outputs))
            .collect::<Result<Vec<_>>>()?;
        for p in &self.candidates {
            if self.required.is_some_and(|r| r != p) {
                continue;
            }
            let ok = outs.iter().zip(&self.ideals).all(|(o, ideal)| {
                let mut o = o.clone();
                p.apply(&mut o);
                for (q, g) in self.skel.output_frame.iter().enumerate() {
                    o.apply_local_in_place(q + 1, g);
                }
                fidelity(ideal, &o).is_ok_and(|f| f > 1.0 - MATCH_TOL)
            });
            if ok {
                let config = self.skel.with_pattern(self.skel.pattern(&self.bases, p.clone()));
                if confirms(&config)? {
                    return Ok(Some(p.clone()));
                }
            }
        }
        Ok(None)
    }

    fn visit(&mut self, depth: usize, states: Vec<PureState>, live: Vec<Site>) -> Result<Option<PauliString>> {
        if depth == self.skel.search_sites.len() {
            return self.leaf(&states, &live);
        }
        let site = self.skel.search_sites[depth];
        let idx = live.iter().position(|&s| s == site).ok_or(Error::UnknownSite(site))?;
        let mut next_live = live;
        next_live.remove(idx);
        for basis in [MeasurementBasis::X, MeasurementBasis::Y] {
            let Some(next) = measure_all(&states, idx + 1, basis)? else { continue };
            self.bases.push(basis);
            if let Some(p) = self.visit(depth + 1, next, next_live.clone())? {
                return Ok(Some(p));
            }
            self.bases.pop();
        }
        Ok(None)
    }
}

/// Forces outcome 0 on every state; `None` if some branch is impossible.
fn measure_all(states: &[PureState], qubit: usize, basis: MeasurementBasis) -> Result<Option<Vec<PureState>>> {
    let mut out = Vec::with_capacity(states.len());
    for s in states {
        match measure(s, qubit, basis, MeasureMode::Force(0)) {
            Ok(m) => out.push(m.state),
            Err(Error::ZeroProbabilityOutcome { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(out))
}

/// First `X`/`Y` assignment to the searched sites (lexicographic, `X < Y`,
/// in `search_sites` order) whose all-zero branch equals the ideal gate up
/// to a fixed Pauli on the outputs. With `required`, only that Pauli counts.
///
/// Probe states share measured prefixes, so each tree node is simulated once.
pub fn derive_xy_pattern(skel: &ConfigSkeleton, required: Option<&PauliString>) -> Result<MeasurementPattern> {
    let n = skel.input_sites.len();
    if skel.outputs.len() != n || skel.output_frame.len() != n {
        return Err(Error::InvalidGraph(format!("{}: inputs and outputs disagree", skel.name)));
    }
    let probes = search_probes(n);
    let blank = skel.with_pattern(MeasurementPattern {
        steps: vec![],
        outputs: skel.outputs.clone(),
        decoding: Decoding::PostselectOnly(PauliString::identity(n)),
    });
    let ideals = probes.iter().map(|p| blank.ideal_output(p)).collect::<Result<Vec<_>>>()?;

    let ideal_graph = skel.graph.ideal();
    let mut states = Vec::with_capacity(probes.len());
    for p in &probes {
        let placed: BTreeMap<Site, InputQubit> = skel.input_sites.iter().copied().zip(p.iter().copied()).collect();
        states.push(build_cluster(&ideal_graph, &placed)?);
    }
    let mut live = skel.graph.sites().to_vec();
    for &(site, basis) in &skel.prefix {
        let idx = live.iter().position(|&s| s == site).ok_or(Error::UnknownSite(site))?;
        states = measure_all(&states, idx + 1, basis)?
            .ok_or_else(|| Error::NoValidPattern(format!("{}: prefix branch impossible", skel.name)))?;
        live.remove(idx);
    }

    let mut dfs = Dfs { skel, required, ideals, candidates: PauliString::all(n), bases: Vec::new() };
    match dfs.visit(0, states, live)? {
        Some(p) => Ok(skel.pattern(&dfs.bases, p)),
        None => Err(Error::NoValidPattern(skel.name.clone())),
    }
}

/// Decoding Pauli for every outcome branch of `config`'s pattern, found by
/// searching all Pauli strings at zero noise over the full probe set.
pub fn derive_decoding_table(config: &GateConfig) -> Result<Decoding> {
    let steps = config.pattern.steps.len();
    if steps > MAX_TABLE_STEPS {
        return Err(Error::Unsupported(format!("decoding table over {steps} outcomes")));
    }
    let zeros = vec![0.0; config.graph.num_edges()];
    let probes = full_probes(config.num_logical());
    let candidates = PauliString::all(config.num_logical());
    let mut table = BTreeMap::new();
    for code in 0..1usize << steps {
        let bits: Vec<u8> = (0..steps).map(|k| ((code >> (steps - 1 - k)) & 1) as u8).collect();
        let mut trial = config.clone();
        let mut found = None;
        for p in &candidates {
            trial.pattern.decoding = Decoding::Table(BTreeMap::from([(bits.clone(), p.clone())]));
            let mut ok = true;
            for probe in &probes {
                let run = match run_gate_with_thetas(&trial, probe, &zeros, OutcomeMode::Force(bits.clone())) {
                    Ok(r) => r,
                    Err(Error::ZeroProbabilityOutcome { .. }) => continue,
                    Err(e) => return Err(e),
                };
                if fidelity(&trial.ideal_output(probe)?, &run.output)? < 1.0 - MATCH_TOL {
                    ok = false;
                    break;
                }
            }
            if ok {
                found = Some(p.clone());
                break;
            }
        }
        table.insert(bits.clone(), found.ok_or(Error::MissingDecoding(bits))?);
    }
    Ok(Decoding::Table(table))
}
