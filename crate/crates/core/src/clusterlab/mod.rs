//! Cluster and graph states on arbitrary graphs with per-edge unwanted
//! phases, correlation-operator checks and qubit removal.

mod correction;
mod removal;
mod text;

pub use correction::{derive_local_correction, derive_local_correction_multi, LocalCorrection};
pub use removal::{contract_x_pair, remove_x, remove_z, PairRemoval, Removal};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::qstate::{init_register, InputQubit, PureState, C64};

pub type Site = u32;

const STABILIZER_TOL: f64 = 1e-8;

/// Sites, edges with their unwanted phase `θ` (0 is ideal) and the
/// eigenvalue labels `κ`.
///
/// Qubit `k` of any state built from the graph is the `k`-th entry of
/// [`ClusterGraph::sites`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterGraph {
    sites: Vec<Site>,
    edges: BTreeMap<(Site, Site), f64>,
    kappa: BTreeMap<Site, u8>,
}

fn key(a: Site, b: Site) -> (Site, Site) {
    (a.min(b), a.max(b))
}

impl ClusterGraph {
    /// Isolated sites with `κ = 0`. Labels must be distinct.
    pub fn new(sites: Vec<Site>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &s in &sites {
            if !seen.insert(s) {
                return Err(Error::InvalidGraph(format!("duplicate site {s}")));
            }
        }
        let kappa = sites.iter().map(|&s| (s, 0)).collect();
        Ok(Self { sites, edges: BTreeMap::new(), kappa })
    }

    /// Linear cluster `1 – 2 – … – n`.
    pub fn chain(n: usize) -> Result<Self> {
        Self::grid(1, n)
    }

    /// `rows × cols` lattice, sites numbered row-major from 1.
    pub fn grid(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter(format!("grid {rows}×{cols}")));
        }
        let label = |r: usize, c: usize| (r * cols + c + 1) as Site;
        let mut g = Self::new((0..rows * cols).map(|i| i as Site + 1).collect())?;
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    g.add_edge(label(r, c), label(r, c + 1), 0.0)?;
                }
                if r + 1 < rows {
                    g.add_edge(label(r, c), label(r + 1, c), 0.0)?;
                }
            }
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: Site, b: Site, theta: f64) -> Result<()> {
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop at {a}")));
        }
        for s in [a, b] {
            if !self.contains(s) {
                return Err(Error::UnknownSite(s));
            }
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParameter(format!("edge phase {theta}")));
        }
        self.edges.insert(key(a, b), theta);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: Site, b: Site) -> bool {
        self.edges.remove(&key(a, b)).is_some()
    }

    pub fn set_theta(&mut self, a: Site, b: Site, theta: f64) -> Result<()> {
        match self.edges.get_mut(&key(a, b)) {
            Some(t) => {
                *t = theta;
                Ok(())
            }
            None => Err(Error::InvalidGraph(format!("no edge ({a},{b})"))),
        }
    }

    /// Assigns phases to the edges in ascending order.
    pub fn set_thetas(&mut self, thetas: &[f64]) -> Result<()> {
        if thetas.len() != self.edges.len() {
            return Err(Error::InvalidParameter(format!(
                "{} phases for {} edges",
                thetas.len(),
                self.edges.len()
            )));
        }
        self.edges.values_mut().zip(thetas).for_each(|(t, &v)| *t = v);
        Ok(())
    }

    pub fn with_uniform_theta(mut self, theta: f64) -> Self {
        self.edges.values_mut().for_each(|t| *t = theta);
        self
    }

    pub fn set_kappa(&mut self, site: Site, value: u8) -> Result<()> {
        if value > 1 {
            return Err(Error::InvalidParameter(format!("κ = {value}")));
        }
        match self.kappa.get_mut(&site) {
            Some(k) => {
                *k = value;
                Ok(())
            }
            None => Err(Error::UnknownSite(site)),
        }
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, site: Site) -> bool {
        self.kappa.contains_key(&site)
    }

    /// Edges in ascending `(min, max)` order with their phases.
    pub fn edges(&self) -> impl Iterator<Item = ((Site, Site), f64)> + '_ {
        self.edges.iter().map(|(&e, &t)| (e, t))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: Site, b: Site) -> bool {
        self.edges.contains_key(&key(a, b))
    }

    pub fn theta(&self, a: Site, b: Site) -> Option<f64> {
        self.edges.get(&key(a, b)).copied()
    }

    pub fn kappa(&self, site: Site) -> Option<u8> {
        self.kappa.get(&site).copied()
    }

    pub fn kappas(&self) -> Vec<u8> {
        self.sites.iter().map(|s| self.kappa[s]).collect()
    }

    /// Neighbours in ascending label order.
    pub fn neighbors(&self, site: Site) -> Vec<Site> {
        let mut n: Vec<Site> = self
            .edges
            .keys()
            .filter_map(|&(a, b)| match (a == site, b == site) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect();
        n.sort_unstable();
        n
    }

    pub fn degree(&self, site: Site) -> usize {
        self.edges.keys().filter(|&&(a, b)| a == site || b == site).count()
    }

    /// 1-based register position of `site`.
    pub fn position(&self, site: Site) -> Result<usize> {
        self.sites.iter().position(|&s| s == site).map(|p| p + 1).ok_or(Error::UnknownSite(site))
    }

    /// Copy without `site` and its edges. Remaining sites keep their order.
    pub fn without_site(&self, site: Site) -> Result<Self> {
        if !self.contains(site) {
            return Err(Error::UnknownSite(site));
        }
        let mut g = self.clone();
        g.sites.retain(|&s| s != site);
        g.kappa.remove(&site);
        g.edges.retain(|&(a, b), _| a != site && b != site);
        Ok(g)
    }

    /// Same graph with every phase set to zero.
    pub fn ideal(&self) -> Self {
        self.clone().with_uniform_theta(0.0)
    }

    /// Toggles every edge among the neighbours of `site`. New edges get
    /// phase 0.
    pub(crate) fn local_complement(&mut self, site: Site) {
        let nb = self.neighbors(site);
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if self.edges.remove(&key(a, b)).is_none() {
                    self.edges.insert(key(a, b), 0.0);
                }
            }
        }
    }
}

/// Inputs at the listed sites, `|+⟩` elsewhere, then one `S_D` gate per edge
/// in ascending edge order, then `σ_z` on every site with `κ = 1`.
pub fn build_cluster(graph: &ClusterGraph, inputs: &BTreeMap<Site, InputQubit>) -> Result<PureState> {
    for &s in inputs.keys() {
        if !graph.contains(s) {
            return Err(Error::UnknownSite(s));
        }
    }
    build_with_phases(graph, inputs, graph.edges.values().copied())
}

/// [`build_cluster`] with the edge phases supplied separately, one per edge
/// in ascending edge order.
pub(crate) fn build_with_phases(
    graph: &ClusterGraph,
    inputs: &BTreeMap<Site, InputQubit>,
    thetas: impl IntoIterator<Item = f64>,
) -> Result<PureState> {
    if graph.is_empty() {
        return Err(Error::EmptyRegister);
    }
    let qubits: Vec<InputQubit> = graph
        .sites
        .iter()
        .map(|s| inputs.get(s).copied().unwrap_or_else(InputQubit::plus))
        .collect();
    let mut state = init_register(&qubits)?;
    let pos: BTreeMap<Site, usize> =
        graph.sites.iter().enumerate().map(|(i, &s)| (s, i + 1)).collect();
    for (&(a, b), theta) in graph.edges.keys().zip(thetas) {
        state.apply_cphase_in_place(pos[&a], pos[&b], theta);
    }
    for (s, &k) in &graph.kappa {
        if k == 1 {
            state.apply_pauli_z(pos[s]);
        }
    }
    Ok(state)
}

/// Per-site expectation values of the correlation operators
/// `K^(a) = σ_x^(a) ⊗_{b ∈ nbgh(a)} σ_z^(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerReport {
    pub eigenvalues: BTreeMap<Site, f64>,
    /// Every eigenvalue equals `(-1)^{κ_a}` within 1e-8.
    pub pass: bool,
}

pub(crate) fn correlation_expectation(state: &PureState, graph: &ClusterGraph, site: Site) -> f64 {
    let n = state.num_qubits();
    let bit = |s: Site| 1usize << (n - graph.position(s).expect("site in graph"));
    let x_mask = bit(site);
    let z_mask = graph.neighbors(site).into_iter().fold(0, |m, b| m | bit(b));
    let a = state.amplitudes();
    let acc: C64 = (0..a.len())
        .map(|z| {
            let v = a[z ^ x_mask].conj() * a[z];
            if (z & z_mask).count_ones() % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .sum();
    acc.re
}

pub fn verify_stabilizers(state: &PureState, graph: &ClusterGraph) -> Result<StabilizerReport> {
    if state.num_qubits() != graph.len() {
        return Err(Error::DimensionMismatch(state.num_qubits(), graph.len()));
    }
    let eigenvalues: BTreeMap<Site, f64> =
        graph.sites.iter().map(|&s| (s, correlation_expectation(state, graph, s))).collect();
    let pass = eigenvalues.iter().all(|(s, &e)| {
        let want = if graph.kappa[s] == 0 { 1.0 } else { -1.0 };
        (e - want).abs() < STABILIZER_TOL
    });
    Ok(StabilizerReport { eigenvalues, pass })
}
