//! Figure-reproduction experiments over the `clusterq` library, emitted as
//! CSV tables.

mod csv;
mod grid;

use std::f64::consts::TAU;
use std::path::PathBuf;

use clusterq::clusterlab::{build_cluster, verify_stabilizers, ClusterGraph};
use clusterq::entanglement::pair_scan;
use clusterq::oneway::{config_cnot15, config_cnot16_bridged, config_cnot4, gate_fidelity_mc, wire_fidelity_mc};
use clusterq::phasenoise::{dephasing_fidelity, overlap_avg, PhaseDistribution, StateFamily};
use clusterq::qstate::InputQubit;

pub use csv::{format_float, ResultTable, Value};
pub use grid::Grid;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("invalid experiment: {0}")]
    Spec(String),
    #[error(transparent)]
    Core(#[from] clusterq::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, BenchError>;

/// One experiment with its parameters.
#[derive(Debug, Clone)]
pub enum Experiment {
    /// Phase-averaged chain fidelity against flat-noise width.
    FigNoise { n_min: usize, n_max: usize, lambdas: Grid },
    /// Closed-form dephasing fidelities of W, GHZ, linear and square clusters.
    FigDephasing { n_min: usize, n_max: usize, gammas: Grid },
    /// Mean CNOT fidelity under Gaussian phases for the three layouts.
    FigCnot { sigmas: Grid, samples: usize, seed: u64, amplitude: f64 },
    /// Pair concurrences of Gaussian-averaged chains.
    ConcurrenceScan { n_min: usize, n_max: usize, sigmas: Grid },
    /// Mean transfer fidelity of `|+⟩` along noisy wires.
    WireScan { lengths: Vec<usize>, sigmas: Grid, samples: usize, seed: u64 },
    /// Correlation-operator eigenvalues of an ideal graph state.
    StabilizerCheck { graph: ClusterGraph },
}

impl Experiment {
    pub fn fig_noise_default() -> Self {
        Self::FigNoise { n_min: 3, n_max: 10, lambdas: Grid::new(0.0, TAU, 64).expect("valid grid") }
    }

    pub fn fig_dephasing_default() -> Self {
        Self::FigDephasing { n_min: 3, n_max: 25, gammas: Grid::point(0.062) }
    }

    pub fn fig_cnot_default() -> Self {
        Self::FigCnot { sigmas: Grid::new(0.1, 1.0, 9).expect("valid grid"), samples: 2000, seed: 42, amplitude: 0.5 }
    }

    pub fn columns(&self) -> &'static [&'static str] {
        match self {
            Self::FigNoise { .. } => &["N", "lambda", "fidelity_of_mean", "mean_fidelity"],
            Self::FigDephasing { .. } => &["family", "N", "gamma", "fidelity"],
            Self::FigCnot { .. } => &["config", "sigma", "mean", "stderr", "n_samples"],
            Self::ConcurrenceScan { .. } => &["N", "sigma", "i", "j", "concurrence", "ppt_min_eig"],
            Self::WireScan { .. } => &["N", "sigma", "mean", "stderr"],
            Self::StabilizerCheck { .. } => &["site", "kappa", "eigenvalue"],
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Self::FigCnot { seed, .. } | Self::WireScan { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let range = |lo: usize, hi: usize, min: usize, max: usize, what: &str| {
            if lo < min || hi > max || lo > hi {
                Err(BenchError::Spec(format!("{what} range {lo}..={hi} outside {min}..={max}")))
            } else {
                Ok(())
            }
        };
        let samples = |n: usize| {
            if n < 2 {
                Err(BenchError::Spec(format!("need at least 2 samples, got {n}")))
            } else {
                Ok(())
            }
        };
        match self {
            Self::FigNoise { n_min, n_max, .. } => range(*n_min, *n_max, 2, 64, "N"),
            Self::FigDephasing { n_min, n_max, .. } => range(*n_min, *n_max, 3, 1000, "N"),
            Self::FigCnot { samples: n, amplitude, .. } => {
                samples(*n)?;
                if !(0.0..=1.0).contains(amplitude) {
                    return Err(BenchError::Spec(format!("amplitude {amplitude} outside [0, 1]")));
                }
                Ok(())
            }
            Self::ConcurrenceScan { n_min, n_max, .. } => range(*n_min, *n_max, 2, 10, "N"),
            Self::WireScan { lengths, samples: n, .. } => {
                samples(*n)?;
                if lengths.is_empty() || lengths.windows(2).any(|w| w[0] >= w[1]) || lengths[0] < 2 {
                    return Err(BenchError::Spec("wire lengths must be ≥ 2 and strictly increasing".into()));
                }
                Ok(())
            }
            Self::StabilizerCheck { graph } => {
                if graph.is_empty() {
                    return Err(BenchError::Spec("empty graph".into()));
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
}

fn gaussian(sigma: f64) -> Result<PhaseDistribution> {
    Ok(PhaseDistribution::gaussian(sigma)?)
}

/// Runs the experiment; row order is fixed by the parameters alone.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultTable> {
    let exp = &spec.experiment;
    exp.validate()?;
    let mut table = ResultTable::new(exp.columns(), exp.seed());
    match exp {
        Experiment::FigNoise { n_min, n_max, lambdas } => {
            for n in *n_min..=*n_max {
                for lam in lambdas.values() {
                    let r = overlap_avg(PhaseDistribution::flat(lam)?, n)?;
                    table.push(vec![Value::Int(n as i64), lam.into(), r.fidelity_of_mean.into(), r.mean_fidelity.into()]);
                }
            }
        }
        Experiment::FigDephasing { n_min, n_max, gammas } => {
            let families = [StateFamily::W, StateFamily::Ghz, StateFamily::LinearCluster, StateFamily::SquareCluster];
            for fam in families {
                for n in *n_min..=*n_max {
                    for g in gammas.values() {
                        let f = dephasing_fidelity(fam, n, g)?;
                        table.push(vec![Value::Text(fam.name().into()), Value::Int(n as i64), g.into(), f.into()]);
                    }
                }
            }
        }
        Experiment::FigCnot { sigmas, samples, seed, amplitude } => {
            let q = InputQubit::from_first_amplitude(*amplitude)?;
            for cfg in [config_cnot4(), config_cnot15(), config_cnot16_bridged()] {
                for s in sigmas.values() {
                    let st = gate_fidelity_mc(&cfg, &[q, q], gaussian(s)?, *samples, *seed)?;
                    table.push(vec![
                        Value::Text(cfg.name.clone()),
                        s.into(),
                        st.mean.into(),
                        st.stderr.into(),
                        Value::Int(st.n_samples as i64),
                    ]);
                }
            }
        }
        Experiment::ConcurrenceScan { n_min, n_max, sigmas } => {
            for n in *n_min..=*n_max {
                for s in sigmas.values() {
                    for a in pair_scan(n, gaussian(s)?)? {
                        table.push(vec![
                            Value::Int(n as i64),
                            s.into(),
                            Value::Int(a.pair.0 as i64),
                            Value::Int(a.pair.1 as i64),
                            a.concurrence.into(),
                            a.ppt_min_eig.into(),
                        ]);
                    }
                }
            }
        }
        Experiment::WireScan { lengths, sigmas, samples, seed } => {
            for &n in lengths {
                for s in sigmas.values() {
                    let st = wire_fidelity_mc(n, InputQubit::plus(), gaussian(s)?, *samples, *seed)?;
                    table.push(vec![Value::Int(n as i64), s.into(), st.mean.into(), st.stderr.into()]);
                }
            }
        }
        Experiment::StabilizerCheck { graph } => {
            let ideal = graph.ideal();
            let state = build_cluster(&ideal, &Default::default())?;
            let report = verify_stabilizers(&state, &ideal)?;
            for (&site, &ev) in &report.eigenvalues {
                let kappa = ideal.kappa(site).unwrap_or(0);
                table.push(vec![Value::Int(site as i64), Value::Int(kappa as i64), ev.into()]);
            }
        }
    }
    Ok(table)
}
