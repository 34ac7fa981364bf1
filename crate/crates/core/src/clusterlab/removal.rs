use std::collections::BTreeMap;

use super::{build_cluster, correlation_expectation, ClusterGraph, LocalCorrection, Site};
use crate::clifford::{self, cliffords};
use crate::error::{Error, Result};
use crate::qstate::{measure, LocalGate, MeasureMode, MeasurementBasis, PureState};

const SIGN_TOL: f64 = 1e-8;

/// Result of measuring one site out of a cluster.
#[derive(Debug, Clone)]
pub struct Removal {
    pub outcome: u8,
    pub probability: f64,
    /// Post-measurement state with `correction` already applied.
    pub state: PureState,
    /// Graph of the surviving sites, with updated `κ`.
    pub graph: ClusterGraph,
    /// Local operation applied to the raw post-measurement state.
    pub correction: LocalCorrection,
}

fn check_dims(state: &PureState, graph: &ClusterGraph) -> Result<()> {
    if state.num_qubits() != graph.len() {
        return Err(Error::DimensionMismatch(state.num_qubits(), graph.len()));
    }
    Ok(())
}

fn kappa_of(eigenvalue: f64) -> Option<u8> {
    if (eigenvalue - 1.0).abs() < SIGN_TOL {
        Some(0)
    } else if (eigenvalue + 1.0).abs() < SIGN_TOL {
        Some(1)
    } else {
        None
    }
}

/// Keeps the phases of edges that survive from `original`; edges created by
/// local complementation are ideal.
fn restore_phases(graph: &mut ClusterGraph, original: &ClusterGraph) {
    let edges: Vec<(Site, Site)> = graph.edges().map(|(e, _)| e).collect();
    for (a, b) in edges {
        let t = original.theta(a, b).unwrap_or(0.0);
        graph.set_theta(a, b, t).expect("edge exists");
    }
}

/// `σ_x` measurement of `site`.
///
/// The surviving graph follows the graph-state rule for an `X` measurement:
/// with `b₀` the smallest-labelled neighbour, `G' = τ_{b₀}(τ_v(τ_{b₀}(G)) − v)`
/// where `τ` is local complementation. The single-qubit Clifford on `b₀`
/// that brings the outcome branch back to standard form, and the new `κ`
/// labels, are derived on the ideal graph state and then applied to
/// `state`, so phase noise is carried along untouched.
pub fn remove_x(
    state: &PureState,
    graph: &ClusterGraph,
    site: Site,
    mode: MeasureMode<'_>,
) -> Result<Removal> {
    check_dims(state, graph)?;
    let pos = graph.position(site)?;
    let m = measure(state, pos, MeasurementBasis::X, mode)?;
    let nb = graph.neighbors(site);
    let Some(&b0) = nb.first() else {
        return Ok(Removal {
            outcome: m.outcome,
            probability: m.probability,
            state: m.state,
            graph: graph.without_site(site)?,
            correction: LocalCorrection::identity(),
        });
    };

    let mut next = graph.clone();
    next.local_complement(b0);
    next.local_complement(site);
    let mut next = next.without_site(site)?;
    next.local_complement(b0);
    restore_phases(&mut next, graph);

    let reference = build_cluster(&graph.ideal(), &BTreeMap::new())?;
    let branch = measure(&reference, pos, MeasurementBasis::X, MeasureMode::Force(m.outcome))?;
    let b0_pos = next.position(b0)?;
    let ideal_next = next.ideal();
    for c in cliffords() {
        let mut fixed = branch.state.clone();
        fixed.apply_mat2(b0_pos, &c.matrix());
        let kappas: Option<Vec<u8>> = ideal_next
            .sites()
            .iter()
            .map(|&s| kappa_of(correlation_expectation(&fixed, &ideal_next, s)))
            .collect();
        if let Some(kappas) = kappas {
            for (&s, k) in ideal_next.sites().iter().zip(kappas) {
                next.set_kappa(s, k)?;
            }
            let correction = LocalCorrection { ops: vec![(b0_pos, c.clone())] };
            let mut out = m.state;
            correction.apply_in_place(&mut out)?;
            return Ok(Removal {
                outcome: m.outcome,
                probability: m.probability,
                state: out,
                graph: next,
                correction,
            });
        }
    }
    Err(Error::NoLocalCorrection)
}

/// `σ_z` measurement of `site`: the site and its edges disappear and the
/// neighbours are not reconnected. Outcome 1 is undone with `σ_z` on every
/// former neighbour, so `κ` of the survivors is unchanged.
pub fn remove_z(
    state: &PureState,
    graph: &ClusterGraph,
    site: Site,
    mode: MeasureMode<'_>,
) -> Result<Removal> {
    check_dims(state, graph)?;
    let pos = graph.position(site)?;
    let m = measure(state, pos, MeasurementBasis::Z, mode)?;
    let next = graph.without_site(site)?;
    let mut correction = LocalCorrection::identity();
    if m.outcome == 1 {
        let z = clifford::find(&LocalGate::PauliZ).expect("Z is Clifford");
        for b in graph.neighbors(site) {
            correction.ops.push((next.position(b)?, z.clone()));
        }
    }
    let mut out = m.state;
    correction.apply_in_place(&mut out)?;
    Ok(Removal {
        outcome: m.outcome,
        probability: m.probability,
        state: out,
        graph: next,
        correction,
    })
}

/// Result of [`contract_x_pair`].
#[derive(Debug, Clone)]
pub struct PairRemoval {
    /// Outcomes of the first and second measured site.
    pub outcomes: [u8; 2],
    pub probability: f64,
    pub state: PureState,
    pub graph: ClusterGraph,
}

/// Shortens a chain by measuring two adjacent interior sites `u` then `w`
/// in the `σ_x` basis, with no correction between or after.
///
/// For `a – u – w – b` the survivors are joined by a new edge `a – b` and
/// the byproducts are pure `σ_z`, absorbed into the labels:
/// `κ'_a = κ_a ⊕ κ_w ⊕ s_w` and `κ'_b = κ_b ⊕ κ_u ⊕ s_u`.
pub fn contract_x_pair(
    state: &PureState,
    graph: &ClusterGraph,
    u: Site,
    w: Site,
    mode_u: MeasureMode<'_>,
    mode_w: MeasureMode<'_>,
) -> Result<PairRemoval> {
    check_dims(state, graph)?;
    if !graph.has_edge(u, w) {
        return Err(Error::Unsupported(format!("sites {u} and {w} are not adjacent")));
    }
    let outer = |v: Site, other: Site| -> Result<Site> {
        let nb = graph.neighbors(v);
        if nb.len() != 2 {
            return Err(Error::Unsupported(format!(
                "site {v} has degree {}; pair contraction needs an interior chain site",
                nb.len()
            )));
        }
        Ok(if nb[0] == other { nb[1] } else { nb[0] })
    };
    let a = outer(u, w)?;
    let b = outer(w, u)?;
    if a == b || graph.has_edge(a, b) {
        return Err(Error::Unsupported(format!("sites {a} and {b} would close a cycle")));
    }

    let mu = measure(state, graph.position(u)?, MeasurementBasis::X, mode_u)?;
    let after_u = graph.without_site(u)?;
    let mw = measure(&mu.state, after_u.position(w)?, MeasurementBasis::X, mode_w)?;
    let mut next = after_u.without_site(w)?;
    next.add_edge(a, b, 0.0)?;

    let k = |s: Site| graph.kappa(s).expect("site in graph");
    next.set_kappa(a, k(a) ^ k(w) ^ mw.outcome)?;
    next.set_kappa(b, k(b) ^ k(u) ^ mu.outcome)?;
    Ok(PairRemoval {
        outcomes: [mu.outcome, mw.outcome],
        probability: mu.probability * mw.probability,
        state: mw.state,
        graph: next,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clusterlab::verify_stabilizers;
    use crate::qstate::{fidelity, init_register, InputQubit};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ideal(g: &ClusterGraph) -> PureState {
        build_cluster(g, &BTreeMap::new()).unwrap()
    }

    #[test]
    fn five_to_three_kappa_bookkeeping() {
        let g = ClusterGraph::chain(5).unwrap();
        let s = ideal(&g);
        for s3 in 0..2u8 {
            for s4 in 0..2u8 {
                let r = contract_x_pair(&s, &g, 3, 4, MeasureMode::Force(s3), MeasureMode::Force(s4))
                    .unwrap();
                assert_eq!(r.graph.sites(), &[1, 2, 5]);
                assert!(r.graph.has_edge(2, 5));
                assert_eq!(r.graph.kappas(), vec![0, s4, s3]);
                assert!(verify_stabilizers(&r.state, &r.graph).unwrap().pass);
                assert!((r.probability - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pair_contraction_with_incoming_kappa() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for mask in 0..64u32 {
            let mut g = ClusterGraph::chain(6).unwrap();
            for s in 1..=6 {
                g.set_kappa(s, ((mask >> (s - 1)) & 1) as u8).unwrap();
            }
            let s = ideal(&g);
            let r = contract_x_pair(
                &s,
                &g,
                3,
                4,
                MeasureMode::Sample(&mut rng),
                MeasureMode::Force((mask % 2) as u8),
            )
            .unwrap();
            assert!(verify_stabilizers(&r.state, &r.graph).unwrap().pass, "mask {mask}");
        }
    }

    #[test]
    fn pair_contraction_preconditions() {
        let g = ClusterGraph::chain(5).unwrap();
        let s = ideal(&g);
        let f = || MeasureMode::Force(0);
        assert!(contract_x_pair(&s, &g, 1, 2, f(), f()).is_err());
        assert!(contract_x_pair(&s, &g, 2, 4, f(), f()).is_err());
        let c4 = ClusterGraph::chain(4).unwrap();
        assert!(contract_x_pair(&ideal(&c4), &c4, 2, 3, f(), f()).is_ok());
    }

    #[test]
    fn chain2_x_removal_leaves_hadamard_rotated_plus() {
        let g = ClusterGraph::chain(2).unwrap();
        let r = remove_x(&ideal(&g), &g, 2, MeasureMode::Force(0)).unwrap();
        assert_eq!(r.graph.sites(), &[1]);
        assert!(r.correction.on(1).unwrap().equals_up_to_phase(&LocalGate::Hadamard));
        assert!((fidelity(&r.state, &InputQubit::plus().to_state()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chain3_end_removal_disconnects() {
        // X on a chain end collapses its neighbour onto a σ_z eigenstate.
        let g = ClusterGraph::chain(3).unwrap();
        let r = remove_x(&ideal(&g), &g, 3, MeasureMode::Force(0)).unwrap();
        assert_eq!(r.graph.num_edges(), 0);
        assert!(verify_stabilizers(&r.state, &r.graph).unwrap().pass);
        let plus2 = init_register(&[InputQubit::plus(), InputQubit::plus()]).unwrap();
        assert!((fidelity(&r.state, &plus2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn x_removal_passes_stabilizers_on_many_graphs() {
        let graphs = [
            ClusterGraph::chain(5).unwrap(),
            ClusterGraph::grid(2, 3).unwrap(),
            ClusterGraph::grid(3, 3).unwrap(),
        ];
        for g in &graphs {
            let s = ideal(g);
            for &site in g.sites() {
                for o in 0..2 {
                    let r = remove_x(&s, g, site, MeasureMode::Force(o)).unwrap();
                    assert!(
                        verify_stabilizers(&r.state, &r.graph).unwrap().pass,
                        "site {site} outcome {o}"
                    );
                }
            }
        }
    }

    #[test]
    fn x_removal_of_interior_chain_site_is_not_a_shorter_chain() {
        // One X measurement in the middle of a 5-chain leaves a star-class
        // graph; two adjacent ones are needed to get a chain back.
        let g = ClusterGraph::chain(5).unwrap();
        let r = remove_x(&ideal(&g), &g, 3, MeasureMode::Force(0)).unwrap();
        assert_eq!(r.graph.neighbors(4), vec![1, 2, 5]);
        assert_eq!(r.graph.num_edges(), 3);
    }

    #[test]
    fn z_removal_examples() {
        let g = ClusterGraph::chain(3).unwrap();
        let r = remove_z(&ideal(&g), &g, 2, MeasureMode::Force(0)).unwrap();
        assert_eq!(r.graph.num_edges(), 0);
        let pp = init_register(&[InputQubit::plus(), InputQubit::plus()]).unwrap();
        assert!((fidelity(&r.state, &pp).unwrap() - 1.0).abs() < 1e-12);

        let g2 = ClusterGraph::chain(2).unwrap();
        let r = remove_z(&ideal(&g2), &g2, 1, MeasureMode::Force(0)).unwrap();
        assert!((fidelity(&r.state, &InputQubit::plus().to_state()).unwrap() - 1.0).abs() < 1e-12);

        let r = remove_z(&ideal(&g2), &g2, 1, MeasureMode::Force(1)).unwrap();
        assert!(r.correction.on(1).unwrap().equals_up_to_phase(&LocalGate::PauliZ));
        assert!((fidelity(&r.state, &InputQubit::plus().to_state()).unwrap() - 1.0).abs() < 1e-12);

        let grid = ClusterGraph::grid(2, 3).unwrap();
        for o in 0..2 {
            let r = remove_z(&ideal(&grid), &grid, 2, MeasureMode::Force(o)).unwrap();
            assert!(verify_stabilizers(&r.state, &r.graph).unwrap().pass);
        }
    }

    #[test]
    fn removal_rejects_unknown_site() {
        let g = ClusterGraph::chain(2).unwrap();
        let s = ideal(&g);
        assert_eq!(
            remove_x(&s, &g, 9, MeasureMode::Force(0)).unwrap_err(),
            Error::UnknownSite(9)
        );
        assert!(remove_z(&s, &ClusterGraph::chain(3).unwrap(), 1, MeasureMode::Force(0)).is_err());
    }
}
