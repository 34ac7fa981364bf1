use std::collections::BTreeMap;

use super::{cnot_matrix, ConfigSkeleton, Decoding, GateConfig, MeasurementPattern, Pauli, PauliString};
use crate::clusterlab::{ClusterGraph, Site};
use crate::qstate::{LocalGate, MeasurementBasis};

use MeasurementBasis::{X, Y};

/// Four-site chain: target enters on 1, control on 3; `X` on 1 then 3 leaves
/// control on 4 and target on 2, both in the `σ_x` eigenbasis.
pub fn skeleton_cnot4() -> ConfigSkeleton {
    ConfigSkeleton {
        name: "cnot4".into(),
        graph: ClusterGraph::chain(4).expect("valid chain"),
        input_sites: vec![3, 1],
        outputs: vec![4, 2],
        prefix: vec![],
        search_sites: vec![1, 3],
        ideal_gate: cnot_matrix(),
        output_frame: vec![LocalGate::Hadamard; 2],
    }
}

/// Byproduct `σ_x^{(2)}` for `s₁` and `σ_x^{(4)}` for `s₁ ⊕ s₃`.
fn cnot4_decoding() -> Decoding {
    let mut table = BTreeMap::new();
    for s1 in 0..2u8 {
        for s3 in 0..2u8 {
            table.insert(vec![s1, s3], PauliString(vec![Pauli::new(s1 ^ s3, 0), Pauli::new(s1, 0)]));
        }
    }
    Decoding::Table(table)
}

pub fn config_cnot4() -> GateConfig {
    let skel = skeleton_cnot4();
    skel.with_pattern(MeasurementPattern {
        steps: vec![(1, X), (3, X)],
        outputs: skel.outputs.clone(),
        decoding: cnot4_decoding(),
    })
}

/// Squashed-I layout: control wire 1–7, target wire 9–15, bridge 8 joined to
/// 4 and 12. With `bridged`, an extra site 16 sits between 8 and 12 and is
/// measured in `X` before everything else.
pub fn skeleton_squashed_i(bridged: bool) -> ConfigSkeleton {
    let n: Site = if bridged { 16 } else { 15 };
    let mut g = ClusterGraph::new((1..=n).collect()).expect("distinct sites");
    for wire in [1..7, 9..15] {
        for s in wire {
            g.add_edge(s, s + 1, 0.0).expect("valid edge");
        }
    }
    g.add_edge(4, 8, 0.0).expect("valid edge");
    if bridged {
        g.add_edge(8, 16, 0.0).expect("valid edge");
        g.add_edge(16, 12, 0.0).expect("valid edge");
    } else {
        g.add_edge(8, 12, 0.0).expect("valid edge");
    }
    ConfigSkeleton {
        name: if bridged { "cnot16_bridged" } else { "cnot15" }.into(),
        graph: g,
        input_sites: vec![1, 9],
        outputs: vec![7, 15],
        prefix: if bridged { vec![(16, X)] } else { vec![] },
        search_sites: (1..=6).chain(8..=14).collect(),
        ideal_gate: cnot_matrix(),
        output_frame: vec![LocalGate::PhaseZ(0.0); 2],
    }
}

fn squashed(bridged: bool, bases: [MeasurementBasis; 13], decoding: PauliString) -> GateConfig {
    let skel = skeleton_squashed_i(bridged);
    let mut steps = skel.prefix.clone();
    steps.extend(skel.search_sites.iter().copied().zip(bases));
    skel.with_pattern(MeasurementPattern {
        steps,
        outputs: skel.outputs.clone(),
        decoding: Decoding::PostselectOnly(decoding),
    })
}

/// Bases on sites 1–6, 8–14 as found by [`super::derive_xy_pattern`].
pub fn config_cnot15() -> GateConfig {
    squashed(false, CNOT15_BASES, PauliString(vec![Pauli::Z, Pauli::I]))
}

pub fn config_cnot16_bridged() -> GateConfig {
    squashed(true, CNOT16_BASES, PauliString(vec![Pauli::Z, Pauli::I]))
}

//                                            1  2  3  4  5  6  8  9  10 11 12 13 14
const CNOT15_BASES: [MeasurementBasis; 13] = [X, Y, Y, Y, Y, Y, Y, X, X, X, X, X, Y];
const CNOT16_BASES: [MeasurementBasis; 13] = [X, Y, Y, X, Y, Y, X, X, X, X, X, X, X];
