//! The 24-element single-qubit Clifford group modulo global phase, in a fixed
//! breadth-first enumeration over words in `H` and `S`.

use num_complex::Complex64 as C64;
use std::fmt;
use std::sync::OnceLock;

use crate::qstate::{LocalGate, Mat2};

const EQ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Clifford1 {
    index: usize,
    /// Gates applied right to left, e.g. `"HS"` is `H·S`.
    word: String,
    matrix: Mat2,
}

impl Clifford1 {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn word(&self) -> &str {
        &self.word
    }

    pub fn matrix(&self) -> Mat2 {
        self.matrix
    }

    pub fn gate(&self) -> LocalGate {
        LocalGate::Matrix(self.matrix)
    }

    pub fn is_identity(&self) -> bool {
        self.index == 0
    }

    /// True when this element equals `gate` up to a global phase.
    pub fn equals_up_to_phase(&self, gate: &LocalGate) -> bool {
        same_up_to_phase(&self.matrix, &gate.matrix())
    }
}

impl fmt::Display for Clifford1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            f.write_str("I")
        } else {
            f.write_str(&self.word)
        }
    }
}

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    crate::qstate::mat2_mul(a, b)
}

/// Rescales so the first entry with non-negligible modulus is real positive.
fn canonical_phase(m: &Mat2) -> Mat2 {
    let pivot = m.iter().flatten().find(|z| z.norm() > 1e-6).copied().unwrap_or(C64::new(1.0, 0.0));
    let rot = pivot.conj() / pivot.norm();
    let mut out = *m;
    out.iter_mut().flatten().for_each(|z| *z *= rot);
    out
}

fn same_up_to_phase(a: &Mat2, b: &Mat2) -> bool {
    let (ca, cb) = (canonical_phase(a), canonical_phase(b));
    ca.iter().flatten().zip(cb.iter().flatten()).all(|(x, y)| (x - y).norm() < EQ_TOL)
}

/// All 24 elements; index 0 is the identity.
pub fn cliffords() -> &'static [Clifford1] {
    static GROUP: OnceLock<Vec<Clifford1>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let gens = [('H', LocalGate::Hadamard.matrix()), ('S', LocalGate::PhaseZ(std::f64::consts::FRAC_PI_2).matrix())];
        let mut out = vec![Clifford1 {
            index: 0,
            word: String::new(),
            matrix: LocalGate::PhaseZ(0.0).matrix(),
        }];
        let mut frontier = 0;
        while frontier < out.len() {
            let base = out[frontier].clone();
            for (name, g) in &gens {
                let m = mul(g, &base.matrix);
                if !out.iter().any(|c| same_up_to_phase(&c.matrix, &m)) {
                    let word = format!("{name}{}", base.word);
                    out.push(Clifford1 { index: out.len(), word, matrix: canonical_phase(&m) });
                }
            }
            frontier += 1;
        }
        debug_assert_eq!(out.len(), 24);
        out
    })
}

/// The enumerated element equal to `gate` up to phase, if it is Clifford.
pub fn find(gate: &LocalGate) -> Option<&'static Clifford1> {
    cliffords().iter().find(|c| c.equals_up_to_phase(gate))
}
