use std::fmt;

use crate::clifford::{cliffords, Clifford1};
use crate::error::{Error, Result};
use crate::qstate::{overlap, PureState};

const MATCH_TOL: f64 = 1e-8;

/// Product of single-qubit Cliffords on register positions (1-based).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LocalCorrection {
    pub ops: Vec<(usize, Clifford1)>,
}

impl LocalCorrection {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.ops.iter().all(|(_, c)| c.is_identity())
    }

    /// The element acting on `qubit`, if any.
    pub fn on(&self, qubit: usize) -> Option<&Clifford1> {
        self.ops.iter().find(|(q, _)| *q == qubit).map(|(_, c)| c)
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        let mut out = state.clone();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    pub(crate) fn apply_in_place(&self, state: &mut PureState) -> Result<()> {
        for (q, c) in &self.ops {
            state.check_qubit(*q)?;
            if !c.is_identity() {
                state.apply_mat2(*q, &c.matrix());
            }
        }
        Ok(())
    }
}

impl fmt::Display for LocalCorrection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            return f.write_str("I");
        }
        let parts: Vec<String> = self.ops.iter().map(|(q, c)| format!("{c}@{q}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// First local Clifford `U` on `qubits` (in the fixed enumeration, first qubit
/// outermost) with `|⟨target|U·actual⟩| = 1`.
pub fn derive_local_correction(
    actual: &PureState,
    target: &PureState,
    qubits: &[usize],
) -> Result<LocalCorrection> {
    derive_local_correction_multi(&[(actual.clone(), target.clone())], qubits)
}

/// One correction that works for every `(actual, target)` pair at once; a
/// probe set pins the Clifford down where a single state cannot.
pub fn derive_local_correction_multi(
    pairs: &[(PureState, PureState)],
    qubits: &[usize],
) -> Result<LocalCorrection> {
    if qubits.len() > 2 {
        return Err(Error::Unsupported(format!(
            "correction search over {} qubits (at most 2)",
            qubits.len()
        )));
    }
    if qubits.len() == 2 && qubits[0] == qubits[1] {
        return Err(Error::IndexClash(qubits[0]));
    }
    for (a, t) in pairs {
        if a.num_qubits() != t.num_qubits() {
            return Err(Error::DimensionMismatch(a.num_qubits(), t.num_qubits()));
        }
        for &q in qubits {
            a.check_qubit(q)?;
        }
    }
    let group = cliffords();
    let candidates: Vec<Vec<&Clifford1>> = match qubits.len() {
        0 => vec![vec![]],
        1 => group.iter().map(|c| vec![c]).collect(),
        _ => group.iter().flat_map(|a| group.iter().map(move |b| vec![a, b])).collect(),
    };
    for cand in candidates {
        let corr = LocalCorrection {
            ops: qubits.iter().copied().zip(cand.into_iter().cloned()).collect(),
        };
        let ok = pairs.iter().all(|(a, t)| {
            let fixed = corr.apply(a).expect("qubits checked");
            overlap(t, &fixed).map(|o| o.norm() > 1.0 - MATCH_TOL).unwrap_or(false)
        });
        if ok {
            return Ok(corr);
        }
    }
    Err(Error::NoLocalCorrection)
}
