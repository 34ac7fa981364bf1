use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use super::{PureState, MAX_MIXED_QUBITS, NORM_TOL};
use crate::error::{Error, Result};

const PSD_TOL: f64 = 1e-8;

/// Density matrix over `num_qubits` qubits, same bit order as [`PureState`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(entries)?;
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(entries: DMatrix<C64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || r == 0 || !r.is_power_of_two() {
            return Err(Error::InvalidDensityMatrix(format!("shape {r}×{c}")));
        }
        let num_qubits = r.trailing_zeros() as usize;
        if num_qubits > MAX_MIXED_QUBITS {
            return Err(Error::TooManyQubits(num_qubits, MAX_MIXED_QUBITS));
        }
        Ok(Self { num_qubits, entries })
    }

    pub fn from_pure(state: &PureState) -> Result<Self> {
        let n = state.num_qubits();
        if n > MAX_MIXED_QUBITS {
            return Err(Error::TooManyQubits(n, MAX_MIXED_QUBITS));
        }
        let a = state.amplitudes();
        let dim = a.len();
        let entries = DMatrix::from_fn(dim, dim, |i, j| a[i] * a[j].conj());
        Ok(Self { num_qubits: n, entries })
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.entries;
        let dim = m.nrows();
        for i in 0..dim {
            for j in 0..=i {
                if (m[(i, j)] - m[(j, i)].conj()).norm() > NORM_TOL {
                    return Err(Error::InvalidDensityMatrix(format!("not Hermitian at ({i},{j})")));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Multiplies entry `(z, z')` by `e^{-Γ·popcount(z ⊕ z')}`: independent
    /// dephasing of every qubit.
    pub fn dephased(&self, channel: DephasingChannel) -> DensityMatrix {
        let decay: Vec<f64> =
            (0..=self.num_qubits).map(|h| (-channel.gamma() * h as f64).exp()).collect();
        let entries = DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            self.entries[(i, j)] * decay[(i ^ j).count_ones() as usize]
        });
        DensityMatrix { num_qubits: self.num_qubits, entries }
    }
}

pub(crate) fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Independent single-qubit dephasing with rescaled time `Γ`: off-diagonal
/// elements of each qubit decay as `e^{-Γ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingChannel {
    gamma: f64,
}

impl DephasingChannel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidParameter(format!("dephasing Γ = {gamma}")));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Weight `p` of the identity Kraus operator `√p·I` (the other is `√(1-p)·σ_z`).
    pub fn identity_weight(&self) -> f64 {
        0.5 * (1.0 + (-self.gamma).exp())
    }
}

pub fn dephase(rho: &DensityMatrix, channel: DephasingChannel) -> DensityMatrix {
    rho.dephased(channel)
}

/// Reduced state over `keep`, in the listed order.
pub trait PartialTrace {
    fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix>;
}

pub fn partial_trace<S: PartialTrace + ?Sized>(state: &S, keep: &[usize]) -> Result<DensityMatrix> {
    state.partial_trace(keep)
}

/// Index masks for the kept subsystem and for its complement.
fn split_masks(num_qubits: usize, keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if keep.is_empty() {
        return Err(Error::InvalidParameter("empty keep list".into()));
    }
    if keep.len() > MAX_MIXED_QUBITS {
        return Err(Error::TooManyQubits(keep.len(), MAX_MIXED_QUBITS));
    }
    let mut seen = vec![false; num_qubits + 1];
    for &q in keep {
        if q == 0 || q > num_qubits {
            return Err(Error::QubitOutOfRange { index: q, num_qubits });
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(Error::IndexClash(q));
        }
    }
    let rest: Vec<usize> = (1..=num_qubits).filter(|q| !seen[*q]).collect();
    let spread = |qubits: &[usize]| -> Vec<usize> {
        let k = qubits.len();
        (0..1usize << k)
            .map(|local| {
                qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
                    let bit = (local >> (k - 1 - pos)) & 1;
                    acc | (bit << (num_qubits - q))
                })
            })
            .collect()
    };
    Ok((spread(keep), spread(&rest)))
}

impl PartialTrace for PureState {
    fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (kept, rest) = split_masks(self.num_qubits(), keep)?;
        let a = self.amplitudes();
        let dim = kept.len();
        let mut out = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        let mut v = vec![C64::new(0.0, 0.0); dim];
        for r in &rest {
            for (slot, k) in v.iter_mut().zip(&kept) {
                *slot = a[k | r];
            }
            for i in 0..dim {
                if v[i] == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..dim {
                    out[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        DensityMatrix::from_matrix_unchecked(out)
    }
}

impl PartialTrace for DensityMatrix {
    fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (kept, rest) = split_masks(self.num_qubits, keep)?;
        let dim = kept.len();
        let m = &self.entries;
        let out = DMatrix::from_fn(dim, dim, |i, j| {
            rest.iter().map(|r| m[(kept[i] | r, kept[j] | r)]).sum()
        });
        DensityMatrix::from_matrix_unchecked(out)
    }
}
