//! Two-qubit entanglement of (noisy) cluster-state pairs.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::clusterlab::{build_with_phases, ClusterGraph};
use crate::error::{Error, Result};
use crate::phasenoise::PhaseDistribution;
use crate::qstate::{hermitian_eigenvalues, partial_trace, DensityMatrix};
use crate::stats::{monte_carlo, SampleStats};

/// Below this a concurrence or a negative PPT eigenvalue counts as zero.
pub const ENTANGLEMENT_TOL: f64 = 1e-9;
/// Spectral values this small are rounding noise; their square roots
/// (~1e-7) would otherwise swamp [`ENTANGLEMENT_TOL`].
const CLAMP: f64 = 1e-13;
const MAX_AVERAGED_SITES: usize = 16;
const MAX_SCAN_SITES: usize = 10;

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::BadDimension(rho.dim()));
    }
    Ok(())
}

/// `√M` for a Hermitian positive semidefinite `M`.
fn psd_sqrt(m: &DMatrix<C64>) -> DMatrix<C64> {
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let roots = eig.eigenvalues.map(|l| C64::new(if l > CLAMP { l.sqrt() } else { 0.0 }, 0.0));
    &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

/// Wootters concurrence `max{0, α₁ − α₂ − α₃ − α₄}`.
///
/// The `α_i` are taken as square roots of the spectrum of the Hermitian
/// matrix `√ρ ρ̃ √ρ`, which shares its eigenvalues with `ρ ρ̃`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    let m = rho.matrix();
    let yy = DMatrix::from_fn(4, 4, |i, j| {
        if i + j == 3 {
            C64::new(if i == 0 || i == 3 { -1.0 } else { 1.0 }, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let flipped = &yy * m.conjugate() * &yy;
    let s = psd_sqrt(m);
    let mut alpha: Vec<f64> = hermitian_eigenvalues(&(&s * flipped * &s))
        .into_iter()
        .map(|l| if l > CLAMP { l.sqrt() } else { 0.0 })
        .collect();
    alpha.sort_by(|a, b| b.total_cmp(a));
    Ok((alpha[0] - alpha[1] - alpha[2] - alpha[3]).max(0.0))
}

fn partial_transpose(m: &DMatrix<C64>, second: bool) -> DMatrix<C64> {
    DMatrix::from_fn(4, 4, |i, j| {
        let (i1, i2, j1, j2) = (i >> 1, i & 1, j >> 1, j & 1);
        if second {
            m[(2 * i1 + j2, 2 * j1 + i2)]
        } else {
            m[(2 * j1 + i2, 2 * i1 + j2)]
        }
    })
}

/// Smallest eigenvalue of the partial transpose over the second qubit.
pub fn ppt_min_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    check_two_qubit(rho)?;
    Ok(hermitian_eigenvalues(&partial_transpose(rho.matrix(), true))[0])
}

/// Verdict for one pair of chain sites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairAnalysis {
    pub pair: (usize, usize),
    pub concurrence: f64,
    pub ppt_min_eig: f64,
    /// `ppt_min_eig < −ENTANGLEMENT_TOL`.
    pub entangled: bool,
}

impl PairAnalysis {
    pub fn of(rho: &DensityMatrix, pair: (usize, usize)) -> Result<Self> {
        let concurrence = concurrence(rho)?;
        let ppt_min_eig = ppt_min_eigenvalue(rho)?;
        Ok(Self { pair, concurrence, ppt_min_eig, entangled: ppt_min_eig < -ENTANGLEMENT_TOL })
    }
}

fn check_pair(n: usize, (i, j): (usize, usize)) -> Result<()> {
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::InvalidParameter(format!("pair ({i}, {j}) on a chain of {n}")));
    }
    Ok(())
}

/// Exact phase average of the reduced state of sites `(i, j)` of a noisy
/// chain with i.i.d. bond phases.
///
/// `E[ρ]_{z,z'} = 2^{−N} Π_bonds (−1)^{z_k z_{k+1} + z'_k z'_{k+1}}
/// E[e^{iθ(z_k z_{k+1} − z'_k z'_{k+1})}]`; traced sites carry `z = z'`,
/// so each of the 16 pair entries is a 4×4 transfer-matrix product over
/// `(z_k, z'_k)` with per-site masks.
pub fn averaged_pair_state(n: usize, dist: PhaseDistribution, pair: (usize, usize)) -> Result<DensityMatrix> {
    if !(2..=MAX_AVERAGED_SITES).contains(&n) {
        return Err(Error::InvalidParameter(format!("chain length {n} (2..={MAX_AVERAGED_SITES})")));
    }
    check_pair(n, pair)?;
    let dist = dist.validated()?;
    let chars = [dist.char_value(-1), dist.char_value(0), dist.char_value(1)];
    let mut bond = [[C64::new(0.0, 0.0); 4]; 4];
    for (a, row) in bond.iter_mut().enumerate() {
        let (p, q) = ((a >> 1) as i64, (a & 1) as i64);
        for (b, e) in row.iter_mut().enumerate() {
            let (r, s) = ((b >> 1) as i64, (b & 1) as i64);
            let sign = if (p * r + q * s) % 2 == 1 { -1.0 } else { 1.0 };
            *e = chars[(p * r - q * s + 1) as usize] * sign;
        }
    }
    let scale = 0.5f64.powi(n as i32);
    let entry = |row: usize, col: usize| -> C64 {
        // Allowed (z, z') index per site: pair sites pinned, others diagonal.
        let allowed = |site: usize| -> [bool; 4] {
            let pinned = |bit_row: usize, bit_col: usize| {
                let mut m = [false; 4];
                m[2 * bit_row + bit_col] = true;
                m
            };
            if site == pair.0 {
                pinned(row >> 1, col >> 1)
            } else if site == pair.1 {
                pinned(row & 1, col & 1)
            } else {
                [true, false, false, true]
            }
        };
        let first = allowed(1);
        let mut v: [C64; 4] =
            std::array::from_fn(|a| if first[a] { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        for site in 2..=n {
            let mask = allowed(site);
            v = std::array::from_fn(|b| {
                if mask[b] {
                    (0..4).map(|a| v[a] * bond[a][b]).sum()
                } else {
                    C64::new(0.0, 0.0)
                }
            });
        }
        v.iter().sum::<C64>() * scale
    };
    DensityMatrix::new(DMatrix::from_fn(4, 4, entry))
}

/// Every pair `(i, j)`, `i < j`, of an `n`-site chain, in lexicographic order.
pub fn pair_scan(n: usize, dist: PhaseDistribution) -> Result<Vec<PairAnalysis>> {
    if !(2..=MAX_SCAN_SITES).contains(&n) {
        return Err(Error::InvalidParameter(format!("chain length {n} (2..={MAX_SCAN_SITES})")));
    }
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    pairs
        .into_par_iter()
        .map(|p| PairAnalysis::of(&averaged_pair_state(n, dist, p)?, p))
        .collect()
}

/// Reduced pair state of one noisy chain with the given bond phases.
pub fn noisy_pair_state(thetas: &[f64], pair: (usize, usize)) -> Result<DensityMatrix> {
    let n = thetas.len() + 1;
    check_pair(n, pair)?;
    let state = build_with_phases(&ClusterGraph::chain(n)?, &BTreeMap::new(), thetas.iter().copied())?;
    partial_trace(&state, &[pair.0, pair.1])
}

/// Sample mean of the concurrence of individual noisy chains, `E[C(ρ(θ))]`.
/// For comparison only: the averaged state's concurrence is the default.
pub fn mean_concurrence_mc(
    n: usize,
    dist: PhaseDistribution,
    pair: (usize, usize),
    n_samples: usize,
    seed: u64,
) -> Result<SampleStats> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("chain length {n}")));
    }
    check_pair(n, pair)?;
    let dist = dist.validated()?;
    monte_carlo(n_samples, seed, |rng| concurrence(&noisy_pair_state(&dist.sample_phases(n - 1, rng), pair)?))
}
