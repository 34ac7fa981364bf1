//! Random entangling-gate phases: distributions, overlaps of noisy chains
//! with the ideal cluster, and closed-form fidelities under dephasing.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::stats::{monte_carlo, SampleStats};

/// Law of the extra phase `θ` imprinted by one entangling gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseDistribution {
    /// Uniform on `[−width/2, width/2]`.
    Flat { width: f64 },
    /// Normal with mean 0.
    Gaussian { sigma: f64 },
    /// Every gate imprints the same `theta`.
    Fixed { theta: f64 },
}

impl PhaseDistribution {
    pub fn flat(width: f64) -> Result<Self> {
        Self::Flat { width }.validated()
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::Gaussian { sigma }.validated()
    }

    pub fn fixed(theta: f64) -> Result<Self> {
        Self::Fixed { theta }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            Self::Flat { width: x } | Self::Gaussian { sigma: x } => x.is_finite() && x >= 0.0,
            Self::Fixed { theta } => theta.is_finite(),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidParameter(format!("{self:?}")))
        }
    }

    /// `E[e^{ikθ}]`.
    pub fn char_value(&self, k: i64) -> C64 {
        let k = k as f64;
        match *self {
            Self::Flat { width } => {
                let x = k * width / 2.0;
                if x == 0.0 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(x.sin() / x, 0.0)
                }
            }
            Self::Gaussian { sigma } => C64::new((-k * k * sigma * sigma / 2.0).exp(), 0.0),
            Self::Fixed { theta } => C64::from_polar(1.0, k * theta),
        }
    }

    pub fn sample_phase<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::Flat { width } => {
                let h = width / 2.0;
                rng.random_range(-h..=h)
            }
            Self::Gaussian { sigma } => Normal::new(0.0, sigma).expect("validated sigma").sample(rng),
            Self::Fixed { theta } => theta,
        }
    }

    pub fn sample_phases<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.sample_phase(rng)).collect()
    }
}

/// Overlap of a phase-averaged noisy chain with the ideal one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapResult {
    /// `f̄ = E[f]`.
    pub f: C64,
    /// `|f̄|²`.
    pub fidelity_of_mean: f64,
    /// `E[|f|²]`.
    pub mean_fidelity: f64,
}

type M2 = [[C64; 2]; 2];

fn vec2_mul(v: [C64; 2], m: &M2) -> [C64; 2] {
    [v[0] * m[0][0] + v[1] * m[1][0], v[0] * m[0][1] + v[1] * m[1][1]]
}

/// `M = [[1,1],[1,w]]`: weight of a bond between consecutive bits.
fn bond2(w: C64) -> M2 {
    let l = C64::new(1.0, 0.0);
    [[l, l], [l, w]]
}

/// `⟨C_N|C_N(θ)⟩ = 2^{−N} Σ_z Π_j e^{iθ_j z_j z_{j+1}}` for the chain of
/// `thetas.len() + 1` sites, by a 2×2 transfer matrix.
pub fn overlap_exact(thetas: &[f64]) -> Result<C64> {
    if thetas.is_empty() {
        return Err(Error::InvalidParameter("need at least one bond phase".into()));
    }
    let mut v = [C64::new(1.0, 0.0); 2];
    for &t in thetas {
        v = vec2_mul(v, &bond2(C64::from_polar(1.0, t)));
    }
    Ok((v[0] + v[1]) * 0.5f64.powi(thetas.len() as i32 + 1))
}

/// Exact averages over i.i.d. bond phases for a chain of `n` sites.
///
/// `E[|f|²]` runs a 4×4 transfer matrix over bit pairs `(z_j, z'_j)` with
/// entries `E[e^{iθ(pr − qs)}]`.
pub fn overlap_avg(dist: PhaseDistribution, n: usize) -> Result<OverlapResult> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("chain needs at least 2 sites, got {n}")));
    }
    let dist = dist.validated()?;
    let bond = bond2(dist.char_value(1));
    let mut v = [C64::new(1.0, 0.0); 2];
    for _ in 1..n {
        v = vec2_mul(v, &bond);
    }
    let f = (v[0] + v[1]) * 0.5f64.powi(n as i32);

    let chars = [dist.char_value(-1), dist.char_value(0), dist.char_value(1)];
    let mut t = [[C64::new(0.0, 0.0); 4]; 4];
    for (a, row) in t.iter_mut().enumerate() {
        let (p, q) = ((a >> 1) as i64, (a & 1) as i64);
        for (b, e) in row.iter_mut().enumerate() {
            let (r, s) = ((b >> 1) as i64, (b & 1) as i64);
            *e = chars[(p * r - q * s + 1) as usize];
        }
    }
    let mut w = [C64::new(1.0, 0.0); 4];
    for _ in 1..n {
        let mut next = [C64::new(0.0, 0.0); 4];
        for (a, &wa) in w.iter().enumerate() {
            for (b, nb) in next.iter_mut().enumerate() {
                *nb += wa * t[a][b];
            }
        }
        w = next;
    }
    let mean_fidelity = w.iter().sum::<C64>().re * 0.25f64.powi(n as i32);
    Ok(OverlapResult { f, fidelity_of_mean: f.norm_sqr(), mean_fidelity })
}

/// Monte Carlo estimate of `E[|f|²]`, the oracle for [`overlap_avg`].
pub fn overlap_mc(dist: PhaseDistribution, n: usize, n_samples: usize, seed: u64) -> Result<SampleStats> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("chain needs at least 2 sites, got {n}")));
    }
    let dist = dist.validated()?;
    monte_carlo(n_samples, seed, |rng| Ok(overlap_exact(&dist.sample_phases(n - 1, rng))?.norm_sqr()))
}

/// States whose dephasing fidelity has a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateFamily {
    SinglePlus,
    Ghz,
    W,
    LinearCluster,
    /// `n × n` grid; `n` is the side length.
    SquareCluster,
}

impl StateFamily {
    pub const ALL: [StateFamily; 5] =
        [Self::SinglePlus, Self::Ghz, Self::W, Self::LinearCluster, Self::SquareCluster];

    pub fn name(self) -> &'static str {
        match self {
            Self::SinglePlus => "SinglePlus",
            Self::Ghz => "GHZ",
            Self::W => "W",
            Self::LinearCluster => "LinearCluster",
            Self::SquareCluster => "SquareCluster",
        }
    }

    fn min_size(self) -> usize {
        match self {
            Self::SinglePlus | Self::SquareCluster => 1,
            Self::LinearCluster => 2,
            Self::Ghz | Self::W => 3,
        }
    }
}

/// Graph states: every computational amplitude has modulus `2^{−N/2}`, so
/// `F = 2^{−N} Σ_h B(N,h) e^{−Γh}`. The binomial sum is taken in log space.
fn graph_state_fidelity(qubits: usize, gamma: f64) -> f64 {
    let ln2 = std::f64::consts::LN_2;
    let mut ln_binom = 0.0;
    let mut sum = 0.0;
    for h in 0..=qubits {
        if h > 0 {
            ln_binom += ((qubits - h + 1) as f64).ln() - (h as f64).ln();
        }
        sum += (ln_binom - qubits as f64 * ln2 - gamma * h as f64).exp();
    }
    let product = ((1.0 + (-gamma).exp()) / 2.0).powi(qubits as i32);
    debug_assert!((sum - product).abs() <= 1e-12 * product.max(1e-300) + 1e-15, "{sum} vs {product}");
    sum
}

/// Fidelity of `family` on `n` qubits with itself after independent
/// dephasing of strength `gamma` on every qubit.
pub fn dephasing_fidelity(family: StateFamily, n: usize, gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!("dephasing strength {gamma}")));
    }
    if n < family.min_size() || (family == StateFamily::SinglePlus && n != 1) {
        return Err(Error::InvalidParameter(format!("{} with n = {n}", family.name())));
    }
    let e = |x: f64| (-gamma * x).exp();
    Ok(match family {
        StateFamily::SinglePlus => (1.0 + e(1.0)) / 2.0,
        StateFamily::Ghz => (1.0 + e(n as f64)) / 2.0,
        StateFamily::W => (1.0 + (n as f64 - 1.0) * e(2.0)) / n as f64,
        StateFamily::LinearCluster => graph_state_fidelity(n, gamma),
        StateFamily::SquareCluster => graph_state_fidelity(n * n, gamma),
    })
}
