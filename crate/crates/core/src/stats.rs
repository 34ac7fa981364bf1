//! Reproducible Monte Carlo averaging.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Mean and standard error of a Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl SampleStats {
    /// Summarises `values` in order; the order fixes the rounding.
    pub fn from_values(values: &[f64], seed: u64) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 samples, got {n}")));
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        Ok(Self { mean, stderr: (var / n as f64).sqrt(), n_samples: n, seed })
    }
}

/// Generator for sample `k`: independent stream `k` of the master seed, so a
/// sample's draws do not depend on which thread evaluates it.
pub fn sample_rng(master_seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(k);
    rng
}

/// Evaluates `f` once per sample in parallel and reduces in index order.
pub fn monte_carlo<F>(n_samples: usize, master_seed: u64, f: F) -> Result<SampleStats>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    let values = (0..n_samples)
        .into_par_iter()
        .map(|k| f(&mut sample_rng(master_seed, k as u64)))
        .collect::<Result<Vec<f64>>>()?;
    SampleStats::from_values(&values, master_seed)
}
