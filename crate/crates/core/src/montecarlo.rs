//! Trial-level simulation of the estimated channel and goodness-of-fit checks.
//!
//! Every trial owns two ChaCha8 streams derived from `(seed, trial, substream)`:
//! the phase stream draws the random-area phases (area 2 first, then area 3
//! under pattern 2) and the noise stream draws the two Gaussian noise
//! components. Trials therefore do not depend on execution order, and batches
//! are bit-identical for any thread count.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channel::{cascaded_channel, CascadedChannel};
use crate::error::{Error, Result};
use crate::patterns::{coherent_amplitude, PatternId, RisPartition};
use crate::scene::{build_layout, Scene};
use crate::stats::PowerDistribution;

pub const DEFAULT_TRIALS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Substream {
    Phases = 0,
    Noise = 1,
}

/// Generator for one `(seed, trial, substream)` triple.
pub fn trial_rng(seed: u64, trial: u64, substream: Substream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((trial << 1) | substream as u64);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialBatch {
    pub pattern: PatternId,
    /// `|h|^2` per trial, in trial order.
    pub samples: Vec<f64>,
    pub seed: u64,
    pub n_trials: usize,
}

impl TrialBatch {
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.n_trials as f64
    }
}

/// Samples the estimated channel for a fixed channel and partition.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    channel: &'a CascadedChannel,
    partition: &'a RisPartition,
    noise_std: f64,
    coherent: [f64; 2],
}

impl<'a> Simulator<'a> {
    pub fn new(channel: &'a CascadedChannel, partition: &'a RisPartition, noise_variance: f64) -> Result<Self> {
        if partition.num_elements() != channel.len() {
            return Err(Error::LengthMismatch { expected: channel.len(), got: partition.num_elements() });
        }
        if !(noise_variance >= 0.0 && noise_variance.is_finite()) {
            return Err(Error::Domain(format!("noise variance must be finite and >= 0, got {noise_variance}")));
        }
        Ok(Simulator {
            channel,
            partition,
            noise_std: (noise_variance / 2.0).sqrt(),
            coherent: [
                coherent_amplitude(channel, partition, PatternId::Pattern1),
                coherent_amplitude(channel, partition, PatternId::Pattern2),
            ],
        })
    }

    /// Estimated channel `y / x` for one trial.
    pub fn trial(&self, pattern: PatternId, seed: u64, trial: u64) -> Complex64 {
        let g = self.channel.per_element();
        let mut phases = trial_rng(seed, trial, Substream::Phases);
        let mut h = Complex64::new(self.coherent[pattern as usize], 0.0);
        let mut add_random = |indices: &[usize]| {
            for &q in indices {
                let beta: f64 = phases.random_range(-PI..PI);
                h += g[q] * Complex64::cis(beta);
            }
        };
        add_random(self.partition.a2());
        if pattern == PatternId::Pattern2 {
            add_random(self.partition.a3());
        }
        if self.noise_std > 0.0 {
            let mut noise = trial_rng(seed, trial, Substream::Noise);
            let re: f64 = noise.sample(StandardNormal);
            let im: f64 = noise.sample(StandardNormal);
            h += Complex64::new(re, im) * self.noise_std;
        }
        h
    }

    pub fn channel_samples(&self, pattern: PatternId, n_trials: usize, seed: u64) -> Vec<Complex64> {
        (0..n_trials as u64).into_par_iter().map(|t| self.trial(pattern, seed, t)).collect()
    }

    pub fn batch(&self, pattern: PatternId, n_trials: usize, seed: u64) -> Result<TrialBatch> {
        if n_trials == 0 {
            return Err(Error::Domain("at least one trial is required".into()));
        }
        let samples = (0..n_trials as u64)
            .into_par_iter()
            .map(|t| self.trial(pattern, seed, t).norm_sqr())
            .collect();
        Ok(TrialBatch { pattern, samples, seed, n_trials })
    }
}

pub fn simulate_batch(
    scene: &Scene,
    partition: &RisPartition,
    pattern: PatternId,
    n_trials: usize,
    seed: u64,
) -> Result<TrialBatch> {
    let channel = cascaded_channel(scene, &build_layout(scene)?)?;
    Simulator::new(&channel, partition, scene.noise_variance())?.batch(pattern, n_trials, seed)
}

/// Right-continuous step function over sorted samples.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Domain("empirical CDF needs at least one sample".into()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    /// Smallest sample `s` with `eval(s) >= p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        let rank = (p * n as f64).ceil() as usize;
        self.sorted[rank.clamp(1, n) - 1]
    }
}

pub fn empirical_cdf(batch: &TrialBatch) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(&batch.samples)
}

/// Detection error of threshold `gamma` counted on samples, equal priors.
pub fn empirical_error(h1: &TrialBatch, h2: &TrialBatch, gamma: f64) -> f64 {
    let below = h1.samples.iter().filter(|&&s| s < gamma).count() as f64 / h1.samples.len() as f64;
    let above = h2.samples.iter().filter(|&&s| s > gamma).count() as f64 / h2.samples.len() as f64;
    0.5 * below + 0.5 * above
}

/// `10 log10` of the ratio of sample means.
pub fn empirical_power_difference(h1: &TrialBatch, h2: &TrialBatch) -> f64 {
    10.0 * (h1.mean() / h2.mean()).log10()
}

/// Kolmogorov-Smirnov statistic of `samples` against `cdf`, evaluated at the samples.
pub fn ks_statistic<F>(samples: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if samples.is_empty() {
        return Err(Error::Domain("KS statistic needs at least one sample".into()));
    }
    let ecdf = EmpiricalCdf::new(samples)?;
    let n = ecdf.len() as f64;
    let values = ecdf.sorted().par_iter().map(|&x| cdf(x)).collect::<Result<Vec<f64>>>()?;
    Ok(values.iter().enumerate().fold(0.0, |acc, (i, &f)| {
        let upper = (i as f64 + 1.0) / n - f;
        let lower = f - i as f64 / n;
        acc.max(upper).max(lower)
    }))
}

pub fn ks_distance(batch: &TrialBatch, dist: &PowerDistribution) -> Result<f64> {
    ks_statistic(&batch.samples, |x| dist.cdf(x))
}
