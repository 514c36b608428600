//! RIS area partitions and the two alternating configuration patterns.
//!
//! Area 1 always combines coherently towards the observed UE. Area 2 serves
//! other UEs and is seen by the observed UE as uniformly random phases. Area 3
//! is the dynamic part: coherent under pattern 1, random under pattern 2.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{wrap_phase, CascadedChannel, PhaseVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RisPartition {
    a1: Vec<usize>,
    a2: Vec<usize>,
    a3: Vec<usize>,
}

impl RisPartition {
    /// Coherent area for the observed UE (size N).
    pub fn a1(&self) -> &[usize] {
        &self.a1
    }

    /// Area configured for other UEs (size M).
    pub fn a2(&self) -> &[usize] {
        &self.a2
    }

    /// Dynamic area (size K).
    pub fn a3(&self) -> &[usize] {
        &self.a3
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.a1.len(), self.a2.len(), self.a3.len())
    }

    pub fn num_elements(&self) -> usize {
        self.a1.len() + self.a2.len() + self.a3.len()
    }
}

/// How area membership is mapped onto element indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionPolicy {
    /// Blocks `[0, N)`, `[N, N+M)`, `[N+M, Q)` for areas 1, 2, 3.
    Contiguous,
    /// Blocks `[0, K)`, `[K, K+N)`, `[K+N, Q)` for areas 3, 1, 2.
    DynamicFirst,
    /// Seeded random assignment of element indices to areas.
    Interleaved { seed: u64 },
}

/// The CLI uses `DynamicFirst` unless `--layout` is given.
impl Default for PartitionPolicy {
    fn default() -> Self {
        PartitionPolicy::DynamicFirst
    }
}

impl fmt::Display for PartitionPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionPolicy::Contiguous => f.write_str("contiguous"),
            PartitionPolicy::DynamicFirst => f.write_str("dynamic-first"),
            PartitionPolicy::Interleaved { seed } => write!(f, "interleaved:{seed}"),
        }
    }
}

impl FromStr for PartitionPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "contiguous" => Ok(PartitionPolicy::Contiguous),
            "dynamic-first" => Ok(PartitionPolicy::DynamicFirst),
            _ => {
                let seed = s
                    .strip_prefix("interleaved:")
                    .and_then(|seed| seed.parse().ok())
                    .ok_or_else(|| {
                        Error::InvalidPartition(format!(
                            "unknown layout `{s}` (expected contiguous, dynamic-first or interleaved:<seed>)"
                        ))
                    })?;
                Ok(PartitionPolicy::Interleaved { seed })
            }
        }
    }
}

pub fn make_partition(
    q: usize,
    n: usize,
    m: usize,
    k: usize,
    policy: PartitionPolicy,
) -> Result<RisPartition> {
    if n + m + k != q {
        return Err(Error::InvalidPartition(format!("N + M + K = {} but Q = {q}", n + m + k)));
    }
    if n == 0 {
        return Err(Error::InvalidPartition("area 1 must keep at least one element (N >= 1)".into()));
    }
    let range = |start: usize, len: usize| (start..start + len).collect::<Vec<_>>();
    let partition = match policy {
        PartitionPolicy::Contiguous => RisPartition { a1: range(0, n), a2: range(n, m), a3: range(n + m, k) },
        PartitionPolicy::DynamicFirst => RisPartition { a3: range(0, k), a1: range(k, n), a2: range(k + n, m) },
        PartitionPolicy::Interleaved { seed } => {
            let mut order: Vec<usize> = (0..q).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let take = |lo: usize, hi: usize| {
                let mut v = order[lo..hi].to_vec();
                v.sort_unstable();
                v
            };
            RisPartition { a1: take(0, n), a2: take(n, n + m), a3: take(n + m, q) }
        }
    };
    Ok(partition)
}

/// Which configuration the dynamic area is in, from the observed UE's view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternId {
    /// Dynamic area coherent for the observed UE (hypothesis H1).
    Pattern1,
    /// Dynamic area serving another UE (hypothesis H2).
    Pattern2,
}

/// `beta_q = -arg(g_q)` so every listed element adds `|g_q|` on the real axis.
pub fn coherent_phases(channel: &CascadedChannel, indices: &[usize]) -> Vec<(usize, f64)> {
    indices
        .iter()
        .map(|&q| (q, wrap_phase(-channel.per_element()[q].arg())))
        .collect()
}

/// i.i.d. uniform phases on `[-pi, pi)`, drawn in the order of `indices`.
pub fn random_phases<R: Rng + ?Sized>(indices: &[usize], rng: &mut R) -> Vec<(usize, f64)> {
    indices.iter().map(|&q| (q, rng.random_range(-PI..PI))).collect()
}

/// Full phase vector for one realization of `pattern`.
///
/// Random phases are drawn for area 2 first, then (under pattern 2) area 3.
pub fn build_pattern<R: Rng + ?Sized>(
    channel: &CascadedChannel,
    partition: &RisPartition,
    pattern: PatternId,
    rng: &mut R,
) -> Result<PhaseVector> {
    if partition.num_elements() != channel.len() {
        return Err(Error::LengthMismatch { expected: channel.len(), got: partition.num_elements() });
    }
    let mut phases = PhaseVector::zeros(channel.len());
    phases.assign(&coherent_phases(channel, partition.a1()));
    phases.assign(&random_phases(partition.a2(), rng));
    match pattern {
        PatternId::Pattern1 => phases.assign(&coherent_phases(channel, partition.a3())),
        PatternId::Pattern2 => phases.assign(&random_phases(partition.a3(), rng)),
    }
    Ok(phases)
}

/// Deterministic part of the effective channel under `pattern`: the
/// amplitude sum over the coherently configured areas.
pub fn coherent_amplitude(channel: &CascadedChannel, partition: &RisPartition, pattern: PatternId) -> f64 {
    let base = channel.amplitude_sum(partition.a1());
    match pattern {
        PatternId::Pattern1 => base + channel.amplitude_sum(partition.a3()),
        PatternId::Pattern2 => base,
    }
}
