//! Pattern detection from the estimated channel power.
//!
//! H1 is "dynamic area coherent" (pattern 1), H2 is "dynamic area elsewhere"
//! (pattern 2). The UE decides H1 when `|h|^2 >= gamma`.

use crate::channel::{cascaded_channel, CascadedChannel};
use crate::error::{Error, Result};
use crate::patterns::{PatternId, RisPartition};
use crate::scene::{build_layout, Scene};
use crate::stats::{channel_model, power_distribution, PowerDistribution};

/// Prior of either hypothesis.
pub const EQUAL_PRIOR: f64 = 0.5;

/// Golden-section stops once the bracket is this fraction of `mu1 - mu2`.
pub const THRESHOLD_REL_TOL: f64 = 1e-6;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

pub(crate) fn error_probability_with_prior(
    gamma: f64,
    h1: &PowerDistribution,
    h2: &PowerDistribution,
    prior_h1: f64,
) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(Error::Domain(format!("threshold must be >= 0, got {gamma}")));
    }
    Ok(prior_h1 * h1.cdf(gamma)? + (1.0 - prior_h1) * h2.sf(gamma)?)
}

/// `0.5 P(|h|^2 < gamma | H1) + 0.5 P(|h|^2 > gamma | H2)`.
pub fn error_probability(gamma: f64, h1: &PowerDistribution, h2: &PowerDistribution) -> Result<f64> {
    error_probability_with_prior(gamma, h1, h2, EQUAL_PRIOR)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub gamma: f64,
    pub p_error: f64,
}

/// Minimizes the error probability over `[mu2, mu1]` by golden-section search.
pub fn optimal_threshold(h1: &PowerDistribution, h2: &PowerDistribution) -> Result<Threshold> {
    let (mu1, mu2) = (h1.mean(), h2.mean());
    if mu1.is_nan() || mu2.is_nan() || mu1 <= mu2 {
        return Err(Error::DegenerateSeparation { mu1, mu2 });
    }
    let f = |x: f64| error_probability(x, h1, h2);
    let tol = THRESHOLD_REL_TOL * (mu1 - mu2);

    let (mut a, mut b) = (mu2, mu1);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut best = if fc <= fd { Threshold { gamma: c, p_error: fc } } else { Threshold { gamma: d, p_error: fd } };
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
            if fc < best.p_error {
                best = Threshold { gamma: c, p_error: fc };
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
            if fd < best.p_error {
                best = Threshold { gamma: d, p_error: fd };
            }
        }
    }
    for edge in [mu2, mu1] {
        let pe = f(edge)?;
        if pe < best.p_error {
            best = Threshold { gamma: edge, p_error: pe };
        }
    }
    Ok(best)
}

/// `K / (N + M + K)`.
pub fn random_part_ratio(partition: &RisPartition) -> f64 {
    let (_, _, k) = partition.sizes();
    k as f64 / partition.num_elements() as f64
}

/// `10 log10(E|h|^2 under H1 / E|h|^2 under H2)`.
pub fn relative_power_difference(h1: &PowerDistribution, h2: &PowerDistribution) -> f64 {
    10.0 * (h1.mean() / h2.mean()).log10()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionReport {
    pub threshold: f64,
    pub p_error: f64,
    pub r_ratio: f64,
    pub g_d_db: f64,
    pub mean_h1: f64,
    pub mean_h2: f64,
}

/// Both pattern distributions together with the detection report.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub h1: PowerDistribution,
    pub h2: PowerDistribution,
    pub report: DetectionReport,
}

pub fn analyze(channel: &CascadedChannel, partition: &RisPartition, noise_variance: f64) -> Result<Analysis> {
    let h1 = power_distribution(&channel_model(channel, partition, PatternId::Pattern1, noise_variance)?)?;
    let h2 = power_distribution(&channel_model(channel, partition, PatternId::Pattern2, noise_variance)?)?;
    let best = optimal_threshold(&h1, &h2)?;
    let report = DetectionReport {
        threshold: best.gamma,
        p_error: best.p_error,
        r_ratio: random_part_ratio(partition),
        g_d_db: relative_power_difference(&h1, &h2),
        mean_h1: h1.mean(),
        mean_h2: h2.mean(),
    };
    Ok(Analysis { h1, h2, report })
}

pub fn evaluate_scenario(scene: &Scene, partition: &RisPartition) -> Result<DetectionReport> {
    let layout = build_layout(scene)?;
    let channel = cascaded_channel(scene, &layout)?;
    Ok(analyze(&channel, partition, scene.noise_variance())?.report)
}
