//! Analytic model of the estimated channel and its power.
//!
//! The estimated channel is a coherent (real, positive) sum plus sums of
//! random-phase phasors plus complex Gaussian noise. Its real and imaginary
//! parts are modeled as independent Gaussians of equal variance, so the power
//! normalized by that variance is non-central chi-squared with two degrees of
//! freedom.

mod ncx2;

pub use ncx2::{marcum_q1, ncx2_cdf, ncx2_pdf, NonCentralChiSquared2, MAX_TERMS};

use crate::channel::CascadedChannel;
use crate::error::{Error, Result};
use crate::patterns::{coherent_amplitude, PatternId, RisPartition};

/// Moments of a sum of phasors `g_q e^{j beta_q}` with i.i.d. uniform phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasorSumMoments {
    pub mean_real: f64,
    pub mean_imag: f64,
    /// Variance of the real part, equal to that of the imaginary part.
    pub component_variance: f64,
    /// Covariance between real and imaginary parts.
    pub cross_covariance: f64,
}

/// Zero mean, `0.5 * sum |g_q|^2` per component, uncorrelated components.
pub fn dynamic_sum_moments<I: IntoIterator<Item = f64>>(amplitudes: I) -> PhasorSumMoments {
    let power: f64 = amplitudes.into_iter().map(|a| a * a).sum();
    PhasorSumMoments { mean_real: 0.0, mean_imag: 0.0, component_variance: 0.5 * power, cross_covariance: 0.0 }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianChannelModel {
    pub mean_real: f64,
    pub mean_imag: f64,
    pub component_variance: f64,
}

/// Gaussian model of the estimated channel under `pattern`.
///
/// `noise_variance` is the total variance of the complex noise on the
/// normalized estimate (half of it per component).
pub fn channel_model(
    channel: &CascadedChannel,
    partition: &RisPartition,
    pattern: PatternId,
    noise_variance: f64,
) -> Result<GaussianChannelModel> {
    if partition.num_elements() != channel.len() {
        return Err(Error::LengthMismatch { expected: channel.len(), got: partition.num_elements() });
    }
    if !(noise_variance >= 0.0 && noise_variance.is_finite()) {
        return Err(Error::Domain(format!("noise variance must be finite and >= 0, got {noise_variance}")));
    }
    let amps = channel.amplitudes();
    let random_area = partition.a2().iter().chain(match pattern {
        PatternId::Pattern1 => [].iter(),
        PatternId::Pattern2 => partition.a3().iter(),
    });
    let random = dynamic_sum_moments(random_area.map(|&q| amps[q]));
    let component_variance = 0.5 * noise_variance + random.component_variance;
    if component_variance <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    Ok(GaussianChannelModel {
        mean_real: coherent_amplitude(channel, partition, pattern),
        mean_imag: 0.0,
        component_variance,
    })
}

/// `|h|^2 / scale ~ chi2(2, noncentrality)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerDistribution {
    scale: f64,
    law: NonCentralChiSquared2,
}

impl PowerDistribution {
    pub const DOF: u32 = 2;

    pub fn new(scale: f64, noncentrality: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!("scale must be positive and finite, got {scale}")));
        }
        Ok(PowerDistribution { scale, law: NonCentralChiSquared2::new(noncentrality)? })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn noncentrality(&self) -> f64 {
        self.law.noncentrality()
    }

    pub fn dof(&self) -> u32 {
        Self::DOF
    }

    /// Normalized law of `|h|^2 / scale`.
    pub fn normalized(&self) -> &NonCentralChiSquared2 {
        &self.law
    }

    /// `scale * (2 + lambda)`.
    pub fn mean(&self) -> f64 {
        self.scale * self.law.mean()
    }

    pub fn cdf(&self, power: f64) -> Result<f64> {
        self.law.cdf(power / self.scale)
    }

    pub fn sf(&self, power: f64) -> Result<f64> {
        self.law.sf(power / self.scale)
    }

    pub fn pdf(&self, power: f64) -> Result<f64> {
        Ok(self.law.pdf(power / self.scale)? / self.scale)
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        Ok(self.law.quantile(p)? * self.scale)
    }

    /// Same distribution with both the scale and the power axis multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        PowerDistribution::new(self.scale * factor, self.noncentrality())
    }
}

pub fn power_distribution(model: &GaussianChannelModel) -> Result<PowerDistribution> {
    if model.component_variance <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let noncentrality = model.mean_real * model.mean_real / model.component_variance;
    PowerDistribution::new(model.component_variance, noncentrality)
}

/// `P(|h|^2 <= gamma)`.
pub fn power_cdf(gamma: f64, dist: &PowerDistribution) -> Result<f64> {
    dist.cdf(gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{make_partition, PartitionPolicy};
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_channel(q: usize, seed: u64) -> CascadedChannel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CascadedChannel::from_coefficients(
            (0..q)
                .map(|_| Complex64::from_polar(rng.random_range(0.1..1.0), rng.random_range(-PI..PI)))
                .collect(),
        )
    }

    #[test]
    fn phasor_moments() {
        assert_eq!(dynamic_sum_moments(std::iter::empty()).component_variance, 0.0);
        let m = dynamic_sum_moments([1.0]);
        assert_eq!(m.component_variance, 0.5);
        assert_eq!((m.mean_real, m.mean_imag, m.cross_covariance), (0.0, 0.0, 0.0));
    }

    #[test]
    fn pattern_models() {
        let ch = random_channel(40, 1);
        let p = make_partition(40, 15, 15, 10, PartitionPolicy::Contiguous).unwrap();
        let s2 = 0.3;
        let m1 = channel_model(&ch, &p, PatternId::Pattern1, s2).unwrap();
        let m2 = channel_model(&ch, &p, PatternId::Pattern2, s2).unwrap();
        assert_relative_eq!(m1.mean_real, ch.amplitude_sum(p.a1()) + ch.amplitude_sum(p.a3()), max_relative = 1e-14);
        assert_relative_eq!(m2.mean_real, ch.amplitude_sum(p.a1()), max_relative = 1e-14);
        assert_relative_eq!(m1.component_variance, 0.5 * s2 + 0.5 * ch.power_sum(p.a2()), max_relative = 1e-14);
        assert_relative_eq!(
            m2.component_variance,
            0.5 * s2 + 0.5 * ch.power_sum(p.a2()) + 0.5 * ch.power_sum(p.a3()),
            max_relative = 1e-14
        );
        assert_eq!(m1.mean_imag, 0.0);
        assert_relative_eq!(
            m2.component_variance - m1.component_variance,
            0.5 * ch.power_sum(p.a3()),
            max_relative = 1e-12
        );
    }

    #[test]
    fn no_dynamic_area_gives_identical_models() {
        let ch = random_channel(20, 2);
        let p = make_partition(20, 10, 10, 0, PartitionPolicy::Contiguous).unwrap();
        assert_eq!(
            channel_model(&ch, &p, PatternId::Pattern1, 0.1).unwrap(),
            channel_model(&ch, &p, PatternId::Pattern2, 0.1).unwrap()
        );
    }

    #[test]
    fn noise_free_pattern2_variance_is_dynamic_area_only() {
        let ch = random_channel(20, 3);
        let p = make_partition(20, 12, 0, 8, PartitionPolicy::Contiguous).unwrap();
        let m2 = channel_model(&ch, &p, PatternId::Pattern2, 0.0).unwrap();
        assert_relative_eq!(m2.component_variance, 0.5 * ch.power_sum(p.a3()), max_relative = 1e-14);
    }

    #[test]
    fn degenerate_variance_is_rejected() {
        let ch = random_channel(5, 3);
        let p = make_partition(5, 5, 0, 0, PartitionPolicy::Contiguous).unwrap();
        assert!(matches!(channel_model(&ch, &p, PatternId::Pattern1, 0.0), Err(Error::DegenerateVariance)));
    }

    #[test]
    fn power_distribution_parameters() {
        let central = power_distribution(&GaussianChannelModel { mean_real: 0.0, mean_imag: 0.0, component_variance: 2.0 })
            .unwrap();
        assert_eq!(central.noncentrality(), 0.0);
        assert_eq!(central.dof(), 2);
        let unit = power_distribution(&GaussianChannelModel { mean_real: 3.0, mean_imag: 0.0, component_variance: 9.0 })
            .unwrap();
        assert_relative_eq!(unit.noncentrality(), 1.0, epsilon = 1e-15);
        assert_relative_eq!(unit.mean(), 9.0 * 3.0, epsilon = 1e-12);
    }

    #[test]
    fn power_cdf_examples() {
        let d = PowerDistribution::new(1e-17, 80.0).unwrap();
        assert_eq!(power_cdf(0.0, &d).unwrap(), 0.0);
        let at_mean = power_cdf(d.mean(), &d).unwrap();
        assert!(at_mean > 0.0 && at_mean < 1.0);
        assert!(power_cdf(-1.0, &d).is_err());
    }
}
