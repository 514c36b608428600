//! Free-space channel coefficients and the cascaded BS -> RIS -> UE channel.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scene::{ElementLayout, Scene};

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_phase(angle: f64) -> f64 {
    let wrapped = (angle + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid can round up to exactly 2*pi for tiny negative inputs
    if wrapped >= PI {
        -PI
    } else {
        wrapped
    }
}

/// `lambda / (4 pi d) * exp(-j 2 pi d / lambda)`.
pub fn freespace_coeff(distance: f64, wavelength: f64) -> Result<Complex64> {
    if distance == 0.0 {
        return Err(Error::ZeroDistance);
    }
    if !(distance > 0.0 && wavelength > 0.0) {
        return Err(Error::Domain(format!(
            "distance ({distance}) and wavelength ({wavelength}) must be positive"
        )));
    }
    let amplitude = wavelength / (4.0 * PI * distance);
    // Reduce the cycle count first so large distances keep their phase precision.
    let cycles = (distance / wavelength).fract();
    let phase = wrap_phase(-2.0 * PI * cycles);
    Ok(Complex64::from_polar(amplitude, phase))
}

/// Free-space pathloss in dB, i.e. `-20 log10 |h|`.
pub fn pathloss_db(distance: f64, wavelength: f64) -> Result<f64> {
    Ok(-20.0 * freespace_coeff(distance, wavelength)?.norm().log10())
}

/// Per-element products `g_q = h_r,q * h_t,q` for one UE.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadedChannel {
    per_element: Vec<Complex64>,
    amplitudes: Vec<f64>,
}

impl CascadedChannel {
    pub fn from_coefficients(per_element: Vec<Complex64>) -> Self {
        let amplitudes = per_element.iter().map(|g| g.norm()).collect();
        CascadedChannel { per_element, amplitudes }
    }

    pub fn per_element(&self) -> &[Complex64] {
        &self.per_element
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.per_element.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_element.is_empty()
    }

    /// `sum |g_q|` over `indices`.
    pub fn amplitude_sum(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&q| self.amplitudes[q]).sum()
    }

    /// `sum |g_q|^2` over `indices`.
    pub fn power_sum(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&q| self.amplitudes[q] * self.amplitudes[q]).sum()
    }

    /// `sum g_q e^{j beta_q}` restricted to `indices`.
    pub fn partial_sum(&self, phases: &PhaseVector, indices: &[usize]) -> Result<Complex64> {
        self.check_len(phases)?;
        Ok(indices
            .iter()
            .map(|&q| self.per_element[q] * Complex64::cis(phases.phases[q]))
            .sum())
    }

    fn check_len(&self, phases: &PhaseVector) -> Result<()> {
        if phases.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: phases.len() });
        }
        Ok(())
    }
}

pub fn cascaded_channel(scene: &Scene, layout: &ElementLayout) -> Result<CascadedChannel> {
    let wavelength = scene.wavelength();
    let per_element = layout
        .positions()
        .iter()
        .map(|&p| {
            let tx = freespace_coeff(scene.bs_position.distance(p), wavelength)?;
            let rx = freespace_coeff(p.distance(scene.ue_position), wavelength)?;
            Ok(rx * tx)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CascadedChannel::from_coefficients(per_element))
}

/// RIS phase shifts `beta_q`, each in `[-pi, pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector {
    phases: Vec<f64>,
}

impl PhaseVector {
    /// Wraps every entry into `[-pi, pi)`.
    pub fn new(phases: Vec<f64>) -> Self {
        PhaseVector { phases: phases.into_iter().map(wrap_phase).collect() }
    }

    pub fn zeros(len: usize) -> Self {
        PhaseVector { phases: vec![0.0; len] }
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn set(&mut self, index: usize, phase: f64) {
        self.phases[index] = wrap_phase(phase);
    }

    pub fn assign(&mut self, assignments: &[(usize, f64)]) {
        for &(q, beta) in assignments {
            self.set(q, beta);
        }
    }
}

/// `sum_q g_q e^{j beta_q}`.
pub fn effective_channel(channel: &CascadedChannel, phases: &PhaseVector) -> Result<Complex64> {
    channel.check_len(phases)?;
    Ok(channel
        .per_element
        .iter()
        .zip(&phases.phases)
        .map(|(g, &beta)| g * Complex64::cis(beta))
        .sum())
}
