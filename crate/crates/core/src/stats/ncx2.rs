//! Non-central chi-squared distribution with two degrees of freedom.
//!
//! With `a = lambda / 2` and `b = x / 2`, the CDF is the Poisson(a)-weighted
//! mixture of central chi-squared CDFs with `2 + 2j` degrees of freedom:
//!
//! ```text
//! F(x; lambda) = sum_j Pois(j; a) * P(chi2_{2+2j} <= x)
//!              = sum_j Pois(j; a) * P(Pois(b) > j)
//!              = 1 - Q_1(sqrt(lambda), sqrt(x))
//! ```
//!
//! Both Poisson laws are evaluated on a window around their mode by ratio
//! recursion and normalized over the window, so no gamma function is needed and
//! nothing underflows for large arguments.

use crate::error::{Error, Result};

/// Relative mass left outside a Poisson window, per side.
const TAIL_EPS: f64 = 1e-17;

/// Longest Poisson window before giving up (mean of roughly 5e10).
pub const MAX_TERMS: usize = 4_000_000;

/// Poisson probabilities on `[start, start + probs.len())`.
#[derive(Debug, Clone, PartialEq)]
struct PoissonWindow {
    start: usize,
    probs: Vec<f64>,
}

impl PoissonWindow {
    fn new(mean: f64) -> Result<Self> {
        if !(mean >= 0.0 && mean.is_finite()) {
            return Err(Error::Domain(format!("Poisson mean must be finite and >= 0, got {mean}")));
        }
        if mean > (MAX_TERMS as f64).powi(2) {
            return Err(Error::SeriesTruncated(MAX_TERMS));
        }
        let mode = mean.floor() as usize;

        let mut up = vec![1.0];
        let mut sum = 1.0;
        let mut w = 1.0;
        let mut j = mode;
        loop {
            let next = w * mean / (j + 1) as f64;
            let ratio = mean / (j + 2) as f64;
            if next / (1.0 - ratio) < TAIL_EPS * sum {
                break;
            }
            up.push(next);
            sum += next;
            w = next;
            j += 1;
            if up.len() > MAX_TERMS {
                return Err(Error::SeriesTruncated(MAX_TERMS));
            }
        }

        let mut down = Vec::new();
        let mut w = 1.0;
        let mut j = mode;
        while j > 0 {
            let prev = w * j as f64 / mean;
            let ratio = (j - 1) as f64 / mean;
            if prev / (1.0 - ratio) < TAIL_EPS * sum {
                break;
            }
            down.push(prev);
            sum += prev;
            w = prev;
            j -= 1;
            if up.len() + down.len() > MAX_TERMS {
                return Err(Error::SeriesTruncated(MAX_TERMS));
            }
        }

        let start = mode - down.len();
        let probs = down.into_iter().rev().chain(up).map(|p| p / sum).collect();
        Ok(PoissonWindow { start, probs })
    }

    fn end(&self) -> usize {
        self.start + self.probs.len()
    }

    fn prob(&self, j: usize) -> f64 {
        if j < self.start || j >= self.end() {
            0.0
        } else {
            self.probs[j - self.start]
        }
    }

    /// `P(X > j)` for every `j` in `[start, end)`.
    fn survival(&self) -> Vec<f64> {
        let mut sf = vec![0.0; self.probs.len()];
        let mut acc = 0.0;
        for i in (0..self.probs.len()).rev() {
            sf[i] = acc;
            acc += self.probs[i];
        }
        sf
    }

    /// `P(X <= j)` for every `j` in `[start, end)`.
    fn cumulative(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect()
    }
}

/// dof-2 non-central chi-squared law with the mixing weights precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct NonCentralChiSquared2 {
    noncentrality: f64,
    weights: PoissonWindow,
}

impl NonCentralChiSquared2 {
    pub fn new(noncentrality: f64) -> Result<Self> {
        if !(noncentrality >= 0.0 && noncentrality.is_finite()) {
            return Err(Error::Domain(format!("noncentrality must be finite and >= 0, got {noncentrality}")));
        }
        Ok(NonCentralChiSquared2 { noncentrality, weights: PoissonWindow::new(noncentrality / 2.0)? })
    }

    pub fn noncentrality(&self) -> f64 {
        self.noncentrality
    }

    pub fn mean(&self) -> f64 {
        2.0 + self.noncentrality
    }

    pub fn variance(&self) -> f64 {
        4.0 + 4.0 * self.noncentrality
    }

    fn check_x(x: f64) -> Result<()> {
        if x.is_nan() || x < 0.0 {
            return Err(Error::Domain(format!("argument must be >= 0, got {x}")));
        }
        Ok(())
    }

    /// `sum_j Pois(j; lambda/2) P(Pois(x/2) > j)`.
    fn lower_series(&self, x: f64) -> Result<f64> {
        let b = PoissonWindow::new(x / 2.0)?;
        let sf = b.survival();
        let w = &self.weights;
        Ok(w.probs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let j = w.start + i;
                let tail = if j < b.start {
                    1.0
                } else if j >= b.end() {
                    0.0
                } else {
                    sf[j - b.start]
                };
                p * tail
            })
            .sum())
    }

    /// `sum_j Pois(j; lambda/2) P(Pois(x/2) <= j)`.
    fn upper_series(&self, x: f64) -> Result<f64> {
        let b = PoissonWindow::new(x / 2.0)?;
        let cdf = b.cumulative();
        let w = &self.weights;
        Ok(w.probs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let j = w.start + i;
                let below = if j < b.start {
                    0.0
                } else if j >= b.end() {
                    1.0
                } else {
                    cdf[j - b.start]
                };
                p * below
            })
            .sum())
    }

    // The smaller tail is summed directly and the larger one taken as its
    // complement, which keeps both functions monotone near 0 and 1.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        if x == 0.0 {
            return Ok(0.0);
        }
        if x.is_infinite() {
            return Ok(1.0);
        }
        let upper = self.upper_series(x)?;
        let v = if upper <= 0.5 { 1.0 - upper } else { self.lower_series(x)? };
        Ok(v.clamp(0.0, 1.0))
    }

    /// `1 - cdf(x)` without cancellation in the upper tail.
    pub fn sf(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        if x == 0.0 {
            return Ok(1.0);
        }
        if x.is_infinite() {
            return Ok(0.0);
        }
        let upper = self.upper_series(x)?;
        let v = if upper <= 0.5 { upper } else { 1.0 - self.lower_series(x)? };
        Ok(v.clamp(0.0, 1.0))
    }

    /// Density, `0.5 * sum_j Pois(j; lambda/2) Pois(j; x/2)`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        Self::check_x(x)?;
        if x.is_infinite() {
            return Ok(0.0);
        }
        let b = PoissonWindow::new(x / 2.0)?;
        let w = &self.weights;
        let lo = w.start.max(b.start);
        let hi = w.end().min(b.end());
        Ok(0.5 * (lo..hi).map(|j| w.prob(j) * b.prob(j)).sum::<f64>())
    }

    /// Inverse CDF by bisection.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Domain(format!("quantile level must lie in [0, 1), got {p}")));
        }
        if p == 0.0 {
            return Ok(0.0);
        }
        let mut lo = 0.0;
        let mut hi = self.mean() + 10.0 * self.variance().sqrt() + 10.0;
        while self.cdf(hi)? < p {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-14 * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `P(X <= x)` for `X ~ chi2(2, lambda)`.
pub fn ncx2_cdf(x: f64, noncentrality: f64) -> Result<f64> {
    NonCentralChiSquared2::new(noncentrality)?.cdf(x)
}

pub fn ncx2_pdf(x: f64, noncentrality: f64) -> Result<f64> {
    NonCentralChiSquared2::new(noncentrality)?.pdf(x)
}

/// First-order Marcum Q function, `Q_1(a, b) = 1 - F(b^2; a^2)`.
pub fn marcum_q1(a: f64, b: f64) -> Result<f64> {
    if a < 0.0 || b < 0.0 {
        return Err(Error::Domain(format!("Marcum Q arguments must be >= 0, got ({a}, {b})")));
    }
    NonCentralChiSquared2::new(a * a)?.sf(b * b)
}
