//! Oracles and fixtures shared by the integration tests.
//!
//! Nothing here calls into the series code of the library: the CDF oracle
//! integrates the Bessel-form density numerically and the sampler draws the
//! estimated channel directly from its definition.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use ris_pathid::channel::{cascaded_channel, CascadedChannel};
use ris_pathid::patterns::{make_partition, PartitionPolicy, PatternId, RisPartition};
use ris_pathid::scene::{build_layout, Point, Scene, SPEED_OF_LIGHT};

/// `exp(-z) I0(z)` by the trapezoid rule on `(1/pi) int_0^pi exp(z (cos t - 1)) dt`.
///
/// The integrand is smooth and periodic, so the trapezoid rule converges
/// geometrically.
pub fn scaled_bessel_i0(z: f64) -> f64 {
    const PANELS: usize = 1024;
    let h = PI / PANELS as f64;
    let f = |t: f64| (z * (t.cos() - 1.0)).exp();
    let inner: f64 = (1..PANELS).map(|i| f(i as f64 * h)).sum();
    (0.5 * (f(0.0) + f(PI)) + inner) * h / PI
}

/// dof-2 non-central chi-squared density from its Bessel representation.
pub fn ncx2_density(x: f64, lambda: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    let d = x.sqrt() - lambda.sqrt();
    0.5 * (-0.5 * d * d).exp() * scaled_bessel_i0((lambda * x).sqrt())
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// CDF oracle on an increasing grid, integrating the density between neighbours.
pub fn ncx2_cdf_quadrature(xs: &[f64], lambda: f64) -> Vec<f64> {
    let density = |t: f64| ncx2_density(t, lambda);
    let mut acc = 0.0;
    let mut last = 0.0;
    xs.iter()
        .map(|&x| {
            assert!(x >= last, "grid must be increasing");
            // Split long steps so the adaptive rule never sees a peak only between its probes.
            let pieces = ((x - last) / 2.0).ceil().max(1.0) as usize;
            let w = (x - last) / pieces as f64;
            for p in 0..pieces {
                let a = last + p as f64 * w;
                acc += integrate(&density, a, a + w, 1e-13);
            }
            last = x;
            acc
        })
        .collect()
}

pub fn table1_scene(ue_x: f64) -> Scene {
    Scene::table1(Point::new(ue_x, 0.0))
}

pub fn table1_channel(ue_x: f64) -> (Scene, CascadedChannel) {
    let scene = table1_scene(ue_x);
    let channel = cascaded_channel(&scene, &build_layout(&scene).unwrap()).unwrap();
    (scene, channel)
}

/// A random small scene with its channel, a partition and a noise level.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub scene: Scene,
    pub channel: CascadedChannel,
    pub partition: RisPartition,
    pub noise_variance: f64,
}

fn on_circle(rng: &mut StdRng, center: Point, r_lo: f64, r_hi: f64) -> Point {
    let r = rng.random_range(r_lo..r_hi);
    let a = rng.random_range(-PI..PI);
    Point::new(center.x + r * a.cos(), center.y + r * a.sin())
}

pub fn random_geometry(seed: u64, q_range: std::ops::RangeInclusive<usize>) -> Geometry {
    let mut rng = StdRng::seed_from_u64(seed);
    let q = rng.random_range(q_range);
    let freq = rng.random_range(1e9..10e9);
    let ris = Point::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
    let a = rng.random_range(-PI..PI);
    let mut scene = Scene {
        bs_position: on_circle(&mut rng, ris, 5.0, 100.0),
        ris_center: ris,
        ris_orientation: Point::new(a.cos(), a.sin()),
        ue_position: on_circle(&mut rng, ris, 50.0, 5000.0),
        num_elements: q,
        element_spacing: SPEED_OF_LIGHT / freq / 2.0,
        carrier_frequency: freq,
        tx_power: 1.0,
        noise_power: 1.0,
    };
    let channel = cascaded_channel(&scene, &build_layout(&scene).unwrap()).unwrap();
    let mean_power = channel.power_sum(&(0..q).collect::<Vec<_>>()) / q as f64;
    let noise_variance = rng.random_range(0.1..2.0) * mean_power;
    scene.noise_power = noise_variance;

    let n = rng.random_range(q / 4..=q - 2).max(1);
    let k = rng.random_range(1..=q - n);
    let m = q - n - k;
    let policy = match rng.random_range(0..3) {
        0 => PartitionPolicy::Contiguous,
        1 => PartitionPolicy::DynamicFirst,
        _ => PartitionPolicy::Interleaved { seed: rng.random() },
    };
    let partition = make_partition(q, n, m, k, policy).unwrap();
    Geometry { scene, channel, partition, noise_variance }
}

/// Draws of the estimated channel straight from its definition: coherent
/// phases on the static areas, fresh uniform phases on the random ones, and
/// circular complex Gaussian noise of total variance `noise_variance`.
pub fn direct_channel_draws(
    channel: &CascadedChannel,
    partition: &RisPartition,
    pattern: PatternId,
    noise_variance: f64,
    n: usize,
    seed: u64,
) -> Vec<Complex64> {
    let g = channel.per_element();
    let mut coherent: Vec<usize> = partition.a1().to_vec();
    let mut random: Vec<usize> = partition.a2().to_vec();
    match pattern {
        PatternId::Pattern1 => coherent.extend_from_slice(partition.a3()),
        PatternId::Pattern2 => random.extend_from_slice(partition.a3()),
    }
    // g e^{-j arg g} = |g|, computed by actually rotating
    let fixed: Complex64 = coherent.iter().map(|&q| g[q] * Complex64::cis(-g[q].arg())).sum();
    let sd = (0.5 * noise_variance).sqrt();
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let mut h = fixed;
            for &q in &random {
                h += g[q] * Complex64::cis(rng.random_range(0.0..2.0 * PI));
            }
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            h + Complex64::new(re * sd, im * sd)
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct SampleMoments {
    pub mean_re: f64,
    pub mean_im: f64,
    pub var_re: f64,
    pub var_im: f64,
    pub corr: f64,
    pub n: usize,
}

pub fn sample_moments(z: &[Complex64]) -> SampleMoments {
    let n = z.len() as f64;
    let mean_re = z.iter().map(|c| c.re).sum::<f64>() / n;
    let mean_im = z.iter().map(|c| c.im).sum::<f64>() / n;
    let (mut vr, mut vi, mut cov) = (0.0, 0.0, 0.0);
    for c in z {
        let (a, b) = (c.re - mean_re, c.im - mean_im);
        vr += a * a;
        vi += b * b;
        cov += a * b;
    }
    let (vr, vi, cov) = (vr / (n - 1.0), vi / (n - 1.0), cov / (n - 1.0));
    SampleMoments { mean_re, mean_im, var_re: vr, var_im: vi, corr: cov / (vr * vi).sqrt(), n: z.len() }
}

/// Minimum of `f` on `points` equally spaced values over `[lo, hi]`.
pub fn grid_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> (f64, f64) {
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .map(|x| (x, f(x)))
        .fold((f64::NAN, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}
