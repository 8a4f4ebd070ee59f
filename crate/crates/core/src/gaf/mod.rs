//! Sampling the Bergman point process as the zero set of the hyperbolic
//! Gaussian analytic function `Σ g_n w^n`, truncated at a finite degree.

mod aberth;
pub mod poly;
mod winding;

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;
// Needed without std; redundant when another crate in the build links std.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use aberth::{aberth_roots, AberthOptions};
pub use winding::winding_count;

use crate::error::{Error, Result};
use crate::hyperbolic::{distance_unchecked, shell_radius, DiskPoint, StatisticParams};

/// Default truncation accuracy for [`sample_configuration`].
pub const DEFAULT_TRUNCATION_EPS: f64 = 1e-6;

/// Relative residual `|p(x)| / Σ |g_n| |x|^n` every returned root satisfies.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;

/// Random stream for trial `stream` of an experiment seeded with `seed`.
///
/// Each `(seed, stream)` pair is an independent ChaCha8 stream, so trial
/// results do not depend on the order in which trials are run.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Smallest degree `M >= 1` with `ρ^{2(M+1)} / (1 - ρ²) < eps²`, i.e. the
/// truncated tail `Σ_{n>M} g_n w^n` has second moment below `eps²` on `|w| = ρ`.
pub fn truncation_degree(rho: f64, eps: f64) -> Result<usize> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::InvalidArgument("truncation radius must lie in (0, 1)"));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("truncation accuracy must be positive"));
    }
    let log_rho = rho.ln();
    let guess = (2.0 * eps.ln() + (1.0 - rho * rho).ln()) / (2.0 * log_rho);
    let mut m = if guess.is_finite() { guess.floor().max(1.0) as usize } else { 1 };
    // settle floating-point rounding on either side of the threshold
    while m > 1 && tail_second_moment(rho, m - 1) < eps * eps {
        m -= 1;
    }
    while tail_second_moment(rho, m) >= eps * eps {
        m += 1;
    }
    Ok(m)
}

/// `E |Σ_{n>M} g_n w^n|²` on `|w| = ρ`.
pub fn tail_second_moment(rho: f64, degree: usize) -> f64 {
    (2.0 * (degree as f64 + 1.0) * rho.ln()).exp() / (1.0 - rho * rho)
}

/// Coefficients `g_0 … g_M` of a truncated hyperbolic GAF.
#[derive(Debug, Clone, PartialEq)]
pub struct GafSample {
    coefficients: Vec<Complex64>,
    seed: u64,
    stream: u64,
}

impl GafSample {
    /// Draws `degree + 1` i.i.d. standard complex Gaussians (real and
    /// imaginary parts `N(0, 1/2)`) from stream `(seed, stream)`.
    pub fn draw(degree: usize, seed: u64, stream: u64) -> Self {
        let mut rng = trial_rng(seed, stream);
        let mut coefficients: Vec<Complex64> = (0..=degree).map(|_| standard_complex(&mut rng)).collect();
        while coefficients[degree].is_zero() {
            coefficients[degree] = standard_complex(&mut rng);
        }
        Self { coefficients, seed, stream }
    }

    /// Wraps explicit coefficients (lowest degree first).
    pub fn from_coefficients(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() < 2 {
            return Err(Error::InvalidArgument("polynomial degree must be at least 1"));
        }
        Ok(Self { coefficients, seed: 0, stream: 0 })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// `Σ g_n w^n`.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        poly::eval(&self.coefficients, w)
    }

    /// `|p(x)| / Σ |g_n| |x|^n`.
    pub fn relative_residual(&self, x: Complex64) -> f64 {
        self.eval(x).norm() / poly::abs_horner(&self.coefficients, x.norm())
    }
}

fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Roots of the truncated series with `|root| < rho`.
pub fn find_roots(sample: &GafSample, rho: f64) -> Result<Vec<DiskPoint>> {
    find_roots_with(sample, rho, AberthOptions::default())
}

pub fn find_roots_with(sample: &GafSample, rho: f64, opts: AberthOptions) -> Result<Vec<DiskPoint>> {
    let roots = aberth_roots(sample.coefficients(), opts)?;
    Ok(roots.into_iter().filter(|w| w.norm() < rho).collect())
}

/// Number of zeros in `|w| < rho` by the argument principle; an oracle
/// independent of [`find_roots`].
pub fn count_zeros_winding(sample: &GafSample, rho: f64) -> Result<usize> {
    winding_count(sample.coefficients(), rho)
}

/// Zeros of one truncated GAF inside the disk `|w| < validity_radius`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Configuration {
    pub points: Vec<DiskPoint>,
    /// Every point satisfies `|w| < validity_radius = tanh(depth / 2)`.
    pub validity_radius: f64,
    /// Hyperbolic radius (about the origin) of the sampled disk.
    #[cfg_attr(feature = "serde", serde(rename = "N"))]
    pub depth: u32,
    pub truncation_degree: usize,
    pub seed: u64,
    pub stream: u64,
    /// Root-mean-square size of the discarded tail on `|w| = validity_radius`.
    pub tail_bound: f64,
}

impl Configuration {
    /// A hand-built configuration, e.g. for deterministic experiments.
    pub fn from_points(points: Vec<DiskPoint>, depth: u32) -> Result<Self> {
        let validity_radius = shell_radius(f64::from(depth));
        if let Some(p) = points.iter().find(|p| !(p.norm() < validity_radius)) {
            return Err(Error::OutsideDisk { re: p.re, im: p.im });
        }
        Ok(Self {
            points,
            validity_radius,
            depth,
            truncation_degree: 0,
            seed: 0,
            stream: 0,
            tail_bound: 0.0,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of points with `|w| < r`.
    pub fn count_within(&self, r: f64) -> usize {
        self.points.iter().filter(|w| w.norm() < r).count()
    }
}

/// Hyperbolic radius about the origin that must be sampled so that
/// `U_N(z)` is covered: `N` itself when `z = 0`, otherwise
/// `⌈N + d_h(0, z) + 1⌉`.
pub fn coverage_depth(params: &StatisticParams) -> u32 {
    coverage_depth_for(params.z(), params.n())
}

pub fn coverage_depth_for(z: DiskPoint, n: u32) -> u32 {
    if z.is_zero() {
        n
    } else {
        let d0 = distance_unchecked(Complex64::zero(), z);
        (f64::from(n) + d0 + 1.0).ceil() as u32
    }
}

/// Samples the point process on the disk of hyperbolic radius
/// `coverage_depth(params)` about the origin, using stream 0 of `seed`.
pub fn sample_configuration(params: &StatisticParams, eps: f64, seed: u64) -> Result<Configuration> {
    sample_trial(coverage_depth(params), eps, seed, 0)
}

/// One trial: zeros of a GAF truncated for accuracy `eps` on the disk of
/// hyperbolic radius `depth`, drawn from stream `(seed, stream)`.
pub fn sample_trial(depth: u32, eps: f64, seed: u64, stream: u64) -> Result<Configuration> {
    if depth == 0 {
        return Ok(Configuration {
            points: Vec::new(),
            validity_radius: 0.0,
            depth,
            truncation_degree: 0,
            seed,
            stream,
            tail_bound: 0.0,
        });
    }
    let rho = shell_radius(f64::from(depth));
    let degree = truncation_degree(rho, eps)?;
    let sample = GafSample::draw(degree, seed, stream);
    let points = find_roots(&sample, rho)?;
    Ok(Configuration {
        points,
        validity_radius: rho,
        depth,
        truncation_degree: degree,
        seed,
        stream,
        tail_bound: tail_second_moment(rho, degree).sqrt(),
    })
}
