//! Expectation integrals of `S_N = ‖Θ_N^{(s,z)}‖²` and the integrands of the
//! variance decomposition.
//!
//! All integrals are against the normalised area measure `dμ = dx dy / π`;
//! after the change of variables `w = φ_z(x)` and averaging over angles they
//! reduce to the radial forms evaluated here:
//!
//! ```text
//! E[S_{N,1}] = 2 (1-|z|²)^{-2} ∫_0^{r_N} (1-r)^{2s-4} (1+r)^{-(2s+4)} r (|z|⁴r⁴ + 4|z|²r² + 1) dr
//! I_{N,1}    = 4 (1-|z|²)^{-2} (∫_0^{r_N} (1-r)^{s-2} (1+r)^{-(s+2)} r dr)²
//! I_{N,2}    = 4 (1-|z|²)^{-2} ∫∫ T(r_1)^s T(r_2)^s r_1 r_2 (1 - r_1²r_2²)^{-5} R(r_1, r_2) dr_1 dr_2
//! E[S_N]     = E[S_{N,1}] + I_{N,1} - I_{N,2}
//! ```
//!
//! with `T(r) = (1-r)/(1+r)` and
//! `R = |z|⁴t³ + (3|z|⁴ + 8|z|²)t² + (8|z|² + 3)t + 1`, `t = r_1²r_2²`.

use num_complex::Complex64;
// Needed without std; redundant when another crate in the build links std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hyperbolic::{check_in_disk, shell_radius_complement, DiskPoint, StatisticParams};
use crate::kernel::{determinant, gram_unchecked, kernel_diagonal, GramMatrix};
use crate::quadrature::{integrate_graded_2d_u, integrate_graded_u, MomentReport, DEFAULT_TOL};

/// Largest `N` accepted by [`integral_i_n2`].
pub const I_N2_MAX_SHELLS: u32 = 12;

fn with_params(mut report: MomentReport, params: &StatisticParams, scale: f64) -> MomentReport {
    report.value *= scale;
    report.abs_error_estimate *= scale.abs();
    report.params = Some(*params);
    report
}

fn empty_for(params: &StatisticParams) -> MomentReport {
    MomentReport { params: Some(*params), ..MomentReport::empty() }
}

/// `E[S_{N,1}] = E[Σ_{x ∈ U_N(z)} T_z(x)^{2s} K(x, x)]`.
pub fn expectation_s_n1(params: &StatisticParams) -> Result<MomentReport> {
    expectation_s_n1_with_tol(params, DEFAULT_TOL)
}

pub fn expectation_s_n1_with_tol(params: &StatisticParams, tol: f64) -> Result<MomentReport> {
    if params.n() == 0 {
        return Ok(empty_for(params));
    }
    let s = params.s();
    let a2 = params.z().norm_sqr();
    let integrand = |u: f64| {
        let r = 1.0 - u;
        let r2 = r * r;
        u.powf(2.0 * s - 4.0) * (2.0 - u).powf(-(2.0 * s + 4.0)) * r * (a2 * a2 * r2 * r2 + 4.0 * a2 * r2 + 1.0)
    };
    let u_min = shell_radius_complement(f64::from(params.n()));
    let report = integrate_graded_u(integrand, 2.0 * s - 4.0, u_min, tol)?;
    Ok(with_params(report, params, 2.0 / params.centre_denominator()))
}

/// Leading behaviour `(|z|⁴+4|z|²+1) / (2⁶ (3-2s) (1-|z|²)²) · (e^N + 1)^{3-2s}`
/// of [`expectation_s_n1`].
pub fn asymptotic_s_n1(params: &StatisticParams) -> f64 {
    let s = params.s();
    asymptotic_constant_s_n1(params) * (f64::from(params.n()).exp() + 1.0).powf(3.0 - 2.0 * s)
}

/// `lim E[S_{N,1}] / e^{(3-2s)N}`.
pub fn asymptotic_constant_s_n1(params: &StatisticParams) -> f64 {
    params.centre_polynomial() / (64.0 * (3.0 - 2.0 * params.s()) * params.centre_denominator())
}

fn i_n1_radial(u: f64, s: f64) -> f64 {
    u.powf(s - 2.0) * (2.0 - u).powf(-(s + 2.0)) * (1.0 - u)
}

/// `I_{N,1} = ∫∫_{U_N(z)²} T^s T^s K(x_1,x_1) K(x_2,x_2) K(x_1,x_2) dμ dμ`.
pub fn integral_i_n1(params: &StatisticParams) -> Result<MomentReport> {
    integral_i_n1_with_tol(params, DEFAULT_TOL)
}

pub fn integral_i_n1_with_tol(params: &StatisticParams, tol: f64) -> Result<MomentReport> {
    if params.n() == 0 {
        return Ok(empty_for(params));
    }
    let s = params.s();
    let u_min = shell_radius_complement(f64::from(params.n()));
    let inner = integrate_graded_u(|u| i_n1_radial(u, s), s - 2.0, u_min, tol)?;
    let prefactor = 4.0 / params.centre_denominator();
    Ok(MomentReport {
        value: prefactor * inner.value * inner.value,
        abs_error_estimate: prefactor * 2.0 * inner.value.abs() * inner.abs_error_estimate,
        mesh: inner.mesh,
        params: Some(*params),
    })
}

/// `lim_{N→∞} I_{N,1} = 4 (1-|z|²)^{-2} (∫_0^1 (1-r)^{s-2} (1+r)^{-(s+2)} r dr)²`.
///
/// The radial integral is evaluated on `[u_0, 1]` with `u_0 = 1e-12`, and
/// the remaining piece `∫_0^{u_0} u^{s-2} g(u) du` is added from the
/// first-order expansion `g(u) ≈ 2^{-(s+2)} (1 - u (1 - (s+2)/2))` around
/// `u = 0`.
pub fn integral_i_n1_limit(params: &StatisticParams) -> Result<f64> {
    let s = params.s();
    let u0 = 1e-12;
    let body = integrate_graded_u(|u| i_n1_radial(u, s), s - 2.0, u0, DEFAULT_TOL * 1e-2)?;
    let g0 = 2f64.powf(-(s + 2.0));
    let g1 = -g0 * (1.0 - 0.5 * (s + 2.0));
    let tail = g0 * u0.powf(s - 1.0) / (s - 1.0) + g1 * u0.powf(s) / s;
    let j = body.value + tail;
    Ok(4.0 / params.centre_denominator() * j * j)
}

/// `R(r_1, r_2)` of the `I_{N,2}` integrand.
pub fn r_polynomial(z: DiskPoint, r1: f64, r2: f64) -> f64 {
    let a2 = z.norm_sqr();
    let a4 = a2 * a2;
    let t = r1 * r1 * r2 * r2;
    ((a4 * t + (3.0 * a4 + 8.0 * a2)) * t + (8.0 * a2 + 3.0)) * t + 1.0
}

/// `I_{N,2} = ∫∫_{U_N(z)²} T^s T^s K(x_1,x_2)² K(x_2,x_1) dμ dμ`, for
/// `N <= I_N2_MAX_SHELLS`.
pub fn integral_i_n2(params: &StatisticParams) -> Result<MomentReport> {
    integral_i_n2_with_tol(params, DEFAULT_TOL)
}

pub fn integral_i_n2_with_tol(params: &StatisticParams, tol: f64) -> Result<MomentReport> {
    if params.n() == 0 {
        return Ok(empty_for(params));
    }
    if params.n() > I_N2_MAX_SHELLS {
        return Err(Error::InvalidArgument("I_N2 quadrature is limited to N <= 12"));
    }
    let s = params.s();
    let z = params.z();
    let integrand = |u1: f64, u2: f64| {
        let (r1, r2) = (1.0 - u1, 1.0 - u2);
        let t1 = (u1 / (2.0 - u1)).powf(s);
        let t2 = (u2 / (2.0 - u2)).powf(s);
        let p = r1 * r2;
        // 1 - r_1² r_2² = (1 - p)(1 + p), 1 - p = u_1 + u_2 - u_1 u_2
        let gap = (u1 + u2 - u1 * u2) * (1.0 + p);
        t1 * t2 * p * r_polynomial(z, r1, r2) / gap.powi(5)
    };
    let u_min = shell_radius_complement(f64::from(params.n()));
    let report = integrate_graded_2d_u(integrand, u_min, tol)?;
    Ok(with_params(report, params, 4.0 / params.centre_denominator()))
}

/// Explicit growing part of the upper bound on `I_{N,2}`:
/// `5·2^{s-9} (|z|⁴+4|z|²+1) / ((4-s)(3-2s)(1-|z|²)²) · (e^N + 1)^{3-2s}`.
pub fn i_n2_majorant(params: &StatisticParams) -> f64 {
    let s = params.s();
    5.0 * 2f64.powf(s - 9.0) * params.centre_polynomial()
        / ((4.0 - s) * (3.0 - 2.0 * s) * params.centre_denominator())
        * (f64::from(params.n()).exp() + 1.0).powf(3.0 - 2.0 * s)
}

/// The three pieces of `E[S_N]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExpectationParts {
    pub s_n1: MomentReport,
    pub i_n1: MomentReport,
    pub i_n2: MomentReport,
}

impl ExpectationParts {
    pub fn total(&self) -> MomentReport {
        MomentReport {
            value: self.s_n1.value + self.i_n1.value - self.i_n2.value,
            abs_error_estimate: self.s_n1.abs_error_estimate
                + self.i_n1.abs_error_estimate
                + self.i_n2.abs_error_estimate,
            mesh: self.i_n2.mesh,
            params: self.s_n1.params,
        }
    }
}

pub fn expectation_parts(params: &StatisticParams) -> Result<ExpectationParts> {
    Ok(ExpectationParts {
        s_n1: expectation_s_n1(params)?,
        i_n1: integral_i_n1(params)?,
        i_n2: integral_i_n2(params)?,
    })
}

/// `E[S_N] = E[S_{N,1}] + I_{N,1} - I_{N,2}`.
pub fn expected_s_n(params: &StatisticParams) -> Result<MomentReport> {
    Ok(expectation_parts(params)?.total())
}

/// `12 - 3s - 5·2^{s-1}`, positive on `(1, 3/2)`.
pub fn bracket_lower_factor(s: f64) -> f64 {
    12.0 - 3.0 * s - 5.0 * 2f64.powf(s - 1.0)
}

/// Constants `(c_lo, c_hi)` such that `c_lo e^{(3-2s)N} <= E[S_N] <= c_hi e^{(3-2s)N}`
/// for large `N`.
pub fn bracket_constants(params: &StatisticParams) -> (f64, f64) {
    let s = params.s();
    let common = params.centre_polynomial() / ((3.0 - 2.0 * s) * params.centre_denominator());
    let lower = bracket_lower_factor(s) * common / (512.0 * (4.0 - s));
    let upper = 5.0 * common / 128.0;
    (lower, upper)
}

/// `(lower, upper)` bounds on `E[S_N]` valid for large `N`.
pub fn expectation_bracket(params: &StatisticParams) -> (f64, f64) {
    let (lo, hi) = bracket_constants(params);
    let g = ((3.0 - 2.0 * params.s()) * f64::from(params.n())).exp();
    (lo * g, hi * g)
}

/// Signed coefficients of the expanded cancellation integrands.
///
/// The defaults are the exact expansions; perturbing an entry produces a
/// deliberately wrong expansion for exercising the identity checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CancellationExpansion {
    /// `J_2 = c_0 K11 K22 K12² + c_1 K12³ K21 + c_2 K12² K21²`.
    pub j2: [f64; 3],
    /// `det_3 - K11 det'_2 = c_0 K12K21K33 + c_1 K12K23K31 + c_2 K13K21K32 + c_3 K13K22K31`.
    pub j3: [f64; 4],
    /// Coefficients of the 20 monomials of `W_1 + … + W_4`, in [`W_MONOMIALS`] order.
    pub w: [f64; 20],
}

/// Index quadruples `(a,b),(c,d),(e,f),(g,h)` (1-based) of the monomials
/// `K_ab K_cd K_ef K_gh` in `W_1, …, W_4`.
pub const W_MONOMIALS: [[(usize, usize); 4]; 20] = [
    // W_1
    [(1, 1), (2, 3), (3, 2), (4, 4)],
    [(1, 1), (2, 3), (3, 4), (4, 2)],
    [(1, 2), (2, 3), (3, 1), (4, 4)],
    [(1, 2), (2, 3), (3, 4), (4, 1)],
    // W_2
    [(1, 1), (2, 4), (3, 2), (4, 3)],
    [(1, 1), (2, 4), (3, 3), (4, 2)],
    [(1, 2), (2, 4), (3, 1), (4, 3)],
    [(1, 2), (2, 4), (3, 3), (4, 1)],
    // W_3
    [(1, 3), (2, 1), (3, 2), (4, 4)],
    [(1, 3), (2, 1), (3, 4), (4, 2)],
    [(1, 3), (2, 2), (3, 1), (4, 4)],
    [(1, 3), (2, 2), (3, 4), (4, 1)],
    [(1, 3), (2, 4), (3, 1), (4, 2)],
    [(1, 3), (2, 4), (3, 2), (4, 1)],
    // W_4
    [(1, 4), (2, 1), (3, 2), (4, 3)],
    [(1, 4), (2, 1), (3, 3), (4, 2)],
    [(1, 4), (2, 2), (3, 1), (4, 3)],
    [(1, 4), (2, 2), (3, 3), (4, 1)],
    [(1, 4), (2, 3), (3, 1), (4, 2)],
    [(1, 4), (2, 3), (3, 2), (4, 1)],
];

impl Default for CancellationExpansion {
    fn default() -> Self {
        Self {
            j2: [1.0, -1.0, -1.0],
            j3: [-1.0, 1.0, 1.0, -1.0],
            w: [
                -1.0, 1.0, 1.0, -1.0, //
                1.0, -1.0, -1.0, 1.0, //
                1.0, -1.0, -1.0, 1.0, 1.0, -1.0, //
                -1.0, 1.0, 1.0, -1.0, -1.0, 1.0,
            ],
        }
    }
}

fn k(g: &GramMatrix, i: usize, j: usize) -> Complex64 {
    g[(i - 1, j - 1)]
}

impl CancellationExpansion {
    /// Expanded `J_2(x_1, x_2)`.
    pub fn j2(&self, g: &GramMatrix) -> Complex64 {
        let (k11, k22, k12, k21) = (k(g, 1, 1), k(g, 2, 2), k(g, 1, 2), k(g, 2, 1));
        let k12sq = k12 * k12;
        k11 * k22 * k12sq * self.j2[0] + k12sq * k12 * k21 * self.j2[1] + k12sq * k21 * k21 * self.j2[2]
    }

    /// Expanded `det[K]_{1..3} - K11 det[K]_{2..3}`.
    pub fn j3_bracket(&self, g: &GramMatrix) -> Complex64 {
        let kk = |i, j| k(g, i, j);
        kk(1, 2) * kk(2, 1) * kk(3, 3) * self.j3[0]
            + kk(1, 2) * kk(2, 3) * kk(3, 1) * self.j3[1]
            + kk(1, 3) * kk(2, 1) * kk(3, 2) * self.j3[2]
            + kk(1, 3) * kk(2, 2) * kk(3, 1) * self.j3[3]
    }

    /// Expanded `J_3 = K11 K23 (det_3 - K11 det'_2)`.
    pub fn j3(&self, g: &GramMatrix) -> Complex64 {
        k(g, 1, 1) * k(g, 2, 3) * self.j3_bracket(g)
    }

    /// `W_1 + W_2 + W_3 + W_4 = det[K]_{1..4} - det[K]_{1..2} det[K]_{3..4}`.
    pub fn w_sum(&self, g: &GramMatrix) -> Complex64 {
        W_MONOMIALS
            .iter()
            .zip(&self.w)
            .map(|(m, c)| m.iter().fold(Complex64::new(*c, 0.0), |acc, &(i, j)| acc * k(g, i, j)))
            .sum()
    }

    /// Expanded `J_4 = K12 K34 (W_1 + … + W_4)`.
    pub fn j4(&self, g: &GramMatrix) -> Complex64 {
        k(g, 1, 2) * k(g, 3, 4) * self.w_sum(g)
    }
}

fn minor(g: &GramMatrix, idx: &[usize]) -> Complex64 {
    let m: alloc::vec::Vec<Complex64> =
        idx.iter().flat_map(|&i| idx.iter().map(move |&j| k(g, i, j))).collect();
    determinant(&m, idx.len())
}

/// `J_2` from its definition
/// `[K11K22 + K12² + K12K21] det[K]_{1..2} - K11² K22²`.
pub fn j2_from_determinants(g: &GramMatrix) -> Complex64 {
    let (k11, k22, k12, k21) = (k(g, 1, 1), k(g, 2, 2), k(g, 1, 2), k(g, 2, 1));
    (k11 * k22 + k12 * k12 + k12 * k21) * minor(g, &[1, 2]) - k11 * k11 * k22 * k22
}

/// `J_3` from its definition `K11 K23 (det[K]_{1..3} - K11 det[K]_{2..3})`.
pub fn j3_from_determinants(g: &GramMatrix) -> Complex64 {
    k(g, 1, 1) * k(g, 2, 3) * (minor(g, &[1, 2, 3]) - k(g, 1, 1) * minor(g, &[2, 3]))
}

/// `J_4` from its definition `K12 K34 (det[K]_{1..4} - det[K]_{1..2} det[K]_{3..4})`.
pub fn j4_from_determinants(g: &GramMatrix) -> Complex64 {
    k(g, 1, 2) * k(g, 3, 4) * (minor(g, &[1, 2, 3, 4]) - minor(g, &[1, 2]) * minor(g, &[3, 4]))
}

fn checked_gram(points: &[DiskPoint]) -> Result<GramMatrix> {
    for &p in points {
        check_in_disk(p)?;
    }
    Ok(gram_unchecked(points))
}

/// Real part of `J_2(x_1, x_2)`.
///
/// `J_2(x_2, x_1)` is the conjugate of `J_2(x_1, x_2)`, so on the symmetric
/// domain of the variance integral only the real part contributes.
pub fn jhat2_integrand(x1: DiskPoint, x2: DiskPoint) -> Result<f64> {
    Ok(CancellationExpansion::default().j2(&checked_gram(&[x1, x2])?).re)
}

/// Real part of `J_3(x_1, x_2, x_3)`; swapping `x_2, x_3` conjugates it.
pub fn jhat3_integrand(x1: DiskPoint, x2: DiskPoint, x3: DiskPoint) -> Result<f64> {
    Ok(CancellationExpansion::default().j3(&checked_gram(&[x1, x2, x3])?).re)
}

/// Real part of `J_4(x_1, …, x_4)`; swapping `x_1 ↔ x_2` and `x_3 ↔ x_4`
/// conjugates it.
pub fn jhat4_integrand(x1: DiskPoint, x2: DiskPoint, x3: DiskPoint, x4: DiskPoint) -> Result<f64> {
    Ok(CancellationExpansion::default().j4(&checked_gram(&[x1, x2, x3, x4])?).re)
}

/// `3 K11^{3/2} K22^{3/2} |K12|`, the pointwise bound on `|J_2|`.
pub fn j2_majorant(x1: DiskPoint, x2: DiskPoint) -> Result<f64> {
    let g = checked_gram(&[x1, x2])?;
    Ok(3.0 * (kernel_diagonal(x1) * kernel_diagonal(x2)).powf(1.5) * g[(0, 1)].norm())
}

/// `(1 - r_1² r_2²) - (1 - r_1)^{1/2} (1 - r_2)^{1/2}`, nonnegative on `[0, 1)²`.
pub fn r1r2_inequality_margin(r1: f64, r2: f64) -> f64 {
    let p = r1 * r2;
    (1.0 - p) * (1.0 + p) - ((1.0 - r1) * (1.0 - r2)).sqrt()
}

/// Least-squares line `y = intercept + slope · x`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares over paired samples.
pub fn least_squares(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument("x and y lengths differ"));
    }
    if x.len() < 2 {
        return Err(Error::InsufficientData { needed: 2, got: x.len() });
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("x values are all equal"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Ok(LinearFit { slope, intercept: my - slope * mx })
}

/// Slope of `log Var(S_N)` against `N` over at least three shell counts.
pub fn variance_rate(shells: &[f64], variances: &[f64]) -> Result<LinearFit> {
    if shells.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: shells.len() });
    }
    if variances.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidArgument("variances must be positive"));
    }
    let logs: alloc::vec::Vec<f64> = variances.iter().map(|v| v.ln()).collect();
    least_squares(shells, &logs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(s: f64, z: Complex64, n: u32) -> StatisticParams {
        StatisticParams::new(s, z, n).unwrap()
    }

    fn zero() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    #[test]
    fn empty_statistic_has_zero_moments() {
        let q = p(1.25, zero(), 0);
        assert_eq!(expectation_s_n1(&q).unwrap().value, 0.0);
        assert_eq!(integral_i_n1(&q).unwrap().value, 0.0);
        assert_eq!(integral_i_n2(&q).unwrap().value, 0.0);
        assert_eq!(expected_s_n(&q).unwrap().value, 0.0);
    }

    #[test]
    fn asymptotic_constant_examples() {
        let q = p(1.25, zero(), 10);
        assert_relative_eq!(asymptotic_constant_s_n1(&q), 1.0 / 32.0, max_relative = 1e-15);
        assert_relative_eq!(asymptotic_s_n1(&q), (10f64.exp() + 1.0).sqrt() / 32.0, max_relative = 1e-14);
        assert_relative_eq!(asymptotic_s_n1(&q), 4.638_0, max_relative = 1e-4);
        let mut last = 0.0;
        for s in [1.05, 1.2, 1.35, 1.45, 1.49, 1.499] {
            let c = asymptotic_constant_s_n1(&p(s, zero(), 1));
            assert!(c > last);
            last = c;
        }
    }

    #[test]
    fn r_polynomial_at_origin() {
        for (r1, r2) in [(0.3, 0.9), (0.5, 0.5), (0.99, 0.1)] {
            let t: f64 = r1 * r1 * r2 * r2;
            assert_relative_eq!(r_polynomial(zero(), r1, r2), 3.0 * t + 1.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn bracket_constants_example() {
        let (lo, hi) = bracket_constants(&p(1.25, zero(), 1));
        let expected_lo = (12.0 - 3.75 - 5.0 * 2f64.powf(0.25)) / (512.0 * 2.75 * 0.5);
        assert_relative_eq!(lo, expected_lo, max_relative = 1e-14);
        assert_relative_eq!(lo, 3.273e-3, max_relative = 1e-3);
        assert_relative_eq!(hi, 0.078_125, max_relative = 1e-15);
    }

    #[test]
    fn bracket_lower_factor_positive_and_ordered() {
        for i in 1..200 {
            let s = 1.0 + 0.5 * i as f64 / 200.0;
            assert!(bracket_lower_factor(s) > 0.0, "s = {s}");
            for z in [zero(), Complex64::new(0.5, 0.0), Complex64::new(-0.3, 0.8)] {
                let (lo, hi) = expectation_bracket(&p(s, z, 7));
                assert!(0.0 < lo && lo < hi);
            }
        }
    }

    #[test]
    fn j2_at_origin() {
        let o = zero();
        assert_eq!(jhat2_integrand(o, o).unwrap(), -1.0);
        let g = gram_unchecked(&[o, o]);
        assert_eq!(j2_from_determinants(&g), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn j3_repeated_point() {
        let x = Complex64::new(0.2, -0.1);
        let y = Complex64::new(-0.5, 0.4);
        let g = gram_unchecked(&[y, x, x]);
        // det_3 = 0 when x_2 = x_3, leaving J_3 = -K11² K23 det'_2 = 0 as det'_2 = 0 too
        let e = CancellationExpansion::default();
        assert!(e.j3(&g).norm() < 1e-12);
        assert!((e.j3(&g) - j3_from_determinants(&g)).norm() < 1e-12);
    }

    #[test]
    fn j_expansions_conjugate_under_swaps() {
        let pts = [
            Complex64::new(0.1, 0.3),
            Complex64::new(-0.4, 0.2),
            Complex64::new(0.6, -0.1),
            Complex64::new(0.0, -0.7),
        ];
        let e = CancellationExpansion::default();
        let g = gram_unchecked(&pts[..2]);
        let gs = gram_unchecked(&[pts[1], pts[0]]);
        assert!((e.j2(&g) - e.j2(&gs).conj()).norm() < 1e-12 * e.j2(&g).norm());
        let g = gram_unchecked(&pts[..3]);
        let gs = gram_unchecked(&[pts[0], pts[2], pts[1]]);
        assert!((e.j3(&g) - e.j3(&gs).conj()).norm() < 1e-12 * e.j3(&g).norm());
        let g = gram_unchecked(&pts);
        let gs = gram_unchecked(&[pts[1], pts[0], pts[3], pts[2]]);
        assert!((e.j4(&g) - e.j4(&gs).conj()).norm() < 1e-12 * e.j4(&g).norm());
    }

    #[test]
    fn inequality_margin() {
        assert_eq!(r1r2_inequality_margin(0.0, 0.0), 0.0);
        assert!(r1r2_inequality_margin(0.5, 0.7) > 0.0);
    }

    #[test]
    fn variance_rate_exact_fits() {
        let ns = [2.0, 3.0, 4.0, 5.0];
        let v: alloc::vec::Vec<f64> = ns.iter().map(|n| (0.5 * n).exp()).collect();
        assert_relative_eq!(variance_rate(&ns, &v).unwrap().slope, 0.5, max_relative = 1e-12);
        let v7: alloc::vec::Vec<f64> = v.iter().map(|x| 7.0 * x).collect();
        let fit = variance_rate(&ns, &v7).unwrap();
        assert_relative_eq!(fit.slope, 0.5, max_relative = 1e-12);
        assert_relative_eq!(fit.intercept, 7f64.ln(), max_relative = 1e-12);
        assert_eq!(
            variance_rate(&ns[..2], &v[..2]),
            Err(Error::InsufficientData { needed: 3, got: 2 })
        );
        assert!(variance_rate(&ns[..3], &[1.0, 0.0, 2.0]).is_err());
    }

    #[test]
    fn i_n2_ceiling() {
        assert!(integral_i_n2(&p(1.25, zero(), 13)).is_err());
    }
}
