//! The vector-valued statistic `Θ_N^{(s,z)}(X) = Σ_{x ∈ X ∩ U_N(z)} T_z(x)^s K(·, x)`,
//! its Bergman norm `S_N = ‖Θ_N‖²` and the shell-ordered Poincaré sums.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;
// Needed without std; redundant when another crate in the build links std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::gaf::Configuration;
use crate::hyperbolic::{
    check_in_disk, covering_radius, distance_unchecked, shell_of_distance, DiskPoint, StatisticParams,
};
use crate::kernel::{kernel_diagonal, kernel_unchecked};
use crate::sum::{ComplexSum, NeumaierSum};

/// Slack allowed when comparing the covering radius of `U_N(z)` with the
/// validity radius of a configuration.
const COVERAGE_SLACK: f64 = 1e-12;

/// `Σ c_i K(·, x_i)` with `c_i = T_z(x_i)^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedKernelSum {
    nodes: Vec<DiskPoint>,
    coefficients: Vec<f64>,
    params: StatisticParams,
}

impl WeightedKernelSum {
    pub fn nodes(&self) -> &[DiskPoint] {
        &self.nodes
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn params(&self) -> &StatisticParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Θ(w) = Σ c_i K(w, x_i)`.
    pub fn eval(&self, w: DiskPoint) -> Result<Complex64> {
        check_in_disk(w)?;
        let mut acc = ComplexSum::new();
        for (x, c) in self.nodes.iter().zip(&self.coefficients) {
            acc.add(kernel_unchecked(w, *x) * *c);
        }
        Ok(acc.value())
    }
}

/// Fails with [`Error::Coverage`] unless `U_N(z)` lies inside the disk on
/// which `config` is valid.
pub fn check_coverage(config: &Configuration, params: &StatisticParams) -> Result<()> {
    if params.n() == 0 {
        return Ok(());
    }
    let required = covering_radius(params.z(), f64::from(params.n()))?;
    if required > config.validity_radius * (1.0 + COVERAGE_SLACK) {
        return Err(Error::Coverage { validity_radius: config.validity_radius, required });
    }
    Ok(())
}

/// Builds `Θ_N^{(s,z)}` from the points of `config` lying in `U_N(z)`.
pub fn build_theta(config: &Configuration, params: &StatisticParams) -> Result<WeightedKernelSum> {
    check_coverage(config, params)?;
    let n = f64::from(params.n());
    let (nodes, coefficients) = config
        .points
        .iter()
        .filter_map(|&x| {
            let d = distance_unchecked(params.z(), x);
            (d < n).then(|| (x, (-params.s() * d).exp()))
        })
        .unzip();
    Ok(WeightedKernelSum { nodes, coefficients, params: *params })
}

/// `S_N = ‖Θ_N‖² = Σ_ij c_i c_j K(x_i, x_j)`.
///
/// Summed symmetrically as `Σ c_i² K_ii + 2 Σ_{i<j} c_i c_j Re K_ij`, which is
/// real by construction.
pub fn norm_squared(theta: &WeightedKernelSum) -> f64 {
    let (x, c) = (&theta.nodes, &theta.coefficients);
    let mut acc = NeumaierSum::new();
    for i in 0..x.len() {
        acc.add(c[i] * c[i] * kernel_diagonal(x[i]));
        for j in (i + 1)..x.len() {
            acc.add(2.0 * c[i] * c[j] * kernel_unchecked(x[i], x[j]).re);
        }
    }
    acc.value()
}

/// `[S_1, …, S_N]` for one configuration, built shell by shell: going from
/// `N` to `N + 1` adds the new shell's diagonal terms and its cross terms
/// with everything inside.
pub fn norm_squared_by_shell(config: &Configuration, params: &StatisticParams) -> Result<Vec<f64>> {
    check_coverage(config, params)?;
    let n = params.n() as usize;
    let mut shells: Vec<Vec<(DiskPoint, f64)>> = alloc::vec![Vec::new(); n];
    for &x in &config.points {
        let d = distance_unchecked(params.z(), x);
        let k = shell_of_distance(d) as usize;
        if k < n {
            shells[k].push((x, (-params.s() * d).exp()));
        }
    }
    let mut inner: Vec<(DiskPoint, f64)> = Vec::new();
    let mut acc = NeumaierSum::new();
    let mut out = Vec::with_capacity(n);
    for shell in shells {
        for (i, &(x, c)) in shell.iter().enumerate() {
            acc.add(c * c * kernel_diagonal(x));
            for &(y, cy) in inner.iter().chain(&shell[..i]) {
                acc.add(2.0 * c * cy * kernel_unchecked(x, y).re);
            }
        }
        inner.extend(shell);
        out.push(acc.value());
    }
    Ok(out)
}

/// A function `f = Σ a_n e_n` in the orthonormal Bergman basis
/// `e_n(w) = √(n+1) w^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionCoefficients {
    coeffs: Vec<Complex64>,
}

impl FunctionCoefficients {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    /// The basis vector `e_n`.
    pub fn basis(n: usize) -> Self {
        let mut coeffs = alloc::vec![Complex64::zero(); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// `K(·, y)` truncated after degree `degree`: `a_n = √(n+1) ȳ^n`.
    pub fn truncated_kernel(y: DiskPoint, degree: usize) -> Self {
        let yc = y.conj();
        let mut pow = Complex64::new(1.0, 0.0);
        let coeffs = (0..=degree)
            .map(|n| {
                let a = pow * ((n + 1) as f64).sqrt();
                pow *= yc;
                a
            })
            .collect();
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `‖f‖² = Σ |a_n|²`.
    pub fn norm_squared(&self) -> f64 {
        crate::sum::sum(self.coeffs.iter().map(|a| a.norm_sqr()))
    }
}

/// `f(x) = Σ a_n √(n+1) x^n` by Horner's rule.
pub fn evaluate_function(f: &FunctionCoefficients, x: DiskPoint) -> Result<Complex64> {
    check_in_disk(x)?;
    Ok(eval_unchecked(f, x))
}

fn eval_unchecked(f: &FunctionCoefficients, x: DiskPoint) -> Complex64 {
    f.coeffs
        .iter()
        .enumerate()
        .rev()
        .fold(Complex64::zero(), |acc, (n, a)| acc * x + a * ((n + 1) as f64).sqrt())
}

/// `⟨f, Θ⟩`-style pairing `Σ_i c_i f(x_i)`: the partial Poincaré sum of `f`
/// over the nodes of `theta`.
pub fn pair(theta: &WeightedKernelSum, f: &FunctionCoefficients) -> Complex64 {
    let mut acc = ComplexSum::new();
    for (x, c) in theta.nodes.iter().zip(&theta.coefficients) {
        acc.add(eval_unchecked(f, *x) * *c);
    }
    acc.value()
}

/// Shell sums `Σ_{k <= d_h(z,x) < k+1} e^{-s d_h(z,x)} f(x)` for `k < N`.
pub fn shell_sums(
    config: &Configuration,
    params: &StatisticParams,
    f: &FunctionCoefficients,
) -> Result<Vec<Complex64>> {
    check_coverage(config, params)?;
    let n = params.n() as usize;
    let mut acc = alloc::vec![ComplexSum::new(); n];
    for &x in &config.points {
        let d = distance_unchecked(params.z(), x);
        let k = shell_of_distance(d) as usize;
        if k < n {
            acc[k].add(eval_unchecked(f, x) * (-params.s() * d).exp());
        }
    }
    Ok(acc.iter().map(ComplexSum::value).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{shell_radius, weight_t};
    use crate::kernel::kernel;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(n: u32) -> StatisticParams {
        StatisticParams::new(1.25, Complex64::zero(), n).unwrap()
    }

    #[test]
    fn empty_configuration() {
        let cfg = Configuration::from_points(Vec::new(), 3).unwrap();
        let th = build_theta(&cfg, &params(3)).unwrap();
        assert!(th.is_empty());
        assert_eq!(norm_squared(&th), 0.0);
        assert_eq!(pair(&th, &FunctionCoefficients::basis(0)), Complex64::zero());
        assert_eq!(shell_sums(&cfg, &params(3), &FunctionCoefficients::basis(2)).unwrap(), alloc::vec![Complex64::zero(); 3]);
    }

    #[test]
    fn shell_filter_drops_far_points() {
        let x = c(shell_radius(2.5), 0.0);
        let cfg = Configuration::from_points(alloc::vec![x], 3).unwrap();
        assert!(build_theta(&cfg, &params(2)).unwrap().is_empty());
        assert_eq!(build_theta(&cfg, &params(3)).unwrap().len(), 1);
    }

    #[test]
    fn single_node_coefficient_and_norm() {
        let cfg = Configuration::from_points(alloc::vec![c(0.5, 0.0)], 2).unwrap();
        let th = build_theta(&cfg, &params(2)).unwrap();
        assert_eq!(th.len(), 1);
        assert_relative_eq!(th.coefficients()[0], (1.0f64 / 3.0).powf(1.25), max_relative = 1e-14);
        assert_relative_eq!(th.coefficients()[0], 0.253_279, max_relative = 1e-5);
        let s = norm_squared(&th);
        assert_relative_eq!(s, (1.0f64 / 3.0).powf(2.5) * 16.0 / 9.0, max_relative = 1e-14);
        assert_relative_eq!(s, 0.114_044, max_relative = 1e-5);
    }

    #[test]
    fn two_node_norm_matches_double_sum() {
        let z = c(0.1, -0.2);
        let p = StatisticParams::new(1.3, z, 3).unwrap();
        let pts = alloc::vec![c(0.4, 0.1), c(-0.3, 0.6)];
        let cfg = Configuration::from_points(pts.clone(), 5).unwrap();
        let th = build_theta(&cfg, &p).unwrap();
        let mut brute = Complex64::zero();
        for a in &pts {
            for b in &pts {
                let w = weight_t(z, *a).unwrap().powf(1.3) * weight_t(z, *b).unwrap().powf(1.3);
                brute += kernel(*a, *b).unwrap() * w;
            }
        }
        assert_relative_eq!(norm_squared(&th), brute.re, max_relative = 1e-13);
    }

    #[test]
    fn coverage_is_enforced() {
        let cfg = Configuration::from_points(Vec::new(), 3).unwrap();
        let off = StatisticParams::new(1.25, c(0.3, 0.2), 3).unwrap();
        assert!(matches!(build_theta(&cfg, &off), Err(Error::Coverage { .. })));
        assert!(build_theta(&cfg, &params(4)).is_err());
        assert!(build_theta(&cfg, &params(3)).is_ok());
    }

    #[test]
    fn basis_evaluation() {
        assert_eq!(evaluate_function(&FunctionCoefficients::basis(0), c(0.3, 0.4)).unwrap(), c(1.0, 0.0));
        let v = evaluate_function(&FunctionCoefficients::basis(1), c(0.5, 0.0)).unwrap();
        assert_relative_eq!(v.re, 0.5 * 2f64.sqrt(), max_relative = 1e-15);
        assert!(evaluate_function(&FunctionCoefficients::basis(1), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn truncated_kernel_converges_geometrically() {
        let y = c(0.5, 0.0);
        let x = c(0.3, 0.4);
        let exact = kernel(x, y).unwrap();
        // tail Σ_{n>D} (n+1) q^n with q = |x ȳ| = 0.25
        for degree in [5usize, 10, 20, 40] {
            let f = FunctionCoefficients::truncated_kernel(y, degree);
            let err = (evaluate_function(&f, x).unwrap() - exact).norm();
            let q: f64 = 0.25;
            let bound = q.powi(degree as i32 + 1) * ((degree + 2) as f64 - (degree + 1) as f64 * q) / ((1.0 - q) * (1.0 - q));
            assert!(err <= bound * (1.0 + 1e-9) + 1e-15, "degree {degree}: {err} > {bound}");
        }
        // ‖K(·, y)‖² = K(y, y)
        let f = FunctionCoefficients::truncated_kernel(y, 200);
        assert_relative_eq!(f.norm_squared(), 16.0 / 9.0, max_relative = 1e-14);
    }

    #[test]
    fn pair_with_constant_is_coefficient_sum() {
        let cfg = Configuration::from_points(alloc::vec![c(0.5, 0.0), c(0.0, -0.2), c(-0.7, 0.1)], 4).unwrap();
        let th = build_theta(&cfg, &params(4)).unwrap();
        let total: f64 = th.coefficients().iter().sum();
        assert_relative_eq!(pair(&th, &FunctionCoefficients::basis(0)).re, total, max_relative = 1e-15);
    }

    #[test]
    fn shell_sums_single_point() {
        let cfg = Configuration::from_points(alloc::vec![c(0.5, 0.0)], 3).unwrap();
        let sums = shell_sums(&cfg, &params(3), &FunctionCoefficients::basis(0)).unwrap();
        assert_eq!(sums[0], Complex64::zero());
        assert!(sums[1].re > 0.0);
        assert_eq!(sums[2], Complex64::zero());
    }

    #[test]
    fn norm_by_shell_matches_direct() {
        let pts = alloc::vec![c(0.1, 0.0), c(0.5, 0.3), c(-0.8, 0.1), c(0.0, -0.93), c(0.6, -0.6)];
        let cfg = Configuration::from_points(pts, 4).unwrap();
        let p = params(4);
        let by_shell = norm_squared_by_shell(&cfg, &p).unwrap();
        for n in 1..=4u32 {
            let direct = norm_squared(&build_theta(&cfg, &p.with_n(n)).unwrap());
            assert_relative_eq!(by_shell[n as usize - 1], direct, max_relative = 1e-14);
        }
    }

    #[test]
    fn theta_at_centre_of_single_node() {
        // {0} sits in shell 0 for z = 0, so Θ_N = K(·, 0) = 1 for every N >= 1
        let cfg = Configuration::from_points(alloc::vec![Complex64::zero()], 6).unwrap();
        for n in 1..=6 {
            let th = build_theta(&cfg, &params(n)).unwrap();
            assert_eq!(norm_squared(&th), 1.0);
            assert_eq!(th.eval(c(0.3, 0.1)).unwrap(), c(1.0, 0.0));
        }
    }
}
