//! Gauss–Legendre quadrature on geometrically graded meshes.
//!
//! The radial integrals of the moment formulas have the shape
//! `∫_0^{r} (1 - ρ)^α g(ρ) dρ` with `g` smooth and `r` close to 1. With the
//! substitution `u = 1 - ρ` the range becomes `[1 - r, 1]`, and cells that
//! shrink geometrically towards `u = 1 - r` resolve the `u^α` behaviour at
//! every scale with a fixed number of nodes per cell.

use alloc::vec::Vec;
use core::f64::consts::PI;

// Needed without std; redundant when another crate in the build links std.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hyperbolic::StatisticParams;
use crate::sum::NeumaierSum;

/// Nodes per cell used by the moment integrals.
pub const DEFAULT_NODES_PER_CELL: usize = 16;
/// Default relative tolerance between successive refinements.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Maximum number of level doublings before giving up.
pub const MAX_DOUBLINGS: u32 = 12;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut x = alloc::vec![0.0; n];
    let mut w = alloc::vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() <= 1e-16 {
                let (_, d) = legendre(n, t);
                dp = d;
                break;
            }
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[m - 1] = 0.0;
    }
    (x, w)
}

/// `(P_n(t), P_n'(t))` by the three-term recurrence.
fn legendre(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    (p1, n as f64 * (t * p1 - p0) / (t * t - 1.0))
}

/// Geometric subdivision of `[u_min, u_max]` into `levels` cells with a
/// common ratio, refined towards `u_min`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GradedMesh {
    pub u_min: f64,
    pub u_max: f64,
    pub levels: u32,
    pub nodes_per_cell: usize,
}

impl GradedMesh {
    /// The coarsest mesh whose cells shrink by a factor no smaller than 1/2.
    pub fn halving(u_min: f64, u_max: f64, nodes_per_cell: usize) -> Self {
        let levels = (u_max / u_min).log2().ceil().max(1.0) as u32;
        Self { u_min, u_max, levels, nodes_per_cell }
    }

    /// Ratio between the lower and upper end of each cell, in `(0, 1)`.
    pub fn cell_ratio(&self) -> f64 {
        (self.u_min / self.u_max).powf(1.0 / f64::from(self.levels))
    }

    pub fn total_nodes(&self) -> usize {
        self.levels as usize * self.nodes_per_cell
    }

    /// Same range with twice as many cells.
    pub fn doubled(&self) -> Self {
        Self { levels: self.levels * 2, ..*self }
    }

    /// Quadrature nodes and weights in `u`.
    pub fn rule(&self) -> Vec<(f64, f64)> {
        let (x, w) = gauss_legendre(self.nodes_per_cell);
        let q = self.cell_ratio();
        let mut out = Vec::with_capacity(self.total_nodes());
        let mut hi = self.u_max;
        for k in 0..self.levels {
            let lo = if k + 1 == self.levels { self.u_min } else { hi * q };
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (xi, wi) in x.iter().zip(&w) {
                out.push((mid + half * xi, half * wi));
            }
            hi = lo;
        }
        out
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.rule().into_iter().map(|(u, w)| w * f(u)).collect::<NeumaierSum>().value()
    }

    /// Tensor-product rule on `[u_min, u_max]²`.
    pub fn integrate_2d(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let rule = self.rule();
        let mut acc = NeumaierSum::new();
        for &(u1, w1) in &rule {
            let mut row = NeumaierSum::new();
            for &(u2, w2) in &rule {
                row.add(w2 * f(u1, u2));
            }
            acc.add(w1 * row.value());
        }
        acc.value()
    }
}

/// A quadrature value with its refinement error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MomentReport {
    pub value: f64,
    /// `|value_fine - value_coarse|` over the last refinement.
    pub abs_error_estimate: f64,
    /// The finer of the two meshes compared.
    pub mesh: GradedMesh,
    /// Parameters of the statistic the integral belongs to, if any.
    pub params: Option<StatisticParams>,
}

impl MomentReport {
    /// Exact zero from an empty integration range.
    pub fn empty() -> Self {
        Self {
            value: 0.0,
            abs_error_estimate: 0.0,
            mesh: GradedMesh { u_min: 1.0, u_max: 1.0, levels: 0, nodes_per_cell: 0 },
            params: None,
        }
    }
}

/// Refines `mesh` by doubling its levels until two successive values agree
/// to `tol` relative.
pub fn refine_until(mesh: GradedMesh, tol: f64, eval: impl Fn(&GradedMesh) -> f64) -> Result<MomentReport> {
    let mut mesh = mesh;
    let mut coarse = eval(&mesh);
    let mut change = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        let fine_mesh = mesh.doubled();
        let fine = eval(&fine_mesh);
        change = (fine - coarse).abs();
        if change <= tol * fine.abs() || (fine == 0.0 && change == 0.0) {
            return Ok(MomentReport { value: fine, abs_error_estimate: change, mesh: fine_mesh, params: None });
        }
        mesh = fine_mesh;
        coarse = fine;
    }
    Err(Error::QuadratureNotConverged { tol, change })
}

/// `∫_0^{r_upper} f(r) dr` for an integrand behaving like `(1 - r)^alpha`
/// times a smooth factor, using the graded mesh in `u = 1 - r`.
pub fn integrate_graded(f: impl Fn(f64) -> f64, alpha: f64, r_upper: f64, tol: f64) -> Result<MomentReport> {
    if !(r_upper < 1.0) {
        return Err(Error::InvalidArgument("upper limit must be below 1"));
    }
    integrate_graded_u(|u| f(1.0 - u), alpha, 1.0 - r_upper, tol)
}

/// As [`integrate_graded`], with the integrand and the lower limit given
/// directly in `u = 1 - r` so that `u` keeps full relative precision.
pub fn integrate_graded_u(g: impl Fn(f64) -> f64, alpha: f64, u_min: f64, tol: f64) -> Result<MomentReport> {
    if !(alpha > -2.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument("endpoint exponent must lie in (-2, 1)"));
    }
    if !(u_min > 0.0) {
        return Err(Error::InvalidArgument("integration range must stay inside the disk"));
    }
    if u_min >= 1.0 {
        return Ok(MomentReport::empty());
    }
    let mesh = GradedMesh::halving(u_min, 1.0, DEFAULT_NODES_PER_CELL);
    refine_until(mesh, tol, |m| m.integrate(&g))
}

/// `∫_0^{r}∫_0^{r} f dr_1 dr_2` on the tensor graded mesh, integrand and
/// lower limit given in `u_i = 1 - r_i`.
pub fn integrate_graded_2d_u(g: impl Fn(f64, f64) -> f64, u_min: f64, tol: f64) -> Result<MomentReport> {
    if !(u_min > 0.0) {
        return Err(Error::InvalidArgument("integration range must stay inside the disk"));
    }
    if u_min >= 1.0 {
        return Ok(MomentReport::empty());
    }
    let mesh = GradedMesh::halving(u_min, 1.0, DEFAULT_NODES_PER_CELL);
    refine_until(mesh, tol, |m| m.integrate_2d(&g))
}
