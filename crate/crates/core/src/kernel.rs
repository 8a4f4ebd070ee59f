//! Bergman kernel `K(x, y) = (1 - x ȳ)^{-2}`, Gram matrices and the
//! determinantal correlation functions `ρ_k = det[K(x_i, x_j)]`.

use alloc::vec::Vec;
use core::ops::Index;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hyperbolic::{check_in_disk, one_minus_abs_sq, DiskPoint};

/// Largest `k` accepted by [`correlation`].
pub const MAX_CORRELATION_ORDER: usize = 8;

/// Relative size of the imaginary part tolerated in real-valued determinants.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-10;

/// Bergman kernel of the unit disk.
pub fn kernel(x: DiskPoint, y: DiskPoint) -> Result<Complex64> {
    check_in_disk(x)?;
    check_in_disk(y)?;
    Ok(kernel_unchecked(x, y))
}

#[inline]
pub(crate) fn kernel_unchecked(x: DiskPoint, y: DiskPoint) -> Complex64 {
    let d = Complex64::new(1.0, 0.0) - x * y.conj();
    (d * d).inv()
}

/// `K(x, x) = (1 - |x|²)^{-2}`, computed without cancellation.
#[inline]
pub fn kernel_diagonal(x: DiskPoint) -> f64 {
    let q = one_minus_abs_sq(x);
    1.0 / (q * q)
}

/// Hermitian matrix `[K(x_i, x_j)]`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// `Π_i K(x_i, x_i)`, the Hadamard bound on the determinant.
    pub fn diagonal_product(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)].re).product()
    }

    /// Complex determinant by LU factorisation with partial pivoting.
    pub fn determinant(&self) -> Complex64 {
        determinant(&self.entries, self.dim)
    }

    /// Real quadratic form `Σ_ij c_i c_j G_ij` for a real vector `c`.
    pub fn quadratic_form(&self, c: &[f64]) -> Complex64 {
        assert_eq!(c.len(), self.dim, "coefficient vector has the wrong length");
        let mut acc = crate::sum::ComplexSum::new();
        for i in 0..self.dim {
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            for (j, g) in row.iter().enumerate() {
                acc.add(*g * (c[i] * c[j]));
            }
        }
        acc.value()
    }
}

impl Index<(usize, usize)> for GramMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

/// Gram matrix of the Bergman kernel at `points`.
///
/// The upper triangle is evaluated and mirrored with conjugates, so the
/// result is exactly Hermitian with a real positive diagonal.
pub fn gram(points: &[DiskPoint]) -> Result<GramMatrix> {
    for &p in points {
        check_in_disk(p)?;
    }
    Ok(gram_unchecked(points))
}

pub(crate) fn gram_unchecked(points: &[DiskPoint]) -> GramMatrix {
    let k = points.len();
    let mut entries = alloc::vec![Complex64::zero(); k * k];
    for i in 0..k {
        entries[i * k + i] = Complex64::new(kernel_diagonal(points[i]), 0.0);
        for j in (i + 1)..k {
            let v = kernel_unchecked(points[i], points[j]);
            entries[i * k + j] = v;
            entries[j * k + i] = v.conj();
        }
    }
    GramMatrix { dim: k, entries }
}

/// Determinant of a row-major `k × k` complex matrix.
///
/// Gaussian elimination with partial pivoting; the empty matrix has
/// determinant 1.
pub fn determinant(matrix: &[Complex64], k: usize) -> Complex64 {
    assert_eq!(matrix.len(), k * k, "matrix is not {k}x{k}");
    let mut a: Vec<Complex64> = matrix.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&p, &q| a[p * k + col].norm_sqr().total_cmp(&a[q * k + col].norm_sqr()))
            .unwrap_or(col);
        if a[pivot * k + col].is_zero() {
            return Complex64::zero();
        }
        if pivot != col {
            for j in 0..k {
                a.swap(pivot * k + j, col * k + j);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        let inv = p.inv();
        for row in (col + 1)..k {
            let f = a[row * k + col] * inv;
            if f.is_zero() {
                continue;
            }
            for j in (col + 1)..k {
                let u = a[col * k + j];
                a[row * k + j] -= f * u;
            }
        }
    }
    det
}

/// Correlation function `ρ_k(x_1, …, x_k) = det[K(x_i, x_j)]`.
///
/// Coincident points (exact equality) give exactly zero. The determinant of
/// a Hermitian matrix is real; an imaginary part larger than
/// [`IMAGINARY_RESIDUE_TOL`] times the Hadamard bound `Π K(x_i, x_i)` is
/// reported as [`Error::NotReal`].
pub fn correlation(points: &[DiskPoint]) -> Result<f64> {
    let k = points.len();
    if k > MAX_CORRELATION_ORDER {
        return Err(Error::TooManyPoints { got: k, max: MAX_CORRELATION_ORDER });
    }
    if k == 0 {
        return Err(Error::InvalidArgument("correlation needs at least one point"));
    }
    let g = gram(points)?;
    for i in 0..k {
        for j in (i + 1)..k {
            if points[i] == points[j] {
                return Ok(0.0);
            }
        }
    }
    real_determinant(&g)
}

/// Determinant of a Gram matrix with the Hermitian-residue health check.
pub fn real_determinant(g: &GramMatrix) -> Result<f64> {
    let det = g.determinant();
    let scale = g.diagonal_product().max(det.norm());
    if det.im.abs() > IMAGINARY_RESIDUE_TOL * scale {
        return Err(Error::NotReal { residue: det.im.abs() / scale });
    }
    Ok(det.re)
}
