use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Which party of a bipartite system an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Local dimensions of a bipartite system. Composite index of `|i>_A |j>_B`
/// is `i * n_b + j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    pub n_a: usize,
    pub n_b: usize,
}

impl BipartiteDims {
    pub fn new(n_a: usize, n_b: usize) -> Result<Self> {
        if n_a == 0 || n_b == 0 {
            return Err(Error::InvalidArgument(format!(
                "subsystem dimensions must be positive, got {n_a}x{n_b}"
            )));
        }
        Ok(Self { n_a, n_b })
    }

    pub const fn qubits() -> Self {
        Self { n_a: 2, n_b: 2 }
    }

    pub const fn qutrits() -> Self {
        Self { n_a: 3, n_b: 3 }
    }

    #[inline]
    pub fn total(&self) -> usize {
        self.n_a * self.n_b
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n_b + j
    }

    pub fn check(&self, dim: usize) -> Result<()> {
        if dim != self.total() {
            return Err(Error::DimensionMismatch {
                expected: self.total(),
                found: dim,
            });
        }
        Ok(())
    }
}

impl fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n_a, self.n_b)
    }
}

/// Dense complex square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = cr(1.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from a flat row-major entry list.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for dim {dim}, found {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| cr(rows[i][j]))
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = cr(v);
        }
        m
    }

    /// `|v><v|`
    pub fn projector(v: &Ket) -> Self {
        Self::outer(v, v)
    }

    /// `|u><v|`
    pub fn outer(u: &Ket, v: &Ket) -> Self {
        let dim = u.dim();
        assert_eq!(dim, v.dim(), "outer product of kets with different dims");
        Self::from_fn(dim, |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_c(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// `(M + M†)/2`, used to strip rounding noise from Hermitian results.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &Ket) -> Ket {
        assert_eq!(self.dim, v.dim());
        Ket::new(
            (0..self.dim)
                .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
                .collect(),
        )
    }

    /// `<v|M|v>` real part (the expectation for Hermitian M).
    pub fn expectation(&self, v: &Ket) -> f64 {
        v.inner(&self.apply(v)).re
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        let dim = m.nrows();
        Self::from_fn(dim, |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "adding matrices of different dims");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "subtracting matrices of different dims");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "multiplying matrices of different dims");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// A state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: Vec<Complex64>,
}

impl Ket {
    pub fn new(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn from_real(amps: &[f64]) -> Self {
        Self::new(amps.iter().map(|&x| cr(x)).collect())
    }

    /// Computational basis vector `|i>` in dimension `dim`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut amps = vec![cr(0.0); dim];
        amps[i] = cr(1.0);
        Self { amps }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.amps.iter().map(|z| z / n).collect())
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Ket) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn kron(&self, other: &Ket) -> Ket {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ket::new(amps)
    }

    pub fn conj(&self) -> Ket {
        Ket::new(self.amps.iter().map(|z| z.conj()).collect())
    }

    pub fn scale_c(&self, s: Complex64) -> Ket {
        Ket::new(self.amps.iter().map(|z| z * s).collect())
    }

    /// Fixes the global phase so that the first amplitude with modulus above
    /// `tol` is real and positive.
    pub fn phase_fixed(&self, tol: f64) -> Ket {
        match self.amps.iter().find(|z| z.norm() > tol) {
            Some(z) => {
                let phase = z.conj() / z.norm();
                self.scale_c(phase)
            }
            None => self.clone(),
        }
    }

    /// True when `self` and `other` represent the same ray.
    pub fn same_ray(&self, other: &Ket, tol: f64) -> bool {
        self.dim() == other.dim()
            && (self.inner(other).norm() - self.norm() * other.norm()).abs() <= tol
    }
}

impl Index<usize> for Ket {
    type Output = Complex64;

    #[inline]
    fn index(&self, i: usize) -> &Complex64 {
        &self.amps[i]
    }
}

/// A product vector `|e>|f>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductPair {
    pub e: Ket,
    pub f: Ket,
}

impl ProductPair {
    pub fn new(e: Ket, f: Ket) -> Self {
        Self { e, f }
    }

    pub fn ket(&self) -> Ket {
        self.e.kron(&self.f)
    }

    pub fn projector(&self) -> ComplexMatrix {
        kron(
            &ComplexMatrix::projector(&self.e),
            &ComplexMatrix::projector(&self.f),
        )
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims {
            n_a: self.e.dim(),
            n_b: self.f.dim(),
        }
    }
}

/// Kronecker product, A-major.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(na * nb, |r, s| {
        let (i, j) = (r / nb, r % nb);
        let (k, l) = (s / nb, s % nb);
        a[(i, k)] * b[(j, l)]
    })
}

pub fn sigma_0() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn sigma_y() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 1)] = c(0.0, -1.0);
    m[(1, 0)] = c(0.0, 1.0);
    m
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0])
}

/// `[σ_0, σ_x, σ_y, σ_z]`
pub fn paulis() -> [ComplexMatrix; 4] {
    [sigma_0(), sigma_x(), sigma_y(), sigma_z()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_xx_is_antidiagonal() {
        let xx = kron(&sigma_x(), &sigma_x());
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx[(i, j)], cr(expected));
            }
        }
    }

    #[test]
    fn kron_identities() {
        assert_eq!(
            kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)),
            ComplexMatrix::identity(4)
        );
    }

    #[test]
    fn kron_zz_diagonal() {
        assert_eq!(
            kron(&sigma_z(), &sigma_z()),
            ComplexMatrix::diag(&[1.0, -1.0, -1.0, 1.0])
        );
    }

    #[test]
    fn ket_kron_matches_operator_kron() {
        let e = Ket::new(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let f = Ket::from_real(&[1.0, 2.0, 2.0]).normalized();
        let lhs = ComplexMatrix::projector(&e.kron(&f));
        let rhs = ProductPair::new(e, f).projector();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn phase_fix_makes_first_amplitude_positive() {
        let v = Ket::new(vec![c(0.0, 0.0), c(0.0, -0.6), c(0.8, 0.0)]);
        let w = v.phase_fixed(1e-12);
        assert!(w[1].im.abs() < 1e-15 && w[1].re > 0.0);
        assert!(v.same_ray(&w, 1e-12));
    }

    #[test]
    fn row_major_rejects_wrong_length() {
        assert!(ComplexMatrix::from_row_major(2, vec![cr(1.0); 3]).is_err());
    }
}
