//! Dense complex linear algebra used by every other module.
//!
//! Everything here is desk-scale: matrices are stored densely in row-major
//! order and nothing tries to be BLAS. The 2x2 [`Mat2`] type is the hot-path
//! representation for coins and matchgate blocks.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default absolute tolerance for comparisons of well-conditioned unitaries.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// A 2x2 complex matrix, row-major: `[[m00, m01], [m10, m11]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);
    pub const PAULI_X: Mat2 = Mat2([[ZERO, ONE], [ONE, ZERO]]);

    pub fn new(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    pub fn real(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Mat2::new(m00.into(), m01.into(), m10.into(), m11.into())
    }

    pub fn det(&self) -> C64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        let m = &self.0;
        Mat2::new(s * m[0][0], s * m[0][1], s * m[1][0], s * m[1][1])
    }

    /// Entrywise max of `|self - other|`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Mat2::IDENTITY)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Applies the matrix to the amplitude pair `(a, b)`.
    #[inline]
    pub fn apply(&self, a: C64, b: C64) -> (C64, C64) {
        let m = &self.0;
        (m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_rows(&[
            vec![self.0[0][0], self.0[0][1]],
            vec![self.0[1][0], self.0[1][1]],
        ])
        .expect("2x2 rows are rectangular")
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::Dimension(format!(
                "expected a 2x2 matrix, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Mat2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

/// Dense complex matrix in row-major order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = ComplexMatrix::zeros(diag.len(), diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flatten().copied().collect();
        Ok(ComplexMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::Dimension(format!(
                "cannot apply a {}x{} matrix to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(self
            .data
            .chunks_exact(self.cols.max(1))
            .take(self.rows)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Kronecker product: `(a ⊗ b)[i*R + r, j*C + c] = a[i,j] * b[r,c]`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (r2, c2) = (other.rows, other.cols);
        let mut out = ComplexMatrix::zeros(self.rows * r2, self.cols * c2);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == ZERO {
                    continue;
                }
                for r in 0..r2 {
                    for c in 0..c2 {
                        out[(i * r2 + r, j * c2 + c)] = a * other[(r, c)];
                    }
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &ComplexMatrix, f: impl Fn(C64, C64) -> C64) -> Result<ComplexMatrix> {
        self.check_same_shape(other)?;
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    fn check_same_shape(&self, other: &ComplexMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Entrywise max of `|self - other|` (the ∞-norm used throughout).
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(max_abs_diff(&self.data, &other.data))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// `max |U†U - I|`, or infinity for non-square input.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = self.adjoint().matmul(self).expect("square");
        gram.max_abs_diff(&ComplexMatrix::identity(self.rows)).expect("same shape")
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// `max |H - H†|`, or infinity for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Copies out the square block spanned by `indices` (rows and columns).
    pub fn submatrix(&self, indices: &[usize]) -> ComplexMatrix {
        let n = indices.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self[(r, c)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Complex amplitude vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(pub Vec<C64>);

impl ComplexVector {
    pub fn zeros(dim: usize) -> Self {
        ComplexVector(vec![ZERO; dim])
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = ComplexVector::zeros(dim);
        v.0[index] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn is_normalized(&self, eps: f64) -> bool {
        (self.norm() - 1.0).abs() <= eps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.0.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }
}

impl From<Vec<C64>> for ComplexVector {
    fn from(v: Vec<C64>) -> Self {
        ComplexVector(v)
    }
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff_real(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Eigendecomposition `h = V·diag(E)·V†` of a Hermitian matrix, kept so
/// that `exp(-i h t)` can be formed for many `t`.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    eigenvalues: Vec<f64>,
    vectors: ComplexMatrix,
}

impl HermitianSpectrum {
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        const HERMITIAN_TOL: f64 = 1e-10;
        const MAX_DIM: usize = 1 << 14;

        if !h.is_square() {
            return Err(Error::Dimension(format!(
                "expected a square matrix, got {}x{}",
                h.rows(),
                h.cols()
            )));
        }
        if h.rows() > MAX_DIM {
            return Err(Error::Scale {
                requested: h.rows(),
                limit: MAX_DIM,
            });
        }
        let deviation = h.hermiticity_defect();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let n = h.rows();
        if n == 0 {
            return Ok(HermitianSpectrum {
                eigenvalues: Vec::new(),
                vectors: ComplexMatrix::zeros(0, 0),
            });
        }
        let eig = h.to_nalgebra().symmetric_eigen();
        let mut vectors = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for k in 0..n {
                vectors[(i, k)] = eig.eigenvectors[(i, k)];
            }
        }
        Ok(HermitianSpectrum {
            eigenvalues: eig.eigenvalues.iter().copied().collect(),
            vectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Columns are the eigenvectors, in the order of [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    /// `exp(-i h t)`.
    pub fn exp(&self, t: f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.vectors.clone();
        for (k, &e) in self.eigenvalues.iter().enumerate() {
            let p = C64::from_polar(1.0, -e * t);
            for i in 0..n {
                scaled[(i, k)] *= p;
            }
        }
        scaled
            .matmul(&self.vectors.adjoint())
            .expect("square factors of equal size")
    }
}

/// `exp(-i h t)` for Hermitian `h`, via eigendecomposition.
pub fn hermitian_exp(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    Ok(HermitianSpectrum::new(h)?.exp(t))
}

/// Outcome of [`equal_up_to_global_phase`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseMatch {
    pub equal: bool,
    /// Unit-modulus `phi` with `a ≈ phi * b`; `None` when `b` is all zeros.
    pub phase: Option<C64>,
    /// `max |a - phi * b|` (or `max |a|` when no phase exists).
    pub deviation: f64,
}

/// Tests whether `a = phi * b` for some unit-modulus `phi`.
///
/// The phase is read off the largest-magnitude entry of `b`, then the whole
/// vector is compared in the ∞-norm.
pub fn equal_up_to_global_phase(a: &[C64], b: &[C64], tol: f64) -> Result<PhaseMatch> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "cannot compare lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    let pivot = b
        .iter()
        .enumerate()
        .max_by(|(_, x), (_, y)| x.norm().total_cmp(&y.norm()))
        .map(|(i, _)| i);
    let Some(pivot) = pivot.filter(|&i| b[i].norm() > 0.0) else {
        let deviation = a.iter().map(|x| x.norm()).fold(0.0, f64::max);
        return Ok(PhaseMatch {
            equal: deviation <= tol,
            phase: None,
            deviation,
        });
    };
    let ratio = a[pivot] / b[pivot];
    let phase = if ratio.norm() > 0.0 {
        ratio / ratio.norm()
    } else {
        ONE
    };
    let deviation = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max);
    Ok(PhaseMatch {
        equal: deviation <= tol,
        phase: Some(phase),
        deviation,
    })
}

pub fn matrices_equal_up_to_global_phase(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    tol: f64,
) -> Result<PhaseMatch> {
    a.check_same_shape(b)?;
    equal_up_to_global_phase(a.as_slice(), b.as_slice(), tol)
}

/// Pauli matrices and friends as dense 2x2 matrices.
pub mod pauli {
    use super::{ComplexMatrix, Mat2, C64, I, ONE, ZERO};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        Mat2::PAULI_X.to_matrix()
    }

    pub fn y() -> ComplexMatrix {
        Mat2::new(ZERO, -I, I, ZERO).to_matrix()
    }

    /// `σz|0⟩ = +|0⟩`.
    pub fn z() -> ComplexMatrix {
        Mat2::new(ONE, ZERO, ZERO, C64::new(-1.0, 0.0)).to_matrix()
    }
}
