//! Scalars, vectors, matrices and the two norms everything else is built on.
//!
//! All numeric data is stored as `Complex64`; a [`Field`] tag records whether
//! imaginary parts are meaningful. Matrices are dense row-major, small and
//! square in every intended use (dimensions in the tens), so clarity wins
//! over blocking or sparsity.

// Inherent float math lives in std; the trait supplies it under no_std.
// Graphs that link std anywhere (tests do) shadow it, idling the import.
#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar field of a vector space: real data is stored with zero imaginary
/// parts so the two cases share all code paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Smallest field containing both operands.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }
}

/// Conjugate exponent q = p / (p - 1). Requires 1 < p < inf; the endpoint
/// spaces have degenerate duality and are rejected.
pub fn conjugate_exponent(p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::ExponentOutOfRange(p));
    }
    Ok(p / (p - 1.0))
}

/// A Hoelder-conjugate exponent pair with 1 < p < inf.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    p: f64,
    q: f64,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        let q = conjugate_exponent(p)?;
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The dual pair (q, p).
    pub fn conjugate(&self) -> Exponent {
        Exponent {
            p: self.q,
            q: self.p,
        }
    }

    pub fn is_two(&self) -> bool {
        self.p == 2.0
    }
}

/// |z|^p, with the p = 2 case kept on the exact multiply-add path so that
/// repeated evaluations agree bit-for-bit with `Complex64::norm_sqr`.
pub fn abs_pow(z: Complex64, p: f64) -> f64 {
    if p == 2.0 {
        z.norm_sqr()
    } else if p == 1.0 {
        z.norm()
    } else {
        z.norm().powf(p)
    }
}

/// x^(1/p), sharing the sqrt fast path with [`abs_pow`].
pub fn root(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x.sqrt()
    } else if p == 1.0 {
        x
    } else {
        x.powf(1.0 / p)
    }
}

/// Dense column vector over [`Field`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    entries: Vec<Complex64>,
    field: Field,
}

impl DenseVector {
    pub fn new(entries: Vec<Complex64>, field: Field) -> Self {
        Self { entries, field }
    }

    pub fn from_reals(values: &[f64]) -> Self {
        Self {
            entries: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            field: Field::Real,
        }
    }

    pub fn zeros(n: usize, field: Field) -> Self {
        Self {
            entries: vec![Complex64::new(0.0, 0.0); n],
            field,
        }
    }

    /// Canonical unit vector with a 1 in position `index`.
    pub fn canonical(n: usize, index: usize, field: Field) -> Self {
        let mut v = Self::zeros(n, field);
        v.entries[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [Complex64] {
        &mut self.entries
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: Complex64) {
        self.entries[i] = value;
    }

    pub fn scaled(&self, factor: Complex64) -> DenseVector {
        let field = if factor.im != 0.0 {
            Field::Complex
        } else {
            self.field
        };
        DenseVector {
            entries: self.entries.iter().map(|&z| z * factor).collect(),
            field,
        }
    }

    pub fn sub(&self, other: &DenseVector) -> Result<DenseVector> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(DenseVector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a - b)
                .collect(),
            field: self.field.join(other.field),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Standard inner product, conjugate-linear in `self`.
    pub fn dot_conj(&self, other: &DenseVector) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a.conj() * b)
            .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z)
    }
}

/// p-norm of a vector for any p >= 1 (the induced-norm endpoints p = 1 and
/// large finite p are legitimate here even though basis exponents are not).
pub fn p_norm(v: &DenseVector, p: f64) -> Result<f64> {
    if v.dim() == 0 {
        return Err(Error::EmptyVector);
    }
    if !(p >= 1.0) {
        return Err(Error::NormExponentOutOfRange(p));
    }
    let sum: f64 = v.entries().iter().map(|&z| abs_pow(z, p)).sum();
    Ok(root(sum, p))
}

/// Norm of the functional with coefficient row `v` acting on l^p, which by
/// duality is the conjugate-exponent norm of the coefficients.
pub fn functional_norm(v: &DenseVector, p: f64) -> Result<f64> {
    let q = conjugate_exponent(p)?;
    p_norm(v, q)
}

/// Dense row-major matrix over [`Field`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    entries: Vec<Complex64>,
    rows: usize,
    cols: usize,
    field: Field,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>, field: Field) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::ZeroDimension);
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                entries: entries.len(),
            });
        }
        Ok(Self {
            entries,
            rows,
            cols,
            field,
        })
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Self {
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
            rows,
            cols,
            field,
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Complex64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> DenseVector {
        let entries = (0..self.rows).map(|r| self.get(r, c)).collect();
        DenseVector::new(entries, self.field)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows, self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).conj());
            }
        }
        out
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let field = self.field.join(other.field);
        let mut out = DenseMatrix::zeros(self.rows, other.cols, field);
        for r in 0..self.rows {
            let row = self.row(r);
            for c in 0..other.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += row[k] * other.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &DenseVector) -> Result<DenseVector> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.dim(),
            });
        }
        let field = self.field.join(v.field());
        let entries = (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += row[k] * v.get(k);
                }
                acc
            })
            .collect();
        Ok(DenseVector::new(entries, field))
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest deviation from the identity, for biorthogonality and
    /// unitarity checks without allocating an identity matrix.
    pub fn max_abs_diff_identity(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let target = if r == c { 1.0 } else { 0.0 };
                let d = (self.get(r, c) - Complex64::new(target, 0.0)).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}
