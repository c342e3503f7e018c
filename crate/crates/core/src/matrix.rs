//! Dense real/complex matrix carrier.
//!
//! A [`Matrix`] is either real or complex (`f64` scalars in both cases) and
//! is validated on construction: positive dimensions and finite entries.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar field of a [`Matrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarKind {
    Real,
    Complex,
}

impl std::fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarKind::Real => write!(f, "real"),
            ScalarKind::Complex => write!(f, "complex"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Data {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

/// Dense rectangular matrix, real or complex.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    data: Data,
}

fn check_dims(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyMatrix { rows, cols });
    }
    Ok(())
}

impl Matrix {
    pub fn from_real(m: DMatrix<f64>) -> Result<Self> {
        check_dims(m.nrows(), m.ncols())?;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if !m[(i, j)].is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Matrix {
            data: Data::Real(m),
        })
    }

    pub fn from_complex(m: DMatrix<Complex64>) -> Result<Self> {
        check_dims(m.nrows(), m.ncols())?;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Matrix {
            data: Data::Complex(m),
        })
    }

    /// Build from a row-major slice of real entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        check_dims(rows, cols)?;
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::from_real(DMatrix::from_row_slice(rows, cols, entries))
    }

    /// Build from a row-major slice of complex entries.
    pub fn from_row_major_complex(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        check_dims(rows, cols)?;
        if entries.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::from_complex(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_dims(rows, cols)?;
        Ok(Matrix {
            data: Data::Real(DMatrix::zeros(rows, cols)),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_dims(n, n)?;
        Ok(Matrix {
            data: Data::Real(DMatrix::identity(n, n)),
        })
    }

    pub fn rows(&self) -> usize {
        match &self.data {
            Data::Real(m) => m.nrows(),
            Data::Complex(m) => m.nrows(),
        }
    }

    pub fn cols(&self) -> usize {
        match &self.data {
            Data::Real(m) => m.ncols(),
            Data::Complex(m) => m.ncols(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn kind(&self) -> ScalarKind {
        match &self.data {
            Data::Real(_) => ScalarKind::Real,
            Data::Complex(_) => ScalarKind::Complex,
        }
    }

    /// Entry at (row, col), promoted to complex for a uniform view.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        match &self.data {
            Data::Real(m) => Complex64::new(m[(row, col)], 0.0),
            Data::Complex(m) => m[(row, col)],
        }
    }

    pub fn as_real(&self) -> Option<&DMatrix<f64>> {
        match &self.data {
            Data::Real(m) => Some(m),
            Data::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&DMatrix<Complex64>> {
        match &self.data {
            Data::Real(_) => None,
            Data::Complex(m) => Some(m),
        }
    }

    /// A complex copy regardless of kind.
    pub fn to_complex(&self) -> DMatrix<Complex64> {
        match &self.data {
            Data::Real(m) => m.map(|x| Complex64::new(x, 0.0)),
            Data::Complex(m) => m.clone(),
        }
    }

    /// Reinterpret as a complex matrix (kind becomes complex, values equal).
    pub fn promote(&self) -> Matrix {
        Matrix {
            data: Data::Complex(self.to_complex()),
        }
    }

    pub fn transpose(&self) -> Matrix {
        match &self.data {
            Data::Real(m) => Matrix {
                data: Data::Real(m.transpose()),
            },
            Data::Complex(m) => Matrix {
                data: Data::Complex(m.transpose()),
            },
        }
    }

    /// Conjugate transpose; identical to [`Matrix::transpose`] for real kind.
    pub fn adjoint(&self) -> Matrix {
        match &self.data {
            Data::Real(m) => Matrix {
                data: Data::Real(m.transpose()),
            },
            Data::Complex(m) => Matrix {
                data: Data::Complex(m.adjoint()),
            },
        }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        match &self.data {
            Data::Real(m) => Matrix {
                data: Data::Real(m * s),
            },
            Data::Complex(m) => Matrix {
                data: Data::Complex(m * Complex64::new(s, 0.0)),
            },
        }
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, "add", |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip(rhs, "sub", |a, b| a - b, |a, b| a - b)
    }

    fn zip(
        &self,
        rhs: &Matrix,
        context: &'static str,
        real_op: impl Fn(&DMatrix<f64>, &DMatrix<f64>) -> DMatrix<f64>,
        cplx_op: impl Fn(&DMatrix<Complex64>, &DMatrix<Complex64>) -> DMatrix<Complex64>,
    ) -> Result<Matrix> {
        if self.shape() != rhs.shape() {
            return Err(self.shape_mismatch(rhs, context));
        }
        let data = match (&self.data, &rhs.data) {
            (Data::Real(a), Data::Real(b)) => Data::Real(real_op(a, b)),
            _ => Data::Complex(cplx_op(&self.to_complex(), &rhs.to_complex())),
        };
        Ok(Matrix { data })
    }

    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols() != rhs.rows() {
            return Err(self.shape_mismatch(rhs, "matmul"));
        }
        let data = match (&self.data, &rhs.data) {
            (Data::Real(a), Data::Real(b)) => Data::Real(a * b),
            _ => Data::Complex(self.to_complex() * rhs.to_complex()),
        };
        Ok(Matrix { data })
    }

    fn shape_mismatch(&self, rhs: &Matrix, context: &'static str) -> Error {
        Error::ShapeMismatch {
            left_rows: self.rows(),
            left_cols: self.cols(),
            right_rows: rhs.rows(),
            right_cols: rhs.cols(),
            context,
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        match &self.data {
            Data::Real(m) => m.norm(),
            Data::Complex(m) => m.norm(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.data {
            Data::Real(m) => m.iter().fold(0.0f64, |acc, x| acc.max(x.abs())),
            Data::Complex(m) => m.iter().fold(0.0f64, |acc, z| acc.max(z.norm())),
        }
    }
}

/// Elementwise (Hadamard) product; shapes must match.
pub fn hadamard(x: &Matrix, y: &Matrix) -> Result<Matrix> {
    x.zip(
        y,
        "hadamard",
        |a, b| a.component_mul(b),
        |a, b| a.component_mul(b),
    )
}

/// Frobenius norm of a matrix.
pub fn frobenius_norm(x: &Matrix) -> f64 {
    x.frobenius_norm()
}
