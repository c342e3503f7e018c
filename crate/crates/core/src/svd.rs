//! SVD with a rank tolerance, plus the inverses built on top of it:
//! Moore-Penrose pseudoinverse, inverse, transpose inverse.
//!
//! The factorization itself is delegated to faer; this module owns the
//! contract: orthonormal factors, nonincreasing singular values, and a
//! reconstruction bound that is verified at construction time.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, ScalarKind};
use crate::tol::ToleranceConfig;

/// Orthonormality and reconstruction are enforced at this fixed level,
/// independently of the configurable residual tolerance.
const FACTOR_TOL: f64 = 1e-12;

/// Singular value decomposition `M = U * diag(sigma) * V^T` (conjugate
/// transpose of `V` in the complex case). The primary factors are thin,
/// with `k = min(rows, cols)` columns; the square completions are kept
/// alongside them.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    u: Matrix,
    singular_values: Vec<f64>,
    v: Matrix,
    full_u: Matrix,
    full_v: Matrix,
    rank_tol: f64,
}

/// Compute the SVD of `m`. Factors carry the scalar kind of the input.
pub fn compute_svd(m: &Matrix, tol: &ToleranceConfig) -> Result<SvdFactors> {
    tol.validate()?;
    let k = m.rows().min(m.cols());
    let (full_u, sigma, full_v) = match m.kind() {
        ScalarKind::Real => {
            let a = m.as_real().expect("real kind");
            let fm = faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
            let svd = fm.svd().map_err(|_| Error::SvdConvergence)?;
            let u = DMatrix::from_fn(a.nrows(), a.nrows(), |i, j| svd.U()[(i, j)]);
            let v = DMatrix::from_fn(a.ncols(), a.ncols(), |i, j| svd.V()[(i, j)]);
            let sigma: Vec<f64> = (0..k).map(|i| svd.S()[i]).collect();
            (Matrix::from_real(u)?, sigma, Matrix::from_real(v)?)
        }
        ScalarKind::Complex => {
            let a = m.as_complex().expect("complex kind");
            let fm = faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)]);
            let svd = fm.svd().map_err(|_| Error::SvdConvergence)?;
            let u = DMatrix::from_fn(a.nrows(), a.nrows(), |i, j| svd.U()[(i, j)]);
            let v = DMatrix::from_fn(a.ncols(), a.ncols(), |i, j| svd.V()[(i, j)]);
            let sigma: Vec<f64> = (0..k).map(|i| svd.S()[i].re).collect();
            (Matrix::from_complex(u)?, sigma, Matrix::from_complex(v)?)
        }
    };

    let u = leading_columns(&full_u, k);
    let v = leading_columns(&full_v, k);
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let factors = SvdFactors {
        u,
        singular_values: sigma,
        v,
        full_u,
        full_v,
        rank_tol: tol.rank_rel_tol * sigma_max,
    };
    factors.validate(m)?;
    Ok(factors)
}

fn leading_columns(m: &Matrix, k: usize) -> Matrix {
    if m.cols() == k {
        return m.clone();
    }
    match m.kind() {
        ScalarKind::Real => {
            let a = m.as_real().expect("real kind");
            Matrix::from_real(a.columns(0, k).into_owned()).expect("finite slice")
        }
        ScalarKind::Complex => {
            let a = m.as_complex().expect("complex kind");
            Matrix::from_complex(a.columns(0, k).into_owned()).expect("finite slice")
        }
    }
}

impl SvdFactors {
    /// Left factor, `rows x k`, orthonormal columns.
    pub fn u(&self) -> &Matrix {
        &self.u
    }

    /// Right factor, `cols x k`, orthonormal columns.
    pub fn v(&self) -> &Matrix {
        &self.v
    }

    /// Nonincreasing, nonnegative.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    /// Absolute rank threshold (`rank_rel_tol * sigma_max`).
    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn kind(&self) -> ScalarKind {
        self.u.kind()
    }

    /// Shape of the decomposed matrix.
    pub fn source_shape(&self) -> (usize, usize) {
        (self.u.rows(), self.v.rows())
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values.last().copied().unwrap_or(0.0)
    }

    /// Number of singular values above the rank threshold.
    pub fn effective_rank(&self) -> usize {
        self.singular_values
            .iter()
            .filter(|&&s| s > self.rank_tol)
            .count()
    }

    /// Smallest singular value above the rank threshold, if any.
    pub fn smallest_nonzero_singular_value(&self) -> Option<f64> {
        // Sorted nonincreasing, so the last retained value is the smallest.
        self.singular_values
            .iter()
            .copied()
            .rfind(|&s| s > self.rank_tol)
    }

    /// Square completion of `U` (`rows x rows`).
    pub fn full_u(&self) -> Option<&Matrix> {
        Some(&self.full_u)
    }

    /// Square completion of `V` (`cols x cols`).
    pub fn full_v(&self) -> Option<&Matrix> {
        Some(&self.full_v)
    }

    /// `U * diag(sigma) * V^T` (adjoint of `V` for complex factors).
    pub fn reconstruct(&self) -> Matrix {
        self.with_mapped_values(|s| s)
    }

    /// Rebuild a matrix with the singular values transformed elementwise.
    /// `U * diag(f(sigma_i)) * V^T`; the factor count is unchanged.
    pub fn with_mapped_values(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let mapped: Vec<f64> = self.singular_values.iter().map(|&s| f(s)).collect();
        self.rebuild(&mapped, self.singular_values.len())
    }

    /// `U_r * diag(values) * V_r^T` using only the leading `r` columns.
    pub(crate) fn rebuild(&self, values: &[f64], r: usize) -> Matrix {
        match self.kind() {
            ScalarKind::Real => {
                let u = self.u.as_real().expect("real");
                let v = self.v.as_real().expect("real");
                let (m, n) = self.source_shape();
                let mut out = DMatrix::<f64>::zeros(m, n);
                for (k, &val) in values.iter().take(r).enumerate() {
                    if val != 0.0 {
                        out += val * u.column(k) * v.column(k).transpose();
                    }
                }
                Matrix::from_real(out).expect("finite rebuild")
            }
            ScalarKind::Complex => {
                let u = self.u.as_complex().expect("complex");
                let v = self.v.as_complex().expect("complex");
                let (m, n) = self.source_shape();
                let mut out = DMatrix::<Complex64>::zeros(m, n);
                for (k, &val) in values.iter().take(r).enumerate() {
                    if val != 0.0 {
                        out += u.column(k) * v.column(k).adjoint() * Complex64::new(val, 0.0);
                    }
                }
                Matrix::from_complex(out).expect("finite rebuild")
            }
        }
    }

    fn validate(&self, source: &Matrix) -> Result<()> {
        for w in self.singular_values.windows(2) {
            if w[0] < w[1] {
                return Err(Error::NumericFailure(
                    "singular values not sorted nonincreasing".into(),
                ));
            }
        }
        if self.singular_values.iter().any(|&s| s < 0.0) {
            return Err(Error::NumericFailure("negative singular value".into()));
        }
        let (m, n) = self.source_shape();
        let ortho_u = gram_residual(&self.full_u);
        let ortho_v = gram_residual(&self.full_v);
        if ortho_u > FACTOR_TOL * (m as f64).sqrt() || ortho_v > FACTOR_TOL * (n as f64).sqrt() {
            return Err(Error::NumericFailure(format!(
                "SVD factors lost orthonormality (residuals {ortho_u:e}, {ortho_v:e})"
            )));
        }
        let recon_err = self.reconstruct().sub(source)?.frobenius_norm();
        if recon_err > FACTOR_TOL * source.frobenius_norm() {
            return Err(Error::NumericFailure(format!(
                "SVD reconstruction residual {recon_err:e} above bound"
            )));
        }
        Ok(())
    }
}

/// `|| Q^H Q - I ||_F` for a factor with orthonormal columns.
fn gram_residual(q: &Matrix) -> f64 {
    let gram = q.adjoint().matmul(q).expect("shapes agree");
    let id = Matrix::identity(gram.rows()).expect("positive dim");
    gram.sub(&id).expect("same shape").frobenius_norm()
}

/// Moore-Penrose pseudoinverse `V * diag(1/sigma_i or 0) * U^T` where only
/// singular values above the rank threshold are inverted.
pub fn pseudoinverse(f: &SvdFactors) -> Matrix {
    let inv: Vec<f64> = f
        .singular_values()
        .iter()
        .map(|&s| if s > f.rank_tol() { 1.0 / s } else { 0.0 })
        .collect();
    // Swap the roles of U and V by building from the transposed factor pair.
    let swapped = SvdFactors {
        u: f.v.clone(),
        singular_values: f.singular_values.clone(),
        v: f.u.clone(),
        full_u: f.full_v.clone(),
        full_v: f.full_u.clone(),
        rank_tol: f.rank_tol,
    };
    swapped.rebuild(&inv, inv.len())
}

/// Inverse of a square, nonsingular-at-tolerance matrix via its factors.
pub fn inverse(f: &SvdFactors) -> Result<Matrix> {
    let (m, n) = f.source_shape();
    if m != n {
        return Err(Error::NotSquare {
            rows: m,
            cols: n,
            context: "inverse",
        });
    }
    if f.sigma_min() <= f.rank_tol() {
        return Err(Error::RankDeficient {
            sigma_min: f.sigma_min(),
            context: "cannot invert".into(),
        });
    }
    Ok(pseudoinverse(f))
}

/// `(A^{-1})^T`, the transpose inverse. Fails on rank deficiency with the
/// offending smallest singular value.
pub fn transpose_inverse(a: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
            context: "transpose_inverse",
        });
    }
    let f = compute_svd(a, tol)?;
    let x = inverse(&f)?.transpose();
    let n = a.rows() as f64;
    let residual = a
        .transpose()
        .matmul(&x)?
        .sub(&Matrix::identity(a.rows())?)?
        .frobenius_norm();
    if residual > tol.residual_rel_tol * n.sqrt() {
        return Err(Error::NumericFailure(format!(
            "transpose inverse residual {residual:e} above tolerance"
        )));
    }
    Ok(x)
}

/// `(A^{-1})^*`, the conjugate-transpose inverse (equals the transpose
/// inverse for real input).
pub fn adjoint_inverse(a: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
            context: "adjoint_inverse",
        });
    }
    let f = compute_svd(a, tol)?;
    Ok(inverse(&f)?.adjoint())
}

/// Last (smallest) singular value of the factorization.
pub fn smallest_singular_value(f: &SvdFactors) -> f64 {
    f.sigma_min()
}
