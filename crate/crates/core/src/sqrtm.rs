//! Principal matrix square root via Schur triangularization.
//!
//! Real input goes through the real Schur form, a Givens-based conversion to
//! complex triangular form, the standard triangular square-root recurrence,
//! and a snap back to real storage. Complex input uses the complex Schur
//! form directly.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, ScalarKind};
use crate::tol::ToleranceConfig;

const SCHUR_MAX_NITER: usize = 10_000;

/// Relative size below which imaginary parts of a real-input result are
/// discarded.
const REAL_SNAP_TOL: f64 = 1e-10;

/// Eigenvalues of a square matrix, via the Schur form.
pub(crate) fn eigenvalues(m: &Matrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
            context: "eigenvalues",
        });
    }
    match m.kind() {
        ScalarKind::Real => {
            let (_, t) = real_schur(m.as_real().expect("real kind"))?;
            Ok(quasi_triangular_eigenvalues(&t))
        }
        ScalarKind::Complex => {
            let (_, t) = complex_schur(m.as_complex().expect("complex kind"))?;
            Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
        }
    }
}

/// Reject eigenvalues on (or within the guard margin of) the strictly
/// negative real axis. A zero eigenvalue passes: its principal square root
/// is zero and well defined for semisimple structure; defectiveness at zero
/// is caught later by the residual check.
pub(crate) fn check_branch_cut(
    eigs: &[Complex64],
    sqrt_axis_margin: f64,
    context: &str,
) -> Result<()> {
    let radius = eigs.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let margin = sqrt_axis_margin * radius.max(1.0);
    for &lambda in eigs {
        if lambda.re < -margin && lambda.im.abs() <= margin {
            return Err(Error::BranchCut {
                eigenvalue: lambda,
                context: context.to_string(),
            });
        }
    }
    Ok(())
}

/// Principal square root of a square matrix whose spectrum stays clear of
/// the negative real axis. Real input with the precondition satisfied
/// yields a real result.
pub fn principal_matrix_sqrt(s: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    tol.validate()?;
    if !s.is_square() {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
            context: "principal_matrix_sqrt",
        });
    }
    let (z, t) = match s.kind() {
        ScalarKind::Real => {
            let (q, t) = real_schur(s.as_real().expect("real kind"))?;
            rsf2csf(&q, &t)
        }
        ScalarKind::Complex => complex_schur(s.as_complex().expect("complex kind"))?,
    };

    let eigs: Vec<Complex64> = (0..t.nrows()).map(|i| t[(i, i)]).collect();
    check_branch_cut(
        &eigs,
        tol.sqrt_axis_margin,
        "lies on or near the negative real axis; the principal square root is undefined",
    )?;

    let u = sqrt_upper_triangular(&t)?;
    let xc = &z * u * z.adjoint();

    let x = match s.kind() {
        ScalarKind::Real => snap_to_real(&xc)?,
        ScalarKind::Complex => Matrix::from_complex(xc)?,
    };

    let residual = x.matmul(&x)?.sub(s)?.frobenius_norm();
    if residual > tol.residual_rel_tol * s.frobenius_norm().max(1.0) {
        return Err(Error::NumericFailure(format!(
            "matrix square root residual {residual:e} above tolerance"
        )));
    }
    Ok(x)
}

fn real_schur(a: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let schur = a
        .clone()
        .try_schur(f64::EPSILON, SCHUR_MAX_NITER)
        .ok_or(Error::EigConvergence)?;
    Ok(schur.unpack())
}

fn complex_schur(
    a: &DMatrix<Complex64>,
) -> Result<(DMatrix<Complex64>, DMatrix<Complex64>)> {
    let schur = a
        .clone()
        .try_schur(f64::EPSILON, SCHUR_MAX_NITER)
        .ok_or(Error::EigConvergence)?;
    Ok(schur.unpack())
}

fn block_is_coupled(t: &DMatrix<f64>, i: usize) -> bool {
    t[(i + 1, i)].abs() > f64::EPSILON * (t[(i, i)].abs() + t[(i + 1, i + 1)].abs())
}

/// Eigenvalues of a real quasi-upper-triangular matrix (1x1 and 2x2 blocks).
fn quasi_triangular_eigenvalues(t: &DMatrix<f64>) -> Vec<Complex64> {
    let n = t.nrows();
    let mut eigs = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if i + 1 < n && block_is_coupled(t, i) {
            let (a, b) = (t[(i, i)], t[(i, i + 1)]);
            let (c, d) = (t[(i + 1, i)], t[(i + 1, i + 1)]);
            let mean = 0.5 * (a + d);
            let disc = 0.25 * (a - d) * (a - d) + b * c;
            if disc >= 0.0 {
                let r = disc.sqrt();
                eigs.push(Complex64::new(mean + r, 0.0));
                eigs.push(Complex64::new(mean - r, 0.0));
            } else {
                let r = (-disc).sqrt();
                eigs.push(Complex64::new(mean, r));
                eigs.push(Complex64::new(mean, -r));
            }
            i += 2;
        } else {
            eigs.push(Complex64::new(t[(i, i)], 0.0));
            i += 1;
        }
    }
    eigs
}

/// Convert a real Schur pair (Q, T) to a complex Schur pair (Z, T') with T'
/// upper triangular, by unitary 2x2 rotations that resolve each coupled
/// diagonal block.
fn rsf2csf(q: &DMatrix<f64>, t: &DMatrix<f64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = t.nrows();
    let mut tc = t.map(|x| Complex64::new(x, 0.0));
    let mut zc = q.map(|x| Complex64::new(x, 0.0));
    for m in (1..n).rev() {
        let sub = tc[(m, m - 1)];
        if sub.norm() > f64::EPSILON * (tc[(m - 1, m - 1)].norm() + tc[(m, m)].norm()) {
            // Eigenvalue of the trailing block, shifted by its (m,m) entry.
            let a = tc[(m - 1, m - 1)];
            let b = tc[(m - 1, m)];
            let c = tc[(m, m - 1)];
            let d = tc[(m, m)];
            let half = (a - d) * 0.5;
            let lam = (a + d) * 0.5 + (half * half + b * c).sqrt();
            let mu = lam - d;
            let r = (mu.norm_sqr() + c.norm_sqr()).sqrt();
            let cg = mu / r;
            let sg = c / r;

            // Rows m-1, m of columns m-1.. get G; G = [[cg*, sg], [-sg, cg]].
            for col in (m - 1)..n {
                let x = tc[(m - 1, col)];
                let y = tc[(m, col)];
                tc[(m - 1, col)] = cg.conj() * x + sg.conj() * y;
                tc[(m, col)] = -sg * x + cg * y;
            }
            // Columns m-1, m of rows ..=m get G^H.
            for row in 0..=m {
                let x = tc[(row, m - 1)];
                let y = tc[(row, m)];
                tc[(row, m - 1)] = x * cg + y * sg;
                tc[(row, m)] = -x * sg.conj() + y * cg.conj();
            }
            for row in 0..n {
                let x = zc[(row, m - 1)];
                let y = zc[(row, m)];
                zc[(row, m - 1)] = x * cg + y * sg;
                zc[(row, m)] = -x * sg.conj() + y * cg.conj();
            }
        }
        tc[(m, m - 1)] = Complex64::ZERO;
    }
    (zc, tc)
}

/// Square root of an upper triangular matrix by the classic superdiagonal
/// recurrence, principal branch on the diagonal.
fn sqrt_upper_triangular(t: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = t.nrows();
    let scale = t.norm();
    let mut u = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        u[(j, j)] = t[(j, j)].sqrt();
        for i in (0..j).rev() {
            let mut acc = Complex64::ZERO;
            for k in (i + 1)..j {
                acc += u[(i, k)] * u[(k, j)];
            }
            let num = t[(i, j)] - acc;
            let den = u[(i, i)] + u[(j, j)];
            if den.norm() == 0.0 {
                if num.norm() <= f64::EPSILON * scale {
                    u[(i, j)] = Complex64::ZERO;
                } else {
                    return Err(Error::NumericFailure(
                        "square root does not exist: defective zero eigenvalue pair".into(),
                    ));
                }
            } else {
                u[(i, j)] = num / den;
            }
        }
    }
    Ok(u)
}

fn snap_to_real(xc: &DMatrix<Complex64>) -> Result<Matrix> {
    let norm = xc.norm();
    let im_norm = xc.map(|z| z.im).norm();
    if im_norm > REAL_SNAP_TOL * norm {
        return Err(Error::NumericFailure(format!(
            "square root of real input has imaginary residue {im_norm:e}"
        )));
    }
    Matrix::from_real(xc.map(|z| z.re))
}
