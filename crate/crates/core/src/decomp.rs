//! Matrix splitting constructions.
//!
//! Every variant expresses an input `M` through a single factor `A`:
//!
//! * difference form `M = A - A^{-T}` (nonsingular, pseudoinverse, and
//!   unit-fill flavors),
//! * conjugate difference `M = A - (A^{-1})^*` for complex input,
//! * scaled sum `M = c (A + A^{-T})`,
//! * the non-transpose analogs `M = A - A^{-1}` and `M = c (A + A^{-1})`.
//!
//! The singular-value shift maps `d` to the positive root `e` of
//! `e - 1/e = d` (difference forms) or `e + 1/e = d` (sum forms, feasible
//! only for `d >= 2`). Each constructor verifies its own reconstruction
//! residual before returning.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{hadamard, Matrix, ScalarKind};
use crate::sqrtm::{eigenvalues, principal_matrix_sqrt};
use crate::svd::{compute_svd, inverse, pseudoinverse, SvdFactors};
use crate::tol::ToleranceConfig;

/// Relative slack below the exact feasibility boundary `d = 2` of the sum
/// form; values in `[2(1 - slack), 2)` are clamped instead of rejected.
const SUM_FEASIBILITY_SLACK: f64 = 1e-12;

/// Which splitting was constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    DiffNonsingular,
    DiffPseudoinverse,
    DiffUnitFill,
    DiffConjugate,
    SumScaled,
    NonTransposeDiff,
    NonTransposeSum,
}

impl Variant {
    pub const ALL: [Variant; 7] = [
        Variant::DiffNonsingular,
        Variant::DiffPseudoinverse,
        Variant::DiffUnitFill,
        Variant::DiffConjugate,
        Variant::SumScaled,
        Variant::NonTransposeDiff,
        Variant::NonTransposeSum,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Variant::DiffNonsingular => "DiffNonsingular",
            Variant::DiffPseudoinverse => "DiffPseudoinverse",
            Variant::DiffUnitFill => "DiffUnitFill",
            Variant::DiffConjugate => "DiffConjugate",
            Variant::SumScaled => "SumScaled",
            Variant::NonTransposeDiff => "NonTransposeDiff",
            Variant::NonTransposeSum => "NonTransposeSum",
        }
    }

    /// Command-line name of the variant.
    pub fn cli_name(&self) -> &'static str {
        match self {
            Variant::DiffNonsingular => "diff",
            Variant::DiffPseudoinverse => "diff-pinv",
            Variant::DiffUnitFill => "diff-unitfill",
            Variant::DiffConjugate => "diff-complex",
            Variant::SumScaled => "sum",
            Variant::NonTransposeDiff => "nt-diff",
            Variant::NonTransposeSum => "nt-sum",
        }
    }

    pub fn from_cli_name(s: &str) -> Option<Variant> {
        Variant::ALL.iter().copied().find(|v| v.cli_name() == s)
    }

    /// Sum variants carry a scale constant and report it.
    pub fn is_sum(&self) -> bool {
        matches!(self, Variant::SumScaled | Variant::NonTransposeSum)
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of a decomposition: the factor `A` plus diagnostics. Immutable
/// after construction; the reconstruction residual is verified to be within
/// tolerance before a value of this type exists.
#[derive(Clone, Debug)]
pub struct Decomposition {
    variant: Variant,
    a: Matrix,
    scale_c: f64,
    effective_rank: usize,
    sigma_min: f64,
    residual_rel: f64,
}

impl Decomposition {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// The constructed factor.
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    /// Scale constant; 1 for all difference variants.
    pub fn scale_c(&self) -> f64 {
        self.scale_c
    }

    /// Effective rank of the input at the rank tolerance.
    pub fn effective_rank(&self) -> usize {
        self.effective_rank
    }

    /// Smallest singular value of the factor `A`.
    pub fn sigma_min(&self) -> f64 {
        self.sigma_min
    }

    /// `|| reconstruct(self) - M ||_F / max(||M||_F, 1)` at construction.
    pub fn residual_rel(&self) -> f64 {
        self.residual_rel
    }
}

/// Positive root of `e - 1/e = d`: `e = (d + sqrt(d^2 + 4)) / 2 >= 1`.
pub fn spectral_shift(d: f64) -> Result<f64> {
    if !d.is_finite() || d < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "spectral_shift requires finite d >= 0, got {d}"
        )));
    }
    Ok(shift_diff(d))
}

fn shift_diff(d: f64) -> f64 {
    // hypot form avoids overflow of d^2 for very large d.
    0.5 * d + (0.5 * d).hypot(1.0)
}

/// Larger root of `e + 1/e = d`: `e = (d + sqrt(d^2 - 4)) / 2 >= 1`.
/// Real solutions exist only for `d >= 2`.
pub fn spectral_shift_sum(d: f64) -> Result<f64> {
    if !d.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "spectral_shift_sum requires finite d, got {d}"
        )));
    }
    if d < 2.0 * (1.0 - SUM_FEASIBILITY_SLACK) {
        return Err(Error::InfeasibleSum { d });
    }
    // (d-2)(d+2) is more accurate than d^2 - 4 near the boundary.
    let disc = ((d - 2.0).max(0.0)) * (d + 2.0);
    Ok(0.5 * (d + disc.sqrt()))
}

fn require_real(m: &Matrix, context: &'static str) -> Result<()> {
    if m.kind() != ScalarKind::Real {
        return Err(Error::InvalidArgument(format!(
            "{context} is defined for real input; use the diff-complex variant for complex matrices"
        )));
    }
    Ok(())
}

fn require_square(m: &Matrix, context: &'static str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
            context,
        });
    }
    Ok(())
}

fn require_nonsingular(f: &SvdFactors, context: &str) -> Result<()> {
    if f.sigma_min() <= f.rank_tol() {
        return Err(Error::RankDeficient {
            sigma_min: f.sigma_min(),
            context: context.to_string(),
        });
    }
    Ok(())
}

/// Difference form `M = A - A^{-T}` for real nonsingular square `M`.
pub fn decompose_diff(m: &Matrix, tol: &ToleranceConfig) -> Result<Decomposition> {
    require_real(m, "the difference form")?;
    require_square(m, "decompose_diff")?;
    let f = compute_svd(m, tol)?;
    require_nonsingular(
        &f,
        "the difference form needs a nonsingular matrix; \
         use the diff-pinv (pseudoinverse) or diff-unitfill (unit fill) variant",
    )?;
    let a = f.with_mapped_values(shift_diff);
    finish(Variant::DiffNonsingular, a, 1.0, f.effective_rank(), m, tol)
}

/// Pseudoinverse difference `M = A - (A^+)^T` for real `M` of any shape and
/// rank; `A` keeps the rank of `M`.
pub fn decompose_diff_pinv(m: &Matrix, tol: &ToleranceConfig) -> Result<Decomposition> {
    require_real(m, "the pseudoinverse difference form")?;
    let f = compute_svd(m, tol)?;
    let r = f.effective_rank();
    let shifted: Vec<f64> = f.singular_values()[..r]
        .iter()
        .map(|&s| shift_diff(s))
        .collect();
    let a = f.rebuild(&shifted, r);
    finish(Variant::DiffPseudoinverse, a, 1.0, r, m, tol)
}

/// Unit-fill difference for real square (possibly singular) `M`: singular
/// values below tolerance are replaced by 1 in `A`, which makes `A`
/// nonsingular while the unit values cancel in `A - A^{-T}`.
pub fn decompose_diff_unitfill(m: &Matrix, tol: &ToleranceConfig) -> Result<Decomposition> {
    require_real(m, "the unit-fill difference form")?;
    require_square(m, "decompose_diff_unitfill")?;
    let f = compute_svd(m, tol)?;
    let filled: Vec<f64> = f
        .singular_values()
        .iter()
        .map(|&s| if s > f.rank_tol() { shift_diff(s) } else { 1.0 })
        .collect();
    let a = f.rebuild(&filled, filled.len());
    finish(Variant::DiffUnitFill, a, 1.0, f.effective_rank(), m, tol)
}

/// Conjugate-transpose difference `M = A - (A^{-1})^*` for complex square
/// nonsingular `M`. Real input is promoted.
pub fn decompose_diff_complex(m: &Matrix, tol: &ToleranceConfig) -> Result<Decomposition> {
    require_square(m, "decompose_diff_complex")?;
    let mc = match m.kind() {
        ScalarKind::Complex => m.clone(),
        ScalarKind::Real => m.promote(),
    };
    let f = compute_svd(&mc, tol)?;
    require_nonsingular(&f, "the conjugate difference form needs a nonsingular matrix")?;
    let a = f.with_mapped_values(shift_diff);
    finish(Variant::DiffConjugate, a, 1.0, f.effective_rank(), &mc, tol)
}

/// Scaled sum `M = c (A + A^{-T})` for real square nonsingular `M`, with
/// `c = sigma_min / 2` so that `M / c` has smallest singular value exactly 2.
pub fn decompose_sum(m: &Matrix, tol: &ToleranceConfig) -> Result<Decomposition> {
    require_real(m, "the sum form")?;
    require_square(m, "decompose_sum")?;
    let f = compute_svd(m, tol)?;
    require_nonsingular(
        &f,
        "the sum form needs a nonsingular matrix (unit singular values cannot cancel in a sum)",
    )?;
    let c = 0.5 * f.sigma_min();
    let shifted: Result<Vec<f64>> = f
        .singular_values()
        .iter()
        .map(|&s| spectral_shift_sum(s / c))
        .collect();
    let a = f.rebuild(&shifted?, f.singular_values().len());
    finish(Variant::SumScaled, a, c, f.effective_rank(), m, tol)
}

/// Branch-cut guard for the non-transpose forms: each eigenvalue `lambda`
/// of the (scaled) input maps to `lambda^2 + offset`, which must stay clear
/// of the negative real axis for the principal square root to exist.
fn check_shifted_spectrum(
    eigs: &[Complex64],
    offset: f64,
    margin: f64,
    context: &str,
) -> Result<()> {
    let mapped: Vec<Complex64> = eigs.iter().map(|&l| l * l + offset).collect();
    let radius = mapped.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let guard = margin * radius.max(1.0);
    for (&lambda, &mu) in eigs.iter().zip(mapped.iter()) {
        if mu.re < -guard && mu.im.abs() <= guard {
            return Err(Error::BranchCut {
                eigenvalue: lambda,
                context: format!(
                    "of the input maps to {mu} on the negative real axis under \
                     x^2 {} {}; {context}",
                    if offset >= 0.0 { "+" } else { "-" },
                    offset.abs()
                ),
            });
        }
    }
    Ok(())
}

/// Non-transpose difference `M = A - A^{-1}` for real square `M` (singular
/// allowed). `A = (M + sqrt(M^2 + 4I)) / 2`; fails with a branch-cut error
/// when `M` has an eigenvalue `x + iy` with `x ~ 0` and `|y| >= 2`.
pub fn decompose_nontranspose_diff(m: &Matrix, tol: &ToleranceConfig) -> Result<Decomposition> {
    require_real(m, "the non-transpose difference form")?;
    require_square(m, "decompose_nontranspose_diff")?;
    let eigs = eigenvalues(m)?;
    let radius = eigs.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let guard = tol.sqrt_axis_margin * radius.max(1.0);
    for &lambda in &eigs {
        if lambda.re.abs() <= guard && lambda.im.abs() >= 2.0 - guard {
            return Err(Error::BranchCut {
                eigenvalue: lambda,
                context: "of the input is (numerically) purely imaginary with magnitude >= 2, \
                          so M^2 + 4I touches the negative real axis and the non-transpose \
                          difference form is undefined"
                    .into(),
            });
        }
    }
    check_shifted_spectrum(
        &eigs,
        4.0,
        tol.sqrt_axis_margin,
        "the non-transpose difference form is undefined",
    )?;

    let n = m.rows();
    let s = m
        .matmul(m)?
        .add(&Matrix::identity(n)?.scale(4.0))?;
    let x = principal_matrix_sqrt(&s, tol)?;
    let a = m.add(&x)?.scale(0.5);

    // A(A - M) = I certifies that A^{-1} = A - M.
    let identity_residual = a
        .matmul(&a.sub(m)?)?
        .sub(&Matrix::identity(n)?)?
        .frobenius_norm();
    if identity_residual > tol.residual_rel_tol * n as f64 {
        return Err(Error::NumericFailure(format!(
            "non-transpose identity residual {identity_residual:e} above tolerance"
        )));
    }
    let rank = compute_svd(m, tol)?.effective_rank();
    finish(Variant::NonTransposeDiff, a, 1.0, rank, m, tol)
}

/// Non-transpose sum `M = c (A + A^{-1})` for real square nonsingular `M`.
/// With `M' = M / c`, `A = (M' + sqrt(M'^2 - 4I)) / 2`; when `c` is omitted
/// the scale `sigma_min / 2` of the transpose sum is attempted.
pub fn decompose_nontranspose_sum(
    m: &Matrix,
    c: Option<f64>,
    tol: &ToleranceConfig,
) -> Result<Decomposition> {
    require_real(m, "the non-transpose sum form")?;
    require_square(m, "decompose_nontranspose_sum")?;
    let f = compute_svd(m, tol)?;
    require_nonsingular(&f, "the non-transpose sum form needs a nonsingular matrix")?;
    let c = match c {
        Some(c) => {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "scale c must be strictly positive and finite, got {c}"
                )));
            }
            c
        }
        None => 0.5 * f.sigma_min(),
    };
    let scaled = m.scale(1.0 / c);
    let eigs = eigenvalues(&scaled)?;
    check_shifted_spectrum(
        &eigs,
        -4.0,
        tol.sqrt_axis_margin,
        "the non-transpose sum form is undefined for this scale; supply a different c",
    )?;

    let n = m.rows();
    let s = scaled
        .matmul(&scaled)?
        .sub(&Matrix::identity(n)?.scale(4.0))?;
    let x = principal_matrix_sqrt(&s, tol)?;
    let a = scaled.add(&x)?.scale(0.5);

    // A(A - M') = -I certifies that A^{-1} = M' - A.
    let identity_residual = a
        .matmul(&a.sub(&scaled)?)?
        .add(&Matrix::identity(n)?)?
        .frobenius_norm();
    if identity_residual > tol.residual_rel_tol * n as f64 {
        return Err(Error::NumericFailure(format!(
            "non-transpose sum identity residual {identity_residual:e} above tolerance"
        )));
    }
    finish(Variant::NonTransposeSum, a, c, f.effective_rank(), m, tol)
}

/// Relative gain array `G o (G^{-1})^T` (Hadamard product). Rows and
/// columns of the result sum to 1 for any nonsingular `G`.
///
/// The RGA is exactly invariant under diagonal row/column scalings, so the
/// computation runs on a Ruiz-balanced copy of `G`: the scalings cancel
/// algebraically, while the balanced inverse avoids the conditioning they
/// would otherwise inject. Balancing factors are powers of two, so the
/// balanced copy is formed without rounding.
pub fn rga(g: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    require_square(g, "rga")?;
    let gc = g.to_complex();
    let n = g.rows();
    let (r, c) = balance_scalings(&gc);
    let balanced = nalgebra::DMatrix::from_fn(n, n, |i, j| gc[(i, j)] * r[i] * c[j]);
    let balanced = match g.kind() {
        ScalarKind::Real => Matrix::from_real(balanced.map(|z| z.re))?,
        ScalarKind::Complex => Matrix::from_complex(balanced)?,
    };
    let f = compute_svd(&balanced, tol)?;
    require_nonsingular(&f, "the relative gain array needs a nonsingular matrix")?;
    let inv_t = inverse(&f)?.transpose();
    hadamard(&balanced, &inv_t)
}

/// Ruiz-style equilibration: alternately normalize row and column maxima,
/// rounding every factor to a power of two so scaling is exact.
fn balance_scalings(g: &nalgebra::DMatrix<Complex64>) -> (Vec<f64>, Vec<f64>) {
    let n = g.nrows();
    let mut r = vec![1.0f64; n];
    let mut c = vec![1.0f64; n];
    let pow2_inv_sqrt = |mx: f64| -> f64 {
        if mx > 0.0 && mx.is_finite() {
            (-(mx.log2() / 2.0).round()).exp2()
        } else {
            1.0
        }
    };
    for _ in 0..6 {
        for i in 0..n {
            let mx = (0..n)
                .map(|j| (g[(i, j)] * r[i] * c[j]).norm())
                .fold(0.0f64, f64::max);
            r[i] *= pow2_inv_sqrt(mx);
        }
        for j in 0..n {
            let mx = (0..n)
                .map(|i| (g[(i, j)] * r[i] * c[j]).norm())
                .fold(0.0f64, f64::max);
            c[j] *= pow2_inv_sqrt(mx);
        }
    }
    (r, c)
}

/// Evaluate the right-hand side of the variant's defining identity from the
/// stored factor, e.g. `A - A^{-T}` for the plain difference form.
pub fn reconstruct(dec: &Decomposition, tol: &ToleranceConfig) -> Result<Matrix> {
    let f = compute_svd(&dec.a, tol)?;
    reconstruct_from_factors(dec.variant, &dec.a, &f, dec.scale_c)
}

fn reconstruct_from_factors(
    variant: Variant,
    a: &Matrix,
    f: &SvdFactors,
    scale_c: f64,
) -> Result<Matrix> {
    match variant {
        Variant::DiffNonsingular | Variant::DiffUnitFill => a.sub(&inverse(f)?.transpose()),
        Variant::DiffPseudoinverse => a.sub(&pseudoinverse(f).transpose()),
        Variant::DiffConjugate => a.sub(&inverse(f)?.adjoint()),
        Variant::SumScaled => Ok(a.add(&inverse(f)?.transpose())?.scale(scale_c)),
        Variant::NonTransposeDiff => a.sub(&inverse(f)?),
        Variant::NonTransposeSum => Ok(a.add(&inverse(f)?)?.scale(scale_c)),
    }
}

fn finish(
    variant: Variant,
    a: Matrix,
    scale_c: f64,
    effective_rank: usize,
    m: &Matrix,
    tol: &ToleranceConfig,
) -> Result<Decomposition> {
    let f = compute_svd(&a, tol)?;
    let recon = reconstruct_from_factors(variant, &a, &f, scale_c)?;
    let residual_rel = recon.sub(m)?.frobenius_norm() / m.frobenius_norm().max(1.0);
    if residual_rel > tol.residual_rel_tol {
        return Err(Error::NumericFailure(format!(
            "{variant} reconstruction residual {residual_rel:e} above tolerance \
             {:e}",
            tol.residual_rel_tol
        )));
    }
    Ok(Decomposition {
        variant,
        a,
        scale_c,
        effective_rank,
        sigma_min: f.sigma_min(),
        residual_rel,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const PHI: f64 = 1.618033988749895;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn mat(rows: usize, cols: usize, e: &[f64]) -> Matrix {
        Matrix::from_row_major(rows, cols, e).unwrap()
    }

    #[test]
    fn shift_anchors() {
        assert_eq!(spectral_shift(0.0).unwrap(), 1.0);
        assert_relative_eq!(spectral_shift(1.0).unwrap(), PHI, max_relative = 1e-15);
        assert_relative_eq!(
            spectral_shift(3.0).unwrap(),
            (3.0 + 13f64.sqrt()) / 2.0,
            max_relative = 1e-15
        );
        assert!(spectral_shift(-1.0).is_err());
        assert!(spectral_shift(f64::NAN).is_err());
    }

    #[test]
    fn shift_scalar_identity() {
        for &d in &[0.0, 1e-6, 0.5, 1.0, 3.0, 100.0, 1e8] {
            let e = spectral_shift(d).unwrap();
            assert!(e >= 1.0);
            let lhs = e - 1.0 / e;
            assert!((lhs - d).abs() <= 1e-12 * d.max(1.0), "d = {d}");
        }
    }

    #[test]
    fn shift_sum_anchors() {
        assert_eq!(spectral_shift_sum(2.0).unwrap(), 1.0);
        assert_relative_eq!(
            spectral_shift_sum(4.0).unwrap(),
            2.0 + 3f64.sqrt(),
            max_relative = 1e-15
        );
        assert!(matches!(
            spectral_shift_sum(1.5),
            Err(Error::InfeasibleSum { .. })
        ));
        for &d in &[2.0, 2.0 + 1e-9, 4.0, 77.0, 1e8] {
            let e = spectral_shift_sum(d).unwrap();
            let lhs = e + 1.0 / e;
            assert!((lhs - d).abs() <= 1e-12 * d, "d = {d}");
        }
    }

    #[test]
    fn diff_scalar_case() {
        let dec = decompose_diff(&mat(1, 1, &[3.0]), &tol()).unwrap();
        assert_relative_eq!(
            dec.a().get(0, 0).re,
            (3.0 + 13f64.sqrt()) / 2.0,
            max_relative = 1e-14
        );
        assert_eq!(dec.scale_c(), 1.0);
    }

    #[test]
    fn diff_identity_gives_golden_ratio() {
        let dec = decompose_diff(&Matrix::identity(2).unwrap(), &tol()).unwrap();
        let expect = Matrix::identity(2).unwrap().scale(PHI);
        assert!(dec.a().sub(&expect).unwrap().frobenius_norm() < 1e-13);
    }

    #[test]
    fn diff_rotation_scales_by_phi() {
        let rot = mat(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let dec = decompose_diff(&rot, &tol()).unwrap();
        let expect = rot.scale(PHI);
        assert!(dec.a().sub(&expect).unwrap().frobenius_norm() < 1e-13);
    }

    #[test]
    fn diff_rejects_singular_with_direction() {
        let err = decompose_diff(&mat(2, 2, &[1.0, 0.0, 0.0, 0.0]), &tol()).unwrap_err();
        match err {
            Error::RankDeficient { context, .. } => {
                assert!(context.contains("diff-pinv") && context.contains("diff-unitfill"));
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn pinv_variant_rank_one() {
        let m = mat(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let dec = decompose_diff_pinv(&m, &tol()).unwrap();
        assert_eq!(dec.effective_rank(), 1);
        assert_relative_eq!(dec.a().get(0, 0).re, PHI, max_relative = 1e-14);
        assert!(dec.a().get(1, 1).norm() < 1e-14);
        assert!(dec.residual_rel() < 1e-12);
    }

    #[test]
    fn pinv_variant_rectangular() {
        let m = mat(2, 3, &[2.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let dec = decompose_diff_pinv(&m, &tol()).unwrap();
        assert_relative_eq!(dec.a().get(0, 0).re, 1.0 + 2f64.sqrt(), max_relative = 1e-14);
        let recon = reconstruct(&dec, &tol()).unwrap();
        assert!(recon.sub(&m).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn pinv_variant_zero_matrix() {
        let m = Matrix::zeros(2, 2).unwrap();
        let dec = decompose_diff_pinv(&m, &tol()).unwrap();
        assert_eq!(dec.effective_rank(), 0);
        assert_eq!(dec.a().frobenius_norm(), 0.0);
    }

    #[test]
    fn unitfill_scalar_zero() {
        let dec = decompose_diff_unitfill(&mat(1, 1, &[0.0]), &tol()).unwrap();
        assert_relative_eq!(dec.a().get(0, 0).re.abs(), 1.0, max_relative = 1e-14);
        assert!(dec.residual_rel() < 1e-14);
    }

    #[test]
    fn unitfill_mixed_spectrum() {
        let m = mat(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let dec = decompose_diff_unitfill(&m, &tol()).unwrap();
        assert!(dec.sigma_min() >= 1.0 - 1e-9);
        let recon = reconstruct(&dec, &tol()).unwrap();
        assert!(recon.sub(&m).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn unitfill_zero_matrix_is_orthogonal_factor() {
        let m = Matrix::zeros(3, 3).unwrap();
        let dec = decompose_diff_unitfill(&m, &tol()).unwrap();
        let gram = dec.a().transpose().matmul(dec.a()).unwrap();
        assert!(
            gram.sub(&Matrix::identity(3).unwrap())
                .unwrap()
                .frobenius_norm()
                < 1e-13
        );
        assert!(reconstruct(&dec, &tol()).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn complex_scalar_i() {
        let i = Complex64::new(0.0, 1.0);
        let m = Matrix::from_row_major_complex(1, 1, &[i]).unwrap();
        let dec = decompose_diff_complex(&m, &tol()).unwrap();
        assert!((dec.a().get(0, 0) - i * PHI).norm() < 1e-14);
        let recon = reconstruct(&dec, &tol()).unwrap();
        assert!((recon.get(0, 0) - i).norm() < 1e-13);
    }

    #[test]
    fn sum_twice_identity() {
        let m = Matrix::identity(2).unwrap().scale(2.0);
        let dec = decompose_sum(&m, &tol()).unwrap();
        assert_relative_eq!(dec.scale_c(), 1.0, max_relative = 1e-14);
        assert!(
            dec.a()
                .sub(&Matrix::identity(2).unwrap())
                .unwrap()
                .frobenius_norm()
                < 1e-9
        );
    }

    #[test]
    fn sum_scalar_four() {
        let dec = decompose_sum(&mat(1, 1, &[4.0]), &tol()).unwrap();
        assert_relative_eq!(dec.scale_c(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(dec.a().get(0, 0).re, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn sum_diagonal() {
        let m = mat(2, 2, &[2.0, 0.0, 0.0, 4.0]);
        let dec = decompose_sum(&m, &tol()).unwrap();
        assert_relative_eq!(dec.scale_c(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(dec.a().get(1, 1).re, 2.0 + 3f64.sqrt(), max_relative = 1e-9);
        let recon = reconstruct(&dec, &tol()).unwrap();
        assert!(recon.sub(&m).unwrap().frobenius_norm() < 1e-9 * m.frobenius_norm());
    }

    #[test]
    fn sum_rejects_singular() {
        let err = decompose_sum(&mat(2, 2, &[1.0, 0.0, 0.0, 0.0]), &tol()).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { .. }));
    }

    #[test]
    fn nontranspose_diff_zero() {
        let dec = decompose_nontranspose_diff(&Matrix::zeros(2, 2).unwrap(), &tol()).unwrap();
        assert!(
            dec.a()
                .sub(&Matrix::identity(2).unwrap())
                .unwrap()
                .frobenius_norm()
                < 1e-13
        );
    }

    #[test]
    fn nontranspose_diff_scalar_matches_shift() {
        let dec = decompose_nontranspose_diff(&mat(1, 1, &[3.0]), &tol()).unwrap();
        assert_relative_eq!(
            dec.a().get(0, 0).re,
            (3.0 + 13f64.sqrt()) / 2.0,
            max_relative = 1e-13
        );
    }

    #[test]
    fn nontranspose_diff_branch_cut() {
        let m = mat(2, 2, &[0.0, -5.0, 5.0, 0.0]);
        match decompose_nontranspose_diff(&m, &tol()) {
            Err(Error::BranchCut { eigenvalue, .. }) => {
                assert!(eigenvalue.re.abs() < 1e-12);
                assert!((eigenvalue.im.abs() - 5.0).abs() < 1e-12);
            }
            other => panic!("expected branch cut, got {other:?}"),
        }
    }

    #[test]
    fn nontranspose_sum_scaled_identity() {
        let m = Matrix::identity(2).unwrap().scale(4.0);
        let dec = decompose_nontranspose_sum(&m, Some(1.0), &tol()).unwrap();
        let expect = Matrix::identity(2).unwrap().scale(2.0 + 3f64.sqrt());
        assert!(dec.a().sub(&expect).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn nontranspose_sum_default_scale_matches_transpose_sum_on_spd() {
        let m = mat(2, 2, &[2.0, 0.0, 0.0, 4.0]);
        let dec = decompose_nontranspose_sum(&m, None, &tol()).unwrap();
        assert_relative_eq!(dec.scale_c(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(dec.a().get(0, 0).re, 1.0, epsilon = 1e-9);
        assert_relative_eq!(dec.a().get(1, 1).re, 2.0 + 3f64.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn nontranspose_sum_branch_cut() {
        let m = mat(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        match decompose_nontranspose_sum(&m, Some(1.0), &tol()) {
            Err(Error::BranchCut { context, .. }) => {
                assert!(context.contains("different c"));
            }
            other => panic!("expected branch cut, got {other:?}"),
        }
    }

    #[test]
    fn rga_identity() {
        let g = Matrix::identity(3).unwrap();
        let p = rga(&g, &tol()).unwrap();
        assert!(p.sub(&g).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn rga_two_by_two() {
        let g = mat(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let p = rga(&g, &tol()).unwrap();
        let expect = mat(2, 2, &[-2.0, 3.0, 3.0, -2.0]);
        assert!(p.sub(&expect).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn rga_upper_triangular_is_identity() {
        let g = mat(3, 3, &[2.0, 5.0, -1.0, 0.0, 0.5, 3.0, 0.0, 0.0, -4.0]);
        let p = rga(&g, &tol()).unwrap();
        assert!(
            p.sub(&Matrix::identity(3).unwrap())
                .unwrap()
                .frobenius_norm()
                < 1e-12
        );
    }

    #[test]
    fn rga_rejects_singular() {
        let g = mat(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(rga(&g, &tol()), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn reconstruct_round_trips() {
        let m = mat(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        for dec in [
            decompose_diff(&m, &tol()).unwrap(),
            decompose_diff_unitfill(&m, &tol()).unwrap(),
            decompose_sum(&m, &tol()).unwrap(),
            decompose_nontranspose_sum(&m, None, &tol()).unwrap(),
        ] {
            let recon = reconstruct(&dec, &tol()).unwrap();
            let rel = recon.sub(&m).unwrap().frobenius_norm() / m.frobenius_norm();
            assert!(rel < 1e-9, "{:?}: {rel:e}", dec.variant());
        }
    }
}
