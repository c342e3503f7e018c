//! Seeded random matrix generators.
//!
//! All randomness flows through an explicit seed (ChaCha stream), so every
//! generator is deterministic and safe to call concurrently.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub(crate) fn complex_gaussian(
    rows: usize,
    cols: usize,
    rng: &mut ChaCha8Rng,
) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    })
}

/// Haar-ish orthogonal matrix: QR of a Gaussian sample with the sign of the
/// R diagonal folded into Q so the map from random bits is unambiguous.
pub(crate) fn haar_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = gaussian(n, n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// Random `n x n` orthogonal matrix, deterministic in `seed`.
pub fn random_orthogonal(n: usize, seed: u64) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::EmptyMatrix { rows: n, cols: n });
    }
    let mut rng = rng_from_seed(seed);
    let q = Matrix::from_real(haar_orthogonal(n, &mut rng))?;
    let residual = q
        .transpose()
        .matmul(&q)?
        .sub(&Matrix::identity(n)?)?
        .frobenius_norm();
    if residual > 1e-12 * (n as f64).sqrt() {
        return Err(Error::NumericFailure(format!(
            "orthogonal factor residual {residual:e} above bound"
        )));
    }
    Ok(q)
}
