//! Transpose-inverse matrix splitting.
//!
//! Any real square nonsingular matrix `M` can be written as the difference
//! of a matrix and its transpose inverse, `M = A - A^{-T}`, by shifting each
//! singular value `d` of `M` to the positive root of `e - 1/e = d`. This
//! crate implements that construction together with its pseudoinverse,
//! unit-fill, conjugate-transpose, scaled-sum, and non-transpose variants,
//! the relative gain array operator they connect to, and a verification
//! harness for the structural properties of the splitting (reconstruction,
//! generalized double stochasticity, diagonal-scaling invariance,
//! orthonormal-conjugation consistency, symmetric-difference identities).
//!
//! Layout:
//!
//! * [`matrix`], [`svd`], [`sqrtm`], [`random`] — dense linear-algebra
//!   foundation (carrier type, SVD contract, pseudoinverse, principal
//!   matrix square root, seeded orthogonal sampling);
//! * [`decomp`] — the splitting constructions and the RGA;
//! * [`props`] — property checks, random ensembles, report types;
//! * [`io`] — Matrix Market / CSV matrix files and JSON reports.

pub mod decomp;
pub mod error;
pub mod io;
pub mod matrix;
pub mod props;
pub mod random;
pub mod sqrtm;
pub mod svd;
pub mod tol;

pub use decomp::{
    decompose_diff, decompose_diff_complex, decompose_diff_pinv, decompose_diff_unitfill,
    decompose_nontranspose_diff, decompose_nontranspose_sum, decompose_sum, reconstruct, rga,
    spectral_shift, spectral_shift_sum, Decomposition, Variant,
};
pub use error::{Error, Result};
pub use matrix::{frobenius_norm, hadamard, Matrix, ScalarKind};
pub use props::{
    check_doubly_stochastic, check_orthonormal_consistency, check_reconstruction,
    check_rga_scaling_invariance, check_symmetric_identities, generate_ensemble, input_digest,
    run_suite, verify_matrix, CheckEntry, EnsembleKind, EnsembleSpec, VerificationReport,
};
pub use random::random_orthogonal;
pub use sqrtm::principal_matrix_sqrt;
pub use svd::{
    adjoint_inverse, compute_svd, inverse, pseudoinverse, smallest_singular_value,
    transpose_inverse, SvdFactors,
};
pub use tol::ToleranceConfig;
