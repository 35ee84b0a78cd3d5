//! Truncated number-basis representation.
//!
//! The lowering operator is the bidiagonal matrix with `sqrt(n)` on the
//! superdiagonal; everything else follows from it: the number operator is
//! its normal product, drift (displacement) operators are matrix
//! exponentials of `alpha A† - conj(alpha) A`, and the group law and
//! commutation identities become finite-dimensional residual checks.
//!
//! Truncation artifacts concentrate in the top rows and columns, so every
//! identity here is evaluated on the lower half block only, and callers
//! must size `dim` so the states involved carry negligible weight beyond
//! `dim/2` (the guard is `dim >= 4 |alpha|^2 + 16`, from the Poisson tail).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{KitError, Result};

pub type FockMatrix = DMatrix<C64>;
pub type FockVector = DVector<C64>;

/// Smallest truncation dimension trusted for a drift of label `alpha`.
pub fn required_dim(alpha: C64) -> usize {
    (4.0 * alpha.norm_sqr() + 16.0).ceil() as usize
}

/// Ladder matrices `(A, A†, N)` in the truncated number basis.
///
/// `A` has `sqrt(n)` at row `n-1`, column `n`; `A†` is its adjoint; `N` is
/// the exact integer diagonal `0..dim-1`. (The float product `A† A` matches
/// `N` only to rounding, since `fl(sqrt(n))^2` is not exactly `n`.)
pub fn ladder_matrices(dim: usize) -> Result<(FockMatrix, FockMatrix, FockMatrix)> {
    if dim < 2 {
        return Err(KitError::FockDim { dim, needed: 2 });
    }
    let mut a = FockMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let adag = a.adjoint();
    let n_op = FockMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            C64::new(r as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok((a, adag, n_op))
}

/// Drift operator `D(alpha) = exp(alpha A† - conj(alpha) A)` on the
/// truncated space, by scaling-and-squaring matrix exponential of the
/// skew-Hermitian generator. Unitary on the well-converged lower block.
pub fn drift_matrix(alpha: C64, dim: usize) -> Result<FockMatrix> {
    let needed = required_dim(alpha).max(2);
    if dim < needed {
        return Err(KitError::FockDim { dim, needed });
    }
    Ok(drift_matrix_unchecked(alpha, dim))
}

pub(crate) fn drift_matrix_unchecked(alpha: C64, dim: usize) -> FockMatrix {
    let (a, adag, _) = ladder_matrices(dim.max(2)).expect("dim >= 2");
    (adag * alpha - a * alpha.conj()).exp()
}

/// Number-basis coefficients of the coherent state,
/// `c_n = alpha^n / sqrt(n!) * exp(-|alpha|^2 / 2)`, computed stably by
/// the multiplicative recurrence `c_n = c_{n-1} * alpha / sqrt(n)`.
pub fn coherent_coefficients(alpha: C64, dim: usize) -> FockVector {
    let mut coeffs = FockVector::zeros(dim);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    coeffs[0] = c;
    for n in 1..dim {
        c *= alpha / (n as f64).sqrt();
        coeffs[n] = c;
    }
    coeffs
}

/// Frobenius norm of the lower half block (rows and columns `0..dim/2`).
fn lower_block_norm(m: &FockMatrix) -> f64 {
    let half = m.nrows() / 2;
    let mut acc = 0.0;
    for r in 0..half {
        for c in 0..half {
            acc += m[(r, c)].norm_sqr();
        }
    }
    acc.sqrt()
}

/// Residual of `lhs = rhs` on the lower half block, relative to the block
/// norm of `rhs` when that exceeds 1.
fn block_residual(lhs: &FockMatrix, rhs: &FockMatrix) -> f64 {
    let diff = lhs - rhs;
    lower_block_norm(&diff) / lower_block_norm(rhs).max(1.0)
}

/// Group-law residual `|| D(alpha) D(beta) - exp((alpha conj(beta) -
/// conj(alpha) beta)/2) D(alpha + beta) ||` on the lower half block.
pub fn group_law_check(alpha: C64, beta: C64, dim: usize) -> Result<f64> {
    let worst = alpha.norm() + beta.norm();
    let needed = required_dim(C64::new(worst, 0.0)).max(2);
    if dim < needed {
        return Err(KitError::FockDim { dim, needed });
    }
    let d_a = drift_matrix_unchecked(alpha, dim);
    let d_b = drift_matrix_unchecked(beta, dim);
    let d_ab = drift_matrix_unchecked(alpha + beta, dim);
    let phase = ((alpha * beta.conj() - alpha.conj() * beta) / 2.0).exp();
    let lhs = d_a * d_b;
    let rhs = d_ab * phase;
    Ok(block_residual(&lhs, &rhs))
}

/// Residual of `[A, D(alpha)] = alpha D(alpha)` on the lower half block.
pub fn commutator_drift_check(alpha: C64, dim: usize) -> Result<f64> {
    let d = drift_matrix(alpha, dim)?;
    let (a, _, _) = ladder_matrices(dim)?;
    let lhs = &a * &d - &d * &a;
    let rhs = d * alpha;
    Ok(block_residual(&lhs, &rhs))
}

/// Residual of the product formula `exp(R) exp(S) = exp(R+S) exp([R,S]/2)`
/// for `R = r0 A + r1 A†` and `S = s0 A + s1 A†`, where the commutator is
/// the scalar `(r0 s1 - r1 s0) I`. Relative lower-half-block norm.
pub fn hbc_check(r: (C64, C64), s: (C64, C64), dim: usize) -> Result<f64> {
    let (a, adag, _) = ladder_matrices(dim)?;
    let op_r = &a * r.0 + &adag * r.1;
    let op_s = &a * s.0 + &adag * s.1;
    let scalar = r.0 * s.1 - r.1 * s.0;
    let lhs = op_r.clone().exp() * op_s.clone().exp();
    let rhs = (op_r + op_s).exp() * (scalar / 2.0).exp();
    Ok(block_residual(&lhs, &rhs))
}
