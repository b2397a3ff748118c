//! The Minkowski metric matrix and the Minkowski adjoint.
//!
//! `G = diag(1, -1, ..., -1)` is real, Hermitian and involutory (`G^2 = I`).
//! The adjoint of `A` (m rows, n columns) with respect to the induced inner
//! product is `A~ = G_n A* G_m`, which flips the sign of every entry of `A*`
//! that couples the timelike first coordinate to a spacelike one.

use crate::matrix::{cx, Matrix};

/// The order-`n` Minkowski metric matrix `diag(1, -1, ..., -1)`.
pub fn minkowski_metric(n: usize) -> Matrix {
    assert!(n >= 1, "metric order must be at least 1");
    Matrix::from_fn(n, n, |i, j| {
        if i != j {
            cx(0.0, 0.0)
        } else if i == 0 {
            cx(1.0, 0.0)
        } else {
            cx(-1.0, 0.0)
        }
    })
}

#[inline]
fn sign(i: usize) -> f64 {
    if i == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The Minkowski adjoint `A~ = G_n A* G_m`.
///
/// Computed entrywise: `(A~)[i,j] = s_i s_j conj(A[j,i])` with `s_0 = 1` and
/// `s_i = -1` otherwise, so no metric matrices are materialized.
pub fn minkowski_adjoint(a: &Matrix) -> Matrix {
    Matrix::from_fn(a.ncols(), a.nrows(), |i, j| {
        a[(j, i)].conj() * (sign(i) * sign(j))
    })
}
