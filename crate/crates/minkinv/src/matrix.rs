//! Dense complex matrices and the small set of shared numerical utilities.
//!
//! The crate works directly on [`nalgebra`] dynamic matrices over `Complex64`;
//! everything here is convenience on top: row-major constructors, relative
//! Frobenius differences, guarded inversion, powers and the matrix
//! exponential.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// The universal operand: a dense complex matrix.
pub type Matrix = DMatrix<Complex64>;

/// A dense complex column vector.
pub type Vector = DVector<Complex64>;

/// Shorthand complex constructor.
#[inline]
pub fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Build a matrix from row-major complex entries.
///
/// Panics if `entries.len() != rows * cols`; file-format readers validate
/// counts before calling this.
pub fn from_rows(rows: usize, cols: usize, entries: &[Complex64]) -> Matrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
    DMatrix::from_fn(rows, cols, |i, j| entries[i * cols + j])
}

/// Build a matrix from row-major real entries.
pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Matrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
    DMatrix::from_fn(rows, cols, |i, j| cx(entries[i * cols + j], 0.0))
}

/// Real column vector.
pub fn vector_from_real(entries: &[f64]) -> Vector {
    DVector::from_iterator(entries.len(), entries.iter().map(|&x| cx(x, 0.0)))
}

/// True when every entry is finite (no NaN or infinity in either component).
pub fn is_finite(a: &Matrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Relative Frobenius residual `‖a - b‖_F / max(1, ‖b‖_F)`.
///
/// The `max(1, ·)` keeps the scale stable near zero targets.
pub fn rel_diff(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).norm() / 1.0_f64.max(b.norm())
}

/// Entrywise maximum absolute difference.
pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `a^k` by repeated multiplication; `a^0 = I`.
pub fn power(a: &Matrix, k: usize) -> Matrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "power requires a square matrix");
    let mut acc = Matrix::identity(n, n);
    for _ in 0..k {
        acc = &acc * a;
    }
    acc
}

/// 2-norm condition estimate `sigma_max / sigma_min`; infinite when
/// `sigma_min` underflows to zero.
pub fn cond2(a: &Matrix) -> f64 {
    if a.is_empty() {
        return 1.0;
    }
    let sv = crate::svd::singular_values(a);
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        max / min
    } else if max == 0.0 {
        f64::INFINITY
    } else {
        f64::INFINITY
    }
}

/// Inverse guarded by the `cond_max` ceiling; `factor` names the matrix in the
/// error so callers can tell which formula ingredient degenerated.
pub fn guarded_inverse(a: &Matrix, factor: &'static str, cond_max: f64) -> Result<Matrix> {
    if a.is_empty() {
        return Ok(a.clone());
    }
    let cond = cond2(a);
    if !cond.is_finite() || cond > cond_max {
        return Err(Error::NearSingularFactor {
            factor,
            cond,
            max: cond_max,
        });
    }
    a.clone().try_inverse().ok_or(Error::NearSingularFactor {
        factor,
        cond: f64::INFINITY,
        max: cond_max,
    })
}

/// Horizontal concatenation `[a | b]`.
pub fn hcat(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.nrows(), b.nrows(), "hcat requires equal row counts");
    let mut out = Matrix::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((0, a.ncols()), (b.nrows(), b.ncols()))
        .copy_from(b);
    out
}

/// Vertical concatenation `[a; b]`.
pub fn vcat(a: &Matrix, b: &Matrix) -> Matrix {
    assert_eq!(a.ncols(), b.ncols(), "vcat requires equal column counts");
    let mut out = Matrix::zeros(a.nrows() + b.nrows(), a.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((a.nrows(), 0), (b.nrows(), b.ncols()))
        .copy_from(b);
    out
}

/// Assemble `[tl tr; bl br]` from four conformable blocks.
pub fn block2x2(tl: &Matrix, tr: &Matrix, bl: &Matrix, br: &Matrix) -> Matrix {
    vcat(&hcat(tl, tr), &hcat(bl, br))
}

/// Matrix exponential by Padé(13) scaling and squaring.
///
/// Standard Higham constants; accurate to machine precision for the moderate
/// norms the quadrature feeds in.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return a.clone();
    }

    // 1-norm (max column sum of moduli)
    let norm = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);

    const THETA13: f64 = 5.371920351148152;
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.map(|z| z / 2f64.powi(s));

    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];

    let b = |i: usize| cx(B[i], 0.0);
    let id = Matrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);

    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .expect("Pade denominator of expm is singular");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Eigenvalues of a square complex matrix via the Schur form.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "eigenvalues require a square matrix");
    if n == 0 {
        return Ok(Vec::new());
    }
    a.clone()
        .try_schur(f64::EPSILON, 100 * n.max(10))
        .and_then(|s| s.eigenvalues())
        .map(|v| v.iter().cloned().collect())
        .ok_or(Error::EigenFailure)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_zero_is_identity() {
        let a = from_real_rows(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(power(&a, 0), Matrix::identity(2, 2));
        assert!(rel_diff(&power(&a, 2), &(&a * &a)) < 1e-15);
    }

    #[test]
    fn expm_of_zero_is_identity() {
        let z = Matrix::zeros(3, 3);
        assert!(rel_diff(&expm(&z), &Matrix::identity(3, 3)) < 1e-15);
    }

    #[test]
    fn expm_matches_scalar_exponential_on_diagonals() {
        let a = Matrix::from_diagonal(&Vector::from_vec(vec![cx(-1.5, 0.0), cx(0.25, 2.0)]));
        let e = expm(&a);
        assert!((e[(0, 0)] - cx(-1.5, 0.0).exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - cx(0.25, 2.0).exp()).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-15 && e[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn expm_additivity_for_commuting_arguments() {
        // exp(A) exp(A) = exp(2A) for any A
        let a = from_real_rows(3, 3, &[0.2, 1.0, 0.0, -0.3, 0.1, 0.5, 0.0, 0.7, -0.4]);
        let lhs = expm(&a) * expm(&a);
        let rhs = expm(&a.map(|z| z * 2.0));
        assert!(rel_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn eigenvalues_of_triangular_matrix() {
        let a = from_real_rows(3, 3, &[2.0, 5.0, 1.0, 0.0, -1.0, 4.0, 0.0, 0.0, 3.0]);
        let mut eigs = eigenvalues(&a).unwrap();
        eigs.sort_by(|p, q| p.re.partial_cmp(&q.re).unwrap());
        assert!((eigs[0] - cx(-1.0, 0.0)).norm() < 1e-10);
        assert!((eigs[1] - cx(2.0, 0.0)).norm() < 1e-10);
        assert!((eigs[2] - cx(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn guarded_inverse_refuses_singular_input() {
        let a = from_real_rows(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        match guarded_inverse(&a, "test", 1e12) {
            Err(Error::NearSingularFactor { factor: "test", .. }) => {}
            other => panic!("expected NearSingularFactor, got {other:?}"),
        }
    }

    #[test]
    fn concat_blocks() {
        let a = from_real_rows(2, 1, &[1.0, 2.0]);
        let b = from_real_rows(2, 2, &[3.0, 4.0, 5.0, 6.0]);
        let h = hcat(&a, &b);
        assert_eq!(h.nrows(), 2);
        assert_eq!(h.ncols(), 3);
        assert_eq!(h[(1, 2)], cx(6.0, 0.0));
    }
}
