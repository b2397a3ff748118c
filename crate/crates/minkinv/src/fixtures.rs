//! Built-in reference problems with known inverses.
//!
//! These back the `reproduce` command of the CLI and the regression suite.
//! Values with finite decimal expansions are exact; the rest are stored at
//! five decimals, so comparisons against them belong at absolute tolerance
//! 1e-4.

use crate::matrix::{from_real_rows, vector_from_real, Matrix, Vector};

/// A reference problem: one matrix together with its printed inverses.
pub struct ReferenceProblem {
    /// The 5x5 index-2 matrix all inverses below belong to.
    pub a: Matrix,
    /// Moore-Penrose inverse.
    pub pinv: Matrix,
    /// Drazin inverse.
    pub drazin: Matrix,
    /// DMP inverse `A^D A A^dag`.
    pub dmp: Matrix,
    /// Minkowski inverse.
    pub mink: Matrix,
    /// m-DMP inverse `A^D A A^m`.
    pub mdmp: Matrix,
    /// Dual m-DMP inverse `A^m A A^D`.
    pub dual_mdmp: Matrix,
}

/// The 5x5 rank-2, index-2 reference problem.
///
/// Its six generalized inverses are pairwise different, which is exactly what
/// makes it a good regression target: any route mix-up shows up immediately.
pub fn ref5() -> ReferenceProblem {
    #[rustfmt::skip]
    let a = from_real_rows(5, 5, &[
        1.0, 0.0, 0.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
    ]);
    #[rustfmt::skip]
    let pinv = from_real_rows(5, 5, &[
         0.66667, 0.33333, -0.33333, 0.0, 0.0,
         0.0,     0.0,      0.0,     0.0, 0.0,
         0.0,     0.0,      0.0,     0.0, 0.0,
        -0.33333, 0.33333,  0.66667, 0.0, 0.0,
         0.0,     0.0,      0.0,     0.0, 0.0,
    ]);
    #[rustfmt::skip]
    let drazin = from_real_rows(5, 5, &[
        1.0, 0.0, 0.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
    ]);
    #[rustfmt::skip]
    let dmp = from_real_rows(5, 5, &[
        0.66667, 0.33333, -0.33333, 0.0, 0.0,
        0.66667, 0.33333, -0.33333, 0.0, 0.0,
        0.0,     0.0,      0.0,     0.0, 0.0,
        0.0,     0.0,      0.0,     0.0, 0.0,
        0.0,     0.0,      0.0,     0.0, 0.0,
    ]);
    #[rustfmt::skip]
    let mink = from_real_rows(5, 5, &[
         2.0, -1.0, 1.0, 0.0, 0.0,
         0.0,  0.0, 0.0, 0.0, 0.0,
         0.0,  0.0, 0.0, 0.0, 0.0,
        -1.0,  1.0, 0.0, 0.0, 0.0,
         0.0,  0.0, 0.0, 0.0, 0.0,
    ]);
    #[rustfmt::skip]
    let mdmp = from_real_rows(5, 5, &[
        2.0, -1.0, 1.0, 0.0, 0.0,
        2.0, -1.0, 1.0, 0.0, 0.0,
        0.0,  0.0, 0.0, 0.0, 0.0,
        0.0,  0.0, 0.0, 0.0, 0.0,
        0.0,  0.0, 0.0, 0.0, 0.0,
    ]);
    #[rustfmt::skip]
    let dual_mdmp = from_real_rows(5, 5, &[
        1.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
        0.0, 0.0, 0.0, 0.0, 0.0,
    ]);
    ReferenceProblem {
        a,
        pinv,
        drazin,
        dmp,
        mink,
        mdmp,
        dual_mdmp,
    }
}

/// The solve problem attached to [`ref5`]: right-hand side, complement bases
/// for the condensed Cramer rule, the known solution and the known least-norm
/// minimum.
pub struct SolveProblem {
    pub a: Matrix,
    pub b: Vector,
    /// Columns span `null(A^k)`.
    pub v: Matrix,
    /// Rows annihilate `range(A^k)`.
    pub w: Matrix,
    /// The unique solution of the projected system on `range(A^k)`.
    pub x: Vector,
    /// The attained least-norm minimum.
    pub min_value: f64,
}

pub fn solve5() -> SolveProblem {
    let a = ref5().a;
    let b = vector_from_real(&[0.15735, 0.15735, 0.1415, -0.1, -0.2]);
    #[rustfmt::skip]
    let v = from_real_rows(5, 4, &[
        0.0, 0.0, 0.0, 0.0,
        1.0, 0.0, 0.0, 0.0,
        0.0, 1.0, 0.0, 0.0,
        0.0, 0.0, 1.0, 0.0,
        0.0, 0.0, 0.0, 1.0,
    ]);
    #[rustfmt::skip]
    let w = from_real_rows(4, 5, &[
         0.0, 0.0, 1.0, 0.0, 0.0,
         0.0, 0.0, 0.0, 1.0, 0.0,
         0.0, 0.0, 0.0, 0.0, 1.0,
        -1.0, 1.0, 0.0, 0.0, 0.0,
    ]);
    let x = vector_from_real(&[0.29885, 0.29885, 0.0, 0.0, 0.0]);
    SolveProblem {
        a,
        b,
        v,
        w,
        x,
        min_value: 0.24495,
    }
}

/// A rank-1 matrix whose column lies on the light cone (`x~x = 0`), so
/// `A~A = AA~ = 0` and the Minkowski inverse does not exist.
pub fn lightcone2() -> Matrix {
    from_real_rows(2, 2, &[1.0, 1.0, 1.0, 1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::minkowski_adjoint;

    #[test]
    fn lightcone_products_vanish() {
        let a = lightcone2();
        let adj = minkowski_adjoint(&a);
        assert!((&adj * &a).norm() < 1e-15);
        assert!((&a * &adj).norm() < 1e-15);
    }

    #[test]
    fn solve_problem_bases_annihilate_the_power() {
        let p = solve5();
        let ak = &p.a * &p.a;
        assert!((&ak * &p.v).norm() < 1e-15);
        assert!((&p.w * &ak).norm() < 1e-15);
    }
}
