//! Applications of the m-DMP inverse: the projected linear system
//! `A^k x = A^k A^m b`, the constrained least-norm problem
//! `min ‖(A A^dag)~ A x − b‖_F over x ∈ range(A^k)`, and a condensed Cramer
//! rule for the unique solution on `range(A^k)`.

use crate::classical::moore_penrose;
use crate::decomp::{
    hs_decompose, matrix_index, metric_partition, null_space_basis, numeric_rank,
    range_complement_basis, range_subset,
};
use crate::exec::map_indexed;
use crate::matrix::{cond2, guarded_inverse, power, Matrix, Vector};
use crate::metric::{minkowski_adjoint, minkowski_metric};
use crate::minkowski::{mdmp, minkowski_exists, minkowski_inverse};
use crate::{Error, Result, Tolerances};

/// Solution of the projected system `A^k x = A^k A^m b`.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// `A^{D,m} b`, the unique solution on `range(A^k)`.
    pub particular: Vector,
    /// `I - A^{D,m} A`; its range is the homogeneous solution space
    /// `null(A^k)`.
    pub homogeneous_projector: Matrix,
    /// Whether the particular solution was verified to lie in `range(A^k)`
    /// (rank test at the shared tolerance).
    pub unique_on_range_ak: bool,
    /// `‖A^k x - A^k A^m b‖_F` for the returned solution.
    pub residual: f64,
    /// `particular + (I - A^{D,m} A) v` when a homogeneous seed `v` was given.
    pub general: Option<Vector>,
}

/// Outcome of the constrained least-norm problem.
#[derive(Debug, Clone)]
pub struct MinResult {
    /// `A^{D,m} b`, the unique minimizer.
    pub x: Vector,
    /// The attained minimum, `‖b2‖_F`.
    pub min_value: f64,
    /// Leading block of `U* G b` (length `r`).
    pub b1: Vector,
    /// Trailing block of `U* G b` (length `n - r`).
    pub b2: Vector,
    /// The verified theorem hypothesis `G1^{-1} b1 ∈ range((Sigma K)^D)`.
    pub condition_ok: bool,
    /// `‖(A A^dag)~ A x - b‖_F` evaluated independently at the minimizer.
    pub objective: f64,
}

/// Bases for the condensed Cramer rule: `range(V) = null(A^k)` and
/// `null(W) = range(A^k)`, with `W V` nonsingular.
#[derive(Debug, Clone)]
pub struct ComplementBases {
    pub v: Matrix,
    pub w: Matrix,
    /// `rank(A^k)`.
    pub t: usize,
}

fn require_square(a: &Matrix, what: &str) -> Result<()> {
    if a.nrows() == a.ncols() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "{what} requires a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )))
    }
}

fn require_b(a: &Matrix, b: &Vector) -> Result<()> {
    if b.len() == a.nrows() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "right-hand side has length {}, expected {}",
            b.len(),
            a.nrows()
        )))
    }
}

/// General solution of `A^k x = A^k A^m b`:
/// `x = A^{D,m} b + (I - A^{D,m} A) v` over all `v`, with `A^{D,m} b` the
/// unique representative on `range(A^k)`.
pub fn solve_projected(
    a: &Matrix,
    b: &Vector,
    v: Option<&Vector>,
    tol: &Tolerances,
) -> Result<SolveResult> {
    require_square(a, "the projected system")?;
    require_b(a, b)?;
    if let Some(v) = v {
        require_b(a, v)?;
    }
    let n = a.nrows();
    let x = mdmp(a, tol)?;
    let particular = &x * b;
    let homogeneous_projector = Matrix::identity(n, n) - &x * a;

    let k = matrix_index(a, tol)?;
    let ak = power(a, k);
    let m = minkowski_inverse(a, tol)?;
    let rhs = &ak * (&m * b);
    let residual = (&ak * &particular - &rhs).norm();

    let as_col = Matrix::from_column_slice(n, 1, particular.as_slice());
    let unique_on_range_ak = range_subset(&as_col, &ak, tol);

    let general = v.map(|v| &particular + &homogeneous_projector * v);
    if let Some(g) = &general {
        let res_g = (&ak * g - &rhs).norm();
        debug_assert!(res_g <= residual + tol.eq_rel_tol * (1.0 + rhs.norm()));
    }

    Ok(SolveResult {
        particular,
        homogeneous_projector,
        unique_on_range_ak,
        residual,
        general,
    })
}

/// The constrained least-norm problem
/// `min ‖(A A^dag)~ A x - b‖_F  over  x ∈ range(A^k)`.
///
/// Requires `rank(A) < n`; decomposes `b = G U (b1; b2)` against the same
/// decomposition the inverse uses, tests the hypothesis
/// `G1^{-1} b1 ∈ range((Sigma K)^D)` by least-squares residual, and refuses
/// with [`Error::ConditionFailed`] when the hypothesis fails (the minimum
/// formula is unproven there). On success the minimum is `‖b2‖_F`, attained
/// at `x = A^{D,m} b`, and the objective is re-evaluated independently.
pub fn least_norm_min(a: &Matrix, b: &Vector, tol: &Tolerances) -> Result<MinResult> {
    require_square(a, "the least-norm problem")?;
    require_b(a, b)?;
    let n = a.nrows();
    let report = minkowski_exists(a, tol);
    if !report.exists {
        return Err(Error::NotExists { report });
    }
    if report.rank_a == n {
        return Err(Error::FullRank);
    }
    if report.rank_a == 0 {
        return Err(Error::ZeroMatrix);
    }

    let dec = hs_decompose(a, tol)?;
    let r = dec.r;
    let part = metric_partition(&dec);
    let g = minkowski_metric(n);
    let coeffs = dec.u.adjoint() * (&g * b);
    let b1 = Vector::from_iterator(r, coeffs.iter().take(r).cloned());
    let b2 = Vector::from_iterator(n - r, coeffs.iter().skip(r).cloned());

    // hypothesis: G1^{-1} b1 in range((Sigma K)^D), tested by projecting onto
    // an orthonormal basis of that range
    let g1_inv = guarded_inverse(&part.g1, "G1", tol.cond_max)?;
    let z = &g1_inv * &b1;
    let core_d = crate::classical::drazin(&dec.core(), tol)?;
    let basis = crate::decomp::range_basis(&core_d, tol);
    let projected = &basis * (basis.adjoint() * &z);
    let denom = z.norm().max(1.0);
    let membership_residual = (&projected - &z).norm() / denom;
    if membership_residual > tol.eq_rel_tol {
        return Err(Error::ConditionFailed {
            residual: membership_residual,
        });
    }

    let x = mdmp(a, tol)? * b;
    let min_value = b2.norm();

    // independent evaluation of the objective at the minimizer
    let aadag = a * moore_penrose(a, tol);
    let objective = (minkowski_adjoint(&aadag) * a * &x - b).norm();

    Ok(MinResult {
        x,
        min_value,
        b1,
        b2,
        condition_ok: true,
        objective,
    })
}

/// Orthonormal complement bases from one SVD of `A^k`: `V` spans `null(A^k)`,
/// the rows of `W` are the adjoint of an orthonormal basis of
/// `range(A^k)^perp`. `W V` is nonsingular because
/// `range(A^k) ⊕ null(A^k) = C^n` at index `k` (it is not the identity in
/// general: the two SVD bases need not align).
pub fn build_complement_bases(a: &Matrix, tol: &Tolerances) -> Result<ComplementBases> {
    require_square(a, "complement bases")?;
    let k = matrix_index(a, tol)?;
    let ak = power(a, k);
    let t = numeric_rank(&ak, tol);
    if t == a.nrows() {
        return Err(Error::FullRank);
    }
    let v = null_space_basis(&ak, tol);
    let w = range_complement_basis(&ak, tol).adjoint();
    let wv = &w * &v;
    let cond = cond2(&wv);
    if !cond.is_finite() || cond > tol.cond_max {
        return Err(Error::SingularWV { cond });
    }
    Ok(ComplementBases { v, w, t })
}

/// Validate user-supplied bases for [`cramer_solve`].
fn validate_bases(a: &Matrix, bases: &ComplementBases, tol: &Tolerances) -> Result<()> {
    let n = a.nrows();
    let k = matrix_index(a, tol)?;
    let ak = power(a, k);
    let t = numeric_rank(&ak, tol);
    if bases.v.nrows() != n || bases.w.ncols() != n {
        return Err(Error::ShapeMismatch(
            "complement bases have wrong row/column counts".into(),
        ));
    }
    if bases.v.ncols() != n - t || bases.w.nrows() != n - t {
        return Err(Error::ShapeMismatch(format!(
            "complement bases must have {} columns/rows (n - rank(A^k))",
            n - t
        )));
    }
    let scale = ak.norm().max(1.0);
    if (&ak * &bases.v).norm() > tol.eq_rel_tol * scale * bases.v.norm().max(1.0) {
        return Err(Error::ShapeMismatch(
            "range(V) is not contained in null(A^k)".into(),
        ));
    }
    if (&bases.w * &ak).norm() > tol.eq_rel_tol * scale * bases.w.norm().max(1.0) {
        return Err(Error::ShapeMismatch(
            "null(W) does not contain range(A^k)".into(),
        ));
    }
    Ok(())
}

/// Condensed Cramer rule for `x = A^{D,m} b`:
/// with `E = V (W V)^{-1} W`, each component is
/// `x_i = det((A^k + E)(i -> A^k A^m b)) / det(A^k + E)`.
///
/// Bases are auto-built when absent. The `n` determinant evaluations are
/// independent and run in parallel under the `parallel` feature.
pub fn cramer_solve(
    a: &Matrix,
    b: &Vector,
    bases: Option<&ComplementBases>,
    tol: &Tolerances,
) -> Result<Vector> {
    require_square(a, "the Cramer rule")?;
    require_b(a, b)?;
    let report = minkowski_exists(a, tol);
    if !report.exists {
        return Err(Error::NotExists { report });
    }
    let n = a.nrows();

    let built;
    let bases = match bases {
        Some(user) => {
            validate_bases(a, user, tol)?;
            user
        }
        None => {
            built = build_complement_bases(a, tol)?;
            &built
        }
    };

    let wv = &bases.w * &bases.v;
    let wv_inv = match guarded_inverse(&wv, "WV", tol.cond_max) {
        Ok(inv) => inv,
        Err(Error::NearSingularFactor { cond, .. }) => return Err(Error::SingularWV { cond }),
        Err(e) => return Err(e),
    };
    let e = &bases.v * wv_inv * &bases.w;

    let k = matrix_index(a, tol)?;
    let ak = power(a, k);
    let bordered = &ak + &e;
    let cond = cond2(&bordered);
    if !cond.is_finite() || cond > tol.cond_max {
        return Err(Error::SingularBordered { cond });
    }
    let det0 = bordered.determinant();
    if det0.norm() == 0.0 {
        return Err(Error::SingularBordered { cond: f64::INFINITY });
    }

    let m = minkowski_inverse(a, tol)?;
    let rhs = &ak * (&m * b);

    let components = map_indexed(n, |i| {
        let mut replaced = bordered.clone();
        replaced.set_column(i, &rhs);
        replaced.determinant() / det0
    });
    Ok(Vector::from_vec(components))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::matrix::{cx, from_real_rows, rel_diff, vector_from_real};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn vec_max_diff(a: &Vector, b: &Vector) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn projected_solution_matches_reference() {
        let t = tol();
        let p = fixtures::solve5();
        let res = solve_projected(&p.a, &p.b, None, &t).unwrap();
        assert!(vec_max_diff(&res.particular, &p.x) < 1e-4);
        assert!(res.unique_on_range_ak);
        assert!(res.residual < 1e-10);
        // homogeneous projector is idempotent
        let h = &res.homogeneous_projector;
        assert!(rel_diff(&(h * h), h) < 1e-10);
    }

    #[test]
    fn projected_zero_rhs_gives_zero() {
        let t = tol();
        let a = fixtures::ref5().a;
        let b = Vector::zeros(5);
        let res = solve_projected(&a, &b, None, &t).unwrap();
        assert!(res.particular.norm() < 1e-14);
    }

    #[test]
    fn projected_general_solution_has_same_residual() {
        let t = tol();
        let p = fixtures::solve5();
        let v = vector_from_real(&[0.3, -1.2, 0.8, 2.0, -0.5]);
        let res = solve_projected(&p.a, &p.b, Some(&v), &t).unwrap();
        let g = res.general.clone().unwrap();
        let ak = power(&p.a, 2);
        let m = minkowski_inverse(&p.a, &t).unwrap();
        let rhs = &ak * (&m * &p.b);
        let res_g = (&ak * &g - &rhs).norm();
        assert!(res_g < 1e-10, "general solution residual {res_g}");
    }

    #[test]
    fn least_norm_matches_reference() {
        let t = tol();
        let p = fixtures::solve5();
        let res = least_norm_min(&p.a, &p.b, &t).unwrap();
        assert!((res.min_value - p.min_value).abs() < 1e-4);
        assert!(vec_max_diff(&res.x, &p.x) < 1e-4);
        assert!(res.condition_ok);
        // |b1| entries are gauge-invariant for distinct singular values
        let mut b1_abs: Vec<f64> = res.b1.iter().map(|z| z.norm()).collect();
        b1_abs.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((b1_abs[0] - 0.12201).abs() < 1e-4);
        assert!((b1_abs[1] - 0.21132).abs() < 1e-4);
        // the independently evaluated objective attains the minimum
        assert!((res.objective - res.min_value).abs() < 1e-8);
    }

    #[test]
    fn least_norm_exact_solution_when_b2_vanishes() {
        // choose b in the span where b2 = 0: b = G U (b1; 0) with a valid b1;
        // easiest valid b1: image of the core inverse, via b = A^2 y pushed
        // through the metric so that G1^{-1} b1 lands in range((SK)^D).
        let t = tol();
        let a = fixtures::ref5().a;
        // b = (A A^dag)~ A z for z in range(A^k): objective can reach zero
        let z = &power(&a, 2) * vector_from_real(&[0.4, -0.1, 0.7, 0.0, 0.2]);
        let aadag = &a * moore_penrose(&a, &t);
        let b = minkowski_adjoint(&aadag) * &a * &z;
        let res = least_norm_min(&a, &b, &t).unwrap();
        assert!(res.min_value < 1e-10, "min should vanish, got {}", res.min_value);
        assert!(res.objective < 1e-8);
    }

    #[test]
    fn least_norm_scales_linearly() {
        let t = tol();
        let p = fixtures::solve5();
        let res1 = least_norm_min(&p.a, &p.b, &t).unwrap();
        let b_scaled = &p.b * cx(2.5, 0.0);
        let res2 = least_norm_min(&p.a, &b_scaled, &t).unwrap();
        assert!((res2.min_value - 2.5 * res1.min_value).abs() < 1e-10);
        assert!(vec_max_diff(&res2.x, &(&res1.x * cx(2.5, 0.0))) < 1e-10);
    }

    #[test]
    fn least_norm_refuses_full_rank() {
        let t = tol();
        let a = from_real_rows(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = vector_from_real(&[1.0, 1.0]);
        match least_norm_min(&a, &b, &t) {
            Err(Error::FullRank) => {}
            other => panic!("expected FullRank, got {other:?}"),
        }
    }

    #[test]
    fn auto_bases_satisfy_contracts() {
        let t = tol();
        let a = fixtures::ref5().a;
        let bases = build_complement_bases(&a, &t).unwrap();
        let ak = power(&a, 2);
        assert_eq!(bases.t, 1);
        assert!((&ak * &bases.v).norm() < 1e-12);
        assert!((&bases.w * &ak).norm() < 1e-12);
        let wv = &bases.w * &bases.v;
        assert!(cond2(&wv) < 100.0);
    }

    #[test]
    fn bases_for_nilpotent_whole_space() {
        // A^k = 0: null space is everything, V is square unitary
        let t = tol();
        let a = from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let bases = build_complement_bases(&a, &t).unwrap();
        assert_eq!(bases.t, 0);
        assert_eq!(bases.v.ncols(), 2);
        assert_eq!(bases.w.nrows(), 2);
        let e = &bases.v * (&bases.w * &bases.v).try_inverse().unwrap() * &bases.w;
        assert!(rel_diff(&e, &Matrix::identity(2, 2)) < 1e-12);
    }

    #[test]
    fn cramer_matches_reference_with_paper_and_auto_bases() {
        let t = tol();
        let p = fixtures::solve5();
        let user = ComplementBases {
            v: p.v.clone(),
            w: p.w.clone(),
            t: 1,
        };
        let x_user = cramer_solve(&p.a, &p.b, Some(&user), &t).unwrap();
        assert!(vec_max_diff(&x_user, &p.x) < 1e-4);

        let x_auto = cramer_solve(&p.a, &p.b, None, &t).unwrap();
        assert!(vec_max_diff(&x_auto, &p.x) < 1e-4);

        // bases differ, solutions agree
        assert!(vec_max_diff(&x_user, &x_auto) < 1e-10);
    }

    #[test]
    fn cramer_zero_rhs() {
        let t = tol();
        let a = fixtures::ref5().a;
        let x = cramer_solve(&a, &Vector::zeros(5), None, &t).unwrap();
        assert!(x.norm() < 1e-12);
    }

    #[test]
    fn cramer_agrees_with_projected_solver() {
        let t = tol();
        let p = fixtures::solve5();
        let x_cramer = cramer_solve(&p.a, &p.b, None, &t).unwrap();
        let x_proj = solve_projected(&p.a, &p.b, None, &t).unwrap().particular;
        assert!(vec_max_diff(&x_cramer, &x_proj) < 100.0 * t.eq_rel_tol);
    }

    #[test]
    fn bordering_matrix_is_idempotent_complement() {
        let t = tol();
        let a = fixtures::ref5().a;
        let bases = build_complement_bases(&a, &t).unwrap();
        let wv_inv = (&bases.w * &bases.v).try_inverse().unwrap();
        let e = &bases.v * wv_inv * &bases.w;
        assert!(rel_diff(&(&e * &e), &e) < 1e-10, "E idempotent");
        // range(E) = null(A^k) by rank tests
        let ak = power(&a, 2);
        assert!((&ak * &e).norm() < 1e-10);
        assert_eq!(numeric_rank(&e, &t), 4);
    }
}
