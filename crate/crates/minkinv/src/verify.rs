//! Residual engine: machine-readable reports for every defining equation
//! system (Penrose, Minkowski, Drazin, m-DMP) and for the characterization
//! and property theorems of the m-DMP inverse.
//!
//! Reports are deterministic for identical inputs and serialize to JSON with
//! stable field order, so they can be diffed in CI.

use serde::{Deserialize, Serialize};

use crate::classical::drazin;
use crate::decomp::{matrix_index, null_superset, numeric_rank, range_subset};
use crate::matrix::{power, rel_diff, Matrix};
use crate::metric::minkowski_adjoint;
use crate::minkowski::{mdmp, minkowski_exists, minkowski_inverse};
use crate::{Error, Result, Tolerances};

/// One checked clause: an equation residual or a subspace test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationResidual {
    pub label: String,
    /// Frobenius norm of the defect (for subspace tests: the rank deficit).
    pub absolute: f64,
    /// `absolute / max(1, scale of the right-hand side)`.
    pub relative: f64,
}

/// Residual report for a candidate inverse against one equation system.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquationReport {
    pub system_name: String,
    pub per_equation: Vec<EquationResidual>,
    pub passed: bool,
    pub tolerance: f64,
}

impl EquationReport {
    fn new(system_name: &str, tolerance: f64) -> Self {
        Self {
            system_name: system_name.to_string(),
            per_equation: Vec::new(),
            passed: true,
            tolerance,
        }
    }

    fn push_eq(&mut self, label: &str, lhs: &Matrix, rhs: &Matrix) {
        let absolute = (lhs - rhs).norm();
        let relative = absolute / 1.0_f64.max(rhs.norm());
        if relative > self.tolerance {
            self.passed = false;
        }
        self.per_equation.push(EquationResidual {
            label: label.to_string(),
            absolute,
            relative,
        });
    }

    /// Subspace clauses have no residual; record the verdict as 0/1.
    fn push_bool(&mut self, label: &str, ok: bool) {
        let defect = if ok { 0.0 } else { 1.0 };
        if !ok {
            self.passed = false;
        }
        self.per_equation.push(EquationResidual {
            label: label.to_string(),
            absolute: defect,
            relative: defect,
        });
    }

    /// Look up a clause by label.
    pub fn residual(&self, label: &str) -> Option<&EquationResidual> {
        self.per_equation.iter().find(|r| r.label == label)
    }
}

fn check_shapes(a: &Matrix, x: &Matrix) -> Result<()> {
    if x.nrows() == a.ncols() && x.ncols() == a.nrows() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "candidate is {}x{}, expected {}x{}",
            x.nrows(),
            x.ncols(),
            a.ncols(),
            a.nrows()
        )))
    }
}

fn require_square(a: &Matrix) -> Result<()> {
    if a.nrows() == a.ncols() {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(format!(
            "system requires a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )))
    }
}

/// The four Penrose equations for `X` against `A`.
pub fn check_penrose(a: &Matrix, x: &Matrix, tol: &Tolerances) -> Result<EquationReport> {
    check_shapes(a, x)?;
    let mut report = EquationReport::new("penrose", tol.eq_rel_tol);
    report.push_eq("AXA = A", &(a * x * a), a);
    report.push_eq("XAX = X", &(x * a * x), x);
    let ax = a * x;
    report.push_eq("(AX)* = AX", &ax.adjoint(), &ax);
    let xa = x * a;
    report.push_eq("(XA)* = XA", &xa.adjoint(), &xa);
    Ok(report)
}

/// The four defining equations of the Minkowski inverse.
pub fn check_minkowski(a: &Matrix, x: &Matrix, tol: &Tolerances) -> Result<EquationReport> {
    check_shapes(a, x)?;
    let mut report = EquationReport::new("minkowski", tol.eq_rel_tol);
    report.push_eq("AXA = A", &(a * x * a), a);
    report.push_eq("XAX = X", &(x * a * x), x);
    let ax = a * x;
    report.push_eq("(AX)~ = AX", &minkowski_adjoint(&ax), &ax);
    let xa = x * a;
    report.push_eq("(XA)~ = XA", &minkowski_adjoint(&xa), &xa);
    Ok(report)
}

/// The three defining equations of the Drazin inverse.
pub fn check_drazin(a: &Matrix, x: &Matrix, tol: &Tolerances) -> Result<EquationReport> {
    require_square(a)?;
    check_shapes(a, x)?;
    let k = matrix_index(a, tol)?;
    let mut report = EquationReport::new("drazin", tol.eq_rel_tol);
    report.push_eq("XAX = X", &(x * a * x), x);
    report.push_eq("AX = XA", &(a * x), &(x * a));
    report.push_eq("A^{k+1} X = A^k", &(power(a, k + 1) * x), &power(a, k));
    Ok(report)
}

/// The defining system of the m-DMP inverse:
/// `XAX = X`, `XA = A^D A`, `A^k X = A^k A^m`.
pub fn check_mdmp_system(a: &Matrix, x: &Matrix, tol: &Tolerances) -> Result<EquationReport> {
    require_square(a)?;
    check_shapes(a, x)?;
    let report = minkowski_exists(a, tol);
    if !report.exists {
        return Err(Error::NotExists { report });
    }
    let k = matrix_index(a, tol)?;
    let ak = power(a, k);
    let d = drazin(a, tol)?;
    let m = minkowski_inverse(a, tol)?;
    let mut rep = EquationReport::new("mdmp", tol.eq_rel_tol);
    rep.push_eq("XAX = X", &(x * a * x), x);
    rep.push_eq("XA = A^D A", &(x * a), &(&d * a));
    rep.push_eq("A^k X = A^k A^m", &(&ak * x), &(&ak * &m));
    Ok(rep)
}

/// The equivalent characterizations of `X = A^{D,m}`: every returned report
/// passes exactly when `X` is the m-DMP inverse.
///
/// Clauses (one report each):
/// - `range(X) ⊆ range(A^k)` with `A^D X = A^D A^m`;
/// - `range(X) ⊆ range(A^k)` with `A^k X = A^k A^m`;
/// - `null(A^k A^m) ⊆ null(X)` with `X A = A A^D`;
/// - `null(A^k A^m) ⊆ null(X)` with `X A^{k+1} = A^k`;
/// - `A X^2 = X` with `A X = A^2 A^D A^m`;
/// - `A X^2 = X` with `A X = P`, the projector onto `range(A^k)` along
///   `null(A^D A^m)` built geometrically from bases;
/// - `A X^2 = X` with `A^k X = A^k A^m`.
pub fn check_characterizations(
    a: &Matrix,
    x: &Matrix,
    tol: &Tolerances,
) -> Result<Vec<EquationReport>> {
    require_square(a)?;
    check_shapes(a, x)?;
    let report = minkowski_exists(a, tol);
    if !report.exists {
        return Err(Error::NotExists { report });
    }
    let k = matrix_index(a, tol)?;
    let ak = power(a, k);
    let d = drazin(a, tol)?;
    let m = minkowski_inverse(a, tol)?;
    let akm = &ak * &m;
    let dm = &d * &m;

    let mut reports = Vec::new();

    let mut r = EquationReport::new("range + A^D X", tol.eq_rel_tol);
    r.push_bool("range(X) ⊆ range(A^k)", range_subset(x, &ak, tol));
    r.push_eq("A^D X = A^D A^m", &(&d * x), &dm);
    reports.push(r);

    let mut r = EquationReport::new("range + A^k X", tol.eq_rel_tol);
    r.push_bool("range(X) ⊆ range(A^k)", range_subset(x, &ak, tol));
    r.push_eq("A^k X = A^k A^m", &(&ak * x), &akm);
    reports.push(r);

    let mut r = EquationReport::new("null + XA", tol.eq_rel_tol);
    r.push_bool("null(A^k A^m) ⊆ null(X)", null_superset(x, &akm, tol));
    r.push_eq("XA = A A^D", &(x * a), &(a * &d));
    reports.push(r);

    let mut r = EquationReport::new("null + X A^{k+1}", tol.eq_rel_tol);
    r.push_bool("null(A^k A^m) ⊆ null(X)", null_superset(x, &akm, tol));
    r.push_eq("X A^{k+1} = A^k", &(x * power(a, k + 1)), &ak);
    reports.push(r);

    let ax2 = a * x * x;

    let mut r = EquationReport::new("AX^2 + A^2 A^D A^m", tol.eq_rel_tol);
    r.push_eq("A X^2 = X", &ax2, x);
    r.push_eq("A X = A^2 A^D A^m", &(a * x), &(a * a * &dm));
    reports.push(r);

    // geometric clause: AX equals the projector onto range(A^k) along
    // null(A^D A^m). A projector is pinned down by idempotence plus its
    // range and null space, so the clause is decided by those three tests;
    // materializing the oblique projector itself can be arbitrarily
    // ill-conditioned when the two subspaces nearly touch.
    let mut r = EquationReport::new("AX^2 + projector", tol.eq_rel_tol);
    r.push_eq("A X^2 = X", &ax2, x);
    let axm = a * x;
    r.push_eq("(AX)^2 = AX", &(&axm * &axm), &axm);
    r.push_bool(
        "range(AX) = range(A^k)",
        crate::decomp::range_equal(&axm, &ak, tol),
    );
    r.push_bool(
        "null(AX) = null(A^D A^m)",
        crate::decomp::null_equal(&axm, &dm, tol),
    );
    reports.push(r);

    let mut r = EquationReport::new("AX^2 + A^k X", tol.eq_rel_tol);
    r.push_eq("A X^2 = X", &ax2, x);
    r.push_eq("A^k X = A^k A^m", &(&ak * x), &akm);
    reports.push(r);

    Ok(reports)
}

/// Bundled identities of the m-DMP inverse:
/// rank equality with `A^k`, idempotence of both projectors, the power law,
/// the `(A^2 A^m)^D` identity, the double-Drazin identity, and the
/// commutation equivalence (`A A^{D,m} = A^{D,m} A` iff `A^{D,m} = A^D`,
/// asserted as agreement of the two booleans).
pub fn property_suite(a: &Matrix, tol: &Tolerances) -> Result<EquationReport> {
    require_square(a)?;
    let ex = minkowski_exists(a, tol);
    if !ex.exists {
        return Err(Error::NotExists { report: ex });
    }
    let t = tol.eq_rel_tol;
    let k = matrix_index(a, tol)?;
    let ak = power(a, k);
    let x = mdmp(a, tol)?;
    let d = drazin(a, tol)?;
    let m = minkowski_inverse(a, tol)?;

    let mut rep = EquationReport::new("mdmp properties", t);

    rep.push_bool(
        "rank(A^{D,m}) = rank(A^k)",
        numeric_rank(&x, tol) == numeric_rank(&ak, tol),
    );

    let p = a * &x;
    rep.push_eq("(A A^{D,m})^2 = A A^{D,m}", &(&p * &p), &p);
    let q = &x * a;
    rep.push_eq("(A^{D,m} A)^2 = A^{D,m} A", &(&q * &q), &q);

    // power law: odd l gives A (A^D A^m)^{(l+1)/2}, even l gives (A^D A^m)^{l/2}
    let dm = &d * &m;
    for l in 1..=4usize {
        let lhs = power(&x, l);
        let rhs = if l % 2 == 0 {
            power(&dm, l / 2)
        } else {
            a * power(&dm, (l + 1) / 2)
        };
        rep.push_eq(&format!("power law l = {l}"), &lhs, &rhs);
    }

    let a2m = a * a * &m;
    rep.push_eq("(A^2 A^m)^D = A^{D,m}", &drazin(&a2m, tol)?, &x);

    let dd = drazin(&drazin(&x, tol)?, tol)?;
    rep.push_eq("((A^{D,m})^D)^D = A^{D,m}", &dd, &x);

    let commutes = rel_diff(&(a * &x), &(&x * a)) <= t;
    let equals_drazin = rel_diff(&x, &d) <= t;
    rep.push_bool(
        "A A^{D,m} = A^{D,m} A  iff  A^{D,m} = A^D",
        commutes == equals_drazin,
    );

    Ok(rep)
}

/// Convenience for the commutation-equivalence probe: the two booleans of
/// the equivalence, for callers that want them individually.
pub fn commutation_booleans(a: &Matrix, tol: &Tolerances) -> Result<(bool, bool)> {
    let x = mdmp(a, tol)?;
    let d = drazin(a, tol)?;
    Ok((
        rel_diff(&(a * &x), &(&x * a)) <= tol.eq_rel_tol,
        rel_diff(&x, &d) <= tol.eq_rel_tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{dmp, moore_penrose};
    use crate::fixtures;
    use crate::matrix::{cx, from_real_rows};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn penrose_report_passes_and_fails_correctly() {
        let t = tol();
        let f = fixtures::ref5();
        // the printed pseudoinverse is 5-decimal data: check at 1e-4
        let loose = t.with_eq_rel_tol(1e-4);
        assert!(check_penrose(&f.a, &f.pinv, &loose).unwrap().passed);
        assert!(check_penrose(&f.a, &moore_penrose(&f.a, &t), &t).unwrap().passed);

        let zero = Matrix::zeros(5, 5);
        let rep = check_penrose(&f.a, &zero, &t).unwrap();
        assert!(!rep.passed);
        assert!(rep.residual("AXA = A").unwrap().relative > t.eq_rel_tol);

        let id = Matrix::identity(3, 3);
        assert!(check_penrose(&id, &id, &t).unwrap().passed);
    }

    #[test]
    fn minkowski_report_distinguishes_the_two_star_inverses() {
        let t = tol().with_eq_rel_tol(1e-4);
        let f = fixtures::ref5();
        assert!(check_minkowski(&f.a, &f.mink, &t).unwrap().passed);

        // the Euclidean pseudoinverse fails the Minkowski symmetry of AX
        let rep = check_minkowski(&f.a, &f.pinv, &t).unwrap();
        assert!(!rep.passed);
        assert!(rep.residual("(AX)~ = AX").unwrap().relative > 0.1);
        // and its (XA)~ clause holds (computed: the defect sits in AX alone)
        assert!(rep.residual("(XA)~ = XA").unwrap().relative < 1e-4);

        let id = Matrix::identity(4, 4);
        assert!(check_minkowski(&id, &id, &t).unwrap().passed);
    }

    #[test]
    fn drazin_report() {
        let t = tol().with_eq_rel_tol(1e-4);
        let f = fixtures::ref5();
        assert!(check_drazin(&f.a, &f.drazin, &t).unwrap().passed);

        // the pseudoinverse does not commute with A
        let rep = check_drazin(&f.a, &f.pinv, &t).unwrap();
        assert!(!rep.passed);
        assert!(rep.residual("AX = XA").unwrap().relative > 0.1);

        let nil = from_real_rows(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        let zero = Matrix::zeros(2, 2);
        assert!(check_drazin(&nil, &zero, &tol()).unwrap().passed);
    }

    #[test]
    fn mdmp_system_report() {
        let t = tol().with_eq_rel_tol(1e-4);
        let f = fixtures::ref5();
        assert!(check_mdmp_system(&f.a, &f.mdmp, &t).unwrap().passed);

        // the dual inverse fails the system (the two differ on this matrix)
        let rep = check_mdmp_system(&f.a, &f.dual_mdmp, &t).unwrap();
        assert!(!rep.passed);
        assert!(rep.residual("XA = A^D A").unwrap().relative > 0.1);
        assert!(rep.residual("A^k X = A^k A^m").unwrap().relative > 0.1);

        let id = Matrix::identity(3, 3);
        assert!(check_mdmp_system(&id, &id, &tol()).unwrap().passed);
    }

    #[test]
    fn mdmp_system_pass_iff_close_to_mdmp() {
        // uniqueness: passing candidates are exactly the small perturbations
        let t = tol();
        let f = fixtures::ref5();
        let x = mdmp(&f.a, &t).unwrap();
        assert!(check_mdmp_system(&f.a, &x, &t).unwrap().passed);

        let mut perturbed = x.clone();
        perturbed[(0, 0)] += cx(1e-3, 0.0);
        let rep = check_mdmp_system(&f.a, &perturbed, &t).unwrap();
        assert!(!rep.passed);
    }

    #[test]
    fn characterizations_pass_for_mdmp_only() {
        let t = tol();
        let f = fixtures::ref5();
        let x = mdmp(&f.a, &t).unwrap();
        for rep in check_characterizations(&f.a, &x, &t).unwrap() {
            assert!(rep.passed, "clause `{}` failed for the true inverse", rep.system_name);
        }

        // the Drazin inverse differs here; every report must catch it
        let d = drazin(&f.a, &t).unwrap();
        for rep in check_characterizations(&f.a, &d, &t).unwrap() {
            assert!(!rep.passed, "clause `{}` accepted the Drazin inverse", rep.system_name);
        }

        // the DMP inverse likewise
        let e = dmp(&f.a, &t).unwrap();
        for rep in check_characterizations(&f.a, &e, &t).unwrap() {
            assert!(!rep.passed, "clause `{}` accepted the DMP inverse", rep.system_name);
        }
    }

    #[test]
    fn characterizations_detect_null_space_perturbation() {
        // adding a column from null(A^k) violates the range clauses
        let t = tol();
        let f = fixtures::ref5();
        let x = mdmp(&f.a, &t).unwrap();
        let mut z = Matrix::zeros(5, 5);
        z[(4, 0)] = cx(1e-3, 0.0); // e5 lies in null(A^2)
        let perturbed = &x + &z;
        let reports = check_characterizations(&f.a, &perturbed, &t).unwrap();
        let range_clause = &reports[0];
        assert!(
            !range_clause.passed,
            "range inclusion must fail for the perturbed candidate"
        );
    }

    #[test]
    fn property_suite_on_reference_and_identity() {
        let t = tol();
        let f = fixtures::ref5();
        let rep = property_suite(&f.a, &t).unwrap();
        assert!(rep.passed, "report: {rep:?}");

        // commutation booleans: both false on this matrix
        let (commutes, equals) = commutation_booleans(&f.a, &t).unwrap();
        assert!(!commutes && !equals);

        // nonsingular: both true
        let a = from_real_rows(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let (commutes, equals) = commutation_booleans(&a, &t).unwrap();
        assert!(commutes && equals);
        assert!(property_suite(&a, &t).unwrap().passed);
    }

    #[test]
    fn reports_serialize_with_stable_field_order() {
        let t = tol();
        let id = Matrix::identity(2, 2);
        let rep = check_penrose(&id, &id, &t).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        let sys_pos = json.find("system_name").unwrap();
        let eq_pos = json.find("per_equation").unwrap();
        let passed_pos = json.find("passed").unwrap();
        assert!(sys_pos < eq_pos && eq_pos < passed_pos);
        // deterministic
        let rep2 = check_penrose(&id, &id, &t).unwrap();
        assert_eq!(json, serde_json::to_string(&rep2).unwrap());
    }
}
