//! The Minkowski-space inverses: the Minkowski inverse `A^m`, the m-DMP
//! inverse `A^{D,m} = A^D A A^m` computed by four independent routes, the dual
//! m-DMP inverse `A^{m,D} = A^m A A^D`, the m-core specialization, and the two
//! projectors attached to `A^{D,m}`.
//!
//! Unlike the Moore-Penrose inverse, `A^m` need not exist: the defining
//! equations are solvable exactly when `rank(A~AA~) = rank(A)`, equivalently
//! `rank(AA~) = rank(A~A) = rank(A)`. Everything here refuses with
//! [`Error::NotExists`] (carrying the rank diagnostics) outside that set.

use serde::{Deserialize, Serialize};

use crate::classical::drazin;
use crate::decomp::{
    delta_matrix, full_rank_chain, hs_decompose, matrix_index, metric_partition, numeric_rank,
    zeros_like, HSDecomposition, MetricPartition,
};
use crate::matrix::{guarded_inverse, power, rel_diff, Matrix};
use crate::metric::{minkowski_adjoint, minkowski_metric};
use crate::{Error, Result, Tolerances};

/// The four ranks deciding existence of the Minkowski inverse, plus the
/// verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceReport {
    pub exists: bool,
    pub rank_a: usize,
    pub rank_aas: usize,
    pub rank_asa: usize,
    pub rank_asaas: usize,
}

/// Decide existence of `A^m` by the rank conditions.
pub fn minkowski_exists(a: &Matrix, tol: &Tolerances) -> ExistenceReport {
    let adj = minkowski_adjoint(a);
    let rank_a = numeric_rank(a, tol);
    let rank_aas = numeric_rank(&(a * &adj), tol);
    let rank_asa = numeric_rank(&(&adj * a), tol);
    let rank_asaas = numeric_rank(&(&adj * a * &adj), tol);
    ExistenceReport {
        exists: rank_asaas == rank_a,
        rank_a,
        rank_aas,
        rank_asa,
        rank_asaas,
    }
}

fn require_exists(a: &Matrix, tol: &Tolerances) -> Result<ExistenceReport> {
    let report = minkowski_exists(a, tol);
    if report.exists {
        Ok(report)
    } else {
        Err(Error::NotExists { report })
    }
}

/// Minkowski inverse through a full-rank factorization:
/// `A^m = C~ (C C~)^{-1} (B~ B)^{-1} B~` with `A = B C`.
///
/// The zero matrix maps to the zero matrix; the two square factors are
/// guarded by `cond_max`.
pub fn minkowski_inverse(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let report = require_exists(a, tol)?;
    if report.rank_a == 0 {
        return Ok(zeros_like(a));
    }
    let (b, c) = crate::decomp::full_rank_factor(a, tol)?;
    let b_adj = minkowski_adjoint(&b);
    let c_adj = minkowski_adjoint(&c);
    let cc = &c * &c_adj;
    let bb = &b_adj * &b;
    let cc_inv = guarded_inverse(&cc, "CC~", tol.cond_max)?;
    let bb_inv = guarded_inverse(&bb, "B~B", tol.cond_max)?;
    Ok(c_adj * cc_inv * bb_inv * b_adj)
}

/// Minkowski inverse in canonical form:
/// `A^m = G U [K*(G1 Sigma Delta)^{-1}, 0; L*(G1 Sigma Delta)^{-1}, 0] U* G`.
///
/// Singular `Delta` (resp. `G1`) signals `rank(AA~) < rank(A)` (resp.
/// `rank(A~A) < rank(A)`), i.e. nonexistence.
pub fn minkowski_inverse_hs(dec: &HSDecomposition, tol: &Tolerances) -> Result<Matrix> {
    let n = dec.n();
    let r = dec.r;
    let delta = delta_matrix(dec);
    if metric_block_singular(&delta, tol) {
        return Err(Error::SingularDelta);
    }
    let part = metric_partition(dec);
    if metric_block_singular(&part.g1, tol) {
        return Err(Error::SingularG1);
    }
    let sigma = Matrix::from_fn(r, r, |i, j| {
        if i == j {
            crate::matrix::cx(dec.sigma[i], 0.0)
        } else {
            crate::matrix::cx(0.0, 0.0)
        }
    });
    let core = &part.g1 * sigma * delta;
    let core_inv = guarded_inverse(&core, "G1 Sigma Delta", tol.cond_max)?;
    let mut inner = Matrix::zeros(n, n);
    inner
        .view_mut((0, 0), (r, r))
        .copy_from(&(dec.k.adjoint() * &core_inv));
    inner
        .view_mut((r, 0), (n - r, r))
        .copy_from(&(dec.l.adjoint() * &core_inv));
    let g = minkowski_metric(n);
    Ok(&g * &dec.u * inner * dec.u.adjoint() * &g)
}

/// The m-DMP inverse by its definition `A^{D,m} = A^D A A^m` — the unique
/// solution of `XAX = X`, `XA = A^D A`, `A^k X = A^k A^m`.
///
/// When `A^k = 0` (nilpotent input) the inverse is the zero matrix; this route
/// returns it rather than erroring.
pub fn mdmp(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    require_square(a, "m-DMP inverse")?;
    require_exists(a, tol)?;
    let k = matrix_index(a, tol)?;
    if k > 0 && numeric_rank(&power(a, k), tol) == 0 {
        return Ok(zeros_like(a));
    }
    let d = drazin(a, tol)?;
    let m = minkowski_inverse(a, tol)?;
    Ok(d * a * m)
}

/// The m-DMP inverse from Hartwig-Spindelböck data, in both canonical forms:
/// `U [(SK)^D G1^{-1}, 0; 0, 0] U* G` and
/// `U [(SK)^D, (SK)^D G1^{-1} G2; 0, 0] U*`.
///
/// The two forms are computed independently and must agree; disagreement
/// surfaces as [`Error::CrossCheckFailed`] instead of returning either value.
pub fn mdmp_hs(
    dec: &HSDecomposition,
    part: &MetricPartition,
    tol: &Tolerances,
) -> Result<Matrix> {
    let n = dec.n();
    let r = dec.r;
    let delta = delta_matrix(dec);
    if metric_block_singular(&delta, tol) {
        return Err(Error::SingularDelta);
    }
    if metric_block_singular(&part.g1, tol) {
        return Err(Error::SingularG1);
    }
    let g1_inv = guarded_inverse(&part.g1, "G1", tol.cond_max)?;
    let core_d = drazin(&dec.core(), tol)?;

    let mut inner1 = Matrix::zeros(n, n);
    inner1
        .view_mut((0, 0), (r, r))
        .copy_from(&(&core_d * &g1_inv));
    let form1 = &dec.u * inner1 * dec.u.adjoint() * minkowski_metric(n);

    let mut inner2 = Matrix::zeros(n, n);
    inner2.view_mut((0, 0), (r, r)).copy_from(&core_d);
    inner2
        .view_mut((0, r), (r, n - r))
        .copy_from(&(&core_d * &g1_inv * &part.g2));
    let form2 = &dec.u * inner2 * dec.u.adjoint();

    let residual = rel_diff(&form1, &form2);
    if residual > tol.eq_rel_tol {
        return Err(Error::CrossCheckFailed {
            context: "m-DMP canonical forms",
            residual,
        });
    }
    Ok(form1)
}

/// The m-DMP inverse through the full-rank chain:
/// `A^{D,m} = B_1 ... B_k (C_k B_k)^{-k} C_k ... C_2 (B_1~ B_1)^{-1} B_1~`.
///
/// Undefined for nilpotent input (`A^k = 0`), which surfaces as
/// [`Error::ZeroPower`]; callers that want the zero-matrix convention use
/// [`mdmp`].
pub fn mdmp_fullrank(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    require_square(a, "m-DMP inverse")?;
    let report = require_exists(a, tol)?;
    if report.rank_a == 0 {
        return Err(Error::ZeroPower);
    }
    let chain = match full_rank_chain(a, tol) {
        Err(Error::NilpotentTermination { .. }) => return Err(Error::ZeroPower),
        other => other?,
    };
    let k = chain.k();
    let tail_inv = guarded_inverse(&chain.tail_product(), "C_k B_k", tol.cond_max)?;
    let mut m = power(&tail_inv, k);
    for b in chain.b.iter().rev() {
        m = b * m;
    }
    for c in chain.c[1..].iter().rev() {
        m = m * c;
    }
    let b1_adj = minkowski_adjoint(&chain.b[0]);
    let bb = &b1_adj * &chain.b[0];
    let bb_inv = guarded_inverse(&bb, "B1~B1", tol.cond_max)?;
    Ok(m * bb_inv * b1_adj)
}

/// The m-DMP inverse as the composite `A A^m (I - Abar A A^m)^D`
/// and its mirror `(I - Abar A A^m)^D A A^m`, with `Abar = I - A`.
///
/// Both orderings are returned; they must agree with each other and with
/// every other route.
pub fn mdmp_composite(a: &Matrix, tol: &Tolerances) -> Result<(Matrix, Matrix)> {
    require_square(a, "m-DMP inverse")?;
    require_exists(a, tol)?;
    let n = a.nrows();
    let id = Matrix::identity(n, n);
    let m = minkowski_inverse(a, tol)?;
    let aam = a * &m;
    let abar = &id - a;
    let core = &id - &abar * &aam;
    let core_d = drazin(&core, tol)?;
    Ok((&aam * &core_d, &core_d * &aam))
}

/// The dual m-DMP inverse `A^{m,D} = A^m A A^D`, cross-checked against its
/// canonical block form
/// `G U [K* D^{-1} K (SK)^D, K* D^{-1} K ((SK)^D)^2 SL; L* ..., L* ...] U*`.
pub fn dual_mdmp(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    require_square(a, "dual m-DMP inverse")?;
    let report = require_exists(a, tol)?;
    if report.rank_a == 0 {
        return Ok(zeros_like(a));
    }
    let m = minkowski_inverse(a, tol)?;
    let d = drazin(a, tol)?;
    let value = &m * a * &d;

    // canonical block form from the HS data
    let dec = hs_decompose(a, tol)?;
    let n = dec.n();
    let r = dec.r;
    let delta_inv = guarded_inverse(&delta_matrix(&dec), "Delta", tol.cond_max)?;
    let core_d = drazin(&dec.core(), tol)?;
    let left = delta_inv * &dec.k * &core_d; // Delta^{-1} K (SK)^D
    let right = &left * &core_d * dec.sigma_l(); // Delta^{-1} K ((SK)^D)^2 SL
    let mut inner = Matrix::zeros(n, n);
    inner
        .view_mut((0, 0), (r, r))
        .copy_from(&(dec.k.adjoint() * &left));
    inner
        .view_mut((0, r), (r, n - r))
        .copy_from(&(dec.k.adjoint() * &right));
    inner
        .view_mut((r, 0), (n - r, r))
        .copy_from(&(dec.l.adjoint() * &left));
    inner
        .view_mut((r, r), (n - r, n - r))
        .copy_from(&(dec.l.adjoint() * &right));
    let block = minkowski_metric(n) * &dec.u * inner * dec.u.adjoint();

    let residual = rel_diff(&block, &value);
    if residual > tol.eq_rel_tol {
        return Err(Error::CrossCheckFailed {
            context: "dual m-DMP block form",
            residual,
        });
    }
    Ok(value)
}

/// The m-core inverse: the index <= 1 specialization of the m-DMP inverse.
pub fn m_core(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    require_square(a, "m-core inverse")?;
    let k = matrix_index(a, tol)?;
    if k > 1 {
        return Err(Error::IndexTooLarge { index: k });
    }
    mdmp(a, tol)
}

/// The projector `A A^{D,m}` onto `range(A^k)` along `null(A^k A^m)`.
pub fn projector_aadm(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    Ok(a * mdmp(a, tol)?)
}

/// The projector `A^{D,m} A = A^D A` onto `range(A^k)` along `null(A^k)`.
pub fn projector_adma(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    Ok(mdmp(a, tol)? * a)
}

/// Singularity test for the metric-derived blocks `Delta` and `G1`.
///
/// Both have operator norm at most 1 (they are compressions of a
/// unitary-conjugated involution), so an absolute smallest-singular-value
/// test at the rank tolerance is the scale-correct criterion; a relative
/// condition number is blind to a uniformly tiny block.
fn metric_block_singular(m: &Matrix, tol: &Tolerances) -> bool {
    if m.is_empty() {
        return false;
    }
    let sv = crate::svd::singular_values(m);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    min < tol.rank_rel_tol
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
