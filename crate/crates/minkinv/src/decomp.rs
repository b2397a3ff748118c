//! Rank-revealing machinery: numeric rank, matrix index, the
//! Hartwig-Spindelböck decomposition, and full-rank factorizations/chains.
//!
//! Every rank decision in the crate funnels through [`numeric_rank`] so the
//! whole library shares one rank notion (singular values above
//! `rank_rel_tol * sigma_max`).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::matrix::{cx, hcat, vcat, Matrix};
use crate::metric::minkowski_metric;
use crate::{Error, Result, Tolerances};

/// Full singular value decomposition `A = U diag(sigma) V*` with singular
/// values in descending order.
pub(crate) struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v_t: Matrix,
}

pub(crate) fn svd(a: &Matrix) -> Svd {
    let dec = crate::svd::svd_full(a);
    Svd {
        u: dec.u,
        sigma: dec.sigma,
        v_t: dec.v_t,
    }
}

fn rank_from_sigma(sigma: &[f64], tol: &Tolerances) -> usize {
    let max = sigma.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return 0;
    }
    sigma.iter().filter(|&&s| s > tol.rank_rel_tol * max).count()
}

/// Numeric rank: the number of singular values above the relative cutoff.
/// The zero matrix has rank 0.
pub fn numeric_rank(a: &Matrix, tol: &Tolerances) -> usize {
    if a.is_empty() || a.iter().all(|z| *z == cx(0.0, 0.0)) {
        return 0;
    }
    let sigma = crate::svd::singular_values(a);
    rank_from_sigma(&sigma, tol)
}

/// The index of a square matrix: the smallest `k >= 0` with
/// `rank(A^{k+1}) = rank(A^k)`. Zero exactly for nonsingular matrices and
/// never larger than `n`.
pub fn matrix_index(a: &Matrix, tol: &Tolerances) -> Result<usize> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "index requires a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    let mut prev_rank = n; // rank(A^0)
    let mut p = Matrix::identity(n, n);
    for k in 0..=n {
        p = &p * a;
        let r = numeric_rank(&p, tol);
        if r == prev_rank {
            return Ok(k);
        }
        prev_rank = r;
    }
    Ok(n)
}

/// The Hartwig-Spindelböck data of a square matrix:
/// `A = U [Sigma K, Sigma L; 0, 0] U*` with `U` unitary, `Sigma` the positive
/// singular values, and `K K* + L L* = I_r`.
///
/// `U` is not unique; consumers must only rely on reconstruction and on
/// quantities invariant under the gauge freedom.
#[derive(Debug, Clone)]
pub struct HSDecomposition {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub k: Matrix,
    pub l: Matrix,
    pub r: usize,
}

impl HSDecomposition {
    pub fn n(&self) -> usize {
        self.u.nrows()
    }

    /// `Sigma K`, the r-by-r core block.
    pub fn core(&self) -> Matrix {
        scale_rows(&self.k, &self.sigma)
    }

    /// `Sigma L`.
    pub fn sigma_l(&self) -> Matrix {
        scale_rows(&self.l, &self.sigma)
    }

    /// Reassemble `U [Sigma K, Sigma L; 0, 0] U*`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.n();
        let r = self.r;
        let mut inner = Matrix::zeros(n, n);
        inner
            .view_mut((0, 0), (r, r))
            .copy_from(&self.core());
        inner
            .view_mut((0, r), (r, n - r))
            .copy_from(&self.sigma_l());
        &self.u * inner * self.u.adjoint()
    }
}

fn scale_rows(m: &Matrix, sigma: &[f64]) -> Matrix {
    let mut out = m.clone();
    for (i, &s) in sigma.iter().enumerate() {
        for j in 0..m.ncols() {
            out[(i, j)] *= s;
        }
    }
    out
}

/// Compute the Hartwig-Spindelböck decomposition from one SVD: `U` is the
/// left singular factor and `(K L)` is the first `r` rows of `V* U`.
pub fn hs_decompose(a: &Matrix, tol: &Tolerances) -> Result<HSDecomposition> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "decomposition requires a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    let dec = svd(a);
    let r = rank_from_sigma(&dec.sigma, tol);
    if r == 0 {
        return Err(Error::ZeroMatrix);
    }
    let kl = (&dec.v_t * &dec.u).rows(0, r).into_owned();
    Ok(HSDecomposition {
        k: kl.columns(0, r).into_owned(),
        l: kl.columns(r, n - r).into_owned(),
        u: dec.u,
        sigma: dec.sigma[..r].to_vec(),
        r,
    })
}

/// The blocks of `U* G U` split at row/column `r`: `[G1 G2; G2* G4]`.
#[derive(Debug, Clone)]
pub struct MetricPartition {
    pub g1: Matrix,
    pub g2: Matrix,
    pub g4: Matrix,
}

impl MetricPartition {
    /// Reassemble the full `U* G U` block matrix.
    pub fn assemble(&self) -> Matrix {
        vcat(
            &hcat(&self.g1, &self.g2),
            &hcat(&self.g2.adjoint(), &self.g4),
        )
    }
}

/// Partition `U* G U` into the `r`/`n-r` blocks used by the canonical forms.
pub fn metric_partition(dec: &HSDecomposition) -> MetricPartition {
    let n = dec.n();
    let r = dec.r;
    let ugu = dec.u.adjoint() * minkowski_metric(n) * &dec.u;
    MetricPartition {
        g1: ugu.view((0, 0), (r, r)).into_owned(),
        g2: ugu.view((0, r), (r, n - r)).into_owned(),
        g4: ugu.view((r, r), (n - r, n - r)).into_owned(),
    }
}

/// `Delta = (K L) U* G U (K*; L*)`, the r-by-r Hermitian block whose
/// nonsingularity is equivalent to `rank(AA~) = rank(A)`.
pub fn delta_matrix(dec: &HSDecomposition) -> Matrix {
    let kl = hcat(&dec.k, &dec.l);
    let ugu = dec.u.adjoint() * minkowski_metric(dec.n()) * &dec.u;
    &kl * ugu * kl.adjoint()
}

/// Full-rank factorization `A = B C` with `B` of full column rank and `C` of
/// full row rank, both of inner dimension `rank(A)`. `B` absorbs the singular
/// values.
pub fn full_rank_factor(a: &Matrix, tol: &Tolerances) -> Result<(Matrix, Matrix)> {
    let dec = svd(a);
    let r = rank_from_sigma(&dec.sigma, tol);
    if r == 0 {
        return Err(Error::ZeroMatrix);
    }
    let mut b = dec.u.columns(0, r).into_owned();
    for (j, &s) in dec.sigma[..r].iter().enumerate() {
        for i in 0..b.nrows() {
            b[(i, j)] *= s;
        }
    }
    let c = dec.v_t.rows(0, r).into_owned();
    Ok((b, c))
}

/// The chained full-rank factorizations
/// `A = B1 C1, C1 B1 = B2 C2, ..., C_{k-1} B_{k-1} = B_k C_k`
/// of length `k = max(Ind(A), 1)`, with `C_k B_k` square nonsingular.
#[derive(Debug, Clone)]
pub struct FullRankChain {
    pub b: Vec<Matrix>,
    pub c: Vec<Matrix>,
}

impl FullRankChain {
    /// Chain length.
    pub fn k(&self) -> usize {
        self.b.len()
    }

    /// `C_k B_k`, nonsingular when the chain completed.
    pub fn tail_product(&self) -> Matrix {
        self.c.last().unwrap() * self.b.last().unwrap()
    }
}

/// Build the factorization chain. Nonsingular input gets the trivial length-1
/// chain. Errors with `NilpotentTermination` when some `C_i B_i` vanishes
/// before step `k`, which happens exactly when `A^k = 0`.
pub fn full_rank_chain(a: &Matrix, tol: &Tolerances) -> Result<FullRankChain> {
    let k = matrix_index(a, tol)?.max(1);
    let mut bs = Vec::with_capacity(k);
    let mut cs = Vec::with_capacity(k);
    let mut m = a.clone();
    for step in 0..k {
        let (b, c) = full_rank_factor(&m, tol).map_err(|e| match e {
            Error::ZeroMatrix => Error::NilpotentTermination { step },
            other => other,
        })?;
        m = &c * &b;
        bs.push(b);
        cs.push(c);
    }
    Ok(FullRankChain { b: bs, c: cs })
}

// --- subspace tests -------------------------------------------------------
//
// Subspace relations are not pointwise residuals; they are decided by rank
// comparisons on concatenated matrices, all at the shared rank tolerance.

/// `range(x) ⊆ range(y)`: rank([y x]) = rank(y).
pub fn range_subset(x: &Matrix, y: &Matrix, tol: &Tolerances) -> bool {
    numeric_rank(&hcat(y, x), tol) == numeric_rank(y, tol)
}

/// `range(x) = range(y)`.
pub fn range_equal(x: &Matrix, y: &Matrix, tol: &Tolerances) -> bool {
    let rx = numeric_rank(x, tol);
    let ry = numeric_rank(y, tol);
    rx == ry && numeric_rank(&hcat(y, x), tol) == ry
}

/// `null(y) ⊆ null(x)`: the rows of `x` lie in the row space of `y`,
/// i.e. rank([x; y]) = rank(y).
pub fn null_superset(x: &Matrix, y: &Matrix, tol: &Tolerances) -> bool {
    numeric_rank(&vcat(x, y), tol) == numeric_rank(y, tol)
}

/// `null(x) = null(y)`.
pub fn null_equal(x: &Matrix, y: &Matrix, tol: &Tolerances) -> bool {
    let rx = numeric_rank(x, tol);
    let ry = numeric_rank(y, tol);
    rx == ry && numeric_rank(&vcat(x, y), tol) == ry
}

/// Orthonormal basis of the null space (right-singular vectors past the rank).
pub fn null_space_basis(a: &Matrix, tol: &Tolerances) -> Matrix {
    let dec = svd(a);
    let r = rank_from_sigma(&dec.sigma, tol);
    dec.v_t.rows(r, a.ncols() - r).adjoint()
}

/// Orthonormal basis of the orthogonal complement of the range
/// (left-singular vectors past the rank).
pub fn range_complement_basis(a: &Matrix, tol: &Tolerances) -> Matrix {
    let dec = svd(a);
    let r = rank_from_sigma(&dec.sigma, tol);
    dec.u.columns(r, a.nrows() - r).into_owned()
}

/// Orthonormal basis of the range (leading left-singular vectors).
pub fn range_basis(a: &Matrix, tol: &Tolerances) -> Matrix {
    let dec = svd(a);
    let r = rank_from_sigma(&dec.sigma, tol);
    dec.u.columns(0, r).into_owned()
}

pub(crate) fn zeros_like(a: &Matrix) -> Matrix {
    DMatrix::from_element(a.ncols(), a.nrows(), Complex64::new(0.0, 0.0))
}
