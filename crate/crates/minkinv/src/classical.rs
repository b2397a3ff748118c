//! The Euclidean generalized inverses the Minkowski constructions build on:
//! Moore-Penrose, Drazin, group and DMP inverses.

use crate::decomp::{
    full_rank_chain, hs_decompose, matrix_index, numeric_rank, svd, zeros_like, HSDecomposition,
};
use crate::matrix::{cx, guarded_inverse, power, Matrix};
use crate::{Error, Result, Tolerances};

/// Moore-Penrose inverse via SVD with reciprocal singular values above the
/// rank cutoff. Total: every matrix (including zero) has one.
pub fn moore_penrose(a: &Matrix, tol: &Tolerances) -> Matrix {
    let r = numeric_rank(a, tol);
    if r == 0 {
        return zeros_like(a);
    }
    let dec = svd(a);
    let mut out = Matrix::zeros(a.ncols(), a.nrows());
    // V_r diag(1/sigma) U_r*
    let vr = dec.v_t.rows(0, r).adjoint();
    let ur_t = dec.u.columns(0, r).adjoint();
    for j in 0..r {
        let inv = cx(1.0 / dec.sigma[j], 0.0);
        let col = vr.column(j) * inv;
        out += col * ur_t.row(j);
    }
    out
}

/// Drazin inverse through the full-rank chain:
/// `A^D = B_1 ... B_k (C_k B_k)^{-(k+1)} C_k ... C_1`.
///
/// Nonsingular input short-circuits to the plain inverse and nilpotent input
/// to the zero matrix.
pub fn drazin(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::ShapeMismatch(format!(
            "Drazin inverse requires a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if n == 0 {
        return Ok(a.clone());
    }
    let k = matrix_index(a, tol)?;
    if k == 0 {
        return guarded_inverse(a, "A (nonsingular route)", tol.cond_max);
    }
    let chain = match full_rank_chain(a, tol) {
        Ok(chain) => chain,
        Err(Error::NilpotentTermination { .. }) | Err(Error::ZeroMatrix) => {
            return Ok(Matrix::zeros(n, n));
        }
        Err(e) => return Err(e),
    };
    let tail_inv = guarded_inverse(&chain.tail_product(), "C_k B_k", tol.cond_max)?;
    let mut x = power(&tail_inv, chain.k() + 1);
    for b in chain.b.iter().rev() {
        x = b * x;
    }
    for c in chain.c.iter().rev() {
        x = x * c;
    }
    Ok(x)
}

/// Drazin inverse from Hartwig-Spindelböck data:
/// `A^D = U [ (SK)^D, ((SK)^D)^2 SL; 0, 0 ] U*` with `SK` the core block.
///
/// The core Drazin inverse is computed recursively by [`drazin`] on the
/// r-by-r block.
pub fn drazin_hs(dec: &HSDecomposition, tol: &Tolerances) -> Result<Matrix> {
    let n = dec.n();
    let r = dec.r;
    let core_d = drazin(&dec.core(), tol)?;
    let mut inner = Matrix::zeros(n, n);
    inner.view_mut((0, 0), (r, r)).copy_from(&core_d);
    inner
        .view_mut((0, r), (r, n - r))
        .copy_from(&(&core_d * &core_d * dec.sigma_l()));
    Ok(&dec.u * inner * dec.u.adjoint())
}

/// Group inverse: the Drazin inverse restricted to index <= 1.
pub fn group_inverse(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let k = matrix_index(a, tol)?;
    if k > 1 {
        return Err(Error::IndexTooLarge { index: k });
    }
    drazin(a, tol)
}

/// DMP inverse `A^{D,dag} = A^D A A^dag`.
pub fn dmp(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    let d = drazin(a, tol)?;
    Ok(d * a * moore_penrose(a, tol))
}

/// Convenience: Drazin inverse of `A` via one owned HS decomposition,
/// used by cross-route tests.
pub fn drazin_via_hs(a: &Matrix, tol: &Tolerances) -> Result<Matrix> {
    match hs_decompose(a, tol) {
        Ok(dec) => drazin_hs(&dec, tol),
        Err(Error::ZeroMatrix) => Ok(Matrix::zeros(a.nrows(), a.ncols())),
        Err(e) => Err(e),
    }
}
