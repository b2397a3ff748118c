//! Seeded random instances for property tests and benchmarks.
//!
//! The general family conjugates `blockdiag(C, J)` by a Haar-ish unitary,
//! where `C` is a well-conditioned random core and `J` a nilpotent block of
//! prescribed nilpotency index; this pins `rank` and `Ind(A)` exactly and is
//! then rejection-sampled on existence of the Minkowski inverse (failures are
//! measure-zero, so rejections are rare). The canonical family keeps the
//! conjugating unitary trivial, which makes the integrand spectrum of the
//! integral representation provably positive — the stable side of that
//! dichotomy is otherwise hard to hit by chance.
//!
//! Everything is driven by explicit seeds; batch generation derives one
//! stream per instance so the result is identical in parallel and sequential
//! builds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::decomp::matrix_index;
use crate::exec::map_indexed;
use crate::matrix::{cond2, cx, Matrix};
use crate::minkowski::minkowski_exists;
use crate::{Error, Result, Tolerances};

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn complex_gaussian<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    let scale = 0.5_f64.sqrt();
    Matrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cx(re * scale, im * scale)
    })
}

/// Unitary matrix from the QR factorization of a complex Gaussian sample,
/// with the phase of each R diagonal absorbed so the distribution does not
/// favor any quadrant.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    let g = complex_gaussian(n, n, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { cx(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random `n x n` instance with `Ind(A) = index` and an existing Minkowski
/// inverse, rejection-sampled. Requires `1 <= index <= n - 1` so the
/// nilpotent block fits beside a nonempty core.
pub fn random_instance<R: Rng>(
    n: usize,
    index: usize,
    rng: &mut R,
    tol: &Tolerances,
) -> Result<Matrix> {
    if index == 0 || index + 1 > n {
        return Err(Error::ShapeMismatch(format!(
            "cannot build an {n}x{n} instance of index {index}"
        )));
    }
    for _ in 0..200 {
        // core size: at least 1, leaving room for the nilpotent block
        let t_max = n - index;
        let t = rng.random_range(1..=t_max);
        // singular values pinned to [0.7, 1.6]: eigenvalue moduli are then
        // bounded below by 0.7, which keeps every chain tail the downstream
        // formulas invert O(1)-conditioned
        let core = {
            let u = random_unitary(t, rng);
            let v = random_unitary(t, rng);
            let mut d = Matrix::zeros(t, t);
            for i in 0..t {
                d[(i, i)] = cx(0.7 + 0.9 * rng.random_range(0.0..1.0), 0.0);
            }
            u * d * v.adjoint()
        };
        debug_assert!(cond2(&core) < 16.0 / 4.9);
        let mut inner = Matrix::zeros(n, n);
        inner.view_mut((0, 0), (t, t)).copy_from(&core);
        // one nilpotent Jordan block of size `index` (ones on the
        // superdiagonal), rest zeros
        for j in 0..index - 1 {
            inner[(t + j, t + j + 1)] = cx(1.0, 0.0);
        }
        let u = random_unitary(n, rng);
        let a = &u * inner * u.adjoint();

        if matrix_index(&a, tol)? == index
            && minkowski_exists(&a, tol).exists
            && existence_margin(&a, tol) > 0.05
        {
            return Ok(a);
        }
    }
    Err(Error::ShapeMismatch(format!(
        "no existing instance found for n = {n}, index = {index} after 200 draws"
    )))
}

/// Distance of the instance from the nonexistence boundary: the smaller of
/// the least singular values of the `Delta` and `G1` blocks (both have
/// operator norm at most 1). Sampling only instances with a healthy margin
/// keeps every inverse route O(1)-conditioned, which is what lets property
/// suites assert agreement at 1e-8 instead of hand-waving.
fn existence_margin(a: &Matrix, tol: &Tolerances) -> f64 {
    let Ok(dec) = crate::decomp::hs_decompose(a, tol) else {
        return 0.0;
    };
    let delta = crate::decomp::delta_matrix(&dec);
    let g1 = crate::decomp::metric_partition(&dec).g1;
    let smin = |m: &Matrix| -> f64 {
        if m.is_empty() {
            return 1.0;
        }
        crate::svd::singular_values(m)
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min)
    };
    smin(&delta).min(smin(&g1))
}

/// Singular instance in canonical position: `A = [Sigma M; 0]` with `M`
/// row-orthonormal and the singular values distinct and descending. For this
/// family the first full-rank factor satisfies `B~B = Sigma^2`, so the
/// integral representation's spectral precondition holds by construction.
pub fn canonical_stable_instance<R: Rng>(n: usize, rank: usize, rng: &mut R) -> Matrix {
    assert!(rank >= 1 && rank <= n);
    // distinct descending singular values in [0.6, 0.6 + rank]
    let mut sigma: Vec<f64> = (0..rank)
        .map(|i| 0.6 + i as f64 + 0.3 * rng.random_range(0.0..1.0))
        .collect();
    sigma.sort_by(|a, b| b.partial_cmp(a).unwrap());

    // row-orthonormal M via QR of a Gaussian sample's adjoint
    let g = complex_gaussian(n, rank, rng);
    let q = g.qr().q(); // n x rank, orthonormal columns
    let m = q.adjoint(); // rank x n, orthonormal rows

    let mut a = Matrix::zeros(n, n);
    for i in 0..rank {
        for j in 0..n {
            a[(i, j)] = m[(i, j)] * sigma[i];
        }
    }
    a
}

/// Deterministic batch of existing instances cycling `n` over `3..=8` and the
/// index over `1..=3` (skipping combinations the dimension cannot host).
/// Instance `i` draws from its own seed-derived stream, so batches are
/// identical across parallel and sequential builds.
pub fn instance_set(count: usize, seed: u64, tol: &Tolerances) -> Vec<Matrix> {
    let tol = *tol;
    map_indexed(count, move |i| {
        let n = 3 + (i % 6);
        let index = 1 + (i / 6) % 3;
        let index = index.min(n - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(i as u64 + 1)));
        random_instance(n, index, &mut rng, &tol).expect("instance generation failed")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::rel_diff;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random_unitary(6, &mut rng);
        let id = Matrix::identity(6, 6);
        assert!(rel_diff(&(u.adjoint() * &u), &id) < 1e-12);
    }

    #[test]
    fn instances_have_requested_index_and_exist() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (n, index) in [(4, 1), (5, 2), (6, 3)] {
            let a = random_instance(n, index, &mut rng, &tol).unwrap();
            assert_eq!(matrix_index(&a, &tol).unwrap(), index);
            assert!(minkowski_exists(&a, &tol).exists);
        }
    }

    #[test]
    fn instance_set_is_deterministic() {
        let tol = Tolerances::default();
        let s1 = instance_set(8, 123, &tol);
        let s2 = instance_set(8, 123, &tol);
        for (a, b) in s1.iter().zip(&s2) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn canonical_instances_are_singular_with_distinct_sigma() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = canonical_stable_instance(5, 3, &mut rng);
        assert_eq!(crate::decomp::numeric_rank(&a, &tol), 3);
        assert!(minkowski_exists(&a, &tol).exists);
    }

    #[test]
    fn rejects_impossible_index() {
        let tol = Tolerances::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(random_instance(3, 3, &mut rng, &tol).is_err());
        assert!(random_instance(3, 0, &mut rng, &tol).is_err());
    }
}
