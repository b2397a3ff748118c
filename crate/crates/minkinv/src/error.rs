use num_complex::Complex64;

use crate::minkowski::ExistenceReport;

/// Errors surfaced by the numerical operations.
///
/// Domain refusals (`NotExists`, `IndexTooLarge`, `ConditionFailed`, ...) mean
/// the requested object is undefined for the input; numerical guards
/// (`NearSingularFactor`, `Singular*`, `SpectrumNotStable`, ...) mean the
/// computation would produce garbage and refused to.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("operation is undefined for the zero matrix")]
    ZeroMatrix,

    #[error(
        "Minkowski inverse does not exist: rank(A~AA~) = {} but rank(A) = {}",
        .report.rank_asaas, .report.rank_a
    )]
    NotExists { report: ExistenceReport },

    #[error("matrix index is {index}, but the operation requires index <= 1")]
    IndexTooLarge { index: usize },

    #[error("near-singular factor {factor}: condition estimate {cond:.3e} exceeds cond_max = {max:.3e}")]
    NearSingularFactor {
        factor: &'static str,
        cond: f64,
        max: f64,
    },

    #[error("Delta block is singular, i.e. rank(AA~) < rank(A): the Minkowski inverse does not exist")]
    SingularDelta,

    #[error("G1 block is singular, i.e. rank(A~A) < rank(A): the Minkowski inverse does not exist")]
    SingularG1,

    #[error("full-rank chain terminated: C_{step} B_{step} = 0, so A^k = 0 (nilpotent input)")]
    NilpotentTermination { step: usize },

    #[error("A^k = 0: the chain formula is undefined for nilpotent input")]
    ZeroPower,

    #[error("limit schedule did not converge after {steps} accepted steps; last residual {last:.3e}")]
    NoConvergence {
        steps: usize,
        last: f64,
        lambdas: Vec<f64>,
        trace: Vec<f64>,
    },

    #[error("integrand spectrum is not stable: min Re(eig(B1~B1)) = {min_re:.6e} <= margin {margin:.3e}")]
    SpectrumNotStable {
        min_re: f64,
        margin: f64,
        eigenvalues: Vec<Complex64>,
    },

    #[error("theorem hypothesis fails: G1^-1 b1 lies outside range((Sigma K)^D), relative residual {residual:.3e}")]
    ConditionFailed { residual: f64 },

    #[error("matrix has full rank: the reduced problem is undefined")]
    FullRank,

    #[error("W V is singular or near-singular (condition estimate {cond:.3e}): the bases do not complement")]
    SingularWV { cond: f64 },

    #[error("bordered matrix A^k + E is numerically singular (condition estimate {cond:.3e})")]
    SingularBordered { cond: f64 },

    #[error("cross-check failed for {context}: the two forms disagree with relative residual {residual:.3e}")]
    CrossCheckFailed {
        context: &'static str,
        residual: f64,
    },

    #[error("eigenvalue computation did not converge")]
    EigenFailure,
}
