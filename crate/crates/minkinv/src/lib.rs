//! Generalized inverses of dense complex matrices in Minkowski space.
//!
//! The Minkowski space here is `C^n` equipped with the indefinite inner product
//! `(x, y) = <x, G y>`, where `G = diag(1, -1, ..., -1)` is the Minkowski metric.
//! Replacing the conjugate transpose by the Minkowski adjoint `A~ = G A* F`
//! turns the familiar Moore-Penrose inverse into the *Minkowski inverse* `A^m`,
//! and blending it with the Drazin inverse yields the *m-DMP inverse*
//! `A^{D,m} = A^D A A^m`, the central object of this crate.
//!
//! What the crate provides:
//!
//! * [`metric`] — the metric matrix and the Minkowski adjoint;
//! * [`decomp`] — numeric rank, matrix index, the Hartwig-Spindelböck
//!   decomposition, full-rank factorizations and chains;
//! * [`classical`] — Moore-Penrose, Drazin, group and DMP inverses;
//! * [`minkowski`] — the Minkowski inverse and the m-DMP inverse computed by
//!   several independent routes (definitional, canonical-form, full-rank chain,
//!   composite), plus the dual m-DMP and m-core specializations;
//! * [`representations`] — limit and integral representations with convergence
//!   diagnostics;
//! * [`solvers`] — the projected linear system, the constrained least-norm
//!   problem, and a condensed Cramer rule;
//! * [`verify`] — residual reports for every defining equation system and the
//!   characterization theorems;
//! * [`io`] — Matrix Market and JSON exchange formats;
//! * [`gen`] — seeded random instances for property testing;
//! * [`fixtures`] — built-in reference problems with known inverses.
//!
//! Entries are `Complex64` throughout; real problems are the zero-imaginary
//! special case. All operations are pure functions on immutable values and are
//! safe to call concurrently. With the default `parallel` feature the
//! embarrassingly parallel inner loops (Cramer determinants, quadrature panels,
//! limit steps, batch generation) run on rayon; disabling the feature yields a
//! fully sequential build with identical results.

pub mod classical;
pub mod decomp;
mod error;
mod exec;
pub mod fixtures;
pub mod gen;
pub mod io;
pub mod matrix;
pub mod metric;
pub mod minkowski;
pub mod representations;
pub mod solvers;
mod svd;
pub mod tol;
pub mod verify;

pub use error::Error;
pub use matrix::{Matrix, Vector};
pub use tol::Tolerances;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Which generalized inverse to compute; dispatch for the CLI and `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GinvKind {
    MoorePenrose,
    Drazin,
    Group,
    Dmp,
    Minkowski,
    Mdmp,
    DualMdmp,
    MCore,
}

impl std::str::FromStr for GinvKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mp" | "moore-penrose" | "pinv" => Ok(Self::MoorePenrose),
            "drazin" => Ok(Self::Drazin),
            "group" => Ok(Self::Group),
            "dmp" => Ok(Self::Dmp),
            "minkowski" | "mink" => Ok(Self::Minkowski),
            "mdmp" => Ok(Self::Mdmp),
            "dual-mdmp" | "dualmdmp" => Ok(Self::DualMdmp),
            "mcore" | "m-core" => Ok(Self::MCore),
            other => Err(format!("unknown inverse kind `{other}`")),
        }
    }
}
