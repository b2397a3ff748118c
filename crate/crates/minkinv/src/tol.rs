use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every operation in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value cutoff for numeric rank: sigma_i counts while
    /// sigma_i > rank_rel_tol * sigma_max.
    pub rank_rel_tol: f64,
    /// Relative Frobenius residual below which an equation is considered
    /// satisfied.
    pub eq_rel_tol: f64,
    /// Condition-number ceiling for the factors that the formulas invert
    /// (Delta, G1, CC~, B~B, C_k B_k, WV, A^k + E).
    pub cond_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_rel_tol: 1e-10,
            eq_rel_tol: 1e-8,
            cond_max: 1e12,
        }
    }
}

impl Tolerances {
    /// Validated constructor: all fields positive and `rank_rel_tol < 1`.
    pub fn new(rank_rel_tol: f64, eq_rel_tol: f64, cond_max: f64) -> Option<Self> {
        let ok = rank_rel_tol > 0.0
            && rank_rel_tol < 1.0
            && eq_rel_tol > 0.0
            && cond_max > 0.0
            && rank_rel_tol.is_finite()
            && eq_rel_tol.is_finite()
            && cond_max.is_finite();
        ok.then_some(Self {
            rank_rel_tol,
            eq_rel_tol,
            cond_max,
        })
    }

    pub fn with_eq_rel_tol(mut self, eq_rel_tol: f64) -> Self {
        self.eq_rel_tol = eq_rel_tol;
        self
    }

    pub fn with_rank_rel_tol(mut self, rank_rel_tol: f64) -> Self {
        self.rank_rel_tol = rank_rel_tol;
        self
    }
}
