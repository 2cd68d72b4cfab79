//! Classical association baselines and exhaustive QUBO search.

pub mod brute;
pub mod greedy;
pub mod hungarian;

pub use brute::{brute_force_qubo, decode_topk, quality_ratio, Decoded, BRUTE_FORCE_CAP};
pub use greedy::gnn_solve;
pub use hungarian::{augmented_matrix, hungarian_solve, solve_square};

use crate::error::Result;
use crate::mtda::{Assignment, CostMatrix};

/// Pluggable per-frame association solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Hungarian,
    Gnn,
}

impl Solver {
    pub fn solve(self, cost: &CostMatrix) -> Result<Assignment> {
        match self {
            Solver::Hungarian => hungarian_solve(cost),
            Solver::Gnn => gnn_solve(cost),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Solver::Hungarian => "hungarian",
            Solver::Gnn => "gnn",
        }
    }
}

impl std::str::FromStr for Solver {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hungarian" => Ok(Solver::Hungarian),
            "gnn" => Ok(Solver::Gnn),
            other => Err(crate::error::Error::InvalidArgument(format!("unknown solver {other}"))),
        }
    }
}
