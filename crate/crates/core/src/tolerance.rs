use serde::{Deserialize, Serialize};

pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_GROUP_TOLERANCE: f64 = 1e-9;

/// Numerical thresholds shared by grouping, rank decisions and identifiability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Singular values at or below `rank_relative·σ_max` count as zero.
    #[serde(default = "default_rank")]
    pub rank_relative: f64,
    /// Eigenvalues within `group_relative·(1 + |λ|)` share a group.
    #[serde(default = "default_group")]
    pub group_relative: f64,
}

fn default_rank() -> f64 {
    DEFAULT_RANK_TOLERANCE
}

fn default_group() -> f64 {
    DEFAULT_GROUP_TOLERANCE
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank_relative: DEFAULT_RANK_TOLERANCE,
            group_relative: DEFAULT_GROUP_TOLERANCE,
        }
    }
}
