use serde::{Deserialize, Serialize};

/// Multistart optimizer budget. Restarts use independent random streams
/// derived from `seed`, so results do not depend on thread scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// A run has converged once a step improves the value by less than this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 50, max_iters: 500, tol: 1e-12, seed: 0 }
    }
}
