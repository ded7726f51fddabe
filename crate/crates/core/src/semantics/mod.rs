//! Truth of processes on intervals of step worlds.

mod eval;
mod oracle;
mod validity;

use serde::{Deserialize, Serialize};

pub use eval::{eval_process, eval_process_expanded, Evaluator};
pub use oracle::{eval_process_oracle, Oracle};
pub use validity::{check_validity_desk_scale, structured_worlds, ValidityVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Cut points the brute-force oracle examines past the last change point end here.
    pub horizon: u64,
    /// Extra cut candidates examined around every boundary grow with this.
    pub probe_depth: usize,
    pub domain_max: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { horizon: 32, probe_depth: 3, domain_max: 31 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalResult {
    pub truth: bool,
    /// Cut points of the top sequencing spine, when there is one and it holds.
    pub witness: Option<Vec<u64>>,
    pub config: EvalConfig,
}
