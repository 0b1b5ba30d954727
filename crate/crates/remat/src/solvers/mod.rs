//! Planning strategies behind one trait, selected by name at runtime.

mod brute;
mod dynamic_linear;
mod dynamic_quadratic;
mod sqrt;
mod static_dp;

pub use brute::{brute_force_dynamic, brute_force_static, BruteForce, BRUTE_FORCE_LIMIT};
pub use dynamic_linear::{solve_dynamic_linear, DynamicLinear};
pub use dynamic_quadratic::{solve_dynamic_quadratic, DynamicQuadratic};
pub use sqrt::{solve_sqrt_baseline, SqrtBaseline};
pub use static_dp::{solve_static_dp, StaticDp};

use crate::cost::{CheckpointPlan, CostModel, SolveResult};
use crate::error::SolveError;
use crate::profile::LayerProfile;

/// One planning strategy.
pub trait Solver: Send + Sync {
    /// Registry name; also the CLI spelling.
    fn name(&self) -> &'static str;
    /// Cost model the predicted peak is reported under.
    fn model(&self) -> CostModel;
    fn solve(&self, profile: &LayerProfile) -> Result<SolveResult, SolveError>;
}

/// Name-keyed collection of solvers.
pub struct SolverRegistry {
    entries: Vec<Box<dyn Solver>>,
}

impl SolverRegistry {
    pub fn empty() -> Self {
        SolverRegistry {
            entries: Vec::new(),
        }
    }

    /// All built-in solvers: static-dp, dynamic-n2, dynamic-linear, sqrt,
    /// brute-static, brute-dynamic.
    pub fn with_defaults() -> Self {
        let mut reg = SolverRegistry::empty();
        reg.register(Box::new(StaticDp));
        reg.register(Box::new(DynamicQuadratic));
        reg.register(Box::new(DynamicLinear));
        reg.register(Box::new(SqrtBaseline::default()));
        reg.register(Box::new(BruteForce::new(CostModel::Static)));
        reg.register(Box::new(BruteForce::new(CostModel::Dynamic)));
        reg
    }

    /// Add a solver. On a name clash the earlier registration wins lookups.
    pub fn register(&mut self, solver: Box<dyn Solver>) {
        self.entries.push(solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Solver> {
        self.entries
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Solver> {
        self.entries.iter().map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|s| s.name()).collect()
    }
}

impl Default for SolverRegistry {
    fn default() -> Self {
        SolverRegistry::with_defaults()
    }
}

/// Follow successor pointers from index 0 to `last` and build the plan.
pub(crate) fn plan_from_next(next: &[usize], last: usize) -> CheckpointPlan {
    let mut indices = Vec::new();
    let mut cur = 0;
    loop {
        indices.push(cur);
        if cur == last {
            break;
        }
        debug_assert!(next[cur] > cur, "successor chain must advance");
        cur = next[cur];
    }
    CheckpointPlan::new(indices, last).expect("successor chains yield valid plans")
}

/// Follow predecessor pointers from `last` down to index 0 and build the plan.
pub(crate) fn plan_from_prev(prev: &[usize], last: usize) -> CheckpointPlan {
    let mut indices = Vec::new();
    let mut cur = last;
    loop {
        indices.push(cur);
        if cur == 0 {
            break;
        }
        debug_assert!(prev[cur] < cur, "predecessor chain must advance");
        cur = prev[cur];
    }
    indices.reverse();
    CheckpointPlan::new(indices, last).expect("predecessor chains yield valid plans")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let reg = SolverRegistry::with_defaults();
        assert_eq!(
            reg.names(),
            vec![
                "static-dp",
                "dynamic-n2",
                "dynamic-linear",
                "sqrt",
                "brute-static",
                "brute-dynamic"
            ]
        );
        assert!(reg.get("dynamic-linear").is_some());
        assert!(reg.get("nope").is_none());
        assert_eq!(reg.get("sqrt").unwrap().model(), CostModel::Dynamic);
        assert_eq!(reg.get("brute-static").unwrap().model(), CostModel::Static);
    }
}
