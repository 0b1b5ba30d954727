//! Evenly spaced baseline: about sqrt(n) checkpoints.

use crate::cost::{dynamic_peak, static_cost, CheckpointPlan, CostModel, SolveResult};
use crate::error::SolveError;
use crate::profile::LayerProfile;
use crate::solvers::Solver;

/// Place ceil(sqrt(n)) - 1 interior checkpoints at ceil(k*n / ceil(sqrt(n)))
/// and report the plan's cost under `model`.
pub fn solve_sqrt_baseline(profile: &LayerProfile, model: CostModel) -> SolveResult {
    let n = profile.last_index();
    let m = ceil_sqrt(n);
    let interior = (1..m).map(|k| (k * n).div_ceil(m));
    let plan = CheckpointPlan::from_interior(interior, n).expect("spaced indices are valid");
    let predicted_peak = match model {
        CostModel::Static => static_cost(profile.sizes(), &plan),
        CostModel::Dynamic => dynamic_peak(profile.sizes(), &plan),
    };
    SolveResult {
        plan,
        predicted_peak,
        model,
        solver: "sqrt",
    }
}

fn ceil_sqrt(n: usize) -> usize {
    let r = n.isqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

/// Baseline solver; reports the dynamic objective unless configured
/// otherwise.
#[derive(Debug, Clone, Copy)]
pub struct SqrtBaseline {
    model: CostModel,
}

impl SqrtBaseline {
    pub fn new(model: CostModel) -> Self {
        SqrtBaseline { model }
    }
}

impl Default for SqrtBaseline {
    fn default() -> Self {
        SqrtBaseline::new(CostModel::Dynamic)
    }
}

impl Solver for SqrtBaseline {
    fn name(&self) -> &'static str {
        "sqrt"
    }

    fn model(&self) -> CostModel {
        self.model
    }

    fn solve(&self, profile: &LayerProfile) -> Result<SolveResult, SolveError> {
        Ok(solve_sqrt_baseline(profile, self.model))
    }
}
