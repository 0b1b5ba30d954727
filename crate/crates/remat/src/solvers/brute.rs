//! Exhaustive search over checkpoint subsets.
//!
//! Both chain endpoints are always held, so a chain with last index n has
//! 2^(n-1) admissible plans, one per subset of the interior. Costs are
//! evaluated straight off the mask without building a plan, and only the
//! winner is materialized. Guarded to short chains; this exists as an
//! oracle for the DP solvers, not as a practical planner.

use crate::cost::{dynamic_peak, static_cost, CheckpointPlan, CostModel, SolveResult};
use crate::error::SolveError;
use crate::profile::LayerProfile;
use crate::solvers::Solver;

/// Largest last-index the exhaustive solvers accept (2^24 masks).
pub const BRUTE_FORCE_LIMIT: usize = 25;

/// Minimum static cost by exhaustive search.
pub fn brute_force_static(profile: &LayerProfile) -> Result<SolveResult, SolveError> {
    brute_force(profile, CostModel::Static)
}

/// Minimum dynamic peak by exhaustive search.
pub fn brute_force_dynamic(profile: &LayerProfile) -> Result<SolveResult, SolveError> {
    brute_force(profile, CostModel::Dynamic)
}

fn brute_force(profile: &LayerProfile, model: CostModel) -> Result<SolveResult, SolveError> {
    let sizes = profile.sizes();
    let n = profile.last_index();
    if n > BRUTE_FORCE_LIMIT {
        return Err(SolveError::TooLarge {
            layers: n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }

    let eval = |mask: u32| -> u64 {
        match model {
            CostModel::Static => eval_static(sizes, mask),
            CostModel::Dynamic => eval_dynamic(sizes, mask),
        }
    };

    let mut best_mask = 0u32;
    let mut best_cost = eval(0);
    let mut best_count = 0u32;
    for mask in 1..(1u32 << (n - 1)) {
        let cost = eval(mask);
        let count = mask.count_ones();
        if cost < best_cost
            || (cost == best_cost
                && (count < best_count || (count == best_count && lex_less(mask, best_mask))))
        {
            best_mask = mask;
            best_cost = cost;
            best_count = count;
        }
    }

    let interior = (0..n.saturating_sub(1)).filter(|b| best_mask >> b & 1 == 1).map(|b| b + 1);
    let plan = CheckpointPlan::from_interior(interior, n).expect("mask bits are in range");
    debug_assert_eq!(
        best_cost,
        match model {
            CostModel::Static => static_cost(sizes, &plan),
            CostModel::Dynamic => dynamic_peak(sizes, &plan),
        }
    );
    Ok(SolveResult {
        plan,
        predicted_peak: best_cost,
        model,
        solver: match model {
            CostModel::Static => "brute-static",
            CostModel::Dynamic => "brute-dynamic",
        },
    })
}

/// True when a's checkpoint set precedes b's in lexicographic order read
/// from layer 1 upward: the lowest differing bit belongs to a.
fn lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    debug_assert_ne!(diff, 0);
    a >> diff.trailing_zeros() & 1 == 1
}

fn is_checkpoint(mask: u32, index: usize, last: usize) -> bool {
    index == 0 || index == last || mask >> (index - 1) & 1 == 1
}

fn eval_static(sizes: &[u64], mask: u32) -> u64 {
    let last = sizes.len() - 1;
    let mut ck_sum = 0u64;
    let mut run = 0u64;
    let mut widest = 0u64;
    for (i, &d) in sizes.iter().enumerate() {
        if is_checkpoint(mask, i, last) {
            ck_sum += d;
            widest = widest.max(run);
            run = 0;
        } else {
            run += d;
        }
    }
    ck_sum + widest
}

fn eval_dynamic(sizes: &[u64], mask: u32) -> u64 {
    let last = sizes.len() - 1;
    let mut ck_prefix = sizes[0];
    let mut run_sum = 0u64;
    let mut run_max = sizes[0];
    let mut peak = 0u64;
    for (r, &d) in sizes.iter().enumerate().skip(1) {
        if is_checkpoint(mask, r, last) {
            ck_prefix += d;
            peak = peak.max(ck_prefix + run_sum + run_max);
            run_sum = 0;
            run_max = d;
        } else {
            run_sum += d;
            run_max = run_max.max(d);
        }
    }
    peak
}

/// Exhaustive solver for either cost model, limited to short chains.
#[derive(Debug, Clone, Copy)]
pub struct BruteForce {
    model: CostModel,
}

impl BruteForce {
    pub fn new(model: CostModel) -> Self {
        BruteForce { model }
    }
}

impl Solver for BruteForce {
    fn name(&self) -> &'static str {
        match self.model {
            CostModel::Static => "brute-static",
            CostModel::Dynamic => "brute-dynamic",
        }
    }

    fn model(&self) -> CostModel {
        self.model
    }

    fn solve(&self, profile: &LayerProfile) -> Result<SolveResult, SolveError> {
        brute_force(profile, self.model)
    }
}
