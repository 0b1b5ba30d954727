//! Optimal checkpoints under the static model, O(n^3).
//!
//! For a fixed recompute budget s, the cheapest chain of checkpoints whose
//! segment interiors all fit in s is a sliding-window DP: best[i] = d_i +
//! min best[h] over the h whose interior sum to i stays within s, with the
//! window minimum served by a monotonic queue. The final index is forced to
//! be a checkpoint, so the per-budget answer is s + best[n]. Candidate
//! budgets are every contiguous interior sum plus 0; the overall answer is
//! the best (budget, chain) pair, ties going to the smaller budget.

use std::collections::BTreeSet;

use crate::cost::{prefix_sums, static_cost, CostModel, SolveResult};
use crate::error::SolveError;
use crate::profile::LayerProfile;
use crate::queue::MonotonicQueue;
use crate::solvers::{plan_from_prev, Solver};

pub fn solve_static_dp(profile: &LayerProfile) -> SolveResult {
    let sizes = profile.sizes();
    let n = profile.last_index();
    let ps = prefix_sums(sizes);

    let mut budgets = BTreeSet::new();
    budgets.insert(0u64);
    for a in 1..n {
        let mut run = 0u64;
        for &size in &sizes[a..n] {
            run += size;
            budgets.insert(run);
        }
    }

    let mut best: Option<(u64, u64)> = None; // (total cost, budget)
    for &budget in &budgets {
        let state = StaticDpState::run(sizes, &ps, budget);
        let total = budget + state.best[n];
        if best.is_none_or(|(c, _)| total < c) {
            best = Some((total, budget));
        }
    }
    let (total, budget) = best.expect("budget set always holds 0");

    let state = StaticDpState::run(sizes, &ps, budget);
    let plan = plan_from_prev(&state.parent, n);
    let predicted_peak = static_cost(sizes, &plan);
    debug_assert!(predicted_peak <= total);
    SolveResult {
        plan,
        predicted_peak,
        model: CostModel::Static,
        solver: "static-dp",
    }
}

/// Chain DP under one fixed budget: cheapest checkpoint chain from 0 to each
/// index whose segment interiors never exceed the budget.
pub(crate) struct StaticDpState {
    pub best: Vec<u64>,
    pub parent: Vec<usize>,
}

impl StaticDpState {
    pub(crate) fn run(sizes: &[u64], ps: &[u64], budget: u64) -> Self {
        let n = sizes.len() - 1;
        let mut best = vec![0u64; n + 1];
        let mut parent = vec![usize::MAX; n + 1];
        best[0] = sizes[0];
        let mut window = MonotonicQueue::new();
        window.push(0, best[0]);
        let mut lo = 0usize;
        for i in 1..=n {
            // smallest h with interior sum (h, i) within budget; monotone in i
            while ps[i] - ps[lo + 1] > budget {
                lo += 1;
            }
            window.expire_below(lo);
            let (h, v) = window.min().expect("window spans at least i-1");
            best[i] = sizes[i] + v;
            parent[i] = h;
            window.push(i, best[i]);
        }
        StaticDpState { best, parent }
    }
}

/// Exact static-model solver.
#[derive(Debug, Clone, Copy)]
pub struct StaticDp;

impl Solver for StaticDp {
    fn name(&self) -> &'static str {
        "static-dp"
    }

    fn model(&self) -> CostModel {
        CostModel::Static
    }

    fn solve(&self, profile: &LayerProfile) -> Result<SolveResult, SolveError> {
        Ok(solve_static_dp(profile))
    }
}
