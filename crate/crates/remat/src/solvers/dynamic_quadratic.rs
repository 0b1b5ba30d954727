//! Optimal checkpoints under the dynamic model, O(n^2) reference version.
//!
//! M(i) is the peak of the best plan for the suffix starting at checkpoint
//! i, counting i itself: M(n) = d_n, and M(i) = d_i + min over j in (i, n]
//! of max(M(j), U(i, j)), where U(i, j) is the segment term plus d_j. Ties
//! go to the smallest j. The scan keeps the interior sum and buffer max
//! incrementally, so each row is O(n) with O(1) extra state.

use crate::cost::{dynamic_peak, CostModel, SolveResult};
use crate::error::SolveError;
use crate::profile::LayerProfile;
use crate::solvers::{plan_from_next, Solver};

pub fn solve_dynamic_quadratic(profile: &LayerProfile) -> SolveResult {
    let sizes = profile.sizes();
    let (m, parent) = m_table(sizes);
    let plan = plan_from_next(&parent, profile.last_index());
    debug_assert_eq!(m[0], dynamic_peak(sizes, &plan));
    SolveResult {
        plan,
        predicted_peak: m[0],
        model: CostModel::Dynamic,
        solver: "dynamic-n2",
    }
}

/// Full M and parent tables.
pub(crate) fn m_table(sizes: &[u64]) -> (Vec<u64>, Vec<usize>) {
    let n = sizes.len() - 1;
    let mut m = vec![0u64; n + 1];
    let mut parent: Vec<usize> = (0..=n).collect();
    m[n] = sizes[n];
    for i in (0..n).rev() {
        let mut interior = 0u64; // sum of sizes[i+1..j]
        let mut buffer = sizes[i]; // max of sizes[i..j]
        let mut best_val = u64::MAX;
        let mut best_j = i + 1;
        for (j, &size_j) in sizes.iter().enumerate().take(n + 1).skip(i + 1) {
            let u = interior + buffer + size_j;
            let candidate = m[j].max(u);
            if candidate < best_val {
                best_val = candidate;
                best_j = j;
            }
            interior += size_j;
            buffer = buffer.max(size_j);
        }
        m[i] = sizes[i] + best_val;
        parent[i] = best_j;
    }
    (m, parent)
}

/// Exact dynamic-model solver, quadratic time.
#[derive(Debug, Clone, Copy)]
pub struct DynamicQuadratic;

impl Solver for DynamicQuadratic {
    fn name(&self) -> &'static str {
        "dynamic-n2"
    }

    fn model(&self) -> CostModel {
        CostModel::Dynamic
    }

    fn solve(&self, profile: &LayerProfile) -> Result<SolveResult, SolveError> {
        Ok(solve_dynamic_quadratic(profile))
    }
}
