//! Optimal checkpoints under the dynamic model in O(n).
//!
//! Same recurrence as the quadratic solver: M(i) = d_i + min over j of
//! max(M(j), U(i, j)). Two monotone facts make the scan linear. First, a
//! candidate j is useful only while no later-scanned checkpoint has a
//! smaller M, so the live candidates form a stack with M strictly rising
//! toward recent entries; within it M rises toward smaller indices while
//! U(i, .) falls, so max(M, U) is minimized where the two cross. Second,
//! U(i, .) only grows as i decreases while M is fixed, so that crossing
//! only ever moves toward smaller indices. A pointer walk from the previous
//! minimizer therefore visits each candidate at most once overall.
//!
//! The walk compares M(j) against U(i, j), whose buffer term is the max
//! activation in [i, j). That window gains one element on the left each
//! iteration and otherwise only shrinks on the right, which a max deque
//! serves in amortized O(1). When the minimizer steps back to the
//! stepped-from candidate (one past the crossing), the window is not
//! regrown; a carried scalar max covers the gap until the next walk
//! inevitably returns through it.

use std::collections::VecDeque;

use crate::cost::{dynamic_peak, prefix_sums, CostModel, SolveResult};
use crate::error::SolveError;
use crate::profile::LayerProfile;
use crate::solvers::{plan_from_next, Solver};

pub fn solve_dynamic_linear(profile: &LayerProfile) -> SolveResult {
    let sizes = profile.sizes();
    let state = DynamicDpState::run(sizes);
    let plan = plan_from_next(&state.parent, profile.last_index());
    debug_assert_eq!(state.m[0], dynamic_peak(sizes, &plan));
    SolveResult {
        plan,
        predicted_peak: state.m[0],
        model: CostModel::Dynamic,
        solver: "dynamic-linear",
    }
}

/// M and parent tables computed in one linear pass.
pub(crate) struct DynamicDpState {
    pub m: Vec<u64>,
    pub parent: Vec<usize>,
}

impl DynamicDpState {
    pub(crate) fn run(sizes: &[u64]) -> Self {
        let n = sizes.len() - 1;
        let ps = prefix_sums(sizes);
        let mut m = vec![0u64; n + 1];
        let mut parent: Vec<usize> = (0..=n).collect();
        m[n] = sizes[n];

        // Undominated candidates (index, M), pushed at the back as i falls:
        // indices strictly decrease and M strictly increases toward the
        // back. Evictions pop the back, so surviving positions are stable.
        let mut cands: Vec<(usize, u64)> = Vec::with_capacity(16);
        cands.push((n, m[n]));
        let mut window = WindowMax::new(sizes);
        // Walk start for the next row: a position in `cands`, plus the max
        // of sizes[i..start_index] when the start sits right of the shrunk
        // window (None when the window itself reaches the start).
        let mut start_pos = 0usize;
        let mut carried_max: Option<u64> = None;

        for i in (0..n).rev() {
            window.grow_left(i);
            if let Some(cm) = carried_max.as_mut() {
                *cm = (*cm).max(sizes[i]);
            }

            let mut pos = start_pos;
            let mut j = cands[pos].0;
            debug_assert!(j > i);
            let mut u = ps[j] - ps[i + 1] + carried_max.unwrap_or_else(|| window.max()) + sizes[j];
            // (position, U, window max over [i, index)) of the entry the
            // walk last stepped away from
            let mut stepped_from: Option<(usize, u64, u64)> = None;
            while u >= cands[pos].1 && pos + 1 < cands.len() {
                let max_here = carried_max.take().unwrap_or_else(|| window.max());
                stepped_from = Some((pos, u, max_here));
                pos += 1;
                j = cands[pos].0;
                window.shrink_to(j - 1);
                u = ps[j] - ps[i + 1] + window.max() + sizes[j];
            }
            debug_assert!(
                carried_max.is_none() || stepped_from.is_some(),
                "a carried start always walks at least one step"
            );

            let stop_val = cands[pos].1.max(u);
            let (choice_pos, choice_val, next_carried) = match stepped_from {
                Some((from_pos, from_u, from_max)) => {
                    let from_val = cands[from_pos].1.max(from_u);
                    if from_val < stop_val {
                        (from_pos, from_val, Some(from_max))
                    } else {
                        (pos, stop_val, None)
                    }
                }
                None => (pos, stop_val, None),
            };

            m[i] = sizes[i] + choice_val;
            parent[i] = cands[choice_pos].0;
            start_pos = choice_pos;
            carried_max = next_carried;

            if i > 0 {
                while cands.last().is_some_and(|&(_, mv)| mv >= m[i]) {
                    cands.pop();
                }
                // the chosen entry has M < m[i], so it survived
                debug_assert!(choice_pos < cands.len());
                cands.push((i, m[i]));
            }
        }
        DynamicDpState { m, parent }
    }
}

/// Max over a window that grows leftward one index at a time and otherwise
/// only shrinks on the right. Stored indices carry strictly increasing
/// sizes from front to back; the back is the maximum.
struct WindowMax<'a> {
    sizes: &'a [u64],
    deque: VecDeque<usize>,
}

impl<'a> WindowMax<'a> {
    fn new(sizes: &'a [u64]) -> Self {
        WindowMax {
            sizes,
            deque: VecDeque::new(),
        }
    }

    fn grow_left(&mut self, i: usize) {
        while self
            .deque
            .front()
            .is_some_and(|&f| self.sizes[f] <= self.sizes[i])
        {
            self.deque.pop_front();
        }
        self.deque.push_front(i);
    }

    /// Drop indices above `hi`: the window becomes [left, hi].
    fn shrink_to(&mut self, hi: usize) {
        while self.deque.back().is_some_and(|&b| b > hi) {
            self.deque.pop_back();
        }
    }

    fn max(&self) -> u64 {
        self.sizes[*self.deque.back().expect("window is never empty")]
    }
}

/// Exact dynamic-model solver, linear time.
#[derive(Debug, Clone, Copy)]
pub struct DynamicLinear;

impl Solver for DynamicLinear {
    fn name(&self) -> &'static str {
        "dynamic-linear"
    }

    fn model(&self) -> CostModel {
        CostModel::Dynamic
    }

    fn solve(&self, profile: &LayerProfile) -> Result<SolveResult, SolveError> {
        Ok(solve_dynamic_linear(profile))
    }
}
