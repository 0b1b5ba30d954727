//! Checkpoint plans and the two peak-memory cost models.
//!
//! A plan keeps activations 0 = c_0 < c_1 < ... < c_m = n resident and
//! recomputes everything between them during backward. The static model
//! charges every checkpoint for the whole run plus the widest segment
//! recomputation; the dynamic model frees each checkpoint as soon as its
//! gradient is done, so only checkpoints at or below the active segment
//! count. Both costs exclude the profile's base overhead.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PlanError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostModel {
    Static,
    Dynamic,
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            CostModel::Static => "static",
            CostModel::Dynamic => "dynamic",
        })
    }
}

impl FromStr for CostModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "static" => Ok(CostModel::Static),
            "dynamic" => Ok(CostModel::Dynamic),
            other => Err(format!("unknown cost model {other:?}")),
        }
    }
}

/// Strictly increasing checkpoint indices, always containing 0 and the last
/// index of the chain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CheckpointPlan {
    indices: Vec<usize>,
}

impl CheckpointPlan {
    pub fn new(indices: Vec<usize>, last: usize) -> Result<Self, PlanError> {
        match indices.first() {
            None => return Err(PlanError::Empty),
            Some(&0) => {}
            Some(&first) => return Err(PlanError::MissingStart(first)),
        }
        for pair in indices.windows(2) {
            if pair[1] <= pair[0] {
                return Err(PlanError::NotIncreasing {
                    prev: pair[0],
                    next: pair[1],
                });
            }
        }
        let &got = indices.last().expect("nonempty");
        if got > last {
            return Err(PlanError::OutOfRange { index: got, last });
        }
        if got != last {
            return Err(PlanError::MissingEnd { last, got });
        }
        Ok(CheckpointPlan { indices })
    }

    /// Build from interior picks; 0 and `last` are added, and duplicates of
    /// them are tolerated.
    pub fn from_interior(
        interior: impl IntoIterator<Item = usize>,
        last: usize,
    ) -> Result<Self, PlanError> {
        let mut indices = vec![0];
        for i in interior {
            if i == 0 || i == last {
                continue;
            }
            if i > last {
                return Err(PlanError::OutOfRange { index: i, last });
            }
            indices.push(i);
        }
        indices.push(last);
        CheckpointPlan::new(indices, last)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Checkpoints strictly between 0 and the last index.
    pub fn interior(&self) -> &[usize] {
        &self.indices[1..self.indices.len() - 1]
    }

    pub fn last(&self) -> usize {
        *self.indices.last().expect("plans are never empty")
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    /// Consecutive checkpoint pairs, left to right.
    pub fn segments(&self) -> SegmentDecomposition {
        SegmentDecomposition {
            segments: self
                .indices
                .windows(2)
                .map(|w| Segment {
                    left: w[0],
                    right: w[1],
                })
                .collect(),
        }
    }
}

/// One span between consecutive checkpoints. Interior indices are
/// `left+1..right`; both ends are checkpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub left: usize,
    pub right: usize,
}

impl Segment {
    pub fn interior_len(&self) -> usize {
        self.right - self.left - 1
    }
}

/// A plan's spans in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentDecomposition {
    pub segments: Vec<Segment>,
}

impl SegmentDecomposition {
    pub fn iter(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// What one solver decided for one profile.
#[derive(Debug, Clone, Serialize)]
pub struct SolveResult {
    pub plan: CheckpointPlan,
    /// Peak bytes over the base overhead under `model`.
    pub predicted_peak: u64,
    pub model: CostModel,
    pub solver: &'static str,
}

/// ps[t] = sum of sizes[..t], so sums over a..=b are ps[b+1] - ps[a].
pub(crate) fn prefix_sums(sizes: &[u64]) -> Vec<u64> {
    let mut ps = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0u64;
    ps.push(0);
    for &s in sizes {
        acc += s;
        ps.push(acc);
    }
    ps
}

/// Recomputation term of the segment (left, right): the interior sum plus a
/// buffer as large as the biggest activation in [left, right).
///
/// Panics if `left >= right` or `right` is out of range.
pub fn segment_term(sizes: &[u64], left: usize, right: usize) -> u64 {
    assert!(left < right && right < sizes.len(), "bad segment bounds");
    let interior: u64 = sizes[left + 1..right].iter().sum();
    let buffer = *sizes[left..right].iter().max().expect("nonempty span");
    interior + buffer
}

/// Segment term plus the right endpoint's own activation.
pub fn u_value(sizes: &[u64], left: usize, right: usize) -> u64 {
    segment_term(sizes, left, right) + sizes[right]
}

/// Static model: every checkpoint held for the whole run, plus the largest
/// segment interior recomputed in one batch.
///
/// Panics if the plan's last index does not match the profile length.
pub fn static_cost(sizes: &[u64], plan: &CheckpointPlan) -> u64 {
    assert_eq!(plan.last(), sizes.len() - 1, "plan does not fit the chain");
    let checkpoints: u64 = plan.indices().iter().map(|&i| sizes[i]).sum();
    let widest = plan
        .segments()
        .iter()
        .map(|seg| sizes[seg.left + 1..seg.right].iter().sum::<u64>())
        .max()
        .unwrap_or(0);
    checkpoints + widest
}

/// Dynamic model: for each segment (h, r), the backward pass over it holds
/// the checkpoints at or below r, the recomputed interior, and the gradient
/// buffer; the peak is the worst segment.
///
/// Panics if the plan's last index does not match the profile length.
pub fn dynamic_peak(sizes: &[u64], plan: &CheckpointPlan) -> u64 {
    assert_eq!(plan.last(), sizes.len() - 1, "plan does not fit the chain");
    let mut held = sizes[0];
    let mut peak = 0u64;
    for seg in plan.segments().iter() {
        held += sizes[seg.right];
        peak = peak.max(held + segment_term(sizes, seg.left, seg.right));
    }
    peak
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_validation() {
        assert!(CheckpointPlan::new(vec![0, 2, 4], 4).is_ok());
        assert_eq!(CheckpointPlan::new(vec![], 4), Err(PlanError::Empty));
        assert_eq!(
            CheckpointPlan::new(vec![1, 4], 4),
            Err(PlanError::MissingStart(1))
        );
        assert_eq!(
            CheckpointPlan::new(vec![0, 3, 2, 4], 4),
            Err(PlanError::NotIncreasing { prev: 3, next: 2 })
        );
        assert_eq!(
            CheckpointPlan::new(vec![0, 2], 4),
            Err(PlanError::MissingEnd { last: 4, got: 2 })
        );
        assert_eq!(
            CheckpointPlan::new(vec![0, 5], 4),
            Err(PlanError::OutOfRange { index: 5, last: 4 })
        );
    }

    #[test]
    fn from_interior_forces_ends() {
        let plan = CheckpointPlan::from_interior([2], 4).unwrap();
        assert_eq!(plan.indices(), &[0, 2, 4]);
        let plan = CheckpointPlan::from_interior([0, 2, 4], 4).unwrap();
        assert_eq!(plan.indices(), &[0, 2, 4]);
        assert!(CheckpointPlan::from_interior([9], 4).is_err());
    }

    #[test]
    fn segments_of_plan() {
        let plan = CheckpointPlan::new(vec![0, 2, 4], 4).unwrap();
        let segs = plan.segments();
        assert_eq!(
            segs.segments,
            vec![
                Segment { left: 0, right: 2 },
                Segment { left: 2, right: 4 }
            ]
        );
        assert_eq!(segs.segments[0].interior_len(), 1);
    }
}
