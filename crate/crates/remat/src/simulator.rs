//! Stage-by-stage replay of training memory for a checkpoint plan.
//!
//! A training step over a chain with last index n is replayed as 2n + 2
//! phases: a start point with the input resident, n forward stages, n
//! backward stages in reverse layer order, and an end point after
//! teardown. Each stage's memory is sampled after its allocations and
//! before its final release, so the trace records the high-water mark a
//! real allocator would see at stage granularity (sub-stage transients,
//! such as an output coexisting with an input that is freed in the same
//! stage, are not modeled).
//!
//! Three retention policies are replayed:
//!
//! * [`SimMode::None`] — keep every activation until its gradient is done;
//!   no recomputation. Peak is the sum of all activations.
//! * [`SimMode::Static`] — free non-checkpoints during the forward pass;
//!   on reaching a checkpoint in the backward pass, drop rematerialized
//!   activations above it and recompute its whole segment, which then
//!   stays resident until the next checkpoint. Peak matches
//!   [`static_cost`].
//! * [`SimMode::Dynamic`] — like `Static`, but every activation is freed
//!   as soon as its backward stage completes, and recomputation holds a
//!   staging buffer sized by the largest activation in the segment. Peak
//!   matches [`dynamic_peak`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cost::{dynamic_peak, static_cost, CheckpointPlan};
use crate::error::PlanError;
use crate::profile::LayerProfile;

/// Retention policy replayed by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    /// Keep everything; no recomputation.
    None,
    /// Recompute segments; hold each segment until the next checkpoint.
    Static,
    /// Recompute segments; free every activation right after its backward
    /// stage, with a per-segment staging buffer.
    Dynamic,
}

impl SimMode {
    pub const ALL: [SimMode; 3] = [SimMode::None, SimMode::Static, SimMode::Dynamic];

    pub fn name(self) -> &'static str {
        match self {
            SimMode::None => "none",
            SimMode::Static => "static",
            SimMode::Dynamic => "dynamic",
        }
    }
}

impl fmt::Display for SimMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for SimMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SimMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown simulator mode `{s}` (expected none, static, or dynamic)"))
    }
}

/// One sampled phase of the replay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TracePoint {
    pub label: String,
    pub bytes: u64,
}

/// Memory over a full training step, one point per phase.
#[derive(Debug, Clone, Serialize)]
pub struct MemoryTrace {
    pub mode: SimMode,
    pub base_overhead: u64,
    pub peak: u64,
    pub points: Vec<TracePoint>,
}

impl MemoryTrace {
    fn last_layer(&self) -> usize {
        debug_assert!(self.points.len() >= 4 && self.points.len().is_multiple_of(2));
        (self.points.len() - 2) / 2
    }

    /// Highest sample from the start point through the last forward stage.
    pub fn forward_peak(&self) -> u64 {
        let n = self.last_layer();
        self.points[..=n].iter().map(|p| p.bytes).max().unwrap()
    }

    /// Highest sample over the backward stages and the end point.
    pub fn backward_peak(&self) -> u64 {
        let n = self.last_layer();
        self.points[n + 1..].iter().map(|p| p.bytes).max().unwrap()
    }

    /// Render the trace as `phase_index,label,bytes` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phase_index,label,bytes\n");
        for (i, p) in self.points.iter().enumerate() {
            out.push_str(&format!("{i},{},{}\n", p.label, p.bytes));
        }
        out
    }
}

/// Resident set during a replay: base overhead, live activations, and the
/// recompute staging buffer.
struct SimState<'a> {
    sizes: &'a [u64],
    live: Vec<bool>,
    buffer: u64,
    total: u64,
    base: u64,
}

impl<'a> SimState<'a> {
    fn new(base: u64, sizes: &'a [u64]) -> Self {
        SimState {
            sizes,
            live: vec![false; sizes.len()],
            buffer: 0,
            total: base,
            base,
        }
    }

    fn alloc(&mut self, i: usize) {
        assert!(!self.live[i], "double allocation of activation {i}");
        self.live[i] = true;
        self.total += self.sizes[i];
    }

    fn free(&mut self, i: usize) {
        assert!(self.live[i], "freeing dead activation {i}");
        self.live[i] = false;
        self.total -= self.sizes[i];
    }

    fn is_live(&self, i: usize) -> bool {
        self.live[i]
    }

    fn set_buffer(&mut self, bytes: u64) {
        self.total = self.total - self.buffer + bytes;
        self.buffer = bytes;
    }

    fn total(&self) -> u64 {
        self.audit();
        self.total
    }

    fn audit(&self) {
        debug_assert_eq!(
            self.total,
            self.base
                + self.buffer
                + self
                    .live
                    .iter()
                    .zip(self.sizes)
                    .filter(|(l, _)| **l)
                    .map(|(_, s)| s)
                    .sum::<u64>()
        );
    }
}

/// Replay one training step and return the sampled trace.
///
/// The plan must end at the profile's last layer; activations and the
/// base overhead are the only tracked memory.
pub fn simulate(
    profile: &LayerProfile,
    plan: &CheckpointPlan,
    mode: SimMode,
) -> Result<MemoryTrace, PlanError> {
    let n = profile.last_index();
    if plan.last() != n {
        return Err(PlanError::MissingEnd {
            last: n,
            got: plan.last(),
        });
    }
    let sizes = profile.sizes();
    let mut st = SimState::new(profile.base_overhead(), sizes);
    let mut points = Vec::with_capacity(2 * n + 2);

    st.alloc(0);
    points.push(TracePoint {
        label: "start".into(),
        bytes: st.total(),
    });

    for i in 1..=n {
        st.alloc(i);
        if mode != SimMode::None && !plan.contains(i - 1) {
            st.free(i - 1);
        }
        points.push(TracePoint {
            label: format!("forward L{i}"),
            bytes: st.total(),
        });
    }

    for l in (1..=n).rev() {
        if mode != SimMode::None && plan.contains(l) {
            let pos = plan
                .indices()
                .binary_search(&l)
                .expect("contains() verified membership");
            let left = plan.indices()[pos - 1];
            if mode == SimMode::Static {
                for k in l + 1..=n {
                    if st.is_live(k) && !plan.contains(k) {
                        st.free(k);
                    }
                }
            }
            for k in left + 1..l {
                st.alloc(k);
            }
            if mode == SimMode::Dynamic {
                let staged = *sizes[left..l].iter().max().expect("segment is nonempty");
                st.set_buffer(staged);
            }
        }
        points.push(TracePoint {
            label: format!("backward L{l}"),
            bytes: st.total(),
        });
        if mode != SimMode::Static {
            st.free(l);
        }
    }

    st.set_buffer(0);
    for k in 1..=n {
        if st.is_live(k) {
            st.free(k);
        }
    }
    points.push(TracePoint {
        label: "end".into(),
        bytes: st.total(),
    });

    let peak = points.iter().map(|p| p.bytes).max().unwrap();
    Ok(MemoryTrace {
        mode,
        base_overhead: profile.base_overhead(),
        peak,
        points,
    })
}

/// A simulated trace checked against the closed-form peak for its mode.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub mode: SimMode,
    /// Closed-form peak for the mode, base overhead included.
    pub predicted_peak: u64,
    pub simulated_peak: u64,
    pub simulated_forward_peak: u64,
    pub simulated_backward_peak: u64,
    pub forward_exceeds_backward: bool,
    pub matches_prediction: bool,
}

/// Simulate a plan and compare the trace peak with the mode's formula.
pub fn validate_plan(
    profile: &LayerProfile,
    plan: &CheckpointPlan,
    mode: SimMode,
) -> Result<ValidationReport, PlanError> {
    let trace = simulate(profile, plan, mode)?;
    let sizes = profile.sizes();
    let over_base = match mode {
        SimMode::None => sizes.iter().sum::<u64>(),
        SimMode::Static => static_cost(sizes, plan),
        SimMode::Dynamic => dynamic_peak(sizes, plan),
    };
    let predicted_peak = profile.base_overhead() + over_base;
    let forward = trace.forward_peak();
    let backward = trace.backward_peak();
    Ok(ValidationReport {
        mode,
        predicted_peak,
        simulated_peak: trace.peak,
        simulated_forward_peak: forward,
        simulated_backward_peak: backward,
        forward_exceeds_backward: forward > backward,
        matches_prediction: trace.peak == predicted_peak,
    })
}
