//! Checkpoint planning and memory replay for layer chains.
//!
//! Training a chain of layers normally keeps every activation alive until
//! the backward pass consumes it. Holding only a subset — checkpoints —
//! and recomputing the rest trades compute for memory. This crate models
//! that trade on linear chains: [`profile`] describes a chain's activation
//! sizes, [`cost`] scores a checkpoint plan under two recomputation
//! policies, [`solvers`] finds optimal plans, and [`simulator`] replays a
//! training step stage by stage to confirm the scores.
//!
//! All sizes are exact byte counts in `u64`; profiles are capped so that
//! no cost can overflow.

pub mod cost;
pub mod error;
pub mod profile;
pub mod queue;
pub mod simulator;
pub mod solvers;

pub use cost::{
    dynamic_peak, segment_term, static_cost, u_value, CheckpointPlan, CostModel, Segment,
    SegmentDecomposition, SolveResult,
};
pub use error::{PlanError, ProfileError, SolveError};
pub use profile::{generate_builtin, generate_random, BuiltinModel, LayerProfile, LayerSpec};
pub use queue::MonotonicQueue;
pub use simulator::{simulate, validate_plan, MemoryTrace, SimMode, TracePoint, ValidationReport};
pub use solvers::{Solver, SolverRegistry};
