//! Helpers shared by the integration suites: profile builders, seeded
//! random instances, and cost oracles written straight from the
//! definitions (no prefix sums, no incremental state) so the optimized
//! implementations have something independent to disagree with.
#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use remat::{CheckpointPlan, LayerProfile, LayerSpec};

pub fn profile_from(sizes: &[u64]) -> LayerProfile {
    profile_with_base(sizes, 0)
}

pub fn profile_with_base(sizes: &[u64], base: u64) -> LayerProfile {
    let specs = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| LayerSpec::from_size(format!("l{i}"), s))
        .collect();
    LayerProfile::new(specs, base).expect("test sizes are valid")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Chain with last index `n`, sizes uniform in [1, max].
pub fn random_sizes(rng: &mut ChaCha8Rng, n: usize, max: u64) -> Vec<u64> {
    (0..=n).map(|_| rng.gen_range(1..=max)).collect()
}

/// Plan for a chain with last index `n`, each interior index kept with
/// probability 1/2.
pub fn random_plan(rng: &mut ChaCha8Rng, n: usize) -> CheckpointPlan {
    let interior = (1..n).filter(|_| rng.gen_bool(0.5));
    CheckpointPlan::from_interior(interior, n).expect("indices are in range")
}

/// Segment-retention objective, from the definition: all checkpoints stay
/// resident, and the widest segment's recomputed interior joins them.
pub fn oracle_static(sizes: &[u64], plan: &CheckpointPlan) -> u64 {
    let picks = plan.indices();
    let kept: u64 = picks.iter().map(|&c| sizes[c]).sum();
    let widest = picks
        .windows(2)
        .map(|w| sizes[w[0] + 1..w[1]].iter().sum::<u64>())
        .max()
        .expect("plans have at least two checkpoints");
    kept + widest
}

/// Early-free objective, from the definition: at the moment checkpoint r's
/// segment is recomputed, everything checkpointed up to r is resident,
/// plus the segment interior, plus a staging slot holding the largest
/// activation recomputed from the left neighbour h.
pub fn oracle_dynamic(sizes: &[u64], plan: &CheckpointPlan) -> u64 {
    let picks = plan.indices();
    (1..picks.len())
        .map(|t| {
            let (h, r) = (picks[t - 1], picks[t]);
            let kept: u64 = picks[..=t].iter().map(|&c| sizes[c]).sum();
            let interior: u64 = sizes[h + 1..r].iter().sum();
            let staged = *sizes[h..r].iter().max().expect("segment is nonempty");
            kept + interior + staged
        })
        .max()
        .expect("plans have at least one segment")
}

/// Every admissible plan for a chain with last index `n`.
pub fn all_plans(n: usize) -> Vec<CheckpointPlan> {
    assert!((1..=20).contains(&n), "enumeration only makes sense when small");
    (0u32..1 << (n - 1))
        .map(|mask| {
            let interior = (1..n).filter(move |i| mask >> (i - 1) & 1 == 1);
            CheckpointPlan::from_interior(interior, n).expect("in range")
        })
        .collect()
}
