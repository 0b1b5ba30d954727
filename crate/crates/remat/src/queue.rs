//! Sliding-window minimum over (index, key) pairs.

use std::collections::VecDeque;

/// Monotonic min-queue.
///
/// Invariants: indices increase strictly from front to back, and keys are
/// non-decreasing from front to back, so the front is always the minimum of
/// the live window. `push` drops entries with keys strictly greater than the
/// new key; entries with equal keys are kept, so the front stays the
/// smallest index among tied minima.
#[derive(Debug, Clone, Default)]
pub struct MonotonicQueue<K: Ord + Copy> {
    items: VecDeque<(usize, K)>,
}

impl<K: Ord + Copy> MonotonicQueue<K> {
    pub fn new() -> Self {
        MonotonicQueue {
            items: VecDeque::new(),
        }
    }

    /// Append an entry. `index` must be larger than every index already held.
    pub fn push(&mut self, index: usize, key: K) {
        debug_assert!(self.items.back().is_none_or(|&(i, _)| i < index));
        while self.items.back().is_some_and(|&(_, k)| k > key) {
            self.items.pop_back();
        }
        self.items.push_back((index, key));
    }

    /// Drop entries with index below `min_index` (the window's left edge).
    pub fn expire_below(&mut self, min_index: usize) {
        while self.items.front().is_some_and(|&(i, _)| i < min_index) {
            self.items.pop_front();
        }
    }

    /// Current minimum and its index, if the window is non-empty.
    pub fn min(&self) -> Option<(usize, K)> {
        self.items.front().copied()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn front_tracks_minimum() {
        let keys = [5u64, 3, 4, 1, 1, 6, 2];
        let mut q = MonotonicQueue::new();
        for (i, &k) in keys.iter().enumerate() {
            q.push(i, k);
            let min = keys[..=i].iter().copied().min().unwrap();
            assert_eq!(q.min().unwrap().1, min);
        }
        // shrink the window from the left and re-check against a scan
        for lo in 1..keys.len() {
            q.expire_below(lo);
            let min = keys[lo..].iter().copied().min().unwrap();
            assert_eq!(q.min().unwrap().1, min);
        }
    }

    #[test]
    fn equal_keys_keep_earliest_index() {
        let mut q = MonotonicQueue::new();
        q.push(0, 7u64);
        q.push(1, 7u64);
        assert_eq!(q.min(), Some((0, 7)));
        assert_eq!(q.len(), 2);
    }
}
