use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;

use num_complex::Complex64;

fn angle(z: Complex64) -> f64 {
    let a = z.arg().rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Largest arc between consecutive angles, wrap-around included.
pub fn circular_gap(values: &[Complex64]) -> f64 {
    assert!(!values.is_empty(), "gap of an empty set is undefined");
    let mut angles: Vec<f64> = values.iter().map(|&z| angle(z)).collect();
    angles.sort_by(f64::total_cmp);
    let wrap = angles[0] + TAU - angles[angles.len() - 1];
    angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
}

/// Maintains the largest circular gap as points are added one at a time.
#[derive(Clone, Debug, Default)]
pub struct GapTracker {
    // Non-negative f64 bit patterns sort like the values.
    angles: BTreeSet<u64>,
    gaps: BTreeMap<u64, usize>,
}

impl GapTracker {
    pub fn new() -> Self {
        Self::default()
    }

    fn arc(from: u64, to: u64) -> f64 {
        if from == to {
            TAU
        } else {
            (f64::from_bits(to) - f64::from_bits(from)).rem_euclid(TAU)
        }
    }

    fn add_gap(&mut self, g: f64) {
        *self.gaps.entry(g.to_bits()).or_default() += 1;
    }

    fn remove_gap(&mut self, g: f64) {
        let key = g.to_bits();
        let count = self.gaps.get_mut(&key).expect("gap was recorded");
        *count -= 1;
        if *count == 0 {
            self.gaps.remove(&key);
        }
    }

    /// Adds a point and returns the current largest gap.
    pub fn push(&mut self, z: Complex64) -> f64 {
        let a = angle(z).to_bits();
        if self.angles.is_empty() {
            self.angles.insert(a);
            self.add_gap(TAU);
        } else if !self.angles.contains(&a) {
            let first = *self.angles.first().expect("nonempty");
            let last = *self.angles.last().expect("nonempty");
            let pred = self.angles.range(..a).next_back().copied().unwrap_or(last);
            let succ = self.angles.range(a..).next().copied().unwrap_or(first);
            self.remove_gap(Self::arc(pred, succ));
            self.add_gap(Self::arc(pred, a));
            self.add_gap(Self::arc(a, succ));
            self.angles.insert(a);
        }
        self.max_gap()
    }

    pub fn max_gap(&self) -> f64 {
        self.gaps.keys().next_back().map_or(TAU, |&g| f64::from_bits(g))
    }
}

/// Smallest `N ≤ n_max` whose first `N` values leave no gap above `eps`.
pub fn first_gap_below(values: impl IntoIterator<Item = Complex64>, eps: f64, n_max: usize) -> Option<(usize, f64)> {
    let mut tracker = GapTracker::new();
    for (i, z) in values.into_iter().take(n_max).enumerate() {
        let gap = tracker.push(z);
        if gap <= eps {
            return Some((i + 1, gap));
        }
    }
    None
}
