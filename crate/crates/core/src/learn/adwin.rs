//! Adaptive-windowing change detector over a stream of values in [0, 1].
//!
//! The window is kept as an exponential histogram: rows of buckets whose
//! sizes double per row, at most five buckets per row. A change is signaled
//! when some split of the window into old/new halves shows a mean difference
//! beyond the variance-aware confidence bound; the window then drops its
//! oldest buckets until no such split remains. A looser confidence level
//! provides the warning state.

use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

const MAX_BUCKETS_PER_ROW: usize = 5;
const MIN_WINDOW: u64 = 10;
const MIN_SUBWINDOW: u64 = 5;
const CHECK_INTERVAL: u64 = 8;

/// Outcome of feeding one value to the detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DriftStatus {
    Stable,
    Warning,
    Drift,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct Bucket {
    sum: f64,
    m2: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Adwin {
    drift_confidence: f64,
    warning_confidence: f64,
    /// rows[i] holds buckets of 2^i elements; front = newest.
    rows: Vec<VecDeque<Bucket>>,
    width: u64,
    inserts: u64,
}

impl Adwin {
    pub fn new(drift_confidence: f64, warning_confidence: f64) -> Self {
        Self {
            drift_confidence,
            warning_confidence,
            rows: vec![VecDeque::new()],
            width: 0,
            inserts: 0,
        }
    }

    /// Number of values currently inside the window.
    pub fn len(&self) -> u64 {
        self.width
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0
    }

    /// Mean of the current window.
    pub fn mean(&self) -> f64 {
        let (n, sum, _) = self.totals();
        if n > 0.0 {
            sum / n
        } else {
            0.0
        }
    }

    fn totals(&self) -> (f64, f64, f64) {
        let mut n = 0.0;
        let mut sum = 0.0;
        let mut m2 = 0.0;
        for (row, buckets) in self.rows.iter().enumerate() {
            let count = (1u64 << row) as f64;
            for b in buckets {
                // Chan's combine of (n, sum, m2) with the bucket.
                let nb = count;
                let total = n + nb;
                let delta = b.sum / nb - if n > 0.0 { sum / n } else { 0.0 };
                if n > 0.0 {
                    m2 += b.m2 + delta * delta * n * nb / total;
                } else {
                    m2 = b.m2;
                }
                n = total;
                sum += b.sum;
            }
        }
        (n, sum, m2)
    }

    fn insert(&mut self, value: f64) {
        self.rows[0].push_front(Bucket {
            sum: value,
            m2: 0.0,
        });
        self.width += 1;
        // Compress: merging the two oldest buckets of an overfull row into
        // one bucket of the next row preserves totals exactly.
        let mut row = 0;
        while row < self.rows.len() {
            if self.rows[row].len() > MAX_BUCKETS_PER_ROW {
                let b_old = self.rows[row].pop_back().expect("overfull row");
                let b_new = self.rows[row].pop_back().expect("overfull row");
                let count = (1u64 << row) as f64;
                let delta = b_old.sum / count - b_new.sum / count;
                let merged = Bucket {
                    sum: b_old.sum + b_new.sum,
                    m2: b_old.m2 + b_new.m2 + delta * delta * count / 2.0,
                };
                if row + 1 == self.rows.len() {
                    self.rows.push(VecDeque::new());
                }
                self.rows[row + 1].push_front(merged);
            }
            row += 1;
        }
    }

    fn drop_oldest_bucket(&mut self) {
        for row in (0..self.rows.len()).rev() {
            if let Some(_b) = self.rows[row].pop_back() {
                self.width -= 1 << row;
                return;
            }
        }
    }

    /// Whether some old/new split differs beyond the bound at `confidence`;
    /// returns whether the newer side's mean is the higher one.
    fn has_cut(&self, confidence: f64) -> Option<bool> {
        let (n, sum, m2) = self.totals();
        if n < MIN_WINDOW as f64 {
            return None;
        }
        let variance = (m2 / n).max(0.0);
        let delta_prime = confidence / (n.ln().max(1.0));
        let ln_term = (2.0 / delta_prime).ln();

        let mut n0 = 0.0;
        let mut sum0 = 0.0;
        // Oldest to newest: highest rows first, back of each row first.
        for row in (0..self.rows.len()).rev() {
            let count = (1u64 << row) as f64;
            for b in self.rows[row].iter().rev() {
                n0 += count;
                sum0 += b.sum;
                let n1 = n - n0;
                if n0 < MIN_SUBWINDOW as f64 || n1 < MIN_SUBWINDOW as f64 {
                    continue;
                }
                let m = 1.0 / (1.0 / n0 + 1.0 / n1);
                let eps = (2.0 / m * variance * ln_term).sqrt() + 2.0 / (3.0 * m) * ln_term;
                let mean0 = sum0 / n0;
                let mean1 = (sum - sum0) / n1;
                if (mean0 - mean1).abs() > eps {
                    return Some(mean1 > mean0);
                }
            }
        }
        None
    }

    /// Feeds one value; returns the window state.
    pub fn update(&mut self, value: f64) -> DriftStatus {
        self.insert(value);
        self.inserts += 1;
        if self.inserts % CHECK_INTERVAL != 0 || self.width < MIN_WINDOW {
            return DriftStatus::Stable;
        }

        // The window always forgets across a confirmed change, but only a
        // change towards higher values (worse error) is signaled; an
        // improving stream just shrinks the window quietly.
        let mut worsened = false;
        let mut drifted = false;
        while let Some(up) = self.has_cut(self.drift_confidence) {
            self.drop_oldest_bucket();
            drifted = true;
            worsened |= up;
        }
        if drifted && worsened {
            DriftStatus::Drift
        } else if matches!(self.has_cut(self.warning_confidence), Some(true)) {
            DriftStatus::Warning
        } else {
            DriftStatus::Stable
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_stream_never_drifts() {
        let mut d = Adwin::new(0.002, 0.05);
        for _ in 0..10_000 {
            assert_eq!(d.update(0.0), DriftStatus::Stable);
        }
        assert_eq!(d.len(), 10_000);
    }

    #[test]
    fn mean_step_detected_within_300_samples() {
        let mut d = Adwin::new(0.002, 0.05);
        for _ in 0..1000 {
            d.update(0.0);
        }
        let mut detected_at = None;
        for i in 0..300 {
            if d.update(1.0) == DriftStatus::Drift {
                detected_at = Some(i);
                break;
            }
        }
        assert!(detected_at.is_some(), "no drift within 300 samples");
    }

    #[test]
    fn window_shrinks_on_drift() {
        let mut d = Adwin::new(0.002, 0.05);
        for _ in 0..2000 {
            d.update(0.0);
        }
        let before = d.len();
        let mut drifted = false;
        for _ in 0..500 {
            if d.update(1.0) == DriftStatus::Drift {
                drifted = true;
                break;
            }
        }
        assert!(drifted);
        assert!(d.len() < before, "window must forget the old regime");
    }

    #[test]
    fn warning_precedes_or_accompanies_drift() {
        let mut d = Adwin::new(0.002, 0.05);
        for _ in 0..1000 {
            d.update(0.1);
        }
        let mut saw_warning_or_drift = false;
        for _ in 0..400 {
            match d.update(0.9) {
                DriftStatus::Warning | DriftStatus::Drift => {
                    saw_warning_or_drift = true;
                    break;
                }
                DriftStatus::Stable => {}
            }
        }
        assert!(saw_warning_or_drift);
    }

    #[test]
    fn window_mean_tracks_contents() {
        let mut d = Adwin::new(0.002, 0.05);
        for _ in 0..100 {
            d.update(0.5);
        }
        assert!((d.mean() - 0.5).abs() < 1e-9);
    }
}
