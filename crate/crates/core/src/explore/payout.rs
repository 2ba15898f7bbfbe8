use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::SocialGraph;

/// Per-user payout events (`user<TAB>day<TAB>amount`).
#[derive(Debug, Clone, Default)]
pub struct PayoutTable {
    /// (user index, day, amount), in file order.
    events: Vec<(usize, i64, f64)>,
}

impl PayoutTable {
    pub fn load(path: &Path, g: &SocialGraph) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut events = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 {
                return Err(Error::parse(path, i + 1, "expected user<TAB>day<TAB>amount"));
            }
            let user = g.require(f[0].trim())?;
            let day: i64 = f[1]
                .trim()
                .parse()
                .map_err(|_| Error::parse(path, i + 1, "day must be an integer"))?;
            let amount: f64 = f[2]
                .trim()
                .parse()
                .map_err(|_| Error::parse(path, i + 1, "amount must be a decimal"))?;
            if !(amount >= 0.0) || !amount.is_finite() {
                return Err(Error::parse(path, i + 1, "amount must be non-negative"));
            }
            events.push((user.idx(), day, amount));
        }
        Ok(PayoutTable { events })
    }

    pub fn from_events(events: Vec<(usize, i64, f64)>) -> Self {
        PayoutTable { events }
    }

    /// Cumulative payout through `day` per user, min-max scaled to [0, 1].
    /// All-equal totals map to 0.
    pub fn normalized_through(&self, day: i64, n_users: usize) -> Vec<f64> {
        let mut total = vec![0.0; n_users];
        for &(u, d, a) in &self.events {
            if d <= day {
                total[u] += a;
            }
        }
        let lo = total.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = total.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(hi > lo) {
            return vec![0.0; n_users];
        }
        total.iter().map(|t| (t - lo) / (hi - lo)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_respects_day_cutoff() {
        let t = PayoutTable::from_events(vec![(0, 1, 2.0), (1, 1, 4.0), (1, 3, 100.0), (2, 2, 1.0)]);
        let n = t.normalized_through(2, 3);
        assert_eq!(n, vec![0.5, 1.0, 0.25].iter().map(|x| (x * 4.0 - 1.0) / 3.0).collect::<Vec<_>>());
        assert_eq!(t.normalized_through(0, 3), vec![0.0; 3]);
    }
}
