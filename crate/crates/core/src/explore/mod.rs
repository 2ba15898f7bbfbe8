//! Higher-order friend selection.
//!
//! Each user gets `B` friend paths of up to `L` hops per day. Candidates are
//! ranked by an exploitation value `Q` (one of four reward sources) plus a
//! UCB1-style exploration bonus driven by how often a user has already been
//! picked as somebody's friend.

mod payout;
mod select;

use serde::{Deserialize, Serialize};

pub use payout::PayoutTable;
pub use select::{
    select_friends, select_friends_egreedy, select_friends_mcts, select_friends_random,
    FriendSelection, RandomMode, SelectionMode,
};

use crate::error::{Error, Result};
use crate::graph::{NodeId, SocialGraph};
use crate::rng::{self, purpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExploitationStrategy {
    /// Running mean of the friend's own daily F1 under the recommender.
    RsF1,
    /// PageRank on the static follow graph.
    Spr,
    /// PageRank on the day's consumer -> creator activity graph.
    Dpr,
    /// Cumulative payout, min-max normalised per day.
    Payout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditConfig {
    pub beam_width: usize,
    pub depth: usize,
    pub lambda: f64,
    pub epsilon: f64,
    /// Take the greedy branch when the uniform draw falls below epsilon.
    /// `false` flips it so epsilon is the probability of a random move.
    pub greedy_below_epsilon: bool,
    pub seed: u64,
}

impl Default for BanditConfig {
    fn default() -> Self {
        BanditConfig {
            beam_width: 3,
            depth: 10,
            lambda: 1.0,
            epsilon: 0.7,
            greedy_below_epsilon: true,
            seed: 0,
        }
    }
}

impl BanditConfig {
    pub fn validate(&self) -> Result<()> {
        if self.beam_width == 0 {
            return Err(Error::config("beam_width", "must be positive"));
        }
        if self.depth == 0 {
            return Err(Error::config("depth", "must be positive"));
        }
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return Err(Error::config("lambda", "must be a finite value >= 0"));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::config("epsilon", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct F1Record {
    pub sum: f64,
    pub count: u32,
}

impl F1Record {
    pub fn mean(&self) -> Option<f64> {
        (self.count > 0).then(|| self.sum / f64::from(self.count))
    }
}

/// Per-user bandit statistics, indexed by [`NodeId`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplorationState {
    pub day: i64,
    /// `N_t(v)`: how many times `v` has been picked as a friend, in units of
    /// whole paths (each path occurrence contributes `1/B`).
    pub visit_counts: Vec<f64>,
    pub rs_f1: Vec<F1Record>,
}

impl ExplorationState {
    pub fn new(n_users: usize) -> Self {
        ExplorationState {
            day: 0,
            visit_counts: vec![0.0; n_users],
            rs_f1: vec![F1Record::default(); n_users],
        }
    }

    /// Seeds `N_0` with `B` uniformly drawn friend sets per user.
    pub fn initialize(g: &SocialGraph, cfg: &BanditConfig) -> Self {
        let mut state = Self::new(g.len());
        for u in g.nodes() {
            let mut r = rng::stream(cfg.seed, &[purpose::INIT_PATHS, u64::from(u.0)]);
            let sel = select_friends_random(u, cfg, RandomMode::Select, g, &mut r)
                .expect("origin drawn from the graph");
            state.update_visit_counts(&sel);
        }
        state
    }

    pub fn visits(&self, v: NodeId) -> f64 {
        self.visit_counts[v.idx()]
    }

    /// Each occurrence of `v` across the `B` paths adds `1/B` to `N(v)`.
    pub fn update_visit_counts(&mut self, selection: &FriendSelection) {
        let b = selection.paths.len();
        if b == 0 {
            return;
        }
        let inc = 1.0 / b as f64;
        for v in selection.paths.iter().flatten() {
            self.visit_counts[v.idx()] += inc;
        }
    }

    pub fn record_rs_f1(&mut self, u: NodeId, day_f1: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&day_f1) {
            return Err(Error::InvalidArgument(format!(
                "daily F1 {day_f1} outside [0, 1]"
            )));
        }
        let rec = &mut self.rs_f1[u.idx()];
        rec.sum += day_f1;
        rec.count += 1;
        Ok(())
    }

    pub fn rs_f1_mean(&self, u: NodeId) -> Option<f64> {
        self.rs_f1[u.idx()].mean()
    }
}

/// Precomputed reward sources for one day. Only the one matching the active
/// strategy has to be present.
#[derive(Debug, Clone, Default)]
pub struct RewardCaches {
    pub spr: Option<Vec<f64>>,
    pub dpr: Option<Vec<f64>>,
    pub payout: Option<Vec<f64>>,
}

/// `Q_t(v)`. Users never evaluated under `RsF1` score 0.
pub fn exploitation_value(
    v: NodeId,
    strategy: ExploitationStrategy,
    state: &ExplorationState,
    caches: &RewardCaches,
) -> Result<f64> {
    let cached = |table: &Option<Vec<f64>>, what: &str| -> Result<f64> {
        table
            .as_ref()
            .map(|t| t[v.idx()])
            .ok_or_else(|| Error::config("strategy", format!("{what} values not available")))
    };
    match strategy {
        ExploitationStrategy::RsF1 => Ok(state.rs_f1_mean(v).unwrap_or(0.0)),
        ExploitationStrategy::Spr => cached(&caches.spr, "social PageRank"),
        ExploitationStrategy::Dpr => cached(&caches.dpr, "activity PageRank"),
        ExploitationStrategy::Payout => cached(&caches.payout, "payout"),
    }
}

/// `Q_t` for every user at once.
pub fn exploitation_table(
    strategy: ExploitationStrategy,
    state: &ExplorationState,
    caches: &RewardCaches,
) -> Result<Vec<f64>> {
    (0..state.visit_counts.len() as u32)
        .map(|v| exploitation_value(NodeId(v), strategy, state, caches))
        .collect()
}

/// `U_t(v) = sqrt(ln N(c) / (N(v) + 1))`, with the logarithm floored at 0 so
/// that counts below one (never or fractionally visited `c`) give no bonus.
#[inline]
pub fn exploration_utility(v: NodeId, current: NodeId, state: &ExplorationState) -> f64 {
    let n_cur = state.visits(current);
    let log = if n_cur > 1.0 { n_cur.ln() } else { 0.0 };
    (log / (state.visits(v) + 1.0)).sqrt()
}

#[inline]
pub fn ucb1_score(v: NodeId, current: NodeId, q_v: f64, state: &ExplorationState, lambda: f64) -> f64 {
    q_v + lambda * exploration_utility(v, current, state)
}
