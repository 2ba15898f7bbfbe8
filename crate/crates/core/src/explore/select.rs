use std::cmp::Ordering;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{ucb1_score, BanditConfig, ExplorationState};
use crate::error::{Error, Result};
use crate::graph::{NodeId, SocialGraph};

/// `B` friend paths for one origin user. Paths never contain the origin and
/// never repeat a node; different paths may share nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FriendSelection {
    pub origin: NodeId,
    pub paths: Vec<Vec<NodeId>>,
    /// The origin has no out-neighbors, so every walk is empty.
    pub stranded: bool,
}

impl FriendSelection {
    fn stranded(origin: NodeId, b: usize) -> Self {
        FriendSelection {
            origin,
            paths: vec![Vec::new(); b],
            stranded: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomMode {
    Select,
    Walk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionMode {
    Mcts,
    Egreedy,
    RandomSelect,
    RandomWalk,
    /// No friends at all; the recommender sees only the user.
    NoSocial,
}

fn check_origin(u: NodeId, g: &SocialGraph) -> Result<()> {
    if u.idx() >= g.len() {
        return Err(Error::UnknownNode(format!("#{}", u.0)));
    }
    Ok(())
}

#[derive(Debug)]
struct Beam {
    path: Vec<NodeId>,
    score: f64,
}

#[derive(Debug)]
struct Candidate {
    parent: usize,
    /// `None` keeps the parent unchanged (its frontier is exhausted).
    next: Option<NodeId>,
    key: NodeId,
    score: f64,
}

fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then(a.key.cmp(&b.key))
        .then(a.parent.cmp(&b.parent))
}

/// Beam search over friend paths.
///
/// At every depth each live beam proposes its admissible out-neighbors `v`
/// with score `T_b + Q(v) + lambda * U(v)`, where `T_b` is the beam's
/// accumulated score and `U` is measured against the beam's tail. A beam
/// with no admissible neighbor proposes itself unchanged. The best `B`
/// proposals across all beams survive; ties go to the smaller node id, then
/// to the earlier beam. If fewer than `B` distinct paths exist, the ranked
/// list is repeated to fill `B` slots.
pub fn select_friends_mcts(
    u: NodeId,
    cfg: &BanditConfig,
    q: &[f64],
    state: &ExplorationState,
    g: &SocialGraph,
) -> Result<FriendSelection> {
    check_origin(u, g)?;
    let b = cfg.beam_width;
    if g.out(u).is_empty() {
        return Ok(FriendSelection::stranded(u, b));
    }
    let mut beams = vec![Beam {
        path: Vec::with_capacity(cfg.depth),
        score: 0.0,
    }];
    let mut pool = Vec::new();
    for _ in 0..cfg.depth {
        pool.clear();
        let mut extended = false;
        for (bi, beam) in beams.iter().enumerate() {
            let tail = beam.path.last().copied().unwrap_or(u);
            let before = pool.len();
            for &v in g.out(tail) {
                if v == u || beam.path.contains(&v) {
                    continue;
                }
                pool.push(Candidate {
                    parent: bi,
                    next: Some(v),
                    key: v,
                    score: beam.score + ucb1_score(v, tail, q[v.idx()], state, cfg.lambda),
                });
            }
            if pool.len() == before {
                pool.push(Candidate {
                    parent: bi,
                    next: None,
                    key: tail,
                    score: beam.score,
                });
            } else {
                extended = true;
            }
        }
        if !extended {
            break;
        }
        pool.sort_by(rank);
        pool.truncate(b);
        beams = pool
            .iter()
            .map(|c| {
                let parent = &beams[c.parent];
                let mut path = parent.path.clone();
                path.extend(c.next);
                Beam {
                    path,
                    score: c.score,
                }
            })
            .collect();
    }
    let paths = beams.iter().cycle().take(b).map(|bm| bm.path.clone()).collect();
    Ok(FriendSelection {
        origin: u,
        paths,
        stranded: false,
    })
}

fn greedy_pick(candidates: &[NodeId], q: &[f64]) -> NodeId {
    // candidates are ascending, so the first maximum is the smallest id
    let mut best = candidates[0];
    for &v in &candidates[1..] {
        if q[v.idx()] > q[best.idx()] {
            best = v;
        }
    }
    best
}

fn admissible(g: &SocialGraph, tail: NodeId, origin: NodeId, path: &[NodeId], buf: &mut Vec<NodeId>) {
    buf.clear();
    buf.extend(
        g.out(tail)
            .iter()
            .copied()
            .filter(|v| *v != origin && !path.contains(v)),
    );
}

/// `B` independent walks. At each step a uniform draw `p` decides between a
/// greedy move on `Q` and a uniformly random admissible neighbor; with
/// `greedy_below_epsilon` the greedy move is taken when `p < epsilon`.
pub fn select_friends_egreedy<R: Rng + ?Sized>(
    u: NodeId,
    cfg: &BanditConfig,
    q: &[f64],
    g: &SocialGraph,
    rng: &mut R,
) -> Result<FriendSelection> {
    check_origin(u, g)?;
    if g.out(u).is_empty() {
        return Ok(FriendSelection::stranded(u, cfg.beam_width));
    }
    let mut buf = Vec::new();
    let paths = (0..cfg.beam_width)
        .map(|_| {
            let mut path = Vec::with_capacity(cfg.depth);
            let mut tail = u;
            for _ in 0..cfg.depth {
                admissible(g, tail, u, &path, &mut buf);
                if buf.is_empty() {
                    break;
                }
                let p: f64 = rng.gen();
                let greedy = (p < cfg.epsilon) == cfg.greedy_below_epsilon;
                let v = if greedy {
                    greedy_pick(&buf, q)
                } else {
                    buf[rng.gen_range(0..buf.len())]
                };
                path.push(v);
                tail = v;
            }
            path
        })
        .collect();
    Ok(FriendSelection {
        origin: u,
        paths,
        stranded: false,
    })
}

/// Baselines. `Select` draws `L` distinct users uniformly from everyone but
/// the origin (fewer if the graph is smaller); `Walk` is a uniform
/// self-avoiding walk of up to `L` hops.
pub fn select_friends_random<R: Rng + ?Sized>(
    u: NodeId,
    cfg: &BanditConfig,
    mode: RandomMode,
    g: &SocialGraph,
    rng: &mut R,
) -> Result<FriendSelection> {
    check_origin(u, g)?;
    let b = cfg.beam_width;
    match mode {
        RandomMode::Select => {
            let others = g.len() - 1;
            let take = cfg.depth.min(others);
            let paths = (0..b)
                .map(|_| {
                    index::sample(rng, others, take)
                        .into_iter()
                        .map(|i| {
                            let i = i as u32;
                            NodeId(if i >= u.0 { i + 1 } else { i })
                        })
                        .collect()
                })
                .collect();
            Ok(FriendSelection {
                origin: u,
                paths,
                stranded: false,
            })
        }
        RandomMode::Walk => {
            if g.out(u).is_empty() {
                return Ok(FriendSelection::stranded(u, b));
            }
            let mut buf = Vec::new();
            let paths = (0..b)
                .map(|_| {
                    let mut path = Vec::with_capacity(cfg.depth);
                    let mut tail = u;
                    for _ in 0..cfg.depth {
                        admissible(g, tail, u, &path, &mut buf);
                        if buf.is_empty() {
                            break;
                        }
                        let v = buf[rng.gen_range(0..buf.len())];
                        path.push(v);
                        tail = v;
                    }
                    path
                })
                .collect();
            Ok(FriendSelection {
                origin: u,
                paths,
                stranded: false,
            })
        }
    }
}

/// Dispatches on the selection mode.
pub fn select_friends<R: Rng + ?Sized>(
    u: NodeId,
    mode: SelectionMode,
    cfg: &BanditConfig,
    q: &[f64],
    state: &ExplorationState,
    g: &SocialGraph,
    rng: &mut R,
) -> Result<FriendSelection> {
    match mode {
        SelectionMode::Mcts => select_friends_mcts(u, cfg, q, state, g),
        SelectionMode::Egreedy => select_friends_egreedy(u, cfg, q, g, rng),
        SelectionMode::RandomSelect => select_friends_random(u, cfg, RandomMode::Select, g, rng),
        SelectionMode::RandomWalk => select_friends_random(u, cfg, RandomMode::Walk, g, rng),
        SelectionMode::NoSocial => {
            check_origin(u, g)?;
            Ok(FriendSelection {
                origin: u,
                paths: vec![Vec::new(); cfg.beam_width],
                stranded: false,
            })
        }
    }
}
