//! Social and activity graphs over interned user ids, plus PageRank.
//!
//! User ids are interned in ascending lexicographic order, so comparing two
//! [`NodeId`]s is the same as comparing the ids they stand for. Everything
//! downstream that breaks ties "by smaller user id" relies on this.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// Directed follow graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct SocialGraph {
    ids: Vec<String>,
    index: HashMap<String, NodeId>,
    adj: Vec<Vec<NodeId>>,
}

impl SocialGraph {
    /// Builds a graph over `nodes`; every edge endpoint must be one of them.
    /// Parallel edges collapse into one.
    pub fn from_edges<I, S>(nodes: I, edges: &[(String, String)]) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ids: Vec<String> = nodes
            .into_iter()
            .map(Into::into)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let index: HashMap<String, NodeId> = ids
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), NodeId(i as u32)))
            .collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (src, dst) in edges {
            let s = *index
                .get(src)
                .ok_or_else(|| Error::UnknownNode(src.clone()))?;
            let d = *index
                .get(dst)
                .ok_or_else(|| Error::UnknownNode(dst.clone()))?;
            if s == d {
                return Err(Error::InvalidArgument(format!("self-loop on `{src}`")));
            }
            adj[s.idx()].push(d);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(SocialGraph { ids, index, adj })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, n: NodeId) -> &str {
        &self.ids[n.idx()]
    }

    pub fn node(&self, id: &str) -> Option<NodeId> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<NodeId> {
        self.node(id).ok_or_else(|| Error::UnknownNode(id.to_owned()))
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.ids.len() as u32).map(NodeId)
    }

    /// Sorted out-neighbors.
    #[inline]
    pub fn out(&self, n: NodeId) -> &[NodeId] {
        &self.adj[n.idx()]
    }

    /// Out-neighbors of `id`, by id, in ascending order.
    pub fn neighbors(&self, id: &str) -> Result<Vec<&str>> {
        let n = self.require(id)?;
        Ok(self.out(n).iter().map(|&v| self.id(v)).collect())
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(s, list)| list.iter().map(move |&d| (NodeId(s as u32), d)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn pagerank(&self, cfg: &PageRankConfig) -> Result<Vec<f64>> {
        let edges: Vec<_> = self.edges().collect();
        pagerank(self.len(), &edges, cfg)
    }
}

/// Reads `src<TAB>dst` lines. Blank lines are skipped.
pub fn read_edge_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                path,
                lineno,
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        let (src, dst) = (fields[0].trim(), fields[1].trim());
        if src.is_empty() || dst.is_empty() || src.contains(char::is_whitespace) || dst.contains(char::is_whitespace) {
            return Err(Error::parse(path, lineno, "user ids must be non-empty tokens"));
        }
        if src == dst {
            return Err(Error::parse(path, lineno, format!("self-loop on `{src}`")));
        }
        edges.push((src.to_owned(), dst.to_owned()));
    }
    Ok(edges)
}

/// Loads a graph whose node set is exactly the edge endpoints.
pub fn load_social_graph(path: &Path) -> Result<SocialGraph> {
    let edges = read_edge_file(path)?;
    let nodes: Vec<&String> = edges.iter().flat_map(|(s, d)| [s, d]).collect();
    SocialGraph::from_edges(nodes.into_iter().cloned(), &edges)
}

/// Loads a graph over a known node universe; edges naming any other id are
/// rejected.
pub fn load_social_graph_with_nodes<I, S>(path: &Path, nodes: I) -> Result<SocialGraph>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let edges = read_edge_file(path)?;
    SocialGraph::from_edges(nodes, &edges)
}

/// One day's consumer -> creator comment edges (a multiset).
#[derive(Debug, Clone, PartialEq)]
pub struct ActivityGraph {
    pub day: i64,
    pub edges: Vec<(NodeId, NodeId)>,
}

/// One edge per positive log, pointing from the consumer to the author of the
/// document.
pub fn build_activity_graph<'a, I, F>(day: i64, logs: I, author_of: F) -> Result<ActivityGraph>
where
    I: IntoIterator<Item = (NodeId, &'a str)>,
    F: Fn(&str) -> Option<NodeId>,
{
    let edges = logs
        .into_iter()
        .map(|(user, doc)| {
            author_of(doc)
                .map(|creator| (user, creator))
                .ok_or_else(|| Error::DanglingDocument(doc.to_owned()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ActivityGraph { day, edges })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PageRankConfig {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            damping: 0.85,
            tolerance: 1e-8,
            max_iters: 200,
        }
    }
}

impl PageRankConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::config("damping", "must lie strictly inside (0, 1)"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::config("tolerance", "must be positive"));
        }
        if self.max_iters == 0 {
            return Err(Error::config("max_iters", "must be positive"));
        }
        Ok(())
    }
}

/// Damped power iteration over a directed edge multiset on nodes `0..n`.
///
/// Parallel edges count with multiplicity. Rank held by nodes without
/// out-edges is spread uniformly over all nodes. Iteration stops once the L1
/// change between sweeps drops below `cfg.tolerance`.
pub fn pagerank(n: usize, edges: &[(NodeId, NodeId)], cfg: &PageRankConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if n == 0 {
        return Err(Error::InvalidArgument("pagerank over an empty node set".into()));
    }
    let mut out_deg = vec![0u32; n];
    for &(s, d) in edges {
        if s.idx() >= n || d.idx() >= n {
            return Err(Error::UnknownNode(format!("#{}", s.0.max(d.0))));
        }
        out_deg[s.idx()] += 1;
    }
    let nf = n as f64;
    let mut rank = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iters {
        let dangling: f64 = rank
            .iter()
            .zip(&out_deg)
            .filter(|(_, &d)| d == 0)
            .map(|(r, _)| r)
            .sum();
        let base = (1.0 - cfg.damping) / nf + cfg.damping * dangling / nf;
        next.iter_mut().for_each(|x| *x = base);
        for &(s, d) in edges {
            next[d.idx()] += cfg.damping * rank[s.idx()] / out_deg[s.idx()] as f64;
        }
        residual = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if residual < cfg.tolerance {
            let total: f64 = rank.iter().sum();
            rank.iter_mut().for_each(|x| *x /= total);
            return Ok(rank);
        }
    }
    Err(Error::NonConvergence {
        iters: cfg.max_iters,
        residual,
    })
}
