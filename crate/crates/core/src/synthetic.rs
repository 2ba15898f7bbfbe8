//! Planted-community social data for desk-scale experiments.
//!
//! Users are dealt round-robin into communities, so id order mixes them. Follow edges appear with
//! probability `p_in` inside a community and `p_out` across. Topic `k`
//! belongs to community `k % n_communities`; each user likes a few topics of
//! their own community. Every day authors (drawn with a Zipf popularity)
//! publish documents on one of their liked topics, and active users click
//! documents on liked topics with probability `click_rate`, anything else
//! with probability `click_noise`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::distributions::WeightedIndex;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::{RawDoc, DOCS_FILE, EMBEDDINGS_FILE, GRAPH_FILE, LOGS_FILE, PAYOUTS_FILE};
use crate::error::{Error, Result};
use crate::rng::{self, purpose};

pub const COMMUNITIES_FILE: &str = "communities.tsv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n_users: usize,
    pub n_communities: usize,
    pub n_days: usize,
    pub docs_per_day: usize,
    pub vocab_size: usize,
    pub topic_count: usize,
    /// Follow probability inside a community.
    pub p_in: f64,
    /// Follow probability across communities.
    pub p_out: f64,
    /// Click probability for a document on a topic the user does not like.
    pub click_noise: f64,
    /// Click probability for a document on a liked topic, for community 0.
    pub click_rate: f64,
    /// Community `c` clicks liked topics with probability
    /// `click_rate * rate_decay^c`.
    pub rate_decay: f64,
    /// Each topic scales liked-topic clicks by an appeal drawn uniformly
    /// from `[min_appeal, 1]`.
    pub min_appeal: f64,
    /// Probability that each liked topic is drawn from the user's own
    /// community rather than from all topics.
    pub home_bias: f64,
    /// Peer influence: a topic the user does not like gains click
    /// probability `influence * rate * share`, where `share` is the fraction
    /// of the users they follow who like it.
    pub influence: f64,
    pub topics_per_user: usize,
    pub words_per_doc: usize,
    /// Share of document words drawn from the document's topic.
    pub topic_purity: f64,
    /// Zipf exponent of author popularity.
    pub author_skew: f64,
    /// Daily activity probabilities are drawn uniformly from
    /// `[min_activity, 1]`.
    pub min_activity: f64,
    pub embed_dim: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_users: 500,
            n_communities: 4,
            n_days: 30,
            docs_per_day: 40,
            vocab_size: 1700,
            topic_count: 16,
            p_in: 0.03,
            p_out: 0.001,
            click_noise: 0.01,
            click_rate: 0.3,
            rate_decay: 1.0,
            min_appeal: 1.0,
            home_bias: 1.0,
            influence: 0.0,
            topics_per_user: 2,
            words_per_doc: 30,
            topic_purity: 0.7,
            author_skew: 1.0,
            min_activity: 0.1,
            embed_dim: 16,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n_users", self.n_users),
            ("n_communities", self.n_communities),
            ("n_days", self.n_days),
            ("docs_per_day", self.docs_per_day),
            ("vocab_size", self.vocab_size),
            ("topic_count", self.topic_count),
            ("topics_per_user", self.topics_per_user),
            ("words_per_doc", self.words_per_doc),
            ("embed_dim", self.embed_dim),
        ];
        for (k, v) in positive {
            if v == 0 {
                return Err(Error::config(k, "must be positive"));
            }
        }
        let probs = [
            ("p_in", self.p_in),
            ("p_out", self.p_out),
            ("click_noise", self.click_noise),
            ("click_rate", self.click_rate),
            ("topic_purity", self.topic_purity),
            ("min_activity", self.min_activity),
            ("rate_decay", self.rate_decay),
            ("min_appeal", self.min_appeal),
            ("home_bias", self.home_bias),
        ];
        for (k, v) in probs {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(k, "must lie in [0, 1]"));
            }
        }
        if self.n_communities > self.n_users {
            return Err(Error::config("n_communities", "must not exceed n_users"));
        }
        if self.topic_count < self.n_communities {
            return Err(Error::config("topic_count", "needs at least one topic per community"));
        }
        if self.vocab_size < self.topic_count + 1 {
            return Err(Error::config("vocab_size", "needs at least one word per topic plus one shared word"));
        }
        if !(self.influence >= 0.0) || !self.influence.is_finite() {
            return Err(Error::config("influence", "must be a finite value >= 0"));
        }
        if !(self.author_skew >= 0.0) || !self.author_skew.is_finite() {
            return Err(Error::config("author_skew", "must be a finite value >= 0"));
        }
        Ok(())
    }

    fn block(&self) -> usize {
        self.vocab_size / (self.topic_count + 1)
    }
}

/// Generated records plus the planted ground truth.
#[derive(Debug, Clone)]
pub struct SyntheticData {
    pub users: Vec<String>,
    pub community: Vec<usize>,
    /// `likes[u][k]`: user `u` likes topic `k`.
    pub likes: Vec<Vec<bool>>,
    pub edges: Vec<(String, String)>,
    pub docs: Vec<RawDoc>,
    pub doc_topic: Vec<usize>,
    pub logs: Vec<(String, String, i64)>,
    pub payouts: Vec<(String, i64, f64)>,
    pub vocab: Vec<String>,
    pub embeddings: Vec<Vec<f64>>,
}

pub fn word(i: usize) -> String {
    format!("w{i:05}")
}

pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticData> {
    spec.validate()?;
    let n = spec.n_users;
    let c = spec.n_communities;
    let width = (n.max(2) - 1).to_string().len();
    let users: Vec<String> = (0..n).map(|i| format!("u{i:0width$}")).collect();
    let community: Vec<usize> = (0..n).map(|i| i % c).collect();

    let mut r = rng::stream(spec.seed, &[purpose::SYNTHETIC, 0]);
    let mut edges = Vec::new();
    let mut follows: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let p = if community[i] == community[j] { spec.p_in } else { spec.p_out };
            if r.gen::<f64>() < p {
                edges.push((users[i].clone(), users[j].clone()));
                follows[i].push(j);
            }
        }
    }

    let topics_of = |comm: usize| -> Vec<usize> { (0..spec.topic_count).filter(|k| k % c == comm).collect() };
    let mut r = rng::stream(spec.seed, &[purpose::SYNTHETIC, 1]);
    let mut likes = vec![vec![false; spec.topic_count]; n];
    for u in 0..n {
        let own = topics_of(community[u]);
        let k = spec.topics_per_user.min(spec.topic_count);
        let mut picked = 0;
        while picked < k {
            let home = own.iter().any(|&t| !likes[u][t]) && r.gen::<f64>() < spec.home_bias;
            let t = if home { *own.choose(&mut r).unwrap() } else { r.gen_range(0..spec.topic_count) };
            if !likes[u][t] {
                likes[u][t] = true;
                picked += 1;
            }
        }
    }
    let liked: Vec<Vec<usize>> = likes
        .iter()
        .map(|l| (0..spec.topic_count).filter(|&k| l[k]).collect())
        .collect();
    let activity: Vec<f64> = (0..n).map(|_| r.gen_range(spec.min_activity..=1.0)).collect();
    let rate: Vec<f64> = community
        .iter()
        .map(|&k| spec.click_rate * spec.rate_decay.powi(k as i32))
        .collect();
    // share of the users u follows who like each topic
    let peer_share: Vec<Vec<f64>> = (0..n)
        .map(|u| {
            (0..spec.topic_count)
                .map(|t| {
                    let k = follows[u].iter().filter(|&&v| likes[v][t]).count();
                    if follows[u].is_empty() { 0.0 } else { k as f64 / follows[u].len() as f64 }
                })
                .collect()
        })
        .collect();
    let appeal: Vec<f64> = (0..spec.topic_count)
        .map(|_| r.gen_range(spec.min_appeal..=1.0))
        .collect();

    // author popularity: Zipf weights over a random order of users
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut r);
    let mut weight = vec![0.0; n];
    for (rank, &u) in order.iter().enumerate() {
        weight[u] = 1.0 / ((rank + 1) as f64).powf(spec.author_skew);
    }
    let authors = WeightedIndex::new(&weight).expect("positive weights");

    let block = spec.block();
    let shared = spec.topic_count * block..spec.vocab_size;
    let mut docs = Vec::new();
    let mut doc_author = Vec::new();
    let mut doc_topic = Vec::new();
    let mut logs = Vec::new();
    let mut payouts = Vec::new();
    for day in 0..spec.n_days {
        let mut r = rng::stream(spec.seed, &[purpose::SYNTHETIC, 2, day as u64]);
        let first = docs.len();
        for j in 0..spec.docs_per_day {
            let a = authors.sample(&mut r);
            let topic = *liked[a].choose(&mut r).expect("every user likes a topic");
            let mut text = String::new();
            for w in 0..spec.words_per_doc {
                let idx = if r.gen::<f64>() < spec.topic_purity {
                    topic * block + r.gen_range(0..block)
                } else {
                    r.gen_range(shared.clone())
                };
                if w > 0 {
                    text.push(' ');
                }
                text.push_str(&word(idx));
            }
            docs.push(RawDoc {
                id: format!("d{day:03}_{j:03}"),
                author: users[a].clone(),
                day: day as i64,
                text,
            });
            doc_author.push(a);
            doc_topic.push(topic);
        }
        let mut clicks_by_author = vec![0u32; n];
        for u in 0..n {
            if r.gen::<f64>() >= activity[u] {
                continue;
            }
            for d in first..docs.len() {
                if doc_author[d] == u {
                    continue;
                }
                let t = doc_topic[d];
                let p = if likes[u][t] {
                    rate[u] * appeal[t]
                } else {
                    spec.click_noise + spec.influence * rate[u] * appeal[t] * peer_share[u][t]
                };
                if r.gen::<f64>() < p {
                    logs.push((users[u].clone(), docs[d].id.clone(), day as i64));
                    clicks_by_author[doc_author[d]] += 1;
                }
            }
        }
        for (a, &k) in clicks_by_author.iter().enumerate() {
            if k > 0 {
                payouts.push((users[a].clone(), day as i64, f64::from(k)));
            }
        }
    }

    let mut r = rng::stream(spec.seed, &[purpose::SYNTHETIC, 3]);
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    let d = spec.embed_dim;
    let centroids: Vec<Vec<f64>> = (0..spec.topic_count)
        .map(|_| (0..d).map(|_| unit.sample(&mut r)).collect())
        .collect();
    let vocab: Vec<String> = (0..spec.vocab_size).map(word).collect();
    let embeddings = (0..spec.vocab_size)
        .map(|i| {
            let topic = i / block;
            (0..d)
                .map(|k| {
                    let noise = unit.sample(&mut r);
                    if topic < spec.topic_count {
                        centroids[topic][k] + 0.3 * noise
                    } else {
                        0.5 * noise
                    }
                })
                .collect()
        })
        .collect();

    Ok(SyntheticData {
        users,
        community,
        likes,
        edges,
        docs,
        doc_topic,
        logs,
        payouts,
        vocab,
        embeddings,
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

impl SyntheticData {
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut s = String::new();
        for (a, b) in &self.edges {
            writeln!(s, "{a}\t{b}").unwrap();
        }
        write(&dir.join(GRAPH_FILE), &s)?;

        let mut s = String::new();
        for d in &self.docs {
            s.push_str(&serde_json::to_string(d).expect("document serialises"));
            s.push('\n');
        }
        write(&dir.join(DOCS_FILE), &s)?;

        let mut s = String::new();
        for (u, d, day) in &self.logs {
            writeln!(s, "{u}\t{d}\t{day}").unwrap();
        }
        write(&dir.join(LOGS_FILE), &s)?;

        let mut s = String::new();
        for (u, day, amount) in &self.payouts {
            writeln!(s, "{u}\t{day}\t{amount}").unwrap();
        }
        write(&dir.join(PAYOUTS_FILE), &s)?;

        let dim = self.embeddings.first().map_or(0, Vec::len);
        let mut s = format!("{} {dim}\n", self.vocab.len());
        for (w, v) in self.vocab.iter().zip(&self.embeddings) {
            s.push_str(w);
            for x in v {
                write!(s, " {x:.6}").unwrap();
            }
            s.push('\n');
        }
        write(&dir.join(EMBEDDINGS_FILE), &s)?;

        let mut s = String::new();
        for (u, c) in self.users.iter().zip(&self.community) {
            writeln!(s, "{u}\t{c}").unwrap();
        }
        write(&dir.join(COMMUNITIES_FILE), &s)
    }
}

/// Generates a dataset and writes it to `dir`.
pub fn generate_synthetic(spec: &SyntheticSpec, dir: &Path) -> Result<SyntheticData> {
    let data = generate(spec)?;
    data.write_to(dir)?;
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn small() -> SyntheticSpec {
        SyntheticSpec {
            n_users: 60,
            n_communities: 3,
            n_days: 4,
            docs_per_day: 10,
            vocab_size: 100,
            topic_count: 6,
            p_in: 0.2,
            p_out: 0.0,
            click_noise: 0.0,
            ..Default::default()
        }
    }

    #[test]
    fn no_cross_edges_when_p_out_is_zero() {
        let d = generate(&small()).unwrap();
        let comm: HashMap<&str, usize> = d.users.iter().map(String::as_str).zip(d.community.iter().copied()).collect();
        assert!(!d.edges.is_empty());
        for (a, b) in &d.edges {
            assert_eq!(comm[a.as_str()], comm[b.as_str()]);
        }
    }

    #[test]
    fn noiseless_clicks_follow_affinity() {
        let d = generate(&small()).unwrap();
        let uidx: HashMap<&str, usize> = d.users.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
        let didx: HashMap<&str, usize> = d.docs.iter().enumerate().map(|(i, x)| (x.id.as_str(), i)).collect();
        assert!(!d.logs.is_empty());
        for (u, doc, day) in &d.logs {
            let di = didx[doc.as_str()];
            assert!(d.likes[uidx[u.as_str()]][d.doc_topic[di]]);
            assert_eq!(d.docs[di].day, *day);
        }
    }

    #[test]
    fn seeded() {
        let a = generate(&small()).unwrap();
        let b = generate(&small()).unwrap();
        assert_eq!(a.logs, b.logs);
        assert_eq!(a.embeddings, b.embeddings);
        let c = generate(&SyntheticSpec { seed: 1, ..small() }).unwrap();
        assert_ne!(a.logs, c.logs);
    }

    #[test]
    fn rejects_bad_probability() {
        let e = SyntheticSpec { p_in: 1.5, ..Default::default() }.validate().unwrap_err();
        assert!(matches!(e, Error::Config { ref key, .. } if key == "p_in"));
    }
}
