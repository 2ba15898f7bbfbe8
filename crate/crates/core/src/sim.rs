//! Day-by-day protocol: train on day `t`, test on day `t + 1`, roll the
//! exploration state forward.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::checkpoint::{load_checkpoint, save_checkpoint, Checkpoint};
use crate::config::{save_json, RunConfig};
use crate::data::{Dataset, LogEntry};
use crate::error::{Error, Result};
use crate::explore::{
    exploitation_table, select_friends, ExplorationState, FriendSelection, RewardCaches, SelectionMode,
    ExploitationStrategy,
};
use crate::graph::{pagerank, NodeId, SocialGraph};
use crate::metrics::{day_metrics, metrics_csv, DayMetrics, Prediction, PredictionLog};
use crate::model::{
    adam_step, batch_gradient, init_params, predict_encoded, word_attention, AdamState, BatchSample, ModelParams,
};
use crate::rng::{self, purpose};
use crate::text::{build_corpus_stats, embed_profile, tfidf_topk, user_profile};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `(user, document, label)` observed on `day`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sample {
    pub user: NodeId,
    pub doc: usize,
    pub day: i64,
    pub label: u8,
}

/// Positives are the user's responses on `day`. Negatives are documents
/// that at least one out-neighbor responded to that day and the user did
/// not. `logs` must hold only that day's entries. Output is sorted by user,
/// then document.
pub fn build_day_samples(day: i64, logs: &[LogEntry], g: &SocialGraph) -> Vec<Sample> {
    let mut pos: BTreeMap<NodeId, BTreeSet<usize>> = BTreeMap::new();
    for l in logs.iter().filter(|l| l.day == day) {
        pos.entry(l.user).or_default().insert(l.doc);
    }
    let empty = BTreeSet::new();
    let mut out = Vec::new();
    for u in g.nodes() {
        let own = pos.get(&u).unwrap_or(&empty);
        let mut neg: BTreeSet<usize> = BTreeSet::new();
        for f in g.out(u) {
            if let Some(fd) = pos.get(f) {
                neg.extend(fd.difference(own));
            }
        }
        let mut row: Vec<Sample> = own
            .iter()
            .map(|&doc| Sample { user: u, doc, day, label: 1 })
            .chain(neg.into_iter().map(|doc| Sample { user: u, doc, day, label: 0 }))
            .collect();
        row.sort_by_key(|s| s.doc);
        out.extend(row);
    }
    out
}

/// 9:1 split. The validation share is `n - floor(9n / 10)` samples,
/// allotted to the two labels in proportion to their counts; members are
/// drawn uniformly per label. Both halves keep input order.
pub fn split_train_valid(samples: &[Sample], seed: u64) -> (Vec<Sample>, Vec<Sample>) {
    let n = samples.len();
    let n_valid = n - 9 * n / 10;
    let pos: Vec<usize> = (0..n).filter(|&i| samples[i].label == 1).collect();
    let neg: Vec<usize> = (0..n).filter(|&i| samples[i].label == 0).collect();
    let mut v_pos = if n == 0 {
        0
    } else {
        ((n_valid * pos.len()) as f64 / n as f64).round() as usize
    };
    v_pos = v_pos.min(pos.len()).min(n_valid);
    let v_neg = (n_valid - v_pos).min(neg.len());
    let v_pos = n_valid - v_neg;
    let mut r = rng::stream(seed, &[purpose::SPLIT]);
    let mut in_valid = vec![false; n];
    for (group, k) in [(pos, v_pos), (neg, v_neg)] {
        for &i in group.choose_multiple(&mut r, k) {
            in_valid[i] = true;
        }
    }
    let mut train = Vec::with_capacity(n - n_valid);
    let mut valid = Vec::with_capacity(n_valid);
    for (s, v) in samples.iter().zip(in_valid) {
        if v {
            valid.push(*s);
        } else {
            train.push(*s);
        }
    }
    (train, valid)
}

/// The training/validation split the harness uses on `day`.
pub fn day_split(ds: &Dataset, cfg: &RunConfig, day: i64) -> (Vec<Sample>, Vec<Sample>) {
    let samples = build_day_samples(day, ds.logs_on(day), &ds.graph);
    split_train_valid(&samples, rng::derive_seed(cfg.seed, &[day as u64]))
}

/// Protocol checks accumulated over a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    /// Distinct (user, document) pairs used in training so far.
    pub trained_pairs: usize,
    /// Test samples whose (user, document) pair was trained on earlier.
    pub leaked_test_samples: usize,
    /// Negatives without an out-neighbor who responded that day.
    pub negatives_without_witness: usize,
    /// Inputs read from a day later than the training day.
    pub future_reads: usize,
}

#[derive(Debug, Clone)]
pub struct DayOutcome {
    pub train_day: i64,
    pub metrics: DayMetrics,
    pub predictions: PredictionLog,
    pub selections: Vec<FriendSelection>,
    pub trained_users: usize,
}

/// What is persisted next to each checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunState {
    pub day: i64,
    pub seed: u64,
    pub exploration: ExplorationState,
    pub metrics: Vec<DayMetricsRecord>,
    pub audit: Audit,
}

/// Serialisable mirror of [`DayMetrics`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DayMetricsRecord {
    pub day: i64,
    pub auc: Option<f64>,
    pub f1: f64,
    pub gini: f64,
    pub cc: f64,
    pub n_samples: usize,
}

impl From<&DayMetrics> for DayMetricsRecord {
    fn from(m: &DayMetrics) -> Self {
        DayMetricsRecord { day: m.day, auc: m.auc, f1: m.f1, gini: m.gini, cc: m.cc, n_samples: m.n_samples }
    }
}

impl From<&DayMetricsRecord> for DayMetrics {
    fn from(m: &DayMetricsRecord) -> Self {
        DayMetrics { day: m.day, auc: m.auc, f1: m.f1, gini: m.gini, cc: m.cc, n_samples: m.n_samples }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub seed: u64,
    pub dataset_hash: String,
    pub config: RunConfig,
}

/// Keyword matrices for one day.
struct Features {
    /// Profiles from history before the training day.
    user_train: Vec<Array2<f64>>,
    /// Profiles from history through the training day.
    user_test: Vec<Array2<f64>>,
    docs: HashMap<usize, Array2<f64>>,
}

pub struct Simulator<'a> {
    ds: &'a Dataset,
    cfg: RunConfig,
    pub params: ModelParams,
    pub adam: AdamState,
    pub state: ExplorationState,
    pub metrics: Vec<DayMetrics>,
    pub audit: Audit,
    trained_keys: HashSet<(NodeId, usize)>,
    spr: Option<Vec<f64>>,
    /// Last training day completed.
    pub day: Option<i64>,
}

impl<'a> Simulator<'a> {
    pub fn new(ds: &'a Dataset, cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.strategy == ExploitationStrategy::Payout && ds.payouts.is_none() && uses_q(cfg.mode) {
            return Err(Error::config("strategy", "payout strategy needs payouts.tsv"));
        }
        let model = cfg.model(ds.embeddings.dim());
        let params = init_params(&model, cfg.seed);
        let spr = if cfg.strategy == ExploitationStrategy::Spr && uses_q(cfg.mode) {
            Some(ds.graph.pagerank(&cfg.pagerank())?)
        } else {
            None
        };
        Ok(Simulator {
            ds,
            adam: AdamState::for_params(&params),
            params,
            state: ExplorationState::initialize(&ds.graph, &cfg.bandit()),
            cfg: cfg.clone(),
            metrics: Vec::new(),
            audit: Audit::default(),
            trained_keys: HashSet::new(),
            spr,
            day: None,
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    /// First and last training day of the configured range.
    pub fn day_range(&self) -> Option<(i64, i64)> {
        let days = self.ds.log_days();
        let first = *days.first()?;
        let last = *days.last()?;
        let start = self.cfg.start_day.unwrap_or(first);
        let end = self.cfg.end_day.unwrap_or(last - 1);
        (start <= end).then_some((start, end))
    }

    fn q_table(&self, day: i64) -> Result<Vec<f64>> {
        let n = self.ds.graph.len();
        if !uses_q(self.cfg.mode) {
            return Ok(vec![0.0; n]);
        }
        let mut caches = RewardCaches { spr: self.spr.clone(), ..Default::default() };
        match self.cfg.strategy {
            ExploitationStrategy::Dpr => {
                let edges: Vec<(NodeId, NodeId)> = self
                    .ds
                    .logs_on(day)
                    .iter()
                    .map(|l| (l.user, self.ds.docs[l.doc].author))
                    .collect();
                caches.dpr = Some(pagerank(n, &edges, &self.cfg.pagerank())?);
            }
            ExploitationStrategy::Payout => {
                let table = self.ds.payouts.as_ref().expect("checked at construction");
                caches.payout = Some(table.normalized_through(day, n));
            }
            _ => {}
        }
        exploitation_table(self.cfg.strategy, &self.state, &caches)
    }

    /// Friend paths for every user on `day`, from the state as it stood at
    /// the start of the day.
    pub fn select_all(&self, day: i64) -> Result<Vec<FriendSelection>> {
        let q = self.q_table(day)?;
        let bandit = self.cfg.bandit();
        let g = &self.ds.graph;
        (0..g.len() as u32)
            .into_par_iter()
            .map(|u| {
                let mut r = rng::stream(self.cfg.seed, &[purpose::SELECT, day as u64, u64::from(u)]);
                select_friends(NodeId(u), self.cfg.mode, &bandit, &q, &self.state, g, &mut r)
            })
            .collect()
    }

    fn features(&mut self, day: i64, train_docs: &BTreeSet<usize>, test_docs: &BTreeSet<usize>) -> Result<Features> {
        let ds = self.ds;
        let visible: Vec<&[String]> = ds
            .docs
            .iter()
            .filter(|d| d.day <= day)
            .map(|d| d.tokens.as_slice())
            .collect();
        let history = ds.logs_before(day + 1);
        self.audit.future_reads += history.iter().filter(|l| l.day > day).count()
            + train_docs.iter().filter(|&&d| ds.docs[d].day > day).count();
        let stats = build_corpus_stats(visible)?;
        let n = ds.graph.len();
        let mut before: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut through: Vec<Vec<usize>> = vec![Vec::new(); n];
        for l in history {
            if l.day < day {
                before[l.user.idx()].push(l.doc);
            }
            through[l.user.idx()].push(l.doc);
        }
        let m = self.cfg.user_keywords;
        let embed_users = |hist: &Vec<Vec<usize>>| -> Vec<Array2<f64>> {
            hist.par_iter()
                .map(|h| {
                    let toks: Vec<&[String]> = h.iter().map(|&d| ds.docs[d].tokens.as_slice()).collect();
                    embed_profile(&user_profile(&toks, &stats, m), &ds.embeddings)
                })
                .collect()
        };
        let user_train = embed_users(&before);
        let user_test = embed_users(&through);
        let k = self.cfg.doc_keywords;
        let doc_list: Vec<usize> = train_docs.union(test_docs).copied().collect();
        let doc_mats: Vec<Array2<f64>> = doc_list
            .par_iter()
            .map(|&d| embed_profile(&tfidf_topk(&ds.docs[d].tokens, &stats, k), &ds.embeddings))
            .collect();
        Ok(Features {
            user_train,
            user_test,
            docs: doc_list.into_iter().zip(doc_mats).collect(),
        })
    }

    fn count_unwitnessed(&self, samples: &[Sample]) -> usize {
        let g = &self.ds.graph;
        let responded: HashSet<(NodeId, usize)> = samples
            .iter()
            .filter(|s| s.label == 1)
            .map(|s| (s.user, s.doc))
            .collect();
        samples
            .iter()
            .filter(|s| s.label == 0)
            .filter(|s| !g.out(s.user).iter().any(|f| responded.contains(&(*f, s.doc))))
            .count()
    }

    /// Trains on `day`, updates the exploration state and scores `day + 1`.
    /// Returns `None` when there is no data for `day + 1`.
    pub fn run_day(&mut self, day: i64) -> Result<Option<DayOutcome>> {
        self.run_day_inner(day).map_err(|e| e.in_day(day))
    }

    fn run_day_inner(&mut self, day: i64) -> Result<Option<DayOutcome>> {
        let ds = self.ds;
        if ds.logs_on(day + 1).is_empty() {
            return Ok(None);
        }
        let samples = build_day_samples(day, ds.logs_on(day), &ds.graph);
        let test = build_day_samples(day + 1, ds.logs_on(day + 1), &ds.graph);
        self.audit.negatives_without_witness += self.count_unwitnessed(&samples);
        let (train, valid) = split_train_valid(&samples, rng::derive_seed(self.cfg.seed, &[day as u64]));

        let train_docs: BTreeSet<usize> = samples.iter().map(|s| s.doc).collect();
        let test_docs: BTreeSet<usize> = test.iter().map(|s| s.doc).collect();
        let feats = self.features(day, &train_docs, &test_docs)?;
        let selections = self.select_all(day)?;

        let mut by_user: BTreeMap<NodeId, (Vec<Sample>, Vec<Sample>)> = BTreeMap::new();
        for s in &train {
            by_user.entry(s.user).or_default().0.push(*s);
        }
        for s in &valid {
            by_user.entry(s.user).or_default().1.push(*s);
        }
        let mode = self.cfg.social_mode;
        let threshold = self.cfg.threshold;
        let mut trained_users = 0;
        for (&u, (tr, va)) in &by_user {
            let sel = &selections[u.idx()];
            let user_x = &feats.user_train[u.idx()];
            if !tr.is_empty() {
                trained_users += 1;
            }
            let mut beam_f1 = Vec::with_capacity(sel.paths.len());
            for (b, path) in sel.paths.iter().enumerate() {
                let friends: Vec<&Array2<f64>> = path.iter().map(|f| &feats.user_train[f.idx()]).collect();
                for epoch in 0..self.cfg.epochs_per_day {
                    let mut order: Vec<&Sample> = tr.iter().collect();
                    let mut r = rng::stream(
                        self.cfg.seed,
                        &[purpose::SHUFFLE, day as u64, u64::from(u.0), b as u64, epoch as u64],
                    );
                    order.shuffle(&mut r);
                    for chunk in order.chunks(self.cfg.batch_size) {
                        let batch: Vec<BatchSample> = chunk
                            .iter()
                            .map(|s| BatchSample { doc: &feats.docs[&s.doc], label: s.label })
                            .collect();
                        let (_, _, grads) = batch_gradient(user_x, &friends, &batch, &self.params, &mode);
                        adam_step(&mut self.params, &grads, &mut self.adam, self.cfg.learn_rate)?;
                    }
                }
                if !va.is_empty() {
                    let p = &self.params;
                    let v = word_attention(user_x, &p.user).out;
                    let fv: Vec<Array1<f64>> = friends.iter().map(|x| word_attention(x, &p.user).out).collect();
                    let pairs: Vec<(f64, u8)> = va
                        .iter()
                        .map(|s| {
                            let q = word_attention(&feats.docs[&s.doc], &p.doc).out;
                            (predict_encoded(&v, &fv, &q, p, &mode), s.label)
                        })
                        .collect();
                    beam_f1.push(crate::metrics::f1(&pairs, threshold));
                }
            }
            let cold = user_x.nrows() == 0;
            if !beam_f1.is_empty() && !cold {
                let mean = beam_f1.iter().sum::<f64>() / beam_f1.len() as f64;
                self.state.record_rs_f1(u, mean)?;
            }
        }
        for s in &train {
            self.trained_keys.insert((s.user, s.doc));
        }
        self.audit.trained_pairs = self.trained_keys.len();
        self.audit.leaked_test_samples += test
            .iter()
            .filter(|s| self.trained_keys.contains(&(s.user, s.doc)))
            .count();

        for sel in &selections {
            self.state.update_visit_counts(sel);
        }
        self.state.day = day;

        // parameters are frozen from here on: pool every input once
        let params = &self.params;
        let user_vecs: Vec<Array1<f64>> = feats
            .user_test
            .par_iter()
            .map(|x| word_attention(x, &params.user).out)
            .collect();
        let doc_vecs: HashMap<usize, Array1<f64>> = test_docs
            .iter()
            .map(|&d| (d, word_attention(&feats.docs[&d], &params.doc).out))
            .collect();
        let scores: Vec<f64> = test
            .par_iter()
            .map(|s| {
                let sel = &selections[s.user.idx()];
                let v = &user_vecs[s.user.idx()];
                let q = &doc_vecs[&s.doc];
                let total: f64 = sel
                    .paths
                    .iter()
                    .map(|path| {
                        let friends: Vec<Array1<f64>> = path.iter().map(|f| user_vecs[f.idx()].clone()).collect();
                        predict_encoded(v, &friends, q, params, &mode)
                    })
                    .sum();
                total / sel.paths.len() as f64
            })
            .collect();
        let predictions = PredictionLog {
            entries: test
                .iter()
                .zip(scores)
                .map(|(s, score)| Prediction {
                    user: ds.graph.id(s.user).to_string(),
                    doc: ds.docs[s.doc].id.clone(),
                    score,
                    label: s.label,
                    day: s.day,
                })
                .collect(),
        };
        let metrics = day_metrics(day + 1, &predictions, |d| ds.author_of(d), threshold)?;
        self.metrics.push(metrics.clone());
        self.day = Some(day);
        Ok(Some(DayOutcome { train_day: day, metrics, predictions, selections, trained_users }))
    }

    pub fn run_state(&self) -> RunState {
        RunState {
            day: self.day.unwrap_or(i64::MIN),
            seed: self.cfg.seed,
            exploration: self.state.clone(),
            metrics: self.metrics.iter().map(DayMetricsRecord::from).collect(),
            audit: self.audit.clone(),
        }
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        let day = self.day.ok_or_else(|| Error::InvalidArgument("no completed day to checkpoint".into()))?;
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let ck = Checkpoint {
            config: self.cfg.clone(),
            day,
            params: self.params.clone(),
            adam: self.adam.clone(),
            seed: self.cfg.seed,
        };
        save_checkpoint(&ck, &dir.join(format!("day_{day}.ckpt")))?;
        save_json(&self.run_state(), &dir.join(format!("state_{day}.json")))
    }

    /// Restores the simulator as it stood after training `day`.
    pub fn restore(ds: &'a Dataset, cfg: &RunConfig, dir: &Path, day: i64) -> Result<Self> {
        let mut sim = Simulator::new(ds, cfg)?;
        let ck = load_checkpoint(&dir.join(format!("day_{day}.ckpt")))?;
        if ck.config != *cfg {
            return Err(Error::config("config", "differs from the configuration stored in the checkpoint"));
        }
        let state_path = dir.join(format!("state_{day}.json"));
        let text = fs::read_to_string(&state_path).map_err(|e| Error::io(&state_path, e))?;
        let st: RunState = serde_json::from_str(&text).map_err(|e| Error::Checkpoint {
            path: state_path.clone(),
            offset: 0,
            msg: e.to_string(),
        })?;
        if st.exploration.visit_counts.len() != ds.graph.len() || st.seed != cfg.seed || st.day != day {
            return Err(Error::Checkpoint { path: state_path, offset: 0, msg: "state does not match this run".into() });
        }
        sim.params = ck.params;
        sim.adam = ck.adam;
        sim.state = st.exploration;
        sim.metrics = st.metrics.iter().map(DayMetrics::from).collect();
        sim.audit = st.audit;
        if let Some((start, _)) = sim.day_range() {
            for d in start..=day {
                let (train, _) = day_split(ds, cfg, d);
                sim.trained_keys.extend(train.iter().map(|s| (s.user, s.doc)));
            }
        }
        sim.day = Some(day);
        Ok(sim)
    }
}

fn uses_q(mode: SelectionMode) -> bool {
    matches!(mode, SelectionMode::Mcts | SelectionMode::Egreedy)
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Output directory for metrics, predictions, checkpoints and manifest.
    pub out_dir: Option<PathBuf>,
    /// Continue after this already checkpointed training day.
    pub resume_from: Option<i64>,
    /// Stop after this training day, as if interrupted.
    pub stop_after: Option<i64>,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    /// Every test day, including those restored from a checkpoint.
    pub metrics: Vec<DayMetrics>,
    /// Predictions made by this invocation.
    pub predictions: PredictionLog,
    pub audit: Audit,
    pub last_day: Option<i64>,
    pub selections: Vec<(i64, Vec<FriendSelection>)>,
}

pub const CHECKPOINT_DIR: &str = "checkpoints";
pub const PREDICTION_DIR: &str = "predictions";

/// Runs the configured day range, writing outputs under `opts.out_dir`.
pub fn run_period(ds: &Dataset, cfg: &RunConfig, opts: &RunOptions) -> Result<RunReport> {
    let ckpt_dir = opts.out_dir.as_ref().map(|d| d.join(CHECKPOINT_DIR));
    let mut sim = match opts.resume_from {
        Some(day) => {
            let dir = ckpt_dir
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("resuming needs an output directory".into()))?;
            Simulator::restore(ds, cfg, dir, day)?
        }
        None => Simulator::new(ds, cfg)?,
    };
    if let Some(out) = &opts.out_dir {
        fs::create_dir_all(out.join(PREDICTION_DIR)).map_err(|e| Error::io(out, e))?;
        let manifest = Manifest {
            version: VERSION.to_string(),
            seed: cfg.seed,
            dataset_hash: ds.hash.clone(),
            config: cfg.clone(),
        };
        save_json(&manifest, &out.join("manifest.json"))?;
    }
    let mut report = RunReport {
        metrics: Vec::new(),
        predictions: PredictionLog::default(),
        audit: Audit::default(),
        last_day: sim.day,
        selections: Vec::new(),
    };
    if let Some((start, end)) = sim.day_range() {
        let first = opts.resume_from.map_or(start, |d| d + 1);
        for day in first..=end {
            let Some(outcome) = sim.run_day(day)? else { break };
            log::info!(
                "day {day}: trained {} users, test f1 {:.4} gini {:.4}",
                outcome.trained_users,
                outcome.metrics.f1,
                outcome.metrics.gini
            );
            if let Some(out) = &opts.out_dir {
                outcome
                    .predictions
                    .save(&out.join(PREDICTION_DIR).join(format!("day_{}.csv", day + 1)))?;
                sim.save(ckpt_dir.as_ref().unwrap())?;
            }
            report.predictions.entries.extend(outcome.predictions.entries);
            report.selections.push((day, outcome.selections));
            if opts.stop_after == Some(day) {
                break;
            }
        }
    }
    report.metrics = sim.metrics.clone();
    report.audit = sim.audit.clone();
    report.last_day = sim.day;
    if let Some(out) = &opts.out_dir {
        let p = out.join("metrics.csv");
        fs::write(&p, metrics_csv(&report.metrics)).map_err(|e| Error::io(&p, e))?;
        merge_predictions(out)?;
    }
    Ok(report)
}

/// Concatenates the per-day prediction files into `predictions.csv`.
fn merge_predictions(out: &Path) -> Result<()> {
    let dir = out.join(PREDICTION_DIR);
    let mut days: Vec<(i64, PathBuf)> = fs::read_dir(&dir)
        .map_err(|e| Error::io(&dir, e))?
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            let name = e.file_name().into_string().ok()?;
            let day = name.strip_prefix("day_")?.strip_suffix(".csv")?.parse().ok()?;
            Some((day, e.path()))
        })
        .collect();
    days.sort();
    let mut all = PredictionLog::default();
    for (_, p) in days {
        all.entries.extend(PredictionLog::load(&p)?.entries);
    }
    all.save(&out.join("predictions.csv"))
}
