//! Accuracy and creator-equality metrics over prediction logs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub user: String,
    pub doc: String,
    pub score: f64,
    pub label: u8,
    pub day: i64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PredictionLog {
    pub entries: Vec<Prediction>,
}

impl PredictionLog {
    pub fn pairs(&self) -> Vec<(f64, u8)> {
        self.entries.iter().map(|e| (e.score, e.label)).collect()
    }

    pub fn days(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.entries.iter().map(|e| e.day).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn for_day(&self, day: i64) -> PredictionLog {
        PredictionLog {
            entries: self.entries.iter().filter(|e| e.day == day).cloned().collect(),
        }
    }

    /// Reads `user,doc,score,label,day` CSV with a header line.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 5 {
                return Err(Error::parse(path, lineno, format!("expected 5 fields, found {}", f.len())));
            }
            let score: f64 = f[2]
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad score {:?}", f[2])))?;
            if !score.is_finite() {
                return Err(Error::parse(path, lineno, "score is not finite"));
            }
            let label = match f[3] {
                "0" => 0,
                "1" => 1,
                other => return Err(Error::parse(path, lineno, format!("bad label {other:?}"))),
            };
            let day = f[4]
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad day {:?}", f[4])))?;
            entries.push(Prediction {
                user: f[0].to_string(),
                doc: f[1].to_string(),
                score,
                label,
                day,
            });
        }
        Ok(PredictionLog { entries })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut s = String::from("user,doc,score,label,day\n");
        for e in &self.entries {
            writeln!(s, "{},{},{:?},{},{}", e.user, e.doc, e.score, e.label, e.day).unwrap();
        }
        std::fs::write(path, s).map_err(|e| Error::io(path, e))
    }
}

/// `sum_i (2i - n - 1) x_(i) / (n sum x)` over ascending values, 1-based `i`.
pub fn gini(values: &[f64]) -> Result<f64> {
    if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("gini needs finite non-negative values, got {v}")));
    }
    let n = values.len();
    let total: f64 = values.iter().sum();
    if n == 0 || total == 0.0 {
        return Ok(0.0);
    }
    let mut x = values.to_vec();
    x.sort_by(f64::total_cmp);
    let nf = n as f64;
    let num: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (2.0 * (i + 1) as f64 - nf - 1.0) * v)
        .sum();
    Ok(num / (nf * total))
}

/// Probability that a random positive outscores a random negative, ties
/// counting one half. `None` unless both classes are present.
pub fn auc(pairs: &[(f64, u8)]) -> Option<f64> {
    let pos = pairs.iter().filter(|p| p.1 == 1).count();
    let neg = pairs.len() - pos;
    if pos == 0 || neg == 0 {
        return None;
    }
    let mut sorted: Vec<(f64, u8)> = pairs.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    // sum of midranks of the positives
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j].0 == sorted[i].0 {
            j += 1;
        }
        let mid = (i + 1 + j) as f64 / 2.0;
        let p = sorted[i..j].iter().filter(|e| e.1 == 1).count();
        rank_sum += mid * p as f64;
        i = j;
    }
    let (pf, nf) = (pos as f64, neg as f64);
    Some((rank_sum - pf * (pf + 1.0) / 2.0) / (pf * nf))
}

/// F1 of the decision `score >= threshold`; 0 when precision and recall are both 0.
pub fn f1(pairs: &[(f64, u8)], threshold: f64) -> f64 {
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for &(s, y) in pairs {
        match (s >= threshold, y == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    if tp == 0 {
        return 0.0;
    }
    2.0 * tp as f64 / (2 * tp + fp + fn_) as f64
}

/// Harmonic mean of F1 and `1 - gini`.
pub fn cc(f1: f64, gini: f64) -> f64 {
    let eq = 1.0 - gini;
    let den = eq + f1;
    if den == 0.0 {
        0.0
    } else {
        2.0 * eq * f1 / den
    }
}

/// Impressions per creator: one for the author of every entry whose score
/// clears `threshold`. Every author of a document in the log is present,
/// with zero if none of their documents cleared.
pub fn creator_impressions<'a>(
    log: &PredictionLog,
    author_of: impl Fn(&str) -> Option<&'a str>,
    threshold: f64,
) -> Result<BTreeMap<String, u64>> {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for e in &log.entries {
        let a = author_of(&e.doc).ok_or_else(|| Error::DanglingDocument(e.doc.clone()))?;
        let c = counts.entry(a.to_string()).or_insert(0);
        if e.score >= threshold {
            *c += 1;
        }
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DayMetrics {
    pub day: i64,
    pub auc: Option<f64>,
    pub f1: f64,
    pub gini: f64,
    pub cc: f64,
    pub n_samples: usize,
}

pub fn day_metrics<'a>(
    day: i64,
    log: &PredictionLog,
    author_of: impl Fn(&str) -> Option<&'a str>,
    threshold: f64,
) -> Result<DayMetrics> {
    let pairs = log.pairs();
    let f = f1(&pairs, threshold);
    let imps = creator_impressions(log, author_of, threshold)?;
    let counts: Vec<f64> = imps.values().map(|&c| c as f64).collect();
    let g = gini(&counts)?;
    Ok(DayMetrics {
        day,
        auc: auc(&pairs),
        f1: f,
        gini: g,
        cc: cc(f, g),
        n_samples: pairs.len(),
    })
}

/// Period means of each daily metric. AUC averages over the days where it
/// is defined.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodMetrics {
    pub auc: Option<f64>,
    pub f1: f64,
    pub gini: f64,
    pub cc: f64,
    pub n_samples: f64,
}

pub fn period_average(rows: &[DayMetrics]) -> PeriodMetrics {
    let mean = |f: &dyn Fn(&DayMetrics) -> f64| {
        if rows.is_empty() {
            0.0
        } else {
            rows.iter().map(f).sum::<f64>() / rows.len() as f64
        }
    };
    let aucs: Vec<f64> = rows.iter().filter_map(|r| r.auc).collect();
    PeriodMetrics {
        auc: (!aucs.is_empty()).then(|| aucs.iter().sum::<f64>() / aucs.len() as f64),
        f1: mean(&|r| r.f1),
        gini: mean(&|r| r.gini),
        cc: mean(&|r| r.cc),
        n_samples: mean(&|r| r.n_samples as f64),
    }
}

fn opt6(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"))
}

pub fn metrics_csv(rows: &[DayMetrics]) -> String {
    let mut s = String::from("day,auc,f1,gini,cc,n_samples\n");
    for r in rows {
        writeln!(s, "{},{},{:.6},{:.6},{:.6},{}", r.day, opt6(r.auc), r.f1, r.gini, r.cc, r.n_samples).unwrap();
    }
    let a = period_average(rows);
    writeln!(s, "avg,{},{:.6},{:.6},{:.6},{:.6}", opt6(a.auc), a.f1, a.gini, a.cc, a.n_samples).unwrap();
    s
}

pub fn write_metrics(rows: &[DayMetrics], path: &Path) -> Result<()> {
    std::fs::write(path, metrics_csv(rows)).map_err(|e| Error::io(path, e))
}
