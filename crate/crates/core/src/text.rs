//! Tokenisation, TF-IDF keyword profiles and fixed word embeddings.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Lowercased runs of Unicode alphanumerics; everything else separates.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Document frequencies over a corpus snapshot.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusStats {
    pub doc_count: usize,
    pub doc_freq: HashMap<String, u32>,
}

impl CorpusStats {
    pub fn add_document<S: AsRef<str>>(&mut self, tokens: &[S]) {
        self.doc_count += 1;
        let mut seen: Vec<&str> = tokens.iter().map(AsRef::as_ref).collect();
        seen.sort_unstable();
        seen.dedup();
        for t in seen {
            *self.doc_freq.entry(t.to_owned()).or_insert(0) += 1;
        }
    }

    pub fn df(&self, term: &str) -> u32 {
        self.doc_freq.get(term).copied().unwrap_or(0)
    }

    /// Smoothed inverse document frequency, `ln((1 + N) / (1 + df)) + 1`.
    pub fn idf(&self, term: &str) -> f64 {
        let n = self.doc_count as f64;
        ((1.0 + n) / (1.0 + f64::from(self.df(term)))).ln() + 1.0
    }
}

/// Builds stats over the given documents' token lists.
pub fn build_corpus_stats<'a, I, S>(docs: I) -> Result<CorpusStats>
where
    I: IntoIterator<Item = &'a [S]>,
    S: AsRef<str> + 'a,
{
    let mut stats = CorpusStats::default();
    for d in docs {
        stats.add_document(d);
    }
    if stats.doc_count == 0 {
        return Err(Error::InvalidArgument("corpus statistics need at least one document".into()));
    }
    Ok(stats)
}

/// Top-scoring distinct terms, highest first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeywordProfile {
    pub terms: Vec<(String, f64)>,
}

impl KeywordProfile {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }
}

/// `tf * idf` with raw counts, top `k`, ties by term.
pub fn tfidf_topk<S: AsRef<str>>(tokens: &[S], stats: &CorpusStats, k: usize) -> KeywordProfile {
    let mut tf: BTreeMap<&str, u32> = BTreeMap::new();
    for t in tokens {
        *tf.entry(t.as_ref()).or_insert(0) += 1;
    }
    let mut scored: Vec<(String, f64)> = tf
        .into_iter()
        .map(|(t, c)| (t.to_owned(), f64::from(c) * stats.idf(t)))
        .collect();
    // stable sort over BTreeMap order keeps equal scores in term order
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    scored.truncate(k);
    KeywordProfile { terms: scored }
}

/// Profile over the concatenated history of a user; empty history gives an
/// empty profile.
pub fn user_profile<S: AsRef<str>>(history: &[&[S]], stats: &CorpusStats, m: usize) -> KeywordProfile {
    let joined: Vec<&str> = history
        .iter()
        .flat_map(|d| d.iter().map(AsRef::as_ref))
        .collect();
    tfidf_topk(&joined, stats, m)
}

/// Pre-trained word vectors, read-only for the whole run.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dim: usize, vectors: HashMap<String, Vec<f64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("embedding dimension must be positive".into()));
        }
        if let Some((w, v)) = vectors.iter().find(|(_, v)| v.len() != dim) {
            return Err(Error::InvalidArgument(format!(
                "vector for `{w}` has length {}, expected {dim}",
                v.len()
            )));
        }
        Ok(EmbeddingTable { dim, vectors })
    }

    /// `word v1 .. vD` per line, optionally preceded by a `<vocab> <D>` header.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).peekable();
        let mut dim = None;
        if let Some(&(_, first)) = lines.peek() {
            let toks: Vec<&str> = first.split_whitespace().collect();
            if toks.len() == 2 && toks.iter().all(|t| t.parse::<usize>().is_ok()) {
                dim = Some(toks[1].parse::<usize>().unwrap());
                lines.next();
            }
        }
        let mut vectors = HashMap::new();
        for (i, line) in lines {
            let mut toks = line.split_whitespace();
            let word = toks.next().unwrap().to_owned();
            let v: Vec<f64> = toks
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::parse(path, i + 1, "vector entries must be decimals"))?;
            let d = *dim.get_or_insert(v.len());
            if v.len() != d {
                return Err(Error::parse(
                    path,
                    i + 1,
                    format!("expected {d} components, found {}", v.len()),
                ));
            }
            vectors.insert(word, v);
        }
        let dim = dim.ok_or_else(|| Error::parse(path, 1, "empty embedding file"))?;
        EmbeddingTable::new(dim, vectors).map_err(|e| Error::parse(path, 0, e.to_string()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    pub fn words(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.vectors.iter().map(|(w, v)| (w.as_str(), v.as_slice()))
    }
}

/// Rows are the in-vocabulary terms of `profile`, in profile order. A profile
/// with no known term yields a `0 x D` matrix, the cold-start signal.
pub fn embed_profile(profile: &KeywordProfile, table: &EmbeddingTable) -> Array2<f64> {
    let rows: Vec<&[f64]> = profile
        .terms
        .iter()
        .filter_map(|(t, _)| table.get(t))
        .collect();
    let mut out = Array2::zeros((rows.len(), table.dim()));
    for (mut dst, src) in out.rows_mut().into_iter().zip(rows) {
        dst.iter_mut().zip(src).for_each(|(d, s)| *d = *s);
    }
    out
}
