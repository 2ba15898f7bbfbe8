//! Dataset directory: `graph.tsv`, `docs.jsonl`, `logs.tsv`, optional
//! `payouts.tsv`, `embeddings.txt`.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::explore::PayoutTable;
use crate::graph::{read_edge_file, NodeId, SocialGraph};
use crate::text::{tokenize, EmbeddingTable};

pub const GRAPH_FILE: &str = "graph.tsv";
pub const DOCS_FILE: &str = "docs.jsonl";
pub const LOGS_FILE: &str = "logs.tsv";
pub const PAYOUTS_FILE: &str = "payouts.tsv";
pub const EMBEDDINGS_FILE: &str = "embeddings.txt";

/// One line of `docs.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDoc {
    pub id: String,
    pub author: String,
    pub day: i64,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub author: NodeId,
    pub day: i64,
    pub tokens: Vec<String>,
}

/// A positive response of `user` to document index `doc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogEntry {
    pub day: i64,
    pub user: NodeId,
    pub doc: usize,
}

#[derive(Debug, Clone)]
pub struct Dataset {
    /// Covers every user named anywhere in the data.
    pub graph: SocialGraph,
    pub docs: Vec<Document>,
    pub doc_index: HashMap<String, usize>,
    /// Sorted by (day, user, doc), duplicates removed.
    pub logs: Vec<LogEntry>,
    pub payouts: Option<PayoutTable>,
    pub embeddings: EmbeddingTable,
    /// SHA-256 over the dataset files.
    pub hash: String,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn read_docs(path: &Path) -> Result<Vec<RawDoc>> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let d: RawDoc = serde_json::from_str(line).map_err(|e| Error::parse(path, i + 1, e.to_string()))?;
        out.push(d);
    }
    Ok(out)
}

pub fn read_logs(path: &Path) -> Result<Vec<(String, String, i64)>> {
    let text = read(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').map(str::trim).collect();
        if f.len() != 3 || f[0].is_empty() || f[1].is_empty() {
            return Err(Error::parse(path, i + 1, "expected user<TAB>doc_id<TAB>day"));
        }
        let day = f[2]
            .parse()
            .map_err(|_| Error::parse(path, i + 1, format!("day must be an integer, got {:?}", f[2])))?;
        out.push((f[0].to_string(), f[1].to_string(), day));
    }
    Ok(out)
}

impl Dataset {
    pub fn load(dir: &Path) -> Result<Self> {
        let edges = read_edge_file(&dir.join(GRAPH_FILE))?;
        let docs = read_docs(&dir.join(DOCS_FILE))?;
        let logs = read_logs(&dir.join(LOGS_FILE))?;
        let embeddings = EmbeddingTable::load(&dir.join(EMBEDDINGS_FILE))?;
        let payout_path = dir.join(PAYOUTS_FILE);
        let mut hasher = Sha256::new();
        for name in [GRAPH_FILE, DOCS_FILE, LOGS_FILE, PAYOUTS_FILE, EMBEDDINGS_FILE] {
            let p = dir.join(name);
            if p.exists() {
                let bytes = fs::read(&p).map_err(|e| Error::io(&p, e))?;
                hasher.update(name.as_bytes());
                hasher.update((bytes.len() as u64).to_le_bytes());
                hasher.update(&bytes);
            }
        }
        let mut ds = Self::from_parts(&edges, docs, &logs, embeddings)?;
        if payout_path.exists() {
            ds.payouts = Some(PayoutTable::load(&payout_path, &ds.graph)?);
        }
        ds.hash = format!("{:x}", hasher.finalize());
        Ok(ds)
    }

    /// Builds a dataset from in-memory records. The hash is left empty.
    pub fn from_parts(
        edges: &[(String, String)],
        raw_docs: Vec<RawDoc>,
        raw_logs: &[(String, String, i64)],
        embeddings: EmbeddingTable,
    ) -> Result<Self> {
        let mut users: BTreeSet<&str> = BTreeSet::new();
        for (s, d) in edges {
            users.insert(s);
            users.insert(d);
        }
        for d in &raw_docs {
            users.insert(&d.author);
        }
        for (u, _, _) in raw_logs {
            users.insert(u);
        }
        let graph = SocialGraph::from_edges(users.iter().map(|s| s.to_string()), edges)?;

        let mut doc_index = HashMap::with_capacity(raw_docs.len());
        let mut docs = Vec::with_capacity(raw_docs.len());
        for d in raw_docs {
            if doc_index.insert(d.id.clone(), docs.len()).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate document id `{}`", d.id)));
            }
            docs.push(Document {
                author: graph.require(&d.author)?,
                tokens: tokenize(&d.text),
                id: d.id,
                day: d.day,
            });
        }

        let mut logs = Vec::with_capacity(raw_logs.len());
        for (u, d, day) in raw_logs {
            let doc = *doc_index.get(d).ok_or_else(|| Error::DanglingDocument(d.clone()))?;
            if *day < docs[doc].day {
                return Err(Error::InvalidArgument(format!(
                    "user `{u}` responds to `{d}` on day {day}, before it was published on day {}",
                    docs[doc].day
                )));
            }
            logs.push(LogEntry { day: *day, user: graph.require(u)?, doc });
        }
        logs.sort_unstable();
        logs.dedup();

        Ok(Dataset {
            graph,
            docs,
            doc_index,
            logs,
            payouts: None,
            embeddings,
            hash: String::new(),
        })
    }

    /// Distinct days with at least one log entry, ascending.
    pub fn log_days(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.logs.iter().map(|l| l.day).collect();
        d.dedup();
        d
    }

    pub fn logs_on(&self, day: i64) -> &[LogEntry] {
        let lo = self.logs.partition_point(|l| l.day < day);
        let hi = self.logs.partition_point(|l| l.day <= day);
        &self.logs[lo..hi]
    }

    pub fn logs_before(&self, day: i64) -> &[LogEntry] {
        &self.logs[..self.logs.partition_point(|l| l.day < day)]
    }

    pub fn author_of(&self, doc_id: &str) -> Option<&str> {
        self.doc_index
            .get(doc_id)
            .map(|&i| self.graph.id(self.docs[i].author))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(id: &str, author: &str, day: i64) -> RawDoc {
        RawDoc { id: id.into(), author: author.into(), day, text: "a b".into() }
    }

    fn emb() -> EmbeddingTable {
        EmbeddingTable::new(1, HashMap::new()).unwrap()
    }

    #[test]
    fn universe_includes_authors_and_readers() {
        let edges = vec![("a".to_string(), "b".to_string())];
        let logs = vec![("c".to_string(), "d1".to_string(), 2), ("c".to_string(), "d1".to_string(), 2)];
        let ds = Dataset::from_parts(&edges, vec![raw("d1", "z", 1)], &logs, emb()).unwrap();
        assert_eq!(ds.graph.ids(), ["a", "b", "c", "z"]);
        assert_eq!(ds.logs.len(), 1);
        assert_eq!(ds.author_of("d1"), Some("z"));
        assert_eq!(ds.logs_on(2).len(), 1);
        assert!(ds.logs_on(1).is_empty());
        assert_eq!(ds.log_days(), vec![2]);
    }

    #[test]
    fn rejects_bad_references() {
        let logs = vec![("c".to_string(), "nope".to_string(), 2)];
        let err = Dataset::from_parts(&[], vec![raw("d1", "z", 1)], &logs, emb()).unwrap_err();
        assert!(matches!(err, Error::DanglingDocument(_)));
        let early = vec![("c".to_string(), "d1".to_string(), 0)];
        assert!(Dataset::from_parts(&[], vec![raw("d1", "z", 1)], &early, emb()).is_err());
        let dup = vec![raw("d1", "z", 1), raw("d1", "y", 1)];
        assert!(Dataset::from_parts(&[], dup, &[], emb()).is_err());
    }
}
