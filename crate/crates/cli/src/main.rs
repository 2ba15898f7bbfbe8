use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use socrec::config::{load_run_config, load_synthetic_spec, parse_json, save_json, RunConfig};
use socrec::data::{read_docs, Dataset, DOCS_FILE};
use socrec::explore::{ExplorationState, SelectionMode};
use socrec::graph::{pagerank, NodeId};
use socrec::metrics::{day_metrics, metrics_csv, PredictionLog};
use socrec::sim::{run_period, RunOptions, RunState, Simulator};
use socrec::synthetic::{generate_synthetic, SyntheticSpec};
use socrec::{Error, ErrorKind, Result};

#[derive(Parser)]
#[command(name = "socrec", version, about = "Social-explorative recommendation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic dataset directory.
    Generate {
        /// Generator spec (JSON); defaults apply to omitted keys.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the day-by-day protocol over a dataset.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Friend selection: mcts, egreedy, random_select, random_walk, no_social.
        #[arg(long)]
        mode: Option<String>,
        /// Continue after this checkpointed training day.
        #[arg(long)]
        resume_from: Option<i64>,
        /// Stop after this training day.
        #[arg(long)]
        stop_after: Option<i64>,
    },
    /// Print the friend paths chosen for one user on one day.
    Explore {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        user: String,
        #[arg(long)]
        day: i64,
        /// Exploration state (`state_<t>.json`) to start from instead of the initial one.
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        mode: Option<String>,
    },
    /// Recompute daily metrics from a `user,doc,score,label,day` CSV.
    Metrics {
        /// Dataset directory providing `docs.jsonl` for document authors.
        #[arg(long)]
        data: PathBuf,
        predictions: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        threshold: f64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump PageRank scores of the follow graph, or of one day's activity graph.
    Pagerank {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        day: Option<i64>,
    },
}

fn run_config(path: Option<&Path>, seed: Option<u64>, mode: Option<&str>) -> Result<RunConfig> {
    let mut cfg = match path {
        Some(p) => load_run_config(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(m) = mode {
        cfg.mode = parse_json::<SelectionMode>(&format!("\"{m}\""))
            .map_err(|_| Error::config("mode", format!("unknown selection mode `{m}`")))?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { config, out, seed } => {
            let mut spec = match config {
                Some(p) => load_synthetic_spec(&p)?,
                None => SyntheticSpec::default(),
            };
            if let Some(s) = seed {
                spec.seed = s;
            }
            log::info!("generator spec: {}", serde_json_line(&spec));
            let data = generate_synthetic(&spec, &out)?;
            println!(
                "wrote {} users, {} edges, {} documents, {} responses to {}",
                data.users.len(),
                data.edges.len(),
                data.docs.len(),
                data.logs.len(),
                out.display()
            );
        }
        Command::Run { config, data, out, seed, mode, resume_from, stop_after } => {
            let cfg = run_config(config.as_deref(), seed, mode.as_deref())?;
            log::info!("run config: {}", serde_json_line(&cfg));
            let ds = Dataset::load(&data)?;
            std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
            save_json(&cfg, &out.join("config.json"))?;
            let opts = RunOptions { out_dir: Some(out.clone()), resume_from, stop_after };
            let report = run_period(&ds, &cfg, &opts)?;
            print!("{}", metrics_csv(&report.metrics));
        }
        Command::Explore { config, data, user, day, state, seed, mode } => {
            let cfg = run_config(config.as_deref(), seed, mode.as_deref())?;
            let ds = Dataset::load(&data)?;
            let u = ds.graph.require(&user)?;
            let mut sim = Simulator::new(&ds, &cfg)?;
            if let Some(p) = state {
                let text = std::fs::read_to_string(&p).map_err(|e| Error::io(&p, e))?;
                let st: RunState = serde_json_from(&text, &p)?;
                let ExplorationState { visit_counts, .. } = &st.exploration;
                if visit_counts.len() != ds.graph.len() {
                    return Err(Error::InvalidArgument("state does not match the dataset".into()));
                }
                sim.state = st.exploration;
            }
            let sel = &sim.select_all(day)?[u.idx()];
            for (b, path) in sel.paths.iter().enumerate() {
                let ids: Vec<&str> = path.iter().map(|v| ds.graph.id(*v)).collect();
                println!("path {b}: {}", ids.join(" "));
            }
            if sel.stranded {
                println!("(user has no out-neighbors)");
            }
        }
        Command::Metrics { data, predictions, threshold, out } => {
            if !(threshold > 0.0 && threshold < 1.0) {
                return Err(Error::config("threshold", "must lie in (0, 1)"));
            }
            let docs = read_docs(&data.join(DOCS_FILE))?;
            let authors: std::collections::HashMap<String, String> =
                docs.into_iter().map(|d| (d.id, d.author)).collect();
            let log = PredictionLog::load(&predictions)?;
            let mut rows = Vec::new();
            for day in log.days() {
                let day_log = log.for_day(day);
                rows.push(day_metrics(day, &day_log, |d| authors.get(d).map(String::as_str), threshold)?);
            }
            let csv = metrics_csv(&rows);
            match out {
                Some(p) => std::fs::write(&p, csv).map_err(|e| Error::io(&p, e))?,
                None => print!("{csv}"),
            }
        }
        Command::Pagerank { config, data, day } => {
            let cfg = run_config(config.as_deref(), None, None)?;
            let ds = Dataset::load(&data)?;
            let scores = match day {
                None => ds.graph.pagerank(&cfg.pagerank())?,
                Some(t) => {
                    let edges: Vec<(NodeId, NodeId)> =
                        ds.logs_on(t).iter().map(|l| (l.user, ds.docs[l.doc].author)).collect();
                    pagerank(ds.graph.len(), &edges, &cfg.pagerank())?
                }
            };
            let mut s = String::new();
            for (id, x) in ds.graph.ids().iter().zip(scores) {
                writeln!(s, "{id}\t{x:.12}").unwrap();
            }
            print!("{s}");
        }
    }
    Ok(())
}

fn serde_json_line<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

fn serde_json_from<T: serde::de::DeserializeOwned>(text: &str, path: &Path) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::parse(path, e.line(), e.to_string()))
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Config => 1,
        ErrorKind::Data => 2,
        ErrorKind::Runtime => 3,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}
