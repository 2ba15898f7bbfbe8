//! Social-explorative recommendation: bandit friend selection over a
//! social graph, a keyword attention click model, and a day-by-day
//! evaluation harness with creator-equality metrics.

pub mod checkpoint;
pub mod config;
pub mod data;
pub mod error;
pub mod explore;
pub mod graph;
pub mod metrics;
pub mod model;
pub mod rng;
pub mod sim;
pub mod synthetic;
pub mod text;

pub use error::{Error, ErrorKind, Result};
