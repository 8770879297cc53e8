//! Benchmarks, metrics and connectome experiments.

mod bench;
mod connectome;
mod corpus;
mod metrics;

pub use bench::{bench_run, summarize, BenchConfig, BenchOutput, Summary};
pub use connectome::{
    connectome_run, degree, ingest_connectome, subsample, ConnectomeRow, ConnectomeSpec, SynapseKind,
};
pub use corpus::{random_dmg, random_observed, CorpusConfig};
pub use metrics::{excess_edges, spearman, top_k, topk_overlap, write_csv, MetricsRow};
