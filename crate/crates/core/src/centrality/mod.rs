//! Node importance: extended PageRank (and its reductions), weighted HITS,
//! and top-k rank tables.

mod hits;
mod pagerank;
mod rank;

pub use hits::weighted_hits;
pub use pagerank::{
    extended_pagerank, standard_pagerank, weighted_pagerank, AuxiliaryVector, PageRankConfig,
};
pub use rank::{top_k, RankRow, RankTable};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreKind {
    Pagerank,
    Hub,
    Authority,
}

/// Node scores summing to one, with convergence metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreVector {
    pub kind: ScoreKind,
    pub nodes: Vec<String>,
    pub scores: Vec<f64>,
    pub gamma: Option<f64>,
    pub iterations: usize,
    /// L1 change of the final iteration.
    pub residual: f64,
}

pub(crate) fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
