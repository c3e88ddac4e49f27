use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::fmt_num;

use super::ScoreVector;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub node: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankTable {
    pub k: usize,
    pub rows: Vec<RankRow>,
}

impl RankTable {
    pub fn nodes(&self) -> Vec<&str> {
        self.rows.iter().map(|r| r.node.as_str()).collect()
    }

    /// `node,score,rank`
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "score", "rank"])?;
        for r in &self.rows {
            w.write_record([r.node.as_str(), &fmt_num(r.score), &r.rank.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("writing rank table", e))?;
        Ok(())
    }
}

/// The `k` highest-scoring nodes; equal scores are ordered by node code.
pub fn top_k(s: &ScoreVector, k: usize) -> Result<RankTable> {
    let n = s.scores.len();
    if k == 0 || k > n {
        return Err(Error::Parameter(format!("k must lie in 1..={n}, got {k}")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        s.scores[b]
            .total_cmp(&s.scores[a])
            .then_with(|| s.nodes[a].cmp(&s.nodes[b]))
    });
    let rows = order
        .into_iter()
        .take(k)
        .enumerate()
        .map(|(r, i)| RankRow {
            rank: r + 1,
            node: s.nodes[i].clone(),
            score: s.scores[i],
        })
        .collect();
    Ok(RankTable { k, rows })
}
