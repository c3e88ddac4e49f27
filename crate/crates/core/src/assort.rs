//! Weighted, directed assortativity and its delete-one jackknife error.
//!
//! The coefficient for a pair of strength types (α, β) is the edge-weighted
//! Pearson correlation between the α-strength of each edge's source and the
//! β-strength of its target, with every edge weighted by its flow `w_ij`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::IONetwork;
use crate::report::{fmt_num, fmt_opt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum AssortType {
    #[serde(rename = "in-in")]
    InIn,
    #[serde(rename = "in-out")]
    InOut,
    #[serde(rename = "out-in")]
    OutIn,
    #[serde(rename = "out-out")]
    OutOut,
    #[serde(rename = "total")]
    Total,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum StrengthKind {
    In,
    Out,
    Total,
}

impl AssortType {
    pub const ALL: [AssortType; 5] = [
        AssortType::InIn,
        AssortType::InOut,
        AssortType::OutIn,
        AssortType::OutOut,
        AssortType::Total,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AssortType::InIn => "in-in",
            AssortType::InOut => "in-out",
            AssortType::OutIn => "out-in",
            AssortType::OutOut => "out-out",
            AssortType::Total => "total",
        }
    }

    /// (source feature, target feature)
    fn kinds(self) -> (StrengthKind, StrengthKind) {
        use StrengthKind::*;
        match self {
            AssortType::InIn => (In, In),
            AssortType::InOut => (In, Out),
            AssortType::OutIn => (Out, In),
            AssortType::OutOut => (Out, Out),
            AssortType::Total => (Total, Total),
        }
    }
}

impl fmt::Display for AssortType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AssortType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AssortType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown assortativity type {s:?}")))
    }
}

fn strengths(g: &IONetwork, kind: StrengthKind) -> &[f64] {
    match kind {
        StrengthKind::In => g.in_strengths(),
        StrengthKind::Out => g.out_strengths(),
        StrengthKind::Total => g.total_strengths(),
    }
}

fn is_constant(values: impl Iterator<Item = f64>) -> bool {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    // strengths equal in exact arithmetic can differ in the last ulp
    hi - lo <= 1e-12 * hi.abs().max(lo.abs())
}

/// Weighted, directed assortativity coefficient of type `t`.
pub fn compute_assortativity(g: &IONetwork, t: AssortType) -> Result<f64> {
    let edges = g.edges();
    if edges.len() < 2 {
        return Err(Error::TooFewEdges(edges.len()));
    }
    let (src_kind, tar_kind) = t.kinds();
    let src = strengths(g, src_kind);
    let tar = strengths(g, tar_kind);
    if is_constant(edges.iter().map(|e| src[e.source]))
        || is_constant(edges.iter().map(|e| tar[e.target]))
    {
        return Err(Error::ZeroVariance);
    }

    let total = g.total_weight();
    let mean_src = edges.iter().map(|e| e.weight * src[e.source]).sum::<f64>() / total;
    let mean_tar = edges.iter().map(|e| e.weight * tar[e.target]).sum::<f64>() / total;
    let (mut cov, mut var_src, mut var_tar) = (0.0, 0.0, 0.0);
    for e in edges {
        let dx = src[e.source] - mean_src;
        let dy = tar[e.target] - mean_tar;
        cov += e.weight * dx * dy;
        var_src += e.weight * dx * dx;
        var_tar += e.weight * dy * dy;
    }
    if !(var_src > 0.0 && var_tar > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok((cov / (var_src.sqrt() * var_tar.sqrt())).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeaveOneOut {
    pub removed: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssortativityEstimate {
    #[serde(rename = "type")]
    pub kind: AssortType,
    pub value: f64,
    pub jackknife_se: Option<f64>,
    pub leave_one_out: Option<Vec<LeaveOneOut>>,
    pub n_nodes: usize,
}

/// Delete-one jackknife standard error from the replicate values.
pub fn jackknife_se(replicates: &[f64]) -> f64 {
    let n = replicates.len() as f64;
    let mean = replicates.iter().sum::<f64>() / n;
    let ss: f64 = replicates.iter().map(|r| (r - mean).powi(2)).sum();
    ((n - 1.0) / n * ss).sqrt()
}

/// Coefficient plus jackknife SE, recomputing the coefficient with each node
/// (and its edges) removed in turn. Any degenerate replicate is an error.
pub fn jackknife(g: &IONetwork, t: AssortType) -> Result<AssortativityEstimate> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::Parameter(format!(
            "jackknife needs at least 3 nodes, network has {n}"
        )));
    }
    let value = compute_assortativity(g, t)?;
    let loo = g
        .nodes()
        .par_iter()
        .map(|node| {
            g.remove_node(node)
                .and_then(|h| compute_assortativity(&h, t))
                .map(|value| LeaveOneOut {
                    removed: node.clone(),
                    value,
                })
                .map_err(|e| Error::DegenerateReplicate {
                    node: node.clone(),
                    source: Box::new(e),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = loo.iter().map(|l| l.value).collect();
    Ok(AssortativityEstimate {
        kind: t,
        value,
        jackknife_se: Some(jackknife_se(&values)),
        leave_one_out: Some(loo),
        n_nodes: n,
    })
}

#[derive(Debug)]
pub struct ProfileEntry {
    pub kind: AssortType,
    pub result: Result<AssortativityEstimate>,
}

/// All five coefficient types. A degenerate type is reported in place.
pub fn assortativity_profile(g: &IONetwork, with_jackknife: bool) -> Vec<ProfileEntry> {
    AssortType::ALL
        .into_iter()
        .map(|kind| {
            let result = if with_jackknife {
                jackknife(g, kind)
            } else {
                compute_assortativity(g, kind).map(|value| AssortativityEstimate {
                    kind,
                    value,
                    jackknife_se: None,
                    leave_one_out: None,
                    n_nodes: g.node_count(),
                })
            };
            ProfileEntry { kind, result }
        })
        .collect()
}

/// `type,value,se,n` with one row per type; failed types carry empty value
/// and se cells and the error text in a trailing `error` column.
pub fn write_profile_csv<W: Write>(profile: &[ProfileEntry], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["type", "value", "se", "n", "error"])?;
    for p in profile {
        match &p.result {
            Ok(est) => w.write_record([
                p.kind.as_str(),
                &fmt_num(est.value),
                &fmt_opt(est.jackknife_se),
                &est.n_nodes.to_string(),
                "",
            ])?,
            Err(e) => w.write_record([p.kind.as_str(), "", "", "", &e.to_string()])?,
        }
    }
    w.flush().map_err(|e| Error::io("writing assortativity profile", e))?;
    Ok(())
}

/// Long form `type,removed,value` of every leave-one-out replicate.
pub fn write_leave_one_out_csv<W: Write>(profile: &[ProfileEntry], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["type", "removed", "value"])?;
    for p in profile {
        if let Ok(AssortativityEstimate {
            leave_one_out: Some(loo),
            ..
        }) = &p.result
        {
            for l in loo {
                w.write_record([p.kind.as_str(), l.removed.as_str(), &fmt_num(l.value)])?;
            }
        }
    }
    w.flush().map_err(|e| Error::io("writing leave-one-out values", e))?;
    Ok(())
}
