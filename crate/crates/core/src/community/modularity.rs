use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::IONetwork;

use super::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModularityVariant {
    /// Directed null model `s_i^out s_j^in / W`.
    Directed,
    /// Classic undirected modularity of `W + Wᵀ`.
    #[default]
    Symmetrized,
}

impl fmt::Display for ModularityVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModularityVariant::Directed => "directed",
            ModularityVariant::Symmetrized => "symmetrized",
        })
    }
}

impl FromStr for ModularityVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "directed" => Ok(ModularityVariant::Directed),
            "symmetrized" => Ok(ModularityVariant::Symmetrized),
            _ => Err(Error::Parameter(format!("unknown modularity variant {s:?}"))),
        }
    }
}

/// Per-community sums that determine Q.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CommunityStats {
    pub intra: f64,
    pub s_out: f64,
    pub s_in: f64,
}

impl CommunityStats {
    /// Null-model mass of the community, already divided by W².
    pub fn null_term(&self, variant: ModularityVariant, total: f64) -> f64 {
        match variant {
            ModularityVariant::Directed => (self.s_out / total) * (self.s_in / total),
            ModularityVariant::Symmetrized => {
                let s = (self.s_out + self.s_in) / (2.0 * total);
                s * s
            }
        }
    }
}

pub(crate) fn community_stats(g: &IONetwork, labels: &[usize], k: usize) -> Vec<CommunityStats> {
    let mut stats = vec![CommunityStats::default(); k];
    let (s_out, s_in) = (g.out_strengths(), g.in_strengths());
    for (i, &c) in labels.iter().enumerate() {
        stats[c].s_out += s_out[i];
        stats[c].s_in += s_in[i];
    }
    for e in g.edges() {
        if labels[e.source] == labels[e.target] {
            stats[labels[e.source]].intra += e.weight;
        }
    }
    stats
}

pub(crate) fn q_from_stats(stats: &[CommunityStats], variant: ModularityVariant, total: f64) -> f64 {
    stats
        .iter()
        .map(|c| c.intra / total - c.null_term(variant, total))
        .sum()
}

/// Weighted modularity of `p` on `g`.
///
/// Directed: `Q = (1/W) Σ_ij (w_ij − s_i^out s_j^in / W) [h_i = h_j]`.
/// Symmetrized: with `w'_ij = w_ij + w_ji` and `2m = Σ w'`,
/// `Q = (1/2m) Σ_ij (w'_ij − s'_i s'_j / 2m) [h_i = h_j]`.
pub fn modularity(g: &IONetwork, p: &Partition, variant: ModularityVariant) -> Result<f64> {
    let labels = p.labels_for(g)?;
    let total = g.total_weight();
    if !(total > 0.0) {
        return Err(Error::EmptyNetwork);
    }
    let k = labels.iter().max().map_or(0, |m| m + 1);
    Ok(q_from_stats(&community_stats(g, &labels, k), variant, total))
}
