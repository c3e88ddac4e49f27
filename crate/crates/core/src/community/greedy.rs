use crate::error::{Error, Result};
use crate::network::IONetwork;

use super::modularity::{community_stats, q_from_stats, CommunityStats, ModularityVariant};
use super::Partition;

/// Agglomerative greedy modularity maximization (Clauset–Newman–Moore style).
///
/// Starts from singletons and repeatedly merges the pair of connected
/// communities with the largest modularity gain, ties going to the smallest
/// `(label_a, label_b)`. Merging continues until no connected pair remains;
/// the partition with the highest Q along the way is returned (earliest on
/// ties).
pub fn greedy_communities(g: &IONetwork, variant: ModularityVariant) -> Result<Partition> {
    let n = g.node_count();
    let total = g.total_weight();
    if n == 0 || !(total > 0.0) {
        return Err(Error::EmptyNetwork);
    }

    // community id of each node; a merged community keeps the smaller id
    let mut labels: Vec<usize> = (0..n).collect();
    let mut stats: Vec<CommunityStats> = community_stats(g, &labels, n);
    let mut active = vec![true; n];
    // between[a][b]: weight of edges from community a to community b (a != b)
    let mut between = vec![vec![0.0; n]; n];
    for e in g.edges() {
        if e.source != e.target {
            between[e.source][e.target] += e.weight;
        }
    }

    let mut best_q = q_from_stats(&stats, variant, total);
    let mut best_labels = labels.clone();

    loop {
        let mut choice: Option<(f64, usize, usize)> = None;
        for a in (0..n).filter(|&a| active[a]) {
            for b in (a + 1..n).filter(|&b| active[b]) {
                let link = between[a][b] + between[b][a];
                if link <= 0.0 {
                    continue;
                }
                let gain = merge_gain(&stats[a], &stats[b], link, variant, total);
                if choice.is_none_or(|(best, _, _)| gain > best) {
                    choice = Some((gain, a, b));
                }
            }
        }
        let Some((_, a, b)) = choice else { break };

        let link = between[a][b] + between[b][a];
        stats[a].intra += stats[b].intra + link;
        stats[a].s_out += stats[b].s_out;
        stats[a].s_in += stats[b].s_in;
        active[b] = false;
        for c in 0..n {
            if c != a && c != b {
                between[a][c] += between[b][c];
                between[c][a] += between[c][b];
            }
            between[b][c] = 0.0;
            between[c][b] = 0.0;
        }
        between[a][a] = 0.0;
        labels.iter_mut().filter(|l| **l == b).for_each(|l| *l = a);

        // recompute rather than accumulate gains, so Q carries no drift
        let q = q_from_stats(
            &(0..n).filter(|&c| active[c]).map(|c| stats[c]).collect::<Vec<_>>(),
            variant,
            total,
        );
        if q > best_q {
            best_q = q;
            best_labels = labels.clone();
        }
    }

    let mut p = Partition::from_labels(g.nodes().to_vec(), &best_labels)?;
    p.modularity = Some(best_q);
    Ok(p)
}

fn merge_gain(
    a: &CommunityStats,
    b: &CommunityStats,
    link: f64,
    variant: ModularityVariant,
    total: f64,
) -> f64 {
    let null = match variant {
        ModularityVariant::Directed => (a.s_out * b.s_in + b.s_out * a.s_in) / (total * total),
        ModularityVariant::Symmetrized => {
            (a.s_out + a.s_in) * (b.s_out + b.s_in) / (2.0 * total * total)
        }
    };
    link / total - null
}
