use crate::error::{Error, Result};
use crate::network::IONetwork;

use super::{l1_distance, ScoreKind, ScoreVector};

fn normalize(v: &mut [f64], what: &'static str) -> Result<()> {
    let total: f64 = v.iter().sum();
    if !(total > 0.0) {
        return Err(Error::DegenerateHits(what));
    }
    v.iter_mut().for_each(|x| *x /= total);
    Ok(())
}

/// Weighted hubs and authorities. Alternates `a ← Wᵀh`, `h ← W a` with L1
/// normalization after each half-step, from uniform vectors, until both
/// change by at most `tol` in L1. Returns `(hub, authority)`.
pub fn weighted_hits(g: &IONetwork, tol: f64, max_iter: usize) -> Result<(ScoreVector, ScoreVector)> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyNetwork);
    }
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::Parameter("tol must be positive and max_iter at least 1".into()));
    }
    let n = g.node_count();
    let mut hub = vec![1.0 / n as f64; n];
    let mut auth = hub.clone();
    let mut residual = f64::INFINITY;
    for iteration in 1..=max_iter {
        let mut new_auth = vec![0.0; n];
        for e in g.edges() {
            new_auth[e.target] += e.weight * hub[e.source];
        }
        normalize(&mut new_auth, "authority")?;
        let mut new_hub = vec![0.0; n];
        for e in g.edges() {
            new_hub[e.source] += e.weight * new_auth[e.target];
        }
        normalize(&mut new_hub, "hub")?;
        residual = l1_distance(&new_auth, &auth).max(l1_distance(&new_hub, &hub));
        auth = new_auth;
        hub = new_hub;
        if residual <= tol {
            let make = |kind, scores| ScoreVector {
                kind,
                nodes: g.nodes().to_vec(),
                scores,
                gamma: None,
                iterations: iteration,
                residual,
            };
            return Ok((make(ScoreKind::Hub, hub), make(ScoreKind::Authority, auth)));
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        residual,
    })
}
