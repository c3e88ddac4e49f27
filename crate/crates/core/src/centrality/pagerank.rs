use crate::error::{Error, Result};
use crate::network::IONetwork;

use super::{l1_distance, ScoreKind, ScoreVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    pub gamma: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            gamma: 0.85,
            tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

impl PageRankConfig {
    pub fn with_gamma(gamma: f64) -> Self {
        PageRankConfig {
            gamma,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Parameter(format!("gamma must lie in [0, 1], got {}", self.gamma)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Parameter(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Parameter("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

fn check_aux(values: &[f64]) -> std::result::Result<(), String> {
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
    {
        return Err(format!(
            "auxiliary value at position {i} must be finite and non-negative, got {v}"
        ));
    }
    if !(values.iter().sum::<f64>() > 0.0) {
        return Err("auxiliary values sum to zero".into());
    }
    Ok(())
}

/// Per-node auxiliary importance λ. Entries are non-negative with a
/// positive sum; only the proportions λ_i / Σλ matter.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryVector {
    values: Vec<f64>,
}

impl AuxiliaryVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_aux(&values).map_err(Error::Parameter)?;
        Ok(AuxiliaryVector { values })
    }

    pub fn uniform(n: usize) -> Self {
        AuxiliaryVector {
            values: vec![1.0; n],
        }
    }

    /// Uses a node attribute of `g` (e.g. `value_added`, `export`).
    pub fn from_attr(g: &IONetwork, name: &str) -> Result<Self> {
        let values = g
            .attr(name)
            .ok_or_else(|| Error::Parameter(format!("network has no attribute {name:?}")))?;
        check_aux(values).map_err(|m| Error::Parameter(format!("auxiliary column {name:?}: {m}")))?;
        Ok(AuxiliaryVector {
            values: values.to_vec(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalized(&self) -> Vec<f64> {
        let total: f64 = self.values.iter().sum();
        self.values.iter().map(|v| v / total).collect()
    }
}

/// Extended PageRank:
///
/// `P_i = γ Σ_j (w_ji / s_j^out) P_j + (1 - γ) λ_i / Σλ`
///
/// solved by power iteration from `P = λ/Σλ`. The mass sitting on nodes
/// without outgoing flow is handed back in proportion to λ/Σλ each step.
pub fn extended_pagerank(
    g: &IONetwork,
    cfg: PageRankConfig,
    lambda: &AuxiliaryVector,
) -> Result<ScoreVector> {
    let out = g.out_strengths();
    let transitions = g
        .edges()
        .iter()
        .map(|e| (e.source, e.target, e.weight / out[e.source]));
    run(g, cfg, lambda, transitions)
}

/// Extended PageRank with equal λ for every node.
pub fn weighted_pagerank(g: &IONetwork, cfg: PageRankConfig) -> Result<ScoreVector> {
    extended_pagerank(g, cfg, &AuxiliaryVector::uniform(g.node_count()))
}

/// Classic PageRank on the binary adjacency structure (weights ignored).
pub fn standard_pagerank(g: &IONetwork, cfg: PageRankConfig) -> Result<ScoreVector> {
    let deg = g.out_degrees();
    let transitions = g
        .edges()
        .iter()
        .map(|e| (e.source, e.target, 1.0 / deg[e.source] as f64));
    run(g, cfg, &AuxiliaryVector::uniform(g.node_count()), transitions)
}

fn run(
    g: &IONetwork,
    cfg: PageRankConfig,
    lambda: &AuxiliaryVector,
    transitions: impl Iterator<Item = (usize, usize, f64)>,
) -> Result<ScoreVector> {
    cfg.validate()?;
    let n = g.node_count();
    if lambda.values().len() != n {
        return Err(Error::Parameter(format!(
            "auxiliary vector has {} entries for {n} nodes",
            lambda.values().len()
        )));
    }
    let transitions: Vec<(usize, usize, f64)> = transitions.collect();
    let mut has_out = vec![false; n];
    for &(s, _, _) in &transitions {
        has_out[s] = true;
    }
    let dangling: Vec<usize> = (0..n).filter(|&i| !has_out[i]).collect();
    let teleport = lambda.normalized();
    let gamma = cfg.gamma;

    let mut p = teleport.clone();
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iteration in 1..=cfg.max_iter {
        next.iter_mut().for_each(|x| *x = 0.0);
        for &(s, t, prob) in &transitions {
            next[t] += prob * p[s];
        }
        let dangling_mass: f64 = dangling.iter().map(|&i| p[i]).sum();
        for (x, &v) in next.iter_mut().zip(&teleport) {
            *x = gamma * (*x + dangling_mass * v) + (1.0 - gamma) * v;
        }
        residual = l1_distance(&next, &p);
        std::mem::swap(&mut p, &mut next);
        if residual <= cfg.tol {
            return Ok(ScoreVector {
                kind: ScoreKind::Pagerank,
                nodes: g.nodes().to_vec(),
                scores: p,
                gamma: Some(gamma),
                iterations: iteration,
                residual,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: cfg.max_iter,
        residual,
    })
}
