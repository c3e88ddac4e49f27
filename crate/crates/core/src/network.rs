//! Weighted directed input-output network and its elementary statistics.
//!
//! Node order is the order given at construction and every accumulation runs
//! in node/edge index order, so sums are reproducible bit for bit. Networks
//! are immutable: operations that change the graph return a new value.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::fmt_num;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
}

#[derive(Debug, Clone)]
struct Strengths {
    s_in: Vec<f64>,
    s_out: Vec<f64>,
    s_total: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct IONetwork {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    /// Sorted by (source, target); each ordered pair appears at most once.
    edges: Vec<Edge>,
    node_attrs: BTreeMap<String, Vec<f64>>,
    strengths: OnceLock<Strengths>,
}

impl IONetwork {
    /// Builds a network from node ids and `(source, target, weight)` index
    /// triples. Weights must be strictly positive and finite.
    pub fn new<I>(nodes: Vec<String>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, id) in nodes.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidNetwork(format!("duplicate node id {id:?}")));
            }
        }
        let n = nodes.len();
        let mut list = Vec::new();
        for (source, target, weight) in edges {
            if source >= n || target >= n {
                return Err(Error::InvalidNetwork(format!(
                    "edge ({source}, {target}) references a node outside 0..{n}"
                )));
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::InvalidNetwork(format!(
                    "edge {} -> {} has non-positive or non-finite weight {weight}",
                    nodes[source], nodes[target]
                )));
            }
            list.push(Edge {
                source,
                target,
                weight,
            });
        }
        list.sort_by_key(|e| (e.source, e.target));
        if let Some(w) = list
            .windows(2)
            .find(|w| (w[0].source, w[0].target) == (w[1].source, w[1].target))
        {
            return Err(Error::InvalidNetwork(format!(
                "duplicate edge {} -> {}",
                nodes[w[0].source], nodes[w[0].target]
            )));
        }
        Ok(IONetwork {
            nodes,
            index,
            edges: list,
            node_attrs: BTreeMap::new(),
            strengths: OnceLock::new(),
        })
    }

    /// Same as [`IONetwork::new`] but with node ids given by name.
    pub fn from_named_edges<'a, I>(nodes: &[&str], edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, f64)>,
    {
        let ids: Vec<String> = nodes.iter().map(|s| s.to_string()).collect();
        let pos = |id: &str| {
            nodes
                .iter()
                .position(|n| *n == id)
                .ok_or_else(|| Error::UnknownNode(id.to_string()))
        };
        let triples = edges
            .into_iter()
            .map(|(s, t, w)| Ok((pos(s)?, pos(t)?, w)))
            .collect::<Result<Vec<_>>>()?;
        IONetwork::new(ids, triples)
    }

    /// Attaches a per-node attribute vector (e.g. value added).
    pub fn with_attr(mut self, name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let name = name.into();
        if values.len() != self.nodes.len() {
            return Err(Error::InvalidNetwork(format!(
                "attribute {name:?} has {} values for {} nodes",
                values.len(),
                self.nodes.len()
            )));
        }
        self.node_attrs.insert(name, values);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_attrs(&self) -> &BTreeMap<String, Vec<f64>> {
        &self.node_attrs
    }

    pub fn attr(&self, name: &str) -> Option<&[f64]> {
        self.node_attrs.get(name).map(Vec::as_slice)
    }

    pub fn node_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    fn strengths(&self) -> &Strengths {
        self.strengths.get_or_init(|| {
            let n = self.nodes.len();
            let mut s_in = vec![0.0; n];
            let mut s_out = vec![0.0; n];
            for e in &self.edges {
                s_out[e.source] += e.weight;
                s_in[e.target] += e.weight;
            }
            let s_total = s_in.iter().zip(&s_out).map(|(a, b)| a + b).collect();
            Strengths {
                s_in,
                s_out,
                s_total,
            }
        })
    }

    /// In-strength of every node, in node order. A self-loop counts once here
    /// and once in the out-strength.
    pub fn in_strengths(&self) -> &[f64] {
        &self.strengths().s_in
    }

    pub fn out_strengths(&self) -> &[f64] {
        &self.strengths().s_out
    }

    pub fn total_strengths(&self) -> &[f64] {
        &self.strengths().s_total
    }

    pub fn in_strength(&self, id: &str) -> Result<f64> {
        Ok(self.in_strengths()[self.node_index(id)?])
    }

    pub fn out_strength(&self, id: &str) -> Result<f64> {
        Ok(self.out_strengths()[self.node_index(id)?])
    }

    pub fn total_strength(&self, id: &str) -> Result<f64> {
        Ok(self.total_strengths()[self.node_index(id)?])
    }

    /// Number of outgoing edges per node (self-loop included).
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for e in &self.edges {
            deg[e.source] += 1;
        }
        deg
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }

    /// Dense row-major weight matrix.
    pub fn weight_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.nodes.len();
        let mut w = vec![vec![0.0; n]; n];
        for e in &self.edges {
            w[e.source][e.target] = e.weight;
        }
        w
    }

    /// Drops node `id` together with every incident edge.
    pub fn remove_node(&self, id: &str) -> Result<IONetwork> {
        let removed = self.node_index(id)?;
        if self.nodes.len() == 1 {
            return Err(Error::EmptyNetwork);
        }
        let shift = |i: usize| if i > removed { i - 1 } else { i };
        let nodes: Vec<String> = self
            .nodes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != removed)
            .map(|(_, n)| n.clone())
            .collect();
        let index = nodes.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| e.source != removed && e.target != removed)
            .map(|e| Edge {
                source: shift(e.source),
                target: shift(e.target),
                weight: e.weight,
            })
            .collect();
        let node_attrs = self
            .node_attrs
            .iter()
            .map(|(k, v)| {
                let mut v = v.clone();
                v.remove(removed);
                (k.clone(), v)
            })
            .collect();
        Ok(IONetwork {
            nodes,
            index,
            edges,
            node_attrs,
            strengths: OnceLock::new(),
        })
    }

    /// Multiplies every edge weight by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> Result<IONetwork> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::Parameter(format!("scale factor must be positive, got {factor}")));
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            e.weight *= factor;
        }
        g.strengths = OnceLock::new();
        Ok(g)
    }

    /// Reorders nodes so that new position `k` holds old node `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<IONetwork> {
        let n = self.nodes.len();
        let mut new_pos = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::Parameter("permutation length mismatch".into()));
        }
        for (k, &old) in order.iter().enumerate() {
            if old >= n || new_pos[old] != usize::MAX {
                return Err(Error::Parameter("not a permutation".into()));
            }
            new_pos[old] = k;
        }
        let nodes = order.iter().map(|&i| self.nodes[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| (new_pos[e.source], new_pos[e.target], e.weight));
        let mut g = IONetwork::new(nodes, edges)?;
        for (k, v) in &self.node_attrs {
            g.node_attrs
                .insert(k.clone(), order.iter().map(|&i| v[i]).collect());
        }
        Ok(g)
    }

    pub fn strength_summary(&self) -> StrengthSummary {
        let rows: Vec<StrengthRow> = (0..self.nodes.len())
            .map(|i| StrengthRow {
                node: self.nodes[i].clone(),
                s_in: self.in_strengths()[i],
                s_out: self.out_strengths()[i],
                s_total: self.total_strengths()[i],
            })
            .collect();
        StrengthSummary {
            in_strength: LogStats::from_values(self.in_strengths()),
            out_strength: LogStats::from_values(self.out_strengths()),
            total_strength: LogStats::from_values(self.total_strengths()),
            rows,
        }
    }

    /// `source,target,weight` edge list, one row per edge.
    pub fn write_edge_list<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["source", "target", "weight"])?;
        for e in &self.edges {
            w.write_record([
                self.nodes[e.source].as_str(),
                self.nodes[e.target].as_str(),
                &fmt_num(e.weight),
            ])?;
        }
        w.flush().map_err(|e| Error::io("writing edge list", e))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrengthRow {
    pub node: String,
    pub s_in: f64,
    pub s_out: f64,
    pub s_total: f64,
}

/// Five-number summary of log10 strengths over the nodes with positive
/// strength. Quartiles use linear interpolation between order statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogStats {
    pub positive: usize,
    pub zero: usize,
    pub log10_min: Option<f64>,
    pub log10_q1: Option<f64>,
    pub log10_median: Option<f64>,
    pub log10_q3: Option<f64>,
    pub log10_max: Option<f64>,
}

impl LogStats {
    fn from_values(values: &[f64]) -> Self {
        let mut logs: Vec<f64> = values
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|v| v.log10())
            .collect();
        logs.sort_by(f64::total_cmp);
        let zero = values.len() - logs.len();
        let q = |p: f64| quantile_sorted(&logs, p);
        LogStats {
            positive: logs.len(),
            zero,
            log10_min: logs.first().copied(),
            log10_q1: q(0.25),
            log10_median: q(0.5),
            log10_q3: q(0.75),
            log10_max: logs.last().copied(),
        }
    }
}

fn quantile_sorted(sorted: &[f64], p: f64) -> Option<f64> {
    match sorted.len() {
        0 => None,
        1 => Some(sorted[0]),
        n => {
            let h = (n - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrengthSummary {
    pub rows: Vec<StrengthRow>,
    pub in_strength: LogStats,
    pub out_strength: LogStats,
    pub total_strength: LogStats,
}

impl StrengthSummary {
    /// `node,s_in,s_out,s_total` table.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "s_in", "s_out", "s_total"])?;
        for r in &self.rows {
            w.write_record([
                r.node.as_str(),
                &fmt_num(r.s_in),
                &fmt_num(r.s_out),
                &fmt_num(r.s_total),
            ])?;
        }
        w.flush().map_err(|e| Error::io("writing strengths", e))?;
        Ok(())
    }
}
