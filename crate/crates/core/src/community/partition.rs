use std::collections::HashMap;
use std::hash::Hash;
use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::network::IONetwork;

/// Node → community assignment with labels `0..k`, numbered in order of
/// first appearance along `nodes`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub nodes: Vec<String>,
    pub labels: Vec<usize>,
    pub k: usize,
    pub modularity: Option<f64>,
}

impl Partition {
    /// Builds a partition from arbitrary labels, renumbering them canonically.
    pub fn from_labels<L: Eq + Hash + Clone>(nodes: Vec<String>, labels: &[L]) -> Result<Self> {
        if nodes.len() != labels.len() {
            return Err(Error::PartitionMismatch(format!(
                "{} nodes but {} labels",
                nodes.len(),
                labels.len()
            )));
        }
        let mut seen = HashMap::new();
        for n in &nodes {
            if seen.insert(n.as_str(), 0usize).is_some() {
                return Err(Error::PartitionMismatch(format!("node {n:?} labeled twice")));
            }
        }
        let mut map: HashMap<L, usize> = HashMap::new();
        let canonical: Vec<usize> = labels
            .iter()
            .map(|l| {
                let next = map.len();
                *map.entry(l.clone()).or_insert(next)
            })
            .collect();
        Ok(Partition {
            nodes,
            labels: canonical,
            k: map.len(),
            modularity: None,
        })
    }

    pub fn all_in_one(nodes: &[String]) -> Self {
        Partition {
            nodes: nodes.to_vec(),
            labels: vec![0; nodes.len()],
            k: usize::from(!nodes.is_empty()),
            modularity: None,
        }
    }

    pub fn singletons(nodes: &[String]) -> Self {
        Partition {
            nodes: nodes.to_vec(),
            labels: (0..nodes.len()).collect(),
            k: nodes.len(),
            modularity: None,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Community members, one list per label.
    pub fn communities(&self) -> Vec<Vec<&str>> {
        let mut out = vec![Vec::new(); self.k];
        for (n, &l) in self.nodes.iter().zip(&self.labels) {
            out[l].push(n.as_str());
        }
        out
    }

    /// Labels reordered to follow `order` (node ids). Fails unless `order`
    /// names exactly this partition's nodes.
    pub fn labels_in_order(&self, order: &[String]) -> Result<Vec<usize>> {
        if order.len() != self.nodes.len() {
            return Err(Error::PartitionMismatch(format!(
                "partition covers {} nodes, expected {}",
                self.nodes.len(),
                order.len()
            )));
        }
        let lookup: HashMap<&str, usize> = self
            .nodes
            .iter()
            .zip(&self.labels)
            .map(|(n, &l)| (n.as_str(), l))
            .collect();
        order
            .iter()
            .map(|n| {
                lookup
                    .get(n.as_str())
                    .copied()
                    .ok_or_else(|| Error::PartitionMismatch(format!("node {n:?} not in partition")))
            })
            .collect()
    }

    /// Labels aligned with `g`'s node order.
    pub fn labels_for(&self, g: &IONetwork) -> Result<Vec<usize>> {
        self.labels_in_order(g.nodes())
    }

    /// Same grouping, ignoring label names and node order.
    pub fn same_grouping(&self, other: &Partition) -> bool {
        let Ok(theirs) = other.labels_in_order(&self.nodes) else {
            return false;
        };
        let mut fwd = HashMap::new();
        let mut back = HashMap::new();
        self.labels.iter().zip(&theirs).all(|(&a, &b)| {
            *fwd.entry(a).or_insert(b) == b && *back.entry(b).or_insert(a) == a
        })
    }

    /// `node,community`
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "community"])?;
        for (n, l) in self.nodes.iter().zip(&self.labels) {
            w.write_record([n.as_str(), &l.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("writing partition", e))?;
        Ok(())
    }

    /// Reads `node,community`; community labels may be any strings.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let headers = r.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "node" || &headers[1] != "community" {
            return Err(Error::parse(1, 1, "expected header node,community"));
        }
        let mut nodes = Vec::new();
        let mut labels = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            if rec.len() != 2 {
                return Err(Error::parse(i + 2, 1, "expected 2 cells"));
            }
            nodes.push(rec[0].trim().to_string());
            labels.push(rec[1].trim().to_string());
        }
        Partition::from_labels(nodes, &labels)
    }
}
