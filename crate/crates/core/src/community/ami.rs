//! Adjusted mutual information with the hypergeometric expected-MI
//! correction and the `max(H(p), H(q))` normalizer.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::fmt_num;

use super::Partition;

fn contingency(p: &[usize], kp: usize, q: &[usize], kq: usize) -> Vec<Vec<usize>> {
    let mut table = vec![vec![0; kq]; kp];
    for (&a, &b) in p.iter().zip(q) {
        table[a][b] += 1;
    }
    table
}

fn entropy(counts: &[usize], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let f = c as f64 / n;
            -f * f.ln()
        })
        .sum()
}

/// ln(k!) for k = 0..=n.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Expected mutual information of two labelings with the given marginals
/// under random permutation (hypergeometric cell counts).
pub(crate) fn expected_mutual_information(rows: &[usize], cols: &[usize], n: usize) -> f64 {
    let lf = ln_factorials(n);
    let nf = n as f64;
    let mut emi = 0.0;
    for &a in rows {
        for &b in cols {
            let lo = (a + b).saturating_sub(n).max(1);
            let hi = a.min(b);
            let fixed = lf[a] + lf[b] + lf[n - a] + lf[n - b] - lf[n];
            for nij in lo..=hi {
                let x = nij as f64;
                let log_p = fixed - lf[nij] - lf[a - nij] - lf[b - nij] - lf[n + nij - a - b];
                emi += x / nf * (nf * x / (a as f64 * b as f64)).ln() * log_p.exp();
            }
        }
    }
    emi
}

/// Adjusted mutual information between two partitions of the same nodes.
///
/// When the adjustment leaves nothing to normalize by (both partitions
/// single-cluster, or both all-singletons), the result is 1 for identical
/// groupings and 0 otherwise.
pub fn ami(p: &Partition, q: &Partition) -> Result<f64> {
    let q_labels = q.labels_in_order(&p.nodes)?;
    if p.same_grouping(q) {
        return Ok(1.0);
    }
    let n = p.len();
    let nf = n as f64;
    let table = contingency(&p.labels, p.k, &q_labels, q.k);
    let rows: Vec<usize> = table.iter().map(|r| r.iter().sum()).collect();
    let cols: Vec<usize> = (0..q.k).map(|j| table.iter().map(|r| r[j]).sum()).collect();

    let mut mi = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let x = c as f64;
                mi += x / nf * (nf * x / (rows[i] as f64 * cols[j] as f64)).ln();
            }
        }
    }
    let h_max = entropy(&rows, nf).max(entropy(&cols, nf));
    let emi = expected_mutual_information(&rows, &cols, n);
    let denom = h_max - emi;
    if denom.abs() <= f64::EPSILON * h_max.max(1.0) {
        return Ok(0.0);
    }
    Ok((mi - emi) / denom)
}

/// Square matrix of pairwise AMI values with row and column ids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmiMatrix {
    pub row_ids: Vec<String>,
    pub col_ids: Vec<String>,
    pub entries: Vec<Vec<f64>>,
}

impl AmiMatrix {
    /// Header row `id,<col ids>`, then one row per row id.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["id".to_string()];
        header.extend(self.col_ids.iter().cloned());
        w.write_record(&header)?;
        for (id, row) in self.row_ids.iter().zip(&self.entries) {
            let mut rec = vec![id.clone()];
            rec.extend(row.iter().map(|&x| fmt_num(x)));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io("writing AMI matrix", e))?;
        Ok(())
    }
}

fn pair_ami(a: (&str, &Partition), b: (&str, &Partition)) -> Result<f64> {
    ami(a.1, b.1).map_err(|e| match e {
        Error::PartitionMismatch(m) => {
            Error::PartitionMismatch(format!("{} vs {}: {m}", a.0, b.0))
        }
        other => other,
    })
}

/// All pairwise AMI values; the matrix is symmetric by construction.
pub fn ami_matrix(partitions: &[(String, Partition)]) -> Result<AmiMatrix> {
    let m = partitions.len();
    let mut entries = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let v = pair_ami(
                (&partitions[i].0, &partitions[i].1),
                (&partitions[j].0, &partitions[j].1),
            )?;
            entries[i][j] = v;
            entries[j][i] = v;
        }
    }
    let ids: Vec<String> = partitions.iter().map(|(id, _)| id.clone()).collect();
    Ok(AmiMatrix {
        row_ids: ids.clone(),
        col_ids: ids,
        entries,
    })
}

/// Two aligned partition sequences in one matrix: entry (i, j) with i < j
/// compares `a[i]` with `a[j]`, i > j compares `b[i]` with `b[j]`, and the
/// diagonal compares `a[i]` with `b[i]`. `ids` labels the positions
/// (typically years).
pub fn triangle_matrix(ids: &[String], a: &[Partition], b: &[Partition]) -> Result<AmiMatrix> {
    let m = ids.len();
    if a.len() != m || b.len() != m {
        return Err(Error::Parameter(format!(
            "series lengths {} and {} do not match {m} ids",
            a.len(),
            b.len()
        )));
    }
    let mut entries = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let (x, y) = match i.cmp(&j) {
                std::cmp::Ordering::Less => (&a[i], &a[j]),
                std::cmp::Ordering::Greater => (&b[i], &b[j]),
                std::cmp::Ordering::Equal => (&a[i], &b[i]),
            };
            entries[i][j] = pair_ami((&ids[i], x), (&ids[j], y))?;
        }
    }
    Ok(AmiMatrix {
        row_ids: ids.to_vec(),
        col_ids: ids.to_vec(),
        entries,
    })
}
