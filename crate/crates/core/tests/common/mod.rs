//! Test fixtures and brute-force oracles. Oracles work from dense weight
//! matrices and never call into the library's computation paths.

#![allow(dead_code)]

use ionet::IONetwork;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Dense = Vec<Vec<f64>>;

pub fn ids(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{i:02}")).collect()
}

pub fn network_from_dense(w: &Dense) -> IONetwork {
    let n = w.len();
    let edges = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| w[i][j] > 0.0)
        .map(|(i, j)| (i, j, w[i][j]));
    IONetwork::new(ids(n), edges).unwrap()
}

/// Random weighted digraph with `n` nodes; each ordered pair (self-loops
/// included) gets an edge with probability `density`.
pub fn random_dense(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Dense {
    loop {
        let w: Dense = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(density) {
                            rng.gen_range(0.1..100.0)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect();
        let edges = w.iter().flatten().filter(|&&x| x > 0.0).count();
        if edges >= 2 {
            return w;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn row_sums(w: &Dense) -> Vec<f64> {
    w.iter().map(|r| r.iter().sum()).collect()
}

pub fn col_sums(w: &Dense) -> Vec<f64> {
    (0..w.len()).map(|j| w.iter().map(|r| r[j]).sum()).collect()
}

/// Strength feature of one endpoint: "in", "out" or "total".
pub fn feature(w: &Dense, kind: &str) -> Vec<f64> {
    let (o, i) = (row_sums(w), col_sums(w));
    match kind {
        "out" => o,
        "in" => i,
        "total" => o.iter().zip(&i).map(|(a, b)| a + b).collect(),
        _ => unreachable!(),
    }
}

/// Textbook weighted Pearson correlation over an explicit observation list.
pub fn weighted_pearson(obs: &[(f64, f64, f64)]) -> Option<f64> {
    let sw: f64 = obs.iter().map(|o| o.2).sum();
    let mx = obs.iter().map(|o| o.2 * o.0).sum::<f64>() / sw;
    let my = obs.iter().map(|o| o.2 * o.1).sum::<f64>() / sw;
    let cov = obs.iter().map(|o| o.2 * (o.0 - mx) * (o.1 - my)).sum::<f64>() / sw;
    let vx = obs.iter().map(|o| o.2 * (o.0 - mx).powi(2)).sum::<f64>() / sw;
    let vy = obs.iter().map(|o| o.2 * (o.1 - my).powi(2)).sum::<f64>() / sw;
    let spread = |f: fn(&(f64, f64, f64)) -> f64| {
        let lo = obs.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = obs.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        hi - lo > 1e-9 * hi.abs().max(1.0)
    };
    if obs.len() < 2 || !spread(|o| o.0) || !spread(|o| o.1) {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}

/// Assortativity oracle: list every edge with its endpoint features.
pub fn assort_oracle(w: &Dense, src: &str, tar: &str) -> Option<f64> {
    let (fs, ft) = (feature(w, src), feature(w, tar));
    let n = w.len();
    let obs: Vec<_> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| w[i][j] > 0.0)
        .map(|(i, j)| (fs[i], ft[j], w[i][j]))
        .collect();
    weighted_pearson(&obs)
}

pub const TYPE_FEATURES: [(&str, &str, &str); 5] = [
    ("in-in", "in", "in"),
    ("in-out", "in", "out"),
    ("out-in", "out", "in"),
    ("out-out", "out", "out"),
    ("total", "total", "total"),
];

pub fn without_node(w: &Dense, k: usize) -> Dense {
    w.iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

/// Jackknife SE recomputed from scratch with the oracle coefficient.
pub fn jackknife_oracle(w: &Dense, src: &str, tar: &str) -> Option<(Vec<f64>, f64)> {
    let n = w.len();
    let reps: Vec<f64> = (0..n)
        .map(|k| assort_oracle(&without_node(w, k), src, tar))
        .collect::<Option<_>>()?;
    let mean = reps.iter().sum::<f64>() / n as f64;
    let var = (n as f64 - 1.0) / n as f64 * reps.iter().map(|r| (r - mean).powi(2)).sum::<f64>();
    Some((reps, var.sqrt()))
}

/// Extended PageRank by a dense linear solve of
/// `(I - γ M) P = (1 - γ) t`, where column j of M is `w_j· / s_j` for a node
/// with outflow and `t` (the normalized λ) for a dangling node.
pub fn pagerank_oracle(w: &Dense, gamma: f64, lambda: &[f64]) -> Vec<f64> {
    let n = w.len();
    let total: f64 = lambda.iter().sum();
    let t: Vec<f64> = lambda.iter().map(|l| l / total).collect();
    let out = row_sums(w);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = if out[j] > 0.0 { w[j][i] / out[j] } else { t[i] };
        }
    }
    let a = DMatrix::<f64>::identity(n, n) - m * gamma;
    let b = DVector::from_iterator(n, t.iter().map(|x| (1.0 - gamma) * x));
    let p = a.lu().solve(&b).expect("nonsingular");
    p.iter().copied().collect()
}

/// Binary version of a weight matrix.
pub fn binarized(w: &Dense) -> Dense {
    w.iter()
        .map(|r| r.iter().map(|&x| if x > 0.0 { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// L1-normalized principal eigenvector of a symmetric PSD matrix, plus the
/// ratio of the second to the first eigenvalue.
pub fn principal_eigenvector(m: DMatrix<f64>) -> (Vec<f64>, f64) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let v = eig.eigenvectors.column(order[0]);
    let sign = if v.sum() < 0.0 { -1.0 } else { 1.0 };
    let total: f64 = v.iter().map(|x| x * sign).sum();
    let vec = v.iter().map(|x| x * sign / total).collect();
    let ratio = eig.eigenvalues[order[1]] / eig.eigenvalues[order[0]];
    (vec, ratio)
}

/// (hub, authority, worst eigen-gap ratio) from WWᵀ and WᵀW.
pub fn hits_oracle(w: &Dense) -> (Vec<f64>, Vec<f64>, f64) {
    let n = w.len();
    let m = DMatrix::from_fn(n, n, |i, j| w[i][j]);
    let (hub, r1) = principal_eigenvector(&m * m.transpose());
    let (auth, r2) = principal_eigenvector(m.transpose() * &m);
    (hub, auth, r1.max(r2))
}

/// Every set partition of 0..n as restricted growth strings.
pub fn all_set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for l in 0..=used {
            prefix.push(l);
            rec(prefix, used.max(l + 1), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 0, n, &mut out);
    out
}

/// Modularity by the explicit double sum over node pairs.
pub fn modularity_oracle(w: &Dense, labels: &[usize], directed: bool) -> f64 {
    let n = w.len();
    if directed {
        let (o, i) = (row_sums(w), col_sums(w));
        let total: f64 = o.iter().sum();
        let mut q = 0.0;
        for a in 0..n {
            for b in 0..n {
                if labels[a] == labels[b] {
                    q += w[a][b] - o[a] * i[b] / total;
                }
            }
        }
        q / total
    } else {
        let ws: Dense = (0..n).map(|a| (0..n).map(|b| w[a][b] + w[b][a]).collect()).collect();
        let s = row_sums(&ws);
        let two_m: f64 = s.iter().sum();
        let mut q = 0.0;
        for a in 0..n {
            for b in 0..n {
                if labels[a] == labels[b] {
                    q += ws[a][b] - s[a] * s[b] / two_m;
                }
            }
        }
        q / two_m
    }
}

pub fn exhaustive_max_modularity(w: &Dense, directed: bool) -> f64 {
    all_set_partitions(w.len())
        .iter()
        .map(|l| modularity_oracle(w, l, directed))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// AMI evaluated term by term: contingency table, entropies, and the
/// expected MI with hypergeometric cell probabilities from binomials.
pub fn ami_oracle(p: &[usize], q: &[usize]) -> f64 {
    let n = p.len();
    let kp = p.iter().max().unwrap() + 1;
    let kq = q.iter().max().unwrap() + 1;
    let mut table = vec![vec![0usize; kq]; kp];
    for (&a, &b) in p.iter().zip(q) {
        table[a][b] += 1;
    }
    let a: Vec<usize> = table.iter().map(|r| r.iter().sum()).collect();
    let b: Vec<usize> = (0..kq).map(|j| table.iter().map(|r| r[j]).sum()).collect();
    let nf = n as f64;
    let h = |c: &[usize]| -> f64 {
        c.iter()
            .filter(|&&x| x > 0)
            .map(|&x| -(x as f64 / nf) * (x as f64 / nf).ln())
            .sum()
    };
    let mut mi = 0.0;
    for i in 0..kp {
        for j in 0..kq {
            let c = table[i][j];
            if c > 0 {
                mi += c as f64 / nf * ((nf * c as f64) / (a[i] as f64 * b[j] as f64)).ln();
            }
        }
    }
    let mut emi = 0.0;
    for &ai in &a {
        for &bj in &b {
            for nij in 1..=ai.min(bj) {
                if ai + bj > n + nij {
                    continue;
                }
                let prob = binomial(bj, nij) * binomial(n - bj, ai - nij) / binomial(n, ai);
                let x = nij as f64;
                emi += prob * x / nf * (nf * x / (ai as f64 * bj as f64)).ln();
            }
        }
    }
    (mi - emi) / (h(&a).max(h(&b)) - emi)
}

/// Two dense blocks of `size` nodes each, joined by a single weak edge.
pub fn planted_blocks(size: usize, weak: f64) -> Dense {
    let n = 2 * size;
    let mut w = vec![vec![0.0; n]; n];
    for block in 0..2 {
        for i in 0..size {
            for j in 0..size {
                if i != j {
                    w[block * size + i][block * size + j] = 5.0 + (i + 2 * j) as f64;
                }
            }
        }
    }
    w[size - 1][size] = weak;
    w
}
