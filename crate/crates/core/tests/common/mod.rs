//! Instance families shared by the integration and acceptance tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use quota_trees::{MultiGraph, QuotaSpec, WeightMap};
use rand::Rng;

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut next = p.clone();
            next.insert(slot, n - 1);
            out.push(next);
        }
    }
    out
}

fn permuted(m: &[Vec<usize>], p: &[usize]) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut out = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[p[i]][p[j]] = m[i][j];
        }
    }
    out
}

/// Every `n x n` matrix with entries in `0..=max_mult`, one per class under
/// the permutations in `perms` (applied to rows and columns together).
pub fn canonical_matrices(n: usize, max_mult: usize, perms: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let cells = n * n;
    let base = max_mult + 1;
    let total = base.pow(cells as u32);
    let mut seen = BTreeSet::new();
    for code in 0..total {
        let mut m = vec![vec![0; n]; n];
        let mut c = code;
        for k in 0..cells {
            m[k / n][k % n] = c % base;
            c /= base;
        }
        let canon = perms.iter().map(|p| permuted(&m, p)).min().unwrap();
        seen.insert(canon);
    }
    seen.into_iter().collect()
}

/// Multigraphs on 1..=`max_n` vertices with multiplicity at most `max_mult`,
/// up to relabelling.
pub fn small_graphs(max_n: usize, max_mult: usize) -> Vec<MultiGraph> {
    (1..=max_n)
        .flat_map(|n| canonical_matrices(n, max_mult, &permutations(n)))
        .map(|m| MultiGraph::from_adjacency(&m).unwrap())
        .collect()
}

/// All vectors of length `n` with entries in `0..=max`.
pub fn vectors(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every `(q, s)` with `q <= max_q` and `s <= max_s` pointwise.
pub fn specs(g: &MultiGraph, max_q: usize, max_s: usize) -> Vec<QuotaSpec> {
    let n = g.vertex_count();
    let ss = vectors(n, max_s);
    vectors(n, max_q)
        .into_iter()
        .flat_map(|q| ss.iter().map(move |s| QuotaSpec::new(g, q.clone(), s.clone()).unwrap()))
        .collect()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, max_mult: usize) -> MultiGraph {
    let m: Vec<Vec<usize>> = (0..n)
        .map(|_| (0..n).map(|_| rng.random_range(0..=max_mult)).collect())
        .collect();
    MultiGraph::from_adjacency(&m).unwrap()
}

/// A random triple whose total quota is at most `max_total`.
pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize, max_mult: usize, max_total: usize) -> (MultiGraph, QuotaSpec) {
    let n = rng.random_range(1..=max_n);
    let g = random_graph(rng, n, max_mult);
    let mut q = vec![0; n];
    for _ in 0..rng.random_range(0..=max_total) {
        q[rng.random_range(0..n)] += 1;
    }
    let s: Vec<usize> = (0..n).map(|_| rng.random_range(0..=1)).collect();
    let spec = QuotaSpec::new(&g, q, s).unwrap();
    (g, spec)
}

pub fn random_weights<R: Rng>(rng: &mut R, g: &MultiGraph, lo: i64, hi: i64) -> WeightMap {
    let w: Vec<i64> = (0..g.edge_count()).map(|_| rng.random_range(lo..=hi)).collect();
    WeightMap::from_integers(g, &w).unwrap()
}
