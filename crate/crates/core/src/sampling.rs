//! Uniform sampling of exact quota forests.
//!
//! Quota search runs FIFO with roots fixed up front. Each dequeued arrow into
//! `v` is used with probability `N(a - e_v, b - e_v) / N(a, b)`, where `a`
//! counts the arrows into each vertex not yet dequeued and `b` the nodes
//! still to be attached. Vertices with `b_v = 0` drop out of the symbol, so
//! only `J = supp(b)` is tracked.
//!
//! Random streams: a single sample with seed `s` uses
//! `ChaCha20Rng::seed_from_u64(s)` on stream 0; sample `i` of a batch uses
//! stream `i` of the same seed.

use std::collections::VecDeque;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::counting::quota_symbol_matrix;
use crate::error::{Error, Result};
use crate::forest::ImmersedForest;
use crate::graph::{adjacency_matrix, in_arrows, MultiGraph, QuotaSpec, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleOptions {
    /// Maintain an inverse of the symbol matrix and update it per decision
    /// instead of recomputing determinants.
    pub rank_one: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions { rank_one: true }
    }
}

/// Draws a uniformly random `(G, q, s)`-forest (exact mode).
pub fn sample_forest(g: &MultiGraph, spec: &QuotaSpec, seed: u64) -> Result<ImmersedForest> {
    sample_forest_with(g, spec, seed, SampleOptions::default())
}

pub fn sample_forest_with(
    g: &MultiGraph,
    spec: &QuotaSpec,
    seed: u64,
    options: SampleOptions,
) -> Result<ImmersedForest> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    sample_with_rng(g, spec, &mut rng, options)
}

/// `n` independent samples; sample `i` uses stream `i` of `seed`.
pub fn sample_batch(g: &MultiGraph, spec: &QuotaSpec, n: usize, seed: u64) -> Result<Vec<ImmersedForest>> {
    sample_batch_with(g, spec, n, seed, SampleOptions::default())
}

pub fn sample_batch_with(
    g: &MultiGraph,
    spec: &QuotaSpec,
    n: usize,
    seed: u64,
    options: SampleOptions,
) -> Result<Vec<ImmersedForest>> {
    check_achievable(g, spec)?;
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            sample_with_rng(g, spec, &mut rng, options)
        })
        .collect()
}

fn check_achievable(g: &MultiGraph, spec: &QuotaSpec) -> Result<()> {
    if crate::feasibility::achievable(g, spec, crate::graph::Mode::Exact)? {
        Ok(())
    } else {
        Err(Error::Unachievable("exact"))
    }
}

/// Returns true with probability exactly `p` (in `[0, 1]`), reading 64 bits
/// at a time until the comparison is decided.
pub fn bernoulli_exact<R: RngCore>(rng: &mut R, p: &BigRational) -> bool {
    assert!(!p.is_negative() && *p <= BigRational::one(), "probability {p} out of range");
    let num = p.numer().magnitude();
    let den = p.denom().magnitude();
    let mut u = BigUint::zero();
    let mut scale = BigUint::one();
    loop {
        u = (u << 64u32) + BigUint::from(rng.next_u64());
        scale <<= 64u32;
        let threshold = num * &scale;
        if (&u + 1u32) * den <= threshold {
            return true;
        }
        if &u * den >= threshold {
            return false;
        }
    }
}

/// Source of acceptance probabilities for one sampling run.
trait Ratios {
    /// Probability of using the current arrow into `v`.
    fn accept_probability(&mut self, v: VertexId) -> BigRational;
    fn record(&mut self, v: VertexId, accepted: bool);
}

/// Recomputes both symbols for every decision.
struct FullRecompute {
    m: Vec<Vec<usize>>,
    a: Vec<usize>,
    b: Vec<usize>,
    current: BigUint,
}

impl Ratios for FullRecompute {
    fn accept_probability(&mut self, v: VertexId) -> BigRational {
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a[v] -= 1;
        b[v] -= 1;
        let num = quota_symbol_matrix(&self.m, &a, &b);
        assert!(num <= self.current, "extension count grew");
        BigRational::new(BigInt::from(num), BigInt::from(self.current.clone()))
    }

    fn record(&mut self, v: VertexId, accepted: bool) {
        self.a[v] -= 1;
        if accepted {
            self.b[v] -= 1;
        }
        self.current = quota_symbol_matrix(&self.m, &self.a, &self.b);
        assert!(!self.current.is_zero(), "no completions left");
    }
}

/// Keeps `inv = A_J^{-1}` for `A = diag(a) - M diag(b)` restricted to
/// `J = supp(b)`; every decision changes one column of `A`.
struct RankOne {
    m: Vec<Vec<usize>>,
    a: Vec<usize>,
    b: Vec<usize>,
    /// Vertices of `J` in order, and each vertex's position in it.
    members: Vec<VertexId>,
    position: Vec<Option<usize>>,
    inv: Vec<Vec<BigRational>>,
}

fn rat(x: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn rational_inverse(mut m: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, p);
        inv.swap(k, p);
        let pivot = m[k][k].clone();
        for j in 0..n {
            m[k][j] /= &pivot;
            inv[k][j] /= &pivot;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in 0..n {
                let d = &f * &m[k][j];
                m[i][j] -= d;
                let d = &f * &inv[k][j];
                inv[i][j] -= d;
            }
        }
    }
    Some(inv)
}

impl RankOne {
    fn new(m: Vec<Vec<usize>>, a: Vec<usize>, b: Vec<usize>) -> Self {
        let members: Vec<VertexId> = (0..a.len()).filter(|&v| b[v] > 0).collect();
        let mut position = vec![None; a.len()];
        for (k, &v) in members.iter().enumerate() {
            position[v] = Some(k);
        }
        let matrix = members
            .iter()
            .map(|&i| {
                members
                    .iter()
                    .map(|&j| {
                        let diag = if i == j { rat(a[i]) } else { BigRational::zero() };
                        diag - rat(m[i][j] * b[j])
                    })
                    .collect()
            })
            .collect();
        let inv = rational_inverse(matrix).expect("symbol matrix is singular at a positive count");
        RankOne {
            m,
            a,
            b,
            members,
            position,
            inv,
        }
    }

    /// Column `k` of `M_J` minus `e_k`: the change to column `k` of `A` when
    /// vertex `members[k]` is used.
    fn use_column(&self, k: usize) -> Vec<BigRational> {
        let v = self.members[k];
        self.members
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let e = if i == k { BigRational::one() } else { BigRational::zero() };
                rat(self.m[w][v]) - e
            })
            .collect()
    }

    fn inv_times(&self, u: &[BigRational]) -> Vec<BigRational> {
        self.inv
            .iter()
            .map(|row| row.iter().zip(u).fold(BigRational::zero(), |acc, (x, y)| acc + x * y))
            .collect()
    }

    /// `inv <- (A + u e_k^T)^{-1}` by Sherman-Morrison.
    fn update(&mut self, k: usize, u: &[BigRational]) {
        let bu = self.inv_times(u);
        let denom = BigRational::one() + &bu[k];
        assert!(!denom.is_zero(), "rank-one update hit a singular matrix");
        let row_k = self.inv[k].clone();
        for (i, row) in self.inv.iter_mut().enumerate() {
            if bu[i].is_zero() {
                continue;
            }
            let f = &bu[i] / &denom;
            for (x, r) in row.iter_mut().zip(&row_k) {
                *x -= &f * r;
            }
        }
    }

    /// Drops `members[k]` from `J`; the inverse of the principal submatrix
    /// is a Schur complement of the current inverse.
    fn remove(&mut self, k: usize) {
        let pivot = self.inv[k][k].clone();
        let n = self.members.len();
        let mut next = Vec::with_capacity(n - 1);
        for i in (0..n).filter(|&i| i != k) {
            let f = &self.inv[i][k] / &pivot;
            next.push(
                (0..n)
                    .filter(|&j| j != k)
                    .map(|j| &self.inv[i][j] - &f * &self.inv[k][j])
                    .collect(),
            );
        }
        self.inv = next;
        let v = self.members.remove(k);
        self.position[v] = None;
        for (i, &w) in self.members.iter().enumerate() {
            self.position[w] = Some(i);
        }
    }
}

impl Ratios for RankOne {
    fn accept_probability(&mut self, v: VertexId) -> BigRational {
        let k = self.position[v].expect("arrow into a finished vertex");
        let (a, b) = (self.a[v], self.b[v]);
        if b == 1 {
            // v leaves J: ratio of the principal minor to the determinant.
            self.inv[k][k].clone()
        } else {
            let u = self.use_column(k);
            let det_ratio = BigRational::one() + &self.inv_times(&u)[k];
            det_ratio * rat(b) / rat(a - 1)
        }
    }

    fn record(&mut self, v: VertexId, accepted: bool) {
        let k = self.position[v].expect("arrow into a finished vertex");
        self.a[v] -= 1;
        if accepted {
            self.b[v] -= 1;
            if self.b[v] == 0 {
                self.remove(k);
            } else {
                let u = self.use_column(k);
                self.update(k, &u);
            }
        } else {
            let mut u = vec![BigRational::zero(); self.members.len()];
            u[k] = -BigRational::one();
            self.update(k, &u);
        }
    }
}

fn sample_with_rng(
    g: &MultiGraph,
    spec: &QuotaSpec,
    rng: &mut ChaCha20Rng,
    options: SampleOptions,
) -> Result<ImmersedForest> {
    check_achievable(g, spec)?;
    let m = adjacency_matrix(g);
    let a = in_arrows(g, &spec.q)?;
    let b: Vec<usize> = spec.q.iter().zip(&spec.s).map(|(q, s)| q - s).collect();
    let mut ratios: Box<dyn Ratios> = if options.rank_one {
        Box::new(RankOne::new(m, a, b.clone()))
    } else {
        let current = quota_symbol_matrix(&m, &a, &b);
        Box::new(FullRecompute { m, a, b: b.clone(), current })
    };
    run(g, spec, b, ratios.as_mut(), rng)
}

fn run(
    g: &MultiGraph,
    spec: &QuotaSpec,
    mut remaining: Vec<usize>,
    ratios: &mut dyn Ratios,
    rng: &mut ChaCha20Rng,
) -> Result<ImmersedForest> {
    let n = g.vertex_count();
    let mut forest = ImmersedForest::empty(n);
    let mut queue = VecDeque::new();
    let enqueue = |queue: &mut VecDeque<_>, node, v: VertexId, remaining: &[usize]| {
        for &e in g.outstar(v) {
            if remaining[g.edge(e).dst] > 0 {
                queue.push_back((node, e));
            }
        }
    };
    for v in 0..n {
        for _ in 0..spec.s[v] {
            let node = forest.push_node(v, None, None);
            forest.root_slots[v].push(Some(node));
        }
    }
    for node in 0..forest.node_count() {
        enqueue(&mut queue, node, forest.nodes[node].image, &remaining);
    }
    while let Some((parent, e)) = queue.pop_front() {
        let v = g.edge(e).dst;
        if remaining[v] == 0 {
            continue;
        }
        let p = ratios.accept_probability(v);
        let accepted = bernoulli_exact(rng, &p);
        ratios.record(v, accepted);
        if accepted {
            remaining[v] -= 1;
            let node = forest.push_node(v, Some(parent), Some(e));
            enqueue(&mut queue, node, v, &remaining);
        }
    }
    assert!(remaining.iter().all(|&r| r == 0), "sampler finished with quota left");
    Ok(forest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::validate_forest;
    use crate::graph::Mode;

    fn spec(g: &MultiGraph, q: &[usize], s: &[usize]) -> QuotaSpec {
        QuotaSpec::new(g, q.to_vec(), s.to_vec()).unwrap()
    }

    #[test]
    fn bernoulli_extremes() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert!(bernoulli_exact(&mut rng, &BigRational::one()));
            assert!(!bernoulli_exact(&mut rng, &BigRational::zero()));
        }
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let hits = (0..30000).filter(|_| bernoulli_exact(&mut rng, &third)).count();
        assert!((9500..10500).contains(&hits), "{hits}");
    }

    #[test]
    fn all_roots_is_deterministic() {
        let g = MultiGraph::complete(3);
        let sp = spec(&g, &[2, 2, 2], &[2, 2, 2]);
        let f = sample_forest(&g, &sp, 9).unwrap();
        assert_eq!(f.node_count(), 6);
        assert_eq!(f.edge_count(), 0);
    }

    #[test]
    fn samples_are_valid_and_paths_agree() {
        let cases: Vec<(MultiGraph, Vec<usize>, Vec<usize>)> = vec![
            (MultiGraph::complete_with_loops(2), vec![2, 2], vec![1, 0]),
            (MultiGraph::rose(2), vec![3], vec![1]),
            (MultiGraph::complete(3), vec![2, 2, 2], vec![1, 0, 0]),
            (MultiGraph::path(4), vec![2, 3, 2, 1], vec![1, 0, 0, 1]),
            (
                MultiGraph::from_adjacency(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 0, 2]]).unwrap(),
                vec![3, 2, 3],
                vec![1, 0, 0],
            ),
        ];
        for (g, q, s) in cases {
            let sp = spec(&g, &q, &s);
            for seed in 0..20 {
                let fast = sample_forest_with(&g, &sp, seed, SampleOptions { rank_one: true }).unwrap();
                let slow = sample_forest_with(&g, &sp, seed, SampleOptions { rank_one: false }).unwrap();
                assert_eq!(fast, slow);
                assert_eq!(validate_forest(&fast, &g, &sp, Mode::Exact), Ok(()));
            }
        }
    }

    #[test]
    fn batch_is_reproducible() {
        let g = MultiGraph::rose(2);
        let sp = spec(&g, &[3], &[1]);
        assert!(sample_batch(&g, &sp, 0, 5).unwrap().is_empty());
        let x = sample_batch(&g, &sp, 8, 5).unwrap();
        assert_eq!(x, sample_batch(&g, &sp, 8, 5).unwrap());
        assert_eq!(x[0], sample_forest(&g, &sp, 5).unwrap());
    }

    #[test]
    fn unachievable_input_is_rejected() {
        let g = MultiGraph::new(2, [(0, 1)]).unwrap();
        let sp = spec(&g, &[1, 2], &[1, 0]);
        assert_eq!(sample_forest(&g, &sp, 0).unwrap_err(), Error::Unachievable("exact"));
    }
}
