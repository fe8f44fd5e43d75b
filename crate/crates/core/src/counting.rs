//! Exact counts of quota forests.
//!
//! `N(a, b) = det(diag(a) - M diag(b)) * prod_i C(a_i, b_i) / a_i` with the
//! conventions that `C(n, k) = 0` unless `0 <= k <= n` and that indices with
//! `a_i = 0` are deleted from the matrix and the product.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{adjacency_matrix, check_len, in_arrows, MultiGraph, QuotaSpec};

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinant over the rationals by Gaussian elimination.
pub fn rational_det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(k, p);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in k..n {
                let d = &f * &m[k][j];
                m[i][j] -= d;
            }
        }
    }
    det
}

pub(crate) fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `(bM)_i = sum_j b_j M[j][i]`.
pub(crate) fn row_times(b: &[usize], m: &[Vec<usize>]) -> Vec<usize> {
    let n = b.len();
    (0..n).map(|i| (0..n).map(|j| b[j] * m[j][i]).sum()).collect()
}

/// The quota symbol for a fixed adjacency matrix `m`.
///
/// Outside the region `0 <= b <= a`, `a >= bM` the symbol is defined to be
/// zero, as in the recurrence; the raw determinant formula can be negative
/// there.
pub fn quota_symbol_matrix(m: &[Vec<usize>], a: &[usize], b: &[usize]) -> BigUint {
    let n = a.len();
    if (0..n).any(|i| b[i] > a[i]) {
        return BigUint::zero();
    }
    let bm = row_times(b, m);
    if (0..n).any(|i| a[i] < bm[i]) {
        return BigUint::zero();
    }
    // Columns with b_j = 0 are a_j e_j, so they contribute a_j to the
    // determinant and cancel the matching 1/a_j; only supp(b) remains.
    let support: Vec<usize> = (0..n).filter(|&i| b[i] > 0).collect();
    let mut numerator = BigUint::one();
    let mut denominator = BigUint::one();
    for &i in &support {
        numerator *= binomial(a[i], b[i]);
        denominator *= BigUint::from(a[i]);
    }
    let matrix: Vec<Vec<BigInt>> = support
        .iter()
        .map(|&i| {
            support
                .iter()
                .map(|&j| {
                    let diag = if i == j { a[i] as i128 } else { 0 };
                    BigInt::from(diag - (m[i][j] * b[j]) as i128)
                })
                .collect()
        })
        .collect();
    let det = bareiss_det(matrix);
    assert!(!det.is_negative(), "negative determinant {det} inside the symbol's domain");
    let total = det.magnitude() * numerator;
    let (value, rem) = total.div_rem(&denominator);
    assert!(rem.is_zero(), "quota symbol is not an integer");
    value
}

fn check_symbol_args(g: &MultiGraph, a: &[usize], b: &[usize]) -> Result<()> {
    check_len("a", g.vertex_count(), a.len())?;
    check_len("b", g.vertex_count(), b.len())
}

/// Quota symbol `N(a, b)` evaluated with the determinant formula.
pub fn quota_symbol(g: &MultiGraph, a: &[usize], b: &[usize]) -> Result<BigUint> {
    check_symbol_args(g, a, b)?;
    Ok(quota_symbol_matrix(&adjacency_matrix(g), a, b))
}

/// Quota symbol evaluated with the recurrence, memoized on `(a, b)`.
/// One evaluator per thread.
pub struct RecurrenceEvaluator {
    m: Vec<Vec<usize>>,
    memo: HashMap<(Vec<usize>, Vec<usize>), BigUint>,
}

impl RecurrenceEvaluator {
    pub fn new(g: &MultiGraph) -> Self {
        RecurrenceEvaluator {
            m: adjacency_matrix(g),
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, a: &[usize], b: &[usize]) -> Result<BigUint> {
        let n = self.m.len();
        check_len("a", n, a.len())?;
        check_len("b", n, b.len())?;
        Ok(self.go(a.to_vec(), b.to_vec()))
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    fn go(&mut self, mut a: Vec<usize>, mut b: Vec<usize>) -> BigUint {
        let n = a.len();
        if (0..n).any(|i| b[i] > a[i]) {
            return BigUint::zero();
        }
        let bm = row_times(&b, &self.m);
        if (0..n).any(|i| a[i] < bm[i]) {
            return BigUint::zero();
        }
        if b.iter().all(|&x| x == 0) {
            return BigUint::one();
        }
        let Some(i) = (0..n).find(|&i| a[i] > bm[i]) else {
            return BigUint::zero();
        };
        let key = (a, b);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        (a, b) = key;
        a[i] -= 1;
        let skip = self.go(a.clone(), b.clone());
        let take = if b[i] > 0 {
            let mut b2 = b.clone();
            b2[i] -= 1;
            self.go(a.clone(), b2)
        } else {
            BigUint::zero()
        };
        a[i] += 1;
        let value = skip + take;
        self.memo.insert((a, b), value.clone());
        value
    }
}

/// Quota symbol evaluated with the recurrence.
pub fn quota_symbol_rec(g: &MultiGraph, a: &[usize], b: &[usize]) -> Result<BigUint> {
    RecurrenceEvaluator::new(g).eval(a, b)
}

fn sub(x: &[usize], y: &[usize]) -> Option<Vec<usize>> {
    x.iter().zip(y).map(|(a, b)| a.checked_sub(*b)).collect()
}

/// Number of `(G, q, s)`-forests with exactly `s(v)` roots at each `v`.
/// Roots over the same vertex are distinguishable slots.
pub fn count_forests_exact(g: &MultiGraph, spec: &QuotaSpec) -> Result<BigUint> {
    spec.validate(g)?;
    let Some(b) = sub(&spec.q, &spec.s) else {
        return Ok(BigUint::zero());
    };
    let a = in_arrows(g, &spec.q)?;
    quota_symbol(g, &a, &b)
}

/// Number of forests using at most `s(v)` of the start slots at each `v`.
pub fn count_forests_at_most(g: &MultiGraph, spec: &QuotaSpec) -> Result<BigUint> {
    spec.validate(g)?;
    let a: Vec<usize> = in_arrows(g, &spec.q)?
        .iter()
        .zip(&spec.s)
        .map(|(x, y)| x + y)
        .collect();
    quota_symbol(g, &a, &spec.q)
}

/// Number of completions of a partial quota search in which `seen(v)`
/// arrows into `v` have been dequeued and `used(v)` of them were used.
pub fn count_extensions(
    g: &MultiGraph,
    spec: &QuotaSpec,
    seen: &[usize],
    used: &[usize],
) -> Result<BigUint> {
    spec.validate(g)?;
    check_len("seen", g.vertex_count(), seen.len())?;
    check_len("used", g.vertex_count(), used.len())?;
    let arrows = in_arrows(g, &spec.q)?;
    for v in 0..g.vertex_count() {
        if used[v] > seen[v] {
            return Err(Error::Precondition(format!("used({v}) > seen({v})")));
        }
        if seen[v] > arrows[v] {
            return Err(Error::Precondition(format!("seen({v}) exceeds the arrows into {v}")));
        }
        if spec.s[v] + used[v] > spec.q[v] {
            return Err(Error::Precondition(format!("used({v}) > q({v}) - s({v})")));
        }
    }
    let a = sub(&arrows, seen).expect("checked");
    let b: Vec<usize> = (0..g.vertex_count()).map(|v| spec.q[v] - spec.s[v] - used[v]).collect();
    quota_symbol(g, &a, &b)
}

/// `det(diag(root_weights) + diag(In) - M)` where `M` and `In` use the given
/// edge weights. This is the weighted sum over spanning forests, each tree
/// weighted by its root's weight and each edge by its own weight.
pub fn matrix_forest_det(
    g: &MultiGraph,
    root_weights: &[BigRational],
    edge_weights: &[BigRational],
) -> Result<BigRational> {
    check_len("root weights", g.vertex_count(), root_weights.len())?;
    check_len("edge weights", g.edge_count(), edge_weights.len())?;
    let n = g.vertex_count();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for (i, w) in root_weights.iter().enumerate() {
        m[i][i] += w;
    }
    for (e, w) in g.edges().iter().zip(edge_weights) {
        if e.src != e.dst {
            m[e.dst][e.dst] += w;
            m[e.src][e.dst] -= w;
        }
    }
    Ok(rational_det(m))
}
