//! Directed multigraphs with stable edge identities, quota specifications and
//! exact edge weights.
//!
//! Vertices are dense indices `0..n`. Edges are dense indices `0..E` in
//! insertion order; loops and parallel edges are ordinary, distinct records.
//! Everywhere in the crate ties are broken by the smaller edge id.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Exact edge weight.
pub type Weight = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: VertexId,
    pub dst: VertexId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    names: Option<Vec<String>>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
}

impl MultiGraph {
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let edges: Vec<Edge> = edges
            .into_iter()
            .map(|(src, dst)| Edge { src, dst })
            .collect();
        for e in &edges {
            for v in [e.src, e.dst] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        vertex_count,
                    });
                }
            }
        }
        let mut out_edges = vec![Vec::new(); vertex_count];
        let mut in_edges = vec![Vec::new(); vertex_count];
        for (id, e) in edges.iter().enumerate() {
            out_edges[e.src].push(id);
            in_edges[e.dst].push(id);
        }
        Ok(MultiGraph {
            vertex_count,
            edges,
            names: None,
            out_edges,
            in_edges,
        })
    }

    /// Builds a graph from an adjacency matrix; edges are emitted row-major,
    /// `m[i][j]` copies of `i -> j` each.
    pub fn from_adjacency(m: &[Vec<usize>]) -> Result<Self> {
        let n = m.len();
        let mut edges = Vec::new();
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    what: "adjacency row",
                    expected: n,
                    actual: row.len(),
                });
            }
            for (j, &count) in row.iter().enumerate() {
                edges.extend(std::iter::repeat_n((i, j), count));
            }
        }
        MultiGraph::new(n, edges)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.vertex_count {
            return Err(Error::LengthMismatch {
                what: "vertex names",
                expected: self.vertex_count,
                actual: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    /// One vertex with `k` loops.
    pub fn rose(k: usize) -> Self {
        MultiGraph::new(1, std::iter::repeat_n((0, 0), k)).expect("valid rose")
    }

    /// Complete digraph without loops (adjacency `J - I`).
    pub fn complete(n: usize) -> Self {
        let m: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| usize::from(i != j)).collect())
            .collect();
        MultiGraph::from_adjacency(&m).expect("valid complete graph")
    }

    /// Complete digraph with a loop at every vertex (adjacency `J`).
    pub fn complete_with_loops(n: usize) -> Self {
        MultiGraph::from_adjacency(&vec![vec![1; n]; n]).expect("valid complete graph")
    }

    /// Path on `n` vertices with edges in both directions between neighbours.
    pub fn path(n: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n.saturating_sub(1) {
            edges.push((i, i + 1));
            edges.push((i + 1, i));
        }
        MultiGraph::new(n, edges).expect("valid path graph")
    }

    /// Cycle on `n >= 3` vertices with edges in both directions between neighbours.
    pub fn cycle(n: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            let j = (i + 1) % n;
            edges.push((i, j));
            edges.push((j, i));
        }
        MultiGraph::new(n, edges).expect("valid cycle graph")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn vertex_name(&self, v: VertexId) -> String {
        match &self.names {
            Some(names) => names[v].clone(),
            None => v.to_string(),
        }
    }

    /// Outgoing edge ids of `v`, ascending.
    pub fn outstar(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    /// Incoming edge ids of `v`, ascending.
    pub fn instar(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_edges[v].len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_edges[v].len()
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.vertex_count {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                vertex_count: self.vertex_count,
            })
        }
    }
}

/// `m[i][j]` = number of edges from `i` to `j`; loops land on the diagonal.
pub fn adjacency_matrix(g: &MultiGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0; n]; n];
    for e in g.edges() {
        m[e.src][e.dst] += 1;
    }
    m
}

/// The row vector `q M`: the number of arrows that can land on each vertex
/// when every vertex `v` is visited `q(v)` times.
pub fn in_arrows(g: &MultiGraph, q: &[usize]) -> Result<Vec<usize>> {
    check_len("quota", g.vertex_count(), q.len())?;
    let mut incoming = vec![0; g.vertex_count()];
    for e in g.edges() {
        incoming[e.dst] += q[e.src];
    }
    Ok(incoming)
}

/// True iff `(vertex_map, edge_map)` is a graph map `cover -> base` that maps
/// each outstar of `cover` bijectively onto the outstar of its image.
pub fn check_out_covering(
    cover: &MultiGraph,
    base: &MultiGraph,
    vertex_map: &[VertexId],
    edge_map: &[EdgeId],
) -> Result<bool> {
    check_len("vertex map", cover.vertex_count(), vertex_map.len())?;
    check_len("edge map", cover.edge_count(), edge_map.len())?;
    for &v in vertex_map {
        base.check_vertex(v)?;
    }
    for &e in edge_map {
        if e >= base.edge_count() {
            return Err(Error::EdgeOutOfRange {
                edge: e,
                edge_count: base.edge_count(),
            });
        }
    }
    for (id, e) in cover.edges().iter().enumerate() {
        let image = base.edge(edge_map[id]);
        if image.src != vertex_map[e.src] || image.dst != vertex_map[e.dst] {
            return Ok(false);
        }
    }
    for v in 0..cover.vertex_count() {
        let target = base.outstar(vertex_map[v]);
        let mut images: Vec<EdgeId> = cover.outstar(v).iter().map(|&e| edge_map[e]).collect();
        images.sort_unstable();
        if images != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Quota vector `q` and start portfolio `s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuotaSpec {
    pub q: Vec<usize>,
    pub s: Vec<usize>,
}

impl QuotaSpec {
    pub fn new(g: &MultiGraph, q: Vec<usize>, s: Vec<usize>) -> Result<Self> {
        check_len("quota", g.vertex_count(), q.len())?;
        check_len("portfolio", g.vertex_count(), s.len())?;
        Ok(QuotaSpec { q, s })
    }

    /// A single start at `root`.
    pub fn single_root(g: &MultiGraph, q: Vec<usize>, root: VertexId) -> Result<Self> {
        g.check_vertex(root)?;
        let mut s = vec![0; g.vertex_count()];
        s[root] = 1;
        QuotaSpec::new(g, q, s)
    }

    pub fn validate(&self, g: &MultiGraph) -> Result<()> {
        check_len("quota", g.vertex_count(), self.q.len())?;
        check_len("portfolio", g.vertex_count(), self.s.len())
    }

    pub fn total_quota(&self) -> usize {
        self.q.iter().sum()
    }

    pub fn quota_dominates_portfolio(&self) -> bool {
        self.q.iter().zip(&self.s).all(|(q, s)| q >= s)
    }
}

/// Exact rational weights indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMap(Vec<Weight>);

impl WeightMap {
    pub fn new(g: &MultiGraph, weights: Vec<Weight>) -> Result<Self> {
        check_len("weights", g.edge_count(), weights.len())?;
        Ok(WeightMap(weights))
    }

    pub fn uniform(g: &MultiGraph, w: Weight) -> Self {
        WeightMap(vec![w; g.edge_count()])
    }

    pub fn from_integers(g: &MultiGraph, weights: &[i64]) -> Result<Self> {
        WeightMap::new(g, weights.iter().map(|&w| int_weight(w)).collect())
    }

    pub fn get(&self, e: EdgeId) -> &Weight {
        &self.0[e]
    }

    pub fn as_slice(&self) -> &[Weight] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first_negative(&self) -> Option<EdgeId> {
        self.0.iter().position(|w| w.is_negative())
    }
}

pub fn int_weight(w: i64) -> Weight {
    BigRational::from_integer(BigInt::from(w))
}

/// Parses a decimal literal (`-12`, `3.25`, `.5`) or a fraction (`7/3`)
/// into an exact rational.
pub fn parse_weight(text: &str) -> Result<Weight> {
    let bad = || Error::InvalidWeight(text.to_string());
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if negative {
        numer = -numer;
    }
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(numer, denom))
}

/// Formats an exact weight: integers plainly, terminating decimals in
/// decimal notation, everything else as `p/q`.
pub fn format_weight(w: &Weight) -> String {
    if w.is_integer() {
        return w.to_integer().to_string();
    }
    let mut den = w.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", w.numer(), w.denom());
    }
    let places = twos.max(fives);
    let scaled = (w * BigRational::from_integer(num_traits::pow(BigInt::from(10), places))).to_integer();
    let negative = scaled.is_negative();
    let digits = scaled.abs().to_string();
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    format!("{}{int_part}.{frac_part}", if negative { "-" } else { "" })
}

/// Solve mode: exactly `s(v)` roots at each `v`, or at most `s(v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    AtMost,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::AtMost => "at-most",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            what,
            expected,
            actual,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k2_loops() -> MultiGraph {
        // 0->0, 0->1, 1->0, 1->1
        MultiGraph::new(2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap()
    }

    fn fibonacci() -> MultiGraph {
        MultiGraph::from_adjacency(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 0, 2]]).unwrap()
    }

    #[test]
    fn adjacency_examples() {
        let empty = MultiGraph::new(0, []).unwrap();
        assert!(adjacency_matrix(&empty).is_empty());
        assert_eq!(adjacency_matrix(&k2_loops()), vec![vec![1, 1], vec![1, 1]]);
        assert_eq!(adjacency_matrix(&MultiGraph::rose(2)), vec![vec![2]]);
    }

    #[test]
    fn adjacency_row_and_column_sums_are_degrees() {
        let g = MultiGraph::new(3, [(0, 1), (0, 1), (1, 1), (2, 0), (1, 2)]).unwrap();
        let m = adjacency_matrix(&g);
        for v in 0..3 {
            assert_eq!(m[v].iter().sum::<usize>(), g.out_degree(v));
            assert_eq!((0..3).map(|u| m[u][v]).sum::<usize>(), g.in_degree(v));
        }
    }

    #[test]
    fn in_arrows_examples() {
        assert_eq!(in_arrows(&fibonacci(), &[3, 2, 3]).unwrap(), vec![5, 3, 8]);
        assert_eq!(in_arrows(&fibonacci(), &[0, 0, 0]).unwrap(), vec![0, 0, 0]);
        assert_eq!(in_arrows(&MultiGraph::rose(2), &[3]).unwrap(), vec![6]);
        assert!(matches!(
            in_arrows(&fibonacci(), &[1, 2]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn rejects_out_of_range_edges() {
        assert!(matches!(
            MultiGraph::new(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, .. })
        ));
    }

    #[test]
    fn k2_loops_covers_rose() {
        let cover = k2_loops();
        let rose = MultiGraph::rose(2);
        // 0->0 and 1->0 go to loop 0; 0->1 and 1->1 go to loop 1.
        let edge_map = [0, 1, 0, 1];
        assert!(check_out_covering(&cover, &rose, &[0, 0], &edge_map).unwrap());
        // Collapsing two cover edges of one outstar onto a single loop breaks bijectivity.
        assert!(!check_out_covering(&cover, &rose, &[0, 0], &[0, 0, 0, 1]).unwrap());
        assert!(!check_out_covering(&cover, &rose, &[0, 0], &[1, 1, 0, 1]).unwrap());
        assert!(matches!(
            check_out_covering(&cover, &rose, &[0, 0], &[0, 1, 0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            check_out_covering(&cover, &rose, &[0, 0], &[0, 1, 0, 2]),
            Err(Error::EdgeOutOfRange { .. })
        ));
    }

    #[test]
    fn identity_is_a_covering() {
        let g = fibonacci();
        let vm: Vec<_> = (0..g.vertex_count()).collect();
        let em: Vec<_> = (0..g.edge_count()).collect();
        assert!(check_out_covering(&g, &g, &vm, &em).unwrap());
    }

    #[test]
    fn collapsing_onto_a_bigger_outstar_is_not_a_covering() {
        // Vertex 1 has out-degree 1, rose vertex has out-degree 2.
        let cover = MultiGraph::new(2, [(0, 1), (0, 0), (1, 0)]).unwrap();
        let rose = MultiGraph::rose(2);
        assert!(!check_out_covering(&cover, &rose, &[0, 0], &[0, 1, 0]).unwrap());
    }

    #[test]
    fn weight_parsing() {
        assert_eq!(parse_weight("3").unwrap(), int_weight(3));
        assert_eq!(parse_weight("-2.5").unwrap(), BigRational::new((-5).into(), 2.into()));
        assert_eq!(parse_weight(".25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_weight("7/3").unwrap(), BigRational::new(7.into(), 3.into()));
        assert_eq!(parse_weight("0.1").unwrap(), BigRational::new(1.into(), 10.into()));
        for bad in ["", "-", "1.2.3", "abc", "1/0", "1e5"] {
            assert!(parse_weight(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn weight_formatting() {
        assert_eq!(format_weight(&int_weight(16)), "16");
        assert_eq!(format_weight(&parse_weight("-2.50").unwrap()), "-2.5");
        assert_eq!(format_weight(&parse_weight("0.05").unwrap()), "0.05");
        assert_eq!(format_weight(&parse_weight("-0.125").unwrap()), "-0.125");
        assert_eq!(format_weight(&parse_weight("1/3").unwrap()), "1/3");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_graph() -> impl Strategy<Value = MultiGraph> {
            (1usize..5).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n), 0..10)
                    .prop_map(move |edges| MultiGraph::new(n, edges).unwrap())
            })
        }

        proptest! {
            #[test]
            fn in_arrows_is_linear(g in small_graph(), seed in any::<u64>()) {
                let n = g.vertex_count();
                let q1: Vec<usize> = (0..n).map(|i| ((seed >> (4 * i)) & 7) as usize).collect();
                let q2: Vec<usize> = (0..n).map(|i| ((seed >> (4 * i + 20)) & 7) as usize).collect();
                let sum: Vec<usize> = q1.iter().zip(&q2).map(|(a, b)| a + b).collect();
                let lhs = in_arrows(&g, &sum).unwrap();
                let a = in_arrows(&g, &q1).unwrap();
                let b = in_arrows(&g, &q2).unwrap();
                let rhs: Vec<usize> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn weights_round_trip_through_text(numer in -10_000i64..10_000, places in 0u32..5) {
                let w = BigRational::new(numer.into(), BigInt::from(10).pow(places));
                prop_assert_eq!(parse_weight(&format_weight(&w)).unwrap(), w);
            }
        }
    }
}
