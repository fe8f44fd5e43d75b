//! Generic quota search.
//!
//! The queue holds edges of the universal out-cover rather than vertices:
//! an entry is a host edge hanging off a concrete forest node, or a sentinel
//! standing for one start of the portfolio. Dequeuing an entry whose target
//! still has quota left uses it, creating a forest node and enqueuing that
//! node's outstar. The search succeeds iff every quota reaches zero.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, VecDeque};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::forest::{ImmersedForest, NodeId};
use crate::graph::{EdgeId, Mode, MultiGraph, QuotaSpec, VertexId, Weight, WeightMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Discipline {
    Fifo,
    Lifo,
    /// Key: weight of the entry's host edge (sentinels weigh zero).
    MinWeightEdge,
    /// Key: weight of the whole root-to-entry path.
    MinPathWeight,
    /// Uniform choice among the queued entries.
    Random(u64),
}

impl Discipline {
    fn needs_weights(self) -> bool {
        matches!(self, Discipline::MinWeightEdge | Discipline::MinPathWeight)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchConfig {
    pub discipline: Discipline,
    pub mode: Mode,
    /// Keep only the `q(v)` best pending keys per vertex. Only valid for
    /// [`Discipline::MinPathWeight`] with nonnegative weights.
    pub relaxation: bool,
}

impl SearchConfig {
    pub fn new(discipline: Discipline, mode: Mode) -> Self {
        SearchConfig {
            discipline,
            mode,
            relaxation: false,
        }
    }

    pub fn with_relaxation(mut self, on: bool) -> Self {
        self.relaxation = on;
        self
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error(transparent)]
    Input(#[from] Error),
    /// The queue ran dry before every quota reached zero (or, in exact mode,
    /// before every start was used). The partial forest is kept for
    /// inspection.
    #[error("quota search failed: residual quota {residual:?}")]
    Incomplete {
        residual: Vec<usize>,
        partial: ImmersedForest,
    },
}

#[derive(Clone, Debug)]
struct Entry {
    parent: Option<NodeId>,
    edge: Option<EdgeId>,
    target: VertexId,
    /// Sentinel entries carry their portfolio slot.
    slot: Option<usize>,
    key: Weight,
    seq: u64,
}

impl Entry {
    /// Sentinels sort before every real edge with the same key.
    fn rank(&self) -> (&Weight, usize, u64) {
        (&self.key, self.edge.map_or(0, |e| e + 1), self.seq)
    }
}

struct Prioritized(Entry);

impl PartialEq for Prioritized {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Prioritized {}
impl PartialOrd for Prioritized {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Prioritized {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.rank().cmp(&other.0.rank())
    }
}

#[allow(clippy::large_enum_variant)] // one queue per search
enum Queue {
    Fifo(VecDeque<Entry>),
    Lifo(Vec<Entry>),
    Priority(BinaryHeap<Reverse<Prioritized>>),
    Random(Vec<Entry>, ChaCha20Rng),
}

impl Queue {
    fn new(d: Discipline) -> Self {
        match d {
            Discipline::Fifo => Queue::Fifo(VecDeque::new()),
            Discipline::Lifo => Queue::Lifo(Vec::new()),
            Discipline::MinWeightEdge | Discipline::MinPathWeight => Queue::Priority(BinaryHeap::new()),
            Discipline::Random(seed) => Queue::Random(Vec::new(), ChaCha20Rng::seed_from_u64(seed)),
        }
    }

    fn insert(&mut self, e: Entry) {
        match self {
            Queue::Fifo(q) => q.push_back(e),
            Queue::Lifo(q) | Queue::Random(q, _) => q.push(e),
            Queue::Priority(q) => q.push(Reverse(Prioritized(e))),
        }
    }

    fn extract(&mut self) -> Option<Entry> {
        match self {
            Queue::Fifo(q) => q.pop_front(),
            Queue::Lifo(q) => q.pop(),
            Queue::Priority(q) => q.pop().map(|Reverse(Prioritized(e))| e),
            Queue::Random(q, rng) => {
                if q.is_empty() {
                    None
                } else {
                    let i = rng.random_range(0..q.len());
                    Some(q.swap_remove(i))
                }
            }
        }
    }
}

/// Bounded list of the `cap` smallest keys ever offered for one vertex.
struct BestKeys {
    cap: usize,
    keys: BinaryHeap<Weight>,
}

impl BestKeys {
    /// Returns false when `key` is worse than `cap` keys already recorded;
    /// such an entry could never be used.
    fn offer(&mut self, key: &Weight) -> bool {
        if self.keys.len() == self.cap {
            match self.keys.peek() {
                Some(worst) if key > worst => return false,
                _ => {}
            }
        }
        self.keys.push(key.clone());
        if self.keys.len() > self.cap {
            self.keys.pop();
        }
        true
    }
}

struct Searcher<'a> {
    g: &'a MultiGraph,
    cfg: SearchConfig,
    weights: Option<&'a WeightMap>,
    remaining: Vec<usize>,
    forest: ImmersedForest,
    /// Path weight of each forest node.
    node_key: Vec<Weight>,
    queue: Queue,
    best: Option<Vec<BestKeys>>,
    seq: u64,
}

impl<'a> Searcher<'a> {
    fn next_seq(&mut self) -> u64 {
        self.seq += 1;
        self.seq
    }

    fn enqueue(&mut self, entry: Entry) {
        if let Some(best) = &mut self.best {
            if !best[entry.target].offer(&entry.key) {
                return;
            }
        }
        self.queue.insert(entry);
    }

    fn use_entry(&mut self, entry: Entry) {
        let v = entry.target;
        debug_assert!(self.remaining[v] > 0);
        self.remaining[v] -= 1;
        let node = self.forest.push_node(v, entry.parent, entry.edge);
        if let Some(k) = entry.slot {
            self.forest.root_slots[v][k] = Some(node);
        }
        let path_key = match (self.cfg.discipline, entry.edge) {
            (Discipline::MinPathWeight, _) => entry.key.clone(),
            (_, Some(e)) if self.weights.is_some() => {
                entry.parent.map_or(Weight::zero(), |p| self.node_key[p].clone())
                    + self.weights.expect("checked").get(e)
            }
            _ => Weight::zero(),
        };
        self.node_key.push(path_key.clone());
        for &e in self.g.outstar(v) {
            let w = self.g.edge(e).dst;
            if self.remaining[w] == 0 {
                continue;
            }
            let key = match self.cfg.discipline {
                Discipline::MinWeightEdge => self.weights.expect("checked").get(e).clone(),
                Discipline::MinPathWeight => &path_key + self.weights.expect("checked").get(e),
                _ => Weight::zero(),
            };
            let seq = self.next_seq();
            self.enqueue(Entry {
                parent: Some(node),
                edge: Some(e),
                target: w,
                slot: None,
                key,
                seq,
            });
        }
    }

    fn sentinel(&mut self, v: VertexId, slot: usize) -> Entry {
        let seq = self.next_seq();
        Entry {
            parent: None,
            edge: None,
            target: v,
            slot: Some(slot),
            key: Weight::zero(),
            seq,
        }
    }

    fn run(mut self, spec: &QuotaSpec) -> std::result::Result<ImmersedForest, SearchError> {
        let n = self.g.vertex_count();
        match self.cfg.mode {
            Mode::Exact => {
                // All starts are consumed before any real edge.
                for v in 0..n {
                    for k in 0..spec.s[v] {
                        let entry = self.sentinel(v, k);
                        if self.remaining[v] > 0 {
                            self.use_entry(entry);
                        }
                    }
                }
            }
            Mode::AtMost => {
                for v in 0..n {
                    for k in 0..spec.s[v] {
                        let entry = self.sentinel(v, k);
                        self.enqueue(entry);
                    }
                }
            }
        }
        while let Some(entry) = self.queue.extract() {
            if self.remaining[entry.target] > 0 {
                self.use_entry(entry);
            }
        }
        let slots_ok = self.cfg.mode == Mode::AtMost
            || self.forest.root_slots.iter().flatten().all(Option::is_some);
        if slots_ok && self.remaining.iter().all(|&r| r == 0) {
            Ok(self.forest)
        } else {
            Err(SearchError::Incomplete {
                residual: self.remaining,
                partial: self.forest,
            })
        }
    }
}

/// Runs quota search on `(g, q, s)` with the given queue discipline.
pub fn quota_search(
    g: &MultiGraph,
    spec: &QuotaSpec,
    cfg: SearchConfig,
    weights: Option<&WeightMap>,
) -> std::result::Result<ImmersedForest, SearchError> {
    spec.validate(g)?;
    if cfg.discipline.needs_weights() && weights.is_none() {
        return Err(Error::MissingWeights.into());
    }
    if let Some(w) = weights {
        crate::graph::check_len("weights", g.edge_count(), w.len())?;
    }
    if cfg.relaxation {
        if cfg.discipline != Discipline::MinPathWeight {
            return Err(Error::InvalidConfig("relaxation requires path-weight keys").into());
        }
        if let Some(edge) = weights.and_then(WeightMap::first_negative) {
            return Err(Error::NegativeWeight { edge }.into());
        }
    }
    let n = g.vertex_count();
    let mut forest = ImmersedForest::empty(n);
    for v in 0..n {
        forest.root_slots[v] = vec![None; spec.s[v]];
    }
    let best = cfg.relaxation.then(|| {
        spec.q
            .iter()
            .map(|&cap| BestKeys {
                cap,
                keys: BinaryHeap::new(),
            })
            .collect()
    });
    let searcher = Searcher {
        g,
        cfg,
        weights,
        remaining: spec.q.clone(),
        forest,
        node_key: Vec::new(),
        queue: Queue::new(cfg.discipline),
        best,
        seq: 0,
    };
    searcher.run(spec)
}

/// Turns a valid at-most forest into an exact one by detaching non-root
/// nodes from their parents to fill the unused start slots.
pub fn at_most_to_exact(
    f: &ImmersedForest,
    g: &MultiGraph,
    spec: &QuotaSpec,
) -> Result<ImmersedForest> {
    spec.validate(g)?;
    if let Some(v) = (0..g.vertex_count()).find(|&v| spec.q[v] < spec.s[v]) {
        return Err(Error::Precondition(format!(
            "q({v}) = {} < s({v}) = {}",
            spec.q[v], spec.s[v]
        )));
    }
    if let Err(violation) = crate::forest::validate_forest(f, g, spec, Mode::AtMost) {
        return Err(Error::Precondition(format!("not a valid at-most forest: {violation}")));
    }
    let mut out = f.clone();
    for v in 0..g.vertex_count() {
        // Latest nodes first: they tend to be leaves.
        let mut candidates = out
            .nodes
            .iter()
            .rev()
            .filter(|n| n.image == v && n.parent.is_some())
            .map(|n| n.id)
            .collect::<Vec<_>>()
            .into_iter();
        for k in 0..out.root_slots[v].len() {
            if out.root_slots[v][k].is_some() {
                continue;
            }
            let node = candidates.next().ok_or_else(|| {
                Error::Precondition(format!("not enough nodes over vertex {v} to detach"))
            })?;
            out.nodes[node].parent = None;
            out.nodes[node].parent_edge = None;
            out.root_slots[v][k] = Some(node);
        }
    }
    Ok(out)
}

/// Result of [`k_lightest_paths`].
#[derive(Clone, Debug)]
pub struct KLightest {
    pub forest: ImmersedForest,
    /// For each vertex, `(path weight, forest node)` sorted by weight then node.
    pub per_vertex: Vec<Vec<(Weight, NodeId)>>,
}

impl KLightest {
    pub fn weights(&self, v: VertexId) -> Vec<Weight> {
        self.per_vertex[v].iter().map(|(w, _)| w.clone()).collect()
    }

    /// Host edges of the `i`-th lightest path to `v`.
    pub fn path(&self, v: VertexId, i: usize) -> Vec<EdgeId> {
        self.forest.path_edges(self.per_vertex[v][i].1)
    }
}

/// The `k` lightest (not necessarily simple) paths from the portfolio to
/// every vertex, via path-weight quota search with quota `k` everywhere.
/// Vertices with fewer than `k` paths get all of them.
pub fn k_lightest_paths(
    g: &MultiGraph,
    sources: &[usize],
    k: usize,
    weights: &WeightMap,
) -> Result<KLightest> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    if let Some(edge) = weights.first_negative() {
        return Err(Error::NegativeWeight { edge });
    }
    let spec = QuotaSpec::new(g, vec![k; g.vertex_count()], sources.to_vec())?;
    let cfg = SearchConfig::new(Discipline::MinPathWeight, Mode::AtMost).with_relaxation(true);
    let forest = match quota_search(g, &spec, cfg, Some(weights)) {
        Ok(f) => f,
        Err(SearchError::Incomplete { partial, .. }) => partial,
        Err(SearchError::Input(e)) => return Err(e),
    };
    let mut per_vertex = vec![Vec::new(); g.vertex_count()];
    for node in &forest.nodes {
        per_vertex[node.image].push((forest.path_weight(node.id, weights), node.id));
    }
    for list in &mut per_vertex {
        list.sort();
    }
    Ok(KLightest { forest, per_vertex })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::validate_forest;
    use crate::graph::int_weight;

    fn fibonacci() -> MultiGraph {
        MultiGraph::from_adjacency(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 0, 2]]).unwrap()
    }

    fn all_disciplines() -> Vec<Discipline> {
        let mut d = vec![Discipline::Fifo, Discipline::Lifo];
        d.extend((0..5).map(Discipline::Random));
        d
    }

    #[test]
    fn fibonacci_breadth_first_tree() {
        let g = fibonacci();
        let spec = QuotaSpec::new(&g, vec![3, 2, 3], vec![1, 0, 0]).unwrap();
        let f = quota_search(&g, &spec, SearchConfig::new(Discipline::Fifo, Mode::Exact), None).unwrap();
        assert_eq!(f.node_count(), 8);
        assert_eq!(f.edge_count(), 7);
        assert_eq!(f.root_count(), 1);
        assert_eq!(validate_forest(&f, &g, &spec, Mode::Exact), Ok(()));
    }

    #[test]
    fn unit_quotas_give_spanning_arborescences() {
        let g = MultiGraph::new(4, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3), (2, 0)]).unwrap();
        let spec = QuotaSpec::single_root(&g, vec![1; 4], 2).unwrap();
        for d in all_disciplines() {
            let f = quota_search(&g, &spec, SearchConfig::new(d, Mode::Exact), None).unwrap();
            assert_eq!(f.preimage_counts(4), vec![1; 4]);
            assert_eq!(f.edge_count(), 3);
        }
    }

    #[test]
    fn triangle_quota_two_never_produces_a_cusp() {
        let g = MultiGraph::complete(3);
        let spec = QuotaSpec::new(&g, vec![2, 2, 2], vec![1, 0, 0]).unwrap();
        for d in all_disciplines() {
            let f = quota_search(&g, &spec, SearchConfig::new(d, Mode::Exact), None).unwrap();
            assert_eq!(f.node_count(), 6);
            assert_eq!(validate_forest(&f, &g, &spec, Mode::Exact), Ok(()));
        }
    }

    #[test]
    fn failure_reports_residual_and_partial_forest() {
        let g = fibonacci();
        let spec = QuotaSpec::new(&g, vec![1, 2, 1], vec![1, 0, 0]).unwrap();
        match quota_search(&g, &spec, SearchConfig::new(Discipline::Fifo, Mode::Exact), None) {
            Err(SearchError::Incomplete { residual, partial }) => {
                assert_eq!(residual, vec![0, 1, 0]);
                assert_eq!(partial.node_count(), 3);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn exact_mode_fails_when_a_start_cannot_be_used() {
        let g = MultiGraph::rose(1);
        let spec = QuotaSpec::new(&g, vec![0], vec![1]).unwrap();
        assert!(quota_search(&g, &spec, SearchConfig::new(Discipline::Fifo, Mode::Exact), None).is_err());
        let f = quota_search(&g, &spec, SearchConfig::new(Discipline::Fifo, Mode::AtMost), None).unwrap();
        assert_eq!(f.root_slots, vec![vec![None]]);
    }

    #[test]
    fn configuration_errors() {
        let g = fibonacci();
        let spec = QuotaSpec::new(&g, vec![1, 1, 1], vec![1, 0, 0]).unwrap();
        let cfg = SearchConfig::new(Discipline::MinPathWeight, Mode::Exact);
        assert_eq!(
            quota_search(&g, &spec, cfg, None).unwrap_err(),
            SearchError::Input(Error::MissingWeights)
        );
        let w = WeightMap::from_integers(&g, &[1, -1, 1, 1, 1, 1]).unwrap();
        assert_eq!(
            quota_search(&g, &spec, cfg.with_relaxation(true), Some(&w)).unwrap_err(),
            SearchError::Input(Error::NegativeWeight { edge: 1 })
        );
        let fifo = SearchConfig::new(Discipline::Fifo, Mode::Exact).with_relaxation(true);
        assert!(matches!(
            quota_search(&g, &spec, fifo, Some(&w)),
            Err(SearchError::Input(Error::InvalidConfig(_)))
        ));
    }

    #[test]
    fn at_most_to_exact_detaches_nodes() {
        // Path of three nodes on R_1, then ask for two roots.
        let g = MultiGraph::rose(1);
        let spec = QuotaSpec::new(&g, vec![3], vec![2]).unwrap();
        let at_most = {
            let mut f = ImmersedForest::empty(1);
            let a = f.push_node(0, None, None);
            let b = f.push_node(0, Some(a), Some(0));
            f.push_node(0, Some(b), Some(0));
            f.root_slots[0] = vec![Some(a), None];
            f
        };
        assert_eq!(validate_forest(&at_most, &g, &spec, Mode::AtMost), Ok(()));
        let exact = at_most_to_exact(&at_most, &g, &spec).unwrap();
        assert_eq!(exact.root_count(), 2);
        assert_eq!(exact.node_count(), 3);
        assert_eq!(validate_forest(&exact, &g, &spec, Mode::Exact), Ok(()));

        // Exact input comes back unchanged.
        let spec1 = QuotaSpec::new(&g, vec![3], vec![1]).unwrap();
        let mut one = at_most.clone();
        one.root_slots[0] = vec![Some(0)];
        assert_eq!(at_most_to_exact(&one, &g, &spec1).unwrap(), one);

        let bad = QuotaSpec::new(&g, vec![1], vec![2]).unwrap();
        assert!(at_most_to_exact(&at_most, &g, &bad).is_err());
    }

    #[test]
    fn at_most_to_exact_on_k2_loops() {
        let g = MultiGraph::complete_with_loops(2);
        let spec = QuotaSpec::new(&g, vec![2, 2], vec![1, 1]).unwrap();
        let f = quota_search(&g, &spec, SearchConfig::new(Discipline::Fifo, Mode::AtMost), None).unwrap();
        let exact = at_most_to_exact(&f, &g, &spec).unwrap();
        assert_eq!(validate_forest(&exact, &g, &spec, Mode::Exact), Ok(()));
        assert_eq!(exact.root_count(), 2);
    }

    #[test]
    fn k_lightest_on_triangle() {
        // a->b (1), b->c (1), a->c (3)
        let g = MultiGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let w = WeightMap::from_integers(&g, &[1, 1, 3]).unwrap();
        let klp = k_lightest_paths(&g, &[1, 0, 0], 2, &w).unwrap();
        assert_eq!(klp.weights(2), vec![int_weight(2), int_weight(3)]);
        assert_eq!(klp.weights(0), vec![int_weight(0)]);
        assert_eq!(klp.path(2, 0), vec![0, 1]);
        assert_eq!(klp.path(2, 1), vec![2]);
    }

    #[test]
    fn k_lightest_with_zero_cycle_terminates() {
        let g = MultiGraph::new(2, [(0, 1), (1, 0)]).unwrap();
        let w = WeightMap::from_integers(&g, &[0, 0]).unwrap();
        let klp = k_lightest_paths(&g, &[1, 0], 2, &w).unwrap();
        assert_eq!(klp.weights(1), vec![int_weight(0), int_weight(0)]);
        assert_ne!(klp.path(1, 0), klp.path(1, 1));
        assert!(k_lightest_paths(&g, &[1, 0], 0, &w).is_err());
    }

    #[test]
    fn relaxation_does_not_change_the_forest() {
        let g = MultiGraph::new(3, [(0, 1), (1, 2), (2, 0), (0, 2), (1, 1), (2, 2)]).unwrap();
        let w = WeightMap::from_integers(&g, &[2, 1, 0, 3, 1, 2]).unwrap();
        let spec = QuotaSpec::new(&g, vec![3, 3, 3], vec![1, 0, 0]).unwrap();
        let cfg = SearchConfig::new(Discipline::MinPathWeight, Mode::AtMost);
        let plain = quota_search(&g, &spec, cfg, Some(&w)).unwrap();
        let relaxed = quota_search(&g, &spec, cfg.with_relaxation(true), Some(&w)).unwrap();
        assert_eq!(plain.canonical(), relaxed.canonical());
    }

    #[test]
    fn min_weight_edge_prefers_cheap_edges() {
        let g = MultiGraph::new(3, [(0, 1), (0, 2), (1, 2), (2, 1)]).unwrap();
        let w = WeightMap::from_integers(&g, &[5, 1, 1, 1]).unwrap();
        let spec = QuotaSpec::single_root(&g, vec![1, 1, 1], 0).unwrap();
        let f = quota_search(&g, &spec, SearchConfig::new(Discipline::MinWeightEdge, Mode::Exact), Some(&w)).unwrap();
        assert_eq!(f.weight(&w), int_weight(2));
    }
}
