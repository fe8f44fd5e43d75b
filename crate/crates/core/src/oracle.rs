//! Brute-force references for the fast paths. Not tuned; meant for tiny
//! instances.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::forest::ImmersedForest;
use crate::graph::{check_len, in_arrows, Mode, MultiGraph, QuotaSpec, VertexId, Weight, WeightMap};

/// Largest total quota [`enumerate_forests`] accepts.
pub const ENUMERATION_BOUND: usize = 10;

struct Enumerator<'a, F> {
    g: &'a MultiGraph,
    remaining: Vec<usize>,
    forest: ImmersedForest,
    visit: F,
}

impl<F: FnMut(&ImmersedForest)> Enumerator<'_, F> {
    /// Arrows still to come into each vertex: one per out-edge of every
    /// unprocessed node, plus `M` times the nodes not yet created.
    fn can_finish(&self, next: usize) -> bool {
        let mut arrivals = in_arrows(self.g, &self.remaining).expect("lengths match");
        for node in &self.forest.nodes[next..] {
            for &e in self.g.outstar(node.image) {
                arrivals[self.g.edge(e).dst] += 1;
            }
        }
        arrivals.iter().zip(&self.remaining).all(|(a, r)| a >= r)
    }

    fn expand(&mut self, next: usize) {
        if next == self.forest.nodes.len() {
            if self.remaining.iter().all(|&r| r == 0) {
                (self.visit)(&self.forest);
            }
            return;
        }
        if !self.can_finish(next) {
            return;
        }
        let image = self.forest.nodes[next].image;
        self.choose(next, image, 0);
    }

    /// Decides, edge by edge of the outstar, whether node `parent` gets a
    /// child along it.
    fn choose(&mut self, parent: usize, image: VertexId, i: usize) {
        let out = self.g.outstar(image);
        if i == out.len() {
            self.expand(parent + 1);
            return;
        }
        self.choose(parent, image, i + 1);
        let e = out[i];
        let v = self.g.edge(e).dst;
        if self.remaining[v] > 0 {
            self.remaining[v] -= 1;
            self.forest.push_node(v, Some(parent), Some(e));
            self.choose(parent, image, i + 1);
            self.forest.nodes.pop();
            self.remaining[v] += 1;
        }
    }

    /// Fills root slots in vertex then slot order.
    fn roots(&mut self, mode: Mode, spec: &QuotaSpec, v: usize, k: usize) {
        let n = spec.q.len();
        if v == n {
            self.expand(0);
            return;
        }
        if k == spec.s[v] {
            self.roots(mode, spec, v + 1, 0);
            return;
        }
        if mode == Mode::AtMost {
            self.forest.root_slots[v].push(None);
            self.roots(mode, spec, v, k + 1);
            self.forest.root_slots[v].pop();
        }
        if self.remaining[v] > 0 {
            self.remaining[v] -= 1;
            let node = self.forest.push_node(v, None, None);
            self.forest.root_slots[v].push(Some(node));
            self.roots(mode, spec, v, k + 1);
            self.forest.root_slots[v].pop();
            self.forest.nodes.pop();
            self.remaining[v] += 1;
        }
    }
}

/// Calls `visit` once for every `(G, q, s)`-forest in the given mode. Each
/// forest is produced exactly once, with nodes in breadth-first creation
/// order. No size guard.
pub fn for_each_forest<F: FnMut(&ImmersedForest)>(g: &MultiGraph, spec: &QuotaSpec, mode: Mode, visit: F) -> Result<()> {
    spec.validate(g)?;
    let mut en = Enumerator {
        g,
        remaining: spec.q.clone(),
        forest: ImmersedForest::empty(g.vertex_count()),
        visit,
    };
    en.roots(mode, spec, 0, 0);
    Ok(())
}

fn check_bound(spec: &QuotaSpec) -> Result<()> {
    let total = spec.total_quota();
    if total > ENUMERATION_BOUND {
        return Err(Error::EnumerationBound {
            total,
            bound: ENUMERATION_BOUND,
        });
    }
    Ok(())
}

/// All forests in canonical form, sorted by their serialization.
pub fn enumerate_forests(g: &MultiGraph, spec: &QuotaSpec, mode: Mode) -> Result<Vec<ImmersedForest>> {
    check_bound(spec)?;
    enumerate_forests_unchecked(g, spec, mode)
}

/// [`enumerate_forests`] without the size guard.
pub fn enumerate_forests_unchecked(g: &MultiGraph, spec: &QuotaSpec, mode: Mode) -> Result<Vec<ImmersedForest>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for_each_forest(g, spec, mode, |f| {
        let c = f.canonical();
        if seen.insert(c.to_json_line()) {
            out.push(c);
        }
    })?;
    out.sort_by_cached_key(ImmersedForest::to_json_line);
    Ok(out)
}

/// Number of forests, by enumeration. No size guard.
pub fn count_by_enumeration(g: &MultiGraph, spec: &QuotaSpec, mode: Mode) -> Result<u64> {
    let mut n = 0u64;
    for_each_forest(g, spec, mode, |_| n += 1)?;
    Ok(n)
}

/// Minimum weight over all exact forests, or `None` if there are none.
pub fn brute_force_mqf(g: &MultiGraph, spec: &QuotaSpec, w: &WeightMap) -> Result<Option<Weight>> {
    check_bound(spec)?;
    check_len("weights", g.edge_count(), w.len())?;
    let mut best: Option<Weight> = None;
    for_each_forest(g, spec, Mode::Exact, |f| {
        let x = f.weight(w);
        if best.as_ref().is_none_or(|b| x < *b) {
            best = Some(x);
        }
    })?;
    Ok(best)
}

/// The `k` smallest path weights from the portfolio to each vertex, sorted.
/// A source `u` contributes `sources[u]` empty paths of weight zero.
///
/// Paths are grouped by length. If a path has more than `k * n` edges some
/// vertex repeats `k + 1` times along it, and cutting out the `k` cycles
/// that start at its first occurrence gives `k` distinct shorter paths that
/// are no heavier, so longer paths never matter.
pub fn brute_force_k_lightest(g: &MultiGraph, sources: &[usize], k: usize, w: &WeightMap) -> Result<Vec<Vec<Weight>>> {
    let n = g.vertex_count();
    check_len("sources", n, sources.len())?;
    check_len("weights", g.edge_count(), w.len())?;
    if let Some(edge) = w.first_negative() {
        return Err(Error::NegativeWeight { edge });
    }
    let mut layer: Vec<Vec<Weight>> = sources
        .iter()
        .map(|&c| vec![Weight::default(); c.min(k)])
        .collect();
    let mut all = layer.clone();
    for _ in 0..k * n {
        let mut next: Vec<Vec<Weight>> = vec![Vec::new(); n];
        for (e, edge) in g.edges().iter().enumerate() {
            for x in &layer[edge.src] {
                next[edge.dst].push(x + w.get(e));
            }
        }
        for list in &mut next {
            list.sort();
            list.truncate(k);
        }
        for (acc, list) in all.iter_mut().zip(&next) {
            acc.extend(list.iter().cloned());
        }
        if next.iter().all(Vec::is_empty) {
            break;
        }
        layer = next;
    }
    for list in &mut all {
        list.sort();
        list.truncate(k);
    }
    Ok(all)
}
