//! Minimum-weight quota forests via edge inventories.
//!
//! An inventory assigns each edge a usage count `x_e`. It is the inventory
//! of an exact quota forest iff
//! - `0 <= x_e <= c_e q(src(e))` for every edge,
//! - the arrivals into `v` sum to `q(v) - s(v)`,
//! - `sum of x over G[S] <= sum of q over S, minus 1` for every nonempty `S`
//!   without starts.
//!
//! The subset constraint is checked through the strongly connected
//! components of `G[x]`: a violated subset exists iff some source component
//! has no start.

use std::collections::VecDeque;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::ImmersedForest;
use crate::graph::{check_len, EdgeId, MultiGraph, QuotaSpec, VertexId, Weight, WeightMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Inventory {
    pub x: Vec<usize>,
    /// Copy counts; all ones for an inventory of the host graph itself.
    pub c: Vec<usize>,
}

impl Inventory {
    pub fn new(x: Vec<usize>) -> Self {
        let c = vec![1; x.len()];
        Inventory { x, c }
    }

    pub fn weight(&self, w: &WeightMap) -> Weight {
        self.x
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .fold(Weight::zero(), |acc, (e, &x)| acc + w.get(e) * BigRational::from_integer(x.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "constraint", rename_all = "snake_case")]
pub enum InventoryViolation {
    Edge { edge: EdgeId, x: usize, cap: usize },
    Node { vertex: VertexId, arrivals: usize, required: i64 },
    Subset { vertices: Vec<VertexId>, internal: usize, quota: usize },
}

impl fmt::Display for InventoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InventoryViolation::Edge { edge, x, cap } => write!(f, "edge {edge}: x = {x} exceeds {cap}"),
            InventoryViolation::Node { vertex, arrivals, required } => {
                write!(f, "vertex {vertex}: {arrivals} arrivals, need {required}")
            }
            InventoryViolation::Subset { vertices, internal, quota } => {
                write!(f, "subset {vertices:?}: {internal} internal arrows, quota {quota}")
            }
        }
    }
}

fn check_shape(g: &MultiGraph, spec: &QuotaSpec, inv: &Inventory) -> Result<()> {
    spec.validate(g)?;
    check_len("inventory", g.edge_count(), inv.x.len())?;
    check_len("copy counts", g.edge_count(), inv.c.len())?;
    if let Some(e) = inv.c.iter().position(|&c| c == 0) {
        return Err(Error::Precondition(format!("copy count of edge {e} is zero")));
    }
    Ok(())
}

fn edge_and_node_violations(g: &MultiGraph, spec: &QuotaSpec, inv: &Inventory) -> Vec<InventoryViolation> {
    let mut out = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        let cap = inv.c[e] * spec.q[edge.src];
        if inv.x[e] > cap {
            out.push(InventoryViolation::Edge { edge: e, x: inv.x[e], cap });
        }
    }
    for v in 0..g.vertex_count() {
        let arrivals: usize = g.instar(v).iter().map(|&e| inv.x[e]).sum();
        let required = spec.q[v] as i64 - spec.s[v] as i64;
        if arrivals as i64 != required {
            out.push(InventoryViolation::Node { vertex: v, arrivals, required });
        }
    }
    out
}

/// Start-free source components of `G[x]` over `supp(q)`, singletons first,
/// then by smallest vertex.
fn start_free_sources(g: &MultiGraph, spec: &QuotaSpec, x: &[usize]) -> Vec<Vec<VertexId>> {
    let n = g.vertex_count();
    let mut h = DiGraph::<(), ()>::with_capacity(n, g.edge_count());
    let nodes: Vec<_> = (0..n).map(|_| h.add_node(())).collect();
    for (e, edge) in g.edges().iter().enumerate() {
        if x[e] > 0 {
            h.add_edge(nodes[edge.src], nodes[edge.dst], ());
        }
    }
    let mut component = vec![0; n];
    let sccs: Vec<Vec<VertexId>> = tarjan_scc(&h)
        .into_iter()
        .map(|c| {
            let mut c: Vec<VertexId> = c.into_iter().map(|i| i.index()).collect();
            c.sort_unstable();
            c
        })
        .collect();
    for (k, c) in sccs.iter().enumerate() {
        for &v in c {
            component[v] = k;
        }
    }
    let mut has_entry = vec![false; sccs.len()];
    for (e, edge) in g.edges().iter().enumerate() {
        if x[e] > 0 && component[edge.src] != component[edge.dst] {
            has_entry[component[edge.dst]] = true;
        }
    }
    let mut out: Vec<Vec<VertexId>> = sccs
        .into_iter()
        .enumerate()
        .filter(|(k, c)| !has_entry[*k] && c.iter().all(|&v| spec.q[v] > 0 && spec.s[v] == 0))
        .map(|(_, c)| c)
        .collect();
    out.sort_by_key(|c| (c.len() > 1, c[0]));
    out
}

fn subset_violation(g: &MultiGraph, spec: &QuotaSpec, x: &[usize], subset: &[VertexId]) -> InventoryViolation {
    let mut inside = vec![false; g.vertex_count()];
    for &v in subset {
        inside[v] = true;
    }
    let internal = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| inside[e.src] && inside[e.dst])
        .map(|(e, _)| x[e])
        .sum();
    let quota = subset.iter().map(|&v| spec.q[v]).sum();
    InventoryViolation::Subset {
        vertices: subset.to_vec(),
        internal,
        quota,
    }
}

/// All violated constraints; empty iff `inv` is the inventory of some
/// exact forest. Subset constraints are only reported once the edge and
/// node constraints hold.
pub fn check_inventory(g: &MultiGraph, spec: &QuotaSpec, inv: &Inventory) -> Result<Vec<InventoryViolation>> {
    check_shape(g, spec, inv)?;
    let local = edge_and_node_violations(g, spec, inv);
    if !local.is_empty() {
        return Ok(local);
    }
    Ok(start_free_sources(g, spec, &inv.x)
        .iter()
        .map(|s| subset_violation(g, spec, &inv.x, s))
        .collect())
}

/// A start-free source component of `G[x]`, which then saturates its quota
/// internally, or `None` if every subset constraint holds.
pub fn violating_subset(g: &MultiGraph, spec: &QuotaSpec, inv: &Inventory) -> Result<Option<Vec<VertexId>>> {
    check_shape(g, spec, inv)?;
    if let Some(v) = edge_and_node_violations(g, spec, inv).first() {
        return Err(Error::Precondition(format!("local constraint violated: {v}")));
    }
    let found = start_free_sources(g, spec, &inv.x).into_iter().next();
    if let Some(s) = &found {
        match subset_violation(g, spec, &inv.x, s) {
            InventoryViolation::Subset { internal, quota, .. } => assert!(internal >= quota),
            _ => unreachable!(),
        }
    }
    Ok(found)
}

#[derive(Clone, Debug)]
struct LevelEdge {
    src: usize,
    dst: usize,
    weight: Weight,
    copies: usize,
    /// Edge of the previous level (or of the host graph at level 0).
    origin: EdgeId,
}

#[derive(Clone, Debug)]
struct Level {
    q: Vec<usize>,
    s: Vec<usize>,
    edges: Vec<LevelEdge>,
    /// Host vertices represented by each level vertex.
    members: Vec<Vec<VertexId>>,
}

/// One contraction step of the minimum-weight search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub depth: usize,
    /// Host vertices merged into the new vertex.
    pub host_vertices: Vec<VertexId>,
    /// Weight of the greedy choice inside the subset, in that level's
    /// weights. It is added back when the contracted solution is expanded.
    pub internal_weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MqfSolution {
    pub inventory: Inventory,
    pub weight: Weight,
    /// Contractions in the order they were made.
    pub contractions: Vec<Contraction>,
    /// Weight of the greedy choice in the last level, in its own weights.
    pub final_level_weight: Weight,
}

/// Cheapest `q(v) - s(v)` arriving copies at each vertex; ties go to the
/// smaller edge id, and an edge is exhausted before the next is used.
fn greedy(level: &Level) -> Result<Vec<usize>> {
    let n = level.q.len();
    let mut incoming = vec![Vec::new(); n];
    for (k, e) in level.edges.iter().enumerate() {
        incoming[e.dst].push(k);
    }
    let mut x = vec![0; level.edges.len()];
    for v in 0..n {
        let mut need = level.q[v] - level.s[v];
        let list = &mut incoming[v];
        list.sort_by(|&i, &j| level.edges[i].weight.cmp(&level.edges[j].weight).then(i.cmp(&j)));
        for &k in list.iter() {
            if need == 0 {
                break;
            }
            let e = &level.edges[k];
            let take = need.min(e.copies * level.q[e.src]);
            x[k] = take;
            need -= take;
        }
        if need > 0 {
            return Err(Error::Unachievable("exact"));
        }
    }
    Ok(x)
}

struct Solver {
    contractions: Vec<Contraction>,
    final_level_weight: Weight,
}

impl Solver {
    fn solve(&mut self, level: &Level, depth: usize) -> Result<Vec<usize>> {
        let x = greedy(level)?;
        let n = level.q.len();
        let h = MultiGraph::new(n, level.edges.iter().map(|e| (e.src, e.dst)))?;
        let spec = QuotaSpec::new(&h, level.q.clone(), level.s.clone())?;
        let Some(subset) = start_free_sources(&h, &spec, &x).into_iter().next() else {
            self.final_level_weight = weight_of(level, &x);
            return Ok(x);
        };
        let mut inside = vec![false; n];
        for &v in &subset {
            inside[v] = true;
        }
        // Heaviest chosen internal edge into each member; ties to the
        // smaller id.
        let mut heaviest: Vec<Option<usize>> = vec![None; n];
        let mut internal_weight = Weight::zero();
        for (k, e) in level.edges.iter().enumerate() {
            if x[k] == 0 || !inside[e.src] || !inside[e.dst] {
                continue;
            }
            internal_weight += &e.weight * BigRational::from_integer(x[k].into());
            match heaviest[e.dst] {
                Some(j) if level.edges[j].weight >= e.weight => {}
                _ => heaviest[e.dst] = Some(k),
            }
        }
        let mut host_vertices: Vec<VertexId> = subset.iter().flat_map(|&v| level.members[v].clone()).collect();
        host_vertices.sort_unstable();
        self.contractions.push(Contraction {
            depth,
            host_vertices: host_vertices.clone(),
            internal_weight,
        });

        // The contracted vertex takes the last index.
        let mut index = vec![usize::MAX; n];
        let mut next = Level {
            q: Vec::new(),
            s: Vec::new(),
            edges: Vec::new(),
            members: Vec::new(),
        };
        for v in (0..n).filter(|&v| !inside[v]) {
            index[v] = next.q.len();
            next.q.push(level.q[v]);
            next.s.push(level.s[v]);
            next.members.push(level.members[v].clone());
        }
        let merged = next.q.len();
        for &v in &subset {
            index[v] = merged;
        }
        next.q.push(1);
        next.s.push(0);
        next.members.push(host_vertices);
        for (k, e) in level.edges.iter().enumerate() {
            let (a, b) = (inside[e.src], inside[e.dst]);
            if a && b {
                continue;
            }
            let mut ne = LevelEdge {
                src: index[e.src],
                dst: index[e.dst],
                weight: e.weight.clone(),
                copies: e.copies,
                origin: k,
            };
            if b {
                let j = heaviest[e.dst].expect("every member of a saturated component has an internal arrival");
                ne.weight -= &level.edges[j].weight;
            }
            if a {
                ne.copies *= level.q[e.src];
            }
            next.edges.push(ne);
        }
        let inner = self.solve(&next, depth + 1)?;

        let mut out = vec![0; level.edges.len()];
        for (k, e) in level.edges.iter().enumerate() {
            if inside[e.src] && inside[e.dst] {
                out[k] = x[k];
            }
        }
        let mut entered = None;
        for (k, ne) in next.edges.iter().enumerate() {
            out[ne.origin] += inner[k];
            if ne.dst == merged && inner[k] > 0 {
                debug_assert!(entered.is_none() && inner[k] == 1);
                entered = Some(level.edges[ne.origin].dst);
            }
        }
        let t = entered.expect("contracted vertex has one arrival");
        let j = heaviest[t].expect("checked above");
        out[j] -= 1;
        Ok(out)
    }
}

fn weight_of(level: &Level, x: &[usize]) -> Weight {
    level
        .edges
        .iter()
        .zip(x)
        .filter(|(_, &x)| x > 0)
        .fold(Weight::zero(), |acc, (e, &x)| acc + &e.weight * BigRational::from_integer(x.into()))
}

/// Minimum-weight inventory of an exact `(G, q, s)`-forest. Negative weights
/// are allowed.
pub fn min_quota_inventory(g: &MultiGraph, spec: &QuotaSpec, w: &WeightMap) -> Result<MqfSolution> {
    spec.validate(g)?;
    check_len("weights", g.edge_count(), w.len())?;
    if !crate::feasibility::achievable(g, spec, crate::graph::Mode::Exact)? {
        return Err(Error::Unachievable("exact"));
    }
    // Zero-quota vertices carry no nodes and no arrows.
    let kept: Vec<VertexId> = (0..g.vertex_count()).filter(|&v| spec.q[v] > 0).collect();
    let mut index = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in kept.iter().enumerate() {
        index[v] = i;
    }
    let level = Level {
        q: kept.iter().map(|&v| spec.q[v]).collect(),
        s: kept.iter().map(|&v| spec.s[v]).collect(),
        edges: g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| spec.q[e.src] > 0 && spec.q[e.dst] > 0)
            .map(|(k, e)| LevelEdge {
                src: index[e.src],
                dst: index[e.dst],
                weight: w.get(k).clone(),
                copies: 1,
                origin: k,
            })
            .collect(),
        members: kept.iter().map(|&v| vec![v]).collect(),
    };
    let mut solver = Solver {
        contractions: Vec::new(),
        final_level_weight: Weight::zero(),
    };
    let x_level = solver.solve(&level, 0)?;
    let mut x = vec![0; g.edge_count()];
    for (e, &k) in level.edges.iter().zip(&x_level) {
        x[e.origin] = k;
    }
    let inventory = Inventory::new(x);
    let weight = inventory.weight(w);
    Ok(MqfSolution {
        inventory,
        weight,
        contractions: solver.contractions,
        final_level_weight: solver.final_level_weight,
    })
}

/// Builds an exact forest whose edge inventory is `inv`.
///
/// Pending start slots are consumed first-in first-out; the node created at
/// a slot over `r` takes one remaining copy of every out-edge of `r` and
/// turns it into a pending slot at the edge's target.
pub fn inventory_to_forest(g: &MultiGraph, spec: &QuotaSpec, inv: &Inventory) -> Result<ImmersedForest> {
    let violations = check_inventory(g, spec, inv)?;
    if let Some(v) = violations.first() {
        return Err(Error::Precondition(format!("invalid inventory: {v}")));
    }
    if inv.c.iter().any(|&c| c != 1) {
        return Err(Error::Precondition("copy counts must all be 1".into()));
    }
    let n = g.vertex_count();
    let mut remaining = inv.x.clone();
    let mut forest = ImmersedForest::empty(n);
    let mut pending: VecDeque<(VertexId, Option<(usize, EdgeId)>)> = VecDeque::new();
    for v in 0..n {
        for _ in 0..spec.s[v] {
            pending.push_back((v, None));
        }
    }
    while let Some((v, from)) = pending.pop_front() {
        let node = forest.push_node(v, from.map(|(p, _)| p), from.map(|(_, e)| e));
        if from.is_none() {
            forest.root_slots[v].push(Some(node));
        }
        for &e in g.outstar(v) {
            if remaining[e] > 0 {
                remaining[e] -= 1;
                pending.push_back((g.edge(e).dst, Some((node, e))));
            }
        }
    }
    if remaining.iter().any(|&r| r > 0) {
        return Err(Error::Precondition("inventory is not realizable".into()));
    }
    Ok(forest)
}

/// Directed Euler circuit through every edge of `edges` (pairs of vertices
/// below `vertex_count`), as a sequence of edge indices. `None` unless the
/// edges form one connected, balanced multigraph. No edges gives an empty
/// circuit.
pub fn euler_circuit(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Option<Vec<usize>> {
    if edges.is_empty() {
        return Some(Vec::new());
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    let mut balance = vec![0i64; vertex_count];
    for (k, &(a, b)) in edges.iter().enumerate() {
        if a >= vertex_count || b >= vertex_count {
            return None;
        }
        out[a].push(k);
        balance[a] += 1;
        balance[b] -= 1;
    }
    if balance.iter().any(|&d| d != 0) {
        return None;
    }
    for list in &mut out {
        list.reverse();
    }
    // Hierholzer: walk until stuck, splice sub-circuits on the way back.
    let start = edges[0].0;
    let mut circuit = Vec::with_capacity(edges.len());
    let mut stack: Vec<(VertexId, Option<usize>)> = vec![(start, None)];
    while let Some(&(v, via)) = stack.last() {
        if let Some(k) = out[v].pop() {
            stack.push((edges[k].1, Some(k)));
        } else {
            stack.pop();
            if let Some(k) = via {
                circuit.push(k);
            }
        }
    }
    circuit.reverse();
    (circuit.len() == edges.len()).then_some(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::validate_forest;
    use crate::graph::{int_weight, Mode};

    /// The five-vertex example: quotas (4,2,2,2,3), one start at vertex 0.
    fn worked_example() -> (MultiGraph, QuotaSpec, WeightMap) {
        let arcs = [
            (0, 1, 2),
            (1, 2, 2),
            (2, 3, 1),
            (3, 4, 1),
            (4, 0, 2),
            (0, 4, 3),
            (4, 3, 1),
            (3, 2, 3),
            (2, 1, 3),
            (1, 0, 1),
            (2, 4, 2),
            (4, 2, 1),
            (1, 1, 1),
            (4, 4, 4),
        ];
        let g = MultiGraph::new(5, arcs.iter().map(|&(a, b, _)| (a, b))).unwrap();
        let w = WeightMap::from_integers(&g, &arcs.map(|(_, _, w)| w)).unwrap();
        let spec = QuotaSpec::new(&g, vec![4, 2, 2, 2, 3], vec![1, 0, 0, 0, 0]).unwrap();
        (g, spec, w)
    }

    #[test]
    fn worked_example_greedy_inventory_violations() {
        let (g, spec, _) = worked_example();
        let mut x = vec![0; 14];
        for (e, k) in [(2, 1), (3, 2), (4, 1), (6, 1), (9, 2), (10, 1), (11, 2), (12, 2)] {
            x[e] = k;
        }
        let inv = Inventory::new(x);
        let violations = check_inventory(&g, &spec, &inv).unwrap();
        let subsets: Vec<Vec<usize>> = violations
            .iter()
            .map(|v| match v {
                InventoryViolation::Subset { vertices, .. } => vertices.clone(),
                other => panic!("unexpected {other}"),
            })
            .collect();
        assert_eq!(subsets, vec![vec![1], vec![2, 3, 4]]);
        assert_eq!(violating_subset(&g, &spec, &inv).unwrap(), Some(vec![1]));

        // The circuit over {2, 3, 4}.
        let inside: Vec<(usize, usize)> = [(2, 1), (3, 2), (6, 1), (10, 1), (11, 2)]
            .iter()
            .flat_map(|&(e, k)| std::iter::repeat_n((g.edge(e).src, g.edge(e).dst), k))
            .collect();
        let c = euler_circuit(5, &inside).unwrap();
        assert_eq!(c.len(), 7);
        let mut visits = [0; 5];
        for w in c.windows(2) {
            assert_eq!(inside[w[0]].1, inside[w[1]].0);
        }
        for &k in &c {
            visits[inside[k].1] += 1;
        }
        assert_eq!(visits, [0, 0, 2, 2, 3]);
    }

    #[test]
    fn worked_example_minimum() {
        let (g, spec, w) = worked_example();
        let sol = min_quota_inventory(&g, &spec, &w).unwrap();
        assert_eq!(sol.weight, int_weight(16));
        assert!(check_inventory(&g, &spec, &sol.inventory).unwrap().is_empty());
        let total = sol
            .contractions
            .iter()
            .fold(sol.final_level_weight.clone(), |acc, c| acc + &c.internal_weight);
        assert_eq!(total, sol.weight);
        let f = inventory_to_forest(&g, &spec, &sol.inventory).unwrap();
        assert_eq!(validate_forest(&f, &g, &spec, Mode::Exact), Ok(()));
        assert_eq!(f.weight(&w), int_weight(16));
        assert_eq!(f.edge_inventory(14), sol.inventory.x);
    }

    #[test]
    fn local_constraints() {
        let g = MultiGraph::new(2, [(0, 1), (1, 1)]).unwrap();
        let spec = QuotaSpec::new(&g, vec![1, 2], vec![1, 0]).unwrap();
        let bad = Inventory::new(vec![2, 0]);
        assert_eq!(
            check_inventory(&g, &spec, &bad).unwrap(),
            vec![InventoryViolation::Edge { edge: 0, x: 2, cap: 1 }]
        );
        assert_eq!(
            check_inventory(&g, &spec, &Inventory::new(vec![0, 1])).unwrap(),
            vec![InventoryViolation::Node { vertex: 1, arrivals: 1, required: 2 }]
        );
        assert!(violating_subset(&g, &spec, &Inventory::new(vec![0, 0])).is_err());
        assert!(check_inventory(&g, &spec, &Inventory::new(vec![1, 1])).unwrap().is_empty());
        assert!(check_inventory(&g, &spec, &Inventory::new(vec![1])).is_err());
    }

    #[test]
    fn loop_saturating_its_quota() {
        let g = MultiGraph::rose(1);
        let spec = QuotaSpec::new(&g, vec![1], vec![0]).unwrap();
        let inv = Inventory::new(vec![1]);
        assert_eq!(violating_subset(&g, &spec, &inv).unwrap(), Some(vec![0]));
    }

    #[test]
    fn all_roots() {
        let g = MultiGraph::complete(3);
        let spec = QuotaSpec::new(&g, vec![1, 2, 1], vec![1, 2, 1]).unwrap();
        let inv = Inventory::new(vec![0; 6]);
        assert!(check_inventory(&g, &spec, &inv).unwrap().is_empty());
        assert_eq!(violating_subset(&g, &spec, &inv).unwrap(), None);
        let f = inventory_to_forest(&g, &spec, &inv).unwrap();
        assert_eq!((f.node_count(), f.edge_count()), (4, 0));
    }

    #[test]
    fn single_loop_vertex() {
        let g = MultiGraph::rose(1);
        let spec = QuotaSpec::new(&g, vec![3], vec![1]).unwrap();
        let w = WeightMap::from_integers(&g, &[5]).unwrap();
        let sol = min_quota_inventory(&g, &spec, &w).unwrap();
        assert_eq!(sol.inventory.x, vec![2]);
        assert_eq!(sol.weight, int_weight(10));
    }

    #[test]
    fn negative_weights_and_zero_quota_vertices() {
        // Vertex 3 has zero quota and must be ignored.
        let g = MultiGraph::new(4, [(0, 1), (1, 2), (2, 1), (0, 2), (3, 1), (2, 3)]).unwrap();
        let w = WeightMap::from_integers(&g, &[4, -2, -3, 1, -9, 0]).unwrap();
        let spec = QuotaSpec::new(&g, vec![1, 1, 1, 0], vec![1, 0, 0, 0]).unwrap();
        let sol = min_quota_inventory(&g, &spec, &w).unwrap();
        // Arborescences: {0->1, 1->2} = 2, {0->2, 2->1} = -2, {0->1, 0->2} = 5.
        assert_eq!(sol.weight, int_weight(-2));
        assert_eq!(sol.inventory.x, vec![0, 0, 1, 1, 0, 0]);
    }

    #[test]
    fn unachievable_is_an_error() {
        let g = MultiGraph::new(2, [(0, 1)]).unwrap();
        let spec = QuotaSpec::new(&g, vec![1, 2], vec![1, 0]).unwrap();
        let w = WeightMap::from_integers(&g, &[1]).unwrap();
        assert_eq!(min_quota_inventory(&g, &spec, &w).unwrap_err(), Error::Unachievable("exact"));
    }

    #[test]
    fn euler_basics() {
        assert_eq!(euler_circuit(3, &[(0, 1), (1, 2), (2, 0)]), Some(vec![0, 1, 2]));
        assert_eq!(euler_circuit(3, &[(0, 1), (1, 2), (2, 0), (0, 2)]), None);
        assert_eq!(euler_circuit(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]), None);
        assert_eq!(euler_circuit(2, &[]), Some(vec![]));
        assert_eq!(euler_circuit(1, &[(0, 0), (0, 0)]), Some(vec![0, 1]));
    }
}
