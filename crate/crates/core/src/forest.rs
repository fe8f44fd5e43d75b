//! Explicit immersed forests: the output of quota search, the sampler, the
//! enumeration oracle and inventory reconstruction.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Mode, MultiGraph, QuotaSpec, VertexId, Weight, WeightMap};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ForestNode {
    pub id: NodeId,
    /// Vertex of the host graph this node maps to.
    pub image: VertexId,
    pub parent: Option<NodeId>,
    /// Host edge realising the link to `parent`.
    pub parent_edge: Option<EdgeId>,
}

/// A forest of rooted trees together with its immersion into a host graph.
///
/// `root_slots[v]` has one entry per start of `v` in the portfolio; a slot
/// holds the root node placed there, or `None` when an at-most forest left the
/// start unused. Slots are ordered: exchanging the trees of two slots gives a
/// different forest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImmersedForest {
    pub nodes: Vec<ForestNode>,
    pub root_slots: Vec<Vec<Option<NodeId>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForestViolation {
    NodeIdMismatch { node: NodeId },
    UnknownImage { node: NodeId },
    SlotShape { vertex: VertexId, expected: usize, actual: usize },
    EmptySlot { vertex: VertexId, slot: usize },
    BadRoot { vertex: VertexId, slot: usize },
    OrphanRoot { node: NodeId },
    ParentMismatch { node: NodeId },
    BadParentEdge { node: NodeId },
    Cusp { node: NodeId, edge: EdgeId },
    Cycle { node: NodeId },
    QuotaExceeded { vertex: VertexId, expected: usize, actual: usize },
    QuotaUnmet { vertex: VertexId, expected: usize, actual: usize },
}

impl fmt::Display for ForestViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ForestViolation::*;
        match self {
            NodeIdMismatch { node } => write!(f, "node record {node} carries a different id"),
            UnknownImage { node } => write!(f, "node {node} maps outside the graph"),
            SlotShape { vertex, expected, actual } => {
                write!(f, "vertex {vertex} has {actual} root slots, portfolio allows {expected}")
            }
            EmptySlot { vertex, slot } => write!(f, "root slot {slot} of vertex {vertex} is unused in exact mode"),
            BadRoot { vertex, slot } => write!(f, "root slot {slot} of vertex {vertex} does not hold a root over {vertex}"),
            OrphanRoot { node } => write!(f, "root node {node} is not registered in any slot"),
            ParentMismatch { node } => write!(f, "node {node} has a parent without a parent edge or vice versa"),
            BadParentEdge { node } => write!(f, "parent edge of node {node} does not join the parent's image to its image"),
            Cusp { node, edge } => write!(f, "cusp: node {node} has two children along edge {edge}"),
            Cycle { node } => write!(f, "node {node} lies on a parent cycle"),
            QuotaExceeded { vertex, expected, actual } => {
                write!(f, "quota exceeded at vertex {vertex}: {actual} > {expected}")
            }
            QuotaUnmet { vertex, expected, actual } => {
                write!(f, "quota unmet at vertex {vertex}: {actual} < {expected}")
            }
        }
    }
}

impl ForestViolation {
    /// One-word tag for the violated invariant.
    pub fn kind(&self) -> &'static str {
        use ForestViolation::*;
        match self {
            Cusp { .. } => "cusp",
            QuotaExceeded { .. } => "quota exceeded",
            QuotaUnmet { .. } => "quota unmet",
            Cycle { .. } => "cycle",
            BadParentEdge { .. } | ParentMismatch { .. } => "parent edge",
            _ => "roots",
        }
    }
}

impl ImmersedForest {
    pub fn empty(vertex_count: usize) -> Self {
        ImmersedForest {
            nodes: Vec::new(),
            root_slots: vec![Vec::new(); vertex_count],
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.parent.is_some()).count()
    }

    pub fn root_count(&self) -> usize {
        self.root_slots.iter().flatten().flatten().count()
    }

    pub fn roots(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.root_slots.iter().flatten().flatten().copied()
    }

    pub fn push_node(
        &mut self,
        image: VertexId,
        parent: Option<NodeId>,
        parent_edge: Option<EdgeId>,
    ) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(ForestNode {
            id,
            image,
            parent,
            parent_edge,
        });
        id
    }

    /// Number of nodes over each vertex.
    pub fn preimage_counts(&self, vertex_count: usize) -> Vec<usize> {
        let mut counts = vec![0; vertex_count];
        for n in &self.nodes {
            counts[n.image] += 1;
        }
        counts
    }

    /// Number of tree edges over each host edge.
    pub fn edge_inventory(&self, edge_count: usize) -> Vec<usize> {
        let mut x = vec![0; edge_count];
        for e in self.nodes.iter().filter_map(|n| n.parent_edge) {
            x[e] += 1;
        }
        x
    }

    pub fn weight(&self, w: &WeightMap) -> Weight {
        self.nodes
            .iter()
            .filter_map(|n| n.parent_edge)
            .fold(Weight::zero(), |acc, e| acc + w.get(e))
    }

    /// Children of every node, sorted by parent edge id.
    pub fn children(&self) -> Vec<Vec<NodeId>> {
        let mut children = vec![Vec::new(); self.nodes.len()];
        for n in &self.nodes {
            if let Some(p) = n.parent {
                children[p].push(n.id);
            }
        }
        for list in &mut children {
            list.sort_by_key(|&c| self.nodes[c].parent_edge);
        }
        children
    }

    /// Host edges from the root down to `node`.
    pub fn path_edges(&self, node: NodeId) -> Vec<EdgeId> {
        let mut edges = Vec::new();
        let mut cur = node;
        while let Some(p) = self.nodes[cur].parent {
            edges.push(self.nodes[cur].parent_edge.expect("linked node has an edge"));
            cur = p;
        }
        edges.reverse();
        edges
    }

    pub fn path_weight(&self, node: NodeId, w: &WeightMap) -> Weight {
        self.path_edges(node)
            .into_iter()
            .fold(Weight::zero(), |acc, e| acc + w.get(e))
    }

    /// Renumbers nodes in preorder: trees in slot order, children by parent
    /// edge id. Two forests are equal iff their canonical forms are equal.
    /// Nodes unreachable from any slot are appended in their old order.
    pub fn canonical(&self) -> ImmersedForest {
        let children = self.children();
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut visited = vec![false; self.nodes.len()];
        for root in self.roots() {
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                if std::mem::replace(&mut visited[u], true) {
                    continue;
                }
                order.push(u);
                stack.extend(children[u].iter().rev());
            }
        }
        order.extend((0..self.nodes.len()).filter(|&u| !visited[u]));
        let mut new_id = vec![0; self.nodes.len()];
        for (i, &old) in order.iter().enumerate() {
            new_id[old] = i;
        }
        let nodes = order
            .iter()
            .enumerate()
            .map(|(i, &old)| {
                let n = &self.nodes[old];
                ForestNode {
                    id: i,
                    image: n.image,
                    parent: n.parent.map(|p| new_id[p]),
                    parent_edge: n.parent_edge,
                }
            })
            .collect();
        let root_slots = self
            .root_slots
            .iter()
            .map(|slots| slots.iter().map(|s| s.map(|r| new_id[r])).collect())
            .collect();
        ImmersedForest { nodes, root_slots }
    }

    /// Compact single-line JSON of the canonical form.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.canonical()).expect("forest serializes")
    }
}

/// Checks every structural invariant of an immersed forest plus quota
/// attainment and the portfolio condition for `mode`. Returns the first
/// violation found.
pub fn validate_forest(
    f: &ImmersedForest,
    g: &MultiGraph,
    spec: &QuotaSpec,
    mode: Mode,
) -> Result<(), ForestViolation> {
    let n = g.vertex_count();
    let nodes = &f.nodes;
    for (i, node) in nodes.iter().enumerate() {
        if node.id != i {
            return Err(ForestViolation::NodeIdMismatch { node: i });
        }
        if node.image >= n {
            return Err(ForestViolation::UnknownImage { node: i });
        }
    }

    if f.root_slots.len() != n {
        return Err(ForestViolation::SlotShape {
            vertex: n.min(f.root_slots.len()),
            expected: 0,
            actual: f.root_slots.len(),
        });
    }
    let mut in_slot = vec![false; nodes.len()];
    for (v, slots) in f.root_slots.iter().enumerate() {
        if slots.len() != spec.s[v] {
            return Err(ForestViolation::SlotShape {
                vertex: v,
                expected: spec.s[v],
                actual: slots.len(),
            });
        }
        for (k, slot) in slots.iter().enumerate() {
            match *slot {
                None if mode == Mode::Exact => return Err(ForestViolation::EmptySlot { vertex: v, slot: k }),
                None => {}
                Some(r) => {
                    if r >= nodes.len()
                        || nodes[r].image != v
                        || nodes[r].parent.is_some()
                        || std::mem::replace(&mut in_slot[r], true)
                    {
                        return Err(ForestViolation::BadRoot { vertex: v, slot: k });
                    }
                }
            }
        }
    }

    let mut used_edges = std::collections::HashSet::new();
    for node in nodes {
        match (node.parent, node.parent_edge) {
            (None, None) => {
                if !in_slot[node.id] {
                    return Err(ForestViolation::OrphanRoot { node: node.id });
                }
            }
            (Some(p), Some(e)) => {
                if p >= nodes.len() || e >= g.edge_count() {
                    return Err(ForestViolation::BadParentEdge { node: node.id });
                }
                let edge = g.edge(e);
                if edge.src != nodes[p].image || edge.dst != node.image {
                    return Err(ForestViolation::BadParentEdge { node: node.id });
                }
                if !used_edges.insert((p, e)) {
                    return Err(ForestViolation::Cusp { node: p, edge: e });
                }
            }
            _ => return Err(ForestViolation::ParentMismatch { node: node.id }),
        }
    }

    // Every parent chain must end at a root within `len` steps.
    let mut depth_known = vec![false; nodes.len()];
    for start in 0..nodes.len() {
        let mut chain = Vec::new();
        let mut cur = start;
        loop {
            if depth_known[cur] {
                break;
            }
            chain.push(cur);
            if chain.len() > nodes.len() {
                return Err(ForestViolation::Cycle { node: start });
            }
            match nodes[cur].parent {
                Some(p) => cur = p,
                None => break,
            }
        }
        for c in chain {
            depth_known[c] = true;
        }
    }

    let counts = f.preimage_counts(n);
    for v in 0..n {
        if counts[v] > spec.q[v] {
            return Err(ForestViolation::QuotaExceeded {
                vertex: v,
                expected: spec.q[v],
                actual: counts[v],
            });
        }
        if counts[v] < spec.q[v] {
            return Err(ForestViolation::QuotaUnmet {
                vertex: v,
                expected: spec.q[v],
                actual: counts[v],
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> MultiGraph {
        // A=0, B=1, C=2 with both directions on every side.
        MultiGraph::complete(3)
    }

    fn edge(g: &MultiGraph, src: usize, dst: usize) -> EdgeId {
        (0..g.edge_count())
            .find(|&e| g.edge(e) == crate::graph::Edge { src, dst })
            .unwrap()
    }

    /// The valid tree: A1->B1->C1->A2, A2->C2, A2->B2.
    fn valid_tree(g: &MultiGraph) -> ImmersedForest {
        let mut f = ImmersedForest::empty(3);
        let a1 = f.push_node(0, None, None);
        let b1 = f.push_node(1, Some(a1), Some(edge(g, 0, 1)));
        let c1 = f.push_node(2, Some(b1), Some(edge(g, 1, 2)));
        let a2 = f.push_node(0, Some(c1), Some(edge(g, 2, 0)));
        f.push_node(2, Some(a2), Some(edge(g, 0, 2)));
        f.push_node(1, Some(a2), Some(edge(g, 0, 1)));
        f.root_slots[0] = vec![Some(a1)];
        f
    }

    fn spec(g: &MultiGraph) -> QuotaSpec {
        QuotaSpec::new(g, vec![2, 2, 2], vec![1, 0, 0]).unwrap()
    }

    #[test]
    fn valid_quota_tree_passes() {
        let g = triangle();
        assert_eq!(validate_forest(&valid_tree(&g), &g, &spec(&g), Mode::Exact), Ok(()));
    }

    #[test]
    fn cusp_is_rejected() {
        // A1->B1 and A1->B2 share the image edge A->B.
        let g = triangle();
        let mut f = valid_tree(&g);
        f.nodes[5].parent = Some(0);
        let err = validate_forest(&f, &g, &spec(&g), Mode::Exact).unwrap_err();
        assert_eq!(err.kind(), "cusp");
    }

    #[test]
    fn extra_visit_is_rejected() {
        let g = triangle();
        let mut f = valid_tree(&g);
        let e = edge(&g, 1, 0);
        f.push_node(0, Some(5), Some(e));
        let err = validate_forest(&f, &g, &spec(&g), Mode::Exact).unwrap_err();
        assert_eq!(err, ForestViolation::QuotaExceeded { vertex: 0, expected: 2, actual: 3 });
        assert_eq!(err.kind(), "quota exceeded");
    }

    #[test]
    fn wrong_parent_edge_and_cycles_are_rejected() {
        let g = triangle();
        let mut f = valid_tree(&g);
        f.nodes[1].parent_edge = Some(edge(&g, 2, 1));
        assert_eq!(
            validate_forest(&f, &g, &spec(&g), Mode::Exact).unwrap_err().kind(),
            "parent edge"
        );

        let mut f = valid_tree(&g);
        // Make B1 the child of A2 and A2 a descendant of B1: a cycle.
        f.nodes[1].parent = Some(3);
        f.root_slots[0] = vec![Some(0)];
        let err = validate_forest(&f, &g, &spec(&g), Mode::Exact).unwrap_err();
        assert!(matches!(err, ForestViolation::Cycle { .. } | ForestViolation::Cusp { .. }));
    }

    #[test]
    fn exact_mode_needs_every_slot() {
        let g = triangle();
        let mut f = valid_tree(&g);
        f.root_slots[0] = vec![None];
        assert!(matches!(
            validate_forest(&f, &g, &spec(&g), Mode::Exact),
            Err(ForestViolation::OrphanRoot { .. } | ForestViolation::EmptySlot { .. })
        ));
    }

    #[test]
    fn canonical_form_ignores_node_numbering() {
        let g = triangle();
        let f = valid_tree(&g);
        // Reverse the node order and remap.
        let n = f.nodes.len();
        let remap = |i: usize| n - 1 - i;
        let mut nodes: Vec<ForestNode> = f
            .nodes
            .iter()
            .map(|x| ForestNode {
                id: remap(x.id),
                image: x.image,
                parent: x.parent.map(remap),
                parent_edge: x.parent_edge,
            })
            .collect();
        nodes.sort_by_key(|x| x.id);
        let shuffled = ImmersedForest {
            nodes,
            root_slots: vec![vec![Some(remap(0))], vec![], vec![]],
        };
        assert_eq!(validate_forest(&shuffled, &g, &spec(&g), Mode::Exact), Ok(()));
        assert_eq!(shuffled.canonical(), f.canonical());
        assert_eq!(shuffled.to_json_line(), f.to_json_line());
    }

    #[test]
    fn inventory_and_paths() {
        let g = triangle();
        let f = valid_tree(&g);
        let x = f.edge_inventory(g.edge_count());
        assert_eq!(x.iter().sum::<usize>(), 5);
        assert_eq!(x[edge(&g, 0, 1)], 2);
        assert_eq!(f.path_edges(4), vec![edge(&g, 0, 1), edge(&g, 1, 2), edge(&g, 2, 0), edge(&g, 0, 2)]);
        let w = WeightMap::from_integers(&g, &[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(f.path_weight(0, &w), Weight::zero());
    }
}
