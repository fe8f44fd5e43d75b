//! Achievability of `(G, q, s)`: the global connectivity condition and the
//! local enough-arrows inequality `s + qM >= q`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::Result;
use crate::graph::{in_arrows, Mode, MultiGraph, QuotaSpec, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub connected: bool,
    /// Positive-quota vertices not reachable from any usable start, ascending.
    pub unreachable: Vec<VertexId>,
}

/// Every vertex with `q(v) > 0` must be reachable from a start `u` with
/// `s(u) > 0`. Vertices with zero quota can never be visited, so they are
/// removed first: they neither start nor relay paths.
pub fn is_connected_support(g: &MultiGraph, spec: &QuotaSpec) -> Result<Connectivity> {
    spec.validate(g)?;
    let n = g.vertex_count();
    let mut reached = vec![false; n];
    let mut queue: VecDeque<VertexId> = (0..n)
        .filter(|&v| spec.s[v] > 0 && spec.q[v] > 0)
        .collect();
    for &v in &queue {
        reached[v] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &e in g.outstar(u) {
            let w = g.edge(e).dst;
            if spec.q[w] > 0 && !reached[w] {
                reached[w] = true;
                queue.push_back(w);
            }
        }
    }
    let unreachable: Vec<VertexId> = (0..n).filter(|&v| spec.q[v] > 0 && !reached[v]).collect();
    Ok(Connectivity {
        connected: unreachable.is_empty(),
        unreachable,
    })
}

/// Vertices where `s(w) + In(w) < q(w)`, ascending.
pub fn enough_arrows_violations(g: &MultiGraph, spec: &QuotaSpec) -> Result<Vec<VertexId>> {
    spec.validate(g)?;
    let incoming = in_arrows(g, &spec.q)?;
    Ok((0..g.vertex_count())
        .filter(|&w| spec.s[w] + incoming[w] < spec.q[w])
        .collect())
}

pub fn achievable(g: &MultiGraph, spec: &QuotaSpec, mode: Mode) -> Result<bool> {
    let at_most = is_connected_support(g, spec)?.connected
        && enough_arrows_violations(g, spec)?.is_empty();
    Ok(match mode {
        Mode::AtMost => at_most,
        Mode::Exact => at_most && spec.quota_dominates_portfolio(),
    })
}

/// Everything `check` reports about a triple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub connected: bool,
    pub unreachable: Vec<VertexId>,
    pub enough_arrows: bool,
    pub enough_arrows_violations: Vec<VertexId>,
    /// `s(w) + In(w)` per vertex.
    pub arrivals: Vec<usize>,
    /// Vertices where `q(v) < s(v)`.
    pub portfolio_excess: Vec<VertexId>,
    pub achievable_exact: bool,
    pub achievable_at_most: bool,
}

pub fn feasibility_report(g: &MultiGraph, spec: &QuotaSpec) -> Result<FeasibilityReport> {
    let conn = is_connected_support(g, spec)?;
    let violations = enough_arrows_violations(g, spec)?;
    let arrivals: Vec<usize> = in_arrows(g, &spec.q)?
        .iter()
        .zip(&spec.s)
        .map(|(i, s)| i + s)
        .collect();
    let portfolio_excess: Vec<VertexId> = (0..g.vertex_count())
        .filter(|&v| spec.q[v] < spec.s[v])
        .collect();
    let at_most = conn.connected && violations.is_empty();
    Ok(FeasibilityReport {
        connected: conn.connected,
        unreachable: conn.unreachable,
        enough_arrows: violations.is_empty(),
        enough_arrows_violations: violations,
        arrivals,
        achievable_exact: at_most && portfolio_excess.is_empty(),
        portfolio_excess,
        achievable_at_most: at_most,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fibonacci() -> MultiGraph {
        MultiGraph::from_adjacency(&[vec![1, 1, 0], vec![1, 0, 1], vec![0, 0, 2]]).unwrap()
    }

    fn spec(g: &MultiGraph, q: &[usize], s: &[usize]) -> QuotaSpec {
        QuotaSpec::new(g, q.to_vec(), s.to_vec()).unwrap()
    }

    #[test]
    fn connectivity_examples() {
        let g = fibonacci();
        assert!(is_connected_support(&g, &spec(&g, &[3, 2, 3], &[1, 0, 0])).unwrap().connected);

        let isolated = MultiGraph::new(2, []).unwrap();
        let c = is_connected_support(&isolated, &spec(&isolated, &[1, 1], &[1, 0])).unwrap();
        assert!(!c.connected);
        assert_eq!(c.unreachable, vec![1]);

        assert!(is_connected_support(&g, &spec(&g, &[0, 0, 0], &[0, 0, 0])).unwrap().connected);
    }

    #[test]
    fn zero_quota_vertices_do_not_relay() {
        // 0 -> 1 -> 2 with q(1) = 0: vertex 2 is cut off.
        let g = MultiGraph::new(3, [(0, 1), (1, 2), (2, 2)]).unwrap();
        let c = is_connected_support(&g, &spec(&g, &[1, 0, 2], &[1, 0, 0])).unwrap();
        assert_eq!(c.unreachable, vec![2]);
        // A start with zero quota cannot be used.
        let g = MultiGraph::new(2, [(0, 1), (1, 1)]).unwrap();
        assert!(!achievable(&g, &spec(&g, &[0, 2], &[1, 0]), Mode::AtMost).unwrap());
    }

    #[test]
    fn enough_arrows_examples() {
        let g = fibonacci();
        assert!(enough_arrows_violations(&g, &spec(&g, &[3, 2, 3], &[1, 0, 0])).unwrap().is_empty());
        assert_eq!(
            enough_arrows_violations(&g, &spec(&g, &[1, 2, 1], &[1, 0, 0])).unwrap(),
            vec![1]
        );
        let single = MultiGraph::new(1, []).unwrap();
        assert!(enough_arrows_violations(&single, &spec(&single, &[1], &[1])).unwrap().is_empty());
    }

    #[test]
    fn achievable_examples() {
        let g = fibonacci();
        assert!(achievable(&g, &spec(&g, &[3, 2, 3], &[1, 0, 0]), Mode::Exact).unwrap());
        let zero = spec(&g, &[0, 0, 0], &[1, 0, 0]);
        assert!(!achievable(&g, &zero, Mode::Exact).unwrap());
        assert!(achievable(&g, &zero, Mode::AtMost).unwrap());
    }

    #[test]
    fn fibonacci_sizes_are_feasible_iff_x_ge_y() {
        let g = fibonacci();
        for x in 1..=3 {
            for y in 1..=3 {
                for z in 1..=3 {
                    let ok = achievable(&g, &spec(&g, &[x, y, z], &[1, 0, 0]), Mode::Exact).unwrap();
                    assert_eq!(ok, x >= y, "({x},{y},{z})");
                }
            }
        }
    }

    #[test]
    fn report_lists_everything() {
        let g = fibonacci();
        let r = feasibility_report(&g, &spec(&g, &[1, 2, 1], &[1, 0, 0])).unwrap();
        assert_eq!(r.arrivals, vec![4, 1, 4]);
        assert_eq!(r.enough_arrows_violations, vec![1]);
        assert!(r.connected && !r.achievable_at_most && !r.achievable_exact);
    }

    #[test]
    fn scaling_a_positive_portfolio_keeps_at_most_achievability() {
        let g = MultiGraph::new(3, [(0, 1), (1, 2), (2, 0), (1, 1)]).unwrap();
        for q in [[1, 2, 1], [2, 3, 1], [1, 1, 1]] {
            let base = spec(&g, &q, &[1, 0, 0]);
            if achievable(&g, &base, Mode::AtMost).unwrap() {
                for k in 2..5 {
                    assert!(achievable(&g, &spec(&g, &q, &[k, 0, 0]), Mode::AtMost).unwrap());
                }
            }
        }
    }
}
