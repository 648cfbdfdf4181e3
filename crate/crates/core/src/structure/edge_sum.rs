use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};

/// Inputs of an edge sum: two graphs on disjoint vertex sets, a vertex of
/// each with equal degree, and a bijection between their incident edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSumSpec {
    pub left: MultiGraph,
    pub left_vertex: VertexId,
    pub right: MultiGraph,
    pub right_vertex: VertexId,
    /// Pairs `(e1, e2)` with `e1` at `left_vertex` and `e2` at `right_vertex`.
    pub matching: Vec<(EdgeId, EdgeId)>,
}

impl EdgeSumSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidEdgeSum(m));
        for v in self.left.vertices() {
            if self.right.contains_vertex(v) {
                return bad(format!("vertex {v} appears on both sides"));
            }
        }
        let (a, b) = (
            self.left.degree(self.left_vertex)?,
            self.right.degree(self.right_vertex)?,
        );
        if a != b {
            return bad(format!("degrees differ: {a} and {b}"));
        }
        let at_left: BTreeSet<_> = self.left.incident(self.left_vertex)?.iter().copied().collect();
        let at_right: BTreeSet<_> = self.right.incident(self.right_vertex)?.iter().copied().collect();
        let firsts: BTreeSet<_> = self.matching.iter().map(|p| p.0).collect();
        let seconds: BTreeSet<_> = self.matching.iter().map(|p| p.1).collect();
        if self.matching.len() != a || firsts != at_left || seconds != at_right {
            return bad("matching is not a bijection between the incident edges".into());
        }
        Ok(())
    }
}

/// Identifies the two summed vertices and lifts every matched pair.
///
/// Each lifted edge keeps the id of its left edge and records the pair as
/// provenance. Left edges keep their ids; right edges keep theirs unless the
/// id is already taken, in which case they get a fresh one.
pub fn edge_sum(spec: &EdgeSumSpec) -> Result<MultiGraph> {
    spec.validate()?;
    let (lv, rv) = (spec.left_vertex, spec.right_vertex);
    let mut out = MultiGraph::new();
    for v in spec.left.vertices().chain(spec.right.vertices()) {
        if v != lv && v != rv {
            out.add_vertex(v);
        }
    }
    let matched_right: BTreeSet<_> = spec.matching.iter().map(|p| p.1).collect();
    for (id, e) in spec.left.edges() {
        if !e.touches(lv) {
            out.insert_edge(id, e.lo, e.hi)?;
            if let Some(p) = spec.left.provenance(id) {
                out.set_provenance(id, p);
            }
        }
    }
    for &(e1, e2) in &spec.matching {
        let a = spec.left.endpoints(e1)?.other(lv);
        let b = spec.right.endpoints(e2)?.other(rv);
        out.insert_edge(e1, a, b)?;
        out.set_provenance(e1, (e1, e2));
    }
    let mut deferred = Vec::new();
    for (id, e) in spec.right.edges() {
        if matched_right.contains(&id) {
            continue;
        }
        if out.contains_edge(id) || spec.left.contains_edge(id) {
            deferred.push(e);
        } else {
            out.insert_edge(id, e.lo, e.hi)?;
            if let Some(p) = spec.right.provenance(id) {
                out.set_provenance(id, p);
            }
        }
    }
    for e in deferred {
        out.add_edge(e.lo, e.hi)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::families::*;
    use crate::multigraph::is_isomorphic_small;

    fn shifted(g: &MultiGraph, by: u32) -> MultiGraph {
        let mut out = MultiGraph::new();
        for v in g.vertices() {
            out.add_vertex(VertexId(v.0 + by));
        }
        for (id, e) in g.edges() {
            out.insert_edge(EdgeId(id.0 + 100), VertexId(e.lo.0 + by), VertexId(e.hi.0 + by))
                .unwrap();
        }
        out
    }

    fn pairs(g: &MultiGraph, v: u32, h: &MultiGraph, w: u32) -> Vec<(EdgeId, EdgeId)> {
        let a = g.incident(VertexId(v)).unwrap();
        let b = h.incident(VertexId(w)).unwrap();
        a.iter().copied().zip(b.iter().copied()).collect()
    }

    #[test]
    fn theta_sum() {
        let left = theta(2);
        let right = shifted(&theta(2), 2);
        let spec = EdgeSumSpec {
            matching: pairs(&left, 1, &right, 2),
            left,
            left_vertex: VertexId(1),
            right,
            right_vertex: VertexId(2),
        };
        let g = edge_sum(&spec).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.multiplicity(VertexId(0), VertexId(3)).unwrap(), 2);
        assert_eq!(g.provenance(EdgeId(0)), Some((EdgeId(0), EdgeId(100))));
    }

    #[test]
    fn single_edge_sum() {
        let left = path(2);
        let right = shifted(&path(2), 2);
        let spec = EdgeSumSpec {
            matching: pairs(&left, 1, &right, 2),
            left,
            left_vertex: VertexId(1),
            right,
            right_vertex: VertexId(2),
        };
        let g = edge_sum(&spec).unwrap();
        assert!(is_isomorphic_small(&g, &path(2)).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        let left = path(3);
        let right = shifted(&star(3), 3);
        let spec = EdgeSumSpec {
            matching: pairs(&left, 1, &right, 3),
            left: left.clone(),
            left_vertex: VertexId(1),
            right: right.clone(),
            right_vertex: VertexId(3),
        };
        assert!(matches!(edge_sum(&spec), Err(Error::InvalidEdgeSum(_))));

        let right = shifted(&path(3), 3);
        let mut m = pairs(&left, 1, &right, 4);
        m[1].1 = m[0].1;
        let spec = EdgeSumSpec {
            matching: m,
            left: left.clone(),
            left_vertex: VertexId(1),
            right: right.clone(),
            right_vertex: VertexId(4),
        };
        assert!(matches!(edge_sum(&spec), Err(Error::InvalidEdgeSum(_))));

        let spec = EdgeSumSpec {
            matching: pairs(&left, 1, &left, 1),
            left: left.clone(),
            left_vertex: VertexId(1),
            right: left,
            right_vertex: VertexId(1),
        };
        assert!(edge_sum(&spec).is_err());
    }

    #[test]
    fn colliding_right_ids_are_renamed() {
        let left = path(3);
        let mut right = MultiGraph::with_vertices(0);
        for v in 3..6 {
            right.add_vertex(VertexId(v));
        }
        // Right edge 0 (3-4) is unmatched and collides with left edge 0.
        right.insert_edge(EdgeId(0), VertexId(3), VertexId(4)).unwrap();
        right.insert_edge(EdgeId(7), VertexId(4), VertexId(5)).unwrap();
        right.insert_edge(EdgeId(8), VertexId(5), VertexId(3)).unwrap();
        let spec = EdgeSumSpec {
            matching: vec![(EdgeId(0), EdgeId(8)), (EdgeId(1), EdgeId(7))],
            left,
            left_vertex: VertexId(1),
            right,
            right_vertex: VertexId(5),
        };
        let g = edge_sum(&spec).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.vertex_count(), 4);
        let sum: usize = g.vertices().map(|v| g.degree(v).unwrap()).sum();
        assert_eq!(sum, 6);
    }
}
