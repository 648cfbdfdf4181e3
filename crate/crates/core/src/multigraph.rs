//! Loopless undirected multigraphs with stable edge identities.
//!
//! Parallel edges are first-class: every edge instance carries its own
//! [`EdgeId`], and operations that rewrite the graph (identification, lifting,
//! edge sums) keep the ids of the edges they do not consume.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for building vertex sets in tests and callers.
pub fn vset<I: IntoIterator<Item = u32>>(ids: I) -> BTreeSet<VertexId> {
    ids.into_iter().map(VertexId).collect()
}

/// Endpoints of an edge, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub lo: VertexId,
    pub hi: VertexId,
}

impl Edge {
    fn new(u: VertexId, v: VertexId) -> Self {
        if u < v {
            Edge { lo: u, hi: v }
        } else {
            Edge { lo: v, hi: u }
        }
    }

    pub fn touches(&self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`. `v` must be an endpoint.
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, Edge>,
    incidence: BTreeMap<VertexId, Vec<EdgeId>>,
    provenance: BTreeMap<EdgeId, (EdgeId, EdgeId)>,
    next_edge: u32,
}

/// Result bookkeeping of [`MultiGraph::identify`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VertexMergeMap {
    pub image: BTreeMap<VertexId, VertexId>,
    pub dropped: Vec<EdgeId>,
}

impl VertexMergeMap {
    pub fn map(&self, v: VertexId) -> Option<VertexId> {
        self.image.get(&v).copied()
    }
}

impl Default for MultiGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl MultiGraph {
    pub fn new() -> Self {
        MultiGraph {
            vertices: BTreeSet::new(),
            edges: BTreeMap::new(),
            incidence: BTreeMap::new(),
            provenance: BTreeMap::new(),
            next_edge: 0,
        }
    }

    /// Edgeless graph on vertices `0..n`.
    pub fn with_vertices(n: u32) -> Self {
        let mut g = Self::new();
        for v in 0..n {
            g.add_vertex(VertexId(v));
        }
        g
    }

    /// Graph on `0..n` with the given edge list; ids follow list order.
    pub fn from_edges(n: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        let mut g = Self::with_vertices(n);
        for &(u, v) in pairs {
            g.add_edge(VertexId(u), VertexId(v))?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        self.incidence.entry(v).or_default();
        self.vertices.insert(v)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        let id = EdgeId(self.next_edge);
        self.insert_edge(id, u, v)?;
        Ok(id)
    }

    /// Inserts an edge under a caller-chosen id.
    pub fn insert_edge(&mut self, id: EdgeId, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        for w in [u, v] {
            if !self.vertices.contains(&w) {
                return Err(Error::UnknownVertex(w));
            }
        }
        if self.edges.contains_key(&id) {
            return Err(Error::InvalidParameter(format!("edge id {id} already in use")));
        }
        self.edges.insert(id, Edge::new(u, v));
        insert_sorted(self.incidence.get_mut(&u).unwrap(), id);
        insert_sorted(self.incidence.get_mut(&v).unwrap(), id);
        self.next_edge = self.next_edge.max(id.0 + 1);
        Ok(())
    }

    fn remove_edge(&mut self, id: EdgeId) -> Option<Edge> {
        let e = self.edges.remove(&id)?;
        for w in [e.lo, e.hi] {
            let inc = self.incidence.get_mut(&w).unwrap();
            inc.retain(|&x| x != id);
        }
        self.provenance.remove(&id);
        Some(e)
    }

    fn remove_vertex(&mut self, v: VertexId) {
        let inc = self.incidence.get(&v).cloned().unwrap_or_default();
        for e in inc {
            self.remove_edge(e);
        }
        self.incidence.remove(&v);
        self.vertices.remove(&v);
    }

    pub(crate) fn set_provenance(&mut self, id: EdgeId, from: (EdgeId, EdgeId)) {
        self.provenance.insert(id, from);
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Edge)> + '_ {
        self.edges.iter().map(|(&id, &e)| (id, e))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Result<Edge> {
        self.edges.get(&e).copied().ok_or(Error::UnknownEdge(e))
    }

    /// Lift provenance of `e`: the two edges it replaced, if it was created by a lift.
    pub fn provenance(&self, e: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.provenance.get(&e).copied()
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.vertices.iter().next_back().copied()
    }

    /// A label one above the largest vertex label.
    pub fn fresh_vertex(&self) -> VertexId {
        self.max_vertex().map_or(VertexId(0), |v| VertexId(v.0 + 1))
    }

    /// Incident edge ids of `v`, sorted.
    pub fn incident(&self, v: VertexId) -> Result<&[EdgeId]> {
        self.incidence
            .get(&v)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownVertex(v))
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.incident(v).map(<[EdgeId]>::len)
    }

    pub fn max_degree(&self) -> usize {
        self.incidence.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: VertexId) -> Result<BTreeSet<VertexId>> {
        Ok(self
            .incident(v)?
            .iter()
            .map(|e| self.edges[e].other(v))
            .collect())
    }

    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> Result<usize> {
        if u == v {
            return Err(Error::SameVertex(u));
        }
        self.degree(v)?;
        Ok(self
            .incident(u)?
            .iter()
            .filter(|e| self.edges[e].touches(v))
            .count())
    }

    fn check_vertices<'a, I: IntoIterator<Item = &'a VertexId>>(&self, vs: I) -> Result<()> {
        for &v in vs {
            if !self.contains_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        Ok(())
    }

    /// Replaces the vertices of `set` by the single vertex `label`.
    ///
    /// Edges with exactly one endpoint in `set` are redirected and keep their id;
    /// edges inside `set` would become loops and are dropped.
    pub fn identify(
        &self,
        set: &BTreeSet<VertexId>,
        label: VertexId,
    ) -> Result<(MultiGraph, VertexMergeMap)> {
        if set.is_empty() {
            return Err(Error::EmptyVertexSet);
        }
        self.check_vertices(set)?;
        if self.contains_vertex(label) && !set.contains(&label) {
            return Err(Error::LabelCollision(label));
        }
        let mut out = MultiGraph::new();
        let mut map = VertexMergeMap::default();
        for v in self.vertices() {
            let img = if set.contains(&v) { label } else { v };
            out.add_vertex(img);
            map.image.insert(v, img);
        }
        for (id, e) in self.edges() {
            let (a, b) = (map.image[&e.lo], map.image[&e.hi]);
            if a == b {
                map.dropped.push(id);
            } else {
                out.insert_edge(id, a, b)?;
                if let Some(p) = self.provenance(id) {
                    out.set_provenance(id, p);
                }
            }
        }
        out.next_edge = self.next_edge;
        Ok((out, map))
    }

    /// `G \ F`: same vertices, the edges of `removed` deleted.
    pub fn delete_edges(&self, removed: &BTreeSet<EdgeId>) -> Result<MultiGraph> {
        for &e in removed {
            if !self.contains_edge(e) {
                return Err(Error::UnknownEdge(e));
            }
        }
        let mut out = self.clone();
        for &e in removed {
            out.remove_edge(e);
        }
        Ok(out)
    }

    /// Induced subgraph on `keep`.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Result<MultiGraph> {
        self.check_vertices(keep)?;
        let mut out = self.clone();
        for v in self.vertices() {
            if !keep.contains(&v) {
                out.remove_vertex(v);
            }
        }
        Ok(out)
    }

    /// Lifts `e` and `f` into a fresh edge joining their two non-shared endpoints.
    /// Returns the new graph and the id of the created edge.
    pub fn lift(&self, e: EdgeId, f: EdgeId) -> Result<(MultiGraph, EdgeId)> {
        let ee = self.endpoints(e)?;
        let fe = self.endpoints(f)?;
        if e == f {
            return Err(Error::NotIncident(e, f));
        }
        let ends_e = [ee.lo, ee.hi];
        let ends_f = [fe.lo, fe.hi];
        let only_e: Vec<_> = ends_e.iter().filter(|v| !ends_f.contains(v)).collect();
        let only_f: Vec<_> = ends_f.iter().filter(|v| !ends_e.contains(v)).collect();
        match (only_e.len(), only_f.len()) {
            (0, 0) => Err(Error::ParallelLift(e, f)),
            (1, 1) => {
                let (a, b) = (*only_e[0], *only_f[0]);
                let mut out = self.clone();
                out.remove_edge(e);
                out.remove_edge(f);
                let id = out.add_edge(a, b)?;
                out.set_provenance(id, (e, f));
                Ok((out, id))
            }
            _ => Err(Error::NotIncident(e, f)),
        }
    }

    /// Relabels vertices to `0..n` preserving order; edge ids are renumbered
    /// in their current order. Returns the graph and the old-to-new map.
    pub fn relabel_dense(&self) -> (MultiGraph, BTreeMap<VertexId, VertexId>) {
        let map: BTreeMap<_, _> = self
            .vertices()
            .enumerate()
            .map(|(i, v)| (v, VertexId(i as u32)))
            .collect();
        let mut out = MultiGraph::with_vertices(self.vertex_count() as u32);
        for (_, e) in self.edges() {
            out.add_edge(map[&e.lo], map[&e.hi]).expect("relabel keeps edges valid");
        }
        (out, map)
    }

    /// Text form: `n m` header then one `u v` line per edge in id order.
    /// Vertices must be labelled `0..n`.
    pub fn to_graph_file(&self) -> Result<String> {
        let n = self.vertex_count();
        if let Some((_, v)) = self
            .vertices()
            .enumerate()
            .find(|&(i, v)| v.0 as usize != i)
        {
            return Err(Error::InvalidParameter(format!(
                "vertex labels must be 0..{n} for serialization (found {v})"
            )));
        }
        let mut out = format!("{} {}\n", n, self.edge_count());
        for (_, e) in self.edges() {
            out.push_str(&format!("{} {}\n", e.lo, e.hi));
        }
        Ok(out)
    }
}

fn insert_sorted(list: &mut Vec<EdgeId>, id: EdgeId) {
    let pos = list.partition_point(|&x| x < id);
    list.insert(pos, id);
}

/// Parses the `n m` / `u v` graph file format. `#` starts a comment line.
pub fn parse_graph(text: &str) -> Result<MultiGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing `n m` header".into(),
    })?;
    let (n, m) = parse_pair(hline, header)?;
    let mut g = MultiGraph::with_vertices(n);
    let mut count = 0;
    for (line, l) in lines {
        let (u, v) = parse_pair(line, l)?;
        for w in [u, v] {
            if w >= n {
                return Err(Error::Parse {
                    line,
                    message: format!("endpoint {w} is not a declared vertex (n = {n})"),
                });
            }
        }
        if u == v {
            return Err(Error::Parse {
                line,
                message: format!("self-loop at vertex {u}"),
            });
        }
        g.add_edge(VertexId(u), VertexId(v))?;
        count += 1;
    }
    if count != m {
        return Err(Error::Parse {
            line: hline,
            message: format!("header declares {m} edges but {count} were listed"),
        });
    }
    Ok(g)
}

fn parse_pair(line: usize, text: &str) -> Result<(u32, u32)> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<u32> {
        let tok = it.next().ok_or(Error::Parse {
            line,
            message: format!("expected two integers, got `{text}`"),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            message: format!("`{tok}` is not a non-negative integer"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            message: format!("trailing tokens in `{text}`"),
        });
    }
    Ok((a, b))
}

/// Named small graphs.
pub mod families {
    use super::*;

    /// Two vertices joined by `m` parallel edges.
    pub fn theta(m: u32) -> MultiGraph {
        let pairs = vec![(0, 1); m as usize];
        MultiGraph::from_edges(2, &pairs).unwrap()
    }

    pub fn path(n: u32) -> MultiGraph {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        MultiGraph::from_edges(n, &pairs).unwrap()
    }

    pub fn cycle(n: u32) -> MultiGraph {
        assert!(n >= 3, "cycles need at least three vertices");
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph::from_edges(n, &pairs).unwrap()
    }

    pub fn complete(n: u32) -> MultiGraph {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                pairs.push((u, v));
            }
        }
        MultiGraph::from_edges(n, &pairs).unwrap()
    }

    /// Center `0` with leaves `1..=leaves`.
    pub fn star(leaves: u32) -> MultiGraph {
        let pairs: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        MultiGraph::from_edges(leaves + 1, &pairs).unwrap()
    }
}

pub const ISOMORPHISM_VERTEX_LIMIT: usize = 12;

/// Multiplicity-preserving isomorphism test for graphs on at most 12 vertices.
pub fn is_isomorphic_small(g: &MultiGraph, h: &MultiGraph) -> Result<bool> {
    for x in [g, h] {
        if x.vertex_count() > ISOMORPHISM_VERTEX_LIMIT {
            return Err(Error::SizeBudget {
                what: "isomorphism test",
                size: x.vertex_count(),
                limit: ISOMORPHISM_VERTEX_LIMIT,
            });
        }
    }
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    let (gm, gd) = mult_matrix(g);
    let (hm, hd) = mult_matrix(h);
    let mut gs = gd.clone();
    let mut hs = hd.clone();
    gs.sort_unstable();
    hs.sort_unstable();
    if gs != hs {
        return Ok(false);
    }
    let n = gd.len();
    // Map high-degree vertices first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(gd[i]));
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend_iso(0, &order, &gm, &gd, &hm, &hd, &mut assign, &mut used))
}

fn mult_matrix(g: &MultiGraph) -> (Vec<Vec<usize>>, Vec<usize>) {
    let idx: BTreeMap<_, _> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let n = idx.len();
    let mut m = vec![vec![0; n]; n];
    let mut d = vec![0; n];
    for (_, e) in g.edges() {
        let (a, b) = (idx[&e.lo], idx[&e.hi]);
        m[a][b] += 1;
        m[b][a] += 1;
        d[a] += 1;
        d[b] += 1;
    }
    (m, d)
}

#[allow(clippy::too_many_arguments)]
fn extend_iso(
    depth: usize,
    order: &[usize],
    gm: &[Vec<usize>],
    gd: &[usize],
    hm: &[Vec<usize>],
    hd: &[usize],
    assign: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let u = order[depth];
    for c in 0..hd.len() {
        if used[c] || hd[c] != gd[u] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&w| gm[u][w] == hm[c][assign[w]]);
        if !consistent {
            continue;
        }
        assign[u] = c;
        used[c] = true;
        if extend_iso(depth + 1, order, gm, gd, hm, hd, assign, used) {
            return true;
        }
        used[c] = false;
        assign[u] = usize::MAX;
    }
    false
}

/// Index-based adjacency view used by the search and flow kernels.
#[derive(Debug, Clone)]
pub(crate) struct Dense {
    pub ids: Vec<VertexId>,
    pub index: BTreeMap<VertexId, usize>,
    pub edge_ids: Vec<EdgeId>,
    pub ends: Vec<(usize, usize)>,
    /// Per vertex: `(neighbor, edge index)` in edge-id order.
    pub adj: Vec<Vec<(usize, usize)>>,
}

impl Dense {
    pub fn new(g: &MultiGraph) -> Self {
        let ids: Vec<_> = g.vertices().collect();
        let index: BTreeMap<_, _> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edge_ids = Vec::with_capacity(g.edge_count());
        let mut ends = Vec::with_capacity(g.edge_count());
        let mut adj = vec![Vec::new(); ids.len()];
        for (i, (id, e)) in g.edges().enumerate() {
            let (a, b) = (index[&e.lo], index[&e.hi]);
            edge_ids.push(id);
            ends.push((a, b));
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        Dense {
            ids,
            index,
            edge_ids,
            ends,
            adj,
        }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn vertex(&self, v: VertexId) -> Result<usize> {
        self.index.get(&v).copied().ok_or(Error::UnknownVertex(v))
    }
}

#[cfg(test)]
mod tests {
    use super::families::*;
    use super::*;
    use proptest::prelude::*;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn parse_theta_and_single_vertex() {
        let g = parse_graph("# theta\n2 3\n0 1\n0 1\n0 1\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.multiplicity(v(0), v(1)).unwrap(), 3);
        assert_eq!(
            g.edge_ids().collect::<Vec<_>>(),
            vec![EdgeId(0), EdgeId(1), EdgeId(2)]
        );

        let single = parse_graph("1 0\n").unwrap();
        assert_eq!(single.vertex_count(), 1);
        assert_eq!(single.edge_count(), 0);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_graph("2 1\n0 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("2 1\n0 5\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("2 1\n0 x\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("2 2\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn degrees() {
        assert_eq!(theta(3).degree(v(0)).unwrap(), 3);
        assert_eq!(star(4).degree(v(0)).unwrap(), 4);
        assert_eq!(MultiGraph::with_vertices(1).degree(v(0)).unwrap(), 0);
        assert_eq!(theta(3).degree(v(7)), Err(Error::UnknownVertex(v(7))));
    }

    #[test]
    fn multiplicities() {
        assert_eq!(theta(3).multiplicity(v(0), v(1)).unwrap(), 3);
        assert_eq!(path(3).multiplicity(v(0), v(2)).unwrap(), 0);
        let c4 = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 1)]).unwrap();
        assert_eq!(c4.multiplicity(v(0), v(1)).unwrap(), 2);
        assert_eq!(c4.multiplicity(v(1), v(1)), Err(Error::SameVertex(v(1))));
    }

    #[test]
    fn identify_examples() {
        let tri = cycle(3);
        let (g, map) = tri.identify(&vset([1, 2]), v(9)).unwrap();
        assert_eq!(g.vertex_set(), &vset([0, 9]));
        assert_eq!(g.multiplicity(v(0), v(9)).unwrap(), 2);
        assert_eq!(map.dropped, vec![EdgeId(1)]);

        let (same, map) = tri.identify(&vset([1]), v(1)).unwrap();
        assert_eq!(same, tri);
        assert!(map.dropped.is_empty());

        let (z, map) = theta(3).identify(&vset([0, 1]), v(5)).unwrap();
        assert_eq!(z.vertex_count(), 1);
        assert_eq!(z.edge_count(), 0);
        assert_eq!(map.dropped.len(), 3);

        assert_eq!(tri.identify(&BTreeSet::new(), v(5)), Err(Error::EmptyVertexSet));
        assert_eq!(tri.identify(&vset([1, 2]), v(0)), Err(Error::LabelCollision(v(0))));
    }

    #[test]
    fn delete_examples() {
        let t = theta(3);
        let t2 = t.delete_edges(&[EdgeId(0)].into()).unwrap();
        assert_eq!(t2.multiplicity(v(0), v(1)).unwrap(), 2);
        assert_eq!(t.delete_edges(&BTreeSet::new()).unwrap(), t);
        let all: BTreeSet<_> = t.edge_ids().collect();
        let empty = t.delete_edges(&all).unwrap();
        assert_eq!(empty.edge_count(), 0);
        assert_eq!(empty.vertex_count(), 2);
        assert_eq!(
            t.delete_edges(&[EdgeId(9)].into()),
            Err(Error::UnknownEdge(EdgeId(9)))
        );
    }

    #[test]
    fn lift_examples() {
        let (g, id) = path(3).lift(EdgeId(0), EdgeId(1)).unwrap();
        assert_eq!(g.endpoints(id).unwrap(), Edge { lo: v(0), hi: v(2) });
        assert_eq!(g.degree(v(1)).unwrap(), 0);
        assert_eq!(g.provenance(id), Some((EdgeId(0), EdgeId(1))));

        let (g, id) = star(3).lift(EdgeId(0), EdgeId(1)).unwrap();
        assert_eq!(g.endpoints(id).unwrap(), Edge { lo: v(1), hi: v(2) });
        assert_eq!(g.endpoints(EdgeId(2)).unwrap(), Edge { lo: v(0), hi: v(3) });

        assert_eq!(
            theta(2).lift(EdgeId(0), EdgeId(1)),
            Err(Error::ParallelLift(EdgeId(0), EdgeId(1)))
        );
        let p4 = path(4);
        assert_eq!(
            p4.lift(EdgeId(0), EdgeId(2)),
            Err(Error::NotIncident(EdgeId(0), EdgeId(2)))
        );
    }

    #[test]
    fn isomorphism_examples() {
        let relabeled = MultiGraph::from_edges(2, &[(1, 0), (1, 0), (1, 0)]).unwrap();
        assert!(is_isomorphic_small(&theta(3), &relabeled).unwrap());
        assert!(!is_isomorphic_small(&theta(3), &theta(2)).unwrap());
        assert!(!is_isomorphic_small(&cycle(4), &path(4)).unwrap());
        // Same degree sequence, different structure: C6 vs two triangles.
        let two_tri =
            MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!is_isomorphic_small(&cycle(6), &two_tri).unwrap());
        let big = path(13);
        assert!(matches!(
            is_isomorphic_small(&big, &big),
            Err(Error::SizeBudget { .. })
        ));
    }

    fn arb_graph() -> impl Strategy<Value = MultiGraph> {
        (1u32..8).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 0..14).prop_map(move |pairs| {
                let pairs: Vec<_> = pairs.into_iter().filter(|(a, b)| a != b).collect();
                MultiGraph::from_edges(n, &pairs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn handshake(g in arb_graph()) {
            let total: usize = g.vertices().map(|v| g.degree(v).unwrap()).sum();
            prop_assert_eq!(total, 2 * g.edge_count());
        }

        #[test]
        fn serialize_round_trip(g in arb_graph()) {
            let text = g.to_graph_file().unwrap();
            let back = parse_graph(&text).unwrap();
            let ends: Vec<_> = g.edges().map(|(_, e)| e).collect();
            let back_ends: Vec<_> = back.edges().map(|(_, e)| e).collect();
            prop_assert_eq!(ends, back_ends);
            prop_assert_eq!(g.vertex_set(), back.vertex_set());
        }

        #[test]
        fn identify_drops_inner_edges(g in arb_graph(), mask in 1u32..256) {
            let set: BTreeSet<_> = g.vertices().filter(|v| mask & (1 << v.0) != 0).collect();
            prop_assume!(!set.is_empty());
            let label = g.fresh_vertex();
            let inner = g.edges().filter(|(_, e)| set.contains(&e.lo) && set.contains(&e.hi)).count();
            let (h, map) = g.identify(&set, label).unwrap();
            prop_assert_eq!(h.edge_count(), g.edge_count() - inner);
            prop_assert_eq!(map.dropped.len(), inner);
            for v in g.vertices() {
                prop_assert!(h.contains_vertex(map.map(v).unwrap()));
            }
        }

        #[test]
        fn lift_degree_accounting(g in arb_graph(), pick in 0usize..64) {
            let mut candidates = Vec::new();
            for v in g.vertices() {
                let inc = g.incident(v).unwrap();
                for (i, &e) in inc.iter().enumerate() {
                    for &f in &inc[i + 1..] {
                        if g.endpoints(e).unwrap() != g.endpoints(f).unwrap() {
                            candidates.push((v, e, f));
                        }
                    }
                }
            }
            prop_assume!(!candidates.is_empty());
            let (shared, e, f) = candidates[pick % candidates.len()];
            let a = g.endpoints(e).unwrap().other(shared);
            let b = g.endpoints(f).unwrap().other(shared);
            let (h, _) = g.lift(e, f).unwrap();
            prop_assert_eq!(h.degree(shared).unwrap() + 2, g.degree(shared).unwrap());
            prop_assert_eq!(h.degree(a).unwrap(), g.degree(a).unwrap());
            prop_assert_eq!(h.degree(b).unwrap(), g.degree(b).unwrap());
        }
    }
}
