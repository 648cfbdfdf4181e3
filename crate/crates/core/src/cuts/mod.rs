//! Edge cuts, length-bounded blocking sets and edge-disjoint paths.
//!
//! `min_s_cut` picks its algorithm by speed: direct edges for `s = 1`, a
//! closed form for `s = 2`, unit-capacity max-flow when every path is an
//! s-path, and exact branch and bound otherwise.

mod bounded;
pub(crate) mod flow;

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{Dense, EdgeId, MultiGraph, VertexId};
use crate::speed::Speed;

/// Default node budget for the finite-speed branch and bound.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// A bipartition `(X, V \ X)` together with its crossing edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub side: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl Cut {
    pub fn new(g: &MultiGraph, side: BTreeSet<VertexId>) -> Result<Cut> {
        if side.is_empty() || side.len() >= g.vertex_count() {
            return Err(Error::InvalidParameter(
                "a cut side must be a non-empty proper subset".into(),
            ));
        }
        let edges = cut_edges(g, &side)?;
        Ok(Cut { side, edges })
    }

    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

/// Edge set meeting every s-path from `source` to `targets`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockingSet {
    pub edges: BTreeSet<EdgeId>,
    pub speed: Speed,
    pub source: VertexId,
    pub targets: BTreeSet<VertexId>,
}

impl BlockingSet {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Checks that no s-path from the source to a target survives in `g \ F`.
    pub fn blocks(&self, g: &MultiGraph) -> Result<bool> {
        let dist = s_distances(g, &self.edges, self.source, self.speed)?;
        Ok(self.targets.iter().all(|t| !dist.contains(t)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFamily {
    pub source: VertexId,
    pub target: VertexId,
    /// Each path as its edge sequence from `source`.
    pub paths: Vec<Vec<EdgeId>>,
}

impl PathFamily {
    pub fn count(&self) -> usize {
        self.paths.len()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CutOptions {
    pub node_budget: u64,
}

impl Default for CutOptions {
    fn default() -> Self {
        CutOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

pub fn cut_edges(g: &MultiGraph, side: &BTreeSet<VertexId>) -> Result<BTreeSet<EdgeId>> {
    for &v in side {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    Ok(g.edges()
        .filter(|(_, e)| side.contains(&e.lo) != side.contains(&e.hi))
        .map(|(id, _)| id)
        .collect())
}

/// `ρ(X)`: number of edges leaving `X`.
pub fn rho(g: &MultiGraph, side: &BTreeSet<VertexId>) -> Result<usize> {
    cut_edges(g, side).map(|c| c.len())
}

/// Vertices reachable from `from` by an s-path avoiding `blocked`, excluding `from`.
pub fn s_distances(
    g: &MultiGraph,
    blocked: &BTreeSet<EdgeId>,
    from: VertexId,
    s: Speed,
) -> Result<BTreeSet<VertexId>> {
    let mut dist = std::collections::BTreeMap::new();
    if !g.contains_vertex(from) {
        return Err(Error::UnknownVertex(from));
    }
    dist.insert(from, 0usize);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if s.limit().is_some_and(|l| du >= l) {
            continue;
        }
        for &e in g.incident(u)? {
            if blocked.contains(&e) {
                continue;
            }
            let w = g.endpoints(e)?.other(u);
            if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(w) {
                slot.insert(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist.remove(&from);
    Ok(dist.into_keys().collect())
}

fn check_terminals(g: &MultiGraph, x: VertexId, y: VertexId) -> Result<()> {
    if x == y {
        return Err(Error::SameVertex(x));
    }
    for v in [x, y] {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    Ok(())
}

/// `cut_{G,s}(x, y)` with a minimum witness.
pub fn min_s_cut(g: &MultiGraph, x: VertexId, y: VertexId, s: Speed) -> Result<BlockingSet> {
    let found = min_s_cut_with(g, x, y, s, None, CutOptions::default())?;
    Ok(found.expect("an unbounded query always has a solution"))
}

/// Like [`min_s_cut`], but returns `None` when the optimum exceeds `at_most`.
/// The returned set, when present, is a minimum one.
pub fn min_s_cut_with(
    g: &MultiGraph,
    x: VertexId,
    y: VertexId,
    s: Speed,
    at_most: Option<usize>,
    opts: CutOptions,
) -> Result<Option<BlockingSet>> {
    check_terminals(g, x, y)?;
    let wrap = |edges: BTreeSet<EdgeId>| BlockingSet {
        edges,
        speed: s,
        source: x,
        targets: BTreeSet::from([y]),
    };
    let within = |size: usize| at_most.is_none_or(|k| size <= k);

    if let Speed::Finite(1) = s {
        let direct: BTreeSet<_> = g
            .incident(x)?
            .iter()
            .copied()
            .filter(|&e| g.endpoints(e).is_ok_and(|ends| ends.touches(y)))
            .collect();
        return Ok(within(direct.len()).then(|| wrap(direct)));
    }
    if let Speed::Finite(2) = s {
        let set = two_path_cut(g, x, y)?;
        return Ok(within(set.len()).then(|| wrap(set)));
    }

    let d = Dense::new(g);
    let (xi, yi) = (d.vertex(x)?, d.vertex(y)?);
    let flow = flow::max_flow(&d, xi, yi, None);
    let flow_cut: Vec<usize> = (0..d.m())
        .filter(|&e| {
            let (a, b) = d.ends[e];
            flow.source_side[a] != flow.source_side[b]
        })
        .collect();
    debug_assert_eq!(flow_cut.len(), flow.value);

    let to_ids = |set: Vec<usize>| set.into_iter().map(|e| d.edge_ids[e]).collect();
    if s.covers_all_paths(d.n()) {
        return Ok(within(flow.value).then(|| wrap(to_ids(flow_cut))));
    }

    let limit = s.limit().expect("finite speed");
    let bound = at_most.map_or(usize::MAX, |k| k + 1);
    let search = bounded::Search::new(&d, xi, yi, limit, bound, Some(flow_cut), opts.node_budget);
    Ok(search.run()?.map(|set| wrap(to_ids(set))))
}

/// Closed form for `s = 2`: every direct edge, plus for each common neighbor
/// the smaller of its two parallel classes (ties take the `x` side).
fn two_path_cut(g: &MultiGraph, x: VertexId, y: VertexId) -> Result<BTreeSet<EdgeId>> {
    let mut set = BTreeSet::new();
    let mut via_x: std::collections::BTreeMap<VertexId, Vec<EdgeId>> = Default::default();
    for &e in g.incident(x)? {
        let w = g.endpoints(e)?.other(x);
        if w == y {
            set.insert(e);
        } else {
            via_x.entry(w).or_default().push(e);
        }
    }
    let mut via_y: std::collections::BTreeMap<VertexId, Vec<EdgeId>> = Default::default();
    for &e in g.incident(y)? {
        let w = g.endpoints(e)?.other(y);
        if w != x {
            via_y.entry(w).or_default().push(e);
        }
    }
    for (w, xs) in &via_x {
        if let Some(ys) = via_y.get(w) {
            let side = if xs.len() <= ys.len() { xs } else { ys };
            set.extend(side.iter().copied());
        }
    }
    Ok(set)
}

fn check_supp_args(g: &MultiGraph, x: VertexId, targets: &BTreeSet<VertexId>) -> Result<()> {
    if !g.contains_vertex(x) {
        return Err(Error::UnknownVertex(x));
    }
    if targets.contains(&x) {
        return Err(Error::InvalidParameter(format!(
            "source {x} must not belong to the target set"
        )));
    }
    for &t in targets {
        if !g.contains_vertex(t) {
            return Err(Error::UnknownVertex(t));
        }
    }
    Ok(())
}

/// `supp_{G,s}(x, S)`: minimum edge set meeting every s-path from `x` into `S`.
pub fn supp(
    g: &MultiGraph,
    s: Speed,
    x: VertexId,
    targets: &BTreeSet<VertexId>,
) -> Result<BlockingSet> {
    let found = supp_with(g, s, x, targets, None, CutOptions::default())?;
    Ok(found.expect("an unbounded query always has a solution"))
}

/// Bounded form of [`supp`]: `None` when the support exceeds `at_most`.
///
/// `S` is merged into one fresh vertex `x'`; a shortest s-path into `S` stops
/// at its first `S` vertex, so s-paths to `S` and to `x'` correspond.
pub fn supp_with(
    g: &MultiGraph,
    s: Speed,
    x: VertexId,
    targets: &BTreeSet<VertexId>,
    at_most: Option<usize>,
    opts: CutOptions,
) -> Result<Option<BlockingSet>> {
    check_supp_args(g, x, targets)?;
    if targets.is_empty() {
        return Ok(Some(BlockingSet {
            edges: BTreeSet::new(),
            speed: s,
            source: x,
            targets: BTreeSet::new(),
        }));
    }
    let merged = g.fresh_vertex();
    let (h, _) = g.identify(targets, merged)?;
    let found = min_s_cut_with(&h, x, merged, s, at_most, opts)?;
    Ok(found.map(|b| BlockingSet {
        edges: b.edges,
        speed: s,
        source: x,
        targets: targets.clone(),
    }))
}

/// Maximum family of pairwise edge-disjoint `(x, y)`-paths.
pub fn max_edge_disjoint_paths(g: &MultiGraph, x: VertexId, y: VertexId) -> Result<PathFamily> {
    check_terminals(g, x, y)?;
    let d = Dense::new(g);
    let (xi, yi) = (d.vertex(x)?, d.vertex(y)?);
    let f = flow::max_flow(&d, xi, yi, None);
    let paths = flow::decompose_paths(&d, &f, xi, yi);
    let cut = (0..d.m())
        .filter(|&e| f.source_side[d.ends[e].0] != f.source_side[d.ends[e].1])
        .count();
    assert_eq!(cut, paths.len(), "max-flow and min-cut disagree");
    Ok(PathFamily {
        source: x,
        target: y,
        paths: paths
            .into_iter()
            .map(|p| p.into_iter().map(|e| d.edge_ids[e]).collect())
            .collect(),
    })
}

/// Minimum `(x, y)`-cut; the side is the set reachable from `x` in the
/// residual graph of a maximum flow.
pub fn min_cut(g: &MultiGraph, x: VertexId, y: VertexId) -> Result<Cut> {
    check_terminals(g, x, y)?;
    let d = Dense::new(g);
    let f = flow::max_flow(&d, d.vertex(x)?, d.vertex(y)?, None);
    let side: BTreeSet<_> = (0..d.n())
        .filter(|&i| f.source_side[i])
        .map(|i| d.ids[i])
        .collect();
    Cut::new(g, side)
}

/// Edge connectivity between `x` and `y`.
pub fn local_edge_connectivity(g: &MultiGraph, x: VertexId, y: VertexId) -> Result<usize> {
    check_terminals(g, x, y)?;
    let d = Dense::new(g);
    Ok(flow::max_flow(&d, d.vertex(x)?, d.vertex(y)?, None).value)
}

/// Checks that `path` is a walk from `from` to `to` along edges of `g`.
pub fn is_walk(g: &MultiGraph, path: &[EdgeId], from: VertexId, to: VertexId) -> bool {
    let mut cur = from;
    for &e in path {
        match g.endpoints(e) {
            Ok(ends) if ends.touches(cur) => cur = ends.other(cur),
            _ => return false,
        }
    }
    cur == to
}
