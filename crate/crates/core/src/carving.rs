//! Rooted carving decompositions that separate a vertex set, and the
//! light-leaf argument bounding edge-admissibility of graphs without a
//! `θ_{k+1}` immersion by `2k - 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cuts::{cut_edges, max_edge_disjoint_paths, min_cut, supp, BlockingSet};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};
use crate::speed::Speed;
use crate::structure::{theta_free, ImmersionWitness, ThetaCheck};

/// Binary rooted tree (root 0) with every vertex of `G` assigned to a leaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedCarving {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Option<(usize, usize)>>,
    /// Vertices assigned to each leaf; empty for internal nodes.
    pub classes: Vec<BTreeSet<VertexId>>,
    /// `w(t)` for internal nodes.
    pub node_weight: Vec<Option<usize>>,
    /// `w(e)` for the edge from each non-root node to its parent.
    pub edge_weight: Vec<Option<usize>>,
}

impl RootedCarving {
    fn single(g: &MultiGraph) -> Self {
        RootedCarving {
            parent: vec![None],
            children: vec![None],
            classes: vec![g.vertex_set().clone()],
            node_weight: vec![None],
            edge_weight: vec![None],
        }
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    pub fn is_leaf(&self, t: usize) -> bool {
        self.children[t].is_none()
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.node_count()).filter(|&t| self.is_leaf(t))
    }

    pub fn leaf_of(&self, v: VertexId) -> Option<usize> {
        self.leaves().find(|&l| self.classes[l].contains(&v))
    }

    /// `σ^{-1}(descl(t))`: vertices assigned to leaves below `t`.
    pub fn vertices_below(&self, t: usize) -> BTreeSet<VertexId> {
        match self.children[t] {
            None => self.classes[t].clone(),
            Some((a, b)) => {
                let mut out = self.vertices_below(a);
                out.extend(self.vertices_below(b));
                out
            }
        }
    }

    /// `cut(e)` for the edge between `t` and its parent.
    pub fn cut(&self, g: &MultiGraph, t: usize) -> Result<BTreeSet<EdgeId>> {
        cut_edges(g, &self.vertices_below(t))
    }

    fn split(&mut self, leaf: usize, first: BTreeSet<VertexId>, second: BTreeSet<VertexId>) {
        let a = self.node_count();
        for class in [first, second] {
            self.parent.push(Some(leaf));
            self.children.push(None);
            self.classes.push(class);
            self.node_weight.push(None);
            self.edge_weight.push(None);
        }
        self.children[leaf] = Some((a, a + 1));
        self.classes[leaf].clear();
    }

    /// Recomputes every weight from `g`.
    pub fn reweigh(&mut self, g: &MultiGraph) -> Result<()> {
        for t in 0..self.node_count() {
            self.node_weight[t] = match self.children[t] {
                None => None,
                Some((a, b)) => {
                    let (sa, sb) = (self.vertices_below(a), self.vertices_below(b));
                    Some(
                        g.edges()
                            .filter(|(_, e)| {
                                (sa.contains(&e.lo) && sb.contains(&e.hi))
                                    || (sb.contains(&e.lo) && sa.contains(&e.hi))
                            })
                            .count(),
                    )
                }
            };
            self.edge_weight[t] = match self.parent[t] {
                None => None,
                Some(_) => Some(self.cut(g, t)?.len()),
            };
        }
        Ok(())
    }

    /// True when the stored weights match a fresh computation.
    pub fn audit(&self, g: &MultiGraph) -> Result<bool> {
        let mut fresh = self.clone();
        fresh.reweigh(g)?;
        Ok(fresh == *self)
    }

    /// Nested form: leaves as `{v ...}`, internal nodes as `(w=W left right)`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_node(0, &mut out);
        out
    }

    fn write_node(&self, t: usize, out: &mut String) {
        match self.children[t] {
            None => {
                out.push('{');
                let mut first = true;
                for v in &self.classes[t] {
                    if !first {
                        out.push(' ');
                    }
                    first = false;
                    let _ = write!(out, "{v}");
                }
                out.push('}');
            }
            Some((a, b)) => {
                let _ = write!(out, "(w={} ", self.node_weight[t].unwrap_or(0));
                self.write_node(a, out);
                out.push(' ');
                self.write_node(b, out);
                out.push(')');
            }
        }
    }
}

fn check_targets(g: &MultiGraph, k: usize, s: &BTreeSet<VertexId>) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if s.len() < 2 {
        return Err(Error::InvalidParameter("the vertex set needs at least two vertices".into()));
    }
    for &v in s {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    if let ThetaCheck::Witness(w) = theta_free(g, k)? {
        return Err(Error::ContainsTheta(Box::new(w)));
    }
    Ok(())
}

/// Splits leaves holding two or more vertices of `s` along minimum cuts of
/// `G` until each leaf holds at most one.
pub fn build_carving(g: &MultiGraph, k: usize, s: &BTreeSet<VertexId>) -> Result<RootedCarving> {
    check_targets(g, k, s)?;
    let mut c = RootedCarving::single(g);
    loop {
        let next = c.leaves().find_map(|l| {
            let mut hits = c.classes[l].iter().filter(|v| s.contains(v));
            match (hits.next(), hits.next()) {
                (Some(&a), Some(&b)) => Some((l, a, b)),
                _ => None,
            }
        });
        let Some((leaf, x1, x2)) = next else { break };
        let cut = min_cut(g, x1, x2)?;
        if cut.size() > k {
            let mut fam = max_edge_disjoint_paths(g, x1, x2)?;
            fam.paths.truncate(k + 1);
            return Err(Error::ContainsTheta(Box::new(ImmersionWitness {
                x: x1,
                y: x2,
                paths: fam.paths,
            })));
        }
        let class = &c.classes[leaf];
        let first: BTreeSet<_> = class.intersection(&cut.side).copied().collect();
        let second: BTreeSet<_> = class.difference(&cut.side).copied().collect();
        c.split(leaf, first, second);
    }
    c.reweigh(g)?;
    Ok(c)
}

/// Root-to-leaf path along which every edge weighs at most `2k - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafPath {
    pub leaf: usize,
    /// Nodes from the root to `leaf`.
    pub nodes: Vec<usize>,
}

/// Greedy descent: from each node move to the child whose share of the
/// current cut has at most `k - 1` edges, preferring the first child.
pub fn light_leaf_path(g: &MultiGraph, c: &RootedCarving, k: usize) -> Result<LeafPath> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if c.node_weight.iter().flatten().any(|&w| w > k) {
        return Err(Error::InvalidParameter(format!("a node weight exceeds {k}")));
    }
    let mut nodes = vec![0];
    let Some((first, _)) = c.children[0] else {
        return Ok(LeafPath { leaf: 0, nodes });
    };
    let mut t = first;
    nodes.push(t);
    while let Some((a, b)) = c.children[t] {
        let cut = c.cut(g, t)?;
        debug_assert!(cut.len() < 2 * k);
        let below_a = c.vertices_below(a);
        let share_a = cut
            .iter()
            .filter(|&&e| g.endpoints(e).is_ok_and(|ends| below_a.contains(&ends.lo) || below_a.contains(&ends.hi)))
            .count();
        let share_b = cut.len() - share_a;
        t = if share_a < k {
            a
        } else if share_b < k {
            b
        } else {
            return Err(Error::InvalidParameter(format!(
                "cut at node {t} weighs {} > {}",
                cut.len(),
                2 * k - 1
            )));
        };
        nodes.push(t);
    }
    Ok(LeafPath { leaf: t, nodes })
}

/// Shows that `s` is not a `(2k, ∞)`-edge-hide-out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationWitness {
    pub x: VertexId,
    /// Blocks every path from `x` to `s \ {x}`; the smaller of the two below.
    pub blocking: BTreeSet<EdgeId>,
    /// Boundary of the light leaf's class, at most `2k - 1` edges.
    pub carving_cut: BTreeSet<EdgeId>,
    pub carving: RootedCarving,
    pub path: LeafPath,
}

impl RefutationWitness {
    pub fn verify(&self, g: &MultiGraph, s: &BTreeSet<VertexId>, k: usize) -> Result<bool> {
        if !s.contains(&self.x) || self.blocking.len() + 1 > 2 * k {
            return Ok(false);
        }
        let b = BlockingSet {
            edges: self.blocking.clone(),
            speed: Speed::Unbounded,
            source: self.x,
            targets: s.iter().copied().filter(|&v| v != self.x).collect(),
        };
        b.blocks(g)
    }
}

pub fn refute_hideout(g: &MultiGraph, k: usize, s: &BTreeSet<VertexId>) -> Result<RefutationWitness> {
    let carving = build_carving(g, k, s)?;
    let path = light_leaf_path(g, &carving, k)?;
    let x = *carving.classes[path.leaf]
        .iter()
        .find(|v| s.contains(v))
        .expect("every leaf on a light path holds one target");
    let carving_cut = carving.cut(g, path.leaf)?;
    let rest: BTreeSet<_> = s.iter().copied().filter(|&v| v != x).collect();
    let direct = supp(g, Speed::Unbounded, x, &rest)?.edges;
    let blocking = if direct.len() < carving_cut.len() {
        direct
    } else {
        carving_cut.clone()
    };
    Ok(RefutationWitness {
        x,
        blocking,
        carving_cut,
        carving,
        path,
    })
}

/// Leaf index of each vertex.
pub fn assignment(c: &RootedCarving) -> BTreeMap<VertexId, usize> {
    c.leaves()
        .flat_map(|l| c.classes[l].iter().map(move |&v| (v, l)))
        .collect()
}
