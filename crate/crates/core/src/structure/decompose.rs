//! Tree-partitions of adhesion at most `k` with every torso in `A_k`.
//!
//! The partition is refined while some bag holds two vertices of degree at
//! least `k+1`. For such a pair `x, y` in bag `B_t` a minimum `(x, y)`-cut `X`
//! is taken and the tree is rooted at `t`. If no subtree is split by `X`,
//! node `t` itself is split along `X`. Otherwise a deepest split subtree
//! `F_u` is handled by one of three moves:
//!
//! * replace `X` by `X - F_u` or `X + F_u` when that keeps the cut at most `k`;
//! * split `u` along `F_u ∩ X` when high-degree vertices of `B_u` lie on both sides;
//! * move the low-degree side of `B_u`, and the child subtrees on that side,
//!   up to the parent of `u`.
//!
//! Every move either splits a node or lowers the number of split subtrees.

use std::collections::{BTreeSet, VecDeque};

use crate::cuts::{min_cut, rho};
use crate::error::{Error, Result};
use crate::multigraph::{MultiGraph, VertexId};

use super::immersion::{theta_free, ImmersionWitness, ThetaCheck};
use super::partition::TreePartition;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    Partition(TreePartition),
    Witness(ImmersionWitness),
}

impl Decomposition {
    pub fn partition(&self) -> Option<&TreePartition> {
        match self {
            Decomposition::Partition(d) => Some(d),
            Decomposition::Witness(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&ImmersionWitness> {
        match self {
            Decomposition::Partition(_) => None,
            Decomposition::Witness(w) => Some(w),
        }
    }
}

fn high(g: &MultiGraph, v: VertexId, k: usize) -> bool {
    g.degree(v).unwrap_or(0) > k
}

fn high_count(d: &TreePartition, t: usize, k: usize) -> usize {
    d.bags[t].iter().filter(|&&v| high(&d.graph, v, k)).count()
}

/// `w(D)`: over all nodes, the number of degree-`>k` vertices in the bag minus one.
pub fn potential(d: &TreePartition, k: usize) -> usize {
    (0..d.node_count())
        .map(|t| high_count(d, t, k).saturating_sub(1))
        .sum()
}

/// Adhesion at most `k` and every torso has a vertex of degree above `k`.
pub fn is_k_tight(d: &TreePartition, k: usize) -> Result<bool> {
    Ok(d.adhesion() <= k && d.strength()? > k)
}

/// Splits node `t` along `side`: `t` keeps `B_t ∩ side`, a new node takes the
/// rest, and each neighbor follows the side holding its component.
///
/// Every component of `T - t` must lie wholly inside or wholly outside `side`.
pub fn split_node(d: &TreePartition, t: usize, side: &BTreeSet<VertexId>) -> Result<TreePartition> {
    if t >= d.node_count() {
        return Err(Error::InvalidPartition(format!("unknown tree node {t}")));
    }
    let keep: BTreeSet<_> = d.bags[t].intersection(side).copied().collect();
    let moved: BTreeSet<_> = d.bags[t].difference(side).copied().collect();
    if keep.is_empty() || moved.is_empty() {
        return Err(Error::InvalidPartition(format!("cut does not split bag {t}")));
    }
    let fresh = d.node_count();
    let mut out = d.clone();
    out.bags[t] = keep;
    out.bags.push(moved);
    for (w, i) in d.neighbors(t) {
        let members = d.union_of(&d.component(w, i));
        let inside = members.iter().filter(|v| side.contains(v)).count();
        if inside != 0 && inside != members.len() {
            return Err(Error::InvalidPartition(format!(
                "component through node {w} is split by the cut"
            )));
        }
        if inside == 0 && !members.is_empty() {
            out.tree[i] = if d.tree[i].0 == t { (fresh, w) } else { (w, fresh) };
        }
    }
    out.tree.push((t, fresh));
    Ok(out)
}

/// Parent of each node when the tree is rooted at `root`.
fn rooted(d: &TreePartition, root: usize) -> (Vec<Option<usize>>, Vec<usize>) {
    let mut parent = vec![None; d.node_count()];
    let mut order = vec![root];
    let mut seen = vec![false; d.node_count()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for (w, _) in d.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                order.push(w);
                queue.push_back(w);
            }
        }
    }
    (parent, order)
}

fn edge_between(d: &TreePartition, a: usize, b: usize) -> usize {
    d.tree
        .iter()
        .position(|&(p, q)| (p, q) == (a, b) || (p, q) == (b, a))
        .expect("adjacent tree nodes")
}

/// Vertices in the subtree below `u` (rooted tree).
fn below(d: &TreePartition, u: usize, parent: usize) -> BTreeSet<VertexId> {
    d.union_of(&d.component(u, edge_between(d, u, parent)))
}

fn crossed(set: &BTreeSet<VertexId>, x: &BTreeSet<VertexId>) -> bool {
    let inside = set.iter().filter(|v| x.contains(v)).count();
    inside != 0 && inside != set.len()
}

enum Step {
    Split(TreePartition),
    Moved(TreePartition),
    Recut(BTreeSet<VertexId>),
}

/// One refinement move for the pair `x, y` in bag `t` with cut side `cut`.
fn refine(d: &TreePartition, k: usize, t: usize, cut: &BTreeSet<VertexId>) -> Result<Step> {
    let g = &d.graph;
    let (parent, order) = rooted(d, t);
    let mut far = vec![BTreeSet::new(); d.node_count()];
    let mut is_crossed = vec![false; d.node_count()];
    for &u in &order[1..] {
        far[u] = below(d, u, parent[u].expect("non-root"));
        is_crossed[u] = crossed(&far[u], cut);
    }
    let extremal = order[1..]
        .iter()
        .copied()
        .filter(|&u| is_crossed[u])
        .filter(|&u| !(0..d.node_count()).any(|c| parent[c] == Some(u) && is_crossed[c]))
        .min();
    let Some(u) = extremal else {
        return Ok(Step::Split(split_node(d, t, cut)?));
    };
    let fu = &far[u];
    let outside: BTreeSet<_> = g.vertices().filter(|v| !fu.contains(v)).collect();
    let a_in: BTreeSet<_> = outside.intersection(cut).copied().collect();
    if rho(g, &a_in)? <= k {
        return Ok(Step::Recut(a_in));
    }
    let a_out: BTreeSet<_> = outside.difference(cut).copied().collect();
    if rho(g, &a_out)? <= k {
        return Ok(Step::Recut(cut.union(fu).copied().collect()));
    }
    // Both sides of F_u now have boundary below |δ(X)| <= k.
    let inner: BTreeSet<_> = fu.intersection(cut).copied().collect();
    let bag = &d.bags[u];
    let high_in = bag.iter().any(|&v| high(g, v, k) && inner.contains(&v));
    let high_out = bag.iter().any(|&v| high(g, v, k) && !inner.contains(&v));
    if high_in && high_out {
        return Ok(Step::Split(split_node(d, u, &inner)?));
    }
    // Move the low side of B_u, and the child subtrees on it, to the parent.
    let low_side = |v: &VertexId| inner.contains(v) != high_in;
    let up = parent[u].expect("non-root");
    let mut out = d.clone();
    let moved: BTreeSet<_> = bag.iter().copied().filter(low_side).collect();
    out.bags[u] = bag.iter().copied().filter(|v| !low_side(v)).collect();
    out.bags[up].extend(moved);
    for c in 0..d.node_count() {
        if parent[c] != Some(u) || far[c].is_empty() || !far[c].iter().all(low_side) {
            continue;
        }
        let i = edge_between(d, c, u);
        out.tree[i] = (up, c);
    }
    Ok(Step::Moved(out))
}

/// Finds a tree-partition of adhesion at most `k` whose torsos are all in
/// `A_k`, or a `θ_{k+1}` immersion when none exists.
pub fn decompose(g: &MultiGraph, k: usize) -> Result<Decomposition> {
    if let ThetaCheck::Witness(w) = theta_free(g, k)? {
        return Ok(Decomposition::Witness(w));
    }
    if g.max_degree() <= k {
        return Ok(Decomposition::Partition(TreePartition::star(g.clone())));
    }
    let cap = (g.vertex_count() * g.edge_count()).max(1);
    let mut steps = 0usize;
    let mut d = TreePartition::trivial(g.clone());
    'outer: loop {
        let Some((t, x, y)) = overloaded_pair(&d, k) else {
            return Ok(Decomposition::Partition(d));
        };
        let mut cut = min_cut(g, x, y)?.side;
        loop {
            steps += 1;
            if steps > cap {
                return Err(Error::IterationCap(cap));
            }
            match refine(&d, k, t, &cut)? {
                Step::Split(next) => {
                    d = next;
                    continue 'outer;
                }
                Step::Moved(next) => d = next,
                Step::Recut(next) => cut = next,
            }
        }
    }
}

/// Lowest-id pair of degree-`>k` vertices sharing a bag.
fn overloaded_pair(d: &TreePartition, k: usize) -> Option<(usize, VertexId, VertexId)> {
    let mut best: Option<(usize, VertexId, VertexId)> = None;
    for (t, bag) in d.bags.iter().enumerate() {
        let mut hi = bag.iter().copied().filter(|&v| high(&d.graph, v, k));
        if let (Some(x), Some(y)) = (hi.next(), hi.next()) {
            if best.is_none_or(|(_, bx, by)| (x, y) < (bx, by)) {
                best = Some((t, x, y));
            }
        }
    }
    best
}
