use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};

/// Tree-indexed near-partition of `V(G)`. Empty bags are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePartition {
    pub graph: MultiGraph,
    /// Tree edges between node indices `0..bags.len()`.
    pub tree: Vec<(usize, usize)>,
    pub bags: Vec<BTreeSet<VertexId>>,
}

/// A satellite of a torso: one component of `T - t` collapsed to a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Satellite {
    pub label: VertexId,
    pub tree_edge: usize,
    /// The neighbor of `t` inside the component.
    pub represents: usize,
    /// Tree nodes of the component.
    pub subsumes: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Torso {
    pub node: usize,
    pub graph: MultiGraph,
    pub satellites: Vec<Satellite>,
    /// Image of every vertex of `G` in the torso.
    pub image: BTreeMap<VertexId, VertexId>,
    /// Edges of `G` that became loops and were dropped.
    pub dropped: BTreeSet<EdgeId>,
}

impl TreePartition {
    /// Validates and builds a partition.
    pub fn new(
        graph: MultiGraph,
        tree: Vec<(usize, usize)>,
        bags: Vec<BTreeSet<VertexId>>,
    ) -> Result<Self> {
        let d = TreePartition { graph, tree, bags };
        d.validate()?;
        Ok(d)
    }

    /// One bag holding every vertex.
    pub fn trivial(graph: MultiGraph) -> Self {
        let bag = graph.vertex_set().clone();
        TreePartition {
            graph,
            tree: Vec::new(),
            bags: vec![bag],
        }
    }

    /// Empty center node 0 with one leaf per vertex, in vertex order.
    pub fn star(graph: MultiGraph) -> Self {
        let mut bags = vec![BTreeSet::new()];
        let mut tree = Vec::new();
        for v in graph.vertices() {
            tree.push((0, bags.len()));
            bags.push(BTreeSet::from([v]));
        }
        TreePartition { graph, tree, bags }
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPartition(m));
        let n = self.bags.len();
        if n == 0 {
            return bad("the tree needs at least one node".into());
        }
        if self.tree.len() + 1 != n {
            return bad(format!("{} nodes need {} tree edges", n, n - 1));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(a, b) in &self.tree {
            if a >= n || b >= n {
                return bad(format!("tree edge {a}-{b} names a missing node"));
            }
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                return bad(format!("tree edge {a}-{b} closes a cycle"));
            }
            parent[ra] = rb;
        }
        let mut seen = BTreeSet::new();
        for (t, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if !self.graph.contains_vertex(v) {
                    return bad(format!("bag {t} holds unknown vertex {v}"));
                }
                if !seen.insert(v) {
                    return bad(format!("vertex {v} lies in two bags"));
                }
            }
        }
        if seen.len() != self.graph.vertex_count() {
            return bad("bags do not cover every vertex".into());
        }
        Ok(())
    }

    pub fn neighbors(&self, t: usize) -> Vec<(usize, usize)> {
        self.tree
            .iter()
            .enumerate()
            .filter_map(|(i, &(a, b))| {
                if a == t {
                    Some((b, i))
                } else if b == t {
                    Some((a, i))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Nodes reachable from `start` without using tree edge `skip`.
    pub fn component(&self, start: usize, skip: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for (w, i) in self.neighbors(u) {
                if i != skip && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn union_of(&self, nodes: &BTreeSet<usize>) -> BTreeSet<VertexId> {
        nodes.iter().flat_map(|&t| self.bags[t].iter().copied()).collect()
    }

    /// Vertex sets on the two sides of tree edge `i`, first side containing `tree[i].0`.
    pub fn sides(&self, i: usize) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
        let (a, b) = self.tree[i];
        (
            self.union_of(&self.component(a, i)),
            self.union_of(&self.component(b, i)),
        )
    }

    /// `G`-edges between the two sides of tree edge `i`.
    pub fn cross(&self, i: usize) -> BTreeSet<EdgeId> {
        let (left, _) = self.sides(i);
        self.graph
            .edges()
            .filter(|(_, e)| left.contains(&e.lo) != left.contains(&e.hi))
            .map(|(id, _)| id)
            .collect()
    }

    pub fn adhesion(&self) -> usize {
        (0..self.tree.len()).map(|i| self.cross(i).len()).max().unwrap_or(0)
    }

    pub fn strength(&self) -> Result<usize> {
        let mut best = usize::MAX;
        for t in 0..self.node_count() {
            best = best.min(self.torso(t)?.graph.max_degree());
        }
        Ok(best)
    }

    /// First label used for satellites; above every vertex of `G`.
    pub fn satellite_base(&self) -> u32 {
        self.graph.max_vertex().map_or(0, |v| v.0 + 1)
    }

    /// Satellite label for tree edge `i` as seen from its endpoint `t`.
    pub fn satellite_label(&self, i: usize, t: usize) -> VertexId {
        let base = self.satellite_base() + 2 * i as u32;
        if self.tree[i].0 == t {
            VertexId(base)
        } else {
            VertexId(base + 1)
        }
    }

    /// The `t`-torso: each component of `T - t` has its bag union identified
    /// into one satellite vertex.
    pub fn torso(&self, t: usize) -> Result<Torso> {
        if t >= self.node_count() {
            return Err(Error::InvalidPartition(format!("unknown tree node {t}")));
        }
        let mut graph = self.graph.clone();
        let mut image: BTreeMap<VertexId, VertexId> =
            self.graph.vertices().map(|v| (v, v)).collect();
        let mut dropped = BTreeSet::new();
        let mut satellites = Vec::new();
        for (w, i) in self.neighbors(t) {
            let subsumes = self.component(w, i);
            let members = self.union_of(&subsumes);
            let label = self.satellite_label(i, t);
            if members.is_empty() {
                graph.add_vertex(label);
            } else {
                let (next, merge) = graph.identify(&members, label)?;
                graph = next;
                dropped.extend(merge.dropped);
                for v in &members {
                    image.insert(*v, label);
                }
            }
            satellites.push(Satellite {
                label,
                tree_edge: i,
                represents: w,
                subsumes,
            });
        }
        Ok(Torso {
            node: t,
            graph,
            satellites,
            image,
            dropped,
        })
    }

    /// Node holding `v`.
    pub fn bag_of(&self, v: VertexId) -> Option<usize> {
        self.bags.iter().position(|b| b.contains(&v))
    }

    /// Text form: `tree`, `nodes N`, `edge a b` lines, `bags`, `t: v ...` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("tree\nnodes {}\n", self.node_count());
        for &(a, b) in &self.tree {
            let _ = writeln!(out, "edge {a} {b}");
        }
        out.push_str("bags\n");
        for (t, bag) in self.bags.iter().enumerate() {
            let _ = write!(out, "{t}:");
            for v in bag {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(graph: MultiGraph, text: &str) -> Result<Self> {
        let perr = |line: usize, m: &str| Error::Parse {
            line,
            message: m.to_string(),
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "tree")) => {}
            Some((i, _)) => return Err(perr(i, "expected `tree`")),
            None => return Err(perr(0, "empty partition file")),
        }
        let (i, nodes_line) = lines.next().ok_or_else(|| perr(0, "missing `nodes` line"))?;
        let n: usize = nodes_line
            .strip_prefix("nodes ")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| perr(i, "expected `nodes N`"))?;
        let mut tree = Vec::new();
        let mut bags = vec![BTreeSet::new(); n];
        let mut in_bags = false;
        let mut filled = vec![false; n];
        for (i, line) in lines {
            if !in_bags {
                if line == "bags" {
                    in_bags = true;
                    continue;
                }
                let rest = line.strip_prefix("edge ").ok_or_else(|| perr(i, "expected `edge a b` or `bags`"))?;
                let ends: Vec<usize> = rest
                    .split_whitespace()
                    .map(|x| x.parse().map_err(|_| perr(i, "bad node index")))
                    .collect::<Result<_>>()?;
                if ends.len() != 2 {
                    return Err(perr(i, "tree edge needs two nodes"));
                }
                tree.push((ends[0], ends[1]));
            } else {
                let (t, rest) = line.split_once(':').ok_or_else(|| perr(i, "expected `t: vertices`"))?;
                let t: usize = t.trim().parse().map_err(|_| perr(i, "bad node index"))?;
                if t >= n || filled[t] {
                    return Err(perr(i, "bag index missing from tree or repeated"));
                }
                filled[t] = true;
                for x in rest.split_whitespace() {
                    let v: u32 = x.parse().map_err(|_| perr(i, "bad vertex"))?;
                    bags[t].insert(VertexId(v));
                }
            }
        }
        if !in_bags {
            return Err(perr(0, "missing `bags` section"));
        }
        TreePartition::new(graph, tree, bags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::families::*;
    use crate::multigraph::{is_isomorphic_small, vset};

    fn triangle_split() -> TreePartition {
        TreePartition::new(complete(3), vec![(0, 1)], vec![vset([0]), vset([1, 2])]).unwrap()
    }

    #[test]
    fn adhesion_examples() {
        assert_eq!(TreePartition::trivial(cycle(5)).adhesion(), 0);
        assert_eq!(TreePartition::star(cycle(4)).adhesion(), 2);
        assert_eq!(triangle_split().adhesion(), 2);
    }

    #[test]
    fn strength_examples() {
        assert_eq!(TreePartition::trivial(theta(3)).strength().unwrap(), 3);
        assert_eq!(triangle_split().strength().unwrap(), 2);
        let g = MultiGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        assert!(TreePartition::star(g).strength().unwrap() <= 3);
    }

    #[test]
    fn torso_examples() {
        let d = TreePartition::trivial(cycle(4));
        let z = d.torso(0).unwrap();
        assert_eq!(z.graph, cycle(4));
        assert!(z.satellites.is_empty());

        let z = triangle_split().torso(1).unwrap();
        assert_eq!(z.graph.vertex_count(), 3);
        assert_eq!(z.graph.edge_count(), 3);
        assert!(is_isomorphic_small(&z.graph, &complete(3)).unwrap());

        let d = TreePartition::new(path(3), vec![(0, 1), (1, 2)], vec![vset([0]), vset([1]), vset([2])])
            .unwrap();
        let z = d.torso(1).unwrap();
        assert_eq!(z.satellites.len(), 2);
        assert_eq!(z.graph.degree(VertexId(1)).unwrap(), 2);
        assert!(d.torso(3).is_err());
    }

    #[test]
    fn empty_component_gives_isolated_satellite() {
        let d = TreePartition::new(path(2), vec![(0, 1), (1, 2)], vec![vset([0, 1]), BTreeSet::new(), BTreeSet::new()])
            .unwrap();
        let z = d.torso(1).unwrap();
        assert_eq!(z.graph.edge_count(), 0);
        assert_eq!(z.graph.vertex_count(), 2);
    }

    #[test]
    fn validation_rejects_bad_partitions() {
        let g = path(3);
        assert!(TreePartition::new(g.clone(), vec![(0, 1)], vec![vset([0]), vset([0, 1, 2])]).is_err());
        assert!(TreePartition::new(g.clone(), vec![(0, 1)], vec![vset([0]), vset([1])]).is_err());
        assert!(TreePartition::new(g.clone(), vec![], vec![vset([0]), vset([1, 2])]).is_err());
        assert!(TreePartition::new(g, vec![(0, 0)], vec![vset([0]), vset([1, 2])]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let d = TreePartition::star(cycle(4));
        let back = TreePartition::parse(cycle(4), &d.to_text()).unwrap();
        assert_eq!(back, d);
        assert!(TreePartition::parse(cycle(4), "tree\nnodes 1\nbags\n0: 0 1 2\n").is_err());
    }

    #[test]
    fn torso_preserves_bag_degrees() {
        let g = MultiGraph::from_edges(6, &[(0, 1), (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)])
            .unwrap();
        let d = TreePartition::new(
            g.clone(),
            vec![(0, 1), (1, 2)],
            vec![vset([0, 1]), vset([2, 3]), vset([4, 5])],
        )
        .unwrap();
        for t in 0..3 {
            let z = d.torso(t).unwrap();
            for &v in &d.bags[t] {
                assert_eq!(z.graph.degree(v).unwrap(), g.degree(v).unwrap());
            }
        }
    }
}
