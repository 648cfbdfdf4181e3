//! Exact minimum blocking sets for finite speeds `s >= 3`.
//!
//! Branch and bound: take the shortest surviving s-path and branch on which of
//! its edges joins the blocking set. Branch `i` deletes edge `i` and pins the
//! earlier path edges as kept, so every blocking set is enumerated once.
//! The bound is a greedy packing of s-paths that are disjoint on deletable
//! edges; each of them needs its own deleted edge.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::multigraph::Dense;

/// Shortest path (as edge indices from `src`) of length at most `limit`
/// avoiding `blocked` edges. Parallel edges are tried in id order.
pub(crate) fn shortest_path(
    d: &Dense,
    blocked: &[bool],
    src: usize,
    dst: usize,
    limit: Option<usize>,
) -> Option<Vec<usize>> {
    let mut dist = vec![usize::MAX; d.n()];
    let mut parent = vec![(usize::MAX, usize::MAX); d.n()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        if u == dst {
            break;
        }
        if limit.is_some_and(|l| dist[u] >= l) {
            continue;
        }
        for &(w, e) in &d.adj[u] {
            if !blocked[e] && dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = (u, e);
                queue.push_back(w);
            }
        }
    }
    if dist[dst] == usize::MAX {
        return None;
    }
    let mut path = Vec::with_capacity(dist[dst]);
    let mut cur = dst;
    while cur != src {
        let (p, e) = parent[cur];
        path.push(e);
        cur = p;
    }
    path.reverse();
    Some(path)
}

pub(crate) struct Search<'a> {
    d: &'a Dense,
    x: usize,
    y: usize,
    limit: usize,
    deleted: Vec<bool>,
    pinned: Vec<bool>,
    current: Vec<usize>,
    /// Size a solution must beat.
    best: usize,
    best_set: Option<Vec<usize>>,
    nodes: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    /// `incumbent` is a known feasible blocking set; solutions must be strictly
    /// smaller than `bound`.
    pub fn new(
        d: &'a Dense,
        x: usize,
        y: usize,
        limit: usize,
        bound: usize,
        incumbent: Option<Vec<usize>>,
        budget: u64,
    ) -> Self {
        let (best, best_set) = match incumbent {
            Some(set) if set.len() < bound => (set.len(), Some(set)),
            _ => (bound, None),
        };
        Search {
            d,
            x,
            y,
            limit,
            deleted: vec![false; d.m()],
            pinned: vec![false; d.m()],
            current: Vec::new(),
            best,
            best_set,
            nodes: 0,
            budget,
        }
    }

    pub fn run(mut self) -> Result<Option<Vec<usize>>> {
        self.branch()?;
        Ok(self.best_set)
    }

    fn lower_bound(&self) -> Option<usize> {
        let mut used = self.deleted.clone();
        let mut count = 0;
        while let Some(path) = shortest_path(self.d, &used, self.x, self.y, Some(self.limit)) {
            let mut free = 0;
            for e in path {
                if !self.pinned[e] {
                    used[e] = true;
                    free += 1;
                }
            }
            if free == 0 {
                return None;
            }
            count += 1;
        }
        Some(count)
    }

    fn branch(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let depth = self.current.len();
        let Some(path) = shortest_path(self.d, &self.deleted, self.x, self.y, Some(self.limit))
        else {
            if depth < self.best {
                self.best = depth;
                let mut set = self.current.clone();
                set.sort_unstable();
                self.best_set = Some(set);
            }
            return Ok(());
        };
        match self.lower_bound() {
            None => return Ok(()),
            Some(lb) if depth + lb >= self.best => return Ok(()),
            Some(_) => {}
        }
        let mut newly_pinned = Vec::new();
        for &e in &path {
            if self.pinned[e] {
                continue;
            }
            self.deleted[e] = true;
            self.current.push(e);
            self.branch()?;
            self.current.pop();
            self.deleted[e] = false;
            self.pinned[e] = true;
            newly_pinned.push(e);
            if depth + 1 >= self.best {
                break;
            }
        }
        for e in newly_pinned {
            self.pinned[e] = false;
        }
        Ok(())
    }
}
