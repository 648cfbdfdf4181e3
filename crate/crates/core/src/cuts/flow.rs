//! Unit-capacity max-flow on undirected multigraphs.
//!
//! Every edge instance is an undirected unit-capacity arc pair, so parallel
//! edges contribute capacity equal to their multiplicity. Flow on edge `i`
//! with ends `(a, b)` is stored as `-1`, `0` or `+1`, positive meaning `a -> b`.

use std::collections::VecDeque;

use crate::multigraph::Dense;

pub(crate) struct Flow {
    pub value: usize,
    pub flow: Vec<i8>,
    /// Vertices reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
}

fn residual(d: &Dense, flow: &[i8], from: usize, edge: usize) -> i8 {
    let (a, _) = d.ends[edge];
    if from == a {
        1 - flow[edge]
    } else {
        1 + flow[edge]
    }
}

/// Edmonds-Karp on the edges not marked in `removed`.
pub(crate) fn max_flow(d: &Dense, s: usize, t: usize, removed: Option<&[bool]>) -> Flow {
    let mut flow = vec![0i8; d.m()];
    let alive = |e: usize| removed.is_none_or(|r| !r[e]);
    let mut value = 0;
    loop {
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; d.n()];
        let mut seen = vec![false; d.n()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for &(w, e) in &d.adj[u] {
                if !seen[w] && alive(e) && residual(d, &flow, u, e) > 0 {
                    seen[w] = true;
                    parent[w] = Some((u, e));
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            return Flow {
                value,
                flow,
                source_side: seen,
            };
        }
        let mut cur = t;
        while let Some((u, e)) = parent[cur] {
            if d.ends[e].0 == u {
                flow[e] += 1;
            } else {
                flow[e] -= 1;
            }
            cur = u;
        }
        value += 1;
    }
}

/// Splits a flow into `value` edge-disjoint source-to-sink paths (edge indices).
pub(crate) fn decompose_paths(d: &Dense, f: &Flow, s: usize, t: usize) -> Vec<Vec<usize>> {
    let mut used = vec![false; d.m()];
    let outgoing = |u: usize, e: usize| {
        let (a, b) = d.ends[e];
        (u == a && f.flow[e] == 1) || (u == b && f.flow[e] == -1)
    };
    let mut paths = Vec::with_capacity(f.value);
    for _ in 0..f.value {
        // (vertex, edge used to leave it)
        let mut walk: Vec<(usize, usize)> = Vec::new();
        let mut pos = vec![usize::MAX; d.n()];
        let mut u = s;
        pos[s] = 0;
        while u != t {
            let &(w, e) = d.adj[u]
                .iter()
                .find(|&&(_, e)| !used[e] && outgoing(u, e))
                .expect("flow conservation guarantees an outgoing edge");
            used[e] = true;
            walk.push((u, e));
            if pos[w] != usize::MAX {
                // Drop the circulation we just closed.
                let keep = pos[w];
                for &(x, _) in &walk[keep..] {
                    pos[x] = usize::MAX;
                }
                walk.truncate(keep);
            }
            pos[w] = walk.len();
            u = w;
        }
        paths.push(walk.into_iter().map(|(_, e)| e).collect());
    }
    paths
}
