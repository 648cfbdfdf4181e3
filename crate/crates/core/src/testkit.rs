//! Brute-force oracles, the cut-to-degeneracy gadget, an exhaustive
//! adversarial robber, and seeded corpus generators.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{legal_moves, CopStrategy, EscapeRule};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};
use crate::speed::Speed;
use crate::structure::{edge_sum, EdgeSumSpec};

/// Edge count above which subset enumeration is refused.
pub const BRUTE_EDGE_LIMIT: usize = 20;
/// Vertex count above which layout enumeration is refused.
pub const BRUTE_VERTEX_LIMIT: usize = 8;

/// Small indexed copy of a graph for the oracles.
struct Small {
    n: usize,
    ends: Vec<(usize, usize)>,
    index: BTreeMap<VertexId, usize>,
}

impl Small {
    fn new(g: &MultiGraph) -> Result<Self> {
        if g.edge_count() > BRUTE_EDGE_LIMIT {
            return Err(Error::SizeBudget {
                what: "edge-subset enumeration",
                size: g.edge_count(),
                limit: BRUTE_EDGE_LIMIT,
            });
        }
        let index: BTreeMap<_, _> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let ends = g.edges().map(|(_, e)| (index[&e.lo], index[&e.hi])).collect();
        Ok(Small {
            n: index.len(),
            ends,
            index,
        })
    }

    /// Is some vertex of `targets` within distance `s` of `x` avoiding `removed`?
    fn reaches(&self, removed: u32, x: usize, targets: u32, s: Speed) -> bool {
        let limit = s.limit().unwrap_or(self.n);
        let mut frontier = 1u32 << x;
        let mut seen = frontier;
        for _ in 0..limit {
            let mut next = 0u32;
            for (i, &(a, b)) in self.ends.iter().enumerate() {
                if removed & (1 << i) != 0 {
                    continue;
                }
                if frontier & (1 << a) != 0 {
                    next |= 1 << b;
                }
                if frontier & (1 << b) != 0 {
                    next |= 1 << a;
                }
            }
            next &= !seen;
            if next & targets != 0 {
                return true;
            }
            if next == 0 {
                return false;
            }
            seen |= next;
            frontier = next;
        }
        false
    }

    /// Smallest edge subset cutting every s-path from `x` to `targets`.
    fn min_blocking(&self, x: usize, targets: u32, s: Speed) -> usize {
        let m = self.ends.len();
        for size in 0..=m {
            if subsets_of_size(m, size).any(|set| !self.reaches(set, x, targets, s)) {
                return size;
            }
        }
        m
    }
}

/// All `m`-bit masks with `size` bits set, in increasing order.
fn subsets_of_size(m: usize, size: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << m;
    let first = if size == 0 { 0u64 } else { (1u64 << size) - 1 };
    let mut cur = Some(first).filter(|&c| c < limit);
    std::iter::from_fn(move || {
        let out = cur?;
        cur = if out == 0 {
            None
        } else {
            let low = out & out.wrapping_neg();
            let ripple = out + low;
            let next = (((ripple ^ out) >> 2) / low) | ripple;
            Some(next).filter(|&c| c < limit)
        };
        Some(out as u32)
    })
}

/// `cut_{G,s}(x, y)` by trying edge subsets in increasing size.
pub fn brute_cut(g: &MultiGraph, x: VertexId, y: VertexId, s: Speed) -> Result<usize> {
    if x == y {
        return Err(Error::SameVertex(x));
    }
    let small = Small::new(g)?;
    let xi = *small.index.get(&x).ok_or(Error::UnknownVertex(x))?;
    let yi = *small.index.get(&y).ok_or(Error::UnknownVertex(y))?;
    Ok(small.min_blocking(xi, 1 << yi, s))
}

/// `supp_{G,s}(x, S)` straight from the definition: the smallest edge set
/// meeting every s-path from `x` into `S`.
pub fn brute_supp(g: &MultiGraph, s: Speed, x: VertexId, targets: &BTreeSet<VertexId>) -> Result<usize> {
    let small = Small::new(g)?;
    let xi = *small.index.get(&x).ok_or(Error::UnknownVertex(x))?;
    let mut mask = 0u32;
    for t in targets {
        mask |= 1 << small.index.get(t).ok_or(Error::UnknownVertex(*t))?;
    }
    if mask & (1 << xi) != 0 {
        return Err(Error::InvalidParameter("source inside the target set".into()));
    }
    Ok(small.min_blocking(xi, mask, s))
}

struct SuppTable {
    small: Small,
    s: Speed,
    memo: HashMap<(usize, u32), usize>,
}

impl SuppTable {
    fn new(g: &MultiGraph, s: Speed) -> Result<Self> {
        if g.vertex_count() > BRUTE_VERTEX_LIMIT {
            return Err(Error::SizeBudget {
                what: "layout enumeration",
                size: g.vertex_count(),
                limit: BRUTE_VERTEX_LIMIT,
            });
        }
        Ok(SuppTable {
            small: Small::new(g)?,
            s,
            memo: HashMap::new(),
        })
    }

    fn get(&mut self, x: usize, mask: u32) -> usize {
        if let Some(&v) = self.memo.get(&(x, mask)) {
            return v;
        }
        let v = self.small.min_blocking(x, mask, self.s);
        self.memo.insert((x, mask), v);
        v
    }
}

/// Minimum over all layouts of the maximum support, by dynamic programming
/// over layout prefixes (the set placed so far) with brute-force supports.
pub fn brute_degeneracy(g: &MultiGraph, s: Speed) -> Result<usize> {
    let mut table = SuppTable::new(g, s)?;
    let n = table.small.n;
    let full = (1u32 << n) - 1;
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for mask in 1..=full {
        for v in 0..n {
            if mask & (1 << v) == 0 {
                continue;
            }
            let prefix = mask & !(1 << v);
            let value = best[prefix as usize].max(table.get(v, prefix));
            best[mask as usize] = best[mask as usize].min(value);
        }
    }
    Ok(best[full as usize])
}

/// The maximal `(k, s)`-edge-hide-out by checking every vertex subset.
pub fn brute_max_hideout(g: &MultiGraph, s: Speed, k: usize) -> Result<BTreeSet<VertexId>> {
    let mut table = SuppTable::new(g, s)?;
    let n = table.small.n;
    let ids: Vec<VertexId> = table.small.index.keys().copied().collect();
    let mut union = 0u32;
    for set in 1u32..(1 << n) {
        let ok = (0..n)
            .filter(|&v| set & (1 << v) != 0)
            .all(|v| table.get(v, set & !(1 << v)) >= k);
        if ok {
            union |= set;
        }
    }
    Ok((0..n).filter(|&v| union & (1 << v) != 0).map(|v| ids[v]).collect())
}

/// Robber that knows the cop strategy and maximizes the number of moves
/// before capture, found by exhaustive search of the move graph.
pub struct AdversarialRobber {
    /// Moves the robber can still make from each vertex; `None` = forever.
    pub survival: BTreeMap<VertexId, Option<usize>>,
    speed: Speed,
    start: VertexId,
}

impl AdversarialRobber {
    pub fn new(g: &MultiGraph, s: Speed, cop: &CopStrategy) -> Self {
        let moves: BTreeMap<VertexId, BTreeSet<VertexId>> = g
            .vertices()
            .map(|v| (v, legal_moves(g, &cop.block(v), v, s)))
            .collect();
        // Longest path by DFS with cycle detection.
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done(Option<usize>),
        }
        fn visit(
            v: VertexId,
            moves: &BTreeMap<VertexId, BTreeSet<VertexId>>,
            marks: &mut BTreeMap<VertexId, Mark>,
        ) -> Option<usize> {
            match marks.get(&v) {
                Some(Mark::Done(x)) => return *x,
                Some(Mark::Open) => return None,
                None => {}
            }
            marks.insert(v, Mark::Open);
            let mut best = Some(0);
            for &u in &moves[&v] {
                best = match (best, visit(u, moves, marks)) {
                    (None, _) | (_, None) => None,
                    (Some(b), Some(x)) => Some(b.max(x + 1)),
                };
            }
            marks.insert(v, Mark::Done(best));
            best
        }
        let mut marks = BTreeMap::new();
        let survival: BTreeMap<_, _> = g.vertices().map(|v| (v, visit(v, &moves, &mut marks))).collect();
        let start = survival
            .iter()
            .max_by_key(|(v, x)| (x.map_or(usize::MAX, |x| x), std::cmp::Reverse(**v)))
            .map(|(v, _)| *v)
            .unwrap_or(VertexId(0));
        AdversarialRobber {
            survival,
            speed: s,
            start,
        }
    }

    /// Most rounds any robber survives from its best start; `None` = forever.
    pub fn longest_survival(&self) -> Option<usize> {
        self.survival[&self.start]
    }
}

impl EscapeRule for AdversarialRobber {
    fn start(&self) -> VertexId {
        self.start
    }

    fn respond(&self, g: &MultiGraph, blocked: &BTreeSet<EdgeId>, at: VertexId) -> VertexId {
        legal_moves(g, blocked, at, self.speed)
            .into_iter()
            .max_by_key(|u| (self.survival[u].map_or(usize::MAX, |x| x), std::cmp::Reverse(*u)))
            .unwrap_or(at)
    }
}

/// The cut-to-degeneracy reduction graph with named roles.
#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub graph: MultiGraph,
    pub names: BTreeMap<VertexId, String>,
    pub a: VertexId,
    /// Copies of `b`, one per copy of the input graph.
    pub b: Vec<VertexId>,
    pub c: Vec<VertexId>,
    /// Vertex sequence of each subdivided `c_i b_j` path, keyed by `(i, j)`.
    pub paths: BTreeMap<(usize, usize), Vec<VertexId>>,
    pub input: MultiGraph,
    pub input_a: VertexId,
    pub input_b: VertexId,
    pub k: usize,
    pub speed: u32,
}

impl GadgetInstance {
    /// `copies` = `k + n + 1`.
    pub fn copies(&self) -> usize {
        self.b.len()
    }

    /// Vertices `C ∪ B ∪ {a}`.
    pub fn core(&self) -> BTreeSet<VertexId> {
        let mut out: BTreeSet<_> = self.b.iter().chain(&self.c).copied().collect();
        out.insert(self.a);
        out
    }

    /// `v name` lines, one per vertex.
    pub fn role_map(&self) -> String {
        self.names.iter().map(|(v, n)| format!("{v} {n}\n")).collect()
    }
}

/// Builds the gadget: `k + n + 1` copies of `g` glued at `a`, a set `C` of
/// `n` new vertices, and a path of length `s` from every `c_i` to every
/// copy `b_j` of `b`.
pub fn gadget(g: &MultiGraph, a: VertexId, b: VertexId, k: usize, s: u32) -> Result<GadgetInstance> {
    if a == b {
        return Err(Error::SameVertex(a));
    }
    for v in [a, b] {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    if s < 2 {
        return Err(Error::InvalidParameter("gadget speed must be at least 2".into()));
    }
    let n = g.vertex_count();
    let copies = k + n + 1;
    let mut out = MultiGraph::new();
    let mut names = BTreeMap::new();
    let mut next = 0u32;
    let mut fresh = |out: &mut MultiGraph, names: &mut BTreeMap<VertexId, String>, name: String| {
        let v = VertexId(next);
        next += 1;
        out.add_vertex(v);
        names.insert(v, name);
        v
    };
    let hub = fresh(&mut out, &mut names, "a".into());
    let mut bs = Vec::with_capacity(copies);
    for j in 1..=copies {
        let mut map = BTreeMap::new();
        for v in g.vertices() {
            let img = if v == a {
                hub
            } else {
                fresh(&mut out, &mut names, format!("copy_{j}/orig_{v}"))
            };
            map.insert(v, img);
        }
        for (_, e) in g.edges() {
            out.add_edge(map[&e.lo], map[&e.hi])?;
        }
        bs.push(map[&b]);
    }
    let cs: Vec<_> = (1..=n)
        .map(|i| fresh(&mut out, &mut names, format!("c_{i}")))
        .collect();
    let mut paths = BTreeMap::new();
    for (i, &ci) in cs.iter().enumerate() {
        for (j, &bj) in bs.iter().enumerate() {
            let mut seq = vec![ci];
            for h in 1..s {
                seq.push(fresh(&mut out, &mut names, format!("p_{},{}_{h}", i + 1, j + 1)));
            }
            seq.push(bj);
            for w in seq.windows(2) {
                out.add_edge(w[0], w[1])?;
            }
            paths.insert((i + 1, j + 1), seq);
        }
    }
    Ok(GadgetInstance {
        graph: out,
        names,
        a: hub,
        b: bs,
        c: cs,
        paths,
        input: g.clone(),
        input_a: a,
        input_b: b,
        k,
        speed: s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    /// `m` endpoint pairs drawn uniformly with replacement, loops rejected.
    Random { n: u32, m: usize },
    /// Like `Random`, skipping pairs that would exceed degree `d`.
    Bounded { n: u32, m: usize, d: usize },
    /// Edge sums of `parts` random `A_k` members along degree-`<=k` vertices,
    /// `n` vertices in total.
    EdgeSum { k: usize, parts: usize, n: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub seed: u64,
}

impl fmt::Display for CorpusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CorpusKind::Random { n, m } => write!(f, "random:n={n},m={m}:{}", self.seed),
            CorpusKind::Bounded { n, m, d } => write!(f, "bounded:n={n},m={m},d={d}:{}", self.seed),
            CorpusKind::EdgeSum { k, parts, n } => {
                write!(f, "edgesum:k={k},parts={parts},n={n}:{}", self.seed)
            }
        }
    }
}

impl FromStr for CorpusSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidParameter(format!("corpus spec `{text}`: {m}"));
        let parts: Vec<&str> = text.trim().split(':').collect();
        let [kind, params, seed] = parts.as_slice() else {
            return Err(bad("expected kind:params:seed"));
        };
        let seed: u64 = seed.parse().map_err(|_| bad("bad seed"))?;
        let mut values = BTreeMap::new();
        for p in params.split(',').filter(|p| !p.is_empty()) {
            let (key, v) = p.split_once('=').ok_or_else(|| bad("params are key=value"))?;
            let v: u64 = v.parse().map_err(|_| bad("parameter values are integers"))?;
            values.insert(key, v);
        }
        let mut take = |key: &str| values.remove(key).ok_or_else(|| bad(&format!("missing `{key}`")));
        let kind = match *kind {
            "random" => CorpusKind::Random {
                n: take("n")? as u32,
                m: take("m")? as usize,
            },
            "bounded" => CorpusKind::Bounded {
                n: take("n")? as u32,
                m: take("m")? as usize,
                d: take("d")? as usize,
            },
            "edgesum" => CorpusKind::EdgeSum {
                k: take("k")? as usize,
                parts: take("parts")? as usize,
                n: take("n")? as u32,
            },
            _ => return Err(bad("kind must be random, bounded or edgesum")),
        };
        if let Some(key) = values.keys().next() {
            return Err(bad(&format!("unknown parameter `{key}`")));
        }
        Ok(CorpusSpec { kind, seed })
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: MultiGraph,
    /// Edge sums performed, in order (edge-sum kind only).
    pub trace: Vec<EdgeSumSpec>,
}

pub fn generate(spec: &CorpusSpec) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        CorpusKind::Random { n, m } => {
            if n < 2 && m > 0 {
                return Err(Error::InvalidParameter("edges need at least two vertices".into()));
            }
            let mut g = MultiGraph::with_vertices(n.max(1));
            for _ in 0..m {
                let (u, v) = random_pair(&mut rng, n);
                g.add_edge(u, v)?;
            }
            Ok(Generated { graph: g, trace: Vec::new() })
        }
        CorpusKind::Bounded { n, m, d } => {
            if n < 2 && m > 0 {
                return Err(Error::InvalidParameter("edges need at least two vertices".into()));
            }
            let mut g = MultiGraph::with_vertices(n.max(1));
            let mut attempts = 0;
            while g.edge_count() < m && attempts < 20 * m {
                attempts += 1;
                let (u, v) = random_pair(&mut rng, n);
                if g.degree(u)? < d && g.degree(v)? < d {
                    g.add_edge(u, v)?;
                }
            }
            Ok(Generated { graph: g, trace: Vec::new() })
        }
        CorpusKind::EdgeSum { k, parts, n } => edge_sum_corpus(&mut rng, k, parts, n),
    }
}

/// `count` random-multigraph specs with `2..=max_n` vertices and
/// `0..=max_m` edges, reproducible from `seed`.
pub fn random_specs(count: usize, max_n: u32, max_m: usize, seed: u64) -> Vec<CorpusSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| CorpusSpec {
            kind: CorpusKind::Random {
                n: rng.gen_range(2..=max_n),
                m: rng.gen_range(0..=max_m),
            },
            seed: rng.gen(),
        })
        .collect()
}

/// `count` edge-sum specs with `k` drawn from `ks`, up to four parts and
/// at most `max_n` vertices, reproducible from `seed`.
pub fn edge_sum_specs(count: usize, ks: &[usize], max_n: u32, seed: u64) -> Vec<CorpusSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let parts = rng.gen_range(1..=4usize);
            CorpusSpec {
                kind: CorpusKind::EdgeSum {
                    k: *ks.choose(&mut rng).expect("non-empty k list"),
                    parts,
                    n: rng.gen_range(parts as u32 + 1..=max_n),
                },
                seed: rng.gen(),
            }
        })
        .collect()
}

fn random_pair(rng: &mut ChaCha8Rng, n: u32) -> (VertexId, VertexId) {
    loop {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v {
            return (VertexId(u), VertexId(v));
        }
    }
}

/// One `A_k` building block before gluing.
struct Part {
    graph: MultiGraph,
    /// Gluing vertex toward the parent part.
    port: Option<VertexId>,
    /// Gluing vertices toward child parts, keyed by child index.
    sockets: BTreeMap<usize, VertexId>,
}

fn edge_sum_corpus(rng: &mut ChaCha8Rng, k: usize, parts: usize, n: u32) -> Result<Generated> {
    if k == 0 || parts == 0 || (n as usize) < parts {
        return Err(Error::InvalidParameter(
            "edge-sum corpus needs k >= 1, parts >= 1 and n >= parts".into(),
        ));
    }
    // Part tree and gluing degrees.
    let parent: Vec<Option<usize>> = (0..parts)
        .map(|j| (j > 0).then(|| rng.gen_range(0..j)))
        .collect();
    let glue: Vec<usize> = (0..parts).map(|_| rng.gen_range(1..=k)).collect();
    // Real vertex counts: one hub each, the rest spread at random.
    let mut sizes = vec![1u32; parts];
    for _ in 0..(n as usize - parts) {
        sizes[rng.gen_range(0..parts)] += 1;
    }
    // Real vertices take labels 0..n; gluing vertices come after.
    let mut next_real = 0u32;
    let mut next_glue = n;
    let mut next_edge = 0u32;
    let mut built = Vec::with_capacity(parts);
    for j in 0..parts {
        let mut g = MultiGraph::new();
        let real: Vec<VertexId> = (0..sizes[j])
            .map(|_| {
                let v = VertexId(next_real);
                next_real += 1;
                g.add_vertex(v);
                v
            })
            .collect();
        let hub = real[0];
        let mut load: BTreeMap<VertexId, usize> = real.iter().map(|&v| (v, 0)).collect();
        let mut add = |g: &mut MultiGraph, u: VertexId, v: VertexId| -> Result<()> {
            g.insert_edge(EdgeId(next_edge), u, v)?;
            next_edge += 1;
            Ok(())
        };
        // Body edges with non-hub degrees capped at k.
        for _ in 0..2 * real.len() {
            let open: Vec<VertexId> = real[1..].iter().copied().filter(|v| load[v] < k).collect();
            let Some(&u) = open.choose(rng) else { break };
            let others: Vec<VertexId> = real
                .iter()
                .copied()
                .filter(|&v| v != u && (v == hub || load[&v] < k))
                .collect();
            let Some(&w) = others.choose(rng) else { break };
            add(&mut g, u, w)?;
            *load.get_mut(&u).unwrap() += 1;
            *load.get_mut(&w).unwrap() += 1;
        }
        let mut glue_vertex = |g: &mut MultiGraph, degree: usize| -> Result<VertexId> {
            let z = VertexId(next_glue);
            next_glue += 1;
            g.add_vertex(z);
            for _ in 0..degree {
                let open: Vec<VertexId> = real
                    .iter()
                    .copied()
                    .filter(|&v| v == hub || load[&v] < k)
                    .collect();
                let &w = open.choose(rng).expect("the hub is always open");
                add(g, z, w)?;
                *load.get_mut(&w).unwrap() += 1;
            }
            Ok(z)
        };
        let port = match parent[j] {
            Some(_) => Some(glue_vertex(&mut g, glue[j])?),
            None => None,
        };
        let mut sockets = BTreeMap::new();
        for c in (0..parts).filter(|&c| parent[c] == Some(j)) {
            sockets.insert(c, glue_vertex(&mut g, glue[c])?);
        }
        built.push(Part {
            graph: g,
            port,
            sockets,
        });
    }
    let mut acc = built[0].graph.clone();
    let mut trace = Vec::with_capacity(parts - 1);
    for j in 1..parts {
        let p = parent[j].expect("non-root part");
        let socket = built[p].sockets[&j];
        let port = built[j].port.expect("non-root part");
        let right = built[j].graph.clone();
        let matching = acc
            .incident(socket)?
            .iter()
            .copied()
            .zip(right.incident(port)?.iter().copied())
            .collect();
        let spec = EdgeSumSpec {
            left: acc,
            left_vertex: socket,
            right,
            right_vertex: port,
            matching,
        };
        acc = edge_sum(&spec)?;
        trace.push(spec);
    }
    Ok(Generated { graph: acc, trace })
}
