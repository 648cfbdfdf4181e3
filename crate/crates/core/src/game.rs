//! The edge-blocking pursuit game.
//!
//! Each round the cops block `f(v)` for the robber's current vertex `v`, then
//! the robber moves along an s-path of the remaining graph or stays put. Staying
//! put is capture.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::cuts::supp;
use crate::degeneracy::{edge_degeneracy, verify_hideout, HideOut, Layout};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, MultiGraph, VertexId};
use crate::speed::Speed;

/// Positional cop strategy: the edges blocked while the robber stands at `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopStrategy {
    pub blocks: BTreeMap<VertexId, BTreeSet<EdgeId>>,
}

impl CopStrategy {
    /// Checks totality on `V(G)` and that every blocked edge exists.
    pub fn new(g: &MultiGraph, blocks: BTreeMap<VertexId, BTreeSet<EdgeId>>) -> Result<Self> {
        if blocks.keys().ne(g.vertices().collect::<Vec<_>>().iter()) {
            return Err(Error::InvalidParameter(
                "cop strategy must be defined on exactly the vertex set".into(),
            ));
        }
        for e in blocks.values().flatten() {
            if !g.contains_edge(*e) {
                return Err(Error::UnknownEdge(*e));
            }
        }
        Ok(CopStrategy { blocks })
    }

    pub fn cost(&self) -> usize {
        self.blocks.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    pub fn block(&self, at: VertexId) -> BTreeSet<EdgeId> {
        self.blocks.get(&at).cloned().unwrap_or_default()
    }
}

/// Robber side of the game: a start vertex and a positional response.
pub trait EscapeRule {
    fn start(&self) -> VertexId;
    /// Where to go after the cops blocked `blocked` while the robber is at `at`.
    fn respond(&self, g: &MultiGraph, blocked: &BTreeSet<EdgeId>, at: VertexId) -> VertexId;
}

/// Behaviour of a hide-out robber facing more blocked edges than its budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OverBudget {
    /// Stay put, as in the evasion proof.
    Concede,
    /// Still flee along a surviving path when one exists.
    MoveIfPossible,
}

/// Robber that flees into a hide-out along the first surviving s-path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobberStrategy {
    pub start: VertexId,
    pub haven: BTreeSet<VertexId>,
    /// Largest number of blocked edges the haven is guaranteed to survive.
    pub budget: usize,
    pub speed: Speed,
    pub policy: OverBudget,
}

impl EscapeRule for RobberStrategy {
    fn start(&self) -> VertexId {
        self.start
    }

    fn respond(&self, g: &MultiGraph, blocked: &BTreeSet<EdgeId>, at: VertexId) -> VertexId {
        if self.policy == OverBudget::Concede && blocked.len() > self.budget {
            return at;
        }
        let targets: BTreeSet<_> = self.haven.iter().copied().filter(|&v| v != at).collect();
        first_escape_path(g, blocked, at, &targets, self.speed)
            .and_then(|p| p.last().copied())
            .unwrap_or(at)
    }
}

fn surviving_neighbors<'a>(
    g: &'a MultiGraph,
    blocked: &'a BTreeSet<EdgeId>,
    v: VertexId,
) -> impl Iterator<Item = VertexId> + 'a {
    g.incident(v)
        .into_iter()
        .flatten()
        .filter(|e| !blocked.contains(e))
        .map(move |&e| g.endpoints(e).expect("incident edge").other(v))
}

/// The lexicographically first shortest s-path (as a vertex sequence after
/// `from`) from `from` to any vertex of `targets` in `G \ blocked`.
pub fn first_escape_path(
    g: &MultiGraph,
    blocked: &BTreeSet<EdgeId>,
    from: VertexId,
    targets: &BTreeSet<VertexId>,
    s: Speed,
) -> Option<Vec<VertexId>> {
    // Distance to the target set, then greedy descent by smallest id.
    let mut dist: BTreeMap<VertexId, usize> = targets.iter().map(|&t| (t, 0)).collect();
    let mut queue: VecDeque<_> = targets.iter().copied().collect();
    while let Some(u) = queue.pop_front() {
        if u == from {
            break;
        }
        let du = dist[&u];
        for w in surviving_neighbors(g, blocked, u) {
            if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(w) {
                slot.insert(du + 1);
                queue.push_back(w);
            }
        }
    }
    let total = *dist.get(&from)?;
    if total == 0 || s.limit().is_some_and(|l| total > l) {
        return None;
    }
    let mut path = Vec::with_capacity(total);
    let mut cur = from;
    while dist[&cur] > 0 {
        let want = dist[&cur] - 1;
        cur = surviving_neighbors(g, blocked, cur)
            .filter(|w| dist.get(w) == Some(&want))
            .min()
            .expect("a closer vertex exists on a shortest path");
        path.push(cur);
    }
    Some(path)
}

/// Vertices reachable from `from` by an s-path avoiding `blocked`.
pub fn legal_moves(
    g: &MultiGraph,
    blocked: &BTreeSet<EdgeId>,
    from: VertexId,
    s: Speed,
) -> BTreeSet<VertexId> {
    crate::cuts::s_distances(g, blocked, from, s).unwrap_or_default()
}

/// Cop that answers the robber at `v_i` with a minimum separator from
/// `v_i` to the layout prefix before it.
pub fn cop_from_layout(g: &MultiGraph, layout: &Layout) -> Result<CopStrategy> {
    let mut blocks = BTreeMap::new();
    let mut before = BTreeSet::new();
    for &v in &layout.order {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        blocks.insert(v, supp(g, layout.speed, v, &before)?.edges);
        before.insert(v);
    }
    CopStrategy::new(g, blocks)
        .map_err(|_| Error::InvalidLayout("ordering is not a permutation of the vertex set".into()))
}

/// Robber for a verified `(k+1, s)`-edge-hide-out.
pub fn robber_from_hideout(g: &MultiGraph, h: &HideOut, policy: OverBudget) -> Result<RobberStrategy> {
    verify_hideout(g, h)?;
    let start = *h
        .vertices
        .first()
        .ok_or_else(|| Error::InvalidCertificate("empty hide-out".into()))?;
    if h.k == 0 {
        return Err(Error::InvalidCertificate("hide-out parameter must be positive".into()));
    }
    Ok(RobberStrategy {
        start,
        haven: h.vertices.clone(),
        budget: h.k - 1,
        speed: h.speed,
        policy,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub blocked: BTreeSet<EdgeId>,
    pub position: VertexId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Captured { round: usize },
    Evaded { rounds: usize },
    /// The robber strategy proposed a vertex it cannot reach.
    Fault { round: usize, vertex: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameScenario {
    pub speed: Speed,
    pub start: VertexId,
    pub rounds: Vec<Round>,
    pub outcome: Outcome,
}

pub fn play(
    g: &MultiGraph,
    s: Speed,
    cop: &CopStrategy,
    robber: &dyn EscapeRule,
    max_rounds: usize,
) -> Result<GameScenario> {
    if max_rounds == 0 {
        return Err(Error::InvalidParameter("max_rounds must be at least 1".into()));
    }
    let start = robber.start();
    if !g.contains_vertex(start) {
        return Err(Error::UnknownVertex(start));
    }
    let mut rounds = Vec::new();
    let mut at = start;
    for i in 1..=max_rounds {
        let blocked = cop.block(at);
        let next = robber.respond(g, &blocked, at);
        if next != at && !legal_moves(g, &blocked, at, s).contains(&next) {
            return Ok(GameScenario {
                speed: s,
                start,
                rounds,
                outcome: Outcome::Fault { round: i, vertex: next },
            });
        }
        rounds.push(Round {
            blocked,
            position: next,
        });
        if next == at {
            return Ok(GameScenario {
                speed: s,
                start,
                rounds,
                outcome: Outcome::Captured { round: i },
            });
        }
        at = next;
    }
    Ok(GameScenario {
        speed: s,
        start,
        rounds,
        outcome: Outcome::Evaded { rounds: max_rounds },
    })
}

impl GameScenario {
    /// Re-checks every round against the cop strategy and the move rule.
    pub fn validate(&self, g: &MultiGraph, cop: &CopStrategy) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCertificate(m));
        let mut at = self.start;
        for (i, r) in self.rounds.iter().enumerate() {
            if r.blocked != cop.block(at) {
                return bad(format!("round {}: blocked set differs from the cop strategy", i + 1));
            }
            if r.position != at && !legal_moves(g, &r.blocked, at, self.speed).contains(&r.position) {
                return bad(format!("round {}: illegal move to {}", i + 1, r.position));
            }
            let last = i + 1 == self.rounds.len();
            if r.position == at && !last {
                return bad(format!("round {}: play continued after capture", i + 1));
            }
            at = r.position;
        }
        let n = self.rounds.len();
        match self.outcome {
            Outcome::Captured { round } if round == n && n > 0 => {
                let prev = if n == 1 { self.start } else { self.rounds[n - 2].position };
                if prev != self.rounds[n - 1].position {
                    return bad("capture recorded but the robber moved".into());
                }
            }
            Outcome::Evaded { rounds } if rounds == n => {
                if n > 0 && self.rounds[n - 1].position == self.position_before(n) {
                    return bad("evasion recorded but the robber stayed".into());
                }
            }
            Outcome::Fault { round, .. } if round == n + 1 => {}
            _ => return bad("outcome does not match the rounds".into()),
        }
        Ok(())
    }

    fn position_before(&self, round: usize) -> VertexId {
        if round <= 1 {
            self.start
        } else {
            self.rounds[round - 2].position
        }
    }

    pub fn trace(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GameScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rounds.iter().enumerate() {
            let mut ids = String::new();
            for (j, e) in r.blocked.iter().enumerate() {
                if j > 0 {
                    ids.push(',');
                }
                let _ = write!(ids, "{e}");
            }
            writeln!(f, "round {}: blocked=[{ids}] robber={}", i + 1, r.position)?;
        }
        match self.outcome {
            Outcome::Captured { round } => writeln!(f, "outcome: captured@{round}"),
            Outcome::Evaded { rounds } => writeln!(f, "outcome: evaded@{rounds}"),
            Outcome::Fault { .. } => writeln!(f, "outcome: fault"),
        }
    }
}

/// `cc_s(G)`, which equals the s-edge-degeneracy.
pub fn capture_cost(g: &MultiGraph, s: Speed) -> Result<usize> {
    Ok(edge_degeneracy(g, s)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneracy::maximal_hideout;
    use crate::multigraph::families::*;
    use crate::multigraph::vset;

    const INF: Speed = Speed::Unbounded;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    fn layout(g: &MultiGraph, ids: &[u32]) -> Layout {
        Layout::from_order(g, INF, ids.iter().copied().map(VertexId).collect()).unwrap()
    }

    struct Fixed(VertexId);

    impl EscapeRule for Fixed {
        fn start(&self) -> VertexId {
            self.0
        }
        fn respond(&self, g: &MultiGraph, b: &BTreeSet<EdgeId>, at: VertexId) -> VertexId {
            legal_moves(g, b, at, INF).into_iter().next().unwrap_or(at)
        }
    }

    #[test]
    fn cop_from_layout_examples() {
        let t = theta(3);
        let cop = cop_from_layout(&t, &layout(&t, &[0, 1])).unwrap();
        assert!(cop.block(v(0)).is_empty());
        assert_eq!(cop.block(v(1)).len(), 3);
        assert_eq!(cop.cost(), 3);

        let single = MultiGraph::with_vertices(1);
        assert_eq!(cop_from_layout(&single, &layout(&single, &[0])).unwrap().cost(), 0);

        let p = path(3);
        let cop = cop_from_layout(&p, &layout(&p, &[0, 2, 1])).unwrap();
        assert_eq!(cop.cost(), 2);
        assert_eq!(cop.block(v(1)).len(), 2);
    }

    #[test]
    fn hideout_robber_examples() {
        let t = theta(3);
        let h = maximal_hideout(&t, INF, 3).unwrap();
        let r = robber_from_hideout(&t, &h, OverBudget::Concede).unwrap();
        assert_eq!(r.start, v(0));
        let all: BTreeSet<_> = t.edge_ids().collect();
        assert_eq!(r.respond(&t, &all, v(0)), v(0));
        let two: BTreeSet<_> = all.iter().copied().take(2).collect();
        assert_eq!(r.respond(&t, &two, v(0)), v(1));

        let mut fake = h.clone();
        fake.k = 4;
        assert!(robber_from_hideout(&t, &fake, OverBudget::Concede).is_err());
    }

    #[test]
    fn play_examples() {
        let t = theta(3);
        let cop = cop_from_layout(&t, &layout(&t, &[0, 1])).unwrap();
        let game = play(&t, INF, &cop, &Fixed(v(1)), 20).unwrap();
        assert_eq!(game.outcome, Outcome::Captured { round: 1 });
        game.validate(&t, &cop).unwrap();
        assert_eq!(game.trace(), "round 1: blocked=[0,1,2] robber=1\noutcome: captured@1\n");

        // Any cost-2 cop loses to the hide-out robber.
        let h = maximal_hideout(&t, INF, 3).unwrap();
        let robber = robber_from_hideout(&t, &h, OverBudget::MoveIfPossible).unwrap();
        let weak = CopStrategy::new(
            &t,
            BTreeMap::from([(v(0), vset_e(&[0, 1])), (v(1), vset_e(&[1, 2]))]),
        )
        .unwrap();
        let game = play(&t, INF, &weak, &robber, 20).unwrap();
        assert_eq!(game.outcome, Outcome::Evaded { rounds: 20 });
        game.validate(&t, &weak).unwrap();

        let single = MultiGraph::with_vertices(1);
        let cop = CopStrategy::new(&single, BTreeMap::from([(v(0), BTreeSet::new())])).unwrap();
        let game = play(&single, INF, &cop, &Fixed(v(0)), 5).unwrap();
        assert_eq!(game.outcome, Outcome::Captured { round: 1 });
    }

    fn vset_e(ids: &[u32]) -> BTreeSet<EdgeId> {
        ids.iter().copied().map(EdgeId).collect()
    }

    #[test]
    fn cycle_hideout_evades_cost_one() {
        let c4 = cycle(4);
        let h = maximal_hideout(&c4, INF, 2).unwrap();
        assert_eq!(h.vertices, vset([0, 1, 2, 3]));
        let robber = robber_from_hideout(&c4, &h, OverBudget::Concede).unwrap();
        for e in 0..4 {
            let blocks = c4.vertices().map(|x| (x, vset_e(&[(e + x.0) % 4]))).collect();
            let cop = CopStrategy::new(&c4, blocks).unwrap();
            let game = play(&c4, INF, &cop, &robber, 40).unwrap();
            assert_eq!(game.outcome, Outcome::Evaded { rounds: 40 });
        }
    }

    #[test]
    fn faults_are_reported() {
        struct Teleport;
        impl EscapeRule for Teleport {
            fn start(&self) -> VertexId {
                VertexId(0)
            }
            fn respond(&self, _: &MultiGraph, _: &BTreeSet<EdgeId>, _: VertexId) -> VertexId {
                VertexId(2)
            }
        }
        let p = path(3);
        let cop = cop_from_layout(&p, &layout(&p, &[0, 1, 2])).unwrap();
        let game = play(&p, Speed::Finite(1), &cop, &Teleport, 5).unwrap();
        assert_eq!(game.outcome, Outcome::Fault { round: 1, vertex: v(2) });
        game.validate(&p, &cop).unwrap();
        assert!(game.trace().ends_with("outcome: fault\n"));
    }

    #[test]
    fn first_path_prefers_small_ids() {
        // 0 reaches 3 through 1 or 2; both shortest.
        let g = MultiGraph::from_edges(4, &[(0, 2), (2, 3), (0, 1), (1, 3)]).unwrap();
        let p = first_escape_path(&g, &BTreeSet::new(), v(0), &vset([3]), INF).unwrap();
        assert_eq!(p, vec![v(1), v(3)]);
        assert!(first_escape_path(&g, &BTreeSet::new(), v(0), &vset([3]), Speed::Finite(1)).is_none());
    }

    #[test]
    fn capture_cost_examples() {
        assert_eq!(capture_cost(&theta(4), Speed::Finite(2)).unwrap(), 4);
        assert_eq!(capture_cost(&path(5), INF).unwrap(), 1);
        assert_eq!(capture_cost(&complete(4), INF).unwrap(), 3);
    }
}
