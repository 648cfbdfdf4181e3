use std::collections::BTreeSet;

use edgeadm::carving::{build_carving, light_leaf_path, refute_hideout};
use edgeadm::cuts::{min_s_cut, supp};
use edgeadm::degeneracy::{
    edge_degeneracy, layout_degeneracy, maximal_hideout, parse_hideout, parse_layout,
    verify_hideout, verify_layout,
};
use edgeadm::game::{cop_from_layout, play, robber_from_hideout, OverBudget, Outcome};
use edgeadm::multigraph::is_isomorphic_small;
use edgeadm::structure::{decompose, edge_sum, is_almost_bounded, recompose, theta_free, TreePartition};
use edgeadm::testkit::{
    brute_cut, brute_max_hideout, brute_supp, gadget, generate, CorpusKind, CorpusSpec,
};
use edgeadm::{parse_graph, MultiGraph, Speed, VertexId};
use proptest::prelude::*;

fn speed() -> impl Strategy<Value = Speed> {
    prop_oneof![
        Just(Speed::Finite(1)),
        Just(Speed::Finite(2)),
        Just(Speed::Finite(3)),
        Just(Speed::Finite(4)),
        Just(Speed::Unbounded),
    ]
}

fn small_graph(max_n: u32, max_m: usize) -> impl Strategy<Value = MultiGraph> {
    (2..=max_n, 0..=max_m, any::<u64>()).prop_map(|(n, m, seed)| {
        generate(&CorpusSpec {
            kind: CorpusKind::Random { n, m },
            seed,
        })
        .unwrap()
        .graph
    })
}

fn free_graph() -> impl Strategy<Value = (usize, edgeadm::testkit::Generated)> {
    (2..=3usize, 1..=4usize, 0..=6u32, any::<u64>()).prop_map(|(k, parts, extra, seed)| {
        let spec = CorpusSpec {
            kind: CorpusKind::EdgeSum {
                k,
                parts,
                n: parts as u32 + extra,
            },
            seed,
        };
        (k, generate(&spec).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn supp_matches_definition(g in small_graph(7, 12), s in speed(), bits in any::<u32>(), pick in any::<u32>()) {
        let vs: Vec<VertexId> = g.vertices().collect();
        let x = vs[pick as usize % vs.len()];
        let targets: BTreeSet<_> = vs.iter().enumerate()
            .filter(|&(i, &v)| v != x && bits & (1 << i) != 0)
            .map(|(_, &v)| v)
            .collect();
        let fast = supp(&g, s, x, &targets).unwrap();
        prop_assert_eq!(fast.size(), brute_supp(&g, s, x, &targets).unwrap());
        prop_assert!(fast.blocks(&g).unwrap());
    }

    #[test]
    fn cut_matches_brute_at_every_speed(g in small_graph(7, 12), s in speed()) {
        let x = VertexId(0);
        let y = VertexId(g.vertex_count() as u32 - 1);
        prop_assert_eq!(min_s_cut(&g, x, y, s).unwrap().size(), brute_cut(&g, x, y, s).unwrap());
    }

    #[test]
    fn certificates_survive_text_round_trip(g in small_graph(7, 12), s in speed()) {
        let d = edge_degeneracy(&g, s).unwrap();
        let (layout, k) = parse_layout(&d.layout.to_text()).unwrap();
        prop_assert_eq!(&layout, &d.layout);
        prop_assert_eq!(k, d.value);
        verify_layout(&g, &layout, Some(k)).unwrap();
        prop_assert_eq!(layout_degeneracy(&g, s, &layout.order).unwrap(), d.value);
        if let Some(h) = &d.hideout {
            let back = parse_hideout(&h.to_text()).unwrap();
            prop_assert_eq!(&back, h);
            verify_hideout(&g, &back).unwrap();
        }
    }

    #[test]
    fn maximal_hideout_matches_subset_search(g in small_graph(6, 10), s in speed(), k in 1..4usize) {
        let h = maximal_hideout(&g, s, k).unwrap();
        prop_assert_eq!(h.vertices, brute_max_hideout(&g, s, k).unwrap());
    }

    #[test]
    fn lifting_never_raises_admissibility(g in small_graph(7, 12), picks in proptest::collection::vec(any::<(u16, u16)>(), 1..5)) {
        let before = edge_degeneracy(&g, Speed::Unbounded).unwrap().value;
        let mut h = g.clone();
        for (a, b) in picks {
            let ids: Vec<_> = h.edge_ids().collect();
            if ids.len() < 2 {
                break;
            }
            let (e, f) = (ids[a as usize % ids.len()], ids[b as usize % ids.len()]);
            if let Ok((next, _)) = h.lift(e, f) {
                h = next;
            }
        }
        prop_assert!(edge_degeneracy(&h, Speed::Unbounded).unwrap().value <= before);
    }

    #[test]
    fn layout_cop_traces_revalidate(g in small_graph(7, 12), s in speed()) {
        let d = edge_degeneracy(&g, s).unwrap();
        let cop = cop_from_layout(&g, &d.layout).unwrap();
        prop_assert!(cop.cost() <= d.value);
        if let Some(h) = &d.hideout {
            // The hide-out robber beats the truncated cop.
            let weak = edgeadm::game::CopStrategy::new(
                &g,
                g.vertices().map(|v| (v, cop.block(v).into_iter().take(d.value - 1).collect())).collect(),
            ).unwrap();
            let robber = robber_from_hideout(&g, h, OverBudget::MoveIfPossible).unwrap();
            let game = play(&g, s, &weak, &robber, 10 * g.vertex_count()).unwrap();
            game.validate(&g, &weak).unwrap();
            let evaded = matches!(game.outcome, Outcome::Evaded { .. });
            prop_assert!(evaded);
            // Against the full cop the same robber is caught.
            let game = play(&g, s, &cop, &robber, 10 * g.vertex_count()).unwrap();
            game.validate(&g, &cop).unwrap();
            let caught = matches!(game.outcome, Outcome::Captured { round } if round <= g.vertex_count());
            prop_assert!(caught);
        }
    }

    #[test]
    fn generated_edge_sums_decompose_and_recompose((k, gen) in free_graph()) {
        let g = &gen.graph;
        prop_assert!(theta_free(g, k).unwrap().is_free());
        // Replaying the trace reproduces the graph.
        let mut acc = gen.trace.first().map(|s| s.left.clone()).unwrap_or_else(|| g.clone());
        for spec in &gen.trace {
            let mut spec = spec.clone();
            spec.left = acc;
            acc = edge_sum(&spec).unwrap();
        }
        prop_assert_eq!(&acc, g);
        let d = decompose(g, k).unwrap();
        let p = d.partition().unwrap();
        prop_assert!(p.adhesion() <= k);
        for t in 0..p.node_count() {
            prop_assert!(is_almost_bounded(&p.torso(t).unwrap().graph, k));
        }
        let back = recompose(p).unwrap();
        prop_assert!(back.edges().eq(g.edges()));
        let reparsed = TreePartition::parse(g.clone(), &p.to_text()).unwrap();
        prop_assert_eq!(&reparsed, p);
    }

    #[test]
    fn carvings_audit_and_refute((k, gen) in free_graph(), bits in any::<u16>()) {
        let g = &gen.graph;
        let set: BTreeSet<VertexId> = g.vertices().filter(|v| bits & (1 << (v.0 % 16)) != 0).collect();
        prop_assume!(set.len() >= 2);
        let c = build_carving(g, k, &set).unwrap();
        prop_assert!(c.audit(g).unwrap());
        for leaf in c.leaves() {
            prop_assert!(c.classes[leaf].intersection(&set).count() <= 1);
        }
        let path = light_leaf_path(g, &c, k).unwrap();
        prop_assert!(c.cut(g, path.leaf).unwrap().len() < 2 * k);
        let w = refute_hideout(g, k, &set).unwrap();
        prop_assert!(w.verify(g, &set, k).unwrap());
        prop_assert!(maximal_hideout(g, Speed::Unbounded, 2 * k).unwrap().is_empty());
    }
}

#[test]
fn graph_files_round_trip() {
    let g = generate(&"random:n=7,m=12:3".parse().unwrap()).unwrap().graph;
    let back = parse_graph(&g.to_graph_file().unwrap()).unwrap();
    assert_eq!(back, g);
    assert!(is_isomorphic_small(&back, &g).unwrap());
}

#[test]
fn gadget_size_and_roles() {
    for (n, pairs, k, s) in [(2u32, vec![(0u32, 1u32)], 1usize, 3u32), (3, vec![(0, 1), (1, 2)], 0, 2), (3, vec![], 1, 4)] {
        let g = MultiGraph::from_edges(n, &pairs).unwrap();
        let inst = gadget(&g, VertexId(0), VertexId(n - 1), k, s).unwrap();
        let (n, copies, s) = (n as usize, k + n as usize + 1, s as usize);
        assert_eq!(
            inst.graph.vertex_count(),
            (n - 1) * copies + 1 + n + n * copies * (s - 1)
        );
        assert_eq!(inst.b.len(), copies);
        assert_eq!(inst.c.len(), n);
        for &c in &inst.c {
            assert_eq!(inst.graph.degree(c).unwrap(), copies);
        }
        for p in inst.paths.values() {
            assert_eq!(p.len(), s + 1);
        }
        for (i, &c) in inst.c.iter().enumerate() {
            assert_eq!(inst.names[&c], format!("c_{}", i + 1));
        }
        assert!(inst.core().contains(&inst.a));
    }
}

#[test]
fn witness_endpoints_are_heavy() {
    let g = MultiGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let w = decompose(&g, 2).unwrap().witness().cloned().unwrap();
    w.verify(&g, 2).unwrap();
    for v in [w.x, w.y] {
        assert!(g.degree(v).unwrap() >= 3);
    }
}
