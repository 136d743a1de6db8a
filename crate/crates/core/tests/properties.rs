use std::collections::BTreeSet;
use std::ops::ControlFlow;

use proptest::prelude::*;

use polyhom::algebra::{power, tuple_at, Polymorphism};
use polyhom::hom::{is_homomorphism, HomSolver, PartialMap};
use polyhom::iso::{automorphisms, canon, isomorphism};
use polyhom::relations::{
    build_wall, check_wall, is_partial_polymorphism, pp_evaluate, qfpp_definable_over, triviality_witness, Atom,
    PPFormula, PartialOperation, Relation,
};
use polyhom::{clique, cycle, find_hom, named, Graph, OddGirth, VertexSet};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        let pairs = n * n.saturating_sub(1) / 2;
        prop::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut g = Graph::empty(n).unwrap();
            let mut it = bits.into_iter();
            for j in 1..n {
                for i in 0..j {
                    if it.next().unwrap() {
                        g.add_edge(i, j).unwrap();
                    }
                }
            }
            g
        })
    })
}

fn graph_with_permutation(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let perm = Just((0..g.order()).collect::<Vec<_>>()).prop_shuffle();
        (Just(g), perm)
    })
}

/// Shortest odd cycle by trying every vertex subset of odd size.
fn brute_force_odd_girth(g: &Graph) -> OddGirth {
    let n = g.order();
    let mut best: Option<usize> = None;
    for mask in 0u32..1 << n {
        let k = mask.count_ones() as usize;
        if k < 3 || k.is_multiple_of(2) || best.is_some_and(|b| k >= b) {
            continue;
        }
        let sub = g.induced(VertexSet(mask as u16));
        if sub.is_connected() && (0..k).all(|v| sub.degree(v) == 2) {
            best = Some(k);
        }
    }
    best.map_or(OddGirth::Infinite, OddGirth::Finite)
}

fn all_tuples(k: usize, n: usize) -> Vec<Vec<usize>> {
    (0..k.pow(n as u32)).map(|i| tuple_at(i, k, n)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn graph6_round_trip(g in graph_strategy(12)) {
        let s = g.to_graph6();
        prop_assert_eq!(Graph::from_graph6(&s).unwrap(), g);
        prop_assert_eq!(Graph::from_edge_list(&g.to_edge_list()).unwrap(), g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn odd_girth_matches_brute_force(g in graph_strategy(8)) {
        prop_assert_eq!(g.odd_girth(), brute_force_odd_girth(&g));
        prop_assert_eq!(g.odd_girth() == OddGirth::Infinite, g.is_bipartite());
    }

    #[test]
    fn homomorphisms_with_pins_match_naive(
        g in graph_strategy(5),
        h in graph_strategy(4),
        pin_seed in prop::collection::vec((0usize..5, 0usize..4), 0..3),
    ) {
        let mut pins = PartialMap::empty(g.order());
        for (u, x) in pin_seed {
            if u < g.order() && x < h.order() {
                pins.set(u, x);
            }
        }
        let naive = all_tuples(h.order(), g.order()).into_iter().find(|m| {
            is_homomorphism(&g, &h, m) && (0..g.order()).all(|u| pins.get(u).is_none_or(|x| m[u] == x))
        });
        match find_hom(&g, &h, &pins) {
            Ok(found) => {
                prop_assert_eq!(found.is_some(), naive.is_some());
                if let Some(m) = found {
                    prop_assert!(is_homomorphism(&g, &h, &m));
                }
            }
            Err(_) => prop_assert!(naive.is_none()),
        }
    }

    #[test]
    fn pp_evaluation_matches_naive(
        h in graph_strategy(4),
        free in 1usize..3,
        existential in 0usize..3,
        raw in prop::collection::vec((any::<bool>(), 0usize..5, 0usize..5), 0..5),
    ) {
        let total = free + existential;
        let atoms: Vec<Atom> = raw
            .into_iter()
            .map(|(edge, i, j)| if edge { Atom::Edge(i % total, j % total) } else { Atom::Eq(i % total, j % total) })
            .collect();
        let f = PPFormula::new(free, existential, atoms.clone()).unwrap();
        let k = h.order();
        let mut naive = BTreeSet::new();
        for a in all_tuples(k, total) {
            let ok = atoms.iter().all(|atom| match *atom {
                Atom::Edge(i, j) => h.has_edge(a[i], a[j]),
                Atom::Eq(i, j) => a[i] == a[j],
            });
            if ok {
                naive.insert(a[..free].to_vec());
            }
        }
        let expected = Relation::new(k, free, naive).unwrap();
        prop_assert_eq!(pp_evaluate(&f, &h).unwrap(), expected);
    }

    #[test]
    fn qfpp_closure_matches_atom_subsets(
        h in graph_strategy(3).prop_filter("non-empty", |h| h.order() > 0),
        arity in 1usize..=3,
        picks in prop::collection::vec(any::<bool>(), 27),
    ) {
        let k = h.order();
        let tuples = all_tuples(k, arity);
        let r = Relation::new(k, arity, tuples.iter().zip(&picks).filter(|(_, &p)| p).map(|(t, _)| t.clone())).unwrap();
        let base = Relation::edges(&h);
        // every conjunction of E(x_i, x_j) and x_i = x_j atoms
        let mut atoms = Vec::new();
        for i in 0..arity {
            for j in 0..arity {
                atoms.push(Atom::Edge(i, j));
                if i < j {
                    atoms.push(Atom::Eq(i, j));
                }
            }
        }
        let definable = (0u32..1 << atoms.len()).any(|mask| {
            let chosen: Vec<Atom> = atoms.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, a)| *a).collect();
            let f = PPFormula::new(arity, 0, chosen).unwrap();
            pp_evaluate(&f, &h).unwrap() == r
        });
        prop_assert_eq!(qfpp_definable_over(&r, &base).unwrap(), definable);
    }

    #[test]
    fn partial_polymorphism_matches_matrix_enumeration(
        k in 2usize..4,
        arity in 1usize..3,
        m in 1usize..3,
        rel_picks in prop::collection::vec(any::<bool>(), 9),
        dom_picks in prop::collection::vec(any::<bool>(), 9),
        values in prop::collection::vec(0usize..3, 9),
    ) {
        let r = Relation::new(k, arity, all_tuples(k, arity).into_iter().zip(&rel_picks).filter(|(_, &p)| p).map(|(t, _)| t)).unwrap();
        let entries: Vec<(Vec<usize>, usize)> = all_tuples(k, m)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| dom_picks[*i])
            .map(|(i, t)| (t, values[i] % k))
            .collect();
        let f = PartialOperation::new(m, entries).unwrap();
        let columns: Vec<&Vec<usize>> = r.iter().collect();
        let mut naive = true;
        for choice in all_tuples(columns.len().max(1), m) {
            if columns.is_empty() {
                break;
            }
            let rows: Vec<Vec<usize>> = (0..arity).map(|i| choice.iter().map(|&c| columns[c][i]).collect()).collect();
            if rows.iter().all(|row| f.get(row).is_some()) {
                let image: Vec<usize> = rows.iter().map(|row| f.get(row).unwrap()).collect();
                naive &= r.contains(&image);
            }
        }
        prop_assert_eq!(is_partial_polymorphism(&f, &r), naive);
    }

    #[test]
    fn built_walls_are_walls(
        h in graph_strategy(4).prop_filter("non-empty", |h| h.order() > 0),
        arity in 1usize..4,
        picks in prop::collection::vec(any::<bool>(), 64),
    ) {
        let k = h.order();
        let r = Relation::new(k, arity, all_tuples(k, arity).into_iter().zip(&picks).filter(|(_, &p)| p).map(|(t, _)| t)).unwrap();
        if let Some(w) = build_wall(&r, &h) {
            prop_assert!(check_wall(&w, &r, &h).unwrap());
            if let Some(a) = triviality_witness(&w, &r, &h).unwrap() {
                prop_assert!(r.contains(&vec![a; arity]));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn canonical_form_is_relabelling_invariant((g, perm) in graph_with_permutation(10)) {
        let h = g.relabel(&perm);
        let (cg, ch) = (canon(&g), canon(&h));
        prop_assert_eq!(&cg.graph6, &ch.graph6);
        prop_assert_eq!(g.relabel(&cg.labeling), cg.graph());
        let iso = isomorphism(&g, &h).unwrap();
        prop_assert_eq!(g.relabel(&iso), h);
    }
}

/// Every binary polymorphism of `h`, as a table.
fn binary_polymorphisms(h: &Graph) -> Vec<Vec<usize>> {
    let p = power(h, 2).unwrap();
    let mut out = Vec::new();
    HomSolver::new(&p, h)
        .for_each(&PartialMap::empty(p.order()), |t| {
            out.push(t.to_vec());
            ControlFlow::Continue(())
        })
        .unwrap();
    out
}

#[test]
fn binary_polymorphisms_of_projective_cores() {
    // automorphism after projection, nothing else
    for (h, auts) in [(clique(3).unwrap(), 6), (cycle(5).unwrap(), 10), (named("c5p1").unwrap(), 10)] {
        let n = h.order();
        let polys = binary_polymorphisms(&h);
        assert_eq!(polys.len(), 2 * auts);
        let neq = Relation::neq(n);
        for table in polys {
            let f = Polymorphism::from_table(n, 2, table).unwrap();
            for a in neq.iter() {
                for b in neq.iter() {
                    assert!(neq.contains(&[f.apply(&[a[0], b[0]]), f.apply(&[a[1], b[1]])]));
                }
            }
        }
    }
}

#[test]
fn polymorphisms_are_closed_under_automorphisms() {
    let h = named("g2").unwrap();
    let f = Polymorphism::projection(h.order(), 3, 1);
    for sigma in automorphisms(&h) {
        assert!(f.then(&sigma).verify(&h));
    }
}
