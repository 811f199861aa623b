use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use zn_complex::complex::SimplicialComplex;
use zn_complex::presentation::{
    abelian_images, critical_collection, greedy_hyperforest, hyperforest_violation, maximal_tight_sets, minimize,
    replace_subspace, standard_zn, subset_dimension, AbelianMap, Presentation, StandardStyle, Word,
};
use zn_complex::sg::{prune_min_degree, Hypergraph3};

fn inside(edges: &[[usize; 3]], mask: u32) -> usize {
    edges.iter().filter(|e| e.iter().all(|&v| mask >> v & 1 == 1)).count()
}

fn arb_edges(max_v: usize, max_e: usize) -> impl Strategy<Value = (usize, Vec<[usize; 3]>)> {
    (3..=max_v).prop_flat_map(move |k| {
        let edge = proptest::sample::subsequence((0..k).collect::<Vec<_>>(), 3).prop_map(|v| [v[0], v[1], v[2]]);
        (Just(k), proptest::collection::vec(edge, 0..=max_e))
    })
}

proptest! {
    #[test]
    fn violation_witness_is_dense((k, edges) in arb_edges(8, 10)) {
        let brute = (1u32..1 << k).any(|m| m.count_ones() >= 2 && inside(&edges, m) >= m.count_ones() as usize);
        match hyperforest_violation(k, &edges) {
            None => prop_assert!(!brute),
            Some(w) => {
                let mask: u32 = w.iter().map(|&v| 1 << v).sum();
                prop_assert!(inside(&edges, mask) >= w.len());
            }
        }
    }

    #[test]
    fn greedy_forest_is_maximal((k, edges) in arb_edges(8, 12)) {
        let chosen = greedy_hyperforest(k, &edges);
        let forest: Vec<[usize; 3]> = chosen.iter().map(|&i| edges[i]).collect();
        prop_assert!(hyperforest_violation(k, &forest).is_none());
        for i in (0..edges.len()).filter(|i| !chosen.contains(i)) {
            let mut more = forest.clone();
            more.push(edges[i]);
            prop_assert!(hyperforest_violation(k, &more).is_some());
        }
    }

    #[test]
    fn tight_sets_are_disjoint_and_tight((k, edges) in arb_edges(8, 8)) {
        let chosen = greedy_hyperforest(k, &edges);
        let forest: Vec<[usize; 3]> = chosen.iter().map(|&i| edges[i]).collect();
        let sets = maximal_tight_sets(k, &forest);
        let mut seen = BTreeSet::new();
        for t in &sets {
            let mask: u32 = t.iter().map(|&v| 1 << v).sum();
            prop_assert_eq!(inside(&forest, mask) + 1, t.len());
            for v in t {
                prop_assert!(seen.insert(*v));
            }
        }
    }

    #[test]
    fn critical_collection_members_are_critical((k, edges) in arb_edges(7, 8)) {
        let names: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
        let rels: Vec<Word> = edges.iter().map(|e| Word::new(e.iter().map(|&g| (g, 1)))).collect();
        let p = Presentation::new(names, rels).unwrap();
        let phi = AbelianMap::new(2, (0..k).map(|i| vec![BigInt::from(1), BigInt::from(i)]).collect()).unwrap();
        let forest = greedy_hyperforest(k, &edges);
        for s in critical_collection(&p, &phi, &forest).unwrap() {
            let mask: u32 = s.iter().map(|&v| 1 << v).sum();
            let sub: Vec<[usize; 3]> = forest.iter().map(|&i| edges[i]).collect();
            prop_assert_eq!(inside(&sub, mask) + 1, s.len());
        }
    }

    #[test]
    fn minimize_keeps_the_group(n in 1usize..=5, extra in proptest::collection::vec((0usize..64, 0usize..64, prop::bool::ANY), 0..4)) {
        let base = standard_zn(n, StandardStyle::Intro3);
        let mut gens = base.generators().to_vec();
        let mut rels = base.relations().to_vec();
        for (x, y, square) in extra {
            let t = gens.len();
            let terms = if square { vec![(t, -1), (x % t, 2)] } else { vec![(t, -1), (x % t, 1), (y % t, 1)] };
            gens.push(format!("x{t}"));
            rels.push(Word::new(terms));
        }
        let p = Presentation::new(gens, rels).unwrap();
        let (q, phi, _) = minimize(&p).unwrap();
        prop_assert!(q.abelian_invariants().is_free_of_rank(n));
        prop_assert!(phi.check(&q).is_ok());
        // no zero or collinear generators survive
        for g in 0..q.generator_count() {
            prop_assert!(!phi.is_zero(g));
            for h in g + 1..q.generator_count() {
                prop_assert_eq!(subset_dimension(&phi, &[g, h].into()).unwrap(), 2);
            }
        }
    }

    #[test]
    fn subspace_drops_rank_by_dimension(n in 2usize..=5, pick in proptest::collection::vec(prop::bool::ANY, 15)) {
        let p = standard_zn(n, StandardStyle::Intro3);
        let phi = abelian_images(&p).unwrap();
        let subset: BTreeSet<usize> = (0..p.generator_count()).filter(|&g| pick[g % pick.len()]).collect();
        let d = subset_dimension(&phi, &subset).unwrap();
        let out = replace_subspace(&p, &phi, &subset).unwrap();
        prop_assert_eq!(out.dimension, d);
        prop_assert!(out.presentation.abelian_invariants().is_free_of_rank(n - d));
    }

    #[test]
    fn pruned_graph_has_min_degree(edges in proptest::collection::vec((0usize..9, 0usize..9, 0usize..9), 0..20), lam in 1i64..5) {
        let edges: Vec<[usize; 3]> = edges.into_iter().filter(|(a, b, c)| a != b && b != c && a != c).map(|(a, b, c)| [a, b, c]).collect();
        let h = Hypergraph3::new(9, edges.clone()).unwrap();
        let lambda = BigRational::from_integer(lam.into());
        let pr = prune_min_degree(&h, &lambda).unwrap();
        for &v in &pr.vertices {
            let d = pr.edges.iter().filter(|&&e| edges[e].contains(&v)).count() as i64;
            prop_assert!(d >= lam);
        }
        for &e in &pr.edges {
            prop_assert!(edges[e].iter().all(|v| pr.vertices.contains(v)));
        }
    }

    #[test]
    fn scx_round_trip(tris in proptest::collection::vec(proptest::sample::subsequence((0..7).collect::<Vec<usize>>(), 3), 1..8)) {
        let text = {
            let used: BTreeSet<usize> = tris.iter().flatten().copied().collect();
            let relabel: Vec<usize> = (0..7).map(|v| used.range(..v).count()).collect();
            let mut s = format!("scx 1\nv {}\n", used.len());
            for t in &tris {
                s.push_str(&format!("{} {} {}\n", relabel[t[0]], relabel[t[1]], relabel[t[2]]));
            }
            s
        };
        let c = SimplicialComplex::from_scx(&text).unwrap();
        let back = SimplicialComplex::from_scx(&c.to_scx()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(c.euler_characteristic(), c.homology_upto(2).unwrap().iter().enumerate()
            .map(|(k, h)| if k % 2 == 0 { h.betti as i64 } else { -(h.betti as i64) }).sum::<i64>());
    }
}

#[test]
fn intro_collection_matches_planes() {
    let p = standard_zn(4, StandardStyle::Intro3);
    let phi = abelian_images(&p).unwrap();
    let all: Vec<usize> = (0..p.relation_count()).collect();
    let c = critical_collection(&p, &phi, &all).unwrap();
    assert_eq!(c.len(), 6);
    assert!(c.iter().all(|s| s.len() == 3));
}
