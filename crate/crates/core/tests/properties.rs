use std::cmp::Ordering;

use coxpander::diagram::{parse_diagram, AdornedDiagram, Label};
use coxpander::graph::{complete, cycle, Graph};
use coxpander::group::{generator_matrices, mat_mul, transpose};
use coxpander::numring::{ModularRing, RealCyclotomicRing, RingElement};
use coxpander::products::{cartesian, cartesian_spectrum, has_odd_cycle, tensor, tensor_spectrum};
use coxpander::quotient::modular_generators;
use coxpander::numring::ModulusKind;
use coxpander::skeleton::{iwalk_graph, regularity_vector};
use coxpander::spectral::{cheeger_bounds, dense_spectrum, exact_cheeger, second_eigenvalue};
use num_bigint::BigInt;
use proptest::prelude::*;

fn element(ring: &RealCyclotomicRing, coords: &[i64]) -> RingElement {
    let mut c: Vec<BigInt> = coords.iter().map(|&x| BigInt::from(x)).collect();
    c.resize(ring.degree(), BigInt::from(0));
    c.truncate(ring.degree());
    ring.element(c)
}

fn conductor() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 4, 5, 7, 8, 9, 12, 15])
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13, 29, 31, 101])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_a_ring_homomorphism(
        l in conductor(),
        p in prime(),
        a in prop::collection::vec(-50i64..50, 8),
        b in prop::collection::vec(-50i64..50, 8),
        full in any::<bool>(),
    ) {
        let ring = RealCyclotomicRing::new(l);
        let m = if full { ModularRing::full(&ring, p).unwrap() } else { ModularRing::residue_field(&ring, p).unwrap() };
        let (x, y) = (element(&ring, &a), element(&ring, &b));
        prop_assert_eq!(m.reduce(&ring.mul(&x, &y)), m.mul(&m.reduce(&x), &m.reduce(&y)));
        prop_assert_eq!(m.reduce(&ring.add(&x, &y)), m.add(&m.reduce(&x), &m.reduce(&y)));
        prop_assert_eq!(m.reduce(&ring.neg(&x)), m.neg(&m.reduce(&x)));
    }

    #[test]
    fn numeric_embedding_is_multiplicative(
        l in conductor(),
        a in prop::collection::vec(-20i64..20, 8),
        b in prop::collection::vec(-20i64..20, 8),
    ) {
        let ring = RealCyclotomicRing::new(l);
        let (x, y) = (element(&ring, &a), element(&ring, &b));
        let (ex, ey) = (ring.eval(&x), ring.eval(&y));
        let exy = ring.eval(&ring.mul(&x, &y));
        prop_assert!((exy - ex * ey).abs() <= 1e-9 * (1.0 + (ex * ey).abs()));
        let want = if ex > 1e-6 { Ordering::Greater } else if ex < -1e-6 { Ordering::Less } else { ring.sign(&x) };
        prop_assert_eq!(ring.sign(&x), want);
    }
}

fn random_diagram(labels: &[u32]) -> AdornedDiagram {
    let l: Vec<Label> = labels.iter().map(|&m| if m == 0 { Label::Infinite } else { Label::Finite(m) }).collect();
    AdornedDiagram::path(&l, &[0])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reflections_preserve_the_form(labels in prop::collection::vec(prop::sample::select(vec![2u32, 3, 4, 5, 6, 7]), 1..4)) {
        let d = random_diagram(&labels);
        let (gram, gens) = generator_matrices(&d);
        let r = &gram.ring;
        for m in &gens {
            let sq = mat_mul(r, m, m);
            for (i, row) in sq.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    prop_assert_eq!(x.clone(), r.from_int((i == j) as i64));
                }
            }
            let back = mat_mul(r, &mat_mul(r, &transpose(m), &gram.entries), m);
            prop_assert_eq!(back, gram.entries.clone());
        }
    }

    #[test]
    fn reduced_generators_are_isometric_involutions(
        labels in prop::collection::vec(prop::sample::select(vec![0u32, 3, 4, 5, 7]), 1..4),
        p in prime(),
    ) {
        // the constructor checks M² = I and Mᵀ(2B̄)M = 2B̄ in the reduced ring
        let d = random_diagram(&labels);
        prop_assert!(modular_generators(&d, p, ModulusKind::ResidueField).is_ok());
        prop_assert!(modular_generators(&d, p, ModulusKind::Full).is_ok());
    }
}

/// Circulant graph on Z/n with connection set ±S.
fn circulant(n: usize, steps: &[usize]) -> Graph {
    let mut edges = Vec::new();
    for v in 0..n {
        for &s in steps {
            edges.push((v, (v + s) % n));
        }
    }
    Graph::from_edges(n, edges)
}

fn circulant_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (6usize..max_n, prop::collection::btree_set(1usize..6, 1..3)).prop_map(|(n, s)| {
        let steps: Vec<usize> = s.into_iter().filter(|&x| 2 * x < n).collect();
        circulant(n, if steps.is_empty() { &[1] } else { &steps })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn relabelling_preserves_invariants((g, perm) in circulant_strategy(20).prop_flat_map(|g| { let n = g.n(); (Just(g), permutation(n)) })) {
        let h = g.relabel(&perm);
        let level = |e| match e { coxpander::Error::Irregular { level, .. } => level, _ => usize::MAX };
        prop_assert_eq!(regularity_vector(&g, 5, false).map_err(level), regularity_vector(&h, 5, false).map_err(level));
        prop_assert_eq!(exact_cheeger(&g).unwrap().value(), exact_cheeger(&h).unwrap().value());
        if g.is_connected() {
            let (a, b) = (second_eigenvalue(&g, 1e-8).unwrap(), second_eigenvalue(&h, 1e-8).unwrap());
            prop_assert!((a.lambda2 - b.lambda2).abs() < 1e-7);
        }
    }

    #[test]
    fn edge_list_round_trip(g in circulant_strategy(40)) {
        let text = g.to_edge_list();
        let back = Graph::parse_edge_list(&text).unwrap();
        prop_assert_eq!(back.to_edge_list(), text);
        prop_assert_eq!(back.edges().collect::<Vec<_>>(), g.edges().collect::<Vec<_>>());
    }

    #[test]
    fn lanczos_matches_dense(g in circulant_strategy(500)) {
        prop_assume!(g.is_connected());
        let s = second_eigenvalue(&g, 1e-8).unwrap();
        let ev = dense_spectrum(&g);
        let want = ev[ev.len() - 2];
        prop_assert!((s.lambda2 - want).abs() <= 1e-8, "{} vs {}", s.lambda2, want);
    }

    #[test]
    fn cheeger_sandwich(g in circulant_strategy(21)) {
        prop_assume!(g.is_connected());
        let h = exact_cheeger(&g).unwrap().as_f64();
        let s = second_eigenvalue(&g, 1e-8).unwrap();
        let (lo, hi) = cheeger_bounds(s.degree as f64, s.lambda2).unwrap();
        prop_assert!(lo <= h + 1e-9 && h <= hi + 1e-9);
        prop_assert!(h >= 2.0 / g.n() as f64 - 1e-12);
    }

    #[test]
    fn product_spectra(a in circulant_strategy(9), b in circulant_strategy(8)) {
        let (sa, sb) = (dense_spectrum(&a), dense_spectrum(&b));
        let t = dense_spectrum(&tensor(&a, &b));
        let c = dense_spectrum(&cartesian(&a, &b));
        for (x, y) in t.iter().zip(tensor_spectrum(&sa, &sb)) {
            prop_assert!((x - y).abs() < 1e-8);
        }
        for (x, y) in c.iter().zip(cartesian_spectrum(&sa, &sb)) {
            prop_assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn weichsel(a in circulant_strategy(12), b in circulant_strategy(12)) {
        let t = tensor(&a, &b);
        let want = a.is_connected() && b.is_connected() && (has_odd_cycle(&a) || has_odd_cycle(&b));
        prop_assert_eq!(t.is_connected(), want);
    }
}

#[test]
fn iwalk_of_complete_graph() {
    // edges of K5 meeting in a triangle: the line graph of K5
    let w = iwalk_graph(&complete(5), 1);
    assert_eq!(w.n(), 10);
    assert_eq!(w.regular_degree(), Some(6));
    assert!(!iwalk_graph(&cycle(5), 1).is_connected());
}

#[test]
fn diagram_text_round_trip() {
    for text in ["string [3,5,3] ring 0", "string [3,inf] ring 1", "string [4,3,4] ring 0,3"] {
        let d = parse_diagram(text).unwrap();
        assert_eq!(parse_diagram(&d.to_block_string()).unwrap(), d);
    }
}
