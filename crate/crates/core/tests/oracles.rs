//! Independent reference computations, written without the library's algorithms, and the
//! frozen values they produced.

use std::collections::HashMap;
use std::f64::consts::PI;

use coxpander::catalog;
use coxpander::diagram::{parse_diagram, AdornedDiagram, Label};
use coxpander::graph::{complete, cycle, Graph};
use coxpander::group::group_order;
use coxpander::numring::RealCyclotomicRing;
use coxpander::quotient::{self, QuotientOptions};
use coxpander::skeleton::{johnson_graph, regularity_vector};
use coxpander::spectral::{dense_spectrum, exact_cheeger, second_eigenvalue};
use nalgebra::{DMatrix, SymmetricEigen};
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Π (x − 2cos(jπ/L)) over 0 < j < L with gcd(j, 2L) = 1, expanded in floating point.
fn minpoly_oracle(l: u64) -> Vec<i64> {
    if l == 1 {
        return vec![2, 1];
    }
    let mut poly = vec![1.0f64];
    for j in (1..l).filter(|j| j.gcd(&(2 * l)) == 1) {
        let r = 2.0 * (j as f64 * PI / l as f64).cos();
        let mut next = vec![0.0; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= r * c;
        }
        poly = next;
    }
    poly.iter().map(|c| c.round() as i64).collect()
}

#[test]
fn minimal_polynomials_match_root_products() {
    for l in 2..=30u64 {
        let ring = RealCyclotomicRing::new(l);
        let got: Vec<i64> = ring.minpoly().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(got, minpoly_oracle(l), "L = {l}");
    }
    // frozen
    assert_eq!(minpoly_oracle(5), vec![-1, -1, 1]);
    assert_eq!(minpoly_oracle(7), vec![1, -2, -1, 1]);
}

fn path(labels: &[u32]) -> AdornedDiagram {
    let l: Vec<Label> = labels.iter().map(|&m| Label::Finite(m)).collect();
    AdornedDiagram::path(&l, &[0])
}

#[test]
fn finite_group_orders() {
    let fact = |n: u128| (1..=n).product::<u128>();
    for n in 2..=6usize {
        assert_eq!(group_order(&path(&vec![3; n - 1])).unwrap(), fact(n as u128 + 1), "A{n}");
        let mut b = vec![3; n - 1];
        b[n - 2] = 4;
        assert_eq!(group_order(&path(&b)).unwrap(), (1u128 << n) * fact(n as u128), "B{n}");
    }
    for n in 4..=7usize {
        assert_eq!(group_order(&catalog::d_n(n, 0)).unwrap(), (1u128 << (n - 1)) * fact(n as u128), "D{n}");
    }
    for m in 2..=12u32 {
        assert_eq!(group_order(&path(&[m])).unwrap(), 2 * m as u128, "I2({m})");
    }
    // classical orders, frozen
    assert_eq!(group_order(&path(&[5, 3])).unwrap(), 120);
    assert_eq!(group_order(&path(&[5, 3, 3])).unwrap(), 14400);
    assert_eq!(group_order(&path(&[3, 4, 3])).unwrap(), 1152);
    assert_eq!(group_order(&catalog::e_series(6)).unwrap(), 51840);
    assert_eq!(group_order(&catalog::e_series(7)).unwrap(), 2903040);
}

/// Degrees inside the spheres of all j-cliques, j = 0..levels, on k-subsets as bitmasks.
fn johnson_vector_oracle(n: u32, k: u32, levels: usize) -> Vec<usize> {
    let verts: Vec<u32> = (0u32..1 << n).filter(|m| m.count_ones() == k).collect();
    let adj = |a: u32, b: u32| (a & b).count_ones() == k - 1;
    let mut out = Vec::new();
    let mut cliques: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..levels {
        let mut degree = None;
        let mut next = Vec::new();
        for c in &cliques {
            let sphere: Vec<u32> =
                verts.iter().copied().filter(|&v| !c.contains(&v) && c.iter().all(|&u| adj(u, v))).collect();
            for &x in &sphere {
                let d = sphere.iter().filter(|&&y| adj(x, y)).count();
                assert!(degree.is_none_or(|e| e == d), "irregular");
                degree = Some(d);
                if c.last().is_none_or(|&l| x > l) {
                    let mut e = c.clone();
                    e.push(x);
                    next.push(e);
                }
            }
        }
        out.push(degree.unwrap_or(0));
        cliques = next;
    }
    out
}

#[test]
fn johnson_10_5() {
    let oracle = johnson_vector_oracle(10, 5, 5);
    assert_eq!(oracle, vec![25, 8, 3, 2, 1]);
    let rv = regularity_vector(&johnson_graph(10, 5), 8, false).unwrap();
    assert_eq!(rv.degrees[..5], oracle[..]);
    assert_eq!(rv.degrees, vec![25, 8, 3, 2, 1, 0]);
}

#[test]
fn klein_second_eigenvalue() {
    let (q, _) = quotient::quotient(&catalog::triangle_tiling(7), 7, &QuotientOptions::default()).unwrap();
    let g = &q.graph;
    let n = g.n();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    assert!((ev[0] - 7.0).abs() < 1e-9);
    // frozen: λ₂ of the 24-vertex quotient is √7
    assert!((ev[1] - 7f64.sqrt()).abs() < 1e-9);
    let s = second_eigenvalue(g, 1e-8).unwrap();
    assert!((s.lambda2 - ev[1]).abs() < 1e-8);
    assert!(s.lambda2 < 7.0);
}

#[test]
fn cycle_spectra() {
    for n in [5usize, 6, 8, 11] {
        let mut want: Vec<f64> = (0..n).map(|k| 2.0 * (2.0 * PI * k as f64 / n as f64).cos()).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let got = dense_spectrum(&cycle(n));
        for (x, y) in got.iter().zip(&want) {
            assert!((x - y).abs() < 1e-9);
        }
        let s = second_eigenvalue(&cycle(n), 1e-8).unwrap();
        assert!((s.lambda2 - 2.0 * (2.0 * PI / n as f64).cos()).abs() < 1e-8);
    }
}

/// min over all nonempty proper subsets of |∂S| / min(|S|, |S^c|), as a reduced fraction,
/// with the lexicographically least minimiser among subsets of size ≤ n/2.
fn cheeger_oracle(g: &Graph) -> (u64, u64, Vec<usize>) {
    let n = g.n();
    let mut best: Option<(u64, u64, Vec<usize>)> = None;
    for mask in 1u64..(1 << n) - 1 {
        let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if 2 * s.len() > n {
            continue;
        }
        let boundary = g.edges().filter(|&(a, b)| (mask >> a & 1) != (mask >> b & 1)).count() as u64;
        let size = s.len() as u64;
        let better = match &best {
            None => true,
            Some((bn, bd, bs)) => boundary * bd < bn * size || (boundary * bd == bn * size && s < *bs),
        };
        if better {
            best = Some((boundary, size, s));
        }
    }
    let (b, s, w) = best.unwrap();
    let g = b.gcd(&s);
    (b / g, s / g, w)
}

#[test]
fn exact_cheeger_against_brute_force() {
    let mut graphs = vec![cycle(6), cycle(7), complete(4), complete(5), coxpander::graph::petersen()];
    graphs.push(Graph::from_edges(8, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 7), (7, 4)]));
    graphs.push(coxpander::graph::complete_bipartite(3, 4));
    for g in &graphs {
        let h = exact_cheeger(g).unwrap();
        let (num, den, w) = cheeger_oracle(g);
        assert_eq!((h.numerator, h.denominator), (num, den));
        assert_eq!(h.witness, w);
    }
    // frozen
    let c6 = cheeger_oracle(&cycle(6));
    assert_eq!(c6, (2, 3, vec![0, 1, 2]));
}

#[test]
fn predicted_table_values() {
    // the recursion on link diagrams, frozen from an independent hand count of simplicial faces
    let expected: HashMap<&str, Vec<usize>> = HashMap::from([
        ("icosahedron", vec![5, 2, 0]),
        ("600-cell", vec![12, 5, 2, 0]),
        ("octahedron", vec![4, 2, 0]),
    ]);
    let d = |s: &str| parse_diagram(s).unwrap();
    for (name, text) in [("icosahedron", "string [3,5] ring 0"), ("600-cell", "string [3,3,5] ring 0"), ("octahedron", "string [3,4] ring 0")] {
        let p = coxpander::predict::predicted_vector(&d(text), 8, 1_000_000).unwrap();
        assert_eq!(p.degrees, expected[name], "{name}");
    }
}
