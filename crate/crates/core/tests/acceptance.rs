//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria in EXPECTED_RED print FAIL with the observed data; the test only fails when a
//! criterion outside that set fails, or when one inside it starts passing (so the set
//! stays honest).

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use coxpander::catalog;
use coxpander::diagram::vertex_link_diagram;
use coxpander::graph::{complete, cycle, icosahedron, octahedron, petersen, Graph};
use coxpander::iso::are_isomorphic;
use coxpander::predict::{predicted_vector, StopReason};
use coxpander::products::{self, affine_example_graph, cartesian, has_odd_cycle, tensor};
use coxpander::quotient::{self, QuotientOptions};
use coxpander::skeleton::{
    finite_skeleton, indefinite_ball, iwalk_graph, johnson_graph, local_regularity_profile, regularity_vector,
};
use coxpander::spectral::{cheeger_bounds, dense_spectrum, exact_cheeger, family_report, second_eigenvalue};
use serde_json::Value;

const COSET_CAP: usize = 4_000_000;
const ORBIT_CAP: usize = 5_000_000;
const EIGEN_TOL: f64 = 1e-8;
const SPECTRUM_TOL: f64 = 1e-8;
/// Slack for comparing floating Cheeger bounds with exact rationals.
const SANDWICH_SLACK: f64 = 1e-9;
const ANALYZE_BUDGET: Duration = Duration::from_secs(300);
const QUOTIENT_BUDGET: Duration = Duration::from_secs(600);

/// 1: the 2_32 entry reads (576,35,12,6) but the link recursion and the measured ball both
///    give (576,35,12,5).
/// 3: the sphere of a triangle is two disjoint K4's, not K5's.
const EXPECTED_RED: &[usize] = &[1, 3];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn analyze_json(name: &str) -> Value {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = coxpander::cli::run(["coxpander", "analyze", name, "--format", "json"], &mut out, &mut err);
    assert_eq!(code, 0, "{}", String::from_utf8_lossy(&err));
    serde_json::from_slice(&out).unwrap()
}

fn degrees(v: &Value) -> Vec<usize> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect()
}

fn criterion_1() -> Verdict {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, key, table) in [
        ("{3,5,3}", "353", vec![20, 3, 0]),
        ("{3,3,3,5}", "3335", vec![120, 12, 5, 2, 0]),
        ("2_32", "232", vec![576, 35, 12, 6]),
        ("2_42", "242", vec![17280, 56, 15, 6]),
        ("3_41", "341", vec![2160, 64, 21, 10, 5]),
        ("E10", "e10", vec![256, 36, 14, 7]),
    ] {
        let t = Instant::now();
        let v = analyze_json(key);
        let got = degrees(&v["report"]["prediction"]["degrees"]);
        let fast = t.elapsed() < ANALYZE_BUDGET;
        let hit = got == table;
        ok &= hit && fast;
        detail.push(format!("{name} {got:?}{} {:.1?}", if hit { "" } else { " (table differs)" }, t.elapsed()));
    }
    verdict(ok, detail.join("; "))
}

fn criterion_2() -> Verdict {
    let g = finite_skeleton(&catalog::h4_600cell(), COSET_CAP).unwrap();
    let rv = regularity_vector(&g, 5, false).unwrap();
    let ball = indefinite_ball(&catalog::order5_simplex_honeycomb(), 2, ORBIT_CAP).unwrap();
    let local = local_regularity_profile(&ball, 0, 5).unwrap();
    let sphere = ball.sphere(&[0]);
    let same = are_isomorphic(&sphere, &g);
    let pass = g.n() == 120
        && g.edge_count() == 720
        && rv.degrees == vec![12, 5, 2, 0]
        && local.vector.degrees[1..4] == [12, 5, 2]
        && same;
    verdict(
        pass,
        format!(
            "600-cell {} vertices {} edges, vector {:?}; honeycomb spheres {:?}-regular, vertex sphere = 600-cell: {same}",
            g.n(),
            g.edge_count(),
            rv.degrees,
            &local.vector.degrees[1..]
        ),
    )
}

fn criterion_3() -> Verdict {
    let d = catalog::p_m(5);
    let link = finite_skeleton(&vertex_link_diagram(&d).unwrap(), COSET_CAP).unwrap();
    let j = johnson_graph(10, 5);
    let iso = are_isomorphic(&link, &j);
    let ball = indefinite_ball(&d, 2, ORBIT_CAP).unwrap();
    let prof = local_regularity_profile(&ball, 0, 8).unwrap();
    let prefix_ok = prof.vector.degrees.len() >= 4 && prof.vector.degrees[..4] == [252, 25, 8, 3];
    let c = ball.neighbors(0)[0];
    let e = *ball.common_neighbors(&[0, c]).first().unwrap();
    let tri = ball.sphere(&[0, c, e]);
    let two = |m: usize| {
        let k = complete(m);
        let mut edges: Vec<(usize, usize)> = k.edges().collect();
        edges.extend(k.edges().map(|(a, b)| (a + m, b + m)));
        Graph::from_edges(2 * m, edges)
    };
    let is_2k5 = are_isomorphic(&tri, &two(5));
    let is_2k4 = are_isomorphic(&tri, &two(4));
    verdict(
        iso && link.n() == 252 && link.regular_degree() == Some(25) && prefix_ok && is_2k5,
        format!(
            "link = J(10,5): {iso}; ball vector {:?}; triangle sphere has {} vertices, 2K5: {is_2k5}, 2K4: {is_2k4}",
            prof.vector.degrees,
            tri.n()
        ),
    )
}

fn criterion_4() -> Verdict {
    let t = Instant::now();
    let d = catalog::triangle_tiling(7);
    let opts = QuotientOptions { tol: EIGEN_TOL, ..Default::default() };
    let mut graphs = Vec::new();
    let mut detail = Vec::new();
    let mut ok = true;
    let mut sizes = Vec::new();
    for p in [7, 13, 29] {
        let (q, r) = quotient::quotient(&d, p, &opts).unwrap();
        let rv = regularity_vector(&q.graph, 4, true).unwrap();
        let connected_regular = rv.degrees == vec![7, 2, 0] && rv.connected_level() == 2;
        ok &= r.preserved && connected_regular;
        if p == 7 {
            ok &= q.graph.n() == 24;
        }
        sizes.push(q.graph.n());
        detail.push(format!("p={p}: {} vertices {:?} preserved={}", q.graph.n(), rv.degrees, r.preserved));
        graphs.push((format!("mod {p}"), q.graph));
    }
    ok &= sizes.windows(2).all(|w| w[0] < w[1]);
    let fam = family_report(&graphs, 0.0, EIGEN_TOL).unwrap();
    let gaps: Vec<String> = fam.rows.iter().map(|r| format!("{:.6}", r.gap)).collect();
    ok &= fam.above_threshold && t.elapsed() < QUOTIENT_BUDGET;
    detail.push(format!("gaps {}; {:.1?}", gaps.join(", "), t.elapsed()));
    verdict(ok, detail.join("; "))
}

fn criterion_5() -> Verdict {
    let d = catalog::icosahedral_honeycomb();
    let s = quotient::search_primes(&d, 50, &QuotientOptions::default()).unwrap();
    match s.found {
        Some(r) => {
            let gap = r.spectral.as_ref().map(|s| s.gap);
            let pass = r.measured.as_deref() == Some(&[20, 3, 0][..]) && gap.is_some_and(|g| g > 0.0);
            verdict(pass, format!("p={} {} vertices {:?} gap {:?} (skipped {:?})", r.prime, r.vertices, r.measured, gap, s.tried))
        }
        // a structured negative answer is an acceptable outcome
        None => verdict(!s.tried.is_empty(), format!("no preserved quotient: {:?}", s.tried)),
    }
}

fn small_suite() -> Vec<(String, Graph)> {
    let mut v: Vec<(String, Graph)> = (2..=26).map(|n| (format!("K{n}"), complete(n))).collect();
    v.extend((3..=26).map(|n| (format!("C{n}"), cycle(n))));
    v.push(("petersen".into(), petersen()));
    v.push(("octahedron".into(), octahedron()));
    v.push(("icosahedron".into(), icosahedron()));
    v.push(("K3xK3".into(), tensor(&complete(3), &complete(3))));
    v.push(("C4□C4".into(), cartesian(&cycle(4), &cycle(4))));
    v.push(("K5□K5".into(), cartesian(&complete(5), &complete(5))));
    v.push(("K3,3".into(), products::named_graph("K3,3").unwrap()));
    v.push(("J(6,3)".into(), johnson_graph(6, 3)));
    let (klein, _) = quotient::quotient(&catalog::triangle_tiling(7), 7, &QuotientOptions::default()).unwrap();
    v.push(("klein".into(), klein.graph));
    v
}

fn criterion_6() -> Verdict {
    let c6 = exact_cheeger(&cycle(6)).unwrap();
    let k4 = exact_cheeger(&complete(4)).unwrap();
    let mut ok = (c6.numerator, c6.denominator) == (2, 3) && (k4.numerator, k4.denominator) == (2, 1);
    let mut checked = 0;
    let mut bad = Vec::new();
    for (name, g) in small_suite() {
        let h = exact_cheeger(&g).unwrap();
        if let Some(k) = g.regular_degree() {
            let s = second_eigenvalue(&g, EIGEN_TOL).unwrap();
            let (lo, hi) = cheeger_bounds(k as f64, s.lambda2).unwrap();
            if !(lo <= h.as_f64() + SANDWICH_SLACK && h.as_f64() <= hi + SANDWICH_SLACK) {
                bad.push(format!("{name}: {lo} ≤ {} ≤ {hi} fails", h.as_f64()));
            }
            checked += 1;
        }
        if name.starts_with('K') && name[1..].parse::<usize>().is_ok() && h.as_f64() < 1.0 {
            bad.push(format!("{name}: h = {}", h.as_f64()));
        }
    }
    ok &= bad.is_empty();
    verdict(ok, format!("h(C6) = 2/3, h(K4) = 2; sandwich on {checked} graphs; problems {bad:?}"))
}

fn spectra_match(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= SPECTRUM_TOL)
}

fn criterion_7() -> Verdict {
    let name = |s: &str| products::named_graph(s).unwrap();
    let pairs: Vec<(&str, Graph, &str, Graph)> = vec![
        ("K3", complete(3), "K3", complete(3)),
        ("K4", complete(4), "C5", cycle(5)),
        ("C4", cycle(4), "C4", cycle(4)),
        ("C5", cycle(5), "C6", cycle(6)),
        ("petersen", petersen(), "K2", complete(2)),
        ("K3", complete(3), "C4", cycle(4)),
        ("octahedron", octahedron(), "K3", complete(3)),
        ("K5", complete(5), "K5", complete(5)),
        ("icosahedron", icosahedron(), "K4", complete(4)),
        ("C6", cycle(6), "K3,3", name("K3,3")),
    ];
    let mut problems = Vec::new();
    for (n1, g1, n2, g2) in &pairs {
        let r1 = regularity_vector(g1, 10, false).unwrap().degrees;
        let r2 = regularity_vector(g2, 10, false).unwrap().degrees;
        let t = tensor(g1, g2);
        let c = cartesian(g1, g2);
        let rt = regularity_vector(&t, 10, false).unwrap().degrees;
        if rt != products::tensor_vector(&r1, &r2) {
            problems.push(format!("{n1}×{n2} tensor {rt:?}"));
        }
        match products::cartesian_vector(&r1, &r2) {
            Some(f) => {
                let rc = regularity_vector(&c, 10, false).unwrap().degrees;
                if rc != f {
                    problems.push(format!("{n1}□{n2} cartesian {rc:?} vs {f:?}"));
                }
            }
            None => {
                if c.regular_degree() != Some(r1[0] + r2[0]) {
                    problems.push(format!("{n1}□{n2} degree"));
                }
            }
        }
        let (s1, s2) = (dense_spectrum(g1), dense_spectrum(g2));
        if !spectra_match(&dense_spectrum(&t), &products::tensor_spectrum(&s1, &s2)) {
            problems.push(format!("{n1}×{n2} spectrum"));
        }
        if !spectra_match(&dense_spectrum(&c), &products::cartesian_spectrum(&s1, &s2)) {
            problems.push(format!("{n1}□{n2} spectrum"));
        }
        let weichsel = g1.is_connected() && g2.is_connected() && (has_odd_cycle(g1) || has_odd_cycle(g2));
        if t.is_connected() != weichsel {
            problems.push(format!("{n1}×{n2} connectivity"));
        }
    }
    verdict(problems.is_empty(), format!("{} pairs; problems {problems:?}", pairs.len()))
}

fn criterion_8() -> Verdict {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in 3..=6 {
        for k in 1..=4u32 {
            let (_, r) = affine_example_graph(n, k, 20_000_000).unwrap();
            ok &= r.order as u128 == r.expected_order && r.relations_hold;
            rows.push(format!("({n},{k}) |G|={} {:?}", r.order, r.measured));
        }
    }
    let (_, r32) = affine_example_graph(3, 2, 1000).unwrap();
    rows.push(format!("(3,2): measured {:?} vs listed {:?}", r32.measured, r32.listed));
    verdict(ok, rows.join("; "))
}

fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let n = a.n();
    let edges = a.edges().chain(b.edges().map(|(x, y)| (x + n, y + n)));
    Graph::from_edges(n + b.n(), edges)
}

fn criterion_9() -> Verdict {
    let g = finite_skeleton(&catalog::h4_600cell(), COSET_CAP).unwrap();
    let w = iwalk_graph(&g, 1);
    let mut ok = w.n() == 720 && w.regular_degree() == Some(10) && w.is_connected();
    let detail = format!("600-cell edge walk: {} vertices, degree {:?}, connected {}", w.n(), w.regular_degree(), w.is_connected());
    let (klein, _) = quotient::quotient(&catalog::triangle_tiling(7), 7, &QuotientOptions::default()).unwrap();
    let catalog_graphs = vec![
        g.clone(),
        icosahedron(),
        octahedron(),
        klein.graph.clone(),
        johnson_graph(6, 3),
        cartesian(&complete(5), &complete(5)),
        disjoint_union(&icosahedron(), &icosahedron()),
        disjoint_union(&klein.graph, &klein.graph),
        complete(6),
    ];
    let mut mismatches = 0;
    for h in &catalog_graphs {
        let rv = regularity_vector(h, 6, false).unwrap();
        // walks on i-cells for every i below the clique dimension with connected links
        for i in 1..rv.connected_level().min(3) {
            if iwalk_graph(h, i).is_connected() != h.is_connected() {
                mismatches += 1;
            }
        }
    }
    ok &= mismatches == 0;
    verdict(ok, format!("{detail}; connectivity mismatches on catalog: {mismatches}"))
}

fn criterion_10() -> Verdict {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, d, _) in catalog::honeycomb_table() {
        let pred = predicted_vector(&d, 12, COSET_CAP).unwrap();
        let radius = ball_radius(pred.degrees[0]);
        let ball = indefinite_ball(&d, radius, ORBIT_CAP).unwrap();
        let prof = local_regularity_profile(&ball, 0, pred.degrees.len() + 2).unwrap();
        let stop_matches = match (&pred.stop, &prof.irregular) {
            (StopReason::Complete, None) => true,
            (StopReason::Irregular { level, .. }, Some((l, _))) => level == l,
            _ => false,
        };
        let hit = prof.vector.degrees == pred.degrees && stop_matches;
        ok &= hit;
        detail.push(format!(
            "{name}: predicted {:?} measured {:?} (radius {radius}, irregular at {:?})",
            pred.degrees,
            prof.vector.degrees,
            prof.irregular.as_ref().map(|x| x.0)
        ));
    }
    verdict(ok, detail.join("; "))
}

/// Radius 2 unless the ball would be too large to build; the radius-1 ball already holds
/// every clique through the centre with all edges between its vertices.
fn ball_radius(degree: usize) -> usize {
    if degree <= 1000 {
        2
    } else {
        1
    }
}

#[test]
fn acceptance() {
    let criteria: Vec<(usize, fn() -> Verdict)> = vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = BTreeSet::new();
    for (id, f) in criteria {
        let t = Instant::now();
        let v = f();
        println!("criterion {id:>2}: {} ({:.1?}) {}", if v.pass { "PASS" } else { "FAIL" }, t.elapsed(), v.detail);
        if !v.pass {
            failed.insert(id);
        }
    }
    let expected: BTreeSet<usize> = EXPECTED_RED.iter().copied().collect();
    assert_eq!(failed, expected, "failing criteria differ from the expected set");
}
