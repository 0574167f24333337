//! Named diagrams used by the command line and the test suites.

use crate::diagram::{parse_diagram, AdornedDiagram, Label};

/// Star-shaped diagram: a centre with arms of the given lengths; the ring sits at the
/// end of arm `ringed_arm`. Nodes are named `c` and `a{arm}_{k}` (k = 1 next to the centre).
pub fn star(arms: &[usize], ringed_arm: usize) -> AdornedDiagram {
    let mut text = String::from("node c\n");
    for (a, &len) in arms.iter().enumerate() {
        for k in 1..=len {
            text.push_str(&format!("node a{a}_{k}\n"));
        }
    }
    for (a, &len) in arms.iter().enumerate() {
        for k in 1..=len {
            let prev = if k == 1 { "c".to_string() } else { format!("a{a}_{}", k - 1) };
            text.push_str(&format!("edge {prev} a{a}_{k} 3\n"));
        }
    }
    text.push_str(&format!("ring a{ringed_arm}_{}\n", arms[ringed_arm]));
    parse_diagram(&text).expect("star diagram")
}

/// The 2_32 honeycomb (overextended T7).
pub fn honeycomb_232() -> AdornedDiagram {
    star(&[2, 2, 3], 1)
}

/// The 2_42 honeycomb (extended overextended T7).
pub fn honeycomb_242() -> AdornedDiagram {
    star(&[2, 2, 4], 1)
}

/// The 3_41 honeycomb (overextended T8).
pub fn honeycomb_341() -> AdornedDiagram {
    star(&[3, 1, 4], 0)
}

/// E_m with the ring at the end of the length-2 arm (the 2_{(m−4)1} polytope).
pub fn e_series(m: usize) -> AdornedDiagram {
    assert!(m >= 6);
    star(&[2, 1, m - 4], 0)
}

pub fn order5_simplex_honeycomb() -> AdornedDiagram {
    parse_diagram("string [3,3,3,5] ring 0").unwrap()
}

pub fn icosahedral_honeycomb() -> AdornedDiagram {
    parse_diagram("string [3,5,3] ring 0").unwrap()
}

/// Triangle tiling {3,q}: degree-q vertices, triangular faces.
pub fn triangle_tiling(q: u32) -> AdornedDiagram {
    AdornedDiagram::path(&[Label::Finite(3), Label::Finite(q)], &[0])
}

/// A_{2m−1} with an extra ringed node joined to its middle node.
pub fn p_m(m: usize) -> AdornedDiagram {
    assert!(m >= 2);
    let k = 2 * m - 1;
    let mut text = String::new();
    for i in 0..k {
        text.push_str(&format!("node s{i}\n"));
    }
    text.push_str("node t\n");
    for i in 1..k {
        text.push_str(&format!("edge s{} s{i} 3\n", i - 1));
    }
    text.push_str(&format!("edge t s{} 3\nring t\n", m - 1));
    parse_diagram(&text).unwrap()
}

pub fn a_n(n: usize, ring: usize) -> AdornedDiagram {
    AdornedDiagram::path(&vec![Label::Finite(3); n - 1], &[ring])
}

pub fn b_n(n: usize, ring: usize) -> AdornedDiagram {
    let mut labels = vec![Label::Finite(3); n - 1];
    labels[n - 2] = Label::Finite(4);
    AdornedDiagram::path(&labels, &[ring])
}

pub fn d_n(n: usize, ring: usize) -> AdornedDiagram {
    let d = star(&[1, 1, n - 3], 0);
    d.with_rings(vec![ring])
}

pub fn h4_600cell() -> AdornedDiagram {
    parse_diagram("string [3,3,5] ring 0").unwrap()
}

/// The honeycombs whose regularity vectors appear in the tables, with those vectors.
pub fn honeycomb_table() -> Vec<(&'static str, AdornedDiagram, Vec<usize>)> {
    vec![
        ("{3,5,3}", icosahedral_honeycomb(), vec![20, 3, 0]),
        ("{3,3,3,5}", order5_simplex_honeycomb(), vec![120, 12, 5, 2, 0]),
        ("2_32", honeycomb_232(), vec![576, 35, 12, 6]),
        ("2_42", honeycomb_242(), vec![17280, 56, 15, 6]),
        ("3_41", honeycomb_341(), vec![2160, 64, 21, 10, 5]),
        ("E10", e_series(10), vec![256, 36, 14, 7]),
    ]
}

pub fn by_name(name: &str) -> Option<AdornedDiagram> {
    let lower = name.to_ascii_lowercase();
    let d = match lower.as_str() {
        "353" | "{3,5,3}" => icosahedral_honeycomb(),
        "3335" | "{3,3,3,5}" => order5_simplex_honeycomb(),
        "232" | "2_32" => honeycomb_232(),
        "242" | "2_42" => honeycomb_242(),
        "341" | "3_41" => honeycomb_341(),
        "600cell" => h4_600cell(),
        _ => {
            if let Some(m) = lower.strip_prefix('e').and_then(|x| x.parse().ok()) {
                return (m >= 6).then(|| e_series(m));
            }
            if let Some(m) = lower.strip_prefix('p').and_then(|x| x.parse().ok()) {
                return (m >= 2).then(|| p_m(m));
            }
            if let Some(q) = lower.strip_prefix("triangle").and_then(|x| x.parse().ok()) {
                return Some(triangle_tiling(q));
            }
            return None;
        }
    };
    Some(d)
}
