//! Graph isomorphism by colour refinement with individualisation and backtracking.

use std::collections::BTreeMap;

use crate::graph::Graph;

fn refine(g: &Graph, h: &Graph, cg: &mut Vec<u32>, ch: &mut Vec<u32>) -> bool {
    let mut classes = count_classes(cg);
    loop {
        let sig = |gr: &Graph, c: &[u32], v: usize| {
            let mut nb: Vec<u32> = gr.neighbors(v).iter().map(|&w| c[w]).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let sg: Vec<(u32, Vec<u32>)> = (0..g.n()).map(|v| sig(g, cg, v)).collect();
        let sh: Vec<(u32, Vec<u32>)> = (0..h.n()).map(|v| sig(h, ch, v)).collect();
        let mut ids: BTreeMap<&(u32, Vec<u32>), (u32, i64)> = BTreeMap::new();
        for s in &sg {
            ids.entry(s).or_insert((0, 0)).1 += 1;
        }
        for s in &sh {
            ids.entry(s).or_insert((0, 0)).1 -= 1;
        }
        if ids.values().any(|&(_, bal)| bal != 0) {
            return false;
        }
        for (i, v) in ids.values_mut().enumerate() {
            v.0 = i as u32;
        }
        let next_g: Vec<u32> = sg.iter().map(|s| ids[s].0).collect();
        let next_h: Vec<u32> = sh.iter().map(|s| ids[s].0).collect();
        let next_classes = ids.len();
        *cg = next_g;
        *ch = next_h;
        if next_classes == classes {
            return true;
        }
        classes = next_classes;
    }
}

fn count_classes(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn search(g: &Graph, h: &Graph, mut cg: Vec<u32>, mut ch: Vec<u32>) -> Option<Vec<usize>> {
    if !refine(g, h, &mut cg, &mut ch) {
        return None;
    }
    let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &cg {
        *sizes.entry(c).or_default() += 1;
    }
    let target = sizes.iter().filter(|(_, &s)| s > 1).min_by_key(|(&c, &s)| (s, c)).map(|(&c, _)| c);
    let Some(color) = target else {
        let mut by_color = vec![0usize; h.n()];
        for (w, &c) in ch.iter().enumerate() {
            by_color[c as usize] = w;
        }
        let map: Vec<usize> = cg.iter().map(|&c| by_color[c as usize]).collect();
        return verify(g, h, &map).then_some(map);
    };
    let fresh = cg.iter().max().copied().unwrap_or(0) + 1;
    let v = cg.iter().position(|&c| c == color).unwrap();
    for w in (0..h.n()).filter(|&w| ch[w] == color) {
        let mut cg2 = cg.clone();
        let mut ch2 = ch.clone();
        cg2[v] = fresh;
        ch2[w] = fresh;
        if let Some(m) = search(g, h, cg2, ch2) {
            return Some(m);
        }
    }
    None
}

/// Checks that `map` is an isomorphism g → h.
pub fn verify(g: &Graph, h: &Graph, map: &[usize]) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() || map.len() != g.n() {
        return false;
    }
    let mut hit = vec![false; h.n()];
    for &m in map {
        if m >= h.n() || std::mem::replace(&mut hit[m], true) {
            return false;
        }
    }
    g.edges().all(|(u, v)| h.has_edge(map[u], map[v]))
}

/// An explicit isomorphism from g to h, if one exists.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut dg: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..h.n()).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return None;
    }
    search(g, h, vec![0; g.n()], vec![0; h.n()])
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, icosahedron, petersen};

    #[test]
    fn relabelled_graphs_are_isomorphic() {
        let g = petersen();
        let perm = vec![3, 7, 1, 0, 9, 2, 8, 6, 5, 4];
        let h = g.relabel(&perm);
        let m = find_isomorphism(&g, &h).unwrap();
        assert!(verify(&g, &h, &m));
        let ico = icosahedron();
        let perm: Vec<usize> = (0..12).map(|i| (i * 5) % 12).collect();
        assert!(are_isomorphic(&ico, &ico.relabel(&perm)));
    }

    #[test]
    fn distinguishes() {
        let two_triangles = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert!(!are_isomorphic(&two_triangles, &cycle(6)));
        assert!(!are_isomorphic(&complete(4), &cycle(4)));
    }
}
