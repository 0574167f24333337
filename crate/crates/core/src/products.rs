//! Tensor and Cartesian products, and the affine quotients of [3,…,3,∞].

use std::collections::HashMap;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// (u₁,u₂) ~ (v₁,v₂) iff u₁ ~ v₁ and u₂ ~ v₂.
pub fn tensor(g1: &Graph, g2: &Graph) -> Graph {
    let m = g2.n();
    let mut edges = Vec::new();
    for (a, b) in g1.edges() {
        for (c, d) in g2.edges() {
            edges.push((a * m + c, b * m + d));
            edges.push((a * m + d, b * m + c));
        }
    }
    Graph::from_edges(g1.n() * m, edges)
}

/// (u₁,u₂) ~ (v₁,v₂) iff one coordinate is equal and the other adjacent.
pub fn cartesian(g1: &Graph, g2: &Graph) -> Graph {
    let m = g2.n();
    let mut edges = Vec::new();
    for u in 0..g1.n() {
        for (c, d) in g2.edges() {
            edges.push((u * m + c, u * m + d));
        }
    }
    for (a, b) in g1.edges() {
        for v in 0..m {
            edges.push((a * m + v, b * m + v));
        }
    }
    Graph::from_edges(g1.n() * m, edges)
}

/// Regularity vector of a tensor product: entrywise products (padded with zeros).
pub fn tensor_vector(a: &[usize], b: &[usize]) -> Vec<usize> {
    let len = a.len().max(b.len());
    let get = |v: &[usize], i: usize| v.get(i).copied().unwrap_or(0);
    let mut out: Vec<usize> = (0..len).map(|i| get(a, i) * get(b, i)).collect();
    if let Some(z) = out.iter().position(|&x| x == 0) {
        out.truncate(z + 1);
    }
    out
}

/// Regularity vector of a Cartesian product, when the tails agree.
pub fn cartesian_vector(a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
    if a.is_empty() || b.is_empty() || a[1..] != b[1..] {
        return None;
    }
    let mut out = a.to_vec();
    out[0] = a[0] + b[0];
    Some(out)
}

pub fn tensor_spectrum(ev1: &[f64], ev2: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = ev1.iter().flat_map(|x| ev2.iter().map(move |y| x * y)).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

pub fn cartesian_spectrum(ev1: &[f64], ev2: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = ev1.iter().flat_map(|x| ev2.iter().map(move |y| x + y)).collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Whether the graph has an odd cycle, i.e. is not bipartite.
pub fn has_odd_cycle(g: &Graph) -> bool {
    let mut colour: Vec<Option<bool>> = vec![None; g.n()];
    for s in 0..g.n() {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(false);
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            let cu = colour[u].unwrap();
            for &w in g.neighbors(u) {
                match colour[w] {
                    None => {
                        colour[w] = Some(!cu);
                        stack.push(w);
                    }
                    Some(cw) if cw == cu => return true,
                    _ => {}
                }
            }
        }
    }
    false
}

/// Element v ↦ ε·σ(v) + t of the affine group over Z/k, kept formally so that ε = −1
/// is distinct from the identity even when k ≤ 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineElement {
    pub negate: bool,
    /// σ as images: σ(e_i) = e_{perm[i]}.
    pub perm: Vec<u8>,
    pub shift: Vec<u32>,
}

impl AffineElement {
    pub fn identity(n: usize) -> Self {
        AffineElement { negate: false, perm: (0..n as u8).collect(), shift: vec![0; n] }
    }

    fn act_linear(&self, v: &[u32], k: u32) -> Vec<u32> {
        let mut out = vec![0; v.len()];
        for (i, &x) in v.iter().enumerate() {
            out[self.perm[i] as usize] = if self.negate { (k - x % k) % k } else { x % k };
        }
        out
    }

    /// self ∘ other.
    pub fn compose(&self, other: &AffineElement, k: u32) -> AffineElement {
        let moved = self.act_linear(&other.shift, k);
        AffineElement {
            negate: self.negate ^ other.negate,
            perm: other.perm.iter().map(|&j| self.perm[j as usize]).collect(),
            shift: moved.iter().zip(&self.shift).map(|(a, b)| (a + b) % k).collect(),
        }
    }
}

/// Generators x₁…x_n: x_i swaps coordinates i and i+1, x_n is v ↦ −v + e_n.
pub fn affine_generators(n: usize, k: u32) -> Vec<AffineElement> {
    let mut gens = Vec::new();
    for i in 0..n - 1 {
        let mut g = AffineElement::identity(n);
        g.perm.swap(i, i + 1);
        gens.push(g);
    }
    let mut last = AffineElement::identity(n);
    last.negate = true;
    last.shift[n - 1] = 1 % k;
    gens.push(last);
    gens
}

#[derive(Clone, Debug)]
pub struct AffineExampleGroup {
    pub n: usize,
    pub k: u32,
    pub generators: Vec<AffineElement>,
    pub elements: IndexSet<AffineElement>,
    /// right[j][g] = index of g·x_j.
    pub right: Vec<Vec<u32>>,
}

impl AffineExampleGroup {
    pub fn new(n: usize, k: u32, cap: usize) -> Result<Self> {
        if n < 3 || k < 1 || n > 16 {
            return Err(Error::Invalid(format!("affine example needs 3 ≤ n ≤ 16 and k ≥ 1, got n={n}, k={k}")));
        }
        let generators = affine_generators(n, k);
        let mut elements = IndexSet::new();
        elements.insert(AffineElement::identity(n));
        let mut right: Vec<Vec<u32>> = vec![Vec::new(); n];
        let mut i = 0;
        while i < elements.len() {
            let g = elements[i].clone();
            for (j, x) in generators.iter().enumerate() {
                let h = g.compose(x, k);
                let idx = match elements.get_index_of(&h) {
                    Some(idx) => idx,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded { what: "affine group", cap });
                        }
                        elements.insert_full(h).0
                    }
                };
                right[j].push(idx as u32);
            }
            i += 1;
        }
        Ok(AffineExampleGroup { n, k, generators, elements, right })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn expected_order(n: usize, k: u32) -> u128 {
        let fact: u128 = (1..=n as u128).product();
        2 * fact * (k as u128).pow(n as u32 - 1)
    }

    fn power_is_identity(&self, word: &[usize], exp: usize) -> bool {
        let mut g = AffineElement::identity(self.n);
        for _ in 0..exp {
            for &j in word {
                g = g.compose(&self.generators[j], self.k);
            }
        }
        g == AffineElement::identity(self.n)
    }

    fn order_of(&self, word: &[usize], limit: usize) -> Option<usize> {
        (1..=limit).find(|&e| self.power_is_identity(word, e))
    }

    /// Checks the Coxeter relations of [3,…,3,2k] and (x_{n−2}x_{n−1}x_n)⁶ = 1.
    pub fn relations_hold(&self) -> bool {
        let n = self.n;
        let k = self.k as usize;
        for i in 0..n {
            if self.order_of(&[i], 2) != Some(2) {
                return false;
            }
            for j in i + 1..n {
                let want = if j == i + 1 {
                    if j == n - 1 {
                        2 * k
                    } else {
                        3
                    }
                } else {
                    2
                };
                if self.order_of(&[i, j], want) != Some(want) {
                    return false;
                }
            }
        }
        self.power_is_identity(&[n - 3, n - 2, n - 1], 6)
    }

    /// Skeleton on the cosets of ⟨x₂,…,x_n⟩, with g⟨…⟩ adjacent to g·x₁⟨…⟩.
    pub fn skeleton(&self) -> Graph {
        let m = self.order();
        let mut coset = vec![u32::MAX; m];
        let mut count = 0u32;
        for s in 0..m {
            if coset[s] != u32::MAX {
                continue;
            }
            coset[s] = count;
            let mut stack = vec![s];
            while let Some(g) = stack.pop() {
                for j in 1..self.n {
                    let h = self.right[j][g] as usize;
                    if coset[h] == u32::MAX {
                        coset[h] = count;
                        stack.push(h);
                    }
                }
            }
            count += 1;
        }
        let edges: Vec<(usize, usize)> =
            (0..m).map(|g| (coset[g] as usize, coset[self.right[0][g] as usize] as usize)).collect();
        Graph::from_edges(count as usize, edges)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineReport {
    pub n: usize,
    pub k: u32,
    pub order: usize,
    pub expected_order: u128,
    pub relations_hold: bool,
    pub vertices: usize,
    pub measured: Vec<usize>,
    pub connected: Vec<bool>,
    /// The list (nk, (n−1)k, …, 3k, 2k) as printed alongside the example.
    pub listed: Vec<usize>,
}

pub fn affine_example_graph(n: usize, k: u32, cap: usize) -> Result<(Graph, AffineReport)> {
    let group = AffineExampleGroup::new(n, k, cap)?;
    let g = group.skeleton();
    let rv = crate::skeleton::regularity_vector(&g, n + 1, true)?;
    let listed = (2..=n).rev().map(|j| j * k as usize).collect();
    let report = AffineReport {
        n,
        k,
        order: group.order(),
        expected_order: AffineExampleGroup::expected_order(n, k),
        relations_hold: group.relations_hold(),
        vertices: g.n(),
        measured: rv.degrees,
        connected: rv.connected,
        listed,
    };
    Ok((g, report))
}

/// Lookup of named small graphs used by the command line.
pub fn named_graph(name: &str) -> Option<Graph> {
    use crate::graph::*;
    let (head, num) = name.split_at(name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len()));
    let nums: Vec<usize> = num.split(',').filter_map(|x| x.parse().ok()).collect();
    let fixed: HashMap<&str, fn() -> Graph> =
        HashMap::from([("petersen", petersen as fn() -> Graph), ("octahedron", octahedron), ("icosahedron", icosahedron)]);
    if let Some(f) = fixed.get(name) {
        return Some(f());
    }
    match (head, nums.as_slice()) {
        ("K", [n]) => Some(complete(*n)),
        ("C", [n]) if *n >= 3 => Some(cycle(*n)),
        ("P", [n]) => Some(path(*n)),
        ("K", [a, b]) => Some(complete_bipartite(*a, *b)),
        ("J", [n, k]) if k <= n => Some(crate::skeleton::johnson_graph(*n, *k)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle};
    use crate::skeleton::regularity_vector;

    #[test]
    fn k3_tensor_k3() {
        let g = tensor(&complete(3), &complete(3));
        assert_eq!(g.n(), 9);
        assert_eq!(regularity_vector(&g, 4, false).unwrap().degrees, vec![4, 1, 0]);
        assert_eq!(tensor_vector(&[2, 1, 0], &[2, 1, 0]), vec![4, 1, 0]);
        assert_eq!(tensor(&complete(4), &complete(1)).edge_count(), 0);
    }

    #[test]
    fn c4_box_c4() {
        let g = cartesian(&cycle(4), &cycle(4));
        assert_eq!(regularity_vector(&g, 3, false).unwrap().degrees, vec![4, 0]);
        assert_eq!(cartesian_vector(&[2, 0], &[2, 0]), Some(vec![4, 0]));
        assert_eq!(cartesian_vector(&[2, 1, 0], &[2, 0]), None);
    }

    #[test]
    fn affine_orders() {
        for (n, k) in [(3, 1), (3, 2), (4, 2), (4, 3)] {
            let g = AffineExampleGroup::new(n, k, 1_000_000).unwrap();
            assert_eq!(g.order() as u128, AffineExampleGroup::expected_order(n, k), "n={n} k={k}");
            assert!(g.relations_hold());
        }
    }

    #[test]
    fn affine_3_2_is_octahedron() {
        let (g, rep) = affine_example_graph(3, 2, 1000).unwrap();
        assert_eq!(rep.order, 48);
        assert!(crate::iso::are_isomorphic(&g, &crate::graph::octahedron()));
        assert_eq!(rep.measured, vec![4, 2, 0]);
        assert_eq!(rep.listed, vec![6, 4]);
    }

    #[test]
    fn names() {
        assert_eq!(named_graph("K4").unwrap().edge_count(), 6);
        assert_eq!(named_graph("K3,3").unwrap().edge_count(), 9);
        assert_eq!(named_graph("J10,5").unwrap().n(), 252);
        assert!(named_graph("X1").is_none());
    }
}
