//! 1-skeleta of Wythoffian polytopes, regularity vectors, balls and i-walk graphs.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::diagram::{is_definite, AdornedDiagram, GramMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{generator_matrices, todd_coxeter, transpose, RingMatrix};
use crate::linrep::IntMat;
use crate::numring::RealCyclotomicRing;

fn single_ring(diagram: &AdornedDiagram) -> Result<usize> {
    match diagram.ringed.as_slice() {
        [s0] => Ok(*s0),
        other => Err(Error::RingCount(other.len())),
    }
}

fn parabolic_nodes(diagram: &AdornedDiagram) -> Vec<usize> {
    (0..diagram.rank()).filter(|&s| !diagram.is_ringed(s)).collect()
}

/// Skeleton of a finite Wythoffian polytope on the cosets of ⟨S∖M⟩.
pub fn finite_skeleton(diagram: &AdornedDiagram, cap: usize) -> Result<Graph> {
    let s0 = single_ring(diagram)?;
    if !is_definite(diagram) {
        return Err(Error::NotDefinite);
    }
    let h = parabolic_nodes(diagram);
    let table = todd_coxeter(diagram, &h, cap)?;
    let n = table.index();
    // cosets adjacent to coset 0: the ⟨S∖M⟩-orbit of 0·s0
    let mut base = vec![table.act(0, s0)];
    let mut seen = vec![false; n];
    seen[base[0]] = true;
    let mut i = 0;
    while i < base.len() {
        let c = base[i];
        i += 1;
        for &t in &h {
            let d = table.act(c, t);
            if !seen[d] {
                seen[d] = true;
                base.push(d);
            }
        }
    }
    base.retain(|&c| c != 0);
    let words = table.transversal();
    let adj: Vec<Vec<usize>> = words.iter().map(|w| base.iter().map(|&b| table.act_word(b, w)).collect()).collect();
    let mut g = Graph::from_adjacency(adj);
    g.annotation = Some((0..n).collect());
    Ok(g)
}

/// J(n, k) on k-subsets in lexicographic (colex bitmask) order.
pub fn johnson_graph(n: usize, k: usize) -> Graph {
    assert!(0 < k && k < n && n <= 63, "need 0 < k < n ≤ 63");
    let mut subsets: Vec<u64> = Vec::new();
    fn rec(start: usize, n: usize, left: usize, cur: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(cur);
            return;
        }
        for i in start..=n - left {
            rec(i + 1, n, left - 1, cur | (1 << i), out);
        }
    }
    rec(0, n, k, 0, &mut subsets);
    let index: HashMap<u64, usize> = subsets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let adj = subsets
        .iter()
        .map(|&s| {
            let mut nb = Vec::with_capacity(k * (n - k));
            for a in (0..n).filter(|&a| s >> a & 1 == 1) {
                for b in (0..n).filter(|&b| s >> b & 1 == 0) {
                    nb.push(index[&(s ^ (1 << a) ^ (1 << b))]);
                }
            }
            nb
        })
        .collect();
    Graph::from_adjacency(adj)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityVector {
    pub degrees: Vec<usize>,
    pub connected: Vec<bool>,
    pub level: usize,
}

impl RegularityVector {
    fn from_levels(levels: Vec<Option<(usize, bool)>>) -> Self {
        let mut degrees = Vec::new();
        let mut connected = Vec::new();
        for (a, c) in levels.into_iter().map_while(|x| x) {
            degrees.push(a);
            connected.push(c);
            if a == 0 {
                break;
            }
        }
        let level = degrees.iter().take_while(|&&a| a > 0).count();
        RegularityVector { degrees, connected, level }
    }

    /// Connected regularity level: the longest prefix with connected spheres.
    pub fn connected_level(&self) -> usize {
        self.degrees.iter().zip(&self.connected).take_while(|(&a, &c)| a > 0 && c).count()
    }
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn count_sorted_intersection(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Degree of the induced graph on the sorted set `s` if regular, plus its connectivity.
fn sphere_profile(g: &Graph, s: &[usize]) -> (Option<usize>, bool) {
    if s.is_empty() {
        return (Some(0), false);
    }
    let degs: Vec<usize> = s.iter().map(|&x| count_sorted_intersection(g.neighbors(x), s)).collect();
    let reg = degs.iter().all(|&d| d == degs[0]).then_some(degs[0]);
    let mut seen = vec![false; s.len()];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for &y in g.neighbors(s[i]) {
            if let Ok(j) = s.binary_search(&y) {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
    }
    (reg, count == s.len())
}

struct Levels {
    slots: Vec<Option<(usize, bool)>>,
}

impl Levels {
    fn record(&mut self, level: usize, clique: &[usize], profile: (Option<usize>, bool)) -> Result<usize> {
        let witness = || {
            let mut w = clique.to_vec();
            w.sort_unstable();
            Error::Irregular { level, witness: w }
        };
        let a = profile.0.ok_or_else(witness)?;
        match &mut self.slots[level] {
            slot @ None => *slot = Some((a, profile.1)),
            Some((b, c)) => {
                if *b != a {
                    return Err(witness());
                }
                *c &= profile.1;
            }
        }
        Ok(a)
    }
}

/// Visits every clique extending `clique` by vertices above `floor`, within `sphere`.
fn walk(g: &Graph, clique: &mut Vec<usize>, sphere: &[usize], level: usize, floor: Option<usize>, acc: &mut Levels) -> Result<()> {
    let a = acc.record(level, clique, sphere_profile(g, sphere))?;
    if a == 0 || level + 1 >= acc.slots.len() {
        return Ok(());
    }
    for &x in sphere.iter().filter(|&&x| floor.is_none_or(|f| x > f)) {
        let next = intersect_sorted(sphere, g.neighbors(x));
        clique.push(x);
        walk(g, clique, &next, level + 1, Some(x), acc)?;
        clique.pop();
    }
    Ok(())
}

fn truncate_on_error(levels: Vec<Option<(usize, bool)>>, err: Error) -> Result<RegularityVector> {
    // an irregular level past a zero degree is not part of the vector
    if let Error::Irregular { level, .. } = &err {
        if levels[..*level].iter().any(|s| matches!(s, Some((0, _)))) {
            return Ok(RegularityVector::from_levels(levels));
        }
    }
    Err(err)
}

/// Regularity vector with `max_level` entries (fewer if some a_i = 0).
/// Without `assume_transitive` every clique is checked; with it, one representative per level.
pub fn regularity_vector(g: &Graph, max_level: usize, assume_transitive: bool) -> Result<RegularityVector> {
    let mut acc = Levels { slots: vec![None; max_level.max(1)] };
    let all: Vec<usize> = (0..g.n()).collect();
    if !assume_transitive {
        return match walk(g, &mut Vec::new(), &all, 0, None, &mut acc) {
            Ok(()) => Ok(RegularityVector::from_levels(acc.slots)),
            Err(e) => truncate_on_error(acc.slots, e),
        };
    }
    let mut clique = Vec::new();
    let mut sphere = all;
    for level in 0..acc.slots.len() {
        let a = acc.record(level, &clique, sphere_profile(g, &sphere))?;
        if a == 0 {
            break;
        }
        let x = sphere[0];
        clique.push(x);
        sphere = intersect_sorted(&sphere, g.neighbors(x));
    }
    Ok(RegularityVector::from_levels(acc.slots))
}

/// Regularity vector seen from `root`: a_0 is its degree and only cliques through it are examined.
/// Suited to balls, where only the centre has its full neighbourhood.
pub fn local_regularity_vector(g: &Graph, root: usize, max_level: usize) -> Result<RegularityVector> {
    let mut acc = Levels { slots: vec![None; max_level.max(1)] };
    acc.slots[0] = Some((g.degree(root), g.is_connected()));
    if g.degree(root) == 0 || max_level <= 1 {
        return Ok(RegularityVector::from_levels(acc.slots));
    }
    let sphere = g.neighbors(root).to_vec();
    match walk(g, &mut vec![root], &sphere, 1, None, &mut acc) {
        Ok(()) => Ok(RegularityVector::from_levels(acc.slots)),
        Err(e) => truncate_on_error(acc.slots, e),
    }
}

/// The verified part of a regularity vector and, if it stops early, where and why.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityProfile {
    pub vector: RegularityVector,
    pub irregular: Option<(usize, Vec<usize>)>,
}

fn profile_with<F>(max_level: usize, f: F) -> Result<RegularityProfile>
where
    F: Fn(usize) -> Result<RegularityVector>,
{
    match f(max_level) {
        Ok(vector) => Ok(RegularityProfile { vector, irregular: None }),
        Err(Error::Irregular { level, witness }) => {
            // levels below the failing one were only partly visited; check them on their own
            let vector = f(level)?;
            Ok(RegularityProfile { vector, irregular: Some((level, witness)) })
        }
        Err(e) => Err(e),
    }
}

pub fn regularity_profile(g: &Graph, max_level: usize, assume_transitive: bool) -> Result<RegularityProfile> {
    profile_with(max_level, |m| regularity_vector(g, m, assume_transitive))
}

pub fn local_regularity_profile(g: &Graph, root: usize, max_level: usize) -> Result<RegularityProfile> {
    profile_with(max_level, |m| local_regularity_vector(g, root, m))
}

/// Exact data around the base point x₀ in the dual representation.
#[derive(Clone, Debug)]
pub struct WythoffStar {
    pub ring: RealCyclotomicRing,
    pub gram: GramMatrix,
    pub generators: Vec<RingMatrix>,
    /// Lifted transposes S_sᵀ acting on flattened dual vectors.
    pub dual_generators: Vec<IntMat>,
    pub x0: Vec<i64>,
    /// Neighbours n_j of x₀ and matrices t_j with t_j x₀ = n_j.
    pub neighbors: Vec<Vec<i64>>,
    pub transversal: Vec<IntMat>,
}

impl WythoffStar {
    pub fn new(diagram: &AdornedDiagram, cap: usize) -> Result<Self> {
        let s0 = single_ring(diagram)?;
        let h = parabolic_nodes(diagram);
        let link = diagram.subdiagram(&h);
        if !is_definite(&link) {
            return Err(Error::InfiniteLink(link.names.join(",")));
        }
        let (gram, generators) = generator_matrices(diagram);
        let ring = gram.ring.clone();
        let d = ring.degree();
        let dual_generators =
            generators.iter().map(|m| IntMat::lift(&ring, &transpose(m))).collect::<Result<Vec<_>>>()?;
        let mut x0 = vec![0i64; diagram.rank() * d];
        x0[s0 * d] = 1;
        let first = dual_generators[s0].apply(&x0)?;
        let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(first.clone(), 0)]);
        let mut neighbors = vec![first];
        let mut transversal = vec![dual_generators[s0].clone()];
        let mut i = 0;
        while i < neighbors.len() {
            for &t in &h {
                let w = dual_generators[t].apply(&neighbors[i])?;
                if !index.contains_key(&w) {
                    if neighbors.len() >= cap {
                        return Err(Error::CapExceeded { what: "vertex link orbit", cap });
                    }
                    index.insert(w.clone(), neighbors.len());
                    transversal.push(dual_generators[t].mul(&transversal[i])?);
                    neighbors.push(w);
                }
            }
            i += 1;
        }
        Ok(WythoffStar { ring, gram, generators, dual_generators, x0, neighbors, transversal })
    }

    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }
}

/// Vertices within distance r of x₀ with every edge of X between them.
pub fn indefinite_ball(diagram: &AdornedDiagram, r: usize, cap: usize) -> Result<Graph> {
    let star = WythoffStar::new(diagram, cap)?;
    ball_from_star(&star, r, cap)
}

pub fn ball_from_star(star: &WythoffStar, r: usize, cap: usize) -> Result<Graph> {
    let dim = star.dim();
    let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(star.x0.clone(), 0)]);
    let mut mats = vec![IntMat::identity(dim)];
    let mut dist = vec![0usize];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new()];
    if r == 0 {
        let mut g = Graph::from_adjacency(adj);
        g.annotation = Some(dist);
        return Ok(g);
    }
    let mut u = 0;
    while u < mats.len() {
        let interior = dist[u] < r;
        for (j, nj) in star.neighbors.iter().enumerate() {
            let w = mats[u].apply(nj)?;
            let v = match index.get(&w) {
                Some(&v) => v,
                None if interior => {
                    let v = mats.len();
                    if v >= cap {
                        return Err(Error::CapExceeded { what: "ball", cap });
                    }
                    let m = mats[u].mul(&star.transversal[j])?;
                    index.insert(w, v);
                    mats.push(m);
                    dist.push(dist[u] + 1);
                    adj.push(Vec::new());
                    v
                }
                None => continue,
            };
            adj[u].push(v);
            adj[v].push(u);
        }
        u += 1;
    }
    let mut g = Graph::from_adjacency(adj);
    g.annotation = Some(dist);
    Ok(g)
}

fn cliques_of_size(g: &Graph, size: usize) -> Vec<Vec<usize>> {
    fn rec(g: &Graph, cur: &mut Vec<usize>, cand: &[usize], size: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for (i, &x) in cand.iter().enumerate() {
            let next = intersect_sorted(&cand[i + 1..], g.neighbors(x));
            cur.push(x);
            rec(g, cur, &next, size, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let all: Vec<usize> = (0..g.n()).collect();
    rec(g, &mut Vec::new(), &all, size, &mut out);
    out
}

/// Graph on the (i+1)-cliques, adjacent when they lie in a common (i+2)-clique.
pub fn iwalk_graph(g: &Graph, i: usize) -> Graph {
    let cells = cliques_of_size(g, i + 1);
    let index: HashMap<&[usize], usize> = cells.iter().enumerate().map(|(k, c)| (c.as_slice(), k)).collect();
    let mut edges = Vec::new();
    for big in cliques_of_size(g, i + 2) {
        let faces: Vec<usize> = (0..big.len())
            .map(|skip| {
                let f: Vec<usize> = big.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &x)| x).collect();
                index[f.as_slice()]
            })
            .collect();
        for a in 0..faces.len() {
            for b in a + 1..faces.len() {
                edges.push((faces[a], faces[b]));
            }
        }
    }
    Graph::from_edges(cells.len(), edges)
}
