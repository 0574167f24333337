//! Finite congruence quotients X/N from reduction of the reflection representation mod p.

use std::collections::HashSet;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};

use crate::diagram::AdornedDiagram;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{generator_matrices, transpose, RingMatrix};
use crate::linrep::{reduce_flat, ModMat};
use crate::numring::{is_prime, ModularRing, ModulusKind};
use crate::predict::predicted_vector;
use crate::skeleton::{ball_from_star, local_regularity_vector, regularity_vector, WythoffStar};
use crate::spectral::{second_eigenvalue, SpectralReport};

pub const DEFAULT_IMAGE_CAP: usize = 50_000_000;
pub const DEFAULT_ORBIT_CAP: usize = 5_000_000;

/// Reflection generators reduced into a finite ring, with the reduced form 2B̄.
#[derive(Clone, Debug)]
pub struct ModularGenerators {
    pub ring: ModularRing,
    /// S̄_s acting on F_p^{rank·e} (columns are images of basis vectors).
    pub matrices: Vec<ModMat>,
    /// Transposes, acting on reduced dual vectors.
    pub dual: Vec<ModMat>,
    pub form: ModMat,
}

type ModEntryMatrix = Vec<Vec<Vec<u64>>>;

fn reduce_matrix(r: &ModularRing, m: &RingMatrix) -> ModEntryMatrix {
    m.iter().map(|row| row.iter().map(|a| r.reduce(a)).collect()).collect()
}

fn entry_mul(r: &ModularRing, a: &ModEntryMatrix, b: &ModEntryMatrix) -> ModEntryMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(r.zero(), |acc, k| r.add(&acc, &r.mul(&a[i][k], &b[k][j]))))
                .collect()
        })
        .collect()
}

fn entry_transpose(a: &ModEntryMatrix) -> ModEntryMatrix {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].clone()).collect()).collect()
}

/// Reduce the generators mod p. The default ring is the residue field of the least prime
/// above p; `ModulusKind::Full` keeps all of Z[θ]/p.
pub fn modular_generators(diagram: &AdornedDiagram, p: u64, kind: ModulusKind) -> Result<ModularGenerators> {
    if p == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (gram, gens) = generator_matrices(diagram);
    let ring = match kind {
        ModulusKind::Full => ModularRing::full(&gram.ring, p)?,
        ModulusKind::ResidueField => ModularRing::residue_field(&gram.ring, p)?,
    };
    let form_e = reduce_matrix(&ring, &gram.entries);
    let n = diagram.rank();
    let mut id = vec![vec![ring.zero(); n]; n];
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = ring.from_int(1);
    }
    for (s, g) in gens.iter().enumerate() {
        let m = reduce_matrix(&ring, g);
        if entry_mul(&ring, &m, &m) != id {
            return Err(Error::Invalid(format!("reduced generator {s} is not an involution")));
        }
        if entry_mul(&ring, &entry_mul(&ring, &entry_transpose(&m), &form_e), &m) != form_e {
            return Err(Error::Invalid(format!("reduced generator {s} does not preserve the form")));
        }
    }
    let matrices: Vec<ModMat> = gens.iter().map(|g| ModMat::lift(&ring, g)).collect();
    let dual = gens.iter().map(|g| ModMat::lift(&ring, &transpose(g))).collect();
    let form = ModMat::lift(&ring, &gram.entries);
    Ok(ModularGenerators { ring, matrices, dual, form })
}

/// π_p(W) as an explicit list of matrices, in breadth-first order.
#[derive(Clone, Debug)]
pub struct ModularGroupImage {
    pub p: u64,
    pub generators: Vec<ModMat>,
    pub elements: IndexSet<Vec<u32>>,
}

impl ModularGroupImage {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> ModMat {
        let dim = self.generators[0].dim;
        ModMat { dim, p: self.p, data: self.elements[i].clone() }
    }
}

pub fn generate_image(generators: &[ModMat], cap: usize) -> Result<ModularGroupImage> {
    let first = generators.first().ok_or_else(|| Error::Invalid("no generators".into()))?;
    let (dim, p) = (first.dim, first.p);
    let mut elements = IndexSet::new();
    elements.insert(ModMat::identity(dim, p).data);
    let mut i = 0;
    while i < elements.len() {
        let g = ModMat { dim, p, data: elements[i].clone() };
        for s in generators {
            let h = s.mul(&g);
            if !elements.contains(&h.data) {
                if elements.len() >= cap {
                    return Err(Error::CapExceeded { what: "group image", cap });
                }
                elements.insert(h.data);
            }
        }
        i += 1;
    }
    Ok(ModularGroupImage { p, generators: generators.to_vec(), elements })
}

/// How vertices of X/N are identified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexModel {
    /// A vertex is its reduced dual vector.
    Point,
    /// A vertex is its reduced dual vector together with the reduced vectors of its star,
    /// so two cosets merge only when their whole stars coincide.
    Star,
}

/// Quotient skeleton together with the generator permutations of its vertices.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    pub graph: Graph,
    pub model: VertexModel,
    pub base_point: Vec<u32>,
    /// Reduced neighbours of x₀ in X, before any identification.
    pub reduced_star: Vec<Vec<u32>>,
    /// Orbit of the reduced base point.
    pub points: IndexSet<Vec<u32>>,
    /// Point under each vertex.
    pub vertex_point: Vec<u32>,
    pub permutations: Vec<Vec<u32>>,
}

fn orbit_closure<K, F>(seed: K, gens: usize, cap: usize, what: &'static str, act: F) -> Result<(IndexSet<K>, Vec<Vec<u32>>)>
where
    K: std::hash::Hash + Eq + Clone,
    F: Fn(usize, &K) -> K,
{
    let mut set: IndexSet<K> = IndexSet::new();
    set.insert(seed);
    let mut perms: Vec<Vec<u32>> = vec![Vec::new(); gens];
    let mut i = 0;
    while i < set.len() {
        let v = set[i].clone();
        for (s, perm) in perms.iter_mut().enumerate() {
            let w = act(s, &v);
            let j = match set.get_index_of(&w) {
                Some(j) => j,
                None => {
                    if set.len() >= cap {
                        return Err(Error::CapExceeded { what, cap });
                    }
                    set.insert_full(w).0
                }
            };
            perm.push(j as u32);
        }
        i += 1;
    }
    Ok((set, perms))
}

/// X/N: vertices are the image orbit of the reduced base vertex, edges the orbit of the base edge.
pub fn quotient_skeleton(
    diagram: &AdornedDiagram,
    star: &WythoffStar,
    gens: &ModularGenerators,
    model: VertexModel,
    orbit_cap: usize,
) -> Result<QuotientGraph> {
    let r = &gens.ring;
    let s0 = *diagram.ringed.first().ok_or(Error::RingCount(0))?;
    let x0 = reduce_flat(r, &star.x0);
    let reduced_star: Vec<Vec<u32>> = star.neighbors.iter().map(|nj| reduce_flat(r, nj)).collect();
    let k = gens.dual.len();
    let (points, point_perms) =
        orbit_closure(x0.clone(), k, orbit_cap, "quotient orbit", |s, v: &Vec<u32>| gens.dual[s].apply(v))?;
    let (vertex_point, perms): (Vec<u32>, Vec<Vec<u32>>) = match model {
        VertexModel::Point => ((0..points.len() as u32).collect(), point_perms),
        VertexModel::Star => {
            let mut seed: Vec<u32> = reduced_star.iter().map(|v| points.get_index_of(v).unwrap() as u32).collect();
            seed.sort_unstable();
            seed.dedup();
            seed.insert(0, 0);
            let (keys, perms) = orbit_closure(seed, k, orbit_cap, "quotient orbit", |s, key: &Vec<u32>| {
                let pp = &point_perms[s];
                let mut rest: Vec<u32> = key[1..].iter().map(|&x| pp[x as usize]).collect();
                rest.sort_unstable();
                rest.insert(0, pp[key[0] as usize]);
                rest
            })?;
            (keys.iter().map(|key| key[0]).collect(), perms)
        }
    };
    let mut frontier: Vec<(u32, u32)> = Vec::new();
    let mut edges: HashSet<(u32, u32)> = HashSet::new();
    let b = perms[s0][0];
    if b != 0 {
        edges.insert((0, b));
        frontier.push((0, b));
    }
    while let Some((a, b)) = frontier.pop() {
        for perm in &perms {
            let (c, d) = (perm[a as usize], perm[b as usize]);
            let e = (c.min(d), c.max(d));
            if c != d && edges.insert(e) {
                frontier.push(e);
            }
        }
    }
    let graph = Graph::from_edges(vertex_point.len(), edges.into_iter().map(|(a, b)| (a as usize, b as usize)));
    Ok(QuotientGraph { graph, model, base_point: x0, reduced_star, points, vertex_point, permutations: perms })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientReport {
    pub prime: u64,
    pub model: VertexModel,
    pub modulus: String,
    pub vertices: usize,
    pub edges: usize,
    pub degree: Option<usize>,
    pub measured: Option<Vec<usize>>,
    pub connected: Option<Vec<bool>>,
    /// Level and witness clique when the quotient is not regular.
    pub irregular_at: Option<(usize, Vec<usize>)>,
    pub expected: Vec<usize>,
    pub star_injective: bool,
    pub star_edges: (usize, usize),
    pub ball2_sizes: (usize, usize),
    pub preserved: bool,
    pub image_order: Option<usize>,
    pub stabilizer_order: Option<usize>,
    pub parabolic_order: Option<usize>,
    pub spectral: Option<SpectralReport>,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct QuotientOptions {
    pub image_cap: usize,
    pub orbit_cap: usize,
    pub coset_cap: usize,
    pub tol: f64,
    pub generate_image: bool,
    pub spectrum: bool,
    pub kind: ModulusKind,
    pub model: VertexModel,
}

impl Default for QuotientOptions {
    fn default() -> Self {
        QuotientOptions {
            image_cap: DEFAULT_IMAGE_CAP,
            orbit_cap: DEFAULT_ORBIT_CAP,
            coset_cap: crate::group::DEFAULT_COSET_CAP,
            tol: crate::spectral::DEFAULT_TOL,
            generate_image: false,
            spectrum: true,
            kind: ModulusKind::ResidueField,
            model: VertexModel::Star,
        }
    }
}

fn star_edge_count(g: &Graph, v: usize) -> usize {
    let nb = g.neighbors(v);
    nb.iter().map(|&a| g.neighbors(a).iter().filter(|b| nb.binary_search(b).is_ok()).count()).sum::<usize>() / 2
}

/// Compare X/N with X around a vertex: regularity vectors, the closed star, and ball sizes.
pub fn preservation_check(
    diagram: &AdornedDiagram,
    star: &WythoffStar,
    gens: &ModularGenerators,
    q: &QuotientGraph,
    opts: &QuotientOptions,
) -> Result<QuotientReport> {
    let prediction = predicted_vector(diagram, 16, opts.coset_cap)?;
    let expected = prediction.degrees.clone();
    let g = &q.graph;
    let mut notes = Vec::new();
    let x_ball = ball_from_star(star, 2, opts.orbit_cap)?;
    let x_ball2 = x_ball.n();
    let x_star_edges = star_edge_count(&x_ball, 0);
    let q_ball2 = g.ball_vertices(0, 2).len();
    let distinct: HashSet<&Vec<u32>> = q.reduced_star.iter().collect();
    let star_injective = distinct.len() == star.degree() && !distinct.contains(&q.base_point);
    let q_star_edges = star_edge_count(g, 0);
    let degree = g.regular_degree();
    let levels = expected.len().max(1);
    let (measured, connected, irregular_at) = match regularity_vector(g, levels, true) {
        Ok(rv) => (Some(rv.degrees), Some(rv.connected), None),
        Err(Error::Irregular { level, witness }) => (None, None, Some((level, witness))),
        Err(e) => return Err(e),
    };
    let vectors_match = measured.as_ref().is_some_and(|m| *m == expected);
    let preserved = vectors_match && star_injective && q_star_edges == x_star_edges;
    if x_ball2 != q_ball2 {
        notes.push(format!("radius-2 balls differ: {x_ball2} in X, {q_ball2} in the quotient"));
    }
    if !star_injective {
        notes.push("reduction identifies vertices of the closed star".into());
    }
    if g.n() == 1 {
        notes.push("quotient collapsed to a single vertex".into());
    }
    let (image_order, stabilizer_order, parabolic_order) = if opts.generate_image {
        let img = generate_image(&gens.dual, opts.image_cap)?;
        let star_set: HashSet<&Vec<u32>> = q.reduced_star.iter().collect();
        let stab = img
            .elements
            .iter()
            .filter(|data| {
                let m = ModMat { dim: img.generators[0].dim, p: img.p, data: data.to_vec() };
                m.apply(&q.base_point) == q.base_point
                    && (q.model == VertexModel::Point
                        || q.reduced_star.iter().all(|v| star_set.contains(&m.apply(v))))
            })
            .count();
        let parabolic: Vec<ModMat> =
            (0..diagram.rank()).filter(|&s| !diagram.is_ringed(s)).map(|s| gens.dual[s].clone()).collect();
        let h = if parabolic.is_empty() { 1 } else { generate_image(&parabolic, opts.image_cap)?.order() };
        if stab != h {
            notes.push(format!("vertex stabiliser has order {stab}, reduced parabolic has order {h}"));
        }
        (Some(img.order()), Some(stab), Some(h))
    } else {
        (None, None, None)
    };
    let spectral = if opts.spectrum && degree.is_some() && g.n() > 1 && g.is_connected() {
        Some(second_eigenvalue(g, opts.tol)?)
    } else {
        None
    };
    Ok(QuotientReport {
        prime: gens.ring.p(),
        model: q.model,
        modulus: gens.ring.to_string(),
        vertices: g.n(),
        edges: g.edge_count(),
        degree,
        measured,
        connected,
        irregular_at,
        expected,
        star_injective,
        star_edges: (x_star_edges, q_star_edges),
        ball2_sizes: (x_ball2, q_ball2),
        preserved,
        image_order,
        stabilizer_order,
        parabolic_order,
        spectral,
        notes,
    })
}

/// Full pipeline for one prime.
pub fn quotient(diagram: &AdornedDiagram, p: u64, opts: &QuotientOptions) -> Result<(QuotientGraph, QuotientReport)> {
    let star = WythoffStar::new(diagram, opts.orbit_cap)?;
    let gens = modular_generators(diagram, p, opts.kind)?;
    let q = quotient_skeleton(diagram, &star, &gens, opts.model, opts.orbit_cap)?;
    let report = preservation_check(diagram, &star, &gens, &q, opts)?;
    Ok((q, report))
}

/// Outcome of scanning primes in increasing order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimeSearch {
    pub tried: Vec<(u64, String)>,
    pub found: Option<QuotientReport>,
}

/// First odd prime up to `max_p` whose quotient preserves regularity under the caps.
pub fn search_primes(diagram: &AdornedDiagram, max_p: u64, opts: &QuotientOptions) -> Result<PrimeSearch> {
    let mut tried = Vec::new();
    for p in (3..=max_p).filter(|&p| is_prime(p)) {
        match quotient(diagram, p, opts) {
            Ok((_, rep)) if rep.preserved => return Ok(PrimeSearch { tried, found: Some(rep) }),
            Ok((_, rep)) => tried.push((p, format!("not preserved ({} vertices, measured {:?})", rep.vertices, rep.measured))),
            Err(Error::CapExceeded { what, cap }) => {
                tried.push((p, format!("{what} exceeds cap {cap}")));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(PrimeSearch { tried, found: None })
}

/// Local regularity of a quotient vertex, for graphs too large for a full check.
pub fn local_vector(q: &QuotientGraph, levels: usize) -> Result<Vec<usize>> {
    Ok(local_regularity_vector(&q.graph, 0, levels)?.degrees)
}
