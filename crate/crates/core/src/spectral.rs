//! Second adjacency eigenvalue, Cheeger–Buser bounds and exact Cheeger constants.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_TOL: f64 = 1e-8;
/// Krylov dimension limit; the basis is kept in memory for reorthogonalisation.
pub const MAX_LANCZOS_STEPS: usize = 400;
const BASIS_BUDGET: usize = 100_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub vertices: usize,
    pub degree: usize,
    pub lambda2: f64,
    /// Norm of A x − λ₂ x for the returned unit Ritz vector x ⟂ 1.
    pub residual: f64,
    pub gap: f64,
    pub cheeger_lower: f64,
    pub cheeger_upper: f64,
}

pub fn cheeger_bounds(k: f64, lambda2: f64) -> Result<(f64, f64)> {
    if lambda2 > k + 1e-9 {
        return Err(Error::Invalid(format!("lambda2 = {lambda2} exceeds degree {k}")));
    }
    let s = (k - lambda2).max(0.0);
    Ok((s / 2.0, (2.0 * k * s).sqrt()))
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

fn adj_mul(g: &Graph, x: &[f64], out: &mut [f64]) {
    let row = |v: usize| g.neighbors(v).iter().map(|&w| x[w]).sum::<f64>();
    if out.len() >= 1 << 14 {
        out.par_iter_mut().enumerate().for_each(|(v, o)| *o = row(v));
    } else {
        out.iter_mut().enumerate().for_each(|(v, o)| *o = row(v));
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn deflate_ones(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn normalize(x: &mut [f64]) -> f64 {
    let n = dot(x, x).sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
    n
}

/// Largest eigenvalue of A on the complement of the constant vector (Lanczos with full
/// reorthogonalisation, index-seeded start vector).
pub fn second_eigenvalue(g: &Graph, tol: f64) -> Result<SpectralReport> {
    let n = g.n();
    let k = g.regular_degree().ok_or(Error::Irregular { level: 0, witness: Vec::new() })?;
    if n < 2 {
        return Err(Error::Invalid("need at least two vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::GraphDisconnected);
    }
    let max_dim = (n - 1).min(MAX_LANCZOS_STEPS).min((BASIS_BUDGET / n).max(20));
    let mut q: Vec<f64> = (0..n).map(|i| (splitmix(i as u64) >> 11) as f64 / (1u64 << 53) as f64 - 0.5).collect();
    deflate_ones(&mut q);
    normalize(&mut q);
    let mut basis: Vec<Vec<f64>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut best = (f64::NEG_INFINITY, f64::INFINITY, Vec::new());
    loop {
        let j = basis.len() - 1;
        adj_mul(g, &basis[j], &mut w);
        let a = dot(&w, &basis[j]);
        alpha.push(a);
        // full reorthogonalisation, twice, against the basis and the constant vector
        for _ in 0..2 {
            deflate_ones(&mut w);
            for b in &basis {
                let c = dot(&w, b);
                w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let m = alpha.len();
        let check = m == max_dim || m < 10 || m % (m / 10).max(10) == 0;
        let b_next = dot(&w, &w).sqrt();
        if check || b_next < 1e-10 {
            let mut t = DMatrix::<f64>::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alpha[i];
                if i + 1 < m {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let (idx, &theta) =
                eig.eigenvalues.iter().enumerate().max_by(|a, b| a.1.partial_cmp(b.1).unwrap()).unwrap();
            let y = eig.eigenvectors.column(idx);
            let mut x = vec![0.0; n];
            for (i, b) in basis.iter().enumerate() {
                x.iter_mut().zip(b).for_each(|(xv, bv)| *xv += y[i] * bv);
            }
            deflate_ones(&mut x);
            normalize(&mut x);
            let mut ax = vec![0.0; n];
            adj_mul(g, &x, &mut ax);
            let rq = dot(&x, &ax);
            let res = ax.iter().zip(&x).map(|(p, q)| (p - rq * q).powi(2)).sum::<f64>().sqrt();
            let theta = rq.max(theta.min(rq));
            if res < best.1 {
                best = (theta, res, x);
            }
            if res <= tol || b_next < 1e-10 || m == max_dim {
                break;
            }
        }
        beta.push(b_next);
        w.iter_mut().for_each(|v| *v /= b_next);
        basis.push(std::mem::replace(&mut w, vec![0.0; n]));
    }
    let (lambda2, residual, _) = best;
    if residual > tol.max(1e-6) {
        return Err(Error::Invalid(format!("Lanczos did not converge: residual {residual:e}")));
    }
    let (lo, hi) = cheeger_bounds(k as f64, lambda2)?;
    Ok(SpectralReport { vertices: n, degree: k, lambda2, residual, gap: k as f64 - lambda2, cheeger_lower: lo, cheeger_upper: hi })
}

/// All adjacency eigenvalues, ascending, by a dense symmetric solve.
pub fn dense_spectrum(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheegerExact {
    pub numerator: u64,
    pub denominator: u64,
    pub witness: Vec<usize>,
}

impl CheegerExact {
    pub fn value(&self) -> Ratio<u64> {
        Ratio::new(self.numerator, self.denominator)
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

pub const CHEEGER_MAX_VERTICES: usize = 26;

/// True iff the sorted member list of `a` precedes that of `b` lexicographically.
fn lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let x = diff.trailing_zeros();
    if a >> x & 1 == 1 {
        // a has x; b continues with something larger, or stops (then b is a prefix of a)
        (b >> x) != 0
    } else {
        (a >> x) == 0
    }
}

/// min |∂S| / |S| over nonempty S with |S| ≤ n/2, by Gray-code enumeration of all subsets.
pub fn exact_cheeger(g: &Graph) -> Result<CheegerExact> {
    let n = g.n();
    if n > CHEEGER_MAX_VERTICES {
        return Err(Error::TooLarge { n, limit: CHEEGER_MAX_VERTICES });
    }
    if n < 2 {
        return Err(Error::Invalid("need at least two vertices".into()));
    }
    let nb: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    let deg: Vec<i64> = (0..n).map(|v| g.degree(v) as i64).collect();
    let mut set: u32 = 0;
    let mut boundary: i64 = 0;
    let mut best: Option<(u64, u64, u32)> = None;
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let bit = 1u32 << v;
        if set & bit == 0 {
            boundary += deg[v] - 2 * (nb[v] & set).count_ones() as i64;
            set |= bit;
        } else {
            set &= !bit;
            boundary -= deg[v] - 2 * (nb[v] & set).count_ones() as i64;
        }
        let size = set.count_ones() as u64;
        if size == 0 || 2 * size > n as u64 {
            continue;
        }
        let b = boundary as u64;
        let better = match best {
            None => true,
            Some((bn, bd, bs)) => {
                let lhs = b * bd;
                let rhs = bn * size;
                lhs < rhs || (lhs == rhs && lex_less(set, bs))
            }
        };
        if better {
            best = Some((b, size, set));
        }
    }
    let (b, s, set) = best.unwrap();
    let r = Ratio::new(b, s);
    Ok(CheegerExact {
        numerator: *r.numer(),
        denominator: *r.denom(),
        witness: (0..n).filter(|&v| set >> v & 1 == 1).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub name: String,
    pub vertices: usize,
    pub degree: usize,
    pub lambda2: f64,
    pub gap: f64,
    pub cheeger_lower: f64,
    pub cheeger_upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub rows: Vec<FamilyRow>,
    pub min_gap: f64,
    pub threshold: f64,
    pub above_threshold: bool,
}

impl FamilyReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{:<20} {:>9} {:>4} {:>14} {:>12} {:>10} {:>10}\n",
            "graph", "vertices", "k", "lambda2", "gap", "h_lower", "h_upper"
        );
        for r in &self.rows {
            s.push_str(&format!(
                "{:<20} {:>9} {:>4} {:>14.9} {:>12.9} {:>10.6} {:>10.6}\n",
                r.name, r.vertices, r.degree, r.lambda2, r.gap, r.cheeger_lower, r.cheeger_upper
            ));
        }
        s.push_str(&format!("min gap {:.9} (threshold {}) -> {}\n", self.min_gap, self.threshold, self.above_threshold));
        s
    }
}

pub fn family_report(graphs: &[(String, Graph)], threshold: f64, tol: f64) -> Result<FamilyReport> {
    let mut rows = Vec::new();
    for (name, g) in graphs {
        let r = second_eigenvalue(g, tol)?;
        rows.push(FamilyRow {
            name: name.clone(),
            vertices: r.vertices,
            degree: r.degree,
            lambda2: r.lambda2,
            gap: r.gap,
            cheeger_lower: r.cheeger_lower,
            cheeger_upper: r.cheeger_upper,
        });
    }
    let min_gap = rows.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min);
    Ok(FamilyReport { rows, min_gap, threshold, above_threshold: min_gap > threshold })
}
