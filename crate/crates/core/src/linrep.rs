//! Restriction of scalars: matrices over Z[θ] (or its reductions) as integer matrices
//! acting on flattened coordinate vectors.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::group::RingMatrix;
use crate::numring::{ModularRing, RealCyclotomicRing, RingElement};

/// Dense square i64 matrix with overflow-checked products.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMat {
    pub dim: usize,
    pub data: Vec<i64>,
    /// Largest absolute entry.
    bound: i64,
}

// Products of entries below this with vectors below this cannot overflow for dim ≤ 64.
const SAFE: i64 = 1 << 26;

fn max_abs(v: &[i64]) -> i64 {
    v.iter().map(|x| x.saturating_abs()).max().unwrap_or(0)
}

impl IntMat {
    pub fn from_data(dim: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), dim * dim);
        let bound = max_abs(&data);
        IntMat { dim, data, bound }
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1;
        }
        IntMat::from_data(dim, data)
    }

    /// Block (i, j) is the multiplication-by-m[i][j] matrix on the power basis.
    pub fn lift(ring: &RealCyclotomicRing, m: &RingMatrix) -> Result<Self> {
        let n = m.len();
        let d = ring.degree();
        let dim = n * d;
        let mut data = vec![0i64; dim * dim];
        let powers: Vec<RingElement> = (0..d)
            .map(|k| {
                let mut c = ring.zero();
                c.coords[k] = 1.into();
                c
            })
            .collect();
        for i in 0..n {
            for j in 0..n {
                if m[i][j].is_zero() {
                    continue;
                }
                for (l, pw) in powers.iter().enumerate() {
                    let col = ring.mul(&m[i][j], pw);
                    for k in 0..d {
                        data[(i * d + k) * dim + j * d + l] = col.coords[k].to_i64().ok_or(Error::Overflow)?;
                    }
                }
            }
        }
        Ok(IntMat::from_data(dim, data))
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        let dim = self.dim;
        let mut out = vec![0i64; dim];
        if self.bound < SAFE && max_abs(v) < SAFE && dim <= 64 {
            for (i, o) in out.iter_mut().enumerate() {
                let row = &self.data[i * dim..(i + 1) * dim];
                *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
            }
            return Ok(out);
        }
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * dim..(i + 1) * dim];
            let mut acc: i64 = 0;
            for (a, b) in row.iter().zip(v) {
                acc = a.checked_mul(*b).and_then(|p| acc.checked_add(p)).ok_or(Error::Overflow)?;
            }
            *o = acc;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        let dim = self.dim;
        let mut data = vec![0i64; dim * dim];
        let fast = self.bound < SAFE && other.bound < SAFE && dim <= 64;
        for i in 0..dim {
            for k in 0..dim {
                let a = self.data[i * dim + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * dim..(k + 1) * dim];
                let out = &mut data[i * dim..(i + 1) * dim];
                if fast {
                    for (o, b) in out.iter_mut().zip(brow) {
                        *o += a * b;
                    }
                } else {
                    for (o, b) in out.iter_mut().zip(brow) {
                        *o = a.checked_mul(*b).and_then(|p| o.checked_add(p)).ok_or(Error::Overflow)?;
                    }
                }
            }
        }
        if fast && max_abs(&data) >= SAFE {
            // recompute with checks; the fast path may only be trusted below the bound
            return IntMat { bound: i64::MAX, ..self.clone() }.mul(other);
        }
        Ok(IntMat::from_data(dim, data))
    }
}

/// Flattened coordinates of a vector over Z[θ].
pub fn flatten(v: &[RingElement]) -> Result<Vec<i64>> {
    v.iter().flat_map(|e| e.coords.iter()).map(|c| c.to_i64().ok_or(Error::Overflow)).collect()
}

/// Dense square matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMat {
    pub dim: usize,
    pub p: u64,
    pub data: Vec<u32>,
}

impl ModMat {
    pub fn identity(dim: usize, p: u64) -> Self {
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1;
        }
        ModMat { dim, p, data }
    }

    pub fn lift(modring: &ModularRing, m: &RingMatrix) -> Self {
        let n = m.len();
        let e = modring.degree();
        let dim = n * e;
        let p = modring.p();
        let mut data = vec![0u32; dim * dim];
        for i in 0..n {
            for j in 0..n {
                let a = modring.reduce(&m[i][j]);
                let mm = modring.mult_matrix(&a);
                for k in 0..e {
                    for l in 0..e {
                        data[(i * e + k) * dim + j * e + l] = mm[k][l] as u32;
                    }
                }
            }
        }
        ModMat { dim, p, data }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let dim = self.dim;
        let p = self.p;
        (0..dim)
            .map(|i| {
                let row = &self.data[i * dim..(i + 1) * dim];
                let mut acc: u64 = 0;
                for (a, b) in row.iter().zip(v) {
                    acc += *a as u64 * *b as u64;
                    if acc >= 1 << 62 {
                        acc %= p;
                    }
                }
                (acc % p) as u32
            })
            .collect()
    }

    pub fn mul(&self, other: &ModMat) -> ModMat {
        let dim = self.dim;
        let p = self.p;
        let mut acc = vec![0u64; dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.data[i * dim + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * dim..(k + 1) * dim];
                let out = &mut acc[i * dim..(i + 1) * dim];
                for (o, b) in out.iter_mut().zip(brow) {
                    *o = (*o + a * *b as u64) % p;
                }
            }
        }
        ModMat { dim, p, data: acc.into_iter().map(|x| x as u32).collect() }
    }

    pub fn transpose(&self) -> ModMat {
        let dim = self.dim;
        let mut data = vec![0; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                data[j * dim + i] = self.data[i * dim + j];
            }
        }
        ModMat { dim, p: self.p, data }
    }
}

pub fn reduce_vector(modring: &ModularRing, v: &[RingElement]) -> Vec<u32> {
    v.iter().flat_map(|e| modring.reduce(e)).map(|x| x as u32).collect()
}

/// Reduce a flattened vector over Z[θ].
pub fn reduce_flat(modring: &ModularRing, v: &[i64]) -> Vec<u32> {
    let p = modring.p() as i64;
    v.chunks(modring.source_degree())
        .flat_map(|c| {
            let coords = c.iter().map(|x| BigInt::from(x.rem_euclid(p))).collect();
            modring.reduce(&RingElement { coords })
        })
        .map(|x| x as u32)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;
    use crate::group::{generator_matrices, mat_mul, mat_vec};

    #[test]
    fn lift_is_a_homomorphism() {
        let dg = parse_diagram("string [3,5,3] ring 0").unwrap();
        let (gram, gens) = generator_matrices(&dg);
        let r = &gram.ring;
        let prod = mat_mul(r, &gens[1], &gens[2]);
        let a = IntMat::lift(r, &gens[1]).unwrap();
        let b = IntMat::lift(r, &gens[2]).unwrap();
        assert_eq!(a.mul(&b).unwrap(), IntMat::lift(r, &prod).unwrap());
        let v: Vec<RingElement> = (0..4).map(|i| r.element(vec![(i as i64).into(), (1 - i as i64).into()])).collect();
        let w = mat_vec(r, &prod, &v);
        assert_eq!(a.mul(&b).unwrap().apply(&flatten(&v).unwrap()).unwrap(), flatten(&w).unwrap());
    }

    #[test]
    fn modular_lift_matches() {
        let dg = parse_diagram("string [3,5,3] ring 0").unwrap();
        let (gram, gens) = generator_matrices(&dg);
        let r = &gram.ring;
        let m = ModularRing::residue_field(r, 7).unwrap();
        let prod = mat_mul(r, &gens[1], &gens[2]);
        assert_eq!(ModMat::lift(&m, &gens[1]).mul(&ModMat::lift(&m, &gens[2])), ModMat::lift(&m, &prod));
        let s = ModMat::lift(&m, &gens[0]);
        assert_eq!(s.mul(&s), ModMat::identity(s.dim, 7));
    }

    #[test]
    fn overflow_is_reported() {
        let m = IntMat::from_data(1, vec![i64::MAX / 2]);
        assert!(matches!(m.apply(&[4]), Err(Error::Overflow)));
    }
}
