//! Exact arithmetic in Z[θ] with θ = 2cos(π/L), and its reductions modulo primes.

pub mod fpoly;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::diagram::Label;
use crate::error::{Error, Result};

/// Power-basis coordinates (1, θ, …, θ^{d−1}).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElement {
    pub coords: Vec<BigInt>,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The integer value if the element lies in Z.
    pub fn as_integer(&self) -> Option<&BigInt> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct RealCyclotomicRing {
    conductor: u64,
    minpoly: Vec<BigInt>,
    theta: f64,
    isolating: (BigRational, BigRational),
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division by a monic polynomial.
fn int_poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].clone();
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    debug_assert!(r.iter().all(Zero::is_zero));
    q
}

pub fn cyclotomic(n: u64) -> Vec<BigInt> {
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = int_poly_div_exact(&num, &cyclotomic(d));
        }
    }
    num
}

/// Chebyshev-style D_k with D_0 = 2, D_1 = y, D_{k+1} = y D_k − D_{k−1}.
fn dickson_polys(kmax: usize) -> Vec<Vec<BigInt>> {
    let mut ds: Vec<Vec<BigInt>> = vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
    for k in 1..kmax {
        let mut next = vec![BigInt::zero(); k + 2];
        for (i, c) in ds[k].iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in ds[k - 1].iter().enumerate() {
            next[i] -= c;
        }
        ds.push(next);
    }
    ds
}

fn minimal_polynomial(l: u64) -> Vec<BigInt> {
    match l {
        1 => return vec![BigInt::from(2), BigInt::one()],
        2 => return vec![BigInt::zero(), BigInt::one()],
        _ => {}
    }
    let phi = cyclotomic(2 * l);
    let d = (phi.len() - 1) / 2;
    let ds = dickson_polys(d);
    let mut g = vec![BigInt::zero(); d + 1];
    g[0] += &phi[d];
    for k in 1..=d {
        for (i, c) in ds[k].iter().enumerate() {
            g[i] += &phi[d + k] * c;
        }
    }
    g
}

fn eval_rational(poly: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in poly.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

fn interval_eval(poly: &[BigInt], lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in poly.iter().rev() {
        let cands = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mut mn = cands[0].clone();
        let mut mx = cands[0].clone();
        for v in &cands[1..] {
            if *v < mn {
                mn = v.clone();
            }
            if *v > mx {
                mx = v.clone();
            }
        }
        let c = BigRational::from_integer(c.clone());
        a = mn + &c;
        b = mx + c;
    }
    (a, b)
}

impl RealCyclotomicRing {
    pub fn new(conductor: u64) -> Self {
        assert!(conductor >= 1, "conductor must be positive");
        let minpoly = minimal_polynomial(conductor);
        let theta = 2.0 * (std::f64::consts::PI / conductor as f64).cos();
        let d = minpoly.len() - 1;
        let isolating = if d == 1 {
            let r = BigRational::from_integer(-minpoly[0].clone());
            (r.clone(), r)
        } else {
            let l = conductor as f64;
            let gap = 4.0 * (2.0 * std::f64::consts::PI / l).sin() * (std::f64::consts::PI / l).sin();
            let delta = gap / 4.0;
            let lo = BigRational::from_float(theta - delta).unwrap();
            let hi = BigRational::from_float(theta + delta).unwrap();
            let slo = eval_rational(&minpoly, &lo);
            let shi = eval_rational(&minpoly, &hi);
            assert!(
                slo.signum() * shi.signum() < BigRational::zero(),
                "failed to isolate 2cos(pi/{conductor})"
            );
            (lo, hi)
        };
        let ring = RealCyclotomicRing { conductor, minpoly, theta, isolating };
        debug_assert!(ring.minpoly_residual().abs() < 1e-10);
        ring
    }

    /// Conductor for a set of edge labels: lcm of the labels that are not already integral.
    pub fn for_labels<I: IntoIterator<Item = Label>>(labels: I) -> Self {
        let mut l = 1u64;
        for lab in labels {
            if let Label::Finite(m) = lab {
                if m > 3 {
                    l = l.lcm(&(m as u64));
                }
            }
        }
        Self::new(l)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn theta_f64(&self) -> f64 {
        self.theta
    }

    /// |p(θ)| relative to max(1, Σ|cᵢ||θ|ⁱ).
    pub fn minpoly_residual(&self) -> f64 {
        let value = self.minpoly.iter().rev().fold(0.0, |acc, c| acc * self.theta + c.to_f64().unwrap());
        let scale = self.minpoly.iter().rev().fold(0.0, |acc, c| acc * self.theta.abs() + c.to_f64().unwrap().abs());
        value.abs() / scale.max(1.0)
    }

    pub fn zero(&self) -> RingElement {
        RingElement { coords: vec![BigInt::zero(); self.degree()] }
    }

    pub fn from_int(&self, n: i64) -> RingElement {
        let mut e = self.zero();
        e.coords[0] = BigInt::from(n);
        e
    }

    pub fn one(&self) -> RingElement {
        self.from_int(1)
    }

    pub fn theta(&self) -> RingElement {
        self.reduce_poly(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn element(&self, coords: Vec<BigInt>) -> RingElement {
        assert_eq!(coords.len(), self.degree());
        RingElement { coords }
    }

    fn reduce_poly(&self, mut c: Vec<BigInt>) -> RingElement {
        let d = self.degree();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let k = c.len() - d;
            for (j, m) in self.minpoly[..d].iter().enumerate() {
                c[k + j] -= &top * m;
            }
        }
        c.resize(d, BigInt::zero());
        RingElement { coords: c }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement { coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect() }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        RingElement { coords: a.coords.iter().map(|x| -x).collect() }
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        self.reduce_poly(int_poly_mul(&a.coords, &b.coords))
    }

    pub fn eval(&self, a: &RingElement) -> f64 {
        a.coords.iter().rev().fold(0.0, |acc, c| acc * self.theta + c.to_f64().unwrap())
    }

    /// 2cos(π/m) as a ring element; ∞ gives 2.
    pub fn embed_label(&self, m: Label) -> Result<RingElement> {
        let m = match m {
            Label::Infinite => return Ok(self.from_int(2)),
            Label::Finite(m) => m,
        };
        if m == 0 {
            return Err(Error::Invalid("label 0".into()));
        }
        if self.conductor % m as u64 != 0 {
            return match m {
                1 => Ok(self.from_int(-2)),
                2 => Ok(self.zero()),
                3 => Ok(self.one()),
                _ => Err(Error::LabelNotDividing { label: m, conductor: self.conductor }),
            };
        }
        let k = (self.conductor / m as u64) as usize;
        let theta = self.theta();
        let mut prev = self.from_int(2);
        let mut cur = theta.clone();
        if k == 0 {
            return Ok(prev);
        }
        for _ in 1..k {
            let next = self.sub(&self.mul(&theta, &cur), &prev);
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// Exact sign of the real number represented by `a`.
    pub fn sign(&self, a: &RingElement) -> Ordering {
        if a.is_zero() {
            return Ordering::Equal;
        }
        if self.degree() == 1 {
            return a.coords[0].cmp(&BigInt::zero());
        }
        let v = self.eval(a);
        let mag: f64 = a
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| c.to_f64().unwrap().abs() * self.theta.abs().max(1.0).powi(i as i32))
            .sum();
        if v.is_finite() && v.abs() > mag * 1e-12 {
            return v.partial_cmp(&0.0).unwrap();
        }
        let (mut lo, mut hi) = self.isolating.clone();
        let two = BigRational::from_integer(BigInt::from(2));
        let lo_sign = eval_rational(&self.minpoly, &lo).signum();
        loop {
            let (a_lo, a_hi) = interval_eval(&a.coords, &lo, &hi);
            if a_lo > BigRational::zero() {
                return Ordering::Greater;
            }
            if a_hi < BigRational::zero() {
                return Ordering::Less;
            }
            let mid = (&lo + &hi) / &two;
            let s = eval_rational(&self.minpoly, &mid).signum();
            if s == lo_sign {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    pub fn format(&self, a: &RingElement) -> String {
        let mut terms = Vec::new();
        for (i, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = match i {
                0 => c.to_string(),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ").replace("+ -", "- ")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModulusKind {
    /// Z[θ]/p with the whole minimal polynomial.
    Full,
    /// Z[θ]/𝔭 for the prime ideal picked by the least irreducible factor.
    ResidueField,
}

/// Z[θ]/(p, g) for a monic g dividing the minimal polynomial mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularRing {
    p: u64,
    modulus: Vec<u64>,
    kind: ModulusKind,
    source_degree: usize,
}

fn check_prime(p: u64) -> Result<()> {
    if p < 2 || (2..).take_while(|i| i * i <= p).any(|i| p % i == 0) {
        return Err(Error::NotPrime(p));
    }
    if p >= 1 << 31 {
        return Err(Error::UnsupportedPrime(p));
    }
    Ok(())
}

pub fn is_prime(p: u64) -> bool {
    check_prime(p).is_ok()
}

fn minpoly_mod(ring: &RealCyclotomicRing, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    ring.minpoly.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect()
}

impl ModularRing {
    pub fn full(ring: &RealCyclotomicRing, p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(ModularRing { p, modulus: minpoly_mod(ring, p), kind: ModulusKind::Full, source_degree: ring.degree() })
    }

    pub fn residue_field(ring: &RealCyclotomicRing, p: u64) -> Result<Self> {
        check_prime(p)?;
        if p == 2 {
            return Err(Error::UnsupportedPrime(p));
        }
        let f = minpoly_mod(ring, p);
        let g = fpoly::least_irreducible_factor(&f, p);
        Ok(ModularRing { p, modulus: g, kind: ModulusKind::ResidueField, source_degree: ring.degree() })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Coordinates per element of the ring being reduced.
    pub fn source_degree(&self) -> usize {
        self.source_degree
    }

    pub fn kind(&self) -> ModulusKind {
        self.kind
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of F_p coordinates per element.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn is_field(&self) -> bool {
        fpoly::is_irreducible(&self.modulus, self.p)
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    pub fn from_int(&self, n: i64) -> Vec<u64> {
        let mut e = self.zero();
        e[0] = n.rem_euclid(self.p as i64) as u64;
        e
    }

    fn reduce_poly(&self, c: Vec<u64>) -> Vec<u64> {
        let mut r = fpoly::rem(&c, &self.modulus, self.p);
        r.resize(self.degree(), 0);
        r
    }

    pub fn reduce(&self, a: &RingElement) -> Vec<u64> {
        assert_eq!(a.coords.len(), self.source_degree, "element from a different ring");
        let pb = BigInt::from(self.p);
        let c: Vec<u64> = a.coords.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect();
        self.reduce_poly(c)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.reduce_poly(fpoly::mul(a, b, self.p))
    }

    /// Matrix of multiplication by `a` on the F_p-basis (1, θ, …); column j is a·θ^j.
    pub fn mult_matrix(&self, a: &[u64]) -> Vec<Vec<u64>> {
        let e = self.degree();
        let mut cols = Vec::with_capacity(e);
        for j in 0..e {
            let mut basis = vec![0u64; j + 1];
            basis[j] = 1;
            cols.push(self.mul(a, &self.reduce_poly(basis)));
        }
        (0..e).map(|i| (0..e).map(|j| cols[j][i]).collect()).collect()
    }

    /// Order of the ring: p^degree.
    pub fn size(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree() as u32)
    }
}

impl fmt::Display for ModularRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[t]/(", self.p)?;
        let terms: Vec<String> = self
            .modulus
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| match i {
                0 => c.to_string(),
                1 => format!("{c}t"),
                _ => format!("{c}t^{i}"),
            })
            .collect();
        write!(f, "{})", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_minimal_polynomials() {
        assert_eq!(RealCyclotomicRing::new(3).minpoly(), ints(&[-1, 1]).as_slice());
        assert_eq!(RealCyclotomicRing::new(5).minpoly(), ints(&[-1, -1, 1]).as_slice());
        assert_eq!(RealCyclotomicRing::new(4).minpoly(), ints(&[-2, 0, 1]).as_slice());
        assert_eq!(RealCyclotomicRing::new(7).minpoly(), ints(&[1, -2, -1, 1]).as_slice());
        assert_eq!(RealCyclotomicRing::new(1).degree(), 1);
        assert_eq!(RealCyclotomicRing::new(2).degree(), 1);
    }

    #[test]
    fn labels() {
        let r = RealCyclotomicRing::new(15);
        let three = r.embed_label(Label::Finite(3)).unwrap();
        assert!((r.eval(&three) - 1.0).abs() < 1e-12);
        assert_eq!(three, r.one());
        let r5 = RealCyclotomicRing::new(5);
        assert_eq!(r5.embed_label(Label::Finite(5)).unwrap(), r5.theta());
        assert!(r5.embed_label(Label::Finite(2)).unwrap().is_zero());
        assert!(matches!(r5.embed_label(Label::Finite(7)), Err(Error::LabelNotDividing { .. })));
        assert_eq!(r5.embed_label(Label::Infinite).unwrap(), r5.from_int(2));
    }

    #[test]
    fn signs_near_zero() {
        // φ^20 − F20·φ − F19 = 0, so perturb it by tiny amounts
        let r = RealCyclotomicRing::new(5);
        let phi = r.theta();
        let mut pw = r.one();
        for _ in 0..20 {
            pw = r.mul(&pw, &phi);
        }
        let lhs = r.sub(&pw, &r.element(ints(&[4181, 6765])));
        assert!(lhs.is_zero());
        // F21 − F20·φ = φ^−20 > 0
        let e = r.element(ints(&[10946, -6765]));
        assert_eq!(r.sign(&e), Ordering::Greater);
        assert_eq!(r.sign(&r.neg(&e)), Ordering::Less);
        // F61 − F60·φ ≈ 3e−13, below the floating-point filter
        let tiny = r.element(ints(&[2504730781961, -1548008755920]));
        assert_eq!(r.sign(&tiny), Ordering::Greater);
        assert_eq!(r.sign(&r.neg(&tiny)), Ordering::Less);
    }

    #[test]
    fn golden_mod_two() {
        let r = RealCyclotomicRing::new(5);
        let m = ModularRing::full(&r, 2).unwrap();
        assert_eq!(m.reduce(&r.theta()), vec![0, 1]);
        assert_eq!(m.reduce(&r.zero()), vec![0, 0]);
    }

    #[test]
    fn klein_prime_is_totally_ramified() {
        let r = RealCyclotomicRing::new(7);
        let f = ModularRing::residue_field(&r, 7).unwrap();
        assert_eq!(f.degree(), 1);
        assert_eq!(f.reduce(&r.theta()), vec![5]);
        let full = ModularRing::full(&r, 7).unwrap();
        assert!(!full.is_field());
    }

    #[test]
    fn split_prime_eleven() {
        let r = RealCyclotomicRing::new(5);
        let full = ModularRing::full(&r, 11).unwrap();
        assert!(!full.is_field());
        let f = ModularRing::residue_field(&r, 11).unwrap();
        assert_eq!(f.degree(), 1);
        let inert = ModularRing::residue_field(&r, 7).unwrap();
        assert_eq!(inert.degree(), 2);
        assert!(inert.is_field());
    }
}
