//! Dense polynomials over F_p, coefficients low to high, no trailing zeros.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub type Poly = Vec<u64>;

pub fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a % p, p - 2, p)
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(out)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder of `a` by nonzero `b`.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let db = degree(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], p);
    let mut r = trim(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * bj % p) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => {
            let inv = inv_mod(lead, p);
            a.iter().map(|&c| c * inv % p).collect()
        }
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod_big(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Poly {
    let mut result: Poly = rem(&[1], m, p);
    let b = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        result = mulmod(&result, &result, m, p);
        if e.bit(i) {
            result = mulmod(&result, &b, m, p);
        }
    }
    result
}

pub fn powmod(base: &[u64], e: u64, m: &[u64], p: u64) -> Poly {
    powmod_big(base, &BigUint::from(e), m, p)
}

/// Distinct irreducible factors of smallest degree of `f`, as (degree, product).
fn smallest_degree_part(f: &[u64], p: u64) -> (usize, Poly) {
    let n = degree(f).expect("nonzero polynomial");
    let x: Poly = vec![0, 1];
    let mut xpk = rem(&x, f, p);
    for k in 1..=n {
        xpk = powmod(&xpk, p, f, p);
        let g = gcd(f, &sub(&xpk, &x, p), p);
        if degree(&g).unwrap_or(0) > 0 {
            return (k, g);
        }
    }
    unreachable!("a polynomial of positive degree has an irreducible factor")
}

/// Deterministic Cantor–Zassenhaus split of a squarefree product of degree-k irreducibles.
fn equal_degree_split(h: &[u64], k: usize, p: u64, out: &mut Vec<Poly>) {
    let n = degree(h).unwrap();
    if n == k {
        out.push(monic(h, p));
        return;
    }
    let e = (BigUint::from(p).pow(k as u32) - BigUint::one()) >> 1u32;
    let mut counter: u64 = 0;
    loop {
        counter += 1;
        // enumerate trial polynomials of degree < n in a fixed order
        let mut a = Vec::with_capacity(n);
        let mut c = counter;
        while c > 0 {
            a.push(c % p);
            c /= p;
        }
        let a = trim(a);
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let t = powmod_big(&a, &e, h, p);
        let g = gcd(h, &sub(&t, &[1], p), p);
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let (q, r) = divrem(h, &g, p);
            debug_assert!(r.is_empty());
            equal_degree_split(&g, k, p, out);
            equal_degree_split(&monic(&q, p), k, p, out);
            return;
        }
    }
}

/// Lexicographically smallest monic irreducible factor of least degree. Needs odd p.
pub fn least_irreducible_factor(f: &[u64], p: u64) -> Poly {
    let f = monic(&trim(f.to_vec()), p);
    let (k, h) = smallest_degree_part(&f, p);
    let mut factors = Vec::new();
    equal_degree_split(&h, k, p, &mut factors);
    factors.sort();
    factors.into_iter().next().unwrap()
}

pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = monic(&trim(f.to_vec()), p);
    match degree(&f) {
        None | Some(0) => false,
        Some(n) => smallest_degree_part(&f, p).0 == n,
    }
}

pub fn is_zero(a: &[u64]) -> bool {
    a.iter().all(Zero::is_zero)
}
