//! Reflection representation, coset enumeration, orders and the longest-word constant.

use std::collections::{HashSet, VecDeque};

use crate::diagram::{gram_matrix, is_definite, AdornedDiagram, GramMatrix, Label};
use crate::error::{Error, Result};
use crate::numring::{RealCyclotomicRing, RingElement};

pub type RingMatrix = Vec<Vec<RingElement>>;

pub fn identity(ring: &RealCyclotomicRing, n: usize) -> RingMatrix {
    (0..n).map(|i| (0..n).map(|j| ring.from_int((i == j) as i64)).collect()).collect()
}

pub fn mat_mul(ring: &RealCyclotomicRing, a: &RingMatrix, b: &RingMatrix) -> RingMatrix {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = ring.zero();
                    for (k, bk) in b.iter().enumerate() {
                        if !a[i][k].is_zero() && !bk[j].is_zero() {
                            acc = ring.add(&acc, &ring.mul(&a[i][k], &bk[j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &RingMatrix) -> RingMatrix {
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(ring: &RealCyclotomicRing, a: &RingMatrix, v: &[RingElement]) -> Vec<RingElement> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(ring.zero(), |acc, (x, y)| {
                if x.is_zero() || y.is_zero() {
                    acc
                } else {
                    ring.add(&acc, &ring.mul(x, y))
                }
            })
        })
        .collect()
}

/// Matrix of s acting on V: identity except row s, whose entries are δ_{st} − (2B)_{ts}.
pub fn reflection_matrix(gram: &GramMatrix, s: usize) -> RingMatrix {
    let ring = &gram.ring;
    let n = gram.size();
    let mut m = identity(ring, n);
    for t in 0..n {
        m[s][t] = ring.sub(&m[s][t], gram.get(t, s));
    }
    m
}

pub fn generator_matrices(diagram: &AdornedDiagram) -> (GramMatrix, Vec<RingMatrix>) {
    let gram = gram_matrix(diagram);
    let gens = (0..diagram.rank()).map(|s| reflection_matrix(&gram, s)).collect();
    (gram, gens)
}

const UNDEF: u32 = u32::MAX;

/// Complete coset table of ⟨subgroup⟩ in W; generators act as involutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    pub subgroup: Vec<usize>,
    gens: usize,
    table: Vec<u32>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        self.table.len() / self.gens.max(1)
    }

    pub fn generators(&self) -> usize {
        self.gens
    }

    pub fn act(&self, coset: usize, g: usize) -> usize {
        self.table[coset * self.gens + g] as usize
    }

    pub fn act_word(&self, mut coset: usize, word: &[usize]) -> usize {
        for &g in word {
            coset = self.act(coset, g);
        }
        coset
    }

    /// A shortest word w_c with 0·w_c = c, for every coset, in breadth-first order.
    pub fn transversal(&self) -> Vec<Vec<usize>> {
        let n = self.index();
        let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
        words[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(c) = queue.pop_front() {
            for g in 0..self.gens {
                let d = self.act(c, g);
                if words[d].is_none() {
                    let mut w = words[c].clone().unwrap();
                    w.push(g);
                    words[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        words.into_iter().map(|w| w.expect("coset table is connected")).collect()
    }
}

fn relators(diagram: &AdornedDiagram) -> Vec<Vec<Vec<usize>>> {
    // relators[g] = alternating words (g t)^m starting with g
    let n = diagram.rank();
    (0..n)
        .map(|g| {
            (0..n)
                .filter(|&t| t != g)
                .filter_map(|t| match diagram.matrix.get(g, t) {
                    Label::Finite(m) => Some((0..2 * m as usize).map(|i| if i % 2 == 0 { g } else { t }).collect()),
                    Label::Infinite => None,
                })
                .collect()
        })
        .collect()
}

struct Enumerator {
    gens: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    relators: Vec<Vec<Vec<usize>>>,
    deductions: Vec<(u32, usize)>,
    queue: VecDeque<u32>,
    cap: usize,
}

impl Enumerator {
    fn cosets(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: u32, g: usize) -> u32 {
        self.table[c as usize * self.gens + g]
    }

    fn set(&mut self, c: u32, g: usize, d: u32) {
        self.table[c as usize * self.gens + g] = d;
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn rep(&mut self, mut c: u32) -> u32 {
        let mut root = c;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[c as usize] != root {
            let next = self.parent[c as usize];
            self.parent[c as usize] = root;
            c = next;
        }
        root
    }

    fn new_coset(&mut self) -> Result<u32> {
        if self.cosets() >= self.cap {
            return Err(Error::CapExceeded { what: "coset enumeration", cap: self.cap });
        }
        let c = self.cosets() as u32;
        self.parent.push(c);
        self.table.extend(std::iter::repeat(UNDEF).take(self.gens));
        Ok(c)
    }

    fn link(&mut self, c: u32, g: usize, d: u32) {
        self.set(c, g, d);
        self.set(d, g, c);
        self.deductions.push((c, g));
    }

    fn merge(&mut self, a: u32, b: u32) {
        let a = self.rep(a);
        let b = self.rep(b);
        if a == b {
            return;
        }
        let (keep, dead) = if a < b { (a, b) } else { (b, a) };
        self.parent[dead as usize] = keep;
        self.queue.push_back(dead);
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.merge(a, b);
        while let Some(e) = self.queue.pop_front() {
            for g in 0..self.gens {
                let f = self.get(e, g);
                if f == UNDEF {
                    continue;
                }
                if self.get(f, g) == e {
                    self.set(f, g, UNDEF);
                }
                self.set(e, g, UNDEF);
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let x = self.get(e1, g);
                if x != UNDEF {
                    self.merge(f1, x);
                    continue;
                }
                let y = self.get(f1, g);
                if y != UNDEF {
                    self.merge(e1, y);
                    continue;
                }
                self.link(e1, g, f1);
            }
        }
    }

    fn scan(&mut self, c: u32, word: &[usize]) {
        let len = word.len();
        let mut f = c;
        let mut i = 0;
        while i < len {
            let next = self.get(f, word[i]);
            if next == UNDEF {
                break;
            }
            f = next;
            i += 1;
        }
        if i == len {
            if f != c {
                self.coincidence(f, c);
            }
            return;
        }
        let mut b = c;
        let mut j = len;
        while j > i {
            let next = self.get(b, word[j - 1]);
            if next == UNDEF {
                break;
            }
            b = next;
            j -= 1;
        }
        if j == i {
            self.coincidence(f, b);
        } else if j == i + 1 {
            self.link(f, word[i], b);
        }
    }

    fn process(&mut self) {
        while let Some((c, g)) = self.deductions.pop() {
            if !self.alive(c) {
                continue;
            }
            let d = self.get(c, g);
            let rels = std::mem::take(&mut self.relators[g]);
            for r in &rels {
                if self.alive(c) {
                    self.scan(c, r);
                }
                if d != UNDEF && self.alive(d) {
                    self.scan(d, r);
                }
            }
            self.relators[g] = rels;
        }
    }
}

/// Felsch-style enumeration of the cosets of ⟨subgroup⟩; deterministic in the node order.
pub fn todd_coxeter(diagram: &AdornedDiagram, subgroup: &[usize], cap: usize) -> Result<CosetTable> {
    let gens = diagram.rank();
    let mut en = Enumerator {
        gens,
        table: Vec::new(),
        parent: Vec::new(),
        relators: relators(diagram),
        deductions: Vec::new(),
        queue: VecDeque::new(),
        cap: cap.max(1),
    };
    en.new_coset()?;
    for &h in subgroup {
        if en.get(0, h) == UNDEF {
            en.link(0, h, 0);
        }
    }
    en.process();
    let mut c = 0u32;
    while (c as usize) < en.cosets() {
        for g in 0..gens {
            if en.alive(c) && en.get(c, g) == UNDEF {
                let d = en.new_coset()?;
                en.link(c, g, d);
                en.process();
            }
        }
        c += 1;
    }
    // compact
    let live: Vec<u32> = (0..en.cosets() as u32).filter(|&c| en.alive(c)).collect();
    let mut renum = vec![UNDEF; en.cosets()];
    for (i, &c) in live.iter().enumerate() {
        renum[c as usize] = i as u32;
    }
    let mut table = Vec::with_capacity(live.len() * gens);
    for &c in &live {
        for g in 0..gens {
            let d = en.get(c, g);
            table.push(renum[en.rep(d) as usize]);
        }
    }
    let out = CosetTable { subgroup: subgroup.to_vec(), gens, table };
    check_table(&out, diagram)?;
    Ok(out)
}

fn check_table(t: &CosetTable, diagram: &AdornedDiagram) -> Result<()> {
    let n = t.index();
    for c in 0..n {
        for g in 0..t.gens {
            if t.act(t.act(c, g), g) != c {
                return Err(Error::Invalid(format!("coset table: generator {g} not an involution at {c}")));
            }
        }
    }
    let rels = relators(diagram);
    for c in 0..n {
        for r in rels.iter().flatten() {
            if t.act_word(c, r) != c {
                return Err(Error::Invalid(format!("coset table: relator fails at coset {c}")));
            }
        }
    }
    for &h in &t.subgroup {
        if t.act(0, h) != 0 {
            return Err(Error::Invalid("coset table: subgroup generator moves coset 0".into()));
        }
    }
    Ok(())
}

pub const DEFAULT_COSET_CAP: usize = 4_000_000;

/// |W| as the product of indices along the chain W_{<n} ⊃ W_{<n−1} ⊃ … ⊃ 1 for `order`.
pub fn group_order_along(diagram: &AdornedDiagram, order: &[usize], cap: usize) -> Result<u128> {
    if !is_definite(diagram) {
        return Err(Error::NotDefinite);
    }
    let mut total: u128 = 1;
    for k in 1..=order.len() {
        let sub = diagram.subdiagram(&order[..k]);
        let idx = todd_coxeter(&sub, &(0..k - 1).collect::<Vec<_>>(), cap)?.index();
        total = total.checked_mul(idx as u128).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

pub fn group_order(diagram: &AdornedDiagram) -> Result<u128> {
    let order: Vec<usize> = (0..diagram.rank()).collect();
    group_order_along(diagram, &order, DEFAULT_COSET_CAP)
}

/// Number of positive roots: half the size of the W-orbit of the simple roots.
pub fn longest_word_length(diagram: &AdornedDiagram) -> Result<usize> {
    if !is_definite(diagram) {
        return Err(Error::NotDefinite);
    }
    let (gram, gens) = generator_matrices(diagram);
    let ring = &gram.ring;
    let n = diagram.rank();
    let mut seen: HashSet<Vec<RingElement>> = HashSet::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        let mut e = vec![ring.zero(); n];
        e[s] = ring.one();
        if seen.insert(e.clone()) {
            queue.push_back(e);
        }
    }
    while let Some(v) = queue.pop_front() {
        for g in &gens {
            let w = mat_vec(ring, g, &v);
            if seen.insert(w.clone()) {
                queue.push_back(w);
            }
        }
    }
    Ok(seen.len() / 2)
}
