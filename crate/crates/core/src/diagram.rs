//! Adorned Coxeter diagrams: parsing, Gram matrix, signature, finite types, Wythoff recipes.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numring::{RealCyclotomicRing, RingElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl Label {
    pub fn parse(s: &str) -> Option<Label> {
        match s {
            "inf" | "∞" | "infinity" => Some(Label::Infinite),
            _ => s.parse::<u32>().ok().map(Label::Finite),
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinite => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    n: usize,
    entries: Vec<Label>,
}

impl CoxeterMatrix {
    /// All pairs commute.
    pub fn new(n: usize) -> Self {
        let mut entries = vec![Label::Finite(2); n * n];
        for s in 0..n {
            entries[s * n + s] = Label::Finite(1);
        }
        CoxeterMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: usize, t: usize) -> Label {
        self.entries[s * self.n + t]
    }

    pub fn set(&mut self, s: usize, t: usize, m: Label) {
        assert!(s != t, "diagonal entries are fixed at 1");
        self.entries[s * self.n + t] = m;
        self.entries[t * self.n + s] = m;
    }

    /// Nodes joined by an edge (label ≠ 2).
    pub fn adjacent(&self, s: usize, t: usize) -> bool {
        s != t && self.get(s, t) != Label::Finite(2)
    }

    pub fn neighbors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&t| self.adjacent(s, t))
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        (0..self.n).flat_map(move |s| (s + 1..self.n).map(move |t| self.get(s, t)))
    }

    pub fn restrict(&self, nodes: &[usize]) -> CoxeterMatrix {
        let mut m = CoxeterMatrix::new(nodes.len());
        for (i, &s) in nodes.iter().enumerate() {
            for (j, &t) in nodes.iter().enumerate().skip(i + 1) {
                m.set(i, j, self.get(s, t));
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdornedDiagram {
    pub names: Vec<String>,
    pub matrix: CoxeterMatrix,
    /// Sorted ringed node indices.
    pub ringed: Vec<usize>,
}

impl AdornedDiagram {
    pub fn new(names: Vec<String>, matrix: CoxeterMatrix, ringed: Vec<usize>) -> Self {
        assert_eq!(names.len(), matrix.size());
        let ringed: BTreeSet<usize> = ringed.into_iter().collect();
        AdornedDiagram { names, matrix, ringed: ringed.into_iter().collect() }
    }

    /// Path diagram s0 - s1 - ... with the given consecutive labels.
    pub fn path(labels: &[Label], ringed: &[usize]) -> Self {
        let n = labels.len() + 1;
        let mut m = CoxeterMatrix::new(n);
        for (i, &l) in labels.iter().enumerate() {
            m.set(i, i + 1, l);
        }
        AdornedDiagram::new((0..n).map(|i| format!("s{i}")).collect(), m, ringed.to_vec())
    }

    pub fn rank(&self) -> usize {
        self.matrix.size()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|x| x == name)
    }

    pub fn is_ringed(&self, s: usize) -> bool {
        self.ringed.binary_search(&s).is_ok()
    }

    /// Induced diagram on `nodes` (in the given order), keeping names and rings.
    pub fn subdiagram(&self, nodes: &[usize]) -> AdornedDiagram {
        let names = nodes.iter().map(|&s| self.names[s].clone()).collect();
        let ringed = nodes.iter().enumerate().filter(|(_, &s)| self.is_ringed(s)).map(|(i, _)| i).collect();
        AdornedDiagram::new(names, self.matrix.restrict(nodes), ringed)
    }

    /// Induced diagram on the complement of `removed`, order preserved.
    pub fn without(&self, removed: &[usize]) -> AdornedDiagram {
        let keep: Vec<usize> = (0..self.rank()).filter(|s| !removed.contains(s)).collect();
        self.subdiagram(&keep)
    }

    pub fn with_rings(&self, ringed: Vec<usize>) -> AdornedDiagram {
        AdornedDiagram::new(self.names.clone(), self.matrix.clone(), ringed)
    }

    /// Connected components, each sorted, ordered by least node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let s = comp[i];
                i += 1;
                for t in self.matrix.neighbors(s) {
                    if !seen[t] {
                        seen[t] = true;
                        comp.push(t);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn to_block_string(&self) -> String {
        let mut s = String::new();
        for name in &self.names {
            s.push_str(&format!("node {name}\n"));
        }
        let n = self.rank();
        for i in 0..n {
            for j in i + 1..n {
                if self.matrix.adjacent(i, j) {
                    s.push_str(&format!("edge {} {} {}\n", self.names[i], self.names[j], self.matrix.get(i, j)));
                }
            }
        }
        for &r in &self.ringed {
            s.push_str(&format!("ring {}\n", self.names[r]));
        }
        s
    }

    pub fn ring(&self) -> RealCyclotomicRing {
        RealCyclotomicRing::for_labels(self.matrix.labels())
    }
}

impl fmt::Display for AdornedDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_block_string())
    }
}

fn parse_label(tok: &str, line: usize) -> Result<Label> {
    let l = Label::parse(tok).ok_or_else(|| Error::Parse { line, msg: format!("malformed label `{tok}`") })?;
    if let Label::Finite(m) = l {
        if m < 2 {
            return Err(Error::Parse { line, msg: format!("label {m} below 2") });
        }
    }
    Ok(l)
}

fn parse_string_form(rest: &str, line: usize) -> Result<AdornedDiagram> {
    let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
    let rest = rest.trim();
    let open = rest.find('[').ok_or_else(|| err("expected `[`"))?;
    let close = rest.find(']').ok_or_else(|| err("expected `]`"))?;
    if open != 0 || close < open {
        return Err(err("expected `[labels]`"));
    }
    let inner = rest[1..close].trim();
    let labels: Vec<Label> = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(|t| parse_label(t.trim(), line)).collect::<Result<_>>()?
    };
    let tail = rest[close + 1..].trim();
    let mut ringed = Vec::new();
    if !tail.is_empty() {
        let idx = tail.strip_prefix("ring").ok_or_else(|| err("expected `ring`"))?;
        for tok in idx.split(',') {
            let tok = tok.trim();
            let i: usize = tok.parse().map_err(|_| err(&format!("malformed ring index `{tok}`")))?;
            if i > labels.len() {
                return Err(Error::UnknownNode(format!("s{i}")));
            }
            ringed.push(i);
        }
    }
    Ok(AdornedDiagram::path(&labels, &ringed))
}

/// Reads either `string [m1,…] ring i,…` or a block of `node`/`edge`/`ring` lines.
pub fn parse_diagram(text: &str) -> Result<AdornedDiagram> {
    let mut names: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, Label, usize)> = Vec::new();
    let mut rings: Vec<(String, usize)> = Vec::new();
    let mut string_form = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let head = words.next().unwrap();
        let args: Vec<&str> = words.collect();
        let err = |msg: String| Error::Parse { line, msg };
        match head {
            "string" => {
                if string_form.is_some() || !names.is_empty() {
                    return Err(err("string form must be the only statement".into()));
                }
                string_form = Some(parse_string_form(content["string".len()..].trim(), line)?);
            }
            "node" => {
                if args.len() != 1 {
                    return Err(err("expected `node <id>`".into()));
                }
                if names.iter().any(|n| n == args[0]) {
                    return Err(err(format!("duplicate node `{}`", args[0])));
                }
                names.push(args[0].to_string());
            }
            "edge" => {
                if args.len() != 3 {
                    return Err(err("expected `edge <id> <id> <label>`".into()));
                }
                if args[0] == args[1] {
                    return Err(err("edge from a node to itself".into()));
                }
                edges.push((args[0].into(), args[1].into(), parse_label(args[2], line)?, line));
            }
            "ring" => {
                if args.is_empty() {
                    return Err(err("expected `ring <id>`".into()));
                }
                for a in args {
                    rings.push((a.trim_matches(',').to_string(), line));
                }
            }
            other => return Err(err(format!("unknown statement `{other}`"))),
        }
    }
    if let Some(d) = string_form {
        if !names.is_empty() || !edges.is_empty() || !rings.is_empty() {
            return Err(Error::Parse { line: 1, msg: "string form must be the only statement".into() });
        }
        return Ok(d);
    }
    if names.is_empty() {
        return Err(Error::Parse { line: 1, msg: "empty diagram".into() });
    }
    let find = |n: &str| names.iter().position(|x| x == n).ok_or_else(|| Error::UnknownNode(n.to_string()));
    let mut m = CoxeterMatrix::new(names.len());
    for (a, b, l, _) in &edges {
        m.set(find(a)?, find(b)?, *l);
    }
    let ringed = rings.iter().map(|(r, _)| find(r)).collect::<Result<Vec<_>>>()?;
    Ok(AdornedDiagram::new(names, m, ringed))
}

/// Doubled Gram matrix 2B over Z[2cos(π/L)].
#[derive(Clone, Debug)]
pub struct GramMatrix {
    pub ring: RealCyclotomicRing,
    pub entries: Vec<Vec<RingElement>>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, s: usize, t: usize) -> &RingElement {
        &self.entries[s][t]
    }
}

pub fn gram_matrix(diagram: &AdornedDiagram) -> GramMatrix {
    gram_matrix_over(diagram, diagram.ring()).expect("conductor covers all labels")
}

pub fn gram_matrix_over(diagram: &AdornedDiagram, ring: RealCyclotomicRing) -> Result<GramMatrix> {
    let n = diagram.rank();
    let mut entries = vec![vec![ring.zero(); n]; n];
    for s in 0..n {
        for t in 0..n {
            entries[s][t] = if s == t {
                ring.from_int(2)
            } else {
                ring.neg(&ring.embed_label(diagram.matrix.get(s, t))?)
            };
        }
    }
    Ok(GramMatrix { ring, entries })
}

/// Coefficients of det(xI − A), highest degree first, by Berkowitz's division-free method.
pub fn characteristic_polynomial(ring: &RealCyclotomicRing, a: &[Vec<RingElement>]) -> Vec<RingElement> {
    let n = a.len();
    let mut poly = vec![ring.one()];
    for r in 0..n {
        // t = [1, −a_rr, −R C, −R M C, …, −R M^{r−1} C]
        let mut t = vec![ring.one(), ring.neg(&a[r][r])];
        let mut col: Vec<RingElement> = (0..r).map(|i| a[i][r].clone()).collect();
        for _ in 0..r {
            let mut rc = ring.zero();
            for (j, cj) in col.iter().enumerate() {
                rc = ring.add(&rc, &ring.mul(&a[r][j], cj));
            }
            t.push(ring.neg(&rc));
            let next: Vec<RingElement> = (0..r)
                .map(|i| {
                    let mut acc = ring.zero();
                    for (j, cj) in col.iter().enumerate() {
                        acc = ring.add(&acc, &ring.mul(&a[i][j], cj));
                    }
                    acc
                })
                .collect();
            col = next;
        }
        let mut next = vec![ring.zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, pj) in poly.iter().enumerate().take(i + 1) {
                *slot = ring.add(slot, &ring.mul(&t[i - j], pj));
            }
        }
        poly = next;
    }
    poly
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignatureKind {
    Definite,
    Semidefinite,
    Indefinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureClass {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
    pub kind: SignatureKind,
}

fn sign_changes(signs: &[Ordering]) -> usize {
    let nz: Vec<&Ordering> = signs.iter().filter(|s| **s != Ordering::Equal).collect();
    nz.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Exact (p, q, z) of B. The characteristic polynomial of the symmetric 2B is real-rooted,
/// so Descartes' rule of signs counts roots exactly.
pub fn classify_signature(diagram: &AdornedDiagram) -> SignatureClass {
    let g = gram_matrix(diagram);
    let n = g.size();
    let cp = characteristic_polynomial(&g.ring, &g.entries);
    let signs: Vec<Ordering> = cp.iter().map(|c| g.ring.sign(c)).collect();
    let zero = signs.iter().rev().take_while(|s| **s == Ordering::Equal).count();
    let positive = sign_changes(&signs);
    let flipped: Vec<Ordering> = signs
        .iter()
        .enumerate()
        .map(|(i, s)| if (n - i) % 2 == 1 { s.reverse() } else { *s })
        .collect();
    let negative = sign_changes(&flipped);
    assert_eq!(positive + negative + zero, n, "characteristic polynomial of a symmetric matrix is real-rooted");
    let kind = if negative > 0 {
        SignatureKind::Indefinite
    } else if zero > 0 {
        SignatureKind::Semidefinite
    } else {
        SignatureKind::Definite
    };
    SignatureClass { positive, negative, zero, kind }
}

pub fn is_definite(diagram: &AdornedDiagram) -> bool {
    classify_signature(diagram).kind == SignatureKind::Definite
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    D,
    E,
    F,
    H,
    I2(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteTypeName {
    pub family: Family,
    pub rank: usize,
}

impl fmt::Display for FiniteTypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::I2(m) => write!(f, "I2({m})"),
            fam => write!(f, "{:?}{}", fam, self.rank),
        }
    }
}

fn classify_component(m: &CoxeterMatrix, comp: &[usize]) -> Option<FiniteTypeName> {
    let k = comp.len();
    let name = |family, rank| Some(FiniteTypeName { family, rank });
    if k == 1 {
        return name(Family::A, 1);
    }
    let mut edges = Vec::new();
    for (i, &s) in comp.iter().enumerate() {
        for &t in &comp[i + 1..] {
            if m.adjacent(s, t) {
                edges.push((s, t, m.get(s, t).finite()?));
            }
        }
    }
    if edges.len() != k - 1 {
        return None;
    }
    if k == 2 {
        return match edges[0].2 {
            3 => name(Family::A, 2),
            4 => name(Family::B, 2),
            l => name(Family::I2(l), 2),
        };
    }
    let deg = |s: usize| edges.iter().filter(|e| e.0 == s || e.1 == s).count();
    let branch: Vec<usize> = comp.iter().copied().filter(|&s| deg(s) >= 3).collect();
    let odd: Vec<&(usize, usize, u32)> = edges.iter().filter(|e| e.2 != 3).collect();
    if branch.is_empty() {
        // a path: walk it from one end
        let start = *comp.iter().find(|&&s| deg(s) == 1)?;
        let mut order = vec![start];
        let mut labels = Vec::new();
        while order.len() < k {
            let cur = *order.last().unwrap();
            let (next, l) = edges.iter().find_map(|&(a, b, l)| {
                if a == cur && !order.contains(&b) {
                    Some((b, l))
                } else if b == cur && !order.contains(&a) {
                    Some((a, l))
                } else {
                    None
                }
            })?;
            order.push(next);
            labels.push(l);
        }
        if odd.is_empty() {
            return name(Family::A, k);
        }
        if odd.len() > 1 {
            return None;
        }
        let pos = labels.iter().position(|&l| l != 3).unwrap();
        let at_end = pos == 0 || pos == labels.len() - 1;
        return match (labels[pos], at_end, k) {
            (4, true, _) => name(Family::B, k),
            (4, false, 4) => name(Family::F, 4),
            (5, true, 3) => name(Family::H, 3),
            (5, true, 4) => name(Family::H, 4),
            _ => None,
        };
    }
    if branch.len() > 1 || !odd.is_empty() || deg(branch[0]) != 3 {
        return None;
    }
    let b = branch[0];
    let mut arms = Vec::new();
    for &(x, y, _) in edges.iter().filter(|e| e.0 == b || e.1 == b) {
        let mut prev = b;
        let mut cur = if x == b { y } else { x };
        let mut len = 1;
        loop {
            let next = edges.iter().find_map(|&(p, q, _)| {
                if p == cur && q != prev {
                    Some(q)
                } else if q == cur && p != prev {
                    Some(p)
                } else {
                    None
                }
            });
            match next {
                Some(nx) => {
                    prev = cur;
                    cur = nx;
                    len += 1;
                }
                None => break,
            }
        }
        arms.push(len);
    }
    arms.sort_unstable();
    match (arms[0], arms[1], arms[2]) {
        (1, 1, c) => name(Family::D, c + 3),
        (1, 2, 2) => name(Family::E, 6),
        (1, 2, 3) => name(Family::E, 7),
        (1, 2, 4) => name(Family::E, 8),
        _ => None,
    }
}

/// Per-component finite type names, or `None` when some component is not definite.
pub fn recognize_finite_types(diagram: &AdornedDiagram) -> Option<Vec<FiniteTypeName>> {
    diagram.components().iter().map(|c| classify_component(&diagram.matrix, c)).collect()
}

pub fn format_types(types: &[FiniteTypeName]) -> String {
    types.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("×")
}

/// Removes `removed` and keeps the components that still carry a ring.
pub fn face_diagram(diagram: &AdornedDiagram, removed: &[usize]) -> Result<AdornedDiagram> {
    if removed.iter().any(|&r| diagram.is_ringed(r)) {
        return Err(Error::RemovesRing);
    }
    let rest = diagram.without(removed);
    let keep: Vec<usize> = rest
        .components()
        .into_iter()
        .filter(|c| c.iter().any(|&s| rest.is_ringed(s)))
        .flatten()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    Ok(rest.subdiagram(&keep))
}

/// Removes the single ringed node and rings its former neighbours.
pub fn vertex_link_diagram(diagram: &AdornedDiagram) -> Result<AdornedDiagram> {
    if diagram.ringed.len() != 1 {
        return Err(Error::RingCount(diagram.ringed.len()));
    }
    if !diagram.is_connected() {
        return Err(Error::Disconnected);
    }
    let s0 = diagram.ringed[0];
    let rest: Vec<usize> = (0..diagram.rank()).filter(|&s| s != s0).collect();
    let sub = diagram.subdiagram(&rest);
    let rings = rest.iter().enumerate().filter(|(_, &t)| diagram.matrix.adjacent(s0, t)).map(|(i, _)| i).collect();
    Ok(sub.with_rings(rings))
}
