//! Finite simple graphs with dense ids, text formats, spheres.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    /// Optional per-vertex annotation (coset id, distance to the base point, …).
    pub annotation: Option<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], annotation: None }
    }

    /// Builds a simple graph; loops and repeated edges are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u},{v}) out of range");
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Graph { adj, annotation: None }
    }

    /// Takes adjacency lists that are already symmetric and loop-free.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        let g = Graph { adj, annotation: None };
        debug_assert!(g.is_symmetric());
        g
    }

    fn is_symmetric(&self) -> bool {
        (0..self.n()).all(|u| self.adj[u].iter().all(|&v| v != u && self.has_edge(v, u)))
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Common degree, if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == k).then_some(k)
    }

    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[s] = Some(0);
        let mut q = VecDeque::from([s]);
        while let Some(u) = q.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    q.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.distances_from(0).iter().all(Option::is_some)
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut count = 0;
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    /// Induced subgraph on `vertices` (renumbered in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut pos = std::collections::HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            pos.insert(v, i);
        }
        let adj = vertices
            .iter()
            .map(|&v| self.adj[v].iter().filter_map(|w| pos.get(w).copied()).collect())
            .collect();
        Graph::from_adjacency(adj)
    }

    /// Vertices adjacent to every member of `clique` (and not in it), sorted.
    pub fn common_neighbors(&self, clique: &[usize]) -> Vec<usize> {
        match clique.split_first() {
            None => (0..self.n()).collect(),
            Some((&first, rest)) => self.adj[first]
                .iter()
                .copied()
                .filter(|&v| rest.iter().all(|&c| self.has_edge(c, v)))
                .collect(),
        }
    }

    pub fn sphere(&self, clique: &[usize]) -> Graph {
        self.induced(&self.common_neighbors(clique))
    }

    /// Vertices at distance ≤ r from `center`, sorted by (distance, id).
    pub fn ball_vertices(&self, center: usize, r: usize) -> Vec<usize> {
        let dist = self.distances_from(center);
        let mut vs: Vec<usize> = (0..self.n()).filter(|&v| dist[v].is_some_and(|d| d <= r)).collect();
        vs.sort_by_key(|&v| (dist[v], v));
        vs
    }

    pub fn relabel(&self, perm: &[usize]) -> Graph {
        Graph::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    pub fn adjacency_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut a = vec![vec![0.0; n]; n];
        for (u, v) in self.edges() {
            a[u][v] = 1.0;
            a[v][u] = 1.0;
        }
        a
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# vertices {}\n", self.n());
        for (u, v) in self.edges() {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n() {
            match &self.annotation {
                Some(a) => writeln!(s, "  {v} [label=\"{v}:{}\"];", a[v]).unwrap(),
                None => writeln!(s, "  {v};").unwrap(),
            }
        }
        for (u, v) in self.edges() {
            writeln!(s, "  {u} -- {v};").unwrap();
        }
        s.push_str("}\n");
        s
    }

    /// Reads `u v` lines; an optional `# vertices N` header fixes the vertex count.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        let mut max = None;
        for (k, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut w = rest.split_whitespace();
                if w.next() == Some("vertices") {
                    let v = w.next().and_then(|x| x.parse().ok());
                    n = Some(v.ok_or(Error::Parse { line: k + 1, msg: "bad vertex count".into() })?);
                }
                continue;
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse { line: k + 1, msg: format!("bad vertex id `{t}`") }))
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(Error::Parse { line: k + 1, msg: "expected `u v`".into() });
            }
            if nums[0] == nums[1] {
                return Err(Error::Parse { line: k + 1, msg: "loop".into() });
            }
            max = max.max(Some(nums[0].max(nums[1])));
            edges.push((nums[0], nums[1]));
        }
        let need = max.map_or(0, |m| m + 1);
        let n = match n {
            Some(n) if n < need => return Err(Error::Parse { line: 1, msg: "vertex count below largest id".into() }),
            Some(n) => n,
            None => need,
        };
        Ok(Graph::from_edges(n, edges))
    }
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|u| (u, (u + 1) % n)))
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|u| (u - 1, u)))
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v))))
}

pub fn petersen() -> Graph {
    let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    e.extend((0..5).map(|i| (i, i + 5)));
    e.extend((0..5).map(|i| (5 + i, 5 + (i + 2) % 5)));
    Graph::from_edges(10, e)
}

pub fn octahedron() -> Graph {
    Graph::from_edges(6, (0..6).flat_map(|u| (u + 1..6).filter(move |&v| v != u + 3 || u >= 3).map(move |v| (u, v))))
}

pub fn icosahedron() -> Graph {
    // top 0, upper ring 1..=5, lower ring 6..=10, bottom 11
    let mut e = Vec::new();
    for i in 0..5 {
        let up = 1 + i;
        let up_next = 1 + (i + 1) % 5;
        let lo = 6 + i;
        let lo_next = 6 + (i + 1) % 5;
        e.extend([(0, up), (up, up_next), (up, lo), (up, lo_next), (lo, lo_next), (lo, 11)]);
    }
    Graph::from_edges(12, e)
}
