//! Regularity degrees predicted from the diagram alone, by walking down links of faces.
//!
//! A sphere is tracked as a set of parts; a part is a Cartesian product of factor graphs,
//! each the skeleton of a connected singly-ringed diagram, or its vertex set alone when the
//! 2-faces through the base vertex in that direction are not triangles.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::diagram::{format_types, is_definite, recognize_finite_types, vertex_link_diagram, AdornedDiagram, Label};
use crate::error::{Error, Result};
use crate::group::todd_coxeter;

#[derive(Clone, Debug)]
struct Factor {
    diagram: AdornedDiagram,
    simplicial: bool,
}

type Part = Vec<Factor>;

fn part_key(p: &Part) -> String {
    let mut keys: Vec<String> = p.iter().map(|f| format!("{}{}", f.diagram.to_block_string(), f.simplicial)).collect();
    keys.sort();
    keys.join("|")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    /// Reached a zero degree.
    Complete,
    /// Parts of one sphere have different degrees.
    Irregular { level: usize, degrees: Vec<usize> },
    /// A link component carries more than one ring.
    MultipleRings { level: usize },
    /// A factor needed for counting is infinite.
    InfiniteFactor { level: usize },
    LevelLimit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub degrees: Vec<usize>,
    pub connected: Vec<bool>,
    /// Human-readable description of the sphere parts at each level.
    pub spheres: Vec<Vec<String>>,
    pub stop: StopReason,
}

struct Counter {
    cap: usize,
    cache: HashMap<String, usize>,
}

impl Counter {
    /// Vertex count of a finite singly-ringed connected diagram.
    fn vertices(&mut self, d: &AdornedDiagram) -> Result<Option<usize>> {
        let key = d.to_block_string();
        if let Some(&v) = self.cache.get(&key) {
            return Ok(Some(v));
        }
        if !is_definite(d) {
            return Ok(None);
        }
        let h: Vec<usize> = (0..d.rank()).filter(|&s| !d.is_ringed(s)).collect();
        let idx = todd_coxeter(d, &h, self.cap)?.index();
        self.cache.insert(key, idx);
        Ok(Some(idx))
    }
}

enum Step<T> {
    Ok(T),
    MultiRing,
    Infinite,
}

fn link_factors(f: &Factor) -> Result<Step<Part>> {
    let d = &f.diagram;
    let r = d.ringed[0];
    let link = vertex_link_diagram(d)?;
    let mut out = Vec::new();
    for comp in link.components() {
        let sub = link.subdiagram(&comp);
        if sub.ringed.len() != 1 {
            return Ok(Step::MultiRing);
        }
        let orig = d.index_of(&sub.names[sub.ringed[0]]).expect("link keeps names");
        out.push(Factor { diagram: sub, simplicial: d.matrix.get(r, orig) == Label::Finite(3) });
    }
    Ok(Step::Ok(out))
}

fn part_degree(p: &Part, counter: &mut Counter) -> Result<Step<usize>> {
    let mut total = 0;
    for f in p.iter().filter(|f| f.simplicial) {
        let lf = match link_factors(f)? {
            Step::Ok(x) => x,
            Step::MultiRing => return Ok(Step::MultiRing),
            Step::Infinite => return Ok(Step::Infinite),
        };
        let mut prod = 1usize;
        for h in &lf {
            match counter.vertices(&h.diagram)? {
                Some(v) => prod = prod.checked_mul(v).ok_or(Error::Overflow)?,
                None => return Ok(Step::Infinite),
            }
        }
        total += prod;
    }
    Ok(Step::Ok(total))
}

fn describe(p: &Part) -> String {
    if p.is_empty() {
        return "point".into();
    }
    p.iter()
        .map(|f| {
            let types = recognize_finite_types(&f.diagram).map_or_else(|| "infinite".to_string(), |t| format_types(&t));
            let ring = &f.diagram.names[f.diagram.ringed[0]];
            format!("{types}@{ring}{}", if f.simplicial { "" } else { "(no triangles)" })
        })
        .collect::<Vec<_>>()
        .join(" x ")
}

/// Predicted (a_0, a_1, …) for a connected diagram with one ringed node.
pub fn predicted_vector(diagram: &AdornedDiagram, max_levels: usize, cap: usize) -> Result<Prediction> {
    if diagram.ringed.len() != 1 {
        return Err(Error::RingCount(diagram.ringed.len()));
    }
    if !diagram.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut counter = Counter { cap, cache: HashMap::new() };
    let mut parts: Vec<Part> = vec![vec![Factor { diagram: diagram.clone(), simplicial: true }]];
    let mut degrees = Vec::new();
    let mut connected = Vec::new();
    let mut spheres = Vec::new();
    let mut sphere_connected = true;
    for level in 0..max_levels {
        let mut degs = Vec::new();
        for p in &parts {
            match part_degree(p, &mut counter)? {
                Step::Ok(a) => degs.push(a),
                Step::MultiRing => return Ok(Prediction { degrees, connected, spheres, stop: StopReason::MultipleRings { level } }),
                Step::Infinite => return Ok(Prediction { degrees, connected, spheres, stop: StopReason::InfiniteFactor { level } }),
            }
        }
        if degs.iter().any(|&a| a != degs[0]) {
            return Ok(Prediction { degrees, connected, spheres, stop: StopReason::Irregular { level, degrees: degs } });
        }
        let a = degs[0];
        degrees.push(a);
        connected.push(sphere_connected && a > 0);
        spheres.push(parts.iter().map(describe).collect());
        if a == 0 {
            return Ok(Prediction { degrees, connected, spheres, stop: StopReason::Complete });
        }
        let mut next: BTreeMap<String, Part> = BTreeMap::new();
        sphere_connected = true;
        for p in &parts {
            let simp: Vec<&Factor> = p.iter().filter(|f| f.simplicial).collect();
            if simp.len() > 1 {
                sphere_connected = false;
            }
            for f in simp {
                let lf = match link_factors(f)? {
                    Step::Ok(x) => x,
                    Step::MultiRing => {
                        return Ok(Prediction { degrees, connected, spheres, stop: StopReason::MultipleRings { level: level + 1 } })
                    }
                    Step::Infinite => {
                        return Ok(Prediction { degrees, connected, spheres, stop: StopReason::InfiniteFactor { level: level + 1 } })
                    }
                };
                if lf.iter().any(|h| !h.simplicial) {
                    sphere_connected = false;
                }
                next.entry(part_key(&lf)).or_insert(lf);
            }
        }
        parts = next.into_values().collect();
    }
    Ok(Prediction { degrees, connected, spheres, stop: StopReason::LevelLimit })
}
