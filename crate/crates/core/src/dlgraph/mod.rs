//! Vertices and adjacency of the Diestel-Leader graph `DL_d(q)`.
//!
//! A vertex is a `d`-tuple of tree vertices whose heights sum to zero. Two
//! vertices are adjacent when one coordinate moves up a single edge, a second
//! coordinate moves down a single edge, and all others stay put.

mod family;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::treecoord::{TreeParams, TreeVertex};

pub use family::{CustomFamily, FamilyKind, PointFamily};

/// Largest supported `d`; the distance formula enumerates `d!` permutations.
pub const MAX_TREES: usize = 8;

/// Default vertex budget for breadth-first enumeration.
pub const DEFAULT_VERTEX_CAP: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DLParams {
    d: usize,
    q: u32,
}

impl DLParams {
    pub fn new(d: usize, q: u32) -> Result<Self> {
        if !(2..=MAX_TREES).contains(&d) {
            return Err(Error::InvalidParams(format!("d must lie in 2..={MAX_TREES}, got {d}")));
        }
        TreeParams::new(q)?;
        Ok(Self { d, q })
    }

    pub fn d(self) -> usize {
        self.d
    }

    pub fn q(self) -> u32 {
        self.q
    }

    pub fn tree(self) -> TreeParams {
        TreeParams::new(self.q).expect("validated in DLParams::new")
    }
}

/// A vertex of `DL_d(q)`: one canonical tree coordinate per tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DLVertex {
    coords: Vec<TreeVertex>,
}

impl DLVertex {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// The identity of the graph `other` lives in.
    pub fn identity_like(other: &DLVertex) -> DLVertex {
        DLVertex { coords: vec![TreeVertex::basepoint(); other.dim()] }
    }

    pub fn coords(&self) -> &[TreeVertex] {
        &self.coords
    }

    /// Projection `p_i` onto tree `i` (0-based).
    pub fn coord(&self, i: usize) -> &TreeVertex {
        &self.coords[i]
    }

    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(TreeVertex::is_basepoint)
    }

    /// Sum of all `m_i + l_i`.
    pub fn parameter_sum(&self) -> u32 {
        self.coords.iter().map(|c| c.m() + c.l()).sum()
    }

    pub fn max_parameter(&self) -> u32 {
        self.coords.iter().map(|c| c.m().max(c.l())).max().unwrap_or(0)
    }

    /// True when every coordinate has height zero.
    pub fn is_balanced(&self) -> bool {
        self.coords.iter().all(|c| c.h() == 0)
    }

    /// Nontrivial in tree `i` means the projection is not the basepoint.
    pub fn nontrivial_in(&self, i: usize) -> bool {
        !self.coords[i].is_basepoint()
    }
}

impl fmt::Display for DLVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Result of parsing a vertex literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedVertex {
    pub vertex: DLVertex,
    /// Set when some coordinate was written non-canonically and rewritten.
    pub canonicalized: bool,
}

/// The graph `DL_d(q)`. Holds only parameters; vertices are plain values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiestelLeader {
    params: DLParams,
}

impl DiestelLeader {
    pub fn new(d: usize, q: u32) -> Result<Self> {
        Ok(Self { params: DLParams::new(d, q)? })
    }

    pub fn from_params(params: DLParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> DLParams {
        self.params
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    pub fn q(&self) -> u32 {
        self.params.q
    }

    pub fn identity(&self) -> DLVertex {
        DLVertex { coords: vec![TreeVertex::basepoint(); self.params.d] }
    }

    pub fn make_vertex(&self, coords: Vec<TreeVertex>) -> Result<DLVertex> {
        if coords.len() != self.params.d {
            return Err(Error::DimensionMismatch { expected: self.params.d, found: coords.len() });
        }
        for c in &coords {
            if let Some(bad) = c.path().iter().find(|a| a.value() >= self.params.q) {
                return Err(Error::LabelOutOfRange { label: bad.value(), q: self.params.q });
            }
        }
        let sum: i64 = coords.iter().map(TreeVertex::h).sum();
        if sum != 0 {
            return Err(Error::HeightImbalance { sum });
        }
        Ok(DLVertex { coords })
    }

    /// Builds a vertex from raw `(m, path)` pairs, canonicalizing each.
    pub fn vertex(&self, parts: &[(u32, &[u32])]) -> Result<DLVertex> {
        let tree = self.params.tree();
        let coords = parts
            .iter()
            .map(|&(m, path)| tree.canonicalize(m, path))
            .collect::<Result<Vec<_>>>()?;
        self.make_vertex(coords)
    }

    pub fn is_valid(&self, v: &DLVertex) -> bool {
        self.make_vertex(v.coords.clone()).is_ok()
    }

    /// All `d(d−1)q` neighbors: coordinate `i` steps up along each label,
    /// coordinate `j ≠ i` steps down.
    pub fn neighbors(&self, v: &DLVertex) -> Vec<DLVertex> {
        let d = self.params.d;
        let tree = self.params.tree();
        let downs: Vec<TreeVertex> = v.coords.iter().map(TreeVertex::down).collect();
        let mut out = Vec::with_capacity(d * (d - 1) * self.params.q as usize);
        for i in 0..d {
            for a in 0..self.params.q {
                let up = v.coords[i].up(tree.label(a).expect("a < q"));
                for (j, down) in downs.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let mut coords = v.coords.clone();
                    coords[i] = up.clone();
                    coords[j] = down.clone();
                    out.push(DLVertex { coords });
                }
            }
        }
        out
    }

    pub fn parse(&self, text: &str) -> Result<ParsedVertex> {
        let tree = self.params.tree();
        let mut coords = Vec::with_capacity(self.params.d);
        let mut canonicalized = false;
        let mut offset = 0;
        for field in text.split('|') {
            let (c, rewritten) = tree.parse_literal(field.trim(), offset + leading_ws(field))?;
            canonicalized |= rewritten;
            coords.push(c);
            offset += field.len() + 1;
        }
        if coords.len() != self.params.d {
            return Err(Error::Syntax {
                pos: text.len(),
                msg: format!("expected {} '|'-separated fields, found {}", self.params.d, coords.len()),
            });
        }
        Ok(ParsedVertex { vertex: self.make_vertex(coords)?, canonicalized })
    }

    pub fn parse_vertex(&self, text: &str) -> Result<DLVertex> {
        self.parse(text).map(|p| p.vertex)
    }

    pub fn family_at(&self, family: &PointFamily, n: u32) -> Result<DLVertex> {
        if family.params() != self.params {
            return Err(Error::InvalidFamily(format!(
                "family built for {:?}, graph is {:?}",
                family.params(),
                self.params
            )));
        }
        family.at(n)
    }

    pub fn ball(&self, radius: u32) -> Result<Ball> {
        self.ball_with_cap(radius, DEFAULT_VERTEX_CAP)
    }

    /// Breadth-first enumeration of the closed ball of `radius` about `id`.
    pub fn ball_with_cap(&self, radius: u32, max_vertices: usize) -> Result<Ball> {
        let id = self.identity();
        let mut dist = HashMap::new();
        dist.insert(id.clone(), 0u32);
        let mut frontier = vec![id];
        for r in 1..=radius {
            let mut next = Vec::new();
            for v in &frontier {
                for w in self.neighbors(v) {
                    if !dist.contains_key(&w) {
                        dist.insert(w.clone(), r);
                        next.push(w);
                    }
                }
                if dist.len() > max_vertices {
                    return Err(Error::MemoryCapExceeded { radius: r, frontier: next.len() });
                }
            }
            frontier = next;
        }
        let mut vertices: Vec<DLVertex> = dist.keys().cloned().collect();
        vertices.sort();
        Ok(Ball { radius, vertices, dist })
    }
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

/// Closed ball about `id` with exact graph distances, in canonical order.
#[derive(Debug, Clone)]
pub struct Ball {
    radius: u32,
    vertices: Vec<DLVertex>,
    dist: HashMap<DLVertex, u32>,
}

impl Ball {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[DLVertex] {
        &self.vertices
    }

    pub fn contains(&self, v: &DLVertex) -> bool {
        self.dist.contains_key(v)
    }

    /// BFS distance from `id`, if `v` lies in the ball.
    pub fn distance_to(&self, v: &DLVertex) -> Option<u32> {
        self.dist.get(v).copied()
    }

    /// Vertices at distance at most `r`, in canonical order.
    pub fn within(&self, r: u32) -> Vec<DLVertex> {
        self.vertices.iter().filter(|v| self.dist[*v] <= r).cloned().collect()
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius as usize + 1];
        for &r in self.dist.values() {
            sizes[r as usize] += 1;
        }
        sizes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dl32() -> DiestelLeader {
        DiestelLeader::new(3, 2).unwrap()
    }

    #[test]
    fn params_guard() {
        assert!(DLParams::new(1, 2).is_err());
        assert!(DLParams::new(9, 2).is_err());
        assert!(DLParams::new(3, 0).is_err());
        assert!(DLParams::new(8, 1).is_ok());
    }

    #[test]
    fn make_vertex_examples() {
        let g = dl32();
        let fig = g.vertex(&[(0, &[0]), (2, &[1, 0]), (2, &[1])]).unwrap();
        let h: Vec<i64> = fig.coords().iter().map(TreeVertex::h).collect();
        assert_eq!(h, vec![1, 0, -1]);
        assert!(g.vertex(&[(0, &[]), (0, &[]), (0, &[])]).unwrap().is_identity());
        assert_eq!(
            g.vertex(&[(0, &[1]), (0, &[]), (0, &[])]),
            Err(Error::HeightImbalance { sum: 1 })
        );
        assert_eq!(
            g.make_vertex(vec![TreeVertex::basepoint(); 2]),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn make_vertex_checks_labels_against_q() {
        let wide = DiestelLeader::new(3, 3).unwrap();
        let v = wide.vertex(&[(0, &[2]), (1, &[]), (0, &[])]).unwrap();
        assert_eq!(
            dl32().make_vertex(v.coords().to_vec()),
            Err(Error::LabelOutOfRange { label: 2, q: 2 })
        );
    }

    #[test]
    fn neighbor_counts() {
        let g = dl32();
        let id = g.identity();
        let nbrs = g.neighbors(&id);
        assert_eq!(nbrs.len(), 12);
        assert!(!nbrs.contains(&id));
        let mut dedup = nbrs.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 12);
        let g2 = DiestelLeader::new(2, 2).unwrap();
        assert_eq!(g2.neighbors(&g2.identity()).len(), 4);
    }

    #[test]
    fn small_balls() {
        let g = dl32();
        let b0 = g.ball(0).unwrap();
        assert_eq!(b0.vertices(), &[g.identity()]);
        assert_eq!(g.ball(1).unwrap().len(), 13);
        // frozen from the BFS itself (cross-checked by an independent script)
        assert_eq!(g.ball(2).unwrap().len(), 76);
        assert_eq!(g.ball(3).unwrap().sphere_sizes(), vec![1, 12, 63, 243]);
    }

    #[test]
    fn ball_is_sorted() {
        let b = dl32().ball(2).unwrap();
        assert!(b.vertices().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn ball_cap() {
        let err = dl32().ball_with_cap(4, 100).unwrap_err();
        assert!(matches!(err, Error::MemoryCapExceeded { .. }));
    }

    #[test]
    fn parse_examples() {
        let g = dl32();
        let fig = g.parse_vertex("0:0|2:1,0|2:1").unwrap();
        assert_eq!(fig, g.vertex(&[(0, &[0]), (2, &[1, 0]), (2, &[1])]).unwrap());
        assert_eq!(fig.to_string(), "0:0|2:1,0|2:1");
        assert!(g.parse_vertex("0:|0:|0:").unwrap().is_identity());
        assert_eq!(g.parse_vertex("0:1|0:|0:"), Err(Error::HeightImbalance { sum: 1 }));
        let p = g.parse("1:0,1|0:|1:").unwrap();
        assert!(p.canonicalized);
        assert_eq!(p.vertex.to_string(), "0:1|0:|1:");
        assert!(!g.parse("0:1|0:|1:").unwrap().canonicalized);
    }

    #[test]
    fn parse_syntax_errors_carry_positions() {
        let g = dl32();
        assert!(matches!(g.parse("0:|0:"), Err(Error::Syntax { .. })));
        assert!(matches!(g.parse("0:|0:|0:|0:"), Err(Error::Syntax { .. })));
        match g.parse("0:|0:|a:") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("unexpected {other:?}"),
        }
        match g.parse("0:|0:|0:1,7") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("unexpected {other:?}"),
        }
    }
}
