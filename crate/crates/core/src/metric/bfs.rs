//! Breadth-first distance oracle, independent of the closed-form metric.

use std::collections::HashMap;

use serde::Serialize;

use super::check_same;
use crate::dlgraph::{DLVertex, DiestelLeader, DEFAULT_VERTEX_CAP};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome", content = "distance")]
pub enum BfsOutcome {
    Distance(u64),
    NotWithinCap,
}

impl BfsOutcome {
    pub fn distance(self) -> Option<u64> {
        match self {
            BfsOutcome::Distance(d) => Some(d),
            BfsOutcome::NotWithinCap => None,
        }
    }
}

/// Search radius that always yields a verdict when checking a formula value.
pub fn oracle_cap(formula_distance: u64) -> u32 {
    (2 * formula_distance + 2) as u32
}

pub fn bfs_distance(g: &DiestelLeader, x: &DLVertex, y: &DLVertex, cap: u32) -> Result<BfsOutcome> {
    bfs_distance_with_cap(g, x, y, cap, DEFAULT_VERTEX_CAP)
}

/// Bidirectional breadth-first search from `x` and `y`, stopping once the
/// two searches meet or the combined radius reaches `cap`.
pub fn bfs_distance_with_cap(
    g: &DiestelLeader,
    x: &DLVertex,
    y: &DLVertex,
    cap: u32,
    max_vertices: usize,
) -> Result<BfsOutcome> {
    check_same(x, y)?;
    if x == y {
        return Ok(BfsOutcome::Distance(0));
    }
    let mut sides = [Side::new(x.clone()), Side::new(y.clone())];
    while sides[0].depth + sides[1].depth < cap {
        let a = if sides[0].frontier.len() <= sides[1].frontier.len() { 0 } else { 1 };
        let (head, tail) = sides.split_at_mut(1);
        let (this, other) = if a == 0 { (&mut head[0], &tail[0]) } else { (&mut tail[0], &head[0]) };

        let new_depth = this.depth + 1;
        let mut next = Vec::new();
        let mut best: Option<u32> = None;
        for v in &this.frontier {
            for w in g.neighbors(v) {
                if this.seen.contains_key(&w) {
                    continue;
                }
                if let Some(&dw) = other.seen.get(&w) {
                    let total = new_depth + dw;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                this.seen.insert(w.clone(), new_depth);
                next.push(w);
            }
        }
        if let Some(b) = best {
            return Ok(BfsOutcome::Distance(b as u64));
        }
        if this.seen.len() + other.seen.len() > max_vertices {
            return Err(Error::MemoryCapExceeded { radius: new_depth, frontier: next.len() });
        }
        this.frontier = next;
        this.depth = new_depth;
    }
    Ok(BfsOutcome::NotWithinCap)
}

struct Side {
    depth: u32,
    frontier: Vec<DLVertex>,
    seen: HashMap<DLVertex, u32>,
}

impl Side {
    fn new(start: DLVertex) -> Self {
        let mut seen = HashMap::new();
        seen.insert(start.clone(), 0);
        Self { depth: 0, frontier: vec![start], seen }
    }
}
