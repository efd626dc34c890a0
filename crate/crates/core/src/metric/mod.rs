//! Exact word metric on `DL_d(q)`.
//!
//! For a pair `(x, y)` each tree contributes `m_i(x, y)` and `l_i(x, y)`.
//! For a permutation `σ` and `2 ≤ i ≤ d − 1`
//!
//! ```text
//! f_{σ,i} = m_{σ(1)} + … + m_{σ(i)} + l_{σ(i)} + … + l_{σ(d)}
//! f_{σ,d} = 2 m_{σ(1)} + m_{σ(2)} + … + m_{σ(d)} + l_{σ(d)}
//! ```
//!
//! and `d(x, y) = min_σ max_i f_{σ,i}`. The breadth-first oracle in [`bfs`]
//! computes the same number without the formula.

pub mod bfs;
pub mod bounds;

use std::fmt;
use std::sync::OnceLock;

use itertools::Itertools;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dlgraph::{DLParams, DLVertex, MAX_TREES};
use crate::error::{Error, Result};
use crate::treecoord::{pair_stats, PairStats};

pub use bfs::{bfs_distance, bfs_distance_with_cap, oracle_cap, BfsOutcome};
pub use bounds::{
    balanced_compare, check_coord_dominance, check_f_dominance, coord_dominance_from_profiles,
    f_dominance_from_tables, lower_bounds, BalancedComparison, BoundReport, Claim, Status,
};

/// Per-tree `(m_i(x,y), l_i(x,y))` for an ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairProfile {
    d: usize,
    stats: [PairStats; MAX_TREES],
}

impl PairProfile {
    pub fn from_stats(stats: &[PairStats]) -> Result<Self> {
        if !(2..=MAX_TREES).contains(&stats.len()) {
            return Err(Error::InvalidParams(format!("profile needs 2..={MAX_TREES} trees")));
        }
        let mut arr = [PairStats::default(); MAX_TREES];
        arr[..stats.len()].copy_from_slice(stats);
        Ok(Self { d: stats.len(), stats: arr })
    }

    /// Convenience for tests and examples: `m` and `l` listed per tree.
    pub fn from_ml(m: &[u32], l: &[u32]) -> Result<Self> {
        if m.len() != l.len() {
            return Err(Error::DimensionMismatch { expected: m.len(), found: l.len() });
        }
        let stats: Vec<PairStats> = m.iter().zip(l).map(|(&m, &l)| PairStats { m, l }).collect();
        Self::from_stats(&stats)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn stats(&self) -> &[PairStats] {
        &self.stats[..self.d]
    }

    /// `m_i(x, y)`, 0-based tree index.
    pub fn m(&self, i: usize) -> u32 {
        self.stats()[i].m
    }

    pub fn l(&self, i: usize) -> u32 {
        self.stats()[i].l
    }

    pub fn h(&self, i: usize) -> i64 {
        self.l(i) as i64 - self.m(i) as i64
    }

    /// Profile of the reversed pair.
    pub fn swapped(&self) -> Self {
        let mut out = *self;
        for s in &mut out.stats[..self.d] {
            *s = s.swapped();
        }
        out
    }

    /// Largest single-tree distance `max_i (m_i + l_i)`.
    pub fn max_tree_distance(&self) -> u64 {
        self.stats().iter().map(|s| s.distance() as u64).max().unwrap_or(0)
    }
}

impl Serialize for PairProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let m: Vec<u32> = (0..self.d).map(|i| self.m(i)).collect();
        let l: Vec<u32> = (0..self.d).map(|i| self.l(i)).collect();
        let h: Vec<i64> = (0..self.d).map(|i| self.h(i)).collect();
        let mut s = serializer.serialize_struct("PairProfile", 3)?;
        s.serialize_field("m", &m)?;
        s.serialize_field("l", &l)?;
        s.serialize_field("h", &h)?;
        s.end()
    }
}

pub fn pair_profile(x: &DLVertex, y: &DLVertex) -> Result<PairProfile> {
    check_same(x, y)?;
    let stats: Vec<PairStats> =
        x.coords().iter().zip(y.coords()).map(|(a, b)| pair_stats(a, b)).collect();
    PairProfile::from_stats(&stats)
}

pub(crate) fn check_same(x: &DLVertex, y: &DLVertex) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::ParamMismatch { left: x.dim(), right: y.dim() });
    }
    Ok(())
}

/// A permutation of the trees, stored 0-based in one-line form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Self { images: (0..d).collect() }
    }

    /// From 1-based one-line notation: `[σ(1), …, σ(d)]`.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &v in images {
            if v == 0 || v > d || std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Self { images: images.iter().map(|v| v - 1).collect() })
    }

    /// All `d!` permutations in lexicographic order.
    pub fn all(d: usize) -> &'static [Permutation] {
        static CACHE: [OnceLock<Vec<Permutation>>; MAX_TREES + 1] =
            [const { OnceLock::new() }; MAX_TREES + 1];
        assert!(d <= MAX_TREES, "d = {d} exceeds {MAX_TREES}");
        CACHE[d].get_or_init(|| {
            (0..d).permutations(d).map(|images| Permutation { images }).collect()
        })
    }

    pub fn d(&self) -> usize {
        self.images.len()
    }

    /// `σ(k)`, both 0-based.
    pub fn apply(&self, k: usize) -> usize {
        self.images[k]
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    /// Cycle notation with 1-based points; the identity prints as `(1)`.
    pub fn cycle_notation(&self) -> String {
        let d = self.d();
        let mut seen = vec![false; d];
        let mut out = String::new();
        for start in 0..d {
            if seen[start] || self.images[start] == start {
                continue;
            }
            out.push('(');
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                out.push_str(&(k + 1).to_string());
                k = self.images[k];
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("(1)");
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.cycle_notation())
    }
}

/// `f_{σ,i}` for `2 ≤ i ≤ d`.
pub fn f_value(profile: &PairProfile, sigma: &Permutation, i: usize) -> Result<u64> {
    let d = profile.d();
    if sigma.d() != d {
        return Err(Error::DimensionMismatch { expected: d, found: sigma.d() });
    }
    if !(2..=d).contains(&i) {
        return Err(Error::IndexOutOfRange { index: i, d });
    }
    Ok(f_unchecked(profile, sigma, i))
}

fn f_unchecked(p: &PairProfile, sigma: &Permutation, i: usize) -> u64 {
    let d = p.d();
    let m = |k: usize| p.m(sigma.apply(k)) as u64;
    let l = |k: usize| p.l(sigma.apply(k)) as u64;
    if i == d {
        m(0) + (0..d).map(m).sum::<u64>() + l(d - 1)
    } else {
        (0..i).map(m).sum::<u64>() + (i - 1..d).map(l).sum::<u64>()
    }
}

/// `f_σ = max_{2≤i≤d} f_{σ,i}`.
pub fn f_sigma(profile: &PairProfile, sigma: &Permutation) -> u64 {
    (2..=profile.d()).map(|i| f_unchecked(profile, sigma, i)).max().unwrap_or(0)
}

pub fn distance_from_profile(profile: &PairProfile) -> u64 {
    Permutation::all(profile.d())
        .iter()
        .map(|sigma| f_sigma(profile, sigma))
        .min()
        .unwrap_or(0)
}

pub fn distance(x: &DLVertex, y: &DLVertex) -> Result<u64> {
    Ok(distance_from_profile(&pair_profile(x, y)?))
}

/// Every `f_{σ,i}` for one profile, laid out by permutation then by `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FTable {
    d: usize,
    values: Vec<u64>,
}

impl FTable {
    pub fn new(profile: &PairProfile) -> Self {
        let d = profile.d();
        let perms = Permutation::all(d);
        let mut values = Vec::with_capacity(perms.len() * (d - 1));
        for sigma in perms {
            for i in 2..=d {
                values.push(f_unchecked(profile, sigma, i));
            }
        }
        Self { d, values }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Entry for the `perm_index`-th permutation of [`Permutation::all`].
    pub fn get(&self, perm_index: usize, i: usize) -> u64 {
        self.values[perm_index * (self.d - 1) + (i - 2)]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// `min_σ max_i f_{σ,i}`, identical to [`distance_from_profile`].
    pub fn distance(&self) -> u64 {
        self.values.chunks(self.d - 1).map(|row| *row.iter().max().unwrap()).min().unwrap()
    }
}

/// Configurations where the formula has been checked against the BFS oracle
/// by this crate's test suites.
pub fn oracle_verified(params: DLParams) -> bool {
    matches!((params.d(), params.q()), (3, 2) | (2, 2))
}
