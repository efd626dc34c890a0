//! Executable forms of the distance-bound lemmas.
//!
//! Each checker evaluates a hypothesis on the `(m, l)` data and, when it
//! holds, compares the asserted distance relation with the exact metric.

use serde::Serialize;

use super::{check_same, distance, pair_profile, FTable, PairProfile};
use crate::dlgraph::DLVertex;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    /// Some `f_{σ,i} ≥ R` for every `σ` forces `d ≥ R`.
    BigIndex,
    /// `d ≥ max_i d_i(p_i(x), p_i(y))`.
    TreeDist,
    /// Termwise `f` domination transfers to the metric.
    FDominance,
    /// Per-tree `(m, l)` domination by `c_j` adds `Σ c_j`.
    CoordDominance,
    /// Balanced `z` strictly below `x`: `d(x, z) = d(x, id)`.
    BalancedEq,
    /// Balanced `z` weakly below `x`: `d(x, z) ≤ d(x, id)`.
    BalancedLeq,
    /// Balanced `z` avoiding `m_i(x)`: `d(x, z) ≥ d(x, id) + Σ c_i`.
    BalancedGeq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Falsified,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub claim: Claim,
    pub hypothesis_holds: bool,
    /// The value the conclusion compares against.
    pub bound: i64,
    /// The exact distance the conclusion is about.
    pub observed: i64,
    pub status: Status,
}

impl BoundReport {
    fn new(claim: Claim, hypothesis_holds: bool, bound: i64, observed: i64, conclusion: bool) -> Self {
        let status = match (hypothesis_holds, conclusion) {
            (false, _) => Status::NotApplicable,
            (true, true) => Status::Verified,
            (true, false) => Status::Falsified,
        };
        Self { claim, hypothesis_holds, bound, observed, status }
    }

    /// Hypothesis held and the conclusion was confirmed.
    pub fn verified(&self) -> bool {
        self.status == Status::Verified
    }

    pub fn falsified(&self) -> bool {
        self.status == Status::Falsified
    }
}

/// Returns `(tree-distance bound, big-index bound)`.
///
/// The big-index bound is the largest `R` such that every permutation has
/// some `f_{σ,i} ≥ R`, namely `min_σ max_i f_{σ,i}`.
pub fn lower_bounds(x: &DLVertex, y: &DLVertex) -> Result<(BoundReport, BoundReport)> {
    let profile = pair_profile(x, y)?;
    let table = FTable::new(&profile);
    let d = table.distance() as i64;
    let tree = profile.max_tree_distance() as i64;
    let index = table.distance() as i64;
    Ok((
        BoundReport::new(Claim::TreeDist, true, tree, d, d >= tree),
        BoundReport::new(Claim::BigIndex, true, index, d, d >= index),
    ))
}

pub fn check_f_dominance(
    x: &DLVertex,
    y: &DLVertex,
    z: &DLVertex,
    k: u64,
    strict: bool,
) -> Result<BoundReport> {
    let xz = FTable::new(&pair_profile(x, z)?);
    let xy = FTable::new(&pair_profile(x, y)?);
    Ok(f_dominance_from_tables(&xz, &xy, k, strict))
}

/// Core of [`check_f_dominance`] on precomputed tables for `(x, z)` and `(x, y)`.
pub fn f_dominance_from_tables(xz: &FTable, xy: &FTable, k: u64, strict: bool) -> BoundReport {
    let hypothesis = xz.values().iter().zip(xy.values()).all(|(&a, &b)| {
        if strict {
            a > b + k
        } else {
            a >= b + k
        }
    });
    let observed = xz.distance() as i64;
    let bound = (xy.distance() + k) as i64;
    let conclusion = if strict { observed > bound } else { observed >= bound };
    BoundReport::new(Claim::FDominance, hypothesis, bound, observed, conclusion)
}

pub fn check_coord_dominance(x: &DLVertex, y: &DLVertex, z: &DLVertex, c: &[u32]) -> Result<BoundReport> {
    let xz = pair_profile(x, z)?;
    let xy = pair_profile(x, y)?;
    coord_dominance_from_profiles(&xz, &xy, c)
}

pub fn coord_dominance_from_profiles(xz: &PairProfile, xy: &PairProfile, c: &[u32]) -> Result<BoundReport> {
    if c.len() != xz.d() {
        return Err(Error::DimensionMismatch { expected: xz.d(), found: c.len() });
    }
    let hypothesis = (0..xz.d()).all(|j| xz.m(j) >= xy.m(j) + c[j] && xz.l(j) >= xy.l(j) + c[j]);
    let observed = super::distance_from_profile(xz) as i64;
    let bound = super::distance_from_profile(xy) as i64 + c.iter().map(|&v| v as i64).sum::<i64>();
    Ok(BoundReport::new(Claim::CoordDominance, hypothesis, bound, observed, observed >= bound))
}

/// Outcome of comparing `d(x, z)` with `d(x, id)` for a balanced `z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BalancedComparison {
    pub strict: BoundReport,
    pub weak: BoundReport,
    pub positive: BoundReport,
    /// `c_i = max(0, m_i(z) − m_i(x))`.
    pub c: Vec<u32>,
}

impl BalancedComparison {
    pub fn reports(&self) -> [&BoundReport; 3] {
        [&self.strict, &self.weak, &self.positive]
    }

    pub fn any_falsified(&self) -> bool {
        self.reports().iter().any(|r| r.falsified())
    }
}

/// `z` must satisfy `h_i(z) = 0` in every tree.
pub fn balanced_compare(x: &DLVertex, z: &DLVertex) -> Result<BalancedComparison> {
    check_same(x, z)?;
    if let Some((i, c)) = z.coords().iter().enumerate().find(|(_, c)| c.h() != 0) {
        return Err(Error::NotBalanced { tree: i + 1, height: c.h() });
    }
    let id = DLVertex::identity_like(x);
    let dxz = distance(x, z)? as i64;
    let dxid = distance(x, &id)? as i64;

    let pairs: Vec<(u32, u32)> =
        x.coords().iter().zip(z.coords()).map(|(a, b)| (a.m(), b.m())).collect();

    let strict_hyp = pairs
        .iter()
        .all(|&(mx, mz)| if mx != 0 { mz < mx } else { mz == 0 });
    let weak_hyp = pairs.iter().all(|&(mx, mz)| mz <= mx);
    let pos_hyp = pairs.iter().all(|&(mx, mz)| mz != mx || mx == 0);
    let c: Vec<u32> = pairs.iter().map(|&(mx, mz)| mz.saturating_sub(mx)).collect();
    let csum: i64 = c.iter().map(|&v| v as i64).sum();

    Ok(BalancedComparison {
        strict: BoundReport::new(Claim::BalancedEq, strict_hyp, dxid, dxz, dxz == dxid),
        weak: BoundReport::new(Claim::BalancedLeq, weak_hyp, dxid, dxz, dxz <= dxid),
        positive: BoundReport::new(Claim::BalancedGeq, pos_hyp, dxid + csum, dxz, dxz >= dxid + csum),
        c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dlgraph::DiestelLeader;

    fn dl32() -> DiestelLeader {
        DiestelLeader::new(3, 2).unwrap()
    }

    #[test]
    fn lower_bound_examples() {
        let g = dl32();
        let id = g.identity();
        let (tree, index) = lower_bounds(&id, &id).unwrap();
        assert_eq!((tree.bound, index.bound), (0, 0));
        let z = g.zeta(1, 1).unwrap();
        let (tree, index) = lower_bounds(&id, &z).unwrap();
        assert_eq!((tree.bound, tree.observed), (2, 2));
        assert!(tree.verified() && index.verified());

        // m_1 = m_2 = 0: the T_3 tree distance is realized
        let y = g.parse_vertex("0:1|0:1,0|5:1,1").unwrap();
        let (tree, _) = lower_bounds(&id, &y).unwrap();
        assert_eq!(tree.bound, 1 + 2 + 2 * 2);
        assert_eq!(tree.observed, tree.bound);
    }

    #[test]
    fn f_dominance_examples() {
        let g = dl32();
        let a3 = g.alpha(3).unwrap();
        let id = g.identity();
        let y = g.parse_vertex("0:1|0:|1:").unwrap();
        let same = check_f_dominance(&a3, &y, &y, 0, false).unwrap();
        assert!(same.hypothesis_holds && same.verified());

        let w = g.parse_vertex("0:|0:|2:1,1").unwrap();
        let r = check_f_dominance(&a3, &id, &w, 2, false).unwrap();
        assert!(r.hypothesis_holds);
        assert_eq!((r.observed, r.bound), (5, 5));
        assert!(r.verified());
        let r = check_f_dominance(&a3, &id, &w, 3, false).unwrap();
        assert_eq!(r.status, Status::NotApplicable);
        assert!(!r.verified() && !r.falsified());
    }

    #[test]
    fn coord_dominance_examples() {
        let g = dl32();
        let a3 = g.alpha(3).unwrap();
        let id = g.identity();
        let w = g.parse_vertex("0:|0:|2:1,1").unwrap();
        let r = check_coord_dominance(&a3, &id, &w, &[0, 0, 2]).unwrap();
        assert!(r.verified());
        assert_eq!((r.observed, r.bound), (5, 5));
        let r = check_coord_dominance(&a3, &w, &w, &[0, 0, 0]).unwrap();
        assert!(r.verified());
        assert!(check_coord_dominance(&a3, &w, &w, &[0, 0]).is_err());
    }

    #[test]
    fn balanced_examples() {
        let g = dl32();
        let id = g.identity();
        let x = g.parse_vertex("2:1,1|1:|0:0").unwrap();
        let r = balanced_compare(&x, &id).unwrap();
        assert!(r.weak.verified());
        assert_eq!(r.weak.observed, r.weak.bound);

        // α_n against ζ^3_k: m_3(α_n) = 0 < k
        let a = g.alpha(6).unwrap();
        let z = g.zeta(3, 2).unwrap();
        let r = balanced_compare(&a, &z).unwrap();
        assert!(r.positive.verified());
        assert_eq!(r.c, vec![0, 0, 2]);
        assert!(r.positive.observed >= 6 + 2);

        // ζ^1_1 strictly below a vertex with m_1 = 2
        let z = g.zeta(1, 1).unwrap();
        let r = balanced_compare(&x, &z).unwrap();
        assert!(r.weak.verified());
        assert!(r.weak.observed <= r.weak.bound);

        assert_eq!(
            balanced_compare(&x, &g.nu(1, 0, 1).unwrap()).unwrap_err(),
            Error::NotBalanced { tree: 1, height: 1 }
        );
    }
}
