//! Finite certificates about stars at infinity.
//!
//! A star is an infinite object built from closures of halfspaces, so
//! nothing here decides membership. Two kinds of evidence are computed:
//! the witness inequality `d(a_n, b_n) ≤ d(a_n, id)` (which places `lim a_n`
//! in the based star of `lim b_n`), and the separation inequality
//! `d(a_n, w) ≥ d(a_n, id) + k` over truncations of `N_k(β)`.

use serde::Serialize;

use crate::dlgraph::{DLVertex, DiestelLeader, PointFamily};
use crate::error::{Error, Result};
use crate::horofn::{m_profile_default, MLimit};
use crate::metric::distance;
use crate::report::VerificationReport;
use crate::treecoord::TreeVertex;

/// The halfspace `H(W, C) = {z : d(z, W) ≤ d(z, id) + C}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HalfspaceQuery {
    pub w: Vec<DLVertex>,
    pub c: u64,
}

impl HalfspaceQuery {
    pub fn new(w: Vec<DLVertex>, c: u64) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidArgument("halfspace needs a nonempty W".into()));
        }
        Ok(Self { w, c })
    }
}

pub fn in_halfspace(z: &DLVertex, query: &HalfspaceQuery) -> Result<bool> {
    let id = DLVertex::identity_like(z);
    let to_w = query
        .w
        .iter()
        .map(|w| distance(z, w))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .expect("W is nonempty");
    Ok(to_w <= distance(z, &id)? + query.c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarWitnessReport {
    pub checked_n: u32,
    pub holds_for_all: bool,
    pub first_failure: Option<u32>,
    /// `d(a_n, id) − d(a_n, b_n)` for `n = 1..=checked_n`.
    pub margin_at_n: Vec<i64>,
}

/// Checks `d(a_n, b_n) ≤ d(a_n, id)` for `1 ≤ n ≤ n_max`.
pub fn star_witness(a: &PointFamily, b: &PointFamily, n_max: u32) -> Result<StarWitnessReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    if a.params() != b.params() {
        return Err(Error::ParamMismatch { left: a.params().d(), right: b.params().d() });
    }
    let mut margins = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let an = a.at(n)?;
        let id = DLVertex::identity_like(&an);
        margins.push(distance(&an, &id)? as i64 - distance(&an, &b.at(n)?)? as i64);
    }
    let first_failure = margins.iter().position(|&m| m < 0).map(|i| i as u32 + 1);
    Ok(StarWitnessReport {
        checked_n: n_max,
        holds_for_all: first_failure.is_none(),
        first_failure,
        margin_at_n: margins,
    })
}

/// Vertices trivial in `T_1`, `T_2` with `k ≤ m_3 = l_3 ≤ k + depth`, over
/// every canonical label path.
pub fn nk_beta_truncation(g: &DiestelLeader, k: u32, depth: u32) -> Result<Vec<DLVertex>> {
    if g.d() != 3 {
        return Err(Error::WrongDimension { expected: 3, found: g.d() });
    }
    let tree = g.params().tree();
    let q = g.q();
    let mut out = Vec::new();
    for j in k..=k + depth {
        if j == 0 {
            out.push(g.identity());
            continue;
        }
        // first label avoids 0 so that (j, path) is already canonical
        let mut path = vec![0u32; j as usize];
        let mut first = 1;
        while first < q {
            path[0] = first;
            loop {
                let t3: TreeVertex = tree.canonicalize(j, &path)?;
                out.push(g.make_vertex(vec![TreeVertex::basepoint(), TreeVertex::basepoint(), t3])?);
                if !increment(&mut path[1..], q) {
                    break;
                }
            }
            first += 1;
        }
    }
    Ok(out)
}

/// Odometer increment over `[0, q)^len`; false once it wraps.
fn increment(digits: &mut [u32], q: u32) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return true;
        }
        *d = 0;
    }
    false
}

/// Checks `d(a_n, w) ≥ d(a_n, id) + k` for `1 ≤ n ≤ n_max` and every `w` in
/// the depth-`depth` truncation of `N_k(β)`. `a` must have `m_3 ≡ 0`.
pub fn separation_evidence(a: &PointFamily, k: u32, n_max: u32, depth: u32) -> Result<VerificationReport> {
    let g = DiestelLeader::from_params(a.params());
    if g.d() != 3 {
        return Err(Error::WrongDimension { expected: 3, found: g.d() });
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be at least 1".into()));
    }
    let profile = m_profile_default(a, (2 * n_max).max(20))?;
    if profile.tree(2) != MLimit::Finite(0) {
        return Err(Error::ProfileMismatch(format!("{a} has m_3 limit {:?}, need Finite(0)", profile.tree(2))));
    }
    let points = (1..=n_max).map(|n| a.at(n)).collect::<Result<Vec<_>>>()?;
    if let Some(n) = points.iter().position(|p| p.coord(2).m() != 0) {
        return Err(Error::ProfileMismatch(format!("{a} has m_3(a_{}) > 0", n + 1)));
    }

    let targets = nk_beta_truncation(&g, k, depth)?;
    let id = g.identity();
    let mut report = VerificationReport::new(format!("separation {a} k={k} n<={n_max} depth={depth}"));
    for (idx, an) in points.iter().enumerate() {
        let base = distance(an, &id)? as i64;
        for w in &targets {
            let slack = distance(an, w)? as i64 - base - k as i64;
            report.record_slack(slack);
            report.record(slack >= 0, || format!("n={} w={w}: slack {slack}", idx + 1));
        }
    }
    Ok(report)
}
