//! The eight acceptance criteria, each run as an exhaustive or seeded sweep.
//!
//! Every criterion targets `DL_3(2)`. A criterion passes when its report has
//! no violations and it finished inside its time limit, if it has one.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dlgraph::{DLVertex, DiestelLeader, PointFamily};
use crate::error::{Error, Result};
use crate::horofn::{
    beta_value, betandist_table, limit_value, probe_disagreement, probe_points, table_order, ProbeSet,
    Stabilization,
};
use crate::metric::bfs::{bfs_distance, oracle_cap, BfsOutcome};
use crate::metric::bounds::{balanced_compare, coord_dominance_from_profiles, f_dominance_from_tables};
use crate::metric::{distance, pair_profile, FTable, PairProfile};
use crate::report::VerificationReport;
use crate::stars::{separation_evidence, star_witness};
use crate::treecoord::TreeVertex;

pub const DEFAULT_SEED: u64 = 0x5eed_d1e5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Conformance,
    Lemmas,
    Horofn,
    Stars,
    All,
}

impl Suite {
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Suite::Conformance => &[1, 8],
            Suite::Lemmas => &[5],
            Suite::Horofn => &[3, 4, 6],
            Suite::Stars => &[2, 7],
            Suite::All => &[1, 2, 3, 4, 5, 6, 7, 8],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "conformance" => Suite::Conformance,
            "lemmas" => Suite::Lemmas,
            "horofn" => Suite::Horofn,
            "stars" => Suite::Stars,
            "all" => Suite::All,
            other => return Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Conformance => "conformance",
            Suite::Lemmas => "lemmas",
            Suite::Horofn => "horofn",
            Suite::Stars => "stars",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub report: VerificationReport,
    pub elapsed_secs: f64,
    pub limit_secs: Option<f64>,
    pub passed: bool,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {}: {} ({} checks, {} violations, {:.2}s",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.report.checked,
            self.report.violations,
            self.elapsed_secs,
        )?;
        if let Some(limit) = self.limit_secs {
            write!(f, " of {limit:.0}s")?;
        }
        f.write_str(")")?;
        if let Some(v) = &self.report.first_violation {
            write!(f, "; first violation: {v}")?;
        }
        Ok(())
    }
}

type Runner = fn(&VerifyConfig) -> Result<VerificationReport>;

fn criterion(id: u8) -> Option<(&'static str, Option<u64>, Runner)> {
    Some(match id {
        1 => ("formula agrees with breadth-first search", Some(60), formula_conformance as Runner),
        2 => ("beta_n is 2n from id and from alpha_n", Some(5), beta_alpha_distances),
        3 => ("beta closed form equals the horofunction limit", Some(120), beta_closed_form),
        4 => ("f-table of (beta_n, z) matches the reference rows", None, beta_table_rows),
        5 => ("distance lemmas have no counterexample", None, lemma_suite),
        6 => ("probes exclude vertices nontrivial in T1 or T2", Some(120), probe_exclusion),
        7 => ("beta is in the star of alpha, alpha is separated from beta", None, star_asymmetry),
        8 => ("metric axioms", None, metric_axioms),
        _ => return None,
    })
}

pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> Result<CriterionOutcome> {
    let (title, limit, runner) =
        criterion(id).ok_or_else(|| Error::InvalidArgument(format!("no criterion {id}")))?;
    let start = Instant::now();
    let report = runner(cfg).unwrap_or_else(|e| {
        let mut r = VerificationReport::new(title);
        r.record(false, || format!("error: {e}"));
        r
    });
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|s| elapsed <= Duration::from_secs(s));
    let mut report = report;
    if !in_time {
        report.notes.push(format!("exceeded the {}s limit", limit.unwrap()));
    }
    Ok(CriterionOutcome {
        id,
        title,
        passed: report.passed() && in_time,
        report,
        elapsed_secs: elapsed.as_secs_f64(),
        limit_secs: limit.map(|s| s as f64),
    })
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<CriterionOutcome>> {
    suite.criteria().iter().map(|&id| run_criterion(id, cfg)).collect()
}

fn dl32() -> DiestelLeader {
    DiestelLeader::new(3, 2).expect("valid parameters")
}

fn formula_vs_bfs(g: &DiestelLeader, x: &DLVertex, y: &DLVertex, r: &mut VerificationReport) -> Result<()> {
    let f = distance(x, y)?;
    let b = bfs_distance(g, x, y, oracle_cap(f))?;
    r.record(b == BfsOutcome::Distance(f), || format!("{x} to {y}: formula {f}, search {b:?}"));
    Ok(())
}

pub fn formula_conformance(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let g = dl32();
    let ball = g.ball(5)?;
    let id = g.identity();
    let mut r = VerificationReport::new("formula vs breadth-first search");
    for v in ball.vertices() {
        formula_vs_bfs(&g, &id, v, &mut r)?;
    }
    let inner = ball.within(4);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..200 {
        let x = inner.choose(&mut rng).expect("nonempty");
        let y = inner.choose(&mut rng).expect("nonempty");
        formula_vs_bfs(&g, x, y, &mut r)?;
    }
    r.notes.push(format!("{} ball vertices against id, 200 sampled pairs", ball.len()));
    Ok(r)
}

pub fn beta_alpha_distances(_: &VerifyConfig) -> Result<VerificationReport> {
    let g = dl32();
    let id = g.identity();
    let mut r = VerificationReport::new("d(beta_n, id) = d(beta_n, alpha_n) = 2n");
    for n in 1..=30u32 {
        let b = g.beta(n)?;
        let a = g.alpha(n)?;
        let (to_id, to_a) = (distance(&b, &id)?, distance(&b, &a)?);
        r.record(to_id == 2 * n as u64, || format!("n={n}: d(beta_n, id) = {to_id}"));
        r.record(to_a == 2 * n as u64, || format!("n={n}: d(beta_n, alpha_n) = {to_a}"));
    }
    Ok(r)
}

pub fn beta_closed_form(_: &VerifyConfig) -> Result<VerificationReport> {
    let g = dl32();
    let beta = PointFamily::beta(g.params())?;
    let mut r = VerificationReport::new("closed form vs stabilized limit");
    let ball = g.ball(5)?;
    for z in ball.vertices() {
        let closed = beta_value(z)?;
        let limit = limit_value(&beta, z, Stabilization::for_probe(z))?.value;
        r.record(closed == limit, || format!("{z}: closed form {closed}, limit {limit}"));
    }
    let mut known = vec![(g.identity(), 0)];
    for j in 1..=2 {
        for eps in 0..2 {
            known.push((g.nu(j, eps, 1)?, -1));
        }
    }
    for (z, want) in known {
        let got = limit_value(&beta, &z, Stabilization::for_probe(&z))?.value;
        r.record(got == want && beta_value(&z)? == want, || format!("{z}: limit {got}, expected {want}"));
    }
    Ok(r)
}

/// Random vertex of `g` with every `m_i`, `l_i` at most `max`.
pub fn random_vertex<R: Rng>(g: &DiestelLeader, rng: &mut R, max: u32) -> Result<DLVertex> {
    let tree = g.params().tree();
    let d = g.d();
    loop {
        let mut ml: Vec<(u32, u32)> = (0..d - 1).map(|_| (rng.gen_range(0..=max), rng.gen_range(0..=max))).collect();
        let h: i64 = ml.iter().map(|&(m, l)| l as i64 - m as i64).sum();
        let m_last = rng.gen_range(0..=max);
        let l_last = m_last as i64 - h;
        if !(0..=max as i64).contains(&l_last) {
            continue;
        }
        ml.push((m_last, l_last as u32));
        let coords = ml
            .into_iter()
            .map(|(m, l)| {
                let path: Vec<u32> = (0..l).map(|_| rng.gen_range(0..g.q())).collect();
                tree.canonicalize(m, &path)
            })
            .collect::<Result<Vec<TreeVertex>>>()?;
        return g.make_vertex(coords);
    }
}

/// Rows of the reference table for `z`: `(slope, intercept)` for `i = 2, 3`
/// and the intercept of `max_i f_{σ,i}`, in [`table_order`].
pub fn reference_rows(z: &DLVertex) -> [([(i64, i64); 2], i64); 6] {
    let c = z.coords();
    let (m1, m2) = (c[0].m() as i64, c[1].m() as i64);
    let (l1, l2) = (c[0].l() as i64, c[1].l() as i64);
    let h3 = c[2].h();
    [
        ([(1, m1 + m2 + l2 + h3), (2, 2 * m1 + m2 + h3)], 2 * m1 + m2 + h3),
        ([(1, m1 + m2 + l1 + h3), (2, 2 * m2 + m1 + h3)], m1 + 2 * m2 + h3),
        ([(1, m2 + l2 + l1), (2, m1 + m2 + l1)], m1 + l1 + m2),
        ([(2, m1 + h3 + l2), (1, 2 * m1 + m2 + l2)], m1 + l2 + h3),
        ([(2, m2 + h3 + l1), (1, 2 * m2 + m1 + l1)], l1 + m2 + h3),
        ([(1, m1 + l1 + l2), (2, m1 + m2 + l2)], m1 + m2 + l2),
    ]
}

pub fn beta_table_rows(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let g = dl32();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 4);
    let mut r = VerificationReport::new("f-table rows");
    let order = table_order();
    for _ in 0..50 {
        let z = random_vertex(&g, &mut rng, 4)?;
        let s = z.parameter_sum();
        let table = betandist_table(&g, &z, s + 5, s + 9)?;
        for (perm, (subs, max_intercept)) in order.iter().zip(reference_rows(&z)) {
            let row = table.row(perm).expect("every permutation has a row");
            for (i, (fit, want)) in row.sub_rows.iter().zip(subs).enumerate() {
                r.record(matches!(fit.slope, 1 | 2) && (fit.slope, fit.intercept) == want, || {
                    format!("{z} {perm} i={}: got {fit:?}, expected {want:?}", i + 2)
                });
            }
            let got = (row.max_row.slope, row.max_row.intercept);
            r.record(got == (2, max_intercept), || {
                format!("{z} {perm} max row: got {got:?}, expected (2, {max_intercept})")
            });
        }
        r.record(table.matches_closed_form, || format!("{z}: offsets {:?} vs beta {}", table.offsets, table.beta_value));
    }
    Ok(r)
}

/// Balanced vertices with `m_1, m_2 ≤ 2` and `m_3 ≤ 4`.
fn balanced_grid(g: &DiestelLeader) -> Result<Vec<DLVertex>> {
    let tree = g.params().tree();
    let per_tree = |max: u32| -> Result<Vec<TreeVertex>> {
        let mut out = vec![TreeVertex::basepoint()];
        for m in 1..=max {
            for code in 0..(1u64 << (m - 1)) {
                let mut path = vec![1u32];
                path.extend((0..m - 1).rev().map(|b| ((code >> b) & 1) as u32));
                out.push(tree.canonicalize(m, &path)?);
            }
        }
        Ok(out)
    };
    let (small, big) = (per_tree(2)?, per_tree(4)?);
    let mut out = Vec::new();
    for a in &small {
        for b in &small {
            for c in &big {
                out.push(g.make_vertex(vec![a.clone(), b.clone(), c.clone()])?);
            }
        }
    }
    Ok(out)
}

pub fn lemma_suite(_: &VerifyConfig) -> Result<VerificationReport> {
    let g = dl32();
    let ball = g.ball(3)?;
    let vs = ball.vertices();
    let n = vs.len();
    let mut profiles: Vec<PairProfile> = Vec::with_capacity(n * n);
    for x in vs {
        for y in vs {
            profiles.push(pair_profile(x, y)?);
        }
    }
    let tables: Vec<FTable> = profiles.iter().map(FTable::new).collect();

    let mut f_dom = VerificationReport::new("f-dominance");
    let mut c_dom = VerificationReport::new("coordinate dominance");
    for x in 0..n {
        for y in 0..n {
            let (xy, pxy) = (&tables[x * n + y], &profiles[x * n + y]);
            for z in 0..n {
                let (xz, pxz) = (&tables[x * n + z], &profiles[x * n + z]);
                let diff = xz.values().iter().zip(xy.values()).map(|(&a, &b)| a as i64 - b as i64).min().unwrap();
                for k in 0..=diff.max(-1) {
                    for strict in [false, true] {
                        let rep = f_dominance_from_tables(xz, xy, k as u64, strict);
                        if rep.hypothesis_holds {
                            f_dom.record(!rep.falsified(), || format!("x={} y={} z={} k={k} strict={strict}", vs[x], vs[y], vs[z]));
                        }
                    }
                }
                let c: Vec<i64> = (0..3)
                    .map(|j| (pxz.m(j) as i64 - pxy.m(j) as i64).min(pxz.l(j) as i64 - pxy.l(j) as i64))
                    .collect();
                if c.iter().all(|&v| v >= 0) {
                    let c: Vec<u32> = c.iter().map(|&v| v as u32).collect();
                    let rep = coord_dominance_from_profiles(pxz, pxy, &c)?;
                    c_dom.record_slack(rep.observed - rep.bound);
                    c_dom.record(!rep.falsified(), || format!("x={} y={} z={} c={c:?}", vs[x], vs[y], vs[z]));
                }
            }
        }
    }

    let mut zs: Vec<DLVertex> = vs.iter().filter(|v| v.is_balanced()).cloned().collect();
    zs.extend(balanced_grid(&g)?);
    zs.sort();
    zs.dedup();
    let mut bal = VerificationReport::new("balanced comparison");
    for x in vs {
        for z in &zs {
            let cmp = balanced_compare(x, z)?;
            for rep in cmp.reports() {
                if rep.hypothesis_holds {
                    bal.record(!rep.falsified(), || format!("x={x} z={z} {:?}", rep.claim));
                }
            }
        }
    }
    let counts = format!(
        "f-dominance {} / coordinate dominance {} / balanced {} applicable checks over {} balanced z",
        f_dom.checked,
        c_dom.checked,
        bal.checked,
        zs.len()
    );
    let mut r = VerificationReport::new("distance lemmas");
    r.absorb(f_dom);
    r.absorb(c_dom);
    r.absorb(bal);
    r.notes.push(counts);
    Ok(r)
}

pub fn probe_exclusion(_: &VerifyConfig) -> Result<VerificationReport> {
    let g = dl32();
    let symmetric = probe_points(&g, ProbeSet::Symmetric)?;
    let printed = probe_points(&g, ProbeSet::Printed)?;
    let mut r = VerificationReport::new("probe exclusion");
    let mut printed_escapes = 0u64;
    let mut first_escape = None;
    for z in g.ball(6)?.vertices() {
        if !(z.nontrivial_in(0) || z.nontrivial_in(1)) {
            continue;
        }
        let v = probe_disagreement(z, &symmetric)?;
        r.record(v.disagrees, || format!("{z} agrees with beta on every symmetric probe"));
        if !probe_disagreement(z, &printed)?.disagrees {
            printed_escapes += 1;
            first_escape.get_or_insert_with(|| z.to_string());
        }
    }
    r.notes.push(format!(
        "printed probe set: {printed_escapes} of {} vertices agree with beta on every probe{}",
        r.checked,
        first_escape.map(|z| format!(", first {z}")).unwrap_or_default()
    ));
    Ok(r)
}

pub fn star_asymmetry(_: &VerifyConfig) -> Result<VerificationReport> {
    let params = dl32().params();
    let alpha = PointFamily::alpha(params)?;
    let beta = PointFamily::beta(params)?;
    let mut r = VerificationReport::new("star asymmetry");
    let w = star_witness(&beta, &alpha, 30)?;
    r.record(w.holds_for_all && w.margin_at_n.iter().all(|&m| m == 0), || {
        format!("witness margins {:?}", w.margin_at_n)
    });
    for k in 1..=5 {
        let sep = separation_evidence(&alpha, k, 10, 3)?;
        let slack = sep.min_slack;
        r.record(slack == Some(0), || format!("k={k}: minimum slack {slack:?}, expected 0"));
        r.absorb(sep);
    }
    Ok(r)
}

pub fn metric_axioms(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let g = dl32();
    let ball = g.ball(4)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 8);
    let mut r = VerificationReport::new("metric axioms");
    for _ in 0..1000 {
        let [x, y, z] = [0; 3].map(|_| ball.vertices().choose(&mut rng).expect("nonempty"));
        let (xy, yx, yz, xz) = (distance(x, y)?, distance(y, x)?, distance(y, z)?, distance(x, z)?);
        r.record(xy == yx, || format!("d({x}, {y}) = {xy} but d({y}, {x}) = {yx}"));
        r.record(xz <= xy + yz, || format!("d({x}, {z}) = {xz} > {xy} + {yz}"));
    }
    let inner = ball.within(3);
    for x in &inner {
        for y in &inner {
            let d = distance(x, y)?;
            r.record((d == 0) == (x == y), || format!("d({x}, {y}) = {d}"));
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_cover_every_criterion() {
        let mut ids: Vec<u8> = [Suite::Conformance, Suite::Lemmas, Suite::Horofn, Suite::Stars]
            .iter()
            .flat_map(|s| s.criteria().iter().copied())
            .collect();
        ids.sort();
        assert_eq!(ids, Suite::All.criteria());
        assert!(ids.iter().all(|&id| criterion(id).is_some()));
        assert!(run_criterion(9, &VerifyConfig::default()).is_err());
        assert_eq!("lemmas".parse::<Suite>().unwrap(), Suite::Lemmas);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn reference_rows_on_a_worked_vertex() {
        let g = dl32();
        let z = g.parse_vertex("0:0|2:1,0|2:1").unwrap();
        let maxes: Vec<i64> = reference_rows(&z).iter().map(|r| r.1).collect();
        assert_eq!(maxes, vec![1, 3, 3, 1, 2, 4]);
        assert_eq!(beta_value(&z).unwrap(), 1);
    }

    #[test]
    fn random_vertices_respect_the_bound() {
        let g = dl32();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let v = random_vertex(&g, &mut rng, 4).unwrap();
            assert!(g.is_valid(&v));
            assert!(v.max_parameter() <= 4);
        }
    }

    #[test]
    fn balanced_grid_size() {
        let grid = balanced_grid(&dl32()).unwrap();
        assert_eq!(grid.len(), 4 * 4 * 16);
        assert!(grid.iter().all(DLVertex::is_balanced));
    }

    #[test]
    fn quick_criteria_pass() {
        let cfg = VerifyConfig::default();
        for id in [2, 4, 7] {
            let out = run_criterion(id, &cfg).unwrap();
            assert!(out.passed, "{out}");
        }
    }
}
