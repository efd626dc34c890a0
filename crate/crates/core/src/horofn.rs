//! Horofunctions `z ↦ lim d(x_n, z) − d(x_n, id)` of point families.
//!
//! Limits are detected by finite stabilization: the normalized distance must
//! be constant over a window of consecutive indices. For the family `β_n` the
//! limit also has a closed form, see [`beta_value`].

use serde::Serialize;

use crate::dlgraph::{DLVertex, DiestelLeader, PointFamily};
use crate::error::{Error, Result};
use crate::metric::{distance, pair_profile, f_value, f_sigma, Permutation};

/// Index window used to decide that `d(x_n, z) − d(x_n, id)` has settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Stabilization {
    pub n_min: u32,
    pub window: u32,
    pub n_max: u32,
}

impl Stabilization {
    pub const DEFAULT_WINDOW: u32 = 10;
    pub const DEFAULT_BUDGET: u32 = 200;

    /// Starts just past the probe's own parameters.
    pub fn for_probe(z: &DLVertex) -> Self {
        let n_min = z.parameter_sum() + 1;
        Self { n_min, window: Self::DEFAULT_WINDOW, n_max: n_min + Self::DEFAULT_BUDGET }
    }

    fn validate(&self) -> Result<()> {
        if self.window < 2 {
            return Err(Error::InvalidArgument("window must be at least 2".into()));
        }
        if self.n_max <= self.n_min + self.window {
            return Err(Error::InvalidArgument("n_max must exceed n_min + window".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HorofunctionValue {
    pub value: i64,
    pub stabilized_at: u32,
    pub window: u32,
}

/// `d(x_n, z) − d(x_n, id)` at a single index.
pub fn normalized_distance(family: &PointFamily, z: &DLVertex, n: u32) -> Result<i64> {
    let x = family.at(n)?;
    let id = DLVertex::identity_like(&x);
    Ok(distance(&x, z)? as i64 - distance(&x, &id)? as i64)
}

pub fn limit_value(family: &PointFamily, z: &DLVertex, stab: Stabilization) -> Result<HorofunctionValue> {
    stab.validate()?;
    if z.dim() != family.params().d() {
        return Err(Error::ParamMismatch { left: family.params().d(), right: z.dim() });
    }
    let mut run_start = stab.n_min;
    let mut run_value = normalized_distance(family, z, stab.n_min)?;
    for n in stab.n_min + 1..=stab.n_max {
        let v = normalized_distance(family, z, n)?;
        if v != run_value {
            run_start = n;
            run_value = v;
        }
        if n + 1 - run_start >= stab.window {
            return Ok(HorofunctionValue { value: run_value, stabilized_at: run_start, window: stab.window });
        }
    }
    Err(Error::NotStabilized { n_max: stab.n_max })
}

/// [`limit_value`] with the default window for `z`.
pub fn horofunction(family: &PointFamily, z: &DLVertex) -> Result<i64> {
    limit_value(family, z, Stabilization::for_probe(z)).map(|h| h.value)
}

fn need_three(v: &DLVertex) -> Result<()> {
    if v.dim() != 3 {
        return Err(Error::WrongDimension { expected: 3, found: v.dim() });
    }
    Ok(())
}

/// Closed form of the horofunction of `β_n`:
/// `m_1 + m_2 + min_{j=1,2} {m_j + h_3, h_j + h_3, l_j}`, all parameters of `z`.
pub fn beta_value(z: &DLVertex) -> Result<i64> {
    need_three(z)?;
    let c = z.coords();
    let (m, l, h) = (|i: usize| c[i].m() as i64, |i: usize| c[i].l() as i64, |i: usize| c[i].h());
    let h3 = h(2);
    let tail = (0..2).map(|j| (m(j) + h3).min(h(j) + h3).min(l(j))).min().unwrap();
    Ok(m(0) + m(1) + tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "limit", content = "value")]
pub enum MLimit {
    Finite(u32),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct MProfile(pub Vec<MLimit>);

impl MProfile {
    pub fn tree(&self, i: usize) -> MLimit {
        self.0[i]
    }
}

/// Reads off `lim m_i(x_n)` from the tail `[n_max / 2, n_max]`: constant
/// means finite, nondecreasing past `threshold` means infinite.
pub fn m_profile(family: &PointFamily, n_max: u32, threshold: u32) -> Result<MProfile> {
    if n_max < 2 || threshold == 0 {
        return Err(Error::InvalidArgument("n_max must be >= 2 and threshold positive".into()));
    }
    let tail: Vec<DLVertex> = (n_max / 2..=n_max).map(|n| family.at(n)).collect::<Result<_>>()?;
    let d = family.params().d();
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let ms: Vec<u32> = tail.iter().map(|v| v.coord(i).m()).collect();
        let last = *ms.last().unwrap();
        if ms.iter().all(|&m| m == ms[0]) {
            out.push(MLimit::Finite(ms[0]));
        } else if ms.windows(2).all(|w| w[0] <= w[1]) && last > threshold {
            out.push(MLimit::Infinite);
        } else {
            return Err(Error::Inconclusive { tree: i + 1, n_max });
        }
    }
    Ok(MProfile(out))
}

/// `m_profile` with the default threshold `n_max / 2`.
pub fn m_profile_default(family: &PointFamily, n_max: u32) -> Result<MProfile> {
    m_profile(family, n_max, (n_max / 2).max(1))
}

/// `slope · n + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AffineInN {
    pub slope: i64,
    pub intercept: i64,
}

impl AffineInN {
    pub fn at(&self, n: u32) -> i64 {
        self.slope * n as i64 + self.intercept
    }

    /// Fits through `(n1, v1)` and `(n2, v2)`, then confirms at `(n3, v3)`.
    fn fit(points: [(u32, i64); 3]) -> Option<Self> {
        let [(n1, v1), (n2, v2), (n3, v3)] = points;
        let dn = n2 as i64 - n1 as i64;
        if dn == 0 || (v2 - v1) % dn != 0 {
            return None;
        }
        let slope = (v2 - v1) / dn;
        let fit = Self { slope, intercept: v1 - slope * n1 as i64 };
        (fit.at(n3) == v3).then_some(fit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaTableRow {
    pub perm: Permutation,
    /// `f_{σ,i}` for `i = 2, 3`.
    pub sub_rows: Vec<AffineInN>,
    /// `f_σ = max_i f_{σ,i}` for large `n`.
    pub max_row: AffineInN,
    /// The `i` realizing the maximum.
    pub max_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BetaTable {
    pub n1: u32,
    pub n2: u32,
    pub rows: Vec<BetaTableRow>,
    /// `d(β_n, z) − 2n` at `n1` and `n2`.
    pub offsets: [i64; 2],
    pub beta_value: i64,
    pub matches_closed_form: bool,
}

impl BetaTable {
    pub fn row(&self, perm: &Permutation) -> Option<&BetaTableRow> {
        self.rows.iter().find(|r| &r.perm == perm)
    }
}

/// Row order of the reference table: `(1), (12), (13), (23), (123), (132)`.
pub fn table_order() -> Vec<Permutation> {
    [[1, 2, 3], [2, 1, 3], [3, 2, 1], [1, 3, 2], [2, 3, 1], [3, 1, 2]]
        .iter()
        .map(|p| Permutation::from_one_line(p).expect("valid"))
        .collect()
}

/// Measures every `f_{σ,i}(β_n, z)` at two large indices and fits them as
/// affine functions of `n`, confirming each fit at `n1 + 1`.
pub fn betandist_table(g: &DiestelLeader, z: &DLVertex, n1: u32, n2: u32) -> Result<BetaTable> {
    need_three(z)?;
    if g.d() != 3 {
        return Err(Error::WrongDimension { expected: 3, found: g.d() });
    }
    let margin = z.parameter_sum();
    if n1 == n2 || n1.min(n2) <= margin {
        return Err(Error::InvalidArgument(format!(
            "need distinct n1, n2 > {margin} (sum of the parameters of z)"
        )));
    }
    let ns = [n1, n2, n1 + 1];
    let profiles = ns
        .iter()
        .map(|&n| pair_profile(&g.beta(n)?, z))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(6);
    for perm in table_order() {
        let mut sub_rows = Vec::with_capacity(2);
        for i in 2..=3 {
            let mut pts = [(0u32, 0i64); 3];
            for (k, p) in profiles.iter().enumerate() {
                pts[k] = (ns[k], f_value(p, &perm, i)? as i64);
            }
            let fit = AffineInN::fit(pts)
                .ok_or_else(|| Error::NonAffine { perm: perm.cycle_notation(), index: i })?;
            sub_rows.push(fit);
        }
        let mut pts = [(0u32, 0i64); 3];
        for (k, p) in profiles.iter().enumerate() {
            pts[k] = (ns[k], f_sigma(p, &perm) as i64);
        }
        let max_row = AffineInN::fit(pts)
            .ok_or_else(|| Error::NonAffine { perm: perm.cycle_notation(), index: 0 })?;
        let max_index = if sub_rows[1] == max_row { 3 } else { 2 };
        rows.push(BetaTableRow { perm, sub_rows, max_row, max_index });
    }

    let id = g.identity();
    let mut offsets = [0i64; 2];
    for (k, &n) in [n1, n2].iter().enumerate() {
        let b = g.beta(n)?;
        debug_assert_eq!(distance(&b, &id)?, 2 * n as u64);
        offsets[k] = distance(&b, z)? as i64 - 2 * n as i64;
    }
    let beta = beta_value(z)?;
    Ok(BetaTable {
        n1,
        n2,
        rows,
        offsets,
        beta_value: beta,
        matches_closed_form: offsets.iter().all(|&o| o == beta),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeSet {
    /// `{ζ^1_1, ζ^1_2, ν^{1,0}_1, ν^{1,1}_1, ν^{2,0}_1, ν^{2,1}_1}` as listed.
    Printed,
    /// Same set with `ζ^2_1` in place of `ζ^1_2`.
    Symmetric,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub label: String,
    pub vertex: DLVertex,
}

pub fn probe_points(g: &DiestelLeader, set: ProbeSet) -> Result<Vec<Probe>> {
    if g.d() != 3 {
        return Err(Error::WrongDimension { expected: 3, found: g.d() });
    }
    let second_zeta = match set {
        ProbeSet::Printed => (1, 2),
        ProbeSet::Symmetric => (2, 1),
    };
    let mut out = vec![
        Probe { label: "zeta^1_1".into(), vertex: g.zeta(1, 1)? },
        Probe {
            label: format!("zeta^{}_{}", second_zeta.0, second_zeta.1),
            vertex: g.zeta(second_zeta.0, second_zeta.1)?,
        },
    ];
    for j in 1..=2 {
        for eps in 0..2 {
            out.push(Probe { label: format!("nu^{{{j},{eps}}}_1"), vertex: g.nu(j, eps, 1)? });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeWitness {
    pub label: String,
    pub probe: DLVertex,
    /// `d(z, f) − d(z, id)`.
    pub observed: i64,
    /// `β(f)`.
    pub expected: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeVerdict {
    /// True when `z` lies outside `B(F)`.
    pub disagrees: bool,
    /// Every probe on which `f_z` and `β` differ, in probe order.
    pub witnesses: Vec<ProbeWitness>,
}

impl ProbeVerdict {
    pub fn witness(&self) -> Option<&ProbeWitness> {
        self.witnesses.first()
    }

    pub fn has_witness(&self, label: &str) -> bool {
        self.witnesses.iter().any(|w| w.label == label)
    }
}

/// Compares `f_z(p) = d(z, p) − d(z, id)` with `β(p)` on every probe `p`.
pub fn probe_disagreement(z: &DLVertex, probes: &[Probe]) -> Result<ProbeVerdict> {
    need_three(z)?;
    let id = DLVertex::identity_like(z);
    let base = distance(z, &id)? as i64;
    let mut witnesses = Vec::new();
    for p in probes {
        let observed = distance(z, &p.vertex)? as i64 - base;
        let expected = beta_value(&p.vertex)?;
        if observed != expected {
            witnesses.push(ProbeWitness { label: p.label.clone(), probe: p.vertex.clone(), observed, expected });
        }
    }
    Ok(ProbeVerdict { disagrees: !witnesses.is_empty(), witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dl32() -> DiestelLeader {
        DiestelLeader::new(3, 2).unwrap()
    }

    #[test]
    fn beta_value_examples() {
        let g = dl32();
        assert_eq!(beta_value(&g.identity()).unwrap(), 0);
        assert_eq!(beta_value(&g.nu(1, 1, 1).unwrap()).unwrap(), -1);
        assert_eq!(beta_value(&g.zeta(1, 1).unwrap()).unwrap(), 1);
        let d2 = DiestelLeader::new(2, 2).unwrap();
        assert_eq!(beta_value(&d2.identity()), Err(Error::WrongDimension { expected: 3, found: 2 }));
    }

    #[test]
    fn limit_value_examples() {
        let g = dl32();
        let beta = PointFamily::beta(g.params()).unwrap();
        let alpha = PointFamily::alpha(g.params()).unwrap();
        let id = g.identity();
        assert_eq!(horofunction(&beta, &id).unwrap(), 0);
        assert_eq!(horofunction(&alpha, &id).unwrap(), 0);
        let nu = g.nu(1, 1, 1).unwrap();
        let h = limit_value(&beta, &nu, Stabilization::for_probe(&nu)).unwrap();
        assert_eq!(h.value, -1);
        assert_eq!(h.window, 10);
        assert_eq!(h.stabilized_at, Stabilization::for_probe(&nu).n_min);
    }

    #[test]
    fn alpha_is_a_geodesic_ray() {
        let g = dl32();
        let id = g.identity();
        for n in 0..=25 {
            assert_eq!(distance(&g.alpha(n).unwrap(), &id).unwrap(), n as u64);
        }
    }

    #[test]
    fn limit_value_argument_checks() {
        let g = dl32();
        let beta = PointFamily::beta(g.params()).unwrap();
        let id = g.identity();
        let bad = Stabilization { n_min: 1, window: 1, n_max: 50 };
        assert!(limit_value(&beta, &id, bad).is_err());
        let bad = Stabilization { n_min: 1, window: 10, n_max: 11 };
        assert!(limit_value(&beta, &id, bad).is_err());
    }

    #[test]
    fn unsettled_sequence_is_reported() {
        let g = dl32();
        let a = g.alpha(4).unwrap();
        let b = g.beta(4).unwrap();
        // alternates between two vertices with different normalized distances
        let flip = PointFamily::custom(g.params(), "flip", move |n| {
            Ok(if n % 2 == 0 { a.clone() } else { b.clone() })
        });
        let z = g.zeta(3, 1).unwrap();
        assert_eq!(
            limit_value(&flip, &z, Stabilization { n_min: 0, window: 3, n_max: 20 }),
            Err(Error::NotStabilized { n_max: 20 })
        );
    }

    #[test]
    fn m_profile_examples() {
        let g = dl32();
        let p = g.params();
        use MLimit::*;
        let prof = |f: PointFamily| m_profile_default(&f, 40).unwrap().0;
        assert_eq!(prof(PointFamily::alpha(p).unwrap()), vec![Finite(0), Infinite, Finite(0)]);
        assert_eq!(prof(PointFamily::beta(p).unwrap()), vec![Finite(0), Finite(0), Infinite]);
        assert_eq!(prof(PointFamily::gamma(p, &[1, 3]).unwrap()), vec![Infinite, Finite(0), Infinite]);
        assert_eq!(prof(PointFamily::zeta(p, 2, Some(3)).unwrap()), vec![Finite(0), Finite(3), Finite(0)]);
    }

    #[test]
    fn m_profile_inconclusive() {
        let g = dl32();
        let flip = PointFamily::custom(g.params(), "flip", move |n| g.zeta(1, n % 3));
        assert!(matches!(m_profile_default(&flip, 40), Err(Error::Inconclusive { tree: 1, .. })));
    }

    #[test]
    fn table_for_identity() {
        let g = dl32();
        let t = betandist_table(&g, &g.identity(), 20, 27).unwrap();
        assert_eq!(t.rows.len(), 6);
        for row in &t.rows {
            assert_eq!(row.max_row, AffineInN { slope: 2, intercept: 0 });
        }
        assert_eq!(t.offsets, [0, 0]);
        assert!(t.matches_closed_form);
    }

    #[test]
    fn table_for_zeta() {
        let g = dl32();
        let t = betandist_table(&g, &g.zeta(1, 1).unwrap(), 20, 31).unwrap();
        let first = &t.rows[0];
        assert_eq!(first.perm.cycle_notation(), "(1)");
        assert_eq!(first.max_row, AffineInN { slope: 2, intercept: 2 });
        assert_eq!(first.max_index, 3);
        assert_eq!(t.beta_value, 1);
        assert!(t.matches_closed_form);
    }

    #[test]
    fn table_argument_checks() {
        let g = dl32();
        let z = g.zeta(1, 3).unwrap();
        assert!(betandist_table(&g, &z, 6, 20).is_err());
        assert!(betandist_table(&g, &z, 20, 20).is_err());
    }

    #[test]
    fn probe_examples() {
        let g = dl32();
        let sym = probe_points(&g, ProbeSet::Symmetric).unwrap();
        let z = g.parse_vertex("1:1|0:|0:").unwrap();
        let v = probe_disagreement(&z, &sym).unwrap();
        assert!(v.disagrees);
        assert_eq!(v.witness().unwrap().label, "zeta^1_1");

        assert!(!probe_disagreement(&g.beta(5).unwrap(), &sym).unwrap().disagrees);
        let printed = probe_points(&g, ProbeSet::Printed).unwrap();
        assert!(!probe_disagreement(&g.beta(5).unwrap(), &printed).unwrap().disagrees);

        let v = probe_disagreement(&g.nu(1, 0, 3).unwrap(), &sym).unwrap();
        assert!(v.disagrees);
        assert!(v.has_witness("nu^{1,1}_1"));
        assert!(!v.has_witness("nu^{1,0}_1"));
    }

    #[test]
    fn probe_labels() {
        let g = dl32();
        let labels: Vec<String> =
            probe_points(&g, ProbeSet::Printed).unwrap().into_iter().map(|p| p.label).collect();
        assert_eq!(
            labels,
            ["zeta^1_1", "zeta^1_2", "nu^{1,0}_1", "nu^{1,1}_1", "nu^{2,0}_1", "nu^{2,1}_1"]
        );
    }
}
