//! Integer-indexed vertex sequences used to approach boundary points.
//!
//! Tree numbers in this module are 1-based (`T_1 … T_d`).

use std::fmt;
use std::sync::Arc;

use super::{DLParams, DLVertex, DiestelLeader};
use crate::error::{Error, Result};
use crate::treecoord::TreeVertex;

type Generator = dyn Fn(u32) -> Result<DLVertex> + Send + Sync;

/// A user-supplied sequence.
#[derive(Clone)]
pub struct CustomFamily {
    name: String,
    generator: Arc<Generator>,
}

impl fmt::Debug for CustomFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFamily").field("name", &self.name).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum FamilyKind {
    /// `l_1 = m_2 = n`, climbing `T_1` along label 1.
    Alpha,
    /// `m_3 = l_3 = n`, climbing `T_3` along label 1.
    Beta,
    /// `m_i = l_i = n` along label 1 for every `i` in the subset.
    Gamma(Vec<usize>),
    /// `m_i = l_i = k` in one tree along label 1. With `k = None` the
    /// sequence index plays the role of `k`.
    Zeta { tree: usize, k: Option<u32> },
    /// `k` edges labeled `label` up in `T_j` (`j ∈ {1, 2}`) and `k` edges down in `T_3`.
    Nu { tree: usize, label: u32, k: Option<u32> },
    Custom(CustomFamily),
}

#[derive(Debug, Clone)]
pub struct PointFamily {
    params: DLParams,
    kind: FamilyKind,
}

impl PointFamily {
    pub fn alpha(params: DLParams) -> Result<Self> {
        need_label_one(params)?;
        Ok(Self { params, kind: FamilyKind::Alpha })
    }

    pub fn beta(params: DLParams) -> Result<Self> {
        need_label_one(params)?;
        need_third_tree(params)?;
        Ok(Self { params, kind: FamilyKind::Beta })
    }

    /// `trees` must contain 3 and at least one other tree.
    pub fn gamma(params: DLParams, trees: &[usize]) -> Result<Self> {
        need_label_one(params)?;
        need_third_tree(params)?;
        let mut trees = trees.to_vec();
        trees.sort_unstable();
        trees.dedup();
        if let Some(&bad) = trees.iter().find(|&&t| t == 0 || t > params.d()) {
            return Err(Error::InvalidFamily(format!("tree {bad} outside 1..={}", params.d())));
        }
        if !trees.contains(&3) || trees.len() < 2 {
            return Err(Error::InvalidFamily(
                "gamma needs tree 3 and at least one other tree".into(),
            ));
        }
        Ok(Self { params, kind: FamilyKind::Gamma(trees) })
    }

    pub fn zeta(params: DLParams, tree: usize, k: Option<u32>) -> Result<Self> {
        need_label_one(params)?;
        if tree == 0 || tree > params.d() {
            return Err(Error::InvalidFamily(format!("tree {tree} outside 1..={}", params.d())));
        }
        Ok(Self { params, kind: FamilyKind::Zeta { tree, k } })
    }

    pub fn nu(params: DLParams, tree: usize, label: u32, k: Option<u32>) -> Result<Self> {
        need_third_tree(params)?;
        if !(tree == 1 || tree == 2) {
            return Err(Error::InvalidFamily(format!("nu is defined for trees 1 and 2, got {tree}")));
        }
        params.tree().label(label).map_err(|e| Error::InvalidFamily(e.to_string()))?;
        Ok(Self { params, kind: FamilyKind::Nu { tree, label, k } })
    }

    pub fn custom<F>(params: DLParams, name: impl Into<String>, generator: F) -> Self
    where
        F: Fn(u32) -> Result<DLVertex> + Send + Sync + 'static,
    {
        Self {
            params,
            kind: FamilyKind::Custom(CustomFamily { name: name.into(), generator: Arc::new(generator) }),
        }
    }

    /// Parses `alpha`, `beta`, `gamma:1,3`, `zeta:i[:k]` or `nu:j,label[:k]`.
    pub fn parse(text: &str, params: DLParams) -> Result<Self> {
        let mut parts = text.trim().splitn(2, ':');
        let head = parts.next().unwrap_or_default().to_ascii_lowercase();
        let tail = parts.next();
        let bad = |msg: &str| Error::InvalidFamily(format!("{msg}: {text:?}"));
        let ints = |s: &str| -> Result<Vec<u32>> {
            s.split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| bad("expected integers")))
                .collect()
        };
        match (head.as_str(), tail) {
            ("alpha", None) => Self::alpha(params),
            ("beta", None) => Self::beta(params),
            ("gamma", Some(rest)) => {
                let trees: Vec<usize> = ints(rest)?.into_iter().map(|t| t as usize).collect();
                Self::gamma(params, &trees)
            }
            ("zeta", Some(rest)) => {
                let (tree, k) = split_k(rest);
                let tree = ints(tree)?;
                let k = k.map(&ints).transpose()?;
                match (tree.as_slice(), k.as_deref()) {
                    ([t], None) => Self::zeta(params, *t as usize, None),
                    ([t], Some([k])) => Self::zeta(params, *t as usize, Some(*k)),
                    _ => Err(bad("expected zeta:i or zeta:i:k")),
                }
            }
            ("nu", Some(rest)) => {
                let (head, k) = split_k(rest);
                let head = ints(head)?;
                let k = k.map(&ints).transpose()?;
                match (head.as_slice(), k.as_deref()) {
                    ([t, e], None) => Self::nu(params, *t as usize, *e, None),
                    ([t, e], Some([k])) => Self::nu(params, *t as usize, *e, Some(*k)),
                    _ => Err(bad("expected nu:j,label or nu:j,label:k")),
                }
            }
            _ => Err(bad("unknown family")),
        }
    }

    pub fn params(&self) -> DLParams {
        self.params
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn at(&self, n: u32) -> Result<DLVertex> {
        let g = DiestelLeader::from_params(self.params);
        let tree = self.params.tree();
        let mut coords = vec![TreeVertex::basepoint(); self.params.d()];
        let ones = |k: u32| vec![1u32; k as usize];
        match &self.kind {
            FamilyKind::Alpha => {
                coords[0] = tree.canonicalize(0, &ones(n))?;
                coords[1] = tree.canonicalize(n, &[])?;
            }
            FamilyKind::Beta => coords[2] = tree.canonicalize(n, &ones(n))?,
            FamilyKind::Gamma(trees) => {
                for &t in trees {
                    coords[t - 1] = tree.canonicalize(n, &ones(n))?;
                }
            }
            FamilyKind::Zeta { tree: t, k } => {
                let k = k.unwrap_or(n);
                coords[t - 1] = tree.canonicalize(k, &ones(k))?;
            }
            FamilyKind::Nu { tree: t, label, k } => {
                let k = k.unwrap_or(n);
                coords[t - 1] = tree.canonicalize(0, &vec![*label; k as usize])?;
                coords[2] = tree.canonicalize(k, &[])?;
            }
            FamilyKind::Custom(c) => {
                let v = (c.generator)(n)?;
                return g.make_vertex(v.coords().to_vec());
            }
        }
        g.make_vertex(coords)
    }
}

impl fmt::Display for PointFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k_suffix = |k: &Option<u32>| k.map(|k| format!(":{k}")).unwrap_or_default();
        match &self.kind {
            FamilyKind::Alpha => f.write_str("alpha"),
            FamilyKind::Beta => f.write_str("beta"),
            FamilyKind::Gamma(trees) => {
                let list: Vec<String> = trees.iter().map(ToString::to_string).collect();
                write!(f, "gamma:{}", list.join(","))
            }
            FamilyKind::Zeta { tree, k } => write!(f, "zeta:{tree}{}", k_suffix(k)),
            FamilyKind::Nu { tree, label, k } => write!(f, "nu:{tree},{label}{}", k_suffix(k)),
            FamilyKind::Custom(c) => f.write_str(&c.name),
        }
    }
}

fn split_k(rest: &str) -> (&str, Option<&str>) {
    match rest.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (rest, None),
    }
}

fn need_label_one(params: DLParams) -> Result<()> {
    if params.q() < 2 {
        return Err(Error::InvalidFamily("family climbs along label 1, needs q >= 2".into()));
    }
    Ok(())
}

fn need_third_tree(params: DLParams) -> Result<()> {
    if params.d() < 3 {
        return Err(Error::InvalidFamily("family lives in T_3, needs d >= 3".into()));
    }
    Ok(())
}

impl DiestelLeader {
    /// `ζ^i_k` with 1-based tree `i`.
    pub fn zeta(&self, tree: usize, k: u32) -> Result<DLVertex> {
        PointFamily::zeta(self.params, tree, Some(k))?.at(0)
    }

    /// `ν^{j,ε}_k` with `j ∈ {1, 2}`.
    pub fn nu(&self, tree: usize, label: u32, k: u32) -> Result<DLVertex> {
        PointFamily::nu(self.params, tree, label, Some(k))?.at(0)
    }

    pub fn alpha(&self, n: u32) -> Result<DLVertex> {
        PointFamily::alpha(self.params)?.at(n)
    }

    pub fn beta(&self, n: u32) -> Result<DLVertex> {
        PointFamily::beta(self.params)?.at(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dl32() -> DiestelLeader {
        DiestelLeader::new(3, 2).unwrap()
    }

    #[test]
    fn named_points() {
        let g = dl32();
        assert_eq!(g.beta(2).unwrap().to_string(), "0:|0:|2:1,1");
        assert_eq!(g.zeta(1, 1).unwrap().to_string(), "1:1|0:|0:");
        assert_eq!(g.nu(1, 1, 1).unwrap().to_string(), "0:1|0:|1:");
        assert_eq!(g.alpha(3).unwrap().to_string(), "0:1,1,1|3:|0:");
        // ν with label 0 from o stays canonical because m_1 = 0
        assert_eq!(g.nu(2, 0, 2).unwrap().to_string(), "0:|0:0,0|2:");
    }

    #[test]
    fn index_zero_is_identity() {
        let p = dl32().params();
        for f in [
            PointFamily::alpha(p).unwrap(),
            PointFamily::beta(p).unwrap(),
            PointFamily::gamma(p, &[1, 3]).unwrap(),
            PointFamily::gamma(p, &[1, 2, 3]).unwrap(),
        ] {
            assert!(f.at(0).unwrap().is_identity(), "{f}");
        }
    }

    #[test]
    fn gamma_definition() {
        let p = dl32().params();
        let g = PointFamily::gamma(p, &[3, 1]).unwrap();
        assert_eq!(g.at(2).unwrap().to_string(), "2:1,1|0:|2:1,1");
        assert!(PointFamily::gamma(p, &[1, 2]).is_err());
        assert!(PointFamily::gamma(p, &[3]).is_err());
        assert!(PointFamily::gamma(p, &[3, 4]).is_err());
    }

    #[test]
    fn invalid_indices() {
        let p = dl32().params();
        assert!(PointFamily::zeta(p, 0, Some(1)).is_err());
        assert!(PointFamily::zeta(p, 4, Some(1)).is_err());
        assert!(PointFamily::nu(p, 3, 0, Some(1)).is_err());
        assert!(PointFamily::nu(p, 1, 2, Some(1)).is_err());
        let d2 = DLParams::new(2, 2).unwrap();
        assert!(PointFamily::beta(d2).is_err());
        assert!(PointFamily::alpha(d2).is_ok());
        let q1 = DLParams::new(3, 1).unwrap();
        assert!(PointFamily::alpha(q1).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let p = dl32().params();
        for text in ["alpha", "beta", "gamma:1,3", "zeta:2", "zeta:1:3", "nu:1,0", "nu:2,1:4"] {
            let f = PointFamily::parse(text, p).unwrap();
            assert_eq!(f.to_string(), text);
        }
        for bad in ["delta", "gamma", "zeta:a", "nu:1", "alpha:2", "zeta:1:2:3"] {
            assert!(PointFamily::parse(bad, p).is_err(), "{bad}");
        }
    }

    #[test]
    fn custom_family_is_validated() {
        let g = dl32();
        let p = g.params();
        let ok = PointFamily::custom(p, "shifted", move |n| g.beta(n + 1));
        assert_eq!(ok.at(0).unwrap(), g.beta(1).unwrap());
        let other = DiestelLeader::new(3, 3).unwrap();
        let bad = PointFamily::custom(p, "wide", move |_| other.vertex(&[(0, &[2]), (1, &[]), (0, &[])]));
        assert!(matches!(bad.at(0), Err(Error::LabelOutOfRange { .. })));
    }

    #[test]
    fn family_at_checks_graph() {
        let g = dl32();
        let f = PointFamily::beta(DLParams::new(3, 3).unwrap()).unwrap();
        assert!(g.family_at(&f, 1).is_err());
        let f = PointFamily::beta(g.params()).unwrap();
        assert_eq!(g.family_at(&f, 2).unwrap().to_string(), "0:|0:|2:1,1");
    }
}
