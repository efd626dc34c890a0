//! Coordinates on the (q+1)-valent tree with a distinguished basepoint `o`.
//!
//! Every vertex `v` is written as `(m, path)`: walk `m` steps down the spine
//! from `o` to the common ancestor `o ∧ v`, then follow `path` upward. The
//! spine itself is labeled so that each spine vertex reaches the next one
//! toward `o` through its successor labeled `0`. Under that convention a pair
//! with `m > 0` is canonical exactly when `path` is empty or does not start
//! with `0`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Branching data for a single tree: every vertex has one predecessor and
/// `q` successors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeParams {
    q: u32,
}

impl TreeParams {
    pub fn new(q: u32) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParams("q must be at least 1".into()));
        }
        Ok(Self { q })
    }

    pub fn q(self) -> u32 {
        self.q
    }

    pub fn label(self, value: u32) -> Result<TreeLabel> {
        if value < self.q {
            Ok(TreeLabel(value))
        } else {
            Err(Error::LabelOutOfRange { label: value, q: self.q })
        }
    }

    /// Rewrites `(m, 0·rest)` to `(m − 1, rest)` until the pair is canonical.
    pub fn canonicalize(self, m: u32, path: &[u32]) -> Result<TreeVertex> {
        for &label in path {
            self.label(label)?;
        }
        let leading_zeros = path.iter().take_while(|&&a| a == 0).count();
        let strip = leading_zeros.min(m as usize);
        Ok(TreeVertex {
            m: m - strip as u32,
            path: path[strip..].iter().copied().map(TreeLabel).collect(),
        })
    }

    /// Like [`canonicalize`](Self::canonicalize) but also reports whether the
    /// input needed rewriting.
    pub fn canonicalize_checked(self, m: u32, path: &[u32]) -> Result<(TreeVertex, bool)> {
        let v = self.canonicalize(m, path)?;
        let rewritten = v.m != m;
        Ok((v, rewritten))
    }

    pub fn step(self, v: &TreeVertex, mv: Move) -> Result<TreeVertex> {
        match mv {
            Move::Up(label) => {
                let label = self.label(label.0)?;
                Ok(v.up(label))
            }
            Move::Down => Ok(v.down()),
        }
    }

    /// Parses a tree literal `m:p0,p1,...`. `offset` shifts reported error
    /// positions when the literal is embedded in a longer string.
    pub fn parse_literal(self, text: &str, offset: usize) -> Result<(TreeVertex, bool)> {
        let colon = text.find(':').ok_or_else(|| Error::Syntax {
            pos: offset + text.len(),
            msg: "expected ':' after descent depth".into(),
        })?;
        let m = parse_number(&text[..colon], offset)?;
        let rest = &text[colon + 1..];
        let mut labels = Vec::new();
        if !rest.is_empty() {
            let mut pos = offset + colon + 1;
            for field in rest.split(',') {
                labels.push(parse_number(field, pos)?);
                pos += field.len() + 1;
            }
        }
        self.canonicalize_checked(m, &labels).map_err(|e| match e {
            Error::LabelOutOfRange { label, q } => Error::Syntax {
                pos: offset + colon + 1,
                msg: format!("label {label} out of range for q = {q}"),
            },
            other => other,
        })
    }
}

fn parse_number(field: &str, pos: usize) -> Result<u32> {
    if field.is_empty() {
        return Err(Error::Syntax { pos, msg: "expected a decimal integer".into() });
    }
    if let Some(bad) = field.find(|c: char| !c.is_ascii_digit()) {
        return Err(Error::Syntax {
            pos: pos + bad,
            msg: format!("unexpected character {:?}", field[bad..].chars().next().unwrap()),
        });
    }
    field
        .parse()
        .map_err(|_| Error::Syntax { pos, msg: format!("integer {field} too large") })
}

/// An edge label, always below the tree's `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeLabel(u32);

impl TreeLabel {
    pub fn value(self) -> u32 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    Up(TreeLabel),
    Down,
}

/// A canonical tree vertex. Ordering is lexicographic on `(m, path)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TreeVertex {
    m: u32,
    path: Vec<TreeLabel>,
}

impl TreeVertex {
    /// The basepoint `o`.
    pub fn basepoint() -> Self {
        Self { m: 0, path: Vec::new() }
    }

    /// Descent depth `m(v)`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Length `l(v)` of the upward path from `o ∧ v`.
    pub fn l(&self) -> u32 {
        self.path.len() as u32
    }

    /// Height `h(v) = l(v) − m(v)`.
    pub fn h(&self) -> i64 {
        self.l() as i64 - self.m as i64
    }

    pub fn path(&self) -> &[TreeLabel] {
        &self.path
    }

    pub fn is_basepoint(&self) -> bool {
        self.m == 0 && self.path.is_empty()
    }

    /// Successor along `label`; labels are assumed already validated.
    pub(crate) fn up(&self, label: TreeLabel) -> Self {
        if self.m > 0 && self.path.is_empty() && label.0 == 0 {
            // climbing the spine
            return Self { m: self.m - 1, path: Vec::new() };
        }
        let mut path = Vec::with_capacity(self.path.len() + 1);
        path.extend_from_slice(&self.path);
        path.push(label);
        Self { m: self.m, path }
    }

    pub(crate) fn down(&self) -> Self {
        match self.path.split_last() {
            Some((_, rest)) => Self { m: self.m, path: rest.to_vec() },
            None => Self { m: self.m + 1, path: Vec::new() },
        }
    }
}

impl fmt::Display for TreeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.m)?;
        for (i, a) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", a.0)?;
        }
        Ok(())
    }
}

/// `m(x, y) = d(x, x ∧ y)` and `l(x, y) = d(y, x ∧ y)` for one tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PairStats {
    pub m: u32,
    pub l: u32,
}

impl PairStats {
    pub fn distance(self) -> u32 {
        self.m + self.l
    }

    pub fn swapped(self) -> Self {
        Self { m: self.l, l: self.m }
    }
}

pub fn pair_stats(x: &TreeVertex, y: &TreeVertex) -> PairStats {
    use std::cmp::Ordering::*;
    match x.m.cmp(&y.m) {
        // x ∧ y is the spine vertex at depth −m(y)
        Less => PairStats { m: (y.m as i64 + x.h()) as u32, l: y.l() },
        Greater => PairStats { m: x.l(), l: (x.m as i64 + y.h()) as u32 },
        Equal => {
            let overlap = x.path.iter().zip(&y.path).take_while(|(a, b)| a == b).count() as u32;
            PairStats { m: x.l() - overlap, l: y.l() - overlap }
        }
    }
}

/// Number of canonical upward paths of length `len` hanging off a spine
/// vertex strictly below `o`: the first label must avoid `0`.
pub fn canonical_path_count(q: u32, len: u32) -> u64 {
    if len == 0 {
        1
    } else {
        (q as u64 - 1) * (q as u64).pow(len - 1)
    }
}
