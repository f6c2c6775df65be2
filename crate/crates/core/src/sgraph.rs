//! The digraph of a pattern pair `(A, B)`.
//!
//! Vertices are numbered from 1: `1..=n` are state vertices, `n+1..=n+r`
//! are input vertices. There is an edge `v -> w` iff entry `(w, v)` of the
//! concatenated pattern `(A, B)` is nonzero, so edges always end at a state
//! vertex and input vertices have no predecessors.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Sorted set of 1-based vertex indices.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(BTreeSet::new())
    }

    /// The vertices `1..=n`.
    pub fn range(n: usize) -> Self {
        (1..=n).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: usize) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: usize) -> bool {
        self.0.remove(&v)
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.0.union(&other.0).copied().collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.0.intersection(&other.0).copied().collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.0.difference(&other.0).copied().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(vs: [usize; N]) -> Self {
        vs.into_iter().collect()
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = std::collections::btree_set::IntoIter<usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::collections::btree_set::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct SystemGraph {
    n: usize,
    r: usize,
    /// `succ[v - 1]` is `Post({v})`.
    succ: Vec<VertexSet>,
}

impl SystemGraph {
    pub fn state_count(&self) -> usize {
        self.n
    }

    pub fn input_count(&self) -> usize {
        self.r
    }

    pub fn vertex_count(&self) -> usize {
        self.n + self.r
    }

    /// `Post({v})`. Panics if `v` is not a vertex.
    pub fn successors(&self, v: usize) -> &VertexSet {
        &self.succ[v - 1]
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(VertexSet::len).sum()
    }

    /// All edges `(v, w)` ordered by source, then target.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(k, post)| post.iter().map(move |w| (k + 1, w)))
            .collect()
    }

    /// Edge list, one `v w` pair per line.
    pub fn edge_list(&self) -> String {
        self.edges()
            .into_iter()
            .map(|(v, w)| format!("{v} {w}\n"))
            .collect()
    }

    fn check_range(&self, vs: &VertexSet) -> Result<()> {
        match vs.max() {
            Some(v) if v > self.vertex_count() => Err(Error::VertexOutOfRange {
                vertex: v,
                max: self.vertex_count(),
            }),
            _ if vs.contains(0) => Err(Error::VertexOutOfRange {
                vertex: 0,
                max: self.vertex_count(),
            }),
            _ => Ok(()),
        }
    }
}

impl fmt::Debug for SystemGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemGraph")
            .field("n", &self.n)
            .field("r", &self.r)
            .field("edges", &self.edges())
            .finish()
    }
}

pub fn graph_of(a: &Pattern, b: &Pattern) -> Result<SystemGraph> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "state pattern must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let ab = a.hstack(b)?;
    let succ = (0..ab.cols())
        .map(|v| ab.column_support(v).map(|w| w + 1).collect())
        .collect();
    Ok(SystemGraph {
        n: a.rows(),
        r: b.cols(),
        succ,
    })
}

/// `Post(V)`: all successors of the vertices in `vs`.
pub fn post_set(g: &SystemGraph, vs: &VertexSet) -> Result<VertexSet> {
    g.check_range(vs)?;
    Ok(vs.iter().flat_map(|v| g.successors(v).iter()).collect())
}

/// `Pre(V)`: all vertices with an edge into `vs`. Input vertices in `vs`
/// contribute nothing since they have no incoming edges.
pub fn pre_set(g: &SystemGraph, vs: &VertexSet) -> Result<VertexSet> {
    g.check_range(vs)?;
    Ok((1..=g.vertex_count())
        .filter(|&u| g.successors(u).iter().any(|w| vs.contains(w)))
        .collect())
}
