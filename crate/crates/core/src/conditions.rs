//! Graph conditions for strong structural controllability.
//!
//! Every condition quantifies over all non-empty sets `V` of state vertices
//! and asks for a vertex `v` such that `V` contains exactly one successor of
//! `v`:
//!
//! * `G1`: `v` may be any vertex (time-invariant, eigenvalue zero).
//! * `G2`: only sets with `V ⊆ Pre(V)` are tested and `v` must lie outside
//!   `V` (time-invariant, nonzero eigenvalues).
//! * `G3`: `G1` on the graph of the horizon pattern from
//!   [`build_k`](crate::pattern::build_k) (discrete-time, time-varying,
//!   fixed window length).
//! * `G4`: `v` must lie outside `V`, for every `V` (continuous-time,
//!   time-varying).
//!
//! [`reduce`] decides `G1` and `G2` while testing at most `2n` sets; `G3` and
//! `G4` are reduced to those. [`brute_check`] enumerates every subset and
//! serves as an oracle on small instances.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::pattern::{build_k, Pattern};
use crate::sgraph::{graph_of, SystemGraph, VertexSet};

/// Horizon patterns above this many rows are refused.
pub const MAX_HORIZON_ROWS: usize = 4096;

/// Largest state-vertex count [`brute_check`] will enumerate.
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    G1,
    G2,
    G3,
    G4,
}

impl Condition {
    pub const ALL: [Condition; 4] = [Condition::G1, Condition::G2, Condition::G3, Condition::G4];

    pub fn name(self) -> &'static str {
        match self {
            Condition::G1 => "G1",
            Condition::G2 => "G2",
            Condition::G3 => "G3",
            Condition::G4 => "G4",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which of the two conditions [`reduce`] decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReduceMode {
    /// Candidates may lie inside `V`; decides `G1`.
    ZeroEigenvalue,
    /// Candidates must lie outside `V`, and sets not contained in their own
    /// predecessor set are peeled off one vertex at a time; decides `G2`.
    NonzeroEigenvalue,
}

/// Choice function over a non-empty, sorted candidate list.
pub trait Pick {
    fn pick(&mut self, candidates: &[usize]) -> usize;
}

/// Always picks the smallest vertex index.
#[derive(Clone, Copy, Debug, Default)]
pub struct SmallestIndex;

impl Pick for SmallestIndex {
    fn pick(&mut self, candidates: &[usize]) -> usize {
        candidates[0]
    }
}

/// Picks uniformly at random from a seeded generator.
#[derive(Clone, Debug)]
pub struct SeededPick(ChaCha8Rng);

impl SeededPick {
    pub fn new(seed: u64) -> Self {
        SeededPick(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Pick for SeededPick {
    fn pick(&mut self, candidates: &[usize]) -> usize {
        *candidates
            .choose(&mut self.0)
            .expect("non-empty candidates")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Removal {
    /// `V := V \ Post({v})` for a picked candidate `v`.
    Successor,
    /// `V := V \ {v}` for a picked `v ∈ V \ Pre(V)`.
    NoPredecessor,
}

/// One iteration of [`reduce`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    /// Candidate set `T` of the iteration.
    pub candidates: VertexSet,
    pub rule: Removal,
    pub picked: usize,
    pub removed: VertexSet,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rule {
            Removal::Successor => write!(
                f,
                "T = {}; pick {} and remove its successors {}",
                self.candidates, self.picked, self.removed
            ),
            Removal::NoPredecessor => write!(
                f,
                "T = {}; remove {} which has no predecessor in V",
                self.candidates, self.picked
            ),
        }
    }
}

/// Runs the set reduction and returns the residual set: empty iff the
/// condition selected by `mode` holds, otherwise a counterexample.
pub fn reduce<P: Pick + ?Sized>(g: &SystemGraph, mode: ReduceMode, pick: &mut P) -> VertexSet {
    run_reduction(g, mode, pick, None)
}

/// Like [`reduce`], also returning the per-iteration trace.
pub fn reduce_traced<P: Pick + ?Sized>(
    g: &SystemGraph,
    mode: ReduceMode,
    pick: &mut P,
) -> (VertexSet, Vec<Step>) {
    let mut trace = Vec::new();
    let residual = run_reduction(g, mode, pick, Some(&mut trace));
    (residual, trace)
}

fn run_reduction<P: Pick + ?Sized>(
    g: &SystemGraph,
    mode: ReduceMode,
    pick: &mut P,
    mut trace: Option<&mut Vec<Step>>,
) -> VertexSet {
    let n = g.state_count();
    let total = g.vertex_count();

    // preds[w] lists every u with w ∈ Post({u}); hits[u] = |V ∩ Post({u})|,
    // so u ∈ Pre(V) iff hits[u] > 0.
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut hits = vec![0usize; total + 1];
    for (u, h) in hits.iter_mut().enumerate().skip(1) {
        let post = g.successors(u);
        for w in post.iter() {
            preds[w].push(u);
        }
        *h = post.len();
    }
    let mut in_v = vec![true; n + 1];
    in_v[0] = false;
    let mut remaining = n;

    let remove = |w: usize, in_v: &mut Vec<bool>, hits: &mut Vec<usize>| {
        in_v[w] = false;
        for &u in &preds[w] {
            hits[u] -= 1;
        }
    };

    while remaining > 0 {
        let candidates: Vec<usize> = (1..=total)
            .filter(|&u| hits[u] == 1)
            .filter(|&u| mode == ReduceMode::ZeroEigenvalue || u > n || !in_v[u])
            .collect();
        let unreached: Vec<usize> = (1..=n).filter(|&w| in_v[w] && hits[w] == 0).collect();

        if mode == ReduceMode::ZeroEigenvalue || unreached.is_empty() {
            if candidates.is_empty() {
                break;
            }
            let v = pick.pick(&candidates);
            let gone: Vec<usize> = g.successors(v).iter().filter(|&w| in_v[w]).collect();
            debug_assert_eq!(gone.len(), 1);
            for &w in &gone {
                remove(w, &mut in_v, &mut hits);
            }
            remaining -= gone.len();
            if let Some(trace) = trace.as_deref_mut() {
                trace.push(Step {
                    candidates: candidates.into_iter().collect(),
                    rule: Removal::Successor,
                    picked: v,
                    removed: gone.into_iter().collect(),
                });
            }
        } else {
            let v = pick.pick(&unreached);
            remove(v, &mut in_v, &mut hits);
            remaining -= 1;
            if let Some(trace) = trace.as_deref_mut() {
                trace.push(Step {
                    candidates: candidates.into_iter().collect(),
                    rule: Removal::NoPredecessor,
                    picked: v,
                    removed: [v].into(),
                });
            }
        }
    }

    (1..=n).filter(|&w| in_v[w]).collect()
}

/// Outcome of one condition check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub condition: Condition,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub horizon: Option<usize>,
    pub holds: bool,
    /// A non-empty set of state vertices violating the condition.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<VertexSet>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub trace: Option<Vec<Step>>,
}

impl Verdict {
    fn from_residual(condition: Condition, horizon: Option<usize>, residual: VertexSet) -> Self {
        let holds = residual.is_empty();
        Verdict {
            condition,
            horizon,
            holds,
            witness: (!holds).then_some(residual),
            trace: None,
        }
    }
}

/// Graph of the horizon pattern: its first `n * horizon` columns act as
/// state vertices and the rest as inputs, so vertex numbers follow the
/// column order of the pattern.
pub fn horizon_graph(a: &Pattern, b: &Pattern, horizon: usize) -> Result<SystemGraph> {
    if horizon == 0 {
        return Err(Error::InvalidHorizon);
    }
    let rows = a.rows() * horizon;
    if rows > MAX_HORIZON_ROWS {
        return Err(Error::HorizonTooLarge {
            horizon,
            rows,
            cap: MAX_HORIZON_ROWS,
        });
    }
    let k = build_k(a, b, horizon)?;
    let (state, input) = k.split_columns(rows);
    graph_of(&state, &input)
}

fn graph_for(
    condition: Condition,
    a: &Pattern,
    b: &Pattern,
    horizon: Option<usize>,
) -> Result<SystemGraph> {
    match condition {
        Condition::G1 | Condition::G2 => graph_of(a, b),
        Condition::G4 => graph_of(&a.with_identity()?, b),
        Condition::G3 => {
            let horizon = horizon.ok_or(Error::MissingHorizon("G3"))?;
            horizon_graph(a, b, horizon)
        }
    }
}

fn mode_for(condition: Condition) -> ReduceMode {
    match condition {
        Condition::G1 | Condition::G3 => ReduceMode::ZeroEigenvalue,
        // with a loop on every vertex V ⊆ Pre(V) always holds and candidate
        // counts outside V are unchanged, so G2 there is exactly G4
        Condition::G2 | Condition::G4 => ReduceMode::NonzeroEigenvalue,
    }
}

/// Checks `condition` with a caller-supplied pick strategy, optionally
/// recording the reduction trace. Failing verdicts carry a certified witness.
pub fn check_with<P: Pick + ?Sized>(
    condition: Condition,
    a: &Pattern,
    b: &Pattern,
    horizon: Option<usize>,
    pick: &mut P,
    traced: bool,
) -> Result<Verdict> {
    let horizon = if condition == Condition::G3 {
        horizon
    } else {
        None
    };
    let g = graph_for(condition, a, b, horizon)?;
    let mode = mode_for(condition);
    let (residual, trace) = if traced {
        let (residual, trace) = reduce_traced(&g, mode, pick);
        (residual, Some(trace))
    } else {
        (reduce(&g, mode, pick), None)
    };
    if !residual.is_empty() && !violated_in(&g, condition, &residual) {
        return Err(Error::Uncertified(residual.to_string()));
    }
    let mut verdict = Verdict::from_residual(condition, horizon, residual);
    verdict.trace = trace;
    Ok(verdict)
}

pub fn check(
    condition: Condition,
    a: &Pattern,
    b: &Pattern,
    horizon: Option<usize>,
) -> Result<Verdict> {
    check_with(condition, a, b, horizon, &mut SmallestIndex, false)
}

pub fn check_g1(a: &Pattern, b: &Pattern) -> Result<Verdict> {
    check(Condition::G1, a, b, None)
}

pub fn check_g2(a: &Pattern, b: &Pattern) -> Result<Verdict> {
    check(Condition::G2, a, b, None)
}

pub fn check_g3(a: &Pattern, b: &Pattern, horizon: usize) -> Result<Verdict> {
    check(Condition::G3, a, b, Some(horizon))
}

pub fn check_g4(a: &Pattern, b: &Pattern) -> Result<Verdict> {
    check(Condition::G4, a, b, None)
}

/// `true` iff no vertex singles out `vs` under the rules of `condition`.
/// `g` must be the graph returned by `graph_for`.
fn violated_in(g: &SystemGraph, condition: Condition, vs: &VertexSet) -> bool {
    let hits = |u: usize| g.successors(u).iter().filter(|&w| vs.contains(w)).count();
    let outside_only = matches!(condition, Condition::G2 | Condition::G4);
    if condition == Condition::G2 && !vs.iter().all(|w| hits(w) > 0) {
        return false;
    }
    !(1..=g.vertex_count())
        .filter(|&u| !outside_only || !vs.contains(u))
        .any(|u| hits(u) == 1)
}

/// Whether `vs` is a counterexample to `condition` for the pair `(a, b)`.
///
/// For `G3`, `vs` ranges over the rows of the horizon pattern. For `G4` the
/// graph of `(a, b)` itself is examined; loops do not change the answer.
pub fn violates(
    condition: Condition,
    a: &Pattern,
    b: &Pattern,
    horizon: Option<usize>,
    vs: &VertexSet,
) -> Result<bool> {
    let g = match condition {
        Condition::G4 => graph_of(a, b)?,
        _ => graph_for(condition, a, b, horizon)?,
    };
    if vs.is_empty() {
        return Err(Error::EmptyWitness);
    }
    let max = g.state_count();
    if let Some(v) = vs.iter().find(|&v| v == 0 || v > max) {
        return Err(Error::VertexOutOfRange { vertex: v, max });
    }
    Ok(violated_in(&g, condition, vs))
}

/// Exhaustive check over every non-empty subset of state vertices, by
/// increasing size and lexicographically within a size. The first violating
/// set is reported, so witnesses are of minimal size.
pub fn brute_check(
    condition: Condition,
    a: &Pattern,
    b: &Pattern,
    horizon: Option<usize>,
) -> Result<Verdict> {
    let horizon = if condition == Condition::G3 {
        horizon
    } else {
        None
    };
    let g = match condition {
        Condition::G4 => graph_of(a, b)?,
        _ => graph_for(condition, a, b, horizon)?,
    };
    let n = g.state_count();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            count: n,
            bound: BRUTE_FORCE_LIMIT,
        });
    }
    let total = g.vertex_count();
    let post: Vec<u32> = (1..=total)
        .map(|u| g.successors(u).iter().fold(0u32, |m, w| m | 1 << (w - 1)))
        .collect();

    let violated = |set: u32| -> bool {
        let in_set = |u: usize| u <= n && set & (1 << (u - 1)) != 0;
        let single = |u: usize| (post[u - 1] & set).count_ones() == 1;
        match condition {
            Condition::G1 | Condition::G3 => !(1..=total).any(single),
            Condition::G2 => {
                let closed = (1..=n)
                    .filter(|&w| in_set(w))
                    .all(|w| post[w - 1] & set != 0);
                closed && !(1..=total).filter(|&u| !in_set(u)).any(single)
            }
            Condition::G4 => !(1..=total).filter(|&u| !in_set(u)).any(single),
        }
    };

    for size in 1..=n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let set = idx.iter().fold(0u32, |m, &i| m | 1 << i);
            if violated(set) {
                let witness: VertexSet = idx.iter().map(|&i| i + 1).collect();
                return Ok(Verdict::from_residual(condition, horizon, witness));
            }
            // next combination in lexicographic order
            let Some(pos) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
                break;
            };
            idx[pos] += 1;
            for i in pos + 1..size {
                idx[i] = idx[i - 1] + 1;
            }
        }
    }
    Ok(Verdict::from_residual(condition, horizon, VertexSet::new()))
}
