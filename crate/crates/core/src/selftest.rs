//! Reproduces the worked examples and runs the randomized oracle suites.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog;
use crate::conditions::{
    brute_check, check, check_g1, check_g2, check_g3, check_g4, check_with, reduce_traced,
    violates, Condition, ReduceMode, Removal, SeededPick, SmallestIndex,
};
use crate::error::Result;
use crate::numeric::{
    annihilator_residual_ct, exp_scaled_coefficients, numeric_rank, observability_matrix_dt,
    reachability_matrix_dt, sample_instantiation, ContinuousFamily, Instantiation, Matrix,
    Sampling, Window, DEFAULT_RANK_TOL,
};
use crate::pattern::Pattern;
use crate::sgraph::{graph_of, VertexSet};

pub const DEFAULT_SEED: u64 = 20_240_601;

pub const CRITERIA: [&str; 10] = [
    "six-state reduction trace",
    "six-state horizon split",
    "three-step reachability determinants",
    "nilpotent-chain continuous-time gap",
    "diagonal-pair continuous-time gap",
    "duality gap",
    "brute-force oracle equivalence",
    "positive numeric oracle",
    "pick independence",
    "implication properties",
];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub criterion: usize,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn title(&self) -> &'static str {
        CRITERIA[self.criterion - 1]
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} criterion {:>2} {}: {} [{:.3} ms]",
            if self.passed { "PASS" } else { "FAIL" },
            self.criterion,
            self.title(),
            self.detail,
            self.elapsed.as_secs_f64() * 1e3
        )
    }
}

/// Random pair with `n` states and `r` inputs, each with its own density in
/// `[0.15, 0.6)`.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, r: usize) -> (Pattern, Pattern) {
    let da = rng.random_range(0.15..0.6);
    let db = rng.random_range(0.15..0.6);
    (
        Pattern::random(n, n, da, rng),
        Pattern::random(n, r, db, rng),
    )
}

/// Runs every criterion, independent criteria in parallel, and returns the
/// outcomes in criterion order.
pub fn run_all(seed: u64) -> Vec<Outcome> {
    std::thread::scope(|s| {
        let handles: Vec<_> = (1..=CRITERIA.len())
            .map(|k| s.spawn(move || run_criterion(k, seed)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread panicked"))
            .collect()
    })
}

/// Runs criterion `k` (1-based). Errors from the library count as failures.
pub fn run_criterion(k: usize, seed: u64) -> Outcome {
    assert!((1..=CRITERIA.len()).contains(&k), "no criterion {k}");
    let once = || {
        let mut rng =
            ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let start = Instant::now();
        let result = match k {
            1 => trace_reproduction(),
            2 => horizon_split(),
            3 => determinants(&mut rng),
            4 => nilpotent_chain_gap(),
            5 => diagonal_gap(),
            6 => duality_gap(),
            7 => oracle_equivalence(&mut rng),
            8 => positive_oracle(&mut rng),
            9 => pick_independence(&mut rng),
            _ => implications(&mut rng),
        };
        (result, start.elapsed())
    };
    // the sub-millisecond budgets are judged on the fastest of a few runs
    let repeats = if k <= 2 { 5 } else { 1 };
    let (result, elapsed) = (1..repeats).fold(once(), |best, _| {
        let next = once();
        if next.1 < best.1 {
            next
        } else {
            best
        }
    });
    let (passed, detail) = match result {
        Ok(Check { ok, detail }) => (ok, detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let budget = match k {
        1 => Some(Duration::from_millis(1)),
        2 => Some(Duration::from_millis(10)),
        7 => Some(Duration::from_secs(30)),
        _ => None,
    };
    let over = budget.is_some_and(|b| elapsed > b);
    Outcome {
        criterion: k,
        passed: passed && !over,
        detail: if over {
            format!("{detail}; over the {:?} budget", budget.unwrap())
        } else {
            detail
        },
        elapsed,
    }
}

struct Check {
    ok: bool,
    detail: String,
}

impl Check {
    fn new(ok: bool, detail: impl Into<String>) -> Result<Check> {
        Ok(Check {
            ok,
            detail: detail.into(),
        })
    }
}

fn trace_reproduction() -> Result<Check> {
    let (a, b) = catalog::six_state_pair();
    let g = graph_of(&a, &b)?;
    let (r0, t0) = reduce_traced(&g, ReduceMode::ZeroEigenvalue, &mut SmallestIndex);
    let (r1, t1) = reduce_traced(&g, ReduceMode::NonzeroEigenvalue, &mut SmallestIndex);
    let first_t = t0.first().map(|s| s.candidates.clone()).unwrap_or_default();
    let first_removal = t1.first().map(|s| (s.rule, s.removed.clone()));
    let ok = first_t == VertexSet::from([1, 2, 4, 5, 6])
        && r0.is_empty()
        && first_removal == Some((Removal::NoPredecessor, VertexSet::from([3])))
        && r1.is_empty()
        && check_g1(&a, &b)?.holds
        && check_g2(&a, &b)?.holds;
    Check::new(
        ok,
        format!(
            "first T = {first_t}, residuals {r0} and {r1}, first nonzero-mode removal {}",
            t1.first()
                .map(|s| s.removed.to_string())
                .unwrap_or_default()
        ),
    )
}

fn horizon_split() -> Result<Check> {
    let (a, b) = catalog::six_state_pair();
    let g6 = check_g3(&a, &b, 6)?.holds;
    let g3 = check_g3(&a, &b, 3)?.holds;
    let v: VertexSet = (1..=18).filter(|v| ![3, 4, 9].contains(v)).collect();
    let violated = violates(Condition::G3, &a, &b, Some(3), &v)?;
    Check::new(
        g6 && !g3 && violated,
        format!("G3(6) = {g6}, G3(3) = {g3}, {{1..18}}\\{{3,4,9}} violates G3(3): {violated}"),
    )
}

fn three_step_matrix(inst: &Instantiation, t: i64) -> Result<Matrix> {
    reachability_matrix_dt(inst, t - 3, t)
}

fn determinants(rng: &mut ChaCha8Rng) -> Result<Check> {
    let (_, bp) = catalog::six_state_pair();
    let a = catalog::six_state_unit_a();
    let mut worst_rel: f64 = 0.0;
    for _ in 0..20 {
        let b = Matrix::from_pattern(&bp, |_, _| {
            let v = rng.random_range(0.5..=2.0);
            if rng.random_bool(0.5) {
                v
            } else {
                -v
            }
        });
        let inst = Instantiation::constant(Window::of_len(0, 3), a.clone(), b.clone());
        let det = three_step_matrix(&inst, 3)?.determinant().abs();
        let want = (b[(0, 1)] * b[(1, 0)] * b[(3, 0)].powi(2) * b[(5, 1)].powi(2)).abs();
        worst_rel = worst_rel.max((det - want).abs() / want);
    }
    let sys = catalog::six_state_singular_system(Window::of_len(0, 6));
    let mut worst_singular: f64 = 0.0;
    for t in 3..=6 {
        let m = three_step_matrix(&sys, t)?;
        worst_singular = worst_singular.max(m.determinant().abs() / m.hadamard_bound());
    }
    Check::new(
        worst_rel <= 1e-6 && worst_singular <= 1e-9,
        format!(
            "generic relative error {worst_rel:.2e}, singular |det|/scale {worst_singular:.2e}"
        ),
    )
}

fn residuals(family: ContinuousFamily) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for t1 in [1.0, 2.0] {
        worst = worst.max(annihilator_residual_ct(
            &family.annihilator(t1),
            family,
            0.0,
            t1,
            101,
        )?);
    }
    Ok(worst)
}

fn continuous_gap(a: &Pattern, b: &Pattern) -> Result<(bool, bool)> {
    let ti = check_g1(a, b)?.holds && check_g2(a, b)?.holds;
    let tv = check_g4(a, b)?.holds;
    Ok((ti, tv))
}

fn nilpotent_chain_gap() -> Result<Check> {
    let (a, b) = catalog::chain3_pair();
    let (ti, tv) = continuous_gap(&a, &b)?;
    let res = residuals(ContinuousFamily::NilpotentChain)?;
    Check::new(
        ti && !tv && res <= 1e-9,
        format!("G1 and G2 {ti}, G4 {tv}, residual {res:.2e}"),
    )
}

fn diagonal_gap() -> Result<Check> {
    let (a, b) = catalog::diagonal_pair();
    let (ti, tv) = continuous_gap(&a, &b)?;
    let res = residuals(ContinuousFamily::DiagonalExp)?;
    let lambda = Matrix::diag(&[-1.0, 0.0]);
    let b0 = Matrix::from_rows(&[&[1.0], &[1.0]]);
    let mut exact = true;
    for t in [0.0, 0.5, 1.0] {
        let (at, bt) = exp_scaled_coefficients(&lambda, &Matrix::zeros(2, 2), &b0, t)?;
        exact &= at == ContinuousFamily::DiagonalExp.state_matrix()
            && bt == ContinuousFamily::DiagonalExp.input_matrix(t);
    }
    Check::new(
        ti && !tv && res <= 1e-9 && exact,
        format!("G1 and G2 {ti}, G4 {tv}, residual {res:.2e}, scaled family exact: {exact}"),
    )
}

fn duality_gap() -> Result<Check> {
    let sys = catalog::duality_gap_system(Window::of_len(0, 4));
    let obs = numeric_rank(&observability_matrix_dt(&sys, 0, 4)?, DEFAULT_RANK_TOL);
    let transposed = sys.transposed();
    let mut ranks = Vec::new();
    for t0 in 0..3 {
        ranks.push(numeric_rank(
            &reachability_matrix_dt(&transposed, t0, t0 + 2)?,
            DEFAULT_RANK_TOL,
        ));
    }
    Check::new(
        obs == 1 && ranks.iter().all(|&r| r == 2),
        format!("observability rank {obs}, transposed reachability ranks {ranks:?}"),
    )
}

fn oracle_equivalence(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for i in 0..200 {
        let n = rng.random_range(1..=8);
        let r = rng.random_range(0..=3);
        let (a, b) = random_pair(rng, n, r);
        for cond in [Condition::G1, Condition::G2, Condition::G4] {
            compared += 1;
            let fast = check(cond, &a, &b, None)?;
            let slow = brute_check(cond, &a, &b, None)?;
            if fast.holds != slow.holds {
                mismatches.push(format!("pair {i} {cond}"));
            }
        }
    }
    for i in 0..50 {
        let n = rng.random_range(1..=6);
        let r = rng.random_range(0..=3);
        let (a, b) = random_pair(rng, n, r);
        for t in (1..=3).filter(|t| n * t <= 18) {
            compared += 1;
            let fast = check_g3(&a, &b, t)?;
            let slow = brute_check(Condition::G3, &a, &b, Some(t))?;
            if fast.holds != slow.holds {
                mismatches.push(format!("horizon pair {i} T = {t}"));
            }
        }
    }
    Check::new(
        mismatches.is_empty(),
        format!("{compared} comparisons, mismatches: {mismatches:?}"),
    )
}

fn positive_oracle(rng: &mut ChaCha8Rng) -> Result<Check> {
    const WANTED: usize = 20;
    const DRAWS: u64 = 100;
    let mut lti = 0;
    let mut tv = 0;
    let mut failures = Vec::new();
    let mut attempts = 0;
    while (lti < WANTED || tv < WANTED) && attempts < 20_000 {
        attempts += 1;
        let n = rng.random_range(1..=8);
        let r = rng.random_range(1..=3);
        let (a, b) = random_pair(rng, n, r);
        let horizon = rng.random_range(1..=n);
        let batch_seed: u64 = rng.random();
        if lti < WANTED && check_g1(&a, &b)?.holds && check_g2(&a, &b)?.holds {
            lti += 1;
            let bad = rank_deficient(&a, &b, n, Sampling::Constant, batch_seed, DRAWS)?;
            if bad > 0 {
                failures.push(format!("time-invariant {n}x{r}: {bad}"));
            }
        }
        if tv < WANTED && check_g3(&a, &b, horizon)?.holds {
            tv += 1;
            let bad = rank_deficient(&a, &b, horizon, Sampling::PerStep, batch_seed, DRAWS)?;
            if bad > 0 {
                failures.push(format!("time-varying {n}x{r} T = {horizon}: {bad}"));
            }
        }
    }
    Check::new(
        failures.is_empty() && lti == WANTED && tv == WANTED,
        format!(
            "{lti} time-invariant and {tv} time-varying pairs x {DRAWS} draws, failures: {failures:?}"
        ),
    )
}

/// Number of `draws` seeded instantiations whose reachability matrix over
/// `[0, horizon]` has rank below `n`.
fn rank_deficient(
    a: &Pattern,
    b: &Pattern,
    horizon: usize,
    sampling: Sampling,
    seed: u64,
    draws: u64,
) -> Result<usize> {
    let window = Window::of_len(0, horizon);
    let mut bad = 0;
    for k in 0..draws {
        let inst = sample_instantiation(a, b, window, sampling, seed.wrapping_add(k))?;
        let m = reachability_matrix_dt(&inst, 0, horizon as i64)?;
        if numeric_rank(&m, DEFAULT_RANK_TOL) != a.rows() {
            bad += 1;
        }
    }
    Ok(bad)
}

fn pick_independence(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut disagreements = Vec::new();
    for i in 0..100 {
        let n = rng.random_range(1..=8);
        let r = rng.random_range(0..=3);
        let (a, b) = random_pair(rng, n, r);
        let horizon = rng.random_range(1..=3);
        for cond in Condition::ALL {
            let h = (cond == Condition::G3).then_some(horizon);
            let base = check(cond, &a, &b, h)?.holds;
            for s in 0..10 {
                let seeded =
                    check_with(cond, &a, &b, h, &mut SeededPick::new(rng.random()), false)?;
                if seeded.holds != base {
                    disagreements.push(format!("pair {i} {cond} pick seed {s}"));
                }
            }
        }
    }
    Check::new(
        disagreements.is_empty(),
        format!("100 pairs x 4 conditions x 10 seeds, disagreements: {disagreements:?}"),
    )
}

fn implications(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut broken = Vec::new();
    for i in 0..300 {
        let n = rng.random_range(1..=8);
        let r = rng.random_range(0..=3);
        let (a, b) = random_pair(rng, n, r);
        let g4 = check_g4(&a, &b)?.holds;
        let ti = check_g1(&a, &b)?.holds && check_g2(&a, &b)?.holds;
        let looped = a.with_identity()?;
        if g4 && !(check_g1(&looped, &b)?.holds && check_g2(&looped, &b)?.holds) {
            broken.push(format!("pair {i}: G4 without G1 and G2 on the looped pair"));
        }
        if ti && !check_g3(&a, &b, n)?.holds {
            broken.push(format!("pair {i}: G1 and G2 without G3 at T = n"));
        }
        let mut prev = false;
        for t in 1..=n + 1 {
            let now = check_g3(&a, &b, t)?.holds;
            if prev && !now {
                broken.push(format!("pair {i}: G3 at {} but not at {t}", t - 1));
            }
            prev = now;
        }
        let diag = Pattern::from_nonzeros(
            n,
            n,
            &(0..n)
                .filter(|_| rng.random_bool(0.5))
                .map(|j| (j, j))
                .collect::<Vec<_>>(),
        )?;
        if check_g4(&a.or_add(&diag)?, &b)?.holds != g4 {
            broken.push(format!("pair {i}: G4 changed under added diagonal"));
        }
    }
    Check::new(
        broken.is_empty(),
        format!("300 pairs, violations: {broken:?}"),
    )
}
