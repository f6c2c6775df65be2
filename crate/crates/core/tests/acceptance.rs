//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use strongctl::catalog;
use strongctl::conditions::{
    brute_check, check, check_g1, check_g2, check_g3, check_g4, check_with, reduce, reduce_traced,
    violates, Condition, ReduceMode, Removal, SeededPick, SmallestIndex,
};
use strongctl::numeric::{
    annihilator_residual_ct, exp_scaled_coefficients, numeric_rank, observability_matrix_dt,
    reachability_matrix_dt, sample_instantiation, ContinuousFamily, Instantiation, Matrix,
    Sampling, Window, DEFAULT_RANK_TOL,
};
use strongctl::pattern::Pattern;
use strongctl::selftest;
use strongctl::sgraph::{graph_of, VertexSet};

const SEED: u64 = 0xacce_0001;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn pair(rng: &mut ChaCha8Rng, n: usize, r: usize) -> (Pattern, Pattern) {
    let mut draw = |rows: usize, cols: usize| {
        let density = rng.random_range(0.15..0.6);
        let cells: Vec<(usize, usize)> = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .filter(|_| rng.random_bool(density))
            .collect();
        Pattern::from_nonzeros(rows, cols, &cells).unwrap()
    };
    (draw(n, n), draw(n, r))
}

/// Independent subset oracle straight from the definitions. `cols[v]` is
/// the bitmask of rows (state vertices) that column `v` of the concatenated
/// pattern reaches; vertex `v` lies in `V` iff `v < states` and its bit is
/// set.
struct Naive {
    states: usize,
    cols: Vec<u32>,
}

impl Naive {
    fn from_blocks(state: &Pattern, input: &Pattern) -> Naive {
        let states = state.rows();
        let column = |p: &Pattern, j: usize| {
            (0..p.rows())
                .filter(|&i| p.get(i, j))
                .fold(0u32, |m, i| m | 1 << i)
        };
        let cols = (0..state.cols())
            .map(|j| column(state, j))
            .chain((0..input.cols()).map(|j| column(input, j)))
            .collect();
        Naive { states, cols }
    }

    /// Horizon pattern written out cell by cell: block row `i` holds `A` at
    /// block column `i` (none in the first row), the identity at block
    /// column `i + 1` and `B` at input block `i`.
    fn horizon(a: &Pattern, b: &Pattern, t: usize) -> Naive {
        let (n, r) = (a.rows(), b.cols());
        let mut cols = vec![0u32; (n + r) * t];
        for i in 0..t {
            for row in 0..n {
                let k_row = i * n + row;
                for col in 0..n {
                    if i > 0 && a.get(row, col) {
                        cols[i * n + col] |= 1 << k_row;
                    }
                }
                if i + 1 < t {
                    cols[(i + 1) * n + row] |= 1 << k_row;
                }
                for col in 0..r {
                    if b.get(row, col) {
                        cols[n * t + i * r + col] |= 1 << k_row;
                    }
                }
            }
        }
        Naive {
            states: n * t,
            cols,
        }
    }

    fn singles(&self, v: u32, outside_only: bool) -> bool {
        self.cols.iter().enumerate().any(|(u, &post)| {
            let inside = u < self.states && v & (1 << u) != 0;
            (!outside_only || !inside) && (post & v).count_ones() == 1
        })
    }

    /// `V ⊆ Pre(V)`: every vertex of `V` has an edge into `V`.
    fn pre_covers(&self, v: u32) -> bool {
        (0..self.states)
            .filter(|&w| v & (1 << w) != 0)
            .all(|w| self.cols[w] & v != 0)
    }

    fn holds(&self, cond: Condition) -> bool {
        (1..1u32 << self.states).all(|v| match cond {
            Condition::G1 | Condition::G3 => self.singles(v, false),
            Condition::G2 => !self.pre_covers(v) || self.singles(v, true),
            Condition::G4 => self.singles(v, true),
        })
    }
}

fn naive(cond: Condition, a: &Pattern, b: &Pattern, t: Option<usize>) -> bool {
    match cond {
        Condition::G3 => Naive::horizon(a, b, t.unwrap()).holds(cond),
        _ => Naive::from_blocks(a, b).holds(cond),
    }
}

fn criterion_1() -> Outcome {
    let (a, b) = catalog::six_state_pair();
    let g = graph_of(&a, &b).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let (r0, t0) = reduce_traced(&g, ReduceMode::ZeroEigenvalue, &mut SmallestIndex);
    let (r1, t1) = reduce_traced(&g, ReduceMode::NonzeroEigenvalue, &mut SmallestIndex);
    let elapsed = start.elapsed();

    ensure!(
        t0[0].candidates == VertexSet::from([1, 2, 4, 5, 6]),
        "first T = {}",
        t0[0].candidates
    );
    ensure!(t0[0].picked == 1, "first pick {}", t0[0].picked);
    let order0: Vec<usize> = t0.iter().flat_map(|s| s.removed.to_vec()).collect();
    ensure!(
        order0 == [2, 1, 3, 4, 5, 6],
        "zero-mode removal order {order0:?}"
    );
    ensure!(r0.is_empty(), "zero-mode residual {r0}");

    ensure!(
        t1[0].candidates.is_empty(),
        "nonzero-mode first T = {}",
        t1[0].candidates
    );
    ensure!(
        t1[0].rule == Removal::NoPredecessor && t1[0].removed == VertexSet::from([3]),
        "nonzero-mode first step {}",
        t1[0]
    );
    let order1: Vec<(usize, Removal)> = t1
        .iter()
        .flat_map(|s| s.removed.iter().map(move |w| (w, s.rule)))
        .collect();
    use Removal::*;
    ensure!(
        order1
            == [
                (3, NoPredecessor),
                (4, NoPredecessor),
                (5, NoPredecessor),
                (6, NoPredecessor),
                (1, Successor),
                (2, NoPredecessor)
            ],
        "nonzero-mode removals {order1:?}"
    );
    ensure!(r1.is_empty(), "nonzero-mode residual {r1}");
    ensure!(
        check_g1(&a, &b).unwrap().holds && check_g2(&a, &b).unwrap().holds,
        "G1 or G2 fails"
    );
    ensure!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    Ok(format!("traces match, {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let (a, b) = catalog::six_state_pair();
    let start = Instant::now();
    let g6 = check_g3(&a, &b, 6).unwrap();
    let g3 = check_g3(&a, &b, 3).unwrap();
    let v: VertexSet = (1..=18).filter(|v| ![3, 4, 9].contains(v)).collect();
    let violated = violates(Condition::G3, &a, &b, Some(3), &v).unwrap();
    let elapsed = start.elapsed();
    ensure!(g6.holds, "G3 fails at 6");
    ensure!(!g3.holds, "G3 holds at 3");
    ensure!(violated, "caption set does not violate G3 at 3");
    ensure!(
        !naive(Condition::G3, &a, &b, Some(3)),
        "oracle disagrees at 3"
    );
    let w = g3.witness.unwrap();
    ensure!(
        violates(Condition::G3, &a, &b, Some(3), &w).unwrap(),
        "witness {w} not a violation"
    );
    ensure!(elapsed < Duration::from_millis(10), "took {elapsed:?}");
    Ok(format!(
        "G3(6) holds, G3(3) fails with witness {w}, {elapsed:?}"
    ))
}

fn m_of(inst: &Instantiation, t: i64) -> Matrix {
    reachability_matrix_dt(inst, t - 3, t).unwrap()
}

fn criterion_3() -> Outcome {
    let (_, bp) = catalog::six_state_pair();
    let a = catalog::six_state_unit_a();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let b = Matrix::from_pattern(&bp, |_, _| {
            let v: f64 = rng.random_range(0.5..2.0);
            if rng.random_bool(0.5) {
                v
            } else {
                -v
            }
        });
        let inst = Instantiation::constant(Window::of_len(0, 3), a.clone(), b.clone());
        let det = m_of(&inst, 3).determinant().abs();
        let want = (a[(0, 1)].powi(2)
            * a[(1, 0)].powi(2)
            * a[(2, 3)]
            * a[(4, 5)]
            * b[(0, 1)]
            * b[(1, 0)]
            * b[(3, 0)].powi(2)
            * b[(5, 1)].powi(2))
        .abs();
        worst = worst.max((det - want).abs() / want);
    }
    ensure!(worst <= 1e-6, "relative error {worst:e}");
    let sys = catalog::six_state_singular_system(Window::of_len(0, 6));
    let mut ratios = Vec::new();
    for t in 3..=6 {
        let m = m_of(&sys, t);
        let ratio = m.determinant().abs() / m.hadamard_bound();
        ensure!(ratio <= 1e-9, "t = {t}: |det| / scale = {ratio:e}");
        ratios.push(ratio);
    }
    Ok(format!(
        "generic rel. error {worst:.1e}, singular ratios {ratios:?}"
    ))
}

fn criterion_4() -> Outcome {
    let (a, b) = catalog::chain3_pair();
    ensure!(
        check_g1(&a, &b).unwrap().holds && check_g2(&a, &b).unwrap().holds,
        "G1 or G2 fails"
    );
    ensure!(!check_g4(&a, &b).unwrap().holds, "G4 holds");
    let fam = ContinuousFamily::NilpotentChain;
    let mut worst: f64 = 0.0;
    for t1 in [1.0f64, 2.0] {
        let p = [2.0, -2.0 * t1, t1 * t1 + 1.0];
        worst = worst.max(annihilator_residual_ct(&p, fam, 0.0, t1, 101).unwrap());
    }
    ensure!(worst <= 1e-9, "residual {worst:e}");
    Ok(format!("G1, G2 hold, G4 fails, residual {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let (a, b) = catalog::diagonal_pair();
    ensure!(
        check_g1(&a, &b).unwrap().holds && check_g2(&a, &b).unwrap().holds,
        "G1 or G2 fails"
    );
    ensure!(!check_g4(&a, &b).unwrap().holds, "G4 holds");
    let fam = ContinuousFamily::DiagonalExp;
    let mut worst: f64 = 0.0;
    for t1 in [1.0f64, 2.0] {
        worst = worst.max(annihilator_residual_ct(&[1.0, -t1.exp()], fam, 0.0, t1, 101).unwrap());
    }
    ensure!(worst <= 1e-9, "residual {worst:e}");
    let lambda = Matrix::diag(&[-1.0, 0.0]);
    let b0 = Matrix::from_rows(&[&[1.0], &[1.0]]);
    for t in [0.0f64, 0.5, 1.0] {
        let (at, bt) = exp_scaled_coefficients(&lambda, &Matrix::zeros(2, 2), &b0, t).unwrap();
        ensure!(at == Matrix::diag(&[1.0, 0.0]), "A({t}) = {at:?}");
        ensure!(
            bt == Matrix::from_rows(&[&[t.exp()], &[1.0]]),
            "B({t}) = {bt:?}"
        );
    }
    Ok(format!(
        "G1, G2 hold, G4 fails, residual {worst:.1e}, scaled family exact"
    ))
}

fn criterion_6() -> Outcome {
    let sys = catalog::duality_gap_system(Window::of_len(0, 4));
    let obs = numeric_rank(
        &observability_matrix_dt(&sys, 0, 4).unwrap(),
        DEFAULT_RANK_TOL,
    );
    ensure!(obs == 1, "observability rank {obs}");
    // x(t+1) = A(t)' x + C(t)' u, written out without the library's helper
    let transposed = Instantiation::from_fn(Window::of_len(0, 4), |t| {
        (
            catalog::duality_gap_a(t).transpose(),
            catalog::duality_gap_c(t).transpose(),
            None,
        )
    });
    for t0 in 0..3 {
        let r = numeric_rank(
            &reachability_matrix_dt(&transposed, t0, t0 + 2).unwrap(),
            DEFAULT_RANK_TOL,
        );
        ensure!(r == 2, "transposed reachability rank {r} at t0 = {t0}");
    }
    Ok("observability rank 1, transposed reachability rank 2 for t0 = 0, 1, 2".into())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let start = Instant::now();
    let mut count = 0;
    for i in 0..200 {
        let n = rng.random_range(1..=8);
        let r = rng.random_range(0..=3);
        let (a, b) = pair(&mut rng, n, r);
        for cond in [Condition::G1, Condition::G2, Condition::G4] {
            let fast = check(cond, &a, &b, None).unwrap();
            let slow = brute_check(cond, &a, &b, None).unwrap();
            let oracle = naive(cond, &a, &b, None);
            ensure!(
                fast.holds == slow.holds && slow.holds == oracle,
                "pair {i} {cond}: reduce {}, brute {}, oracle {oracle}\nA =\n{a}B =\n{b}",
                fast.holds,
                slow.holds
            );
            count += 1;
        }
    }
    for i in 0..50 {
        let n = rng.random_range(1..=6);
        let r = rng.random_range(0..=3);
        let (a, b) = pair(&mut rng, n, r);
        for t in (1..=3).filter(|t| n * t <= 18) {
            let fast = check_g3(&a, &b, t).unwrap();
            let slow = brute_check(Condition::G3, &a, &b, Some(t)).unwrap();
            let oracle = naive(Condition::G3, &a, &b, Some(t));
            ensure!(
                fast.holds == slow.holds && slow.holds == oracle,
                "horizon pair {i} T = {t}: reduce {}, brute {}, oracle {oracle}",
                fast.holds,
                slow.holds
            );
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    Ok(format!("{count} instances agree, {elapsed:.2?}"))
}

fn full_rank_draws(a: &Pattern, b: &Pattern, t: usize, sampling: Sampling, seed: u64) -> usize {
    (0..100)
        .filter(|k| {
            let inst = sample_instantiation(a, b, Window::of_len(0, t), sampling, seed ^ (k << 32))
                .unwrap();
            numeric_rank(
                &reachability_matrix_dt(&inst, 0, t as i64).unwrap(),
                DEFAULT_RANK_TOL,
            ) == a.rows()
        })
        .count()
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let (mut lti, mut tv) = (0, 0);
    for i in 0..1500 {
        let n = rng.random_range(1..=8);
        let r = rng.random_range(1..=3);
        let (a, b) = pair(&mut rng, n, r);
        let seed: u64 = rng.random();
        if check_g1(&a, &b).unwrap().holds && check_g2(&a, &b).unwrap().holds {
            lti += 1;
            let ok = full_rank_draws(&a, &b, n, Sampling::Constant, seed);
            ensure!(
                ok == 100,
                "pair {i} ({n} states): {} of 100 constant draws rank deficient",
                100 - ok
            );
        }
        let t = rng.random_range(1..=n);
        if check_g3(&a, &b, t).unwrap().holds {
            tv += 1;
            let ok = full_rank_draws(&a, &b, t, Sampling::PerStep, seed);
            ensure!(
                ok == 100,
                "pair {i} T = {t}: {} of 100 per-step draws rank deficient",
                100 - ok
            );
        }
    }
    ensure!(
        lti >= 20 && tv >= 20,
        "too few passing pairs: {lti} and {tv}"
    );
    Ok(format!(
        "{lti} time-invariant and {tv} horizon pairs, 100 draws each, all full rank"
    ))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    for i in 0..100 {
        let n = rng.random_range(1..=8);
        let r = rng.random_range(0..=3);
        let (a, b) = pair(&mut rng, n, r);
        let g = graph_of(&a, &b).unwrap();
        let t = rng.random_range(1..=3);
        for s in 0..10u64 {
            let seed = SEED ^ (i << 8) ^ s;
            for mode in [ReduceMode::ZeroEigenvalue, ReduceMode::NonzeroEigenvalue] {
                let base = reduce(&g, mode, &mut SmallestIndex).is_empty();
                let other = reduce(&g, mode, &mut SeededPick::new(seed)).is_empty();
                ensure!(base == other, "pair {i} {mode:?} seed {seed}");
            }
            for cond in [Condition::G3, Condition::G4] {
                let h = (cond == Condition::G3).then_some(t);
                let base = check(cond, &a, &b, h).unwrap().holds;
                let other = check_with(cond, &a, &b, h, &mut SeededPick::new(seed), false).unwrap();
                ensure!(base == other.holds, "pair {i} {cond} seed {seed}");
            }
        }
    }
    Ok("100 pairs x 10 pick seeds, verdicts unchanged".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    for i in 0..400 {
        let n = rng.random_range(1..=8);
        let r = rng.random_range(0..=3);
        let (a, b) = pair(&mut rng, n, r);
        let g4 = check_g4(&a, &b).unwrap().holds;
        let looped = a.with_identity().unwrap();
        if g4 {
            ensure!(
                check_g1(&looped, &b).unwrap().holds && check_g2(&looped, &b).unwrap().holds,
                "pair {i}: G4 without G1, G2 on the looped pair"
            );
        }
        let ti = check_g1(&a, &b).unwrap().holds && check_g2(&a, &b).unwrap().holds;
        if ti {
            ensure!(
                check_g3(&a, &b, n).unwrap().holds,
                "pair {i}: G1, G2 without G3 at n"
            );
        }
        for t in 1..=n {
            if check_g3(&a, &b, t).unwrap().holds {
                ensure!(
                    check_g3(&a, &b, t + 1).unwrap().holds,
                    "pair {i}: G3 at {t} but not {}",
                    t + 1
                );
            }
        }
        for _ in 0..3 {
            let mut d = a.clone();
            for j in 0..n {
                if rng.random_bool(0.5) {
                    d.set(j, j, true);
                }
            }
            ensure!(
                check_g4(&d, &b).unwrap().holds == g4,
                "pair {i}: G4 changed under added diagonal"
            );
        }
    }
    Ok("400 pairs, no implication broken".into())
}

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, run) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(detail) => println!("PASS criterion {}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {detail}", k + 1);
            }
        }
    }
    let outcomes = selftest::run_all(selftest::DEFAULT_SEED);
    let self_failed = outcomes.iter().filter(|o| !o.passed).count();
    for o in outcomes.iter().filter(|o| !o.passed) {
        println!("  selftest: {o}");
    }
    println!(
        "{} selftest: {}/{} criteria passed",
        if self_failed == 0 { "PASS" } else { "FAIL" },
        outcomes.len() - self_failed,
        outcomes.len()
    );
    if failed + self_failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
