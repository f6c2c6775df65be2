//! Worked example systems used by the self-test, the documentation and the
//! test suites.

use crate::numeric::{Instantiation, Matrix, Window};
use crate::pattern::{parse_pattern, Pattern};

/// Six-state, two-input pair whose time-invariant systems are all
/// controllable, but whose time-varying systems need a window of length
/// greater than three.
pub const SIX_STATE_A: &str = "\
o * o o o o
* o o o o o
o o o * o o
o o o o * o
o o o o o *
o o o o o o";

pub const SIX_STATE_B: &str = "\
* *
* o
o o
* o
o o
o *";

/// `A = diag(*, o)` with a full input column.
pub const DIAGONAL_A: &str = "* o\no o";
pub const DIAGONAL_B: &str = "*\n*";

/// Three-state nilpotent chain with inputs on the first and last state.
pub const CHAIN3_A: &str = "o * o\no o *\no o o";
pub const CHAIN3_B: &str = "*\no\n*";

pub fn six_state_pair() -> (Pattern, Pattern) {
    (parse(SIX_STATE_A), parse(SIX_STATE_B))
}

pub fn diagonal_pair() -> (Pattern, Pattern) {
    (parse(DIAGONAL_A), parse(DIAGONAL_B))
}

pub fn chain3_pair() -> (Pattern, Pattern) {
    (parse(CHAIN3_A), parse(CHAIN3_B))
}

fn parse(text: &str) -> Pattern {
    parse_pattern(text).expect("catalog patterns are well formed")
}

/// The state matrix of [`SIX_STATE_A`] with every nonzero set to one.
pub fn six_state_unit_a() -> Matrix {
    let (a, _) = six_state_pair();
    Matrix::from_pattern(&a, |_, _| 1.0)
}

/// Time-varying input matrix of the six-state pair for which every window of
/// length three is uncontrollable when all state nonzeros equal one.
pub fn six_state_singular_b(t: i64) -> Matrix {
    let mut b = Matrix::zeros(6, 2);
    b[(0, 0)] = -1.0;
    b[(1, 0)] = 3f64.powf(t as f64 / 2.0);
    b[(3, 0)] = 1.0;
    b[(0, 1)] = 2.0;
    b[(5, 1)] = 1.0;
    b
}

/// Instantiation of the six-state pair with unit state nonzeros and
/// [`six_state_singular_b`] over `window`.
pub fn six_state_singular_system(window: Window) -> Instantiation {
    let a = six_state_unit_a();
    Instantiation::from_fn(window, |t| (a.clone(), six_state_singular_b(t), None))
}

/// State matrix of the two-state duality-gap system at time `t`.
pub fn duality_gap_a(t: i64) -> Matrix {
    let e = std::f64::consts::E;
    let t = t as f64;
    Matrix::from_rows(&[&[-2.0, (1.0 - t).exp()], &[-3.0 * t.exp(), 2.0 * e]])
}

/// Output matrix of the two-state duality-gap system at time `t`.
pub fn duality_gap_c(t: i64) -> Matrix {
    let e = std::f64::consts::E;
    Matrix::from_rows(&[&[(t as f64).exp(), -e]])
}

/// A two-state system with invertible `A(t)` that is not observable, while
/// its plainly transposed system `x(t+1) = A(t)' x + C(t)' u` is controllable
/// on every window of length two.
pub fn duality_gap_system(window: Window) -> Instantiation {
    Instantiation::from_fn(window, |t| {
        (
            duality_gap_a(t),
            Matrix::zeros(2, 0),
            Some(duality_gap_c(t)),
        )
    })
}
