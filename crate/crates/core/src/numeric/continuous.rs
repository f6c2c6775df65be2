//! Continuous-time checks for constant `A(t)`, and exponentially scaled
//! coefficients.

use std::fmt;
use std::str::FromStr;

use super::{matrix_exponential, Matrix};
use crate::error::{Error, Result};

/// Closed-form continuous-time systems with constant state matrix whose
/// time-invariant counterparts are all controllable but which are not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContinuousFamily {
    /// `A = diag(1, 0)`, `B(t) = (e^t, 1)'`.
    DiagonalExp,
    /// `A` = ones on the superdiagonal of a 3x3, `B(t) = (t² + 1, 0, -2)'`.
    NilpotentChain,
}

impl ContinuousFamily {
    pub fn state_matrix(self) -> Matrix {
        match self {
            ContinuousFamily::DiagonalExp => Matrix::diag(&[1.0, 0.0]),
            ContinuousFamily::NilpotentChain => {
                Matrix::from_rows(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]])
            }
        }
    }

    pub fn input_matrix(self, t: f64) -> Matrix {
        match self {
            ContinuousFamily::DiagonalExp => Matrix::from_rows(&[&[t.exp()], &[1.0]]),
            ContinuousFamily::NilpotentChain => {
                Matrix::from_rows(&[&[t * t + 1.0], &[0.0], &[-2.0]])
            }
        }
    }

    /// A nonzero `p` with `p' Φ(t1, τ) B(τ) = 0` for all `τ`.
    pub fn annihilator(self, t1: f64) -> Vec<f64> {
        match self {
            ContinuousFamily::DiagonalExp => vec![1.0, -t1.exp()],
            ContinuousFamily::NilpotentChain => vec![2.0, -2.0 * t1, t1 * t1 + 1.0],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ContinuousFamily::DiagonalExp => "diagonal-exp",
            ContinuousFamily::NilpotentChain => "nilpotent-chain",
        }
    }
}

impl FromStr for ContinuousFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diagonal-exp" => Ok(ContinuousFamily::DiagonalExp),
            "nilpotent-chain" => Ok(ContinuousFamily::NilpotentChain),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

impl fmt::Display for ContinuousFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Largest `|p' Φ(t1, τ) B(τ)|` over a uniform grid of `samples` points on
/// `[t0, t1]`, with `Φ(t1, τ) = exp(A (t1 - τ))`.
pub fn annihilator_residual_ct(
    p: &[f64],
    family: ContinuousFamily,
    t0: f64,
    t1: f64,
    samples: usize,
) -> Result<f64> {
    let a = family.state_matrix();
    if p.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "annihilator has {} entries, state dimension is {}",
            p.len(),
            a.rows()
        )));
    }
    if samples < 2 {
        return Err(Error::Dimension("need at least two sample points".into()));
    }
    if t1 <= t0 {
        return Err(Error::Dimension(format!("empty interval [{t0}, {t1}]")));
    }
    let p = Matrix::from_vec(1, p.len(), p.to_vec());
    let step = (t1 - t0) / (samples - 1) as f64;
    let mut worst: f64 = 0.0;
    for k in 0..samples {
        let tau = if k + 1 == samples {
            t1
        } else {
            t0 + step * k as f64
        };
        let phi = matrix_exponential(&a, t1 - tau);
        let v = &(&p * &phi) * &family.input_matrix(tau);
        worst = worst.max(v.max_abs());
    }
    Ok(worst)
}

/// `A(t) = e^{-Λt} A0 e^{Λt} - Λ` and `B(t) = e^{-Λt} B0` for diagonal `Λ`.
pub fn exp_scaled_coefficients(
    lambda: &Matrix,
    a0: &Matrix,
    b0: &Matrix,
    t: f64,
) -> Result<(Matrix, Matrix)> {
    let n = lambda.rows();
    if !lambda.is_square() || a0.shape() != (n, n) || b0.rows() != n {
        return Err(Error::Dimension(format!(
            "scaling {:?}, A0 {:?}, B0 {:?} are incompatible",
            lambda.shape(),
            a0.shape(),
            b0.shape()
        )));
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && lambda[(i, j)] != 0.0 {
                return Err(Error::NotDiagonal);
            }
        }
    }
    let lam: Vec<f64> = (0..n).map(|i| lambda[(i, i)]).collect();
    let down: Vec<f64> = lam.iter().map(|l| (-l * t).exp()).collect();
    let up: Vec<f64> = lam.iter().map(|l| (l * t).exp()).collect();

    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = down[i] * a0[(i, j)] * up[j];
        }
        a[(i, i)] -= lam[i];
    }
    let mut b = Matrix::zeros(n, b0.cols());
    for i in 0..n {
        for j in 0..b0.cols() {
            b[(i, j)] = down[i] * b0[(i, j)];
        }
    }
    Ok((a, b))
}
