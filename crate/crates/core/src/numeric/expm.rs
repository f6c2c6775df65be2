use super::Matrix;

/// `exp(a * scale)` by scaling and squaring with a truncated Taylor series.
///
/// The argument is halved until its 1-norm is at most 1/2, the series is
/// summed until terms stop contributing at double precision, and the result
/// is squared back.
pub fn matrix_exponential(a: &Matrix, scale: f64) -> Matrix {
    assert!(a.is_square(), "matrix exponential of a non-square matrix");
    let x = a.scale(scale);
    let norm = x.norm_1();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let x = x.scale(0.5f64.powi(squarings));

    let n = a.rows();
    let mut sum = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=30 {
        term = (&term * &x).scale(1.0 / k as f64);
        sum = &sum + &term;
        if term.max_abs() <= f64::EPSILON * sum.max_abs() * 1e-3 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}
