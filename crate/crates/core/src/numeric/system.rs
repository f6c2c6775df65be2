//! Discrete-time instantiations of patterns and their transition,
//! reachability and observability matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Matrix;
use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Half-open integer time window `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub start: i64,
    pub end: i64,
}

impl Window {
    pub fn new(start: i64, end: i64) -> Result<Self> {
        if end <= start {
            return Err(Error::EmptyInterval { t0: start, t1: end });
        }
        Ok(Window { start, end })
    }

    /// Window `[start, start + len)`. Panics if `len == 0`.
    pub fn of_len(start: i64, len: usize) -> Self {
        assert!(len > 0, "window length must be positive");
        Window {
            start,
            end: start + len as i64,
        }
    }

    pub fn len(&self) -> usize {
        (self.end - self.start) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn steps(&self) -> impl DoubleEndedIterator<Item = i64> {
        self.start..self.end
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    /// One draw reused at every time step.
    Constant,
    /// Fresh draw per time step.
    PerStep,
}

/// Coefficient matrices `A(t)`, `B(t)` and optionally `C(t)` for every `t`
/// in a window.
#[derive(Clone, Debug, PartialEq)]
pub struct Instantiation {
    window: Window,
    a: Vec<Matrix>,
    b: Vec<Matrix>,
    c: Option<Vec<Matrix>>,
}

impl Instantiation {
    /// Builds an instantiation from `f(t) = (A(t), B(t), C(t))`. Either every
    /// step provides `C(t)` or none does.
    pub fn from_fn<F>(window: Window, mut f: F) -> Self
    where
        F: FnMut(i64) -> (Matrix, Matrix, Option<Matrix>),
    {
        let mut a = Vec::with_capacity(window.len());
        let mut b = Vec::with_capacity(window.len());
        let mut c = Vec::with_capacity(window.len());
        for t in window.steps() {
            let (at, bt, ct) = f(t);
            assert!(at.is_square(), "A({t}) must be square");
            assert_eq!(at.rows(), bt.rows(), "A({t}) and B({t}) row counts differ");
            if let Some(ct) = ct {
                assert_eq!(ct.cols(), at.rows(), "C({t}) column count differs from n");
                c.push(ct);
            }
            a.push(at);
            b.push(bt);
        }
        assert!(
            c.is_empty() || c.len() == a.len(),
            "C(t) given for some steps only"
        );
        let c = (!c.is_empty()).then_some(c);
        Instantiation { window, a, b, c }
    }

    pub fn constant(window: Window, a: Matrix, b: Matrix) -> Self {
        Instantiation::from_fn(window, |_| (a.clone(), b.clone(), None))
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn state_dim(&self) -> usize {
        self.a[0].rows()
    }

    pub fn input_dim(&self) -> usize {
        self.b[0].cols()
    }

    pub fn output_dim(&self) -> Option<usize> {
        self.c.as_ref().map(|c| c[0].rows())
    }

    fn slot(&self, t: i64) -> Result<usize> {
        if t < self.window.start || t >= self.window.end {
            return Err(Error::OutsideWindow {
                t,
                start: self.window.start,
                end: self.window.end,
            });
        }
        Ok((t - self.window.start) as usize)
    }

    pub fn a_at(&self, t: i64) -> Result<&Matrix> {
        Ok(&self.a[self.slot(t)?])
    }

    pub fn b_at(&self, t: i64) -> Result<&Matrix> {
        Ok(&self.b[self.slot(t)?])
    }

    /// `C(t)`; panics if the instantiation carries no output matrices.
    pub fn c_at(&self, t: i64) -> Result<&Matrix> {
        let c = self
            .c
            .as_ref()
            .expect("instantiation has no output matrices");
        Ok(&c[self.slot(t)?])
    }

    /// Whether every stored `A(t)` and `B(t)` has exactly the given patterns.
    pub fn is_of_pattern(&self, a: &Pattern, b: &Pattern) -> bool {
        self.a.iter().all(|m| m.is_of_pattern(a)) && self.b.iter().all(|m| m.is_of_pattern(b))
    }

    pub fn is_of_output_pattern(&self, a: &Pattern, c: &Pattern) -> bool {
        self.a.iter().all(|m| m.is_of_pattern(a))
            && self
                .c
                .as_ref()
                .is_some_and(|cs| cs.iter().all(|m| m.is_of_pattern(c)))
    }

    /// The system `x(t+1) = A(t)' x + C(t)' u` on the same window. Requires
    /// output matrices.
    pub fn transposed(&self) -> Instantiation {
        let c = self
            .c
            .as_ref()
            .expect("instantiation has no output matrices");
        Instantiation {
            window: self.window,
            a: self.a.iter().map(Matrix::transpose).collect(),
            b: c.iter().map(Matrix::transpose).collect(),
            c: None,
        }
    }

    /// Time-reversed adjoint over `[t0, t1)`: `Ã(s) = A(t0 + t1 - s)'` and
    /// `B̃(s) = C(t0 + t1 - s)'` on the window `[t0 + 1, t1 + 1)`. The system
    /// is observable on `[t0, t1]` iff the adjoint is controllable on
    /// `[t0 + 1, t1 + 1]`.
    pub fn time_reversed_adjoint(&self, t0: i64, t1: i64) -> Result<Instantiation> {
        let window = Window::new(t0, t1)?;
        self.slot(t0)?;
        self.slot(t1 - 1)?;
        let mut a = Vec::with_capacity(window.len());
        let mut b = Vec::with_capacity(window.len());
        for s in t0 + 1..=t1 {
            a.push(self.a_at(t0 + t1 - s)?.transpose());
            b.push(self.c_at(t0 + t1 - s)?.transpose());
        }
        Ok(Instantiation {
            window: Window::new(t0 + 1, t1 + 1)?,
            a,
            b,
            c: None,
        })
    }
}

fn sample_matrix(p: &Pattern, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_pattern(p, |_, _| {
        let magnitude = rng.random_range(0.5..=2.0);
        if rng.random_bool(0.5) {
            magnitude
        } else {
            -magnitude
        }
    })
}

/// Random instantiation of `(a, b)`: nonzero cells get magnitudes in
/// `[0.5, 2]` with random sign, zero cells are exactly zero.
pub fn sample_instantiation(
    a: &Pattern,
    b: &Pattern,
    window: Window,
    sampling: Sampling,
    seed: u64,
) -> Result<Instantiation> {
    sample_with(a, b, None, window, sampling, seed)
}

/// Random instantiation of the output pattern `(a, c)`, with no inputs.
pub fn sample_output_instantiation(
    a: &Pattern,
    c: &Pattern,
    window: Window,
    sampling: Sampling,
    seed: u64,
) -> Result<Instantiation> {
    sample_with(
        a,
        &Pattern::zeros(a.rows(), 0),
        Some(c),
        window,
        sampling,
        seed,
    )
}

fn sample_with(
    a: &Pattern,
    b: &Pattern,
    c: Option<&Pattern>,
    window: Window,
    sampling: Sampling,
    seed: u64,
) -> Result<Instantiation> {
    if !a.is_square() || a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "cannot instantiate A {}x{} with B {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if let Some(c) = c {
        if c.cols() != a.rows() {
            return Err(Error::Dimension(format!(
                "output pattern has {} columns, expected {}",
                c.cols(),
                a.rows()
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        (
            sample_matrix(a, rng),
            sample_matrix(b, rng),
            c.map(|c| sample_matrix(c, rng)),
        )
    };
    Ok(match sampling {
        Sampling::Constant => {
            let fixed = draw(&mut rng);
            Instantiation::from_fn(window, |_| fixed.clone())
        }
        Sampling::PerStep => Instantiation::from_fn(window, |_| draw(&mut rng)),
    })
}

/// `Φ(t, t0) = A(t-1) ⋯ A(t0)`, with `Φ(t0, t0) = I`.
pub fn transition_matrix_dt(inst: &Instantiation, t: i64, t0: i64) -> Result<Matrix> {
    let w = inst.window();
    for time in [t, t0] {
        if time < w.start || time > w.end {
            return Err(Error::OutsideWindow {
                t: time,
                start: w.start,
                end: w.end,
            });
        }
    }
    if t < t0 {
        return Err(Error::EmptyInterval { t0, t1: t });
    }
    let mut phi = Matrix::identity(inst.state_dim());
    for s in t0..t {
        phi = inst.a_at(s)? * &phi;
    }
    Ok(phi)
}

/// Columns `Φ(t1, s+1) B(s)` for `s = t0, …, t1-1`. Full row rank iff the
/// system is controllable on `[t0, t1]`.
pub fn reachability_matrix_dt(inst: &Instantiation, t0: i64, t1: i64) -> Result<Matrix> {
    if t1 <= t0 {
        return Err(Error::EmptyInterval { t0, t1 });
    }
    inst.slot(t0)?;
    inst.slot(t1 - 1)?;
    let mut blocks = Vec::with_capacity((t1 - t0) as usize);
    let mut phi = Matrix::identity(inst.state_dim());
    for s in (t0..t1).rev() {
        blocks.push(&phi * inst.b_at(s)?);
        phi = &phi * inst.a_at(s)?;
    }
    blocks.reverse();
    Ok(Matrix::hstack(&blocks))
}

/// Rows `C(s) Φ(s, t0)` for `s = t0, …, t1-1`. Full column rank iff the
/// system is observable on `[t0, t1]`.
pub fn observability_matrix_dt(inst: &Instantiation, t0: i64, t1: i64) -> Result<Matrix> {
    if t1 <= t0 {
        return Err(Error::EmptyInterval { t0, t1 });
    }
    inst.slot(t0)?;
    inst.slot(t1 - 1)?;
    let mut blocks = Vec::with_capacity((t1 - t0) as usize);
    let mut phi = Matrix::identity(inst.state_dim());
    for s in t0..t1 {
        blocks.push(inst.c_at(s)? * &phi);
        phi = inst.a_at(s)? * &phi;
    }
    Ok(Matrix::vstack(&blocks))
}

/// Numeric counterpart of the horizon pattern over `[t0, t1)`: block row `i`
/// (1-based) holds `A(t0+i-1)` in state group `i` (zero for `i = 1`), the
/// identity in state group `i+1` and `B(t0+i-1)` in input group `i`.
pub fn k_matrix(inst: &Instantiation, t0: i64, t1: i64) -> Result<Matrix> {
    let window = Window::new(t0, t1)?;
    let n = inst.state_dim();
    let r = inst.input_dim();
    let len = window.len();
    let mut k = Matrix::zeros(n * len, (n + r) * len);
    let id = Matrix::identity(n);
    for i in 0..len {
        let t = t0 + i as i64;
        if i >= 1 {
            k.set_block(i * n, i * n, inst.a_at(t)?);
        }
        if i + 1 < len {
            k.set_block(i * n, (i + 1) * n, &id);
        }
        k.set_block(i * n, n * len + i * r, inst.b_at(t)?);
    }
    Ok(k)
}
