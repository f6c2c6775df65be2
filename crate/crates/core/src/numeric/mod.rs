//! Numeric oracle: concrete systems of a pattern, their transition and
//! reachability matrices, ranks and matrix exponentials.

mod continuous;
mod expm;
mod matrix;
mod system;

pub use continuous::{annihilator_residual_ct, exp_scaled_coefficients, ContinuousFamily};
pub use expm::matrix_exponential;
pub use matrix::{numeric_rank, Matrix, DEFAULT_RANK_TOL};
pub use system::{
    k_matrix, observability_matrix_dt, reachability_matrix_dt, sample_instantiation,
    sample_output_instantiation, transition_matrix_dt, Instantiation, Sampling, Window,
};
