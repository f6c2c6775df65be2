//! Strong structural controllability and observability of linear systems
//! given only by the nonzero patterns of their coefficient matrices.
//!
//! A pattern pair `(A, B)` is turned into a digraph; four set-reduction
//! conditions on that graph decide whether *every* system with those
//! patterns is controllable, for time-invariant systems (`G1` and `G2`),
//! discrete-time time-varying systems on a window of given length (`G3`)
//! and continuous-time time-varying systems (`G4`).
//!
//! ```
//! use strongctl::{catalog, check_g1, check_g2, check_g3};
//!
//! let (a, b) = catalog::six_state_pair();
//! assert!(check_g1(&a, &b).unwrap().holds && check_g2(&a, &b).unwrap().holds);
//! assert!(check_g3(&a, &b, 6).unwrap().holds);
//! assert!(!check_g3(&a, &b, 3).unwrap().holds);
//! ```

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod conditions;
pub mod error;
pub mod numeric;
pub mod pattern;
pub mod selftest;
pub mod sgraph;

pub use analysis::{
    analyze, analyze_controllability, analyze_observability, dualize, Answer, Direction, Query,
    Report, TimeDomain, Variation,
};
pub use conditions::{
    brute_check, check, check_g1, check_g2, check_g3, check_g4, reduce, violates, Condition,
    Verdict,
};
pub use error::{Error, Result};
pub use pattern::{build_k, parse_pattern, Pattern};
pub use sgraph::{graph_of, post_set, pre_set, SystemGraph, VertexSet};
