//! Weighted Fourier frames on self-affine measures.
//!
//! A candidate `(R, B, L, α)` pairs an expansive integer matrix `R` and digit
//! set `B`, which define the invariant measure `μ`, with labels `L` and
//! weights `α`. The library decides when the weighted exponentials
//! `{(Π α_{l_i}) e_{l_0 + R^T l_1 + …}}` form a Parseval frame for `L²(μ)`:
//! the isometry test on the matrix `T`, closed-form family checks, the
//! invariant-set decision procedure in one dimension, exact finite-level
//! Parseval checks and the dilation to an orthonormal set.

pub mod algebra;
pub mod candidate;
pub mod dilation;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod ifs;
pub mod io;
pub mod report;
pub mod verify;

pub use algebra::{IntMatrix, IntVec, RatMatrix, RatVec, Rational};
pub use candidate::{FrameCandidate, Weight, DEFAULT_TOL};
pub use dilation::{AMatrix, DilationSystem};
pub use dynamics::{
    extreme_cycles, find_minimal_invariant_sets, th2_verdict, ParsevalVerdict, TransitionGraph, VerdictStatus,
};
pub use error::{Error, Result};
pub use families::{check_three_digit_family, check_two_digit_family, make_integer_base_family, FamilyVerdict};
pub use ifs::{AtomicMeasure, IfsSystem, DEFAULT_ATOM_BUDGET};
pub use io::{candidate_to_json, parse_candidate, CandidateFile};
pub use verify::{
    bessel_partial_sum, enumerate_representations, frequency_words, level_k_parseval, orthogonality_witness,
};
