//! Exact rational, integer-matrix and cyclotomic primitives.

pub mod cyclo;
pub mod matrix;
pub mod rational;

pub use cyclo::CycloExpression;
pub use matrix::{IntMatrix, RatMatrix};
pub use rational::{IntVec, RatVec, Rational};
