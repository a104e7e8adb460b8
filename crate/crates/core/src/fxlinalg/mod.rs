//! Rounding-aware linear algebra.
//!
//! Products of two mantissas are exact at scale `2^-2f`; sums of them are
//! kept exactly in a wide integer and rounded once at the end, after any
//! division. Elementwise operations round once per entry.

mod accum;
mod matrix;
mod ops;

pub use accum::{dot_exact, headroom_bits, WideAccumulator};
pub use matrix::FxMatrix;
pub use ops::{
    rounded_dot, rounded_elementwise, rounded_matmul, rounded_matmul_nt, rounded_sum_mean,
    ElementwiseOp,
};
