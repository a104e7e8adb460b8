//! Simulated fixed-point arithmetic with pluggable rounding.
//!
//! Numbers are integer mantissas on a `2^-frac_bits` grid. Every rounding
//! goes through one primitive that scales to mantissa units, picks the
//! lower or upper grid neighbour according to a [`RoundingMode`], and
//! saturates to the format range. On top of that sit exact-accumulation
//! linear algebra ([`fxlinalg`]), a two-layer binary classifier trained
//! entirely in fixed point ([`nn`]), MNIST loading ([`data`]) and the
//! experiment drivers used by the `fxround` CLI ([`experiments`]).

pub mod data;
pub mod error;
pub mod experiments;
pub mod fxcore;
pub mod fxlinalg;
pub mod nn;

pub use error::{FxError, Result};
pub use fxcore::{
    bias, expected_value, floor_to_grid, probability, round_value, variance_of, FxValue, QFormat,
    Rounded, Rounder, RoundingMode, RoundingStats, RngStream, ScaledValue,
};
pub use fxlinalg::FxMatrix;
