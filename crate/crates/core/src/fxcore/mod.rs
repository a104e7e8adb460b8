//! Fixed-point representation and rounding machinery.

mod format;
mod mode;
mod rng;
mod round;
mod stats;
mod value;

pub use format::QFormat;
pub use mode::{parse_mode_list, RoundingMode};
pub use rng::RngStream;
pub use round::{
    bias, expected_value, floor_to_grid, probability, round_value, variance_of, Rounded, Rounder,
    ScaledValue,
};
pub use stats::RoundingStats;
pub use value::FxValue;
