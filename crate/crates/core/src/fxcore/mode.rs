use std::fmt;
use std::str::FromStr;

use crate::error::FxError;

/// How a value between two grid points picks a neighbour.
///
/// All modes fit the scheme "round down to `⌊x⌋` with probability `p(x)`,
/// otherwise up to `⌊x⌋ + δ`"; the variants differ only in `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RoundingMode {
    /// Toward −∞, `p = 1`.
    Floor,
    /// Toward +∞, `p = 0` off the grid.
    Ceil,
    /// Round to nearest, ties to the even mantissa.
    NearestEven,
    /// Conventional stochastic rounding, `p = 1 − (x − ⌊x⌋)/δ`.
    Csr,
    /// Random rounding, `p = 1/2` everywhere including on the grid.
    Rr,
}

impl RoundingMode {
    pub const ALL: [RoundingMode; 5] = [
        RoundingMode::Floor,
        RoundingMode::Ceil,
        RoundingMode::NearestEven,
        RoundingMode::Csr,
        RoundingMode::Rr,
    ];

    pub fn is_stochastic(self) -> bool {
        matches!(self, RoundingMode::Csr | RoundingMode::Rr)
    }

    /// Short lowercase tag used on the command line and in file names.
    pub fn tag(self) -> &'static str {
        match self {
            RoundingMode::Floor => "floor",
            RoundingMode::Ceil => "ceil",
            RoundingMode::NearestEven => "rn",
            RoundingMode::Csr => "csr",
            RoundingMode::Rr => "rr",
        }
    }

    /// Probability of rounding down for a value whose fractional part in
    /// mantissa units is `num / den` (`0 <= num < den`) and whose floor
    /// mantissa has the given parity.
    ///
    /// Returned as an exact fraction `(numerator, denominator)`.
    pub fn down_probability_exact(self, num: u128, den: u128, floor_is_even: bool) -> (u128, u128) {
        debug_assert!(den > 0 && num < den);
        match self {
            RoundingMode::Floor => (1, 1),
            RoundingMode::Ceil => (u128::from(num == 0), 1),
            RoundingMode::NearestEven => {
                let twice = num * 2;
                let down = twice < den || (twice == den && floor_is_even);
                (u128::from(down), 1)
            }
            RoundingMode::Csr => (den - num, den),
            RoundingMode::Rr => (1, 2),
        }
    }
}

impl fmt::Display for RoundingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for RoundingMode {
    type Err = FxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "floor" | "rd" => Ok(RoundingMode::Floor),
            "ceil" | "ru" => Ok(RoundingMode::Ceil),
            "rn" | "nearest" | "nearesteven" | "rne" => Ok(RoundingMode::NearestEven),
            "csr" | "sr" => Ok(RoundingMode::Csr),
            "rr" | "random" => Ok(RoundingMode::Rr),
            other => Err(FxError::Parse(format!("unknown rounding mode '{other}'"))),
        }
    }
}

/// Parse a comma-separated list such as `rn,csr,rr`.
pub fn parse_mode_list(s: &str) -> Result<Vec<RoundingMode>, FxError> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}
