use std::fmt;
use std::str::FromStr;

use crate::error::{FxError, Result};

/// Signed fixed-point layout: `word_bits` total bits (one of them the sign)
/// of which `frac_bits` are fractional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QFormat {
    word_bits: u32,
    frac_bits: u32,
}

impl QFormat {
    pub fn new(word_bits: u32, frac_bits: u32) -> Result<Self> {
        if !(2..=64).contains(&word_bits) {
            return Err(FxError::InvalidFormat(format!(
                "word_bits must be in 2..=64, got {word_bits}"
            )));
        }
        if frac_bits >= word_bits {
            return Err(FxError::InvalidFormat(format!(
                "frac_bits must be below word_bits ({word_bits}), got {frac_bits}"
            )));
        }
        Ok(Self {
            word_bits,
            frac_bits,
        })
    }

    /// 16-bit word, 8 fractional bits.
    pub const Q16_8: QFormat = QFormat {
        word_bits: 16,
        frac_bits: 8,
    };

    /// 16-bit word, 10 fractional bits.
    pub const Q16_10: QFormat = QFormat {
        word_bits: 16,
        frac_bits: 10,
    };

    pub const fn word_bits(&self) -> u32 {
        self.word_bits
    }

    pub const fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub const fn int_bits(&self) -> u32 {
        self.word_bits - self.frac_bits - 1
    }

    /// Grid spacing `δ = 2^-frac_bits`.
    pub fn precision(&self) -> f64 {
        (-(self.frac_bits as f64)).exp2()
    }

    /// Scale factor `θ = 2^frac_bits` mapping values to mantissa units.
    pub fn scale(&self) -> f64 {
        (self.frac_bits as f64).exp2()
    }

    pub const fn max_mantissa(&self) -> i64 {
        if self.word_bits == 64 {
            i64::MAX
        } else {
            (1i64 << (self.word_bits - 1)) - 1
        }
    }

    pub const fn min_mantissa(&self) -> i64 {
        if self.word_bits == 64 {
            i64::MIN
        } else {
            -(1i64 << (self.word_bits - 1))
        }
    }

    pub fn max_value(&self) -> f64 {
        self.max_mantissa() as f64 * self.precision()
    }

    pub fn min_value(&self) -> f64 {
        self.min_mantissa() as f64 * self.precision()
    }

    pub fn contains_mantissa(&self, m: i128) -> bool {
        m >= self.min_mantissa() as i128 && m <= self.max_mantissa() as i128
    }

    /// Clamp a wide mantissa into range. The flag reports whether clamping
    /// happened.
    pub fn saturate(&self, m: i128) -> (i64, bool) {
        if m > self.max_mantissa() as i128 {
            (self.max_mantissa(), true)
        } else if m < self.min_mantissa() as i128 {
            (self.min_mantissa(), true)
        } else {
            (m as i64, false)
        }
    }

    pub fn mantissa_to_f64(&self, m: i64) -> f64 {
        m as f64 * self.precision()
    }
}

impl fmt::Display for QFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}W{}F", self.word_bits, self.frac_bits)
    }
}

impl FromStr for QFormat {
    type Err = FxError;

    /// Accepts `16W8F` or `16.8` (word, fraction).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        let parts: Option<(&str, &str)> = if let Some(stripped) = t.strip_suffix('F') {
            stripped.split_once('W')
        } else {
            t.split_once('.')
        };
        let (w, f) = parts.ok_or_else(|| FxError::Parse(format!("bad format '{s}'")))?;
        let w = w
            .parse()
            .map_err(|_| FxError::Parse(format!("bad word bits in '{s}'")))?;
        let f = f
            .parse()
            .map_err(|_| FxError::Parse(format!("bad fractional bits in '{s}'")))?;
        QFormat::new(w, f)
    }
}
