use std::fmt;

use super::QFormat;

/// A fixed-point number: `mantissa · 2^-frac_bits`, always in range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FxValue {
    mantissa: i64,
    format: QFormat,
}

impl FxValue {
    /// Builds a value from a mantissa, saturating if it is out of range.
    /// The flag reports saturation.
    pub fn from_mantissa(mantissa: i128, format: QFormat) -> (Self, bool) {
        let (m, sat) = format.saturate(mantissa);
        (
            Self {
                mantissa: m,
                format,
            },
            sat,
        )
    }

    pub fn zero(format: QFormat) -> Self {
        Self {
            mantissa: 0,
            format,
        }
    }

    pub fn mantissa(&self) -> i64 {
        self.mantissa
    }

    pub fn format(&self) -> QFormat {
        self.format
    }

    pub fn to_f64(&self) -> f64 {
        self.format.mantissa_to_f64(self.mantissa)
    }
}

impl fmt::Display for FxValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}·2^-{})", self.to_f64(), self.mantissa, self.format.frac_bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_value() {
        let (v, sat) = FxValue::from_mantissa(77, QFormat::Q16_8);
        assert!(!sat);
        assert_eq!(v.to_f64(), 77.0 / 256.0);
    }

    #[test]
    fn saturates() {
        let (v, sat) = FxValue::from_mantissa(1 << 20, QFormat::Q16_8);
        assert!(sat);
        assert_eq!(v.mantissa(), 32767);
    }
}
