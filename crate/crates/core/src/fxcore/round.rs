use super::{FxValue, QFormat, RngStream, RoundingMode};

/// A real number in mantissa units, held exactly as `floor + num/den` with
/// `0 <= num < den`.
///
/// This is `x̃ = θ·x` from the scaling step: once a value is in this form,
/// rounding to the format is rounding to an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScaledValue {
    floor: i128,
    num: u128,
    den: u128,
}

/// Denominators stay below this so that `num + num` and `den - num`
/// comparisons never overflow.
const MAX_DEN: u128 = 1 << 126;

/// Mantissas beyond this are outside every format; used as a saturating
/// stand-in for enormous inputs.
const HUGE: i128 = 1 << 100;

impl ScaledValue {
    /// An exact integer number of mantissa units (a grid point).
    pub fn from_mantissa(m: i128) -> Self {
        Self {
            floor: m,
            num: 0,
            den: 1,
        }
    }

    /// `numerator / denominator` mantissa units, exactly.
    pub fn from_ratio(numerator: i128, denominator: u128) -> Self {
        assert!(denominator > 0, "zero denominator");
        assert!(denominator < MAX_DEN, "denominator too wide");
        let d = denominator as i128;
        Self {
            floor: numerator.div_euclid(d),
            num: numerator.rem_euclid(d) as u128,
            den: denominator,
        }
    }

    /// Scale `x` by `2^frac_bits` without loss.
    ///
    /// Fractional parts finer than `2^-64` mantissa units are folded into a
    /// sticky bit. Every decision threshold the rounding modes use is a
    /// multiple of `2^-53`, so the folding never changes an outcome.
    pub fn from_f64(x: f64, format: QFormat) -> Self {
        Self::from_f64_shifted(x, format.frac_bits() as i32)
    }

    /// `x` taken as a count of mantissa units already (no scaling).
    pub fn from_f64_units(x: f64) -> Self {
        Self::from_f64_shifted(x, 0)
    }

    fn from_f64_shifted(x: f64, shift_bits: i32) -> Self {
        debug_assert!(x.is_finite(), "non-finite input {x}");
        if x.is_nan() || x == 0.0 {
            return Self::from_mantissa(0);
        }
        if x.is_infinite() {
            return Self::from_mantissa(if x > 0.0 { HUGE } else { -HUGE });
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let exp_bits = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (mag, exp) = if exp_bits == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), exp_bits - 1075)
        };
        let exp = exp + shift_bits;

        if exp >= 0 {
            let m = if exp > 60 {
                HUGE
            } else {
                (mag as i128) << exp
            };
            return Self::from_mantissa(if negative { -m } else { m });
        }

        let shift = (-exp) as u32;
        if shift <= 64 {
            let signed = if negative {
                -(mag as i128)
            } else {
                mag as i128
            };
            let floor = signed >> shift;
            let num = (signed - (floor << shift)) as u128;
            return Self {
                floor,
                num,
                den: 1u128 << shift,
            };
        }

        // |x̃| < 2^53 · 2^-65 < 1: the floor is 0 or -1 and only a 64-bit
        // view of the fraction is kept.
        let t = shift - 64;
        let (q, rem_nonzero) = if t >= 64 {
            (0u128, true)
        } else {
            (
                u128::from(mag >> t),
                mag & ((1u64 << t) - 1) != 0,
            )
        };
        let sticky = u128::from(rem_nonzero);
        if negative {
            Self {
                floor: -1,
                num: ((1u128 << 64) - q - sticky) | sticky,
                den: 1 << 64,
            }
        } else {
            Self {
                floor: 0,
                num: q | sticky,
                den: 1 << 64,
            }
        }
    }

    pub fn floor(&self) -> i128 {
        self.floor
    }

    /// Fractional part as `(num, den)`.
    pub fn fraction(&self) -> (u128, u128) {
        (self.num, self.den)
    }

    pub fn is_on_grid(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.floor as f64 + self.num as f64 / self.den as f64
    }

    /// Exact probability of rounding down, as `(numerator, denominator)`.
    pub fn down_probability(&self, mode: RoundingMode) -> (u128, u128) {
        mode.down_probability_exact(self.num, self.den, self.floor & 1 == 0)
    }

    /// The (at most two) outcomes in mantissa units with their exact
    /// probabilities. Zero-probability outcomes are omitted.
    pub fn outcomes(&self, mode: RoundingMode) -> Vec<(i128, (u128, u128))> {
        let (pn, pd) = self.down_probability(mode);
        let mut out = Vec::with_capacity(2);
        if pn > 0 {
            out.push((self.floor, (pn, pd)));
        }
        if pn < pd {
            out.push((self.floor + 1, (pd - pn, pd)));
        }
        out
    }

    /// Picks a neighbour. Draws exactly one uniform for CSR and RR and
    /// none for the deterministic modes.
    fn rounds_up(&self, mode: RoundingMode, rng: &mut RngStream) -> bool {
        match mode {
            RoundingMode::Floor => false,
            RoundingMode::Ceil => self.num != 0,
            RoundingMode::NearestEven => {
                let rest = self.den - self.num;
                self.num > rest || (self.num == rest && self.floor & 1 != 0)
            }
            RoundingMode::Csr => {
                // down iff u < 1 - num/den with u = k / 2^53
                let k = rng.next_bits53();
                !wide_lt(self.den, k, self.den - self.num)
            }
            RoundingMode::Rr => rng.next_bits53() >= 1 << 52,
        }
    }
}

/// `a · k < b · 2^53`, evaluated exactly in 192 bits.
fn wide_lt(a: u128, k: u64, b: u128) -> bool {
    mul_192(a, k) < mul_192(b, 1 << 53)
}

/// Product as big-endian limbs so array comparison is numeric comparison.
fn mul_192(a: u128, b: u64) -> [u64; 3] {
    let lo = (a as u64 as u128) * b as u128;
    let hi = (a >> 64) * b as u128;
    let mid = (lo >> 64) + (hi as u64 as u128);
    let top = (hi >> 64) + (mid >> 64);
    [top as u64, mid as u64, lo as u64]
}

/// Result of one rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rounded {
    pub value: FxValue,
    pub saturated: bool,
}

/// A format, a mode and the stream that feeds it, plus a saturation tally.
///
/// All bulk rounding in the crate goes through one of these so that draw
/// order and saturation accounting live in one place.
#[derive(Debug, Clone)]
pub struct Rounder {
    format: QFormat,
    mode: RoundingMode,
    rng: RngStream,
    saturations: u64,
}

impl Rounder {
    pub fn new(format: QFormat, mode: RoundingMode, rng: RngStream) -> Self {
        Self {
            format,
            mode,
            rng,
            saturations: 0,
        }
    }

    pub fn format(&self) -> QFormat {
        self.format
    }

    pub fn mode(&self) -> RoundingMode {
        self.mode
    }

    pub fn rng(&self) -> &RngStream {
        &self.rng
    }

    pub fn saturations(&self) -> u64 {
        self.saturations
    }

    pub fn take_saturations(&mut self) -> u64 {
        std::mem::take(&mut self.saturations)
    }

    pub fn into_rng(self) -> RngStream {
        self.rng
    }

    /// Round a value already in mantissa units. Returns the saturated
    /// mantissa.
    pub fn round_scaled(&mut self, v: &ScaledValue) -> i64 {
        let up = v.rounds_up(self.mode, &mut self.rng);
        let (m, sat) = self.format.saturate(v.floor + i128::from(up));
        self.saturations += u64::from(sat);
        m
    }

    pub fn round_f64(&mut self, x: f64) -> i64 {
        self.round_scaled(&ScaledValue::from_f64(x, self.format))
    }

    /// Round `numerator / denominator` mantissa units.
    pub fn round_ratio(&mut self, numerator: i128, denominator: u128) -> i64 {
        if denominator == 1 {
            return self.round_grid(numerator);
        }
        // i64 fast path for the common case
        if let (Ok(n), Ok(d)) = (i64::try_from(numerator), i64::try_from(denominator)) {
            let v = ScaledValue {
                floor: n.div_euclid(d) as i128,
                num: n.rem_euclid(d) as u128,
                den: d as u128,
            };
            return self.round_scaled(&v);
        }
        self.round_scaled(&ScaledValue::from_ratio(numerator, denominator))
    }

    /// Round an exact grid point. Identity except under RR, which may move
    /// it up one step; CSR still consumes its draw.
    pub fn round_grid(&mut self, m: i128) -> i64 {
        let up = match self.mode {
            RoundingMode::Floor | RoundingMode::Ceil | RoundingMode::NearestEven => false,
            RoundingMode::Csr => {
                self.rng.next_bits53();
                false
            }
            RoundingMode::Rr => self.rng.next_bits53() >= 1 << 52,
        };
        let (m, sat) = self.format.saturate(m + i128::from(up));
        self.saturations += u64::from(sat);
        m
    }

    pub fn round_value(&mut self, x: f64) -> Rounded {
        let before = self.saturations;
        let m = self.round_f64(x);
        Rounded {
            value: FxValue::from_mantissa(m as i128, self.format).0,
            saturated: self.saturations > before,
        }
    }
}

/// Largest grid point `<= x` (may lie outside the representable range).
pub fn floor_to_grid(x: f64, format: QFormat) -> f64 {
    ScaledValue::from_f64(x, format).floor() as f64 * format.precision()
}

/// Probability that `x` rounds down to `floor_to_grid(x)`.
pub fn probability(mode: RoundingMode, x: f64, format: QFormat) -> f64 {
    let (n, d) = ScaledValue::from_f64(x, format).down_probability(mode);
    n as f64 / d as f64
}

/// One rounding of `x` into `format`, consuming one draw from `rng` for
/// the stochastic modes.
pub fn round_value(x: f64, format: QFormat, mode: RoundingMode, rng: &mut RngStream) -> Rounded {
    let v = ScaledValue::from_f64(x, format);
    let up = v.rounds_up(mode, rng);
    let (value, saturated) = FxValue::from_mantissa(v.floor + i128::from(up), format);
    Rounded { value, saturated }
}

/// Mean of the rounded result, `⌊x⌋p + (⌊x⌋ + δ)(1 − p)`.
pub fn expected_value(x: f64, format: QFormat, mode: RoundingMode) -> f64 {
    let v = ScaledValue::from_f64(x, format);
    let (n, d) = v.down_probability(mode);
    let up = (d - n) as f64 / d as f64;
    (v.floor() as f64 + up) * format.precision()
}

/// Mean rounding error `μ − x`.
pub fn bias(x: f64, format: QFormat, mode: RoundingMode) -> f64 {
    let v = ScaledValue::from_f64(x, format);
    let (n, d) = v.down_probability(mode);
    // μ − x = δ·((1 − p) − frac), computed in mantissa units first
    let up = (d - n) as f64 / d as f64;
    let frac = v.num as f64 / v.den as f64;
    (up - frac) * format.precision()
}

/// `δ² p (1 − p)`.
pub fn variance_of(p: f64, format: QFormat) -> f64 {
    let d = format.precision();
    d * d * p * (1.0 - p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(word: u32, frac: u32) -> QFormat {
        QFormat::new(word, frac).unwrap()
    }

    #[test]
    fn floor_examples() {
        assert_eq!(floor_to_grid(0.3, q(16, 2)), 0.25);
        assert_eq!(floor_to_grid(-0.1, q(16, 2)), -0.25);
        assert_eq!(floor_to_grid(0.5, q(16, 1)), 0.5);
        assert_eq!(floor_to_grid(-1e-300, q(16, 8)), -1.0 / 256.0);
        assert_eq!(floor_to_grid(1e-300, q(16, 8)), 0.0);
    }

    #[test]
    fn probability_examples() {
        let unit = q(16, 0);
        assert_eq!(probability(RoundingMode::Csr, 0.75, unit), 0.25);
        assert_eq!(probability(RoundingMode::Rr, 0.123, unit), 0.5);
        assert_eq!(probability(RoundingMode::NearestEven, 0.5, unit), 1.0);
        assert_eq!(probability(RoundingMode::NearestEven, 1.5, unit), 0.0);
        assert_eq!(probability(RoundingMode::Floor, 0.9, unit), 1.0);
        assert_eq!(probability(RoundingMode::Ceil, 0.1, unit), 0.0);
        assert_eq!(probability(RoundingMode::Ceil, 2.0, unit), 1.0);
    }

    #[test]
    fn analytic_examples() {
        let unit = q(16, 0);
        assert!((expected_value(0.3, unit, RoundingMode::Csr) - 0.3).abs() < 1e-15);
        assert_eq!(expected_value(0.3, unit, RoundingMode::Rr), 0.5);
        assert_eq!(expected_value(0.25, unit, RoundingMode::NearestEven), 0.0);
        assert!(bias(0.3, unit, RoundingMode::Csr).abs() < 1e-15);
        assert_eq!(bias(0.0, unit, RoundingMode::Rr), 0.5);
        assert_eq!(bias(0.5, unit, RoundingMode::Rr), 0.0);
        assert_eq!(variance_of(0.5, unit), 0.25);
        assert_eq!(variance_of(1.0, unit), 0.0);
        let v = variance_of(0.2, q(16, 8));
        assert!((v - 0.16 / 65536.0).abs() < 1e-20);
    }

    #[test]
    fn scaled_value_is_exact() {
        let v = ScaledValue::from_f64(0.3, QFormat::Q16_8);
        assert_eq!(v.floor(), 76);
        let (n, d) = v.fraction();
        // 0.3 as a double is slightly below 0.3; the fraction is that double's
        // exact tail, not 0.8.
        assert!((n as f64 / d as f64 - 0.8).abs() < 1e-12);
        let w = ScaledValue::from_f64(-0.75, q(16, 0));
        assert_eq!(w.floor(), -1);
        let (n, d) = w.fraction();
        assert_eq!(n * 4, d);
    }

    #[test]
    fn tiny_values_keep_sign_information() {
        let fmt = QFormat::Q16_8;
        let pos = ScaledValue::from_f64(1e-200, fmt);
        assert_eq!(pos.floor(), 0);
        assert!(pos.fraction().0 > 0);
        let neg = ScaledValue::from_f64(-1e-200, fmt);
        assert_eq!(neg.floor(), -1);
        let (n, d) = neg.fraction();
        assert!(n < d && n > d / 2);
        // tiny positives never round up under RN or CSR
        let mut rng = RngStream::new(1);
        for _ in 0..1000 {
            let r = round_value(1e-200, fmt, RoundingMode::Csr, &mut rng);
            assert_eq!(r.value.mantissa(), 0);
        }
    }

    #[test]
    fn ratio_matches_f64() {
        let a = ScaledValue::from_ratio(-7, 4);
        assert_eq!(a.floor(), -2);
        assert_eq!(a.fraction(), (1, 4));
        let b = ScaledValue::from_f64(-7.0 / 4.0, q(16, 0));
        assert_eq!(a.floor(), b.floor());
        let (an, ad) = a.fraction();
        let (bn, bd) = b.fraction();
        assert_eq!(an * bd, bn * ad);
    }

    #[test]
    fn round_value_examples() {
        let fmt = QFormat::Q16_8;
        let mut rng = RngStream::new(3);
        for _ in 0..100 {
            let r = round_value(0.3, fmt, RoundingMode::NearestEven, &mut rng);
            assert_eq!(r.value.mantissa(), 77);
        }
        assert_eq!(rng.draws(), 0);
        let mut seen = [0u32; 2];
        for _ in 0..10_000 {
            let r = round_value(0.3, fmt, RoundingMode::Csr, &mut rng);
            let m = r.value.mantissa();
            assert!(m == 76 || m == 77);
            seen[(m - 76) as usize] += 1;
        }
        assert_eq!(rng.draws(), 10_000);
        let frac_up = seen[1] as f64 / 10_000.0;
        assert!((frac_up - 0.8).abs() < 0.02, "{frac_up}");
        let mut zero_seen = [0u32; 2];
        for _ in 0..10_000 {
            let m = round_value(0.0, fmt, RoundingMode::Rr, &mut rng).value.mantissa();
            assert!(m == 0 || m == 1);
            zero_seen[m as usize] += 1;
        }
        assert!((zero_seen[0] as f64 / 10_000.0 - 0.5).abs() < 0.02);
    }

    #[test]
    fn saturation_is_flagged() {
        let fmt = QFormat::Q16_8;
        let mut rng = RngStream::new(0);
        let r = round_value(1000.0, fmt, RoundingMode::NearestEven, &mut rng);
        assert!(r.saturated);
        assert_eq!(r.value.mantissa(), 32767);
        let r = round_value(-1000.0, fmt, RoundingMode::NearestEven, &mut rng);
        assert!(r.saturated);
        assert_eq!(r.value.mantissa(), -32768);
        // RR at the top of the range may try to step past it
        let mut rounder = Rounder::new(fmt, RoundingMode::Rr, RngStream::new(5));
        for _ in 0..64 {
            let m = rounder.round_f64(fmt.max_value());
            assert_eq!(m, 32767);
        }
        assert!(rounder.saturations() > 0);
    }

    #[test]
    fn csr_threshold_is_exact() {
        // p(x) = 1/2 at a quarter-cell offset of 1/2; the decision must split
        // the 53-bit uniform exactly in half.
        let v = ScaledValue::from_ratio(1, 2);
        assert!(wide_lt(v.den, (1 << 52) - 1, v.den - v.num));
        assert!(!wide_lt(v.den, 1 << 52, v.den - v.num));
    }

    #[test]
    fn mul_192_carries() {
        assert_eq!(mul_192(u128::MAX, u64::MAX), [u64::MAX - 1, u64::MAX, 1]);
        assert_eq!(mul_192(1 << 100, 1 << 53), [1 << 25, 0, 0]);
    }

    #[test]
    fn outcomes_sum_to_one() {
        let v = ScaledValue::from_ratio(3, 8);
        for mode in RoundingMode::ALL {
            let outs = v.outcomes(mode);
            let total: f64 = outs.iter().map(|(_, (n, d))| *n as f64 / *d as f64).sum();
            assert_eq!(total, 1.0);
        }
        assert_eq!(ScaledValue::from_mantissa(4).outcomes(RoundingMode::Csr).len(), 1);
        assert_eq!(ScaledValue::from_mantissa(4).outcomes(RoundingMode::Rr).len(), 2);
    }
}
