use crate::error::{FxError, Result};
use crate::fxcore::QFormat;

/// `⌈log₂ n⌉` extra integer bits needed so an `n`-term sum cannot overflow.
pub fn headroom_bits(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Exact sum of `terms` values, each bounded by `2^magnitude_bits`.
///
/// The running value is an `i128`; construction fails if the bound plus
/// headroom would not fit, so no intermediate can overflow.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WideAccumulator {
    value: i128,
    headroom_bits: u32,
    magnitude_bits: u32,
}

impl WideAccumulator {
    /// Accumulator for `terms` products of two mantissas of `format`
    /// (scale `2^-2f`).
    pub fn for_products(terms: usize, format: QFormat) -> Result<Self> {
        Self::with_bits(terms, 2 * (format.word_bits() - 1))
    }

    /// Accumulator for `terms` mantissas of `format` (scale `2^-f`).
    pub fn for_values(terms: usize, format: QFormat) -> Result<Self> {
        Self::with_bits(terms, format.word_bits() - 1)
    }

    fn with_bits(terms: usize, magnitude_bits: u32) -> Result<Self> {
        let headroom = headroom_bits(terms);
        let needed = magnitude_bits + headroom + 1;
        if needed > 127 {
            return Err(FxError::AccumulatorOverflow { terms, needed });
        }
        Ok(Self {
            value: 0,
            headroom_bits: headroom,
            magnitude_bits,
        })
    }

    pub fn headroom_bits(&self) -> u32 {
        self.headroom_bits
    }

    /// Total signed width the sum may need.
    pub fn width_bits(&self) -> u32 {
        self.magnitude_bits + self.headroom_bits + 1
    }

    pub fn add(&mut self, v: i128) {
        self.value += v;
    }

    pub fn add_product(&mut self, a: i64, b: i64) {
        self.value += a as i128 * b as i128;
    }

    pub fn value(&self) -> i128 {
        self.value
    }
}

/// Whether an `n`-term dot product of `format` mantissas fits in `i64`.
pub(crate) fn products_fit_i64(n: usize, format: QFormat) -> bool {
    2 * (format.word_bits() - 1) + headroom_bits(n) < 63
}

/// Exact `Σ aᵢbᵢ` of two mantissa slices, at scale `2^-2f`.
pub fn dot_exact(a: &[i64], b: &[i64], format: QFormat) -> Result<i128> {
    assert_eq!(a.len(), b.len(), "dot product of unequal lengths");
    let mut acc = WideAccumulator::for_products(a.len(), format)?;
    if products_fit_i64(a.len(), format) {
        acc.add(dot_i64(a, b) as i128);
    } else {
        for (&x, &y) in a.iter().zip(b) {
            acc.add_product(x, y);
        }
    }
    Ok(acc.value())
}

/// Dot product in `i64`. Callers guarantee the bound from
/// [`products_fit_i64`], so the wrapping ops never actually wrap.
#[inline]
pub(crate) fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    const L: usize = 8;
    let mut lanes = [0i64; L];
    let ac = a.chunks_exact(L);
    let bc = b.chunks_exact(L);
    let (ar, br) = (ac.remainder(), bc.remainder());
    for (x, y) in ac.zip(bc) {
        for k in 0..L {
            lanes[k] = lanes[k].wrapping_add(x[k].wrapping_mul(y[k]));
        }
    }
    let mut s = lanes.iter().fold(0i64, |s, &v| s.wrapping_add(v));
    for (x, y) in ar.iter().zip(br) {
        s = s.wrapping_add(x.wrapping_mul(*y));
    }
    s
}

/// Exact `A · Btᵀ` for row-major `A` (`a_rows × k`) and `Bt`
/// (`b_rows × k`), returned row-major `a_rows × b_rows`.
///
/// Tiled over the shared dimension and over rows of `Bt`; the result is
/// exact integer arithmetic, so tiling cannot change it.
pub(crate) fn matmul_nt_exact(
    a: &[i64],
    a_rows: usize,
    bt: &[i64],
    b_rows: usize,
    k: usize,
    format: QFormat,
) -> Result<Vec<i128>> {
    debug_assert_eq!(a.len(), a_rows * k);
    debug_assert_eq!(bt.len(), b_rows * k);
    // validates the overall width
    WideAccumulator::for_products(k, format)?;
    let mut out = vec![0i128; a_rows * b_rows];
    if k == 0 {
        return Ok(out);
    }
    if !products_fit_i64(k, format) {
        for i in 0..a_rows {
            let ar = &a[i * k..(i + 1) * k];
            for j in 0..b_rows {
                let br = &bt[j * k..(j + 1) * k];
                out[i * b_rows + j] = ar
                    .iter()
                    .zip(br)
                    .map(|(&x, &y)| x as i128 * y as i128)
                    .sum();
            }
        }
        return Ok(out);
    }

    const KB: usize = 512;
    const JB: usize = 32;
    for k0 in (0..k).step_by(KB) {
        let k1 = (k0 + KB).min(k);
        for j0 in (0..b_rows).step_by(JB) {
            let j1 = (j0 + JB).min(b_rows);
            for i in 0..a_rows {
                let ar = &a[i * k + k0..i * k + k1];
                let orow = &mut out[i * b_rows..(i + 1) * b_rows];
                for j in j0..j1 {
                    let br = &bt[j * k + k0..j * k + k1];
                    orow[j] += dot_i64(ar, br) as i128;
                }
            }
        }
    }
    Ok(out)
}
