use super::accum::{dot_exact, matmul_nt_exact, WideAccumulator};
use super::FxMatrix;
use crate::error::{FxError, Result};
use crate::fxcore::{FxValue, Rounder};

fn product_denominator(divisor: u64, frac_bits: u32) -> Result<u128> {
    if divisor == 0 {
        return Err(FxError::InvalidArgument("divisor must be positive".into()));
    }
    Ok((divisor as u128) << frac_bits)
}

fn fx(m: i64, rounder: &Rounder) -> FxValue {
    FxValue::from_mantissa(m as i128, rounder.format()).0
}

/// `R(Σ xᵢyᵢ / divisor)` with a single rounding.
///
/// `x` and `y` are mantissas in the rounder's format. The sum is exact and
/// the division is carried into the rounding as an exact fraction.
pub fn rounded_dot(x: &[i64], y: &[i64], divisor: u64, rounder: &mut Rounder) -> Result<FxValue> {
    if x.len() != y.len() {
        return Err(FxError::Shape(format!(
            "dot product of lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    let fmt = rounder.format();
    let den = product_denominator(divisor, fmt.frac_bits())?;
    let s = dot_exact(x, y, fmt)?;
    let m = rounder.round_ratio(s, den);
    Ok(fx(m, rounder))
}

/// `A · B` with one rounding per output entry, drawn in row-major order.
pub fn rounded_matmul(a: &FxMatrix, b: &FxMatrix, rounder: &mut Rounder) -> Result<FxMatrix> {
    if a.cols() != b.rows() {
        return Err(FxError::Shape(format!(
            "matmul {}x{} by {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    rounded_matmul_nt(a, &b.transpose(), 1, rounder)
}

/// `R(A · Btᵀ / divisor)` entrywise, where `bt` holds `B` transposed.
///
/// Taking the right operand transposed lets both operands stream
/// contiguously. Entry `(i, j)` is `rounded_dot(row i of A, row j of Bt)`.
pub fn rounded_matmul_nt(
    a: &FxMatrix,
    bt: &FxMatrix,
    divisor: u64,
    rounder: &mut Rounder,
) -> Result<FxMatrix> {
    if a.cols() != bt.cols() {
        return Err(FxError::Shape(format!(
            "inner dimensions {} and {}",
            a.cols(),
            bt.cols()
        )));
    }
    let fmt = rounder.format();
    check_same_format(a, bt)?;
    a.check_format(fmt);
    let den = product_denominator(divisor, fmt.frac_bits())?;
    let exact = matmul_nt_exact(
        a.mantissas(),
        a.rows(),
        bt.mantissas(),
        bt.rows(),
        a.cols(),
        fmt,
    )?;
    let out = exact.into_iter().map(|s| rounder.round_ratio(s, den)).collect();
    Ok(FxMatrix::from_raw(a.rows(), bt.rows(), out, fmt))
}

/// `R((Σ vᵢ) / n)`: exact sum with `⌈log₂ len⌉` headroom bits, exact
/// division, one rounding.
pub fn rounded_sum_mean(v: &[i64], n: u64, rounder: &mut Rounder) -> Result<FxValue> {
    if n == 0 {
        return Err(FxError::InvalidArgument("mean over zero terms".into()));
    }
    let mut acc = WideAccumulator::for_values(v.len(), rounder.format())?;
    for &m in v {
        acc.add(m as i128);
    }
    let m = rounder.round_ratio(acc.value(), n as u128);
    Ok(fx(m, rounder))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementwiseOp {
    Add,
    Sub,
    Mul,
}

/// Entrywise `A op B` with one rounding per entry.
///
/// `B` may match `A`'s shape, be a column with `A`'s row count (broadcast
/// across columns, as for a bias), or be `1×1`.
pub fn rounded_elementwise(
    op: ElementwiseOp,
    a: &FxMatrix,
    b: &FxMatrix,
    rounder: &mut Rounder,
) -> Result<FxMatrix> {
    check_same_format(a, b)?;
    let fmt = rounder.format();
    a.check_format(fmt);
    let (rows, cols) = a.shape();
    let index: Box<dyn Fn(usize, usize) -> usize> = if b.shape() == a.shape() {
        Box::new(move |r, c| r * cols + c)
    } else if b.shape() == (rows, 1) {
        Box::new(|r, _| r)
    } else if b.shape() == (1, 1) {
        Box::new(|_, _| 0)
    } else {
        return Err(FxError::Shape(format!(
            "cannot combine {}x{} with {}x{}",
            rows,
            cols,
            b.rows(),
            b.cols()
        )));
    };
    let am = a.mantissas();
    let bm = b.mantissas();
    let f = fmt.frac_bits();
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let x = am[r * cols + c] as i128;
            let y = bm[index(r, c)] as i128;
            let m = match op {
                ElementwiseOp::Add => rounder.round_grid(x + y),
                ElementwiseOp::Sub => rounder.round_grid(x - y),
                ElementwiseOp::Mul => rounder.round_ratio(x * y, 1u128 << f),
            };
            out.push(m);
        }
    }
    Ok(FxMatrix::from_raw(rows, cols, out, fmt))
}

fn check_same_format(a: &FxMatrix, b: &FxMatrix) -> Result<()> {
    if a.format() != b.format() {
        return Err(FxError::FormatMismatch {
            left: a.format().to_string(),
            right: b.format().to_string(),
        });
    }
    Ok(())
}
