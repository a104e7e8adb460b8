use crate::error::{FxError, Result};
use crate::fxcore::{QFormat, Rounder};

/// Row-major matrix of mantissas sharing one format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FxMatrix {
    rows: usize,
    cols: usize,
    mantissas: Vec<i64>,
    format: QFormat,
}

impl FxMatrix {
    pub fn zeros(rows: usize, cols: usize, format: QFormat) -> Self {
        Self {
            rows,
            cols,
            mantissas: vec![0; rows * cols],
            format,
        }
    }

    pub fn from_mantissas(
        rows: usize,
        cols: usize,
        mantissas: Vec<i64>,
        format: QFormat,
    ) -> Result<Self> {
        if mantissas.len() != rows * cols {
            return Err(FxError::Shape(format!(
                "{} mantissas for a {rows}x{cols} matrix",
                mantissas.len()
            )));
        }
        if let Some(m) = mantissas
            .iter()
            .find(|&&m| !format.contains_mantissa(m as i128))
        {
            return Err(FxError::InvalidArgument(format!(
                "mantissa {m} outside {format}"
            )));
        }
        Ok(Self {
            rows,
            cols,
            mantissas,
            format,
        })
    }

    /// Quantize real values, one rounding per entry in row-major order.
    pub fn quantize(rows: usize, cols: usize, values: &[f64], rounder: &mut Rounder) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(FxError::Shape(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            mantissas: values.iter().map(|&x| rounder.round_f64(x)).collect(),
            format: rounder.format(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.mantissas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mantissas.is_empty()
    }

    pub fn format(&self) -> QFormat {
        self.format
    }

    pub fn mantissas(&self) -> &[i64] {
        &self.mantissas
    }

    pub fn into_mantissas(self) -> Vec<i64> {
        self.mantissas
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.mantissas[r * self.cols + c]
    }

    pub fn value(&self, r: usize, c: usize) -> f64 {
        self.format.mantissa_to_f64(self.get(r, c))
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.mantissas[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.mantissas
            .iter()
            .map(|&m| self.format.mantissa_to_f64(m))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = vec![0i64; self.mantissas.len()];
        // blocked to stay cache friendly on tall data matrices
        const B: usize = 32;
        for rb in (0..self.rows).step_by(B) {
            for cb in (0..self.cols).step_by(B) {
                for r in rb..(rb + B).min(self.rows) {
                    for c in cb..(cb + B).min(self.cols) {
                        out[c * self.rows + r] = self.mantissas[r * self.cols + c];
                    }
                }
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            mantissas: out,
            format: self.format,
        }
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_range(&self, start: usize, end: usize) -> Self {
        assert!(start <= end && end <= self.cols);
        let width = end - start;
        let mut m = Vec::with_capacity(self.rows * width);
        for r in 0..self.rows {
            m.extend_from_slice(&self.row(r)[start..end]);
        }
        Self {
            rows: self.rows,
            cols: width,
            mantissas: m,
            format: self.format,
        }
    }

    /// Apply an exact mantissa map, then one rounding per entry (identity
    /// on the grid except for RR).
    pub fn map_grid(&self, rounder: &mut Rounder, f: impl Fn(i64) -> i64) -> Self {
        self.check_format(rounder.format());
        Self {
            rows: self.rows,
            cols: self.cols,
            mantissas: self
                .mantissas
                .iter()
                .map(|&m| rounder.round_grid(f(m) as i128))
                .collect(),
            format: self.format,
        }
    }

    /// Apply a real function to each value, then round it into the
    /// rounder's format.
    pub fn map_real(&self, rounder: &mut Rounder, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            mantissas: self
                .mantissas
                .iter()
                .map(|&m| rounder.round_f64(f(self.format.mantissa_to_f64(m))))
                .collect(),
            format: rounder.format(),
        }
    }

    /// `round(alpha · A)` for a real scalar. The product is formed in double
    /// precision in mantissa units and rounded once.
    pub fn scale_real(&self, alpha: f64, rounder: &mut Rounder) -> Self {
        self.check_format(rounder.format());
        Self {
            rows: self.rows,
            cols: self.cols,
            mantissas: self
                .mantissas
                .iter()
                .map(|&m| {
                    rounder.round_scaled(&crate::fxcore::ScaledValue::from_f64_units(
                        alpha * m as f64,
                    ))
                })
                .collect(),
            format: self.format,
        }
    }

    pub(crate) fn check_format(&self, f: QFormat) {
        assert_eq!(
            self.format, f,
            "matrix format {} does not match rounder format {}",
            self.format, f
        );
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, mantissas: Vec<i64>, format: QFormat) -> Self {
        debug_assert_eq!(mantissas.len(), rows * cols);
        Self {
            rows,
            cols,
            mantissas,
            format,
        }
    }
}
