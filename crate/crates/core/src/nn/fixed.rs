use super::sigmoid;
use crate::error::{FxError, Result};
use crate::fxcore::{QFormat, Rounder};
use crate::fxlinalg::{
    rounded_elementwise, rounded_matmul_nt, rounded_sum_mean, ElementwiseOp, FxMatrix,
};

/// Weights and biases, all in one format.
///
/// `w1` is `n1 × n0`, `b1` is `n1 × 1`, `w2` is `1 × n1`, `b2` is `1 × 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkParams {
    pub w1: FxMatrix,
    pub b1: FxMatrix,
    pub w2: FxMatrix,
    pub b2: FxMatrix,
}

impl NetworkParams {
    pub fn zeros(n0: usize, n1: usize, format: QFormat) -> Self {
        Self {
            w1: FxMatrix::zeros(n1, n0, format),
            b1: FxMatrix::zeros(n1, 1, format),
            w2: FxMatrix::zeros(1, n1, format),
            b2: FxMatrix::zeros(1, 1, format),
        }
    }

    pub fn format(&self) -> QFormat {
        self.w1.format()
    }

    pub fn inputs(&self) -> usize {
        self.w1.cols()
    }

    pub fn hidden(&self) -> usize {
        self.w1.rows()
    }

    pub fn validate(&self) -> Result<()> {
        let (n1, _) = self.w1.shape();
        let ok = self.b1.shape() == (n1, 1)
            && self.w2.shape() == (1, n1)
            && self.b2.shape() == (1, 1);
        if !ok {
            return Err(FxError::Shape("inconsistent network parameter shapes".into()));
        }
        let f = self.format();
        if [&self.b1, &self.w2, &self.b2].iter().any(|m| m.format() != f) {
            return Err(FxError::FormatMismatch {
                left: f.to_string(),
                right: "mixed".into(),
            });
        }
        Ok(())
    }

    pub fn parameter_count(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }
}

/// Inputs in both layouts plus labels, all quantized.
#[derive(Debug, Clone)]
pub struct FxBatch {
    /// `n0 × m`.
    pub x: FxMatrix,
    /// `m × n0`.
    pub xt: FxMatrix,
    /// `1 × m`, entries exactly 0 or 1.
    pub y: FxMatrix,
    pub labels: Vec<u8>,
}

impl FxBatch {
    /// Quantize `n0 × m` row-major inputs with one rounding per entry.
    pub fn quantize(
        n0: usize,
        pixels: &[f64],
        labels: &[u8],
        rounder: &mut Rounder,
    ) -> Result<Self> {
        let m = labels.len();
        let x = FxMatrix::quantize(n0, m, pixels, rounder)?;
        Ok(Self::from_quantized(x, labels))
    }

    pub fn from_quantized(x: FxMatrix, labels: &[u8]) -> Self {
        let fmt = x.format();
        let one = 1i64 << fmt.frac_bits();
        let y = labels
            .iter()
            .map(|&l| fmt.saturate(if l == 1 { one as i128 } else { 0 }).0)
            .collect();
        let m = labels.len();
        Self {
            xt: x.transpose(),
            x,
            y: FxMatrix::from_raw(1, m, y, fmt),
            labels: labels.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Columns `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Self::from_quantized(self.x.column_range(start, end), &self.labels[start..end])
    }
}

#[derive(Debug, Clone)]
pub struct ForwardCache {
    pub z1: FxMatrix,
    pub a1: FxMatrix,
    pub z2: FxMatrix,
    pub a2: FxMatrix,
}

impl ForwardCache {
    pub fn predictions(&self) -> Vec<f64> {
        self.a2.to_f64()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gradients {
    pub dw1: FxMatrix,
    pub db1: FxMatrix,
    pub dw2: FxMatrix,
    pub db2: FxMatrix,
}

/// Repeat a column across `m` columns and round every copy.
fn broadcast_rounded(col: &FxMatrix, m: usize, rounder: &mut Rounder) -> FxMatrix {
    let rows = col.rows();
    let mut v = Vec::with_capacity(rows * m);
    for r in 0..rows {
        v.extend(std::iter::repeat_n(col.get(r, 0), m));
    }
    FxMatrix::from_raw(rows, m, v, col.format()).map_grid(rounder, |x| x)
}

/// Forward pass with one rounding per operation:
/// `Z = R(R(W·A) + R(b))`, `A1 = R(relu(Z1))`, `A2 = R(sigmoid(Z2))`.
///
/// The sigmoid is evaluated in double precision and then rounded.
pub fn forward(params: &NetworkParams, batch: &FxBatch, rounder: &mut Rounder) -> Result<ForwardCache> {
    let m = batch.len();
    let wx = rounded_matmul_nt(&params.w1, &batch.xt, 1, rounder)?;
    let b1 = broadcast_rounded(&params.b1, m, rounder);
    let z1 = rounded_elementwise(ElementwiseOp::Add, &wx, &b1, rounder)?;
    let a1 = z1.map_grid(rounder, |x| x.max(0));

    let wa = rounded_matmul_nt(&params.w2, &a1.transpose(), 1, rounder)?;
    let b2 = broadcast_rounded(&params.b2, m, rounder);
    let z2 = rounded_elementwise(ElementwiseOp::Add, &wa, &b2, rounder)?;
    let a2 = z2.map_real(rounder, sigmoid);
    Ok(ForwardCache { z1, a1, z2, a2 })
}

/// Gradients of the mean cross-entropy.
///
/// Every product or mean is accumulated exactly and rounded once after the
/// division by `m`; `A2 − Y` and `W2ᵀ(A2 − Y)` are rounded per entry. The
/// ReLU gate selects entries and does not round.
pub fn backward(
    params: &NetworkParams,
    cache: &ForwardCache,
    batch: &FxBatch,
    rounder: &mut Rounder,
) -> Result<Gradients> {
    let m = batch.len() as u64;
    let e = rounded_elementwise(ElementwiseOp::Sub, &cache.a2, &batch.y, rounder)?;
    let dw2 = rounded_matmul_nt(&e, &cache.a1, m, rounder)?;
    let db2 = rounded_sum_mean(e.mantissas(), m, rounder)?;

    // W2ᵀ·E: each entry is a single product
    let da1 = rounded_matmul_nt(&params.w2.transpose(), &e.transpose(), 1, rounder)?;
    let gated: Vec<i64> = da1
        .mantissas()
        .iter()
        .zip(cache.z1.mantissas())
        .map(|(&g, &z)| if z > 0 { g } else { 0 })
        .collect();
    let dz1 = FxMatrix::from_raw(da1.rows(), da1.cols(), gated, da1.format());

    let dw1 = rounded_matmul_nt(&dz1, &batch.x, m, rounder)?;
    let db1: Vec<i64> = (0..dz1.rows())
        .map(|r| rounded_sum_mean(dz1.row(r), m, rounder).map(|v| v.mantissa()))
        .collect::<Result<_>>()?;
    let fmt = rounder.format();
    Ok(Gradients {
        dw1,
        db1: FxMatrix::from_raw(db1.len(), 1, db1, fmt),
        dw2,
        db2: FxMatrix::from_raw(1, 1, vec![db2.mantissa()], fmt),
    })
}

/// `W ← R(W − R(α·∇W))` for every parameter tensor.
pub fn sgd_update(
    params: &NetworkParams,
    grads: &Gradients,
    learning_rate: f64,
    rounder: &mut Rounder,
) -> Result<NetworkParams> {
    let mut step = |w: &FxMatrix, g: &FxMatrix| -> Result<FxMatrix> {
        if w.shape() != g.shape() {
            return Err(FxError::Shape(format!(
                "parameter {:?} vs gradient {:?}",
                w.shape(),
                g.shape()
            )));
        }
        let scaled = g.scale_real(learning_rate, rounder);
        rounded_elementwise(ElementwiseOp::Sub, w, &scaled, rounder)
    };
    Ok(NetworkParams {
        w1: step(&params.w1, &grads.dw1)?,
        b1: step(&params.b1, &grads.db1)?,
        w2: step(&params.w2, &grads.dw2)?,
        b2: step(&params.b2, &grads.db2)?,
    })
}
