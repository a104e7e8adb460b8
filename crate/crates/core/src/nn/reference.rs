use super::{bce_loss, sigmoid};
use crate::fxlinalg::FxMatrix;

/// Dense row-major `f64` matrix for the unrounded path.
#[derive(Debug, Clone, PartialEq)]
pub struct RefMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl RefMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data does not match {rows}x{cols}");
        Self { rows, cols, data }
    }

    pub fn from_fx(m: &FxMatrix) -> Self {
        Self::from_vec(m.rows(), m.cols(), m.to_f64())
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn transpose(&self) -> Self {
        let mut out = vec![0.0; self.data.len()];
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        Self::from_vec(self.cols, self.rows, out)
    }

    /// `self · btᵀ`, where `bt` is the right operand transposed.
    pub fn matmul_nt(&self, bt: &RefMatrix) -> RefMatrix {
        assert_eq!(self.cols, bt.cols, "inner dimensions differ");
        let mut out = vec![0.0; self.rows * bt.rows];
        const JB: usize = 32;
        for j0 in (0..bt.rows).step_by(JB) {
            let j1 = (j0 + JB).min(bt.rows);
            for i in 0..self.rows {
                let a = self.row(i);
                for j in j0..j1 {
                    out[i * bt.rows + j] = dot(a, bt.row(j));
                }
            }
        }
        RefMatrix::from_vec(self.rows, bt.rows, out)
    }
}

/// Dot product with a fixed 8-lane summation order so results do not depend
/// on how the compiler vectorizes.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    const L: usize = 8;
    let mut lanes = [0.0f64; L];
    let ac = a.chunks_exact(L);
    let bc = b.chunks_exact(L);
    let (ar, br) = (ac.remainder(), bc.remainder());
    for (x, y) in ac.zip(bc) {
        for k in 0..L {
            lanes[k] += x[k] * y[k];
        }
    }
    let mut s = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]))
        + ((lanes[4] + lanes[5]) + (lanes[6] + lanes[7]));
    for (x, y) in ar.iter().zip(br) {
        s += x * y;
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefParams {
    pub w1: RefMatrix,
    pub b1: RefMatrix,
    pub w2: RefMatrix,
    pub b2: RefMatrix,
}

#[derive(Debug, Clone)]
pub struct RefCache {
    pub z1: RefMatrix,
    pub a1: RefMatrix,
    pub z2: RefMatrix,
    pub a2: RefMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefGradients {
    pub dw1: RefMatrix,
    pub db1: RefMatrix,
    pub dw2: RefMatrix,
    pub db2: RefMatrix,
}

impl RefParams {
    pub fn zeros(n0: usize, n1: usize) -> Self {
        Self {
            w1: RefMatrix::zeros(n1, n0),
            b1: RefMatrix::zeros(n1, 1),
            w2: RefMatrix::zeros(1, n1),
            b2: RefMatrix::zeros(1, 1),
        }
    }

    pub fn from_fixed(p: &super::NetworkParams) -> Self {
        Self {
            w1: RefMatrix::from_fx(&p.w1),
            b1: RefMatrix::from_fx(&p.b1),
            w2: RefMatrix::from_fx(&p.w2),
            b2: RefMatrix::from_fx(&p.b2),
        }
    }

    /// Forward pass; `xt` is the `m × n0` input (samples as rows).
    pub fn forward(&self, xt: &RefMatrix) -> RefCache {
        let m = xt.rows;
        let mut z1 = self.w1.matmul_nt(xt);
        for r in 0..z1.rows {
            let b = self.b1.data[r];
            z1.data[r * m..(r + 1) * m].iter_mut().for_each(|v| *v += b);
        }
        let a1 = RefMatrix::from_vec(z1.rows, m, z1.data.iter().map(|&v| v.max(0.0)).collect());
        let mut z2 = self.w2.matmul_nt(&a1.transpose());
        let b2 = self.b2.data[0];
        z2.data.iter_mut().for_each(|v| *v += b2);
        let a2 = RefMatrix::from_vec(1, m, z2.data.iter().map(|&v| sigmoid(v)).collect());
        RefCache { z1, a1, z2, a2 }
    }

    /// Gradients of the mean cross-entropy; `x` is `n0 × m`.
    pub fn backward(&self, cache: &RefCache, x: &RefMatrix, y: &[u8]) -> RefGradients {
        let m = y.len();
        let mf = m as f64;
        let e: Vec<f64> = cache
            .a2
            .data
            .iter()
            .zip(y)
            .map(|(&a, &t)| a - t as f64)
            .collect();
        let e = RefMatrix::from_vec(1, m, e);
        let mut dw2 = e.matmul_nt(&cache.a1);
        dw2.data.iter_mut().for_each(|v| *v /= mf);
        let db2 = RefMatrix::from_vec(1, 1, vec![e.data.iter().sum::<f64>() / mf]);

        let n1 = self.w1.rows;
        let mut dz1 = RefMatrix::zeros(n1, m);
        for i in 0..n1 {
            let w = self.w2.data[i];
            for j in 0..m {
                if cache.z1.data[i * m + j] > 0.0 {
                    dz1.data[i * m + j] = w * e.data[j];
                }
            }
        }
        let mut dw1 = dz1.matmul_nt(x);
        dw1.data.iter_mut().for_each(|v| *v /= mf);
        let db1 = RefMatrix::from_vec(
            n1,
            1,
            (0..n1).map(|i| dz1.row(i).iter().sum::<f64>() / mf).collect(),
        );
        RefGradients { dw1, db1, dw2, db2 }
    }

    pub fn update(&mut self, g: &RefGradients, learning_rate: f64) {
        let step = |w: &mut RefMatrix, g: &RefMatrix| {
            w.data
                .iter_mut()
                .zip(&g.data)
                .for_each(|(w, g)| *w -= learning_rate * g);
        };
        step(&mut self.w1, &g.dw1);
        step(&mut self.b1, &g.db1);
        step(&mut self.w2, &g.dw2);
        step(&mut self.b2, &g.db2);
    }

    /// Mean cross-entropy on `xt` (samples as rows).
    pub fn loss(&self, xt: &RefMatrix, y: &[u8]) -> f64 {
        bce_loss(&self.forward(xt).a2.data, y)
    }

    /// All parameters as mutable slices in a fixed order (w1, b1, w2, b2).
    pub fn tensors_mut(&mut self) -> [&mut RefMatrix; 4] {
        [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2]
    }
}
