//! Rounded dot products of random vectors: how much each rounding mode
//! biases the result and how often it collapses to zero.

use std::io::Write;

use crate::error::{FxError, Result};
use crate::fxcore::{QFormat, Rounder, RoundingMode, RoundingStats, RngStream};
use crate::fxlinalg::rounded_dot;

#[derive(Debug, Clone, PartialEq)]
pub struct DotProdConfig {
    /// Vector length `N`; also the divisor.
    pub n: usize,
    /// Number of independent dot products.
    pub n_max: usize,
    pub format: QFormat,
    pub modes: Vec<RoundingMode>,
    pub seed: u64,
    /// `y` is drawn from `[0, y_max]`; `x` from `[−δ/2, δ/2]`.
    pub y_max: f64,
}

impl DotProdConfig {
    pub fn new(n: usize, n_max: usize) -> Self {
        Self {
            n,
            n_max,
            format: QFormat::Q16_8,
            modes: vec![RoundingMode::NearestEven, RoundingMode::Csr, RoundingMode::Rr],
            seed: 42,
            y_max: 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n_max == 0 {
            return Err(FxError::InvalidArgument("n and n_max must be positive".into()));
        }
        if self.modes.is_empty() {
            return Err(FxError::InvalidArgument("no rounding modes given".into()));
        }
        if !(self.y_max > 0.0 && self.y_max <= self.format.max_value()) {
            return Err(FxError::InvalidArgument(format!(
                "y_max {} must lie in (0, {}] for {}",
                self.y_max,
                self.format.max_value(),
                self.format
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeStats {
    pub mode: RoundingMode,
    pub stats: RoundingStats,
}

/// Stream id for a mode's rounding draws. Fixed per mode so that adding or
/// removing modes from a run leaves the others unchanged.
fn mode_stream(mode: RoundingMode) -> u64 {
    100 + RoundingMode::ALL.iter().position(|&m| m == mode).unwrap() as u64
}

/// Every mode sees the same `x`, `y` vectors in each trial. Inputs are
/// quantized under the mode being measured; the error is taken against the
/// unquantized `x·y / N`.
pub fn run_dotprod(cfg: &DotProdConfig) -> Result<Vec<ModeStats>> {
    cfg.validate()?;
    let fmt = cfg.format;
    let half = fmt.precision() / 2.0;
    let mut data = RngStream::with_stream(cfg.seed, 0);
    let mut rounders: Vec<Rounder> = cfg
        .modes
        .iter()
        .map(|&m| Rounder::new(fmt, m, RngStream::with_stream(cfg.seed, mode_stream(m))))
        .collect();
    let mut stats = vec![RoundingStats::default(); cfg.modes.len()];
    let (mut x, mut y) = (vec![0.0; cfg.n], vec![0.0; cfg.n]);
    let (mut qx, mut qy) = (vec![0i64; cfg.n], vec![0i64; cfg.n]);
    for _ in 0..cfg.n_max {
        for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
            *xi = data.uniform_in(-half, half);
            *yi = data.uniform_in(0.0, cfg.y_max);
        }
        let exact = x.iter().zip(&y).map(|(a, b)| a * b).sum::<f64>() / cfg.n as f64;
        for (r, st) in rounders.iter_mut().zip(stats.iter_mut()) {
            for i in 0..cfg.n {
                qx[i] = r.round_f64(x[i]);
                qy[i] = r.round_f64(y[i]);
            }
            let before = r.saturations();
            let v = rounded_dot(&qx, &qy, cfg.n as u64, r)?;
            st.record(exact, v.to_f64(), r.saturations() > before);
        }
    }
    Ok(cfg
        .modes
        .iter()
        .zip(stats)
        .map(|(&mode, stats)| ModeStats { mode, stats })
        .collect())
}

/// One row per seed and mode, followed by per-mode means when more than
/// one seed was run.
#[derive(Debug, Clone, PartialEq)]
pub struct DotProdRow {
    pub seed: Option<u64>,
    pub n: usize,
    pub n_max: usize,
    pub mode: RoundingMode,
    pub abs_bias: f64,
    pub zeros: f64,
    pub saturations: f64,
}

/// Runs every `(n, n_max)` combination for `repeats` consecutive seeds.
pub fn dotprod_table(
    base: &DotProdConfig,
    ns: &[usize],
    n_maxes: &[usize],
    repeats: usize,
) -> Result<Vec<DotProdRow>> {
    if repeats == 0 {
        return Err(FxError::InvalidArgument("repeats must be positive".into()));
    }
    let mut rows = Vec::new();
    for &n in ns {
        for &n_max in n_maxes {
            let mut sums = vec![(0.0, 0.0, 0.0); base.modes.len()];
            for k in 0..repeats as u64 {
                let cfg = DotProdConfig {
                    n,
                    n_max,
                    seed: base.seed.wrapping_add(k),
                    ..base.clone()
                };
                for (ms, sum) in run_dotprod(&cfg)?.into_iter().zip(sums.iter_mut()) {
                    sum.0 += ms.stats.abs_bias_sum;
                    sum.1 += ms.stats.zero_count as f64;
                    sum.2 += ms.stats.saturations as f64;
                    rows.push(DotProdRow {
                        seed: Some(cfg.seed),
                        n,
                        n_max,
                        mode: ms.mode,
                        abs_bias: ms.stats.abs_bias_sum,
                        zeros: ms.stats.zero_count as f64,
                        saturations: ms.stats.saturations as f64,
                    });
                }
            }
            if repeats > 1 {
                let r = repeats as f64;
                for (&mode, s) in base.modes.iter().zip(sums) {
                    rows.push(DotProdRow {
                        seed: None,
                        n,
                        n_max,
                        mode,
                        abs_bias: s.0 / r,
                        zeros: s.1 / r,
                        saturations: s.2 / r,
                    });
                }
            }
        }
    }
    Ok(rows)
}

pub fn write_dotprod_csv<W: Write>(out: W, rows: &[DotProdRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["seed", "n", "n_max", "mode", "abs_bias", "zeros", "saturations"])?;
    for r in rows {
        let seed = r.seed.map_or_else(|| "mean".to_string(), |s| s.to_string());
        w.write_record([
            seed,
            r.n.to_string(),
            r.n_max.to_string(),
            r.mode.tag().to_string(),
            format!("{:.6}", r.abs_bias),
            r.zeros.to_string(),
            r.saturations.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
