use fxround::error::{FxError, Result};
use fxround::experiments::{run_dotprod, DotProdConfig};
use fxround::fxcore::ScaledValue;
use fxround::{bias, expected_value, probability, variance_of, QFormat, Rounder, RoundingMode, RngStream};

const WORD_BITS: u32 = 16;
const MAX_DRAWS: u32 = 10_000_000;

fn format(frac_bits: u32) -> Result<QFormat> {
    QFormat::new(WORD_BITS, frac_bits)
}

pub fn rounding_curves(mode: &str, frac_bits: u32, lo: f64, hi: f64, samples: usize) -> Result<Vec<f64>> {
    let mode: RoundingMode = mode.parse()?;
    let fmt = format(frac_bits)?;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) || samples < 2 {
        return Err(FxError::InvalidArgument("need lo < hi and at least two samples".into()));
    }
    let mut out = Vec::with_capacity(samples * 5);
    for i in 0..samples {
        let x = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let p = probability(mode, x, fmt);
        out.extend([x, p, expected_value(x, fmt, mode), bias(x, fmt, mode), variance_of(p, fmt)]);
    }
    Ok(out)
}

pub fn dotprod_study(n: usize, n_max: usize, frac_bits: u32, y_max: f64, seed: u64) -> Result<Vec<f64>> {
    let mut cfg = DotProdConfig::new(n, n_max);
    cfg.format = format(frac_bits)?;
    cfg.y_max = y_max;
    cfg.seed = seed;
    Ok(run_dotprod(&cfg)?
        .into_iter()
        .flat_map(|m| [m.stats.abs_bias_sum, m.stats.zero_count as f64, m.stats.saturations as f64])
        .collect())
}

pub fn outcome_histogram(x: f64, frac_bits: u32, mode: &str, draws: u32, seed: u64) -> Result<Vec<f64>> {
    let mode: RoundingMode = mode.parse()?;
    let fmt = format(frac_bits)?;
    if !x.is_finite() || x.abs() > fmt.max_value() {
        return Err(FxError::InvalidArgument(format!("{x} is outside the {fmt} range")));
    }
    if draws == 0 || draws > MAX_DRAWS {
        return Err(FxError::InvalidArgument(format!("draws must be in 1..={MAX_DRAWS}")));
    }
    let v = ScaledValue::from_f64(x, fmt);
    let outcomes = v.outcomes(mode);
    let mut counts = vec![0u32; outcomes.len()];
    let mut r = Rounder::new(fmt, mode, RngStream::new(seed));
    for _ in 0..draws {
        let m = r.round_scaled(&v) as i128;
        if let Some(k) = outcomes.iter().position(|&(o, _)| o == m) {
            counts[k] += 1;
        }
    }
    Ok(outcomes
        .iter()
        .zip(counts)
        .flat_map(|(&(m, (num, den)), c)| {
            [m as f64 * fmt.precision(), c as f64 / draws as f64, num as f64 / den as f64]
        })
        .collect())
}
