use std::io::Write;

use crate::data::Split;
use crate::error::Result;
use crate::nn::TrainedParams;

pub const HISTOGRAM_BINS: usize = 50;

/// Counts per equal-width bin over `[0, 1]`; 1.0 lands in the last bin and
/// values outside the interval are clamped into the end bins.
pub fn prediction_histogram(predictions: &[f64], bins: usize) -> Vec<u64> {
    assert!(bins > 0);
    let mut counts = vec![0u64; bins];
    for &a in predictions {
        let k = ((a * bins as f64).floor().max(0.0) as usize).min(bins - 1);
        counts[k] += 1;
    }
    counts
}

pub fn write_histogram_csv<W: Write>(out: W, counts: &[u64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["bin_lo", "bin_hi", "count"])?;
    let n = counts.len() as f64;
    for (i, c) in counts.iter().enumerate() {
        w.write_record([
            format!("{}", i as f64 / n),
            format!("{}", (i + 1) as f64 / n),
            c.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Histogram of the network's outputs on `split`, written as CSV.
pub fn emit_prediction_histogram<W: Write>(
    params: &TrainedParams,
    split: &Split,
    seed: u64,
    out: W,
) -> Result<Vec<u64>> {
    let counts = prediction_histogram(&params.predict(split, seed)?, HISTOGRAM_BINS);
    write_histogram_csv(out, &counts)?;
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binning_edges() {
        let h = prediction_histogram(&[0.0, 0.019, 0.02, 0.5, 0.999, 1.0], 50);
        assert_eq!(h[0], 2);
        assert_eq!(h[1], 1);
        assert_eq!(h[25], 1);
        assert_eq!(h[49], 2);
        assert_eq!(h.iter().sum::<u64>(), 6);
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        write_histogram_csv(&mut buf, &[3, 0]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "bin_lo,bin_hi,count\n0,0.5,3\n0.5,1,0\n");
    }
}
