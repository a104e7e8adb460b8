use super::config::{BatchMode, EpochRecord, PrecisionPath, TrainConfig};
use super::fixed::{backward, forward, sgd_update, FxBatch, NetworkParams};
use super::loss::bce_loss;
use super::reference::{RefMatrix, RefParams};
use super::xavier::xavier_init;
use crate::data::{Dataset, Split, PIXELS};
use crate::error::{FxError, Result};
use crate::fxcore::{QFormat, Rounder, RoundingMode, RngStream};
use crate::fxlinalg::FxMatrix;

// Stream ids derived from the run seed. Initialization is shared by every
// mode so that runs differ only in how they round.
const INIT_STREAM: u64 = 0;
const QUANTIZE_STREAM: u64 = 1;
const TRAIN_STREAM: u64 = 2;
const EVAL_STREAM: u64 = 3;

/// Fraction of predictions on the wrong side of the 0.5 threshold.
pub fn classification_error(predictions: &[f64], labels: &[u8]) -> f64 {
    assert_eq!(predictions.len(), labels.len());
    if labels.is_empty() {
        return 0.0;
    }
    let wrong = predictions
        .iter()
        .zip(labels)
        .filter(|(&a, &y)| u8::from(a >= 0.5) != y)
        .count();
    wrong as f64 / labels.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedParams {
    Fixed {
        params: NetworkParams,
        mode: RoundingMode,
    },
    Reference(RefParams),
}

impl TrainedParams {
    pub fn hidden(&self) -> usize {
        match self {
            Self::Fixed { params, .. } => params.hidden(),
            Self::Reference(p) => p.w1.rows,
        }
    }

    /// Sigmoid outputs on a split. Fixed-point parameters are evaluated with
    /// the quantized forward pass in their own format and mode; `seed`
    /// drives any stochastic rounding.
    pub fn predict(&self, split: &Split, seed: u64) -> Result<Vec<f64>> {
        match self {
            Self::Reference(p) => Ok(p.forward(&ref_inputs(split)).a2.data),
            Self::Fixed { params, mode } => {
                let fmt = params.format();
                let mut q = Rounder::new(fmt, *mode, RngStream::with_stream(seed, QUANTIZE_STREAM));
                let batch = FxBatch::quantize(PIXELS, &split.pixels, &split.labels, &mut q)?;
                let mut r = Rounder::new(fmt, *mode, RngStream::with_stream(seed, EVAL_STREAM));
                Ok(forward(params, &batch, &mut r)?.predictions())
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Epochs `0..=epochs`; entry 0 describes the initialized network.
    pub records: Vec<EpochRecord>,
    pub params: TrainedParams,
}

impl TrainOutcome {
    pub fn final_record(&self) -> &EpochRecord {
        self.records.last().expect("at least the epoch-0 record")
    }
}

/// Trains one network and evaluates it after every epoch.
pub fn train(config: &TrainConfig, dataset: &Dataset) -> Result<TrainOutcome> {
    config.validate()?;
    if dataset.pair != config.pair {
        return Err(FxError::InvalidArgument(format!(
            "dataset holds digits {} but the run asks for {}",
            dataset.pair, config.pair
        )));
    }
    if dataset.train.is_empty() || dataset.test.is_empty() {
        return Err(FxError::Dataset("empty split".into()));
    }
    let mut init = RngStream::with_stream(config.seed, INIT_STREAM);
    let n1 = config.hidden_units;
    let w1 = xavier_init(&mut init, PIXELS, n1);
    let w2 = xavier_init(&mut init, n1, 1);
    match config.precision {
        PrecisionPath::Reference => Ok(train_reference(config, dataset, w1, w2)),
        PrecisionPath::Fixed => train_fixed(config, dataset, &w1, &w2),
    }
}

fn ref_inputs(split: &Split) -> RefMatrix {
    RefMatrix::from_vec(PIXELS, split.len(), split.pixels.clone()).transpose()
}

fn batch_ranges(m: usize, batch: BatchMode) -> Vec<(usize, usize)> {
    let size = match batch {
        BatchMode::Full => m,
        BatchMode::Mini(s) => s.min(m),
    };
    (0..m).step_by(size).map(|s| (s, (s + size).min(m))).collect()
}

fn train_reference(config: &TrainConfig, ds: &Dataset, w1: Vec<f64>, w2: Vec<f64>) -> TrainOutcome {
    let n1 = config.hidden_units;
    let mut p = RefParams::zeros(PIXELS, n1);
    p.w1 = RefMatrix::from_vec(n1, PIXELS, w1);
    p.w2 = RefMatrix::from_vec(1, n1, w2);

    let x = RefMatrix::from_vec(PIXELS, ds.train.len(), ds.train.pixels.clone());
    let xt = x.transpose();
    let test_xt = ref_inputs(&ds.test);
    let y = &ds.train.labels;
    let full = matches!(config.batch, BatchMode::Full);
    let minis: Vec<_> = batch_ranges(y.len(), config.batch)
        .into_iter()
        .map(|(s, e)| {
            let xt_b = RefMatrix::from_vec(e - s, PIXELS, xt.data[s * PIXELS..e * PIXELS].to_vec());
            (xt_b.transpose(), xt_b, s, e)
        })
        .collect();

    let record = |epoch: usize, p: &RefParams, train_pred: &[f64]| EpochRecord {
        epoch,
        train_error: classification_error(train_pred, y),
        test_error: classification_error(&p.forward(&test_xt).a2.data, &ds.test.labels),
        loss: bce_loss(train_pred, y),
        saturation_events: 0,
    };

    let mut records = Vec::with_capacity(config.epochs + 1);
    let mut cache = p.forward(&xt);
    records.push(record(0, &p, &cache.a2.data));
    for epoch in 1..=config.epochs {
        if full {
            let g = p.backward(&cache, &x, y);
            p.update(&g, config.learning_rate);
        } else {
            for (xb, xtb, s, e) in &minis {
                let c = p.forward(xtb);
                let g = p.backward(&c, xb, &y[*s..*e]);
                p.update(&g, config.learning_rate);
            }
        }
        // The next epoch's forward pass doubles as this epoch's evaluation.
        cache = p.forward(&xt);
        records.push(record(epoch, &p, &cache.a2.data));
    }
    TrainOutcome {
        records,
        params: TrainedParams::Reference(p),
    }
}

fn quantize_params(
    w1: &[f64],
    w2: &[f64],
    n1: usize,
    fmt: QFormat,
    rounder: &mut Rounder,
) -> Result<NetworkParams> {
    Ok(NetworkParams {
        w1: FxMatrix::quantize(n1, PIXELS, w1, rounder)?,
        b1: FxMatrix::zeros(n1, 1, fmt),
        w2: FxMatrix::quantize(1, n1, w2, rounder)?,
        b2: FxMatrix::zeros(1, 1, fmt),
    })
}

fn train_fixed(config: &TrainConfig, ds: &Dataset, w1: &[f64], w2: &[f64]) -> Result<TrainOutcome> {
    let fmt = config.format;
    let mode = config.mode;
    let seed = config.seed;
    let mut quant = Rounder::new(fmt, mode, RngStream::with_stream(seed, QUANTIZE_STREAM));
    let mut params = quantize_params(w1, w2, config.hidden_units, fmt, &mut quant)?;
    let train_batch = FxBatch::quantize(PIXELS, &ds.train.pixels, &ds.train.labels, &mut quant)?;
    // Test inputs use their own stream so that evaluation never shifts the
    // draws seen by training.
    let mut test_quant = Rounder::new(fmt, mode, RngStream::with_stream(seed, EVAL_STREAM).derive(1));
    let test_batch = FxBatch::quantize(PIXELS, &ds.test.pixels, &ds.test.labels, &mut test_quant)?;
    let test_ref = config.eval_full_precision.then(|| ref_inputs(&ds.test));
    let mut pending_saturations = quant.take_saturations();

    let mut rounder = Rounder::new(fmt, mode, RngStream::with_stream(seed, TRAIN_STREAM));
    let mut eval = Rounder::new(fmt, mode, RngStream::with_stream(seed, EVAL_STREAM));
    let y = &ds.train.labels;
    let full = matches!(config.batch, BatchMode::Full);
    let minis: Vec<FxBatch> = if full {
        Vec::new()
    } else {
        batch_ranges(y.len(), config.batch)
            .into_iter()
            .map(|(s, e)| train_batch.slice(s, e))
            .collect()
    };

    let test_error = |params: &NetworkParams, eval: &mut Rounder| -> Result<f64> {
        let preds = match &test_ref {
            Some(xt) => RefParams::from_fixed(params).forward(xt).a2.data,
            None => forward(params, &test_batch, eval)?.predictions(),
        };
        Ok(classification_error(&preds, &ds.test.labels))
    };

    let mut records = Vec::with_capacity(config.epochs + 1);
    let mut cache = if full {
        forward(&params, &train_batch, &mut rounder)?
    } else {
        forward(&params, &train_batch, &mut eval)?
    };
    for epoch in 0..=config.epochs {
        if epoch > 0 {
            if full {
                let g = backward(&params, &cache, &train_batch, &mut rounder)?;
                params = sgd_update(&params, &g, config.learning_rate, &mut rounder)?;
                cache = forward(&params, &train_batch, &mut rounder)?;
            } else {
                for b in &minis {
                    let c = forward(&params, b, &mut rounder)?;
                    let g = backward(&params, &c, b, &mut rounder)?;
                    params = sgd_update(&params, &g, config.learning_rate, &mut rounder)?;
                }
                cache = forward(&params, &train_batch, &mut eval)?;
            }
        }
        let preds = cache.predictions();
        let test_error = test_error(&params, &mut eval)?;
        pending_saturations += rounder.take_saturations() + eval.take_saturations();
        records.push(EpochRecord {
            epoch,
            train_error: classification_error(&preds, y),
            test_error,
            loss: bce_loss(&preds, y),
            saturation_events: std::mem::take(&mut pending_saturations),
        });
    }
    Ok(TrainOutcome {
        records,
        params: TrainedParams::Fixed { params, mode },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DigitPair;

    #[test]
    fn threshold_is_inclusive() {
        assert_eq!(classification_error(&[0.5, 0.49, 0.9, 0.1], &[1, 0, 1, 0]), 0.0);
        assert_eq!(classification_error(&[0.5, 0.5], &[0, 0]), 1.0);
    }

    #[test]
    fn batch_ranges_cover_everything() {
        assert_eq!(batch_ranges(10, BatchMode::Full), vec![(0, 10)]);
        assert_eq!(batch_ranges(10, BatchMode::Mini(4)), vec![(0, 4), (4, 8), (8, 10)]);
    }

    fn tiny_dataset() -> Dataset {
        // two fake "digits": bright top half vs bright bottom half
        let m = 8;
        let mut pixels = vec![0.0; PIXELS * m];
        let mut labels = Vec::new();
        for j in 0..m {
            let label = (j % 2) as u8;
            labels.push(label);
            for p in 0..PIXELS {
                let top = p < PIXELS / 2;
                if top == (label == 1) {
                    pixels[p * m + j] = 0.5 + 0.05 * (j as f64);
                }
            }
        }
        let split = Split { pixels, labels };
        Dataset {
            pair: DigitPair::new(1, 7).unwrap(),
            train: split.clone(),
            test: split,
        }
    }

    #[test]
    fn learns_a_trivial_problem_on_both_paths() {
        let ds = tiny_dataset();
        for precision in [PrecisionPath::Reference, PrecisionPath::Fixed] {
            let mut cfg = TrainConfig::new(ds.pair, QFormat::Q16_10, RoundingMode::Csr);
            cfg.precision = precision;
            cfg.hidden_units = 8;
            cfg.epochs = 20;
            let out = train(&cfg, &ds).unwrap();
            assert_eq!(out.records.len(), 21);
            assert_eq!(out.final_record().train_error, 0.0, "{precision:?}");
            assert!(out.final_record().loss < out.records[0].loss);
        }
    }

    #[test]
    fn same_seed_same_records() {
        let ds = tiny_dataset();
        let mut cfg = TrainConfig::new(ds.pair, QFormat::Q16_8, RoundingMode::Rr);
        cfg.hidden_units = 4;
        cfg.epochs = 3;
        let a = train(&cfg, &ds).unwrap();
        let b = train(&cfg, &ds).unwrap();
        assert_eq!(a.records, b.records);
        assert_eq!(a.params, b.params);
        cfg.batch = BatchMode::Mini(3);
        let c = train(&cfg, &ds).unwrap();
        assert_eq!(c.records.len(), 4);
    }

    #[test]
    fn zero_epochs_gives_only_the_initial_record() {
        let ds = tiny_dataset();
        let mut cfg = TrainConfig::reference(ds.pair);
        cfg.epochs = 0;
        let out = train(&cfg, &ds).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].epoch, 0);
    }
}
