use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use super::manifest::RunManifest;
use crate::data::Dataset;
use crate::error::Result;
use crate::fxcore::RoundingMode;
use crate::nn::{train, write_params, BatchMode, EpochRecord, PrecisionPath, TrainConfig, TrainOutcome};

pub fn write_epoch_csv<W: Write>(out: W, records: &[EpochRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["epoch", "train_error", "test_error", "loss", "saturations"])?;
    for r in records {
        w.write_record([
            r.epoch.to_string(),
            r.train_error.to_string(),
            r.test_error.to_string(),
            r.loss.to_string(),
            r.saturation_events.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct TrainRun {
    pub label: String,
    pub outcome: TrainOutcome,
    pub csv_path: PathBuf,
    pub params_path: PathBuf,
}

fn manifest_for(cfg: &TrainConfig) -> RunManifest {
    let mut m = RunManifest::new("train", cfg.seed);
    m.set("digits", cfg.pair)
        .set("precision", cfg.run_label());
    if cfg.precision == PrecisionPath::Fixed {
        m.set("word", cfg.format.word_bits())
            .set("frac", cfg.format.frac_bits())
            .set("mode", cfg.mode.tag());
    }
    m.set("epochs", cfg.epochs)
        .set("lr", cfg.learning_rate)
        .set("hidden", cfg.hidden_units)
        .set(
            "batch",
            match cfg.batch {
                BatchMode::Full => "full".to_string(),
                BatchMode::Mini(s) => s.to_string(),
            },
        )
        .set("eval-full-precision", cfg.eval_full_precision);
    m
}

/// Trains one network per mode (plus the double-precision reference when
/// asked) from the same seed and writes `<label>.csv`, `<label>.params` and
/// `<label>.manifest` into `out_dir`.
pub fn run_train(
    base: &TrainConfig,
    modes: &[RoundingMode],
    include_reference: bool,
    dataset: &Dataset,
    out_dir: &Path,
) -> Result<Vec<TrainRun>> {
    std::fs::create_dir_all(out_dir)?;
    let mut configs: Vec<TrainConfig> = Vec::new();
    if include_reference {
        configs.push(TrainConfig {
            precision: PrecisionPath::Reference,
            ..base.clone()
        });
    }
    configs.extend(modes.iter().map(|&mode| TrainConfig {
        mode,
        precision: PrecisionPath::Fixed,
        ..base.clone()
    }));

    let mut runs = Vec::with_capacity(configs.len());
    for cfg in configs {
        let start = Instant::now();
        let outcome = train(&cfg, dataset)?;
        let label = cfg.run_label();
        let csv_path = out_dir.join(format!("{label}.csv"));
        let params_path = out_dir.join(format!("{label}.params"));
        let mut f = BufWriter::new(File::create(&csv_path)?);
        write_epoch_csv(&mut f, &outcome.records)?;
        f.flush()?;
        write_params(&params_path, &outcome.params)?;

        let mut manifest = manifest_for(&cfg);
        manifest.outputs = vec![csv_path.clone(), params_path.clone()];
        manifest.wall_time = start.elapsed();
        manifest.write_beside(&csv_path)?;
        runs.push(TrainRun {
            label,
            outcome,
            csv_path,
            params_path,
        });
    }
    Ok(runs)
}
