use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fxround::data::{load_pair_dataset, DigitPair};
use fxround::experiments::{
    dotprod_table, emit_prediction_histogram, plot_csv_files, run_train, write_dotprod_csv, ConfigFile,
    DotProdConfig, RunManifest,
};
use fxround::fxcore::parse_mode_list;
use fxround::nn::{read_params, BatchMode, TrainConfig};
use fxround::{QFormat, RoundingMode};

#[derive(Parser)]
#[command(name = "fxround", version, about = "Fixed-point rounding experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bias and zero counts of rounded dot products of random vectors
    Dotprod(DotprodArgs),
    /// Train the two-layer classifier on an MNIST digit pair
    Train(TrainArgs),
    /// Histogram of a trained network's outputs on the test split
    Histogram(HistogramArgs),
    /// Render epoch or histogram CSV files as an SVG chart
    Plot(PlotArgs),
}

#[derive(Args)]
struct DotprodArgs {
    /// Flat key = value file; flags given on the command line win
    #[arg(long)]
    config: Option<PathBuf>,
    /// Vector length(s), comma separated
    #[arg(long)]
    n: Option<String>,
    /// Number of dot products per cell, comma separated
    #[arg(long)]
    nmax: Option<String>,
    #[arg(long)]
    word: Option<u32>,
    #[arg(long)]
    frac: Option<u32>,
    #[arg(long)]
    modes: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Upper end of the range y is drawn from
    #[arg(long)]
    ymax: Option<f64>,
    /// Consecutive seeds to run; adds mean rows when above 1
    #[arg(long)]
    repeats: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    digits: Option<DigitPair>,
    #[arg(long)]
    word: Option<u32>,
    #[arg(long)]
    frac: Option<u32>,
    #[arg(long)]
    modes: Option<String>,
    /// Also train the double-precision reference network
    #[arg(long)]
    reference: bool,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    lr: Option<f64>,
    #[arg(long)]
    hidden: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Mini-batch size; full batch when absent
    #[arg(long)]
    batch_size: Option<usize>,
    /// Measure test error in double precision instead of fixed point
    #[arg(long)]
    eval_full_precision: bool,
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HistogramArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    digits: Option<DigitPair>,
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Seed for the rounding draws of a fixed-point forward pass
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Input CSV files
    #[arg(long = "in", num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    /// Column to plot against epoch for epoch-record files
    #[arg(long, default_value = "test_error")]
    column: String,
    #[arg(long)]
    out: PathBuf,
}

/// Command-line value, else config-file value, else the default.
struct Settings {
    file: ConfigFile,
}

impl Settings {
    fn load(path: Option<&Path>, known: &[&str]) -> Result<Self> {
        let file = match path {
            Some(p) => ConfigFile::load(p).with_context(|| format!("reading {}", p.display()))?,
            None => ConfigFile::default(),
        };
        file.ensure_known(known)?;
        Ok(Self { file })
    }

    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => v,
            None => self.file.get(key)?.unwrap_or(default),
        })
    }

    fn pick_opt<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        Ok(match flag {
            Some(v) => Some(v),
            None => self.file.get(key)?,
        })
    }

    fn switch(&self, flag: bool, key: &str) -> Result<bool> {
        Ok(flag || self.file.get::<bool>(key)?.unwrap_or(false))
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse().with_context(|| format!("bad number {t:?} in {s:?}")))
        .collect()
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn dotprod(a: DotprodArgs) -> Result<()> {
    let start = Instant::now();
    let s = Settings::load(
        a.config.as_deref(),
        &["n", "nmax", "word", "frac", "modes", "seed", "ymax", "repeats", "out"],
    )?;
    let ns = parse_list(&s.pick(a.n, "n", "100".into())?)?;
    let nmaxes = parse_list(&s.pick(a.nmax, "nmax", "1000".into())?)?;
    let format = QFormat::new(s.pick(a.word, "word", 16)?, s.pick(a.frac, "frac", 8)?)?;
    let modes = parse_mode_list(&s.pick(a.modes, "modes", "rn,csr,rr".into())?)?;
    let repeats = s.pick(a.repeats, "repeats", 1)?;
    let out: PathBuf = s.pick(a.out, "out", "table2.csv".into())?;
    let mut cfg = DotProdConfig::new(ns[0], nmaxes[0]);
    cfg.format = format;
    cfg.modes = modes.clone();
    cfg.seed = s.pick(a.seed, "seed", 42)?;
    cfg.y_max = s.pick(a.ymax, "ymax", cfg.y_max)?;

    let rows = dotprod_table(&cfg, &ns, &nmaxes, repeats)?;
    let mut w = create(&out)?;
    write_dotprod_csv(&mut w, &rows)?;
    w.flush()?;

    let mut m = RunManifest::new("dotprod", cfg.seed);
    m.set("n", join(&ns))
        .set("nmax", join(&nmaxes))
        .set("format", format)
        .set("modes", tags(&modes))
        .set("ymax", cfg.y_max)
        .set("repeats", repeats);
    m.outputs.push(out.clone());
    m.wall_time = start.elapsed();
    m.write_beside(&out)?;
    for r in rows.iter().filter(|r| repeats == 1 || r.seed.is_none()) {
        println!(
            "N={:<5} Nmax={:<6} {:<4} |B|={:>9.3}  Nz={}",
            r.n,
            r.n_max,
            r.mode.tag(),
            r.abs_bias,
            r.zeros
        );
    }
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn tags(modes: &[RoundingMode]) -> String {
    modes.iter().map(|m| m.tag()).collect::<Vec<_>>().join(",")
}

fn train(a: TrainArgs) -> Result<()> {
    let s = Settings::load(
        a.config.as_deref(),
        &[
            "digits", "word", "frac", "modes", "reference", "epochs", "lr", "hidden", "seed",
            "batch-size", "eval-full-precision", "data-dir", "out",
        ],
    )?;
    let pair = s.pick(a.digits, "digits", DigitPair::new(6, 9)?)?;
    let format = QFormat::new(s.pick(a.word, "word", 16)?, s.pick(a.frac, "frac", 8)?)?;
    let modes = parse_mode_list(&s.pick(a.modes, "modes", "rn,csr,rr".into())?)?;
    let reference = s.switch(a.reference, "reference")?;
    if modes.is_empty() && !reference {
        bail!("nothing to train: give --modes or --reference");
    }
    let mut cfg = TrainConfig::new(pair, format, RoundingMode::NearestEven);
    cfg.epochs = s.pick(a.epochs, "epochs", cfg.epochs)?;
    cfg.learning_rate = s.pick(a.lr, "lr", cfg.learning_rate)?;
    cfg.hidden_units = s.pick(a.hidden, "hidden", cfg.hidden_units)?;
    cfg.seed = s.pick(a.seed, "seed", cfg.seed)?;
    if let Some(b) = s.pick_opt(a.batch_size, "batch-size")? {
        cfg.batch = BatchMode::Mini(b);
    }
    cfg.eval_full_precision = s.switch(a.eval_full_precision, "eval-full-precision")?;
    cfg.validate()?;
    let data_dir: PathBuf = s.pick(a.data_dir, "data-dir", "./mnist".into())?;
    let out: PathBuf = s.pick(a.out, "out", "runs".into())?;

    let dataset = load_pair_dataset(&data_dir, pair)?;
    eprintln!(
        "digits {pair}: {} training and {} test images",
        dataset.train.len(),
        dataset.test.len()
    );
    for run in run_train(&cfg, &modes, reference, &dataset, &out)? {
        let last = run.outcome.final_record();
        println!(
            "{:<10} epoch {:>3}  train {:>6.2}%  test {:>6.2}%  loss {:.4}  -> {}",
            run.label,
            last.epoch,
            100.0 * last.train_error,
            100.0 * last.test_error,
            last.loss,
            run.csv_path.display()
        );
    }
    Ok(())
}

fn histogram(a: HistogramArgs) -> Result<()> {
    let start = Instant::now();
    let s = Settings::load(a.config.as_deref(), &["params", "digits", "data-dir", "seed", "out"])?;
    let Some(params_path) = s.pick_opt::<PathBuf>(a.params, "params")? else {
        bail!("--params is required");
    };
    let pair = s.pick(a.digits, "digits", DigitPair::new(6, 9)?)?;
    let data_dir: PathBuf = s.pick(a.data_dir, "data-dir", "./mnist".into())?;
    let seed = s.pick(a.seed, "seed", 42)?;
    let out: PathBuf = s.pick(a.out, "out", "hist.csv".into())?;

    let params = read_params(&params_path).with_context(|| format!("reading {}", params_path.display()))?;
    let dataset = load_pair_dataset(&data_dir, pair)?;
    let mut w = create(&out)?;
    let counts = emit_prediction_histogram(&params, &dataset.test, seed, &mut w)?;
    w.flush()?;

    let mut m = RunManifest::new("histogram", seed);
    m.set("params", params_path.display()).set("digits", pair);
    m.outputs.push(out.clone());
    m.wall_time = start.elapsed();
    m.write_beside(&out)?;
    let (lo, hi) = counts.split_at(counts.len() / 2);
    println!(
        "{} outputs below 0.5, {} at or above -> {}",
        lo.iter().sum::<u64>(),
        hi.iter().sum::<u64>(),
        out.display()
    );
    Ok(())
}

fn plot(a: PlotArgs) -> Result<()> {
    let paths: Vec<&Path> = a.inputs.iter().map(PathBuf::as_path).collect();
    let svg = plot_csv_files(&paths, &a.column)?;
    let mut w = create(&a.out)?;
    w.write_all(svg.as_bytes())?;
    w.flush()?;
    println!("{}", a.out.display());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Dotprod(a) => dotprod(a),
        Command::Train(a) => train(a),
        Command::Histogram(a) => histogram(a),
        Command::Plot(a) => plot(a),
    }
}
