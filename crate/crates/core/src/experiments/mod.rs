//! Experiment drivers: the rounded dot-product study, training sweeps,
//! prediction histograms and SVG charts, plus the manifest and config-file
//! plumbing shared by the command-line tool.

mod config_file;
mod dotprod;
mod histogram;
mod manifest;
mod plot;
mod training;

pub use config_file::ConfigFile;
pub use dotprod::{dotprod_table, run_dotprod, write_dotprod_csv, DotProdConfig, DotProdRow, ModeStats};
pub use histogram::{emit_prediction_histogram, prediction_histogram, write_histogram_csv, HISTOGRAM_BINS};
pub use manifest::RunManifest;
pub use plot::{line_chart_svg, padded_range, plot_csv_files, read_series, ChartSpec, Series};
pub use training::{run_train, write_epoch_csv, TrainRun};
