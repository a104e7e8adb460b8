//! Two-layer binary classifier (ReLU hidden layer, sigmoid output) trained
//! by gradient descent, either entirely in a fixed-point format with a
//! chosen rounding mode or in double precision as a reference.

mod config;
mod fixed;
mod loss;
mod params_io;
mod reference;
mod train;
mod xavier;

pub use config::{BatchMode, EpochRecord, PrecisionPath, TrainConfig};
pub use fixed::{
    backward, forward, sgd_update, FxBatch, ForwardCache, Gradients, NetworkParams,
};
pub use loss::{bce_loss, LOSS_EPS};
pub use params_io::{params_to_string, parse_params, read_params, write_params};
pub use reference::{RefCache, RefGradients, RefMatrix, RefParams};
pub use train::{classification_error, train, TrainOutcome, TrainedParams};
pub use xavier::{xavier_bound, xavier_init};

pub(crate) fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}
