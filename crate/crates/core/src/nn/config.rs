use crate::data::DigitPair;
use crate::error::{FxError, Result};
use crate::fxcore::{QFormat, RoundingMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecisionPath {
    /// Every tensor lives in the configured fixed-point format.
    Fixed,
    /// Double-precision arithmetic, no rounding.
    Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BatchMode {
    Full,
    /// Consecutive column blocks of this size, in dataset order.
    Mini(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub hidden_units: usize,
    pub format: QFormat,
    pub mode: RoundingMode,
    pub seed: u64,
    pub pair: DigitPair,
    pub precision: PrecisionPath,
    pub batch: BatchMode,
    /// Evaluate test error in double precision even on the fixed path.
    pub eval_full_precision: bool,
}

impl TrainConfig {
    pub fn new(pair: DigitPair, format: QFormat, mode: RoundingMode) -> Self {
        Self {
            learning_rate: 0.1,
            epochs: 30,
            hidden_units: 100,
            format,
            mode,
            seed: 42,
            pair,
            precision: PrecisionPath::Fixed,
            batch: BatchMode::Full,
            eval_full_precision: false,
        }
    }

    pub fn reference(pair: DigitPair) -> Self {
        Self {
            precision: PrecisionPath::Reference,
            ..Self::new(pair, QFormat::Q16_8, RoundingMode::NearestEven)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(FxError::InvalidArgument(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.hidden_units == 0 {
            return Err(FxError::InvalidArgument("hidden_units must be positive".into()));
        }
        if let BatchMode::Mini(0) = self.batch {
            return Err(FxError::InvalidArgument("mini-batch size must be positive".into()));
        }
        Ok(())
    }

    /// Short label for file names: `rr`, `csr`, ... or `reference`.
    pub fn run_label(&self) -> String {
        match self.precision {
            PrecisionPath::Reference => "reference".to_string(),
            PrecisionPath::Fixed => self.mode.tag().to_string(),
        }
    }
}

/// Errors and loss after one epoch; epoch 0 is the initialized network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_error: f64,
    pub test_error: f64,
    pub loss: f64,
    pub saturation_events: u64,
}
