/// Running tallies for a batch of rounded results.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RoundingStats {
    /// Σ |rounded − exact|.
    pub abs_bias_sum: f64,
    /// Results that rounded to exactly zero.
    pub zero_count: u64,
    /// Results recorded.
    pub op_count: u64,
    /// Results clamped to the format range.
    pub saturations: u64,
}

impl RoundingStats {
    pub fn record(&mut self, exact: f64, rounded: f64, saturated: bool) {
        self.abs_bias_sum += (rounded - exact).abs();
        self.zero_count += u64::from(rounded == 0.0);
        self.op_count += 1;
        self.saturations += u64::from(saturated);
    }

    pub fn merge(&mut self, other: &RoundingStats) {
        self.abs_bias_sum += other.abs_bias_sum;
        self.zero_count += other.zero_count;
        self.op_count += other.op_count;
        self.saturations += other.saturations;
    }

    pub fn zero_fraction(&self) -> f64 {
        if self.op_count == 0 {
            0.0
        } else {
            self.zero_count as f64 / self.op_count as f64
        }
    }
}
