/// Predictions are clamped to `[ε, 1 − ε]` before taking logs.
pub const LOSS_EPS: f64 = 1e-7;

/// Mean binary cross-entropy of predictions `a` against labels `y`.
pub fn bce_loss(a: &[f64], y: &[u8]) -> f64 {
    assert_eq!(a.len(), y.len(), "prediction/label length mismatch");
    if a.is_empty() {
        return 0.0;
    }
    let total: f64 = a
        .iter()
        .zip(y)
        .map(|(&p, &t)| {
            let p = p.clamp(LOSS_EPS, 1.0 - LOSS_EPS);
            if t == 1 {
                -p.ln()
            } else {
                -(1.0 - p).ln()
            }
        })
        .sum();
    total / a.len() as f64
}
