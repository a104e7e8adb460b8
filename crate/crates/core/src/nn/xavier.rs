use crate::fxcore::RngStream;

/// Half-width `√(6 / (n_in + n_out))` of the uniform initialization range.
pub fn xavier_bound(n_in: usize, n_out: usize) -> f64 {
    (6.0 / (n_in + n_out) as f64).sqrt()
}

/// `n_out × n_in` weights, row-major, drawn i.i.d. uniform on
/// `[-bound, bound)`. Full precision; the fixed path quantizes afterwards.
pub fn xavier_init(rng: &mut RngStream, n_in: usize, n_out: usize) -> Vec<f64> {
    assert!(n_in > 0 && n_out > 0, "layer dimensions must be positive");
    let b = xavier_bound(n_in, n_out);
    (0..n_in * n_out).map(|_| rng.uniform_in(-b, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_and_spread() {
        let b = xavier_bound(784, 100);
        assert!((b - 0.082_385_26).abs() < 1e-7, "{b}");
        let w = xavier_init(&mut RngStream::new(1), 784, 100);
        assert_eq!(w.len(), 78_400);
        assert!(w.iter().all(|v| v.abs() <= b));
        let max = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(max > 0.99 * b);
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        assert!(mean.abs() < 0.002);
    }

    #[test]
    fn deterministic() {
        let a = xavier_init(&mut RngStream::new(9), 3, 5);
        let b = xavier_init(&mut RngStream::new(9), 3, 5);
        assert_eq!(a, b);
    }
}
