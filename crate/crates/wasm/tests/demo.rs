use fxround_wasm::demo::{dotprod_study, outcome_histogram, rounding_curves};

#[test]
fn curves_follow_the_rounding_laws() {
    let rows = rounding_curves("csr", 0, 0.0, 1.0, 11).unwrap();
    assert_eq!(rows.len(), 55);
    let x3 = &rows[15..20];
    assert!((x3[0] - 0.3).abs() < 1e-12);
    assert!((x3[1] - 0.7).abs() < 1e-12);
    assert!(x3[3].abs() < 1e-12);
    assert!((x3[4] - 0.21).abs() < 1e-12);

    let rr = rounding_curves("rr", 0, 0.0, 1.0, 3).unwrap();
    // p = 1/2 everywhere, so the bias at 0 is +δ/2
    assert_eq!(rr[1], 0.5);
    assert_eq!(rr[3], 0.5);
    assert!(rounding_curves("banker", 8, 0.0, 1.0, 3).is_err());
    assert!(rounding_curves("rn", 8, 1.0, 0.0, 3).is_err());
}

#[test]
fn dotprod_study_reports_three_modes() {
    let v = dotprod_study(50, 100, 8, 10.0, 1).unwrap();
    assert_eq!(v.len(), 9);
    // RN zeroes every result because |x| ≤ δ/2 rounds to 0
    assert_eq!(v[1], 100.0);
    assert!(v[7] < v[1]);
    assert_eq!(v, dotprod_study(50, 100, 8, 10.0, 1).unwrap());
}

#[test]
fn histogram_matches_exact_probabilities() {
    let h = outcome_histogram(0.3, 0, "csr", 100_000, 7).unwrap();
    assert_eq!(h.len(), 6);
    assert_eq!((h[0], h[3]), (0.0, 1.0));
    assert!((h[2] - 0.7).abs() < 1e-12);
    // 4σ of a binomial frequency with n = 1e5, p = 0.7
    assert!((h[1] - 0.7).abs() < 4.0 * (0.21f64 / 1e5).sqrt());
    let rn = outcome_histogram(0.3, 0, "rn", 10, 7).unwrap();
    assert_eq!(rn, vec![0.0, 1.0, 1.0]);
    assert!(outcome_histogram(1e9, 8, "rr", 10, 0).is_err());
    assert!(outcome_histogram(0.1, 8, "rr", 0, 0).is_err());
}
