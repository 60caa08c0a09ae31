use num_complex::Complex64;
use wordavg::averaging::word_series_eval;
use wordavg::coefficients::{kappa, Alpha};
use wordavg::integrate::{solve, Options};
use wordavg::model::{FourierModel, ModelParams};
use wordavg::words::Word;

fn model() -> FourierModel<Complex64> {
    FourierModel::float(ModelParams::default())
}

/// The `(φ, y)` system integrated to near machine precision.
fn flow(m: &FourierModel<Complex64>, x0: [f64; 2], t: f64) -> [f64; 2] {
    let (xs, _) = solve(
        |s, x: &[f64; 2]| m.rhs(s, x[0], x[1]).map(|v| v.re),
        x0,
        &[0.0, t],
        &Options::with_tolerance(1e-13),
    )
    .unwrap();
    xs[1]
}

fn series_error(m: &FourierModel<Complex64>, x0: [f64; 2], t: f64, n: usize) -> f64 {
    let mut alpha = Alpha::new(m.params.omega, 0.0);
    let (v, residue) = word_series_eval(|w| alpha.eval(w, t), m, n, x0).unwrap();
    assert!(residue < 1e-10);
    let exact = flow(m, x0, t);
    (v[0] - exact[0]).abs().max((v[1] - exact[1]).abs())
}

#[test]
fn truncated_solution_series_converges() {
    let m = model();
    let x0 = [0.3, -0.8];
    let errs: Vec<f64> = (1..=4).map(|n| series_error(&m, x0, 0.1, n)).collect();
    assert!(errs[1] / errs[2] >= 8.0, "{errs:?}");
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn stroboscopic_change_is_identity() {
    let m = model();
    let letters = m.support_letters();
    let k = kappa(0.0, 0.0, m.params.omega, 4, &letters);
    let (v, _) = word_series_eval(|w| k.get(w), &m, 4, [1.1, -0.6]).unwrap();
    assert!((v[0] - 1.1).abs() < 1e-9 && (v[1] + 0.6).abs() < 1e-9);
}

#[test]
fn empty_word_weight_scales_the_point() {
    let m = model();
    let half = |w: &Word| if w.is_empty() { Complex64::new(0.5, 0.0) } else { Complex64::new(0.0, 0.0) };
    assert_eq!(word_series_eval(half, &m, 3, [2.0, -4.0]).unwrap().0, [1.0, -2.0]);
}
