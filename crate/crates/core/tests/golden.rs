use wordavg::algebra::Mode;
use wordavg::averaging::build_averaged;
use wordavg::experiment::cmd_average;
use wordavg::model::ModelParams;
use wordavg::Error;

#[test]
fn one_letter_text() {
    let text = cmd_average(&ModelParams::default(), 1, true).unwrap();
    assert_eq!(text, include_str!("golden/averaged_n1.txt"));
}

#[test]
fn two_letter_text() {
    let text = cmd_average(&ModelParams::default(), 2, true).unwrap();
    assert_eq!(text, include_str!("golden/averaged_n2.txt"));
}

#[test]
fn text_does_not_depend_on_numeric_parameters() {
    let p = ModelParams { a: 0.7, b: 0.1, nu: 0.3, omega: 9.0, z0: 0.2 };
    assert_eq!(cmd_average(&p, 2, true).unwrap(), include_str!("golden/averaged_n2.txt"));
}

#[test]
fn three_letters_add_second_order_terms_only() {
    let p = ModelParams::default();
    let two = build_averaged(p, 2, 0.0, Mode::Exact).unwrap();
    let three = build_averaged(p, 3, 0.0, Mode::Exact).unwrap();
    let new = three.symbolic().unwrap().y().sub(two.symbolic().unwrap().y());
    assert!(!new.is_empty());
    assert!(new.terms().iter().all(|(m, _)| m.p == 2));
    let text = cmd_average(&p, 3, true).unwrap();
    assert!(text.starts_with(include_str!("golden/averaged_n2.txt").trim_end()));
    assert!(text.contains("omega^-2: "));
}

#[test]
fn exact_printing_is_capped() {
    assert!(cmd_average(&ModelParams::default(), 4, true).is_ok());
    match cmd_average(&ModelParams::default(), 5, true) {
        Err(Error::Validation(msg)) => assert!(msg.contains("swell")),
        other => panic!("expected refusal, got {other:?}"),
    }
    assert!(cmd_average(&ModelParams::default(), 5, false).is_ok());
}
