use mixrisk::utility::*;
use mixrisk::Error;
use approx::assert_abs_diff_eq;

fn cara_crra() -> BiUtility {
    BiUtility::new(
        UtilityFamily::CaraCrraProduct {
            alpha: 1.0,
            gamma: 0.75,
        },
        DomainBox::new(-1.0, 1.0, 0.1, 1.0).unwrap(),
    )
    .unwrap()
}

#[test]
fn partial_examples() {
    let v = cara_crra();
    // α² e^{-αy} x^{1-γ} / (1-γ) at (0, 1) = 1 / (1/4)
    assert_abs_diff_eq!(v.partial(&[1, 1, 1], 0.0, 1.0).unwrap(), 4.0, epsilon = 1e-14);
    // -γ e^{-αy} x^{-γ-1} at (0, 1)
    assert_abs_diff_eq!(v.partial(&[1, 2, 2], 0.0, 1.0).unwrap(), -0.75, epsilon = 1e-14);
    let log = BiUtility::new(
        UtilityFamily::LogAdditive,
        DomainBox::new(1.0, 10.0, 1.0, 10.0).unwrap(),
    )
    .unwrap();
    assert_eq!(log.partial(&[1, 2], 3.0, 4.0).unwrap(), 0.0);
}

#[test]
fn partial_argument_order_does_not_matter() {
    let v = cara_crra();
    let a = v.partial(&[1, 2, 2], 0.3, 0.5).unwrap();
    let b = v.partial(&[2, 1, 2], 0.3, 0.5).unwrap();
    assert_eq!(a, b);
}

#[test]
fn partial_errors() {
    let v = cara_crra();
    assert!(matches!(v.partial(&[1, 1, 1, 1], 0.0, 0.5), Err(Error::Unsupported(_))));
    assert!(matches!(v.partial(&[3], 0.0, 0.5), Err(Error::Unsupported(_))));
    assert!(matches!(v.partial(&[1], 0.0, 2.0), Err(Error::Domain(_))));
}

#[test]
fn domain_box_must_respect_natural_domain() {
    let bad = BiUtility::new(
        UtilityFamily::LogAdditive,
        DomainBox::new(0.0, 1.0, 1.0, 2.0).unwrap(),
    );
    assert!(bad.is_err());
    assert!(DomainBox::new(1.0, 0.0, 0.0, 1.0).is_err());
}

#[test]
fn validation_examples() {
    let log = BiUtility::new(
        UtilityFamily::LogAdditive,
        DomainBox::new(1.0, 10.0, 1.0, 10.0).unwrap(),
    )
    .unwrap();
    let r = validate_utility(&log, 11).unwrap();
    assert!(r.assumptions_hold() && r.derivatives_agree(), "{r:?}");

    let r = validate_utility(&cara_crra(), 11).unwrap();
    assert!(r.increasing_in_income);
    assert!(!r.increasing_in_background);
    assert!(r.derivatives_agree(), "{r:?}");
    assert!(!r.accepted_for_solver());
    let r = validate_utility(&cara_crra().with_override(true), 11).unwrap();
    assert!(r.accepted_for_solver());

    let quad = BiUtility::new(
        UtilityFamily::Quadratic { q_y: 0.05, q_x: 0.05 },
        DomainBox::new(0.0, 5.0, 0.0, 5.0).unwrap(),
    )
    .unwrap();
    let r = validate_utility(&quad, 11).unwrap();
    assert!(r.assumptions_hold() && r.derivatives_agree(), "{r:?}");
    assert_eq!(quad.partial(&[1, 1, 1], 2.0, 3.0).unwrap(), 0.0);
    assert_eq!(quad.partial(&[1, 2, 2], 2.0, 3.0).unwrap(), 0.0);

    assert!(validate_utility(&quad, 0).is_err());
}

#[test]
fn cara_crra_sign_table() {
    let v = cara_crra();
    for &(y, x) in &[(-0.9, 0.15), (0.0, 0.5), (0.8, 0.95)] {
        assert!(v.partial(&[1], y, x).unwrap() > 0.0);
        assert!(v.partial(&[1, 1], y, x).unwrap() < 0.0);
        assert!(v.partial(&[1, 1, 1], y, x).unwrap() > 0.0);
        assert!(v.partial(&[1, 2, 2], y, x).unwrap() < 0.0);
    }
}

#[test]
fn custom_utility_uses_finite_differences() {
    let c = BiUtility::new(
        UtilityFamily::Custom(CustomUtility::new("exp-log", |y: f64, x: f64| {
            -(-y).exp() + x.ln()
        })),
        DomainBox::new(-1.0, 1.0, 0.5, 2.0).unwrap(),
    )
    .unwrap();
    let d111 = c.partial(&[1, 1, 1], 0.2, 1.0).unwrap();
    assert_abs_diff_eq!(d111, (-0.2f64).exp(), epsilon = 1e-5);
    let d1 = c.partial(&[1], 0.2, 1.0).unwrap();
    assert_abs_diff_eq!(d1, (-0.2f64).exp(), epsilon = 1e-8);
}

#[test]
fn scaling_multiplies_partials() {
    let v = BiUtility::new(
        UtilityFamily::CaraAdditive { alpha: 1.0, beta: 1.0 },
        DomainBox::new(-20.0, 20.0, -20.0, 20.0).unwrap(),
    )
    .unwrap();
    let u = v.clone().scaled(2.0).unwrap();
    assert_abs_diff_eq!(
        u.partial(&[1], 0.5, 0.0).unwrap(),
        2.0 * v.partial(&[1], 0.5, 0.0).unwrap(),
        epsilon = 1e-15
    );
}
