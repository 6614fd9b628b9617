use mixrisk::quadrature::*;
use mixrisk::Error;
use approx::assert_abs_diff_eq;

#[test]
fn weights_sum_to_interval_length() {
    for n in [1, 2, 3, 7, 16, 64, 128] {
        let rule = GaussLegendre::new(n);
        assert_abs_diff_eq!(rule.weights().iter().sum::<f64>(), 2.0, epsilon = 1e-13);
    }
}

#[test]
fn exact_for_degree_2n_minus_1() {
    let rule = GaussLegendre::new(5);
    // x^9 integrates to 0.1 on [0, 1]
    assert_abs_diff_eq!(rule.integrate(0.0, 1.0, |x| x.powi(9)), 0.1, epsilon = 1e-14);
}

#[test]
fn smooth_integrand_passes_check() {
    let q = Quadrature::default();
    let v = q
        .integrate(0.0, 1.0, "exp", |x| Ok(x.exp()))
        .unwrap();
    assert_abs_diff_eq!(v, std::f64::consts::E - 1.0, epsilon = 1e-14);
}

#[test]
fn kinked_integrand_is_rejected() {
    let q = Quadrature::new(8).unwrap();
    let err = q
        .integrate(-1.0, 1.0, "abs", |x| Ok(x.abs().sqrt()))
        .unwrap_err();
    assert!(matches!(err, Error::Quadrature { .. }));
}

#[test]
fn panels_handle_piecewise_linear() {
    let q = Quadrature::new(16).unwrap();
    let est = q
        .estimate_panels(&[0.0, 0.3, 1.0], |x| Ok(if x < 0.3 { x } else { 0.3 }))
        .unwrap();
    assert_abs_diff_eq!(est.value, 0.045 + 0.21, epsilon = 1e-14);
    assert!(est.error < 1e-14);
}

#[test]
fn too_few_nodes() {
    assert!(Quadrature::new(1).is_err());
}

#[test]
fn jacobi_rule_absorbs_fractional_power() {
    // ∫₀¹ γ^0.3 e^γ dγ = Σ 1 / (k! (k + 1.3))
    let mut series = 0.0;
    let mut fact = 1.0;
    for k in 0..30 {
        if k > 0 {
            fact *= k as f64;
        }
        series += 1.0 / (fact * (k as f64 + 1.3));
    }
    let q = Quadrature::default();
    let est = q.estimate_power_weighted(1.0, 0.3, |g| Ok(g.exp())).unwrap();
    assert_abs_diff_eq!(est.value, series, epsilon = 1e-14);
    assert!(est.error < 1e-13);
    // On [0, b] the weight scales by b^{n+1}: ∫₀^½ γ^0.3 dγ = 0.5^1.3 / 1.3.
    let half = q.estimate_power_weighted(0.5, 0.3, |_| Ok(1.0)).unwrap();
    assert_abs_diff_eq!(half.value, 0.5f64.powf(1.3) / 1.3, epsilon = 1e-15);
    // Plain Gauss–Legendre misses the tolerance on the same integrand.
    assert!(q.integrate(0.0, 1.0, "power", |g: f64| Ok(g.powf(0.3) * g.exp())).is_err());
}

#[test]
fn odd_node_counts_use_even_jacobi_orders() {
    let q = Quadrature::new(7).unwrap();
    let est = q.estimate_power_weighted(1.0, 1.5, |g| Ok(g * g)).unwrap();
    assert_abs_diff_eq!(est.value, 1.0 / 4.5, epsilon = 1e-14);
}
