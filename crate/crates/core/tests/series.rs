use proptest::prelude::*;
use sonin_core::series::{
    cauchy_product, kernel_coeffs, reciprocal_series, route_discrepancy, solve_sonin_triangular, solve_via_reciprocal,
    Generator, PowerSeries,
};
use sonin_core::{Error, SeriesPairCoefficients};

fn series_strategy(max_order: usize) -> impl Strategy<Value = PowerSeries> {
    (0.5f64..2.0, any::<bool>(), prop::collection::vec(-1.0f64..1.0, 0..max_order)).prop_map(|(c0, neg, rest)| {
        let mut c = vec![if neg { -c0 } else { c0 }];
        c.extend(rest);
        PowerSeries::new(c).unwrap()
    })
}

proptest! {
    #[test]
    fn reciprocal_cancels_in_the_cauchy_product(c in series_strategy(24)) {
        let d = reciprocal_series(&c).unwrap();
        let prod = cauchy_product(&c, &d);
        for n in 0..=c.order() {
            let scale: f64 = (0..=n).map(|m| (c.coeffs()[m] * d.coeffs()[n - m]).abs()).sum();
            let want = if n == 0 { 1.0 } else { 0.0 };
            prop_assert!((prod.coeffs()[n] - want).abs() <= 1e-12 * scale, "n = {n}");
        }
    }

    #[test]
    fn reciprocal_is_an_involution(c in series_strategy(8)) {
        let back = reciprocal_series(&reciprocal_series(&c).unwrap()).unwrap();
        for (x, y) in back.coeffs().iter().zip(c.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn triangular_solution_satisfies_the_system(
        c in series_strategy(20),
        alpha in 0.2f64..1.5,
        beta in 0.1f64..0.9,
    ) {
        let a = kernel_coeffs(&c, alpha, beta);
        let pair = solve_sonin_triangular(&a, alpha, beta).unwrap();
        prop_assert!(pair.triangular_residuals().iter().all(|&r| r <= 1e-10));
        prop_assert!(route_discrepancy(&a, alpha, beta).unwrap().iter().all(|&r| r <= 1e-12));
    }
}

#[test]
fn zero_leading_coefficient_is_rejected() {
    let c = PowerSeries::new(vec![0.0, 1.0]).unwrap();
    assert_eq!(reciprocal_series(&c), Err(Error::ZeroLeadingCoefficient));
    assert_eq!(solve_sonin_triangular(&c, 0.5, 0.5).err(), Some(Error::ZeroLeadingCoefficient));
}

#[test]
fn generator_reciprocals_match_closed_forms() {
    for g in [Generator::Exp, Generator::Binomial { gamma: 0.5 }, Generator::ExpBinomial { gamma: 1.3 }] {
        let c = g.coeffs(15);
        let d = reciprocal_series(&c).unwrap();
        let exact = g.reciprocal_coeffs(15);
        for n in 0..=15 {
            let scale: f64 = (0..=n).map(|m| (c.coeffs()[m] * exact.coeffs()[n - m]).abs()).sum();
            assert!((d.coeffs()[n] - exact.coeffs()[n]).abs() <= 1e-13 * scale, "{} n = {n}", g.name());
        }
    }
}

#[test]
fn routes_agree_at_order_forty() {
    for g in [
        Generator::Exp,
        Generator::Binomial { gamma: 0.5 },
        Generator::Binomial { gamma: 1.3 },
        Generator::Binomial { gamma: 2.0 },
        Generator::ExpBinomial { gamma: 0.7 },
    ] {
        let a = kernel_coeffs(&g.coeffs(40), 0.7, 0.4);
        let worst = route_discrepancy(&a, 0.7, 0.4).unwrap().into_iter().fold(0.0, f64::max);
        assert!(worst <= 1e-12, "{}: {worst:e}", g.name());
        let via = solve_via_reciprocal(&a, 0.7, 0.4).unwrap();
        assert_eq!(via.order(), 40);
    }
}

#[test]
fn log_domain_fallback_for_large_gamma_arguments() {
    // α·order + 1 > 170 forces the log-gamma weights. Coefficients of the
    // form c/Γ(3n+β) would underflow there, so take aₙ = (−1)ⁿ/(n!)².
    let mut a = vec![1.0f64];
    for n in 1..=60 {
        let prev = a[n - 1];
        a.push(-prev / (n * n) as f64);
    }
    let a = PowerSeries::new(a).unwrap();
    let pair = solve_sonin_triangular(&a, 3.0, 0.5).unwrap();
    assert!(pair.triangular_residuals().iter().all(|&r| r <= 1e-10));
}

#[test]
fn coefficient_condition_is_checked() {
    let a = kernel_coeffs(&Generator::Exp.coeffs(5), 0.5, 0.5);
    let b = a.clone();
    assert!(matches!(
        SeriesPairCoefficients::new(a, b, 0.5, 0.5),
        Err(Error::CoefficientConditionViolated { n: 1, .. })
    ));
}
