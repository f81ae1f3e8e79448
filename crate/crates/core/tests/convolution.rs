use std::sync::Arc;

use sonin_core::convolution::{
    convolution_power, convolve_at, gauss_jacobi_rule, gfd_apply, gfi_apply, Decomposition, Factor, Grid,
    GridConvolution, GridFactor, GridFunction, GridTerm, PowerTerm, SampledFunction, Spacing,
};
use sonin_core::kernels::make_power_pair;
use sonin_core::special::{beta, rgamma};
use sonin_core::Error;

fn h(alpha: f64) -> Decomposition {
    Decomposition::new(vec![PowerTerm::constant(alpha, rgamma(alpha))]).unwrap()
}

#[test]
fn jacobi_rule_is_exact_for_polynomials() {
    let rule = gauss_jacobi_rule(-0.4, -0.6, 6).unwrap();
    // ∫₀¹ (1−u)^{−0.4} u^{−0.6} u³ du = B(0.6, 3.4)
    let got = rule.integrate(|u| u.powi(3));
    let want = beta(0.6, 3.4).unwrap();
    assert!((got - want).abs() <= 1e-14 * want);
    assert!(gauss_jacobi_rule(-1.0, 0.0, 4).is_err());
}

#[test]
fn power_laws_follow_the_semigroup_law() {
    let x: f64 = 2.3;
    let got = convolve_at(&h(0.3), &h(0.45), x, 32).unwrap();
    assert!((got - x.powf(-0.25) * rgamma(0.75)).abs() < 1e-14);
}

#[test]
fn function_factors_agree_with_the_exact_beta_path() {
    let x: f64 = 1.6;
    let smooth =
        Decomposition::new(vec![PowerTerm { exponent: 0.45, factor: Factor::function(|_| Ok(rgamma(0.45))) }]).unwrap();
    let got = convolve_at(&h(0.3), &smooth, x, 32).unwrap();
    assert!((got - x.powf(-0.25) * rgamma(0.75)).abs() < 1e-13);
}

#[test]
fn operators_on_the_power_pair() {
    let alpha = 0.35;
    let pair = make_power_pair(alpha).unwrap();
    let x: f64 = 1.4;
    // κ * x² = 2 h_{α+3}
    let gfi = gfi_apply(&pair, &SampledFunction::square(), x, 32).unwrap();
    assert!((gfi - 2.0 * x.powf(alpha + 2.0) * rgamma(alpha + 3.0)).abs() < 1e-13);
    // GFD of 1 is k(x)
    let gfd = gfd_apply(&pair, &SampledFunction::one(), x, 32).unwrap();
    assert!((gfd - x.powf(-alpha) * rgamma(1.0 - alpha)).abs() < 1e-13);
}

#[test]
fn sampled_functions_need_the_origin() {
    assert!(SampledFunction::from_samples(vec![0.5, 1.0], vec![1.0, 2.0]).is_err());
    assert!(SampledFunction::from_samples(vec![0.0, 1.0, 0.5], vec![1.0, 2.0, 3.0]).is_err());
}

#[test]
fn grid_validation() {
    assert!(Grid::new(0.0, 1.0, 10, Spacing::Linear).is_err());
    assert!(Grid::new(1.0, 0.5, 10, Spacing::Log).is_err());
    assert!(Grid::new(0.1, 0.1, 3, Spacing::Sqrt).is_err());
    let g = Grid::new(0.1, 5.0, 20, Spacing::Sqrt).unwrap();
    assert_eq!(g.len(), 20);
    assert!((g.points()[19] - 5.0).abs() < 1e-15);
    assert_eq!("log".parse::<Spacing>().unwrap(), Spacing::Log);
}

#[test]
fn grid_convolution_powers_of_a_power_law() {
    let grid = Arc::new(Grid::sqrt_from_origin(4.0, 128).unwrap());
    let f = GridFunction::power(grid.clone(), 0.6, rgamma(0.6)).unwrap();
    let cube = convolution_power(&f, 3, &GridConvolution::default()).unwrap();
    for &x in grid.points().iter().step_by(16) {
        let want = x.powf(0.8) * rgamma(1.8);
        assert!((cube.eval(x) - want).abs() <= 1e-13 * want.max(1.0));
    }
    let zeroth = convolution_power(&f, 0, &GridConvolution::default()).unwrap();
    assert_eq!(zeroth.eval(1.0), 1.0);
}

#[test]
fn sampled_grid_convolution_matches_closed_form() {
    // (e^{−x} * e^{−x})(x) = x e^{−x}
    let grid = Arc::new(Grid::sqrt_from_origin(3.0, 256).unwrap());
    let samples: Vec<f64> = grid.points().iter().map(|x| (-x).exp()).collect();
    let f = GridFunction::new(grid.clone(), vec![GridTerm { exponent: 1.0, factor: GridFactor::Samples(samples) }])
        .unwrap();
    let g = f.convolve(&f, &GridConvolution::default()).unwrap();
    for &x in grid.points().iter().step_by(32) {
        assert!((g.eval(x) - x * (-x).exp()).abs() < 1e-7, "x = {x}");
    }
}

#[test]
fn coarse_grids_are_reported() {
    let grid = Arc::new(Grid::new(0.1, 10.0, 12, Spacing::Linear).unwrap());
    let samples: Vec<f64> = grid.points().iter().map(|x| (5.0 * x).sin()).collect();
    let f = GridFunction::new(grid, vec![GridTerm { exponent: 1.0, factor: GridFactor::Samples(samples) }]).unwrap();
    let cfg = GridConvolution { order: 16, tolerance: 1e-6 };
    assert!(matches!(f.convolve(&f, &cfg), Err(Error::GridTooCoarse { .. })));
}
