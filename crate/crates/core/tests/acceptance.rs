//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.
//!
//! Tolerances are fixed here and never loosened to make a run pass.

// `!(r <= tol)` is deliberate: a NaN residual must count as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sonin_core::convolution::{
    convolution_series_pair, Grid, GridConvolution, GridFunction, SampledFunction, DEFAULT_ORDER,
};
use sonin_core::kernels::{
    from_series_pair, make_kummer_pair, make_ml_sum_pair, make_phi3_pair, make_power_pair, make_prabhakar_pair,
    make_tempered_pair, make_wright_pair, make_xi2_pair, KernelSpec, Side,
};
use sonin_core::series::{kernel_coeffs, reciprocal_series, route_discrepancy, solve_sonin_triangular, Generator};
use sonin_core::special::rgamma;
use sonin_core::verify::{
    check_inverse_laplace_horn, check_laplace_pair, check_left_inverse, check_sonin, check_sonin_grid, compare_on_grid,
    default_symmetric_candidates, reduction_lattice, symmetric_uniqueness_scan, LaplaceCheckConfig,
};
use sonin_core::{Result, SeriesEvalConfig, SoninPair};

const XS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
const TOL_CLOSED: f64 = 1e-8;
const TOL_CONSTRUCTED: f64 = 1e-6;
const TOL_ROUTES: f64 = 1e-12;
const TOL_SYSTEM: f64 = 1e-10;
const TOL_REDUCTION: f64 = 1e-10;
const TOL_LAPLACE: f64 = 1e-7;
const TOL_LEFT_INVERSE: f64 = 1e-6;
const TOL_CONV_SERIES: f64 = 1e-5;
const TOL_HORN: f64 = 1e-6;
const NEGATIVE_MIN_RESIDUAL: f64 = 0.1;
const CRITERION1_BUDGET_SECS: f64 = 30.0;
const SEED: u64 = 20_240_611;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn closed_family_draws(rng: &mut ChaCha8Rng) -> Result<Vec<(String, SoninPair)>> {
    let mut pairs = Vec::new();
    for _ in 0..5 {
        let alpha = rng.gen_range(0.05..0.95);
        pairs.push((format!("power({alpha:.4})"), make_power_pair(alpha)?));
    }
    for _ in 0..3 {
        let (a, b, l) = (rng.gen_range(0.2..1.5), rng.gen_range(0.1..0.9), rng.gen_range(-1.0..1.0));
        pairs.push((format!("wright({a:.4},{b:.4},{l:.4})"), make_wright_pair(a, b, l)?));
    }
    for _ in 0..3 {
        let (a, b) = (rng.gen_range(0.2..1.5), rng.gen_range(0.1..0.9));
        let (g, l) = (rng.gen_range(0.2..2.0), rng.gen_range(0.05..1.0));
        pairs.push((format!("prabhakar({a:.4},{b:.4},{g:.4},{l:.4})"), make_prabhakar_pair(a, b, g, l)?));
    }
    for _ in 0..3 {
        let (b, g, l) = (rng.gen_range(0.1..0.9), rng.gen_range(0.2..2.0), rng.gen_range(0.05..1.0));
        pairs.push((format!("kummer({b:.4},{g:.4},{l:.4})"), make_kummer_pair(b, g, l)?));
    }
    for _ in 0..3 {
        let (a1, a2, b) = (rng.gen_range(0.3..1.3), rng.gen_range(0.3..1.3), rng.gen_range(0.1..0.9));
        let (g, l1, l2) = (rng.gen_range(0.2..2.0), rng.gen_range(0.05..1.0), rng.gen_range(-1.0..1.0));
        pairs.push((
            format!("phi3({a1:.4},{a2:.4},{b:.4},{g:.4},{l1:.4},{l2:.4})"),
            make_phi3_pair(a1, a2, b, g, l1, l2)?,
        ));
    }
    for _ in 0..3 {
        let (a1, a2, b) = (rng.gen_range(0.3..1.3), rng.gen_range(0.3..1.3), rng.gen_range(0.1..0.9));
        let (g1, g2) = (rng.gen_range(0.2..2.0), rng.gen_range(0.2..2.0));
        let (l1, l2) = (rng.gen_range(0.05..1.0), rng.gen_range(0.05..1.0));
        pairs.push((
            format!("xi2({a1:.4},{a2:.4},{b:.4},{g1:.4},{g2:.4},{l1:.4},{l2:.4})"),
            make_xi2_pair(a1, a2, b, g1, g2, l1, l2)?,
        ));
    }
    for _ in 0..3 {
        let beta = rng.gen_range(0.2..0.9);
        let alpha = rng.gen_range(0.05..beta - 0.05);
        pairs.push((format!("ml-sum({alpha:.4},{beta:.4})"), make_ml_sum_pair(alpha, beta)?));
    }
    Ok(pairs)
}

fn worst_sonin(pairs: &[(String, SoninPair)], tol: f64) -> Result<(bool, f64, String)> {
    let mut worst = (true, 0.0f64, String::new());
    for (name, pair) in pairs {
        let report = check_sonin(pair, &XS, DEFAULT_ORDER, tol)?;
        if !report.passed {
            worst.0 = false;
        }
        if !(report.max_abs_residual <= worst.1) {
            worst.1 = report.max_abs_residual;
            worst.2 = name.clone();
        }
    }
    Ok(worst)
}

fn criterion1() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pairs = closed_family_draws(&mut rng)?;
    let (passed, worst, name) = worst_sonin(&pairs, TOL_CLOSED)?;
    let secs = start.elapsed().as_secs_f64();
    Ok(outcome(
        passed && secs < CRITERION1_BUDGET_SECS,
        format!(
            "{} pairs, max |κ*k−1| = {worst:.3e} ({name}), tol {TOL_CLOSED:e}, {secs:.1}s of {CRITERION1_BUDGET_SECS}s",
            pairs.len()
        ),
    ))
}

fn exp_binomial_pair(alpha: f64, beta: f64, gamma: f64, lambda: f64) -> Result<SoninPair> {
    let a = kernel_coeffs(&Generator::ExpBinomial { gamma }.coeffs(40), alpha, beta);
    from_series_pair(&solve_sonin_triangular(&a, alpha, beta)?, lambda)
}

fn criterion2() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut pairs = Vec::new();
    for _ in 0..3 {
        let (a, r) = (rng.gen_range(0.1..0.9), rng.gen_range(0.1..2.0));
        pairs.push((format!("tempered({a:.4},{r:.4})"), make_tempered_pair(a, r)?));
    }
    for _ in 0..3 {
        let (a, b) = (rng.gen_range(0.3..1.3), rng.gen_range(0.1..0.9));
        let (g, l) = (rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0));
        pairs.push((format!("exp-binomial({a:.4},{b:.4},{g:.4},{l:.4})"), exp_binomial_pair(a, b, g, l)?));
    }
    let (passed, worst, name) = worst_sonin(&pairs, TOL_CONSTRUCTED)?;
    Ok(outcome(passed, format!("{} pairs, max |κ*k−1| = {worst:.3e} ({name}), tol {TOL_CONSTRUCTED:e}", pairs.len())))
}

fn criterion3() -> Result<Outcome> {
    let generators = [
        Generator::Exp,
        Generator::Binomial { gamma: 0.5 },
        Generator::Binomial { gamma: 1.3 },
        Generator::Binomial { gamma: 2.0 },
        Generator::ExpBinomial { gamma: 0.7 },
    ];
    let mut worst_route = 0.0f64;
    let mut worst_system = 0.0f64;
    for g in generators {
        for (alpha, beta) in [(0.7, 0.4), (0.5, 0.5), (1.3, 0.2)] {
            let a = kernel_coeffs(&g.coeffs(40), alpha, beta);
            let route = route_discrepancy(&a, alpha, beta)?;
            worst_route = route.into_iter().fold(worst_route, f64::max);
            let pair = solve_sonin_triangular(&a, alpha, beta)?;
            worst_system = pair.triangular_residuals().into_iter().fold(worst_system, f64::max);
        }
    }
    Ok(outcome(
        worst_route <= TOL_ROUTES && worst_system <= TOL_SYSTEM,
        format!("routes {worst_route:.3e} (tol {TOL_ROUTES:e}), system {worst_system:.3e} (tol {TOL_SYSTEM:e})"),
    ))
}

fn criterion4() -> Result<Outcome> {
    let report = reduction_lattice(200, SEED, TOL_REDUCTION)?;
    Ok(outcome(
        report.passed,
        format!("200 draws, max relative error {:.3e}, tol {TOL_REDUCTION:e}", report.max_abs_residual),
    ))
}

fn criterion5() -> Result<Outcome> {
    let cfg = LaplaceCheckConfig::new(vec![2.0, 4.0, 8.0])?;
    let pairs: Vec<(&str, SoninPair)> = vec![
        ("power", make_power_pair(0.35)?),
        ("tempered", make_tempered_pair(0.4, 0.7)?),
        ("ml-sum", make_ml_sum_pair(0.3, 0.6)?),
        ("wright", make_wright_pair(0.7, 0.4, 0.5)?),
        ("prabhakar", make_prabhakar_pair(0.8, 0.5, 1.3, 0.6)?),
        ("kummer", make_kummer_pair(0.45, 1.2, 0.8)?),
        ("phi3", make_phi3_pair(0.6, 0.9, 0.5, 1.1, 0.4, 0.3)?),
        ("xi2", make_xi2_pair(0.5, 0.8, 0.4, 1.2, 0.7, 0.5, 0.3)?),
    ];
    let mut passed = true;
    let mut worst = (0.0f64, "");
    for (name, pair) in &pairs {
        let report = check_laplace_pair(pair, &cfg, TOL_LAPLACE)?;
        passed &= report.passed;
        if !(report.max_abs_residual <= worst.0) {
            worst = (report.max_abs_residual, name);
        }
    }
    Ok(outcome(
        passed,
        format!(
            "{} families at p = 2, 4, 8, max residual {:.3e} ({}), tol {TOL_LAPLACE:e}",
            pairs.len(),
            worst.0,
            worst.1
        ),
    ))
}

fn criterion6() -> Result<Outcome> {
    let pairs: Vec<(&str, SoninPair)> = vec![
        ("power", make_power_pair(0.35)?),
        ("tempered", make_tempered_pair(0.4, 0.7)?),
        ("ml-sum", make_ml_sum_pair(0.3, 0.6)?),
        ("wright", make_wright_pair(0.7, 0.4, 0.5)?),
        ("prabhakar", make_prabhakar_pair(0.8, 0.5, 1.3, 0.6)?),
        ("kummer", make_kummer_pair(0.45, 1.2, 0.8)?),
        ("phi3", make_phi3_pair(0.6, 0.9, 0.5, 1.1, 0.4, 0.3)?),
        ("xi2", make_xi2_pair(0.5, 0.8, 0.4, 1.2, 0.7, 0.5, 0.3)?),
        ("exp-binomial", exp_binomial_pair(0.7, 0.4, 1.3, 0.5)?),
    ];
    let fs: [(&str, SampledFunction); 4] = [
        ("1", SampledFunction::one()),
        ("x", SampledFunction::linear()),
        ("x^2", SampledFunction::square()),
        ("exp(-x)", SampledFunction::exp_neg()),
    ];
    let mut passed = true;
    let mut worst = (0.0f64, String::new());
    for (pname, pair) in &pairs {
        for (fname, f) in &fs {
            let report = check_left_inverse(pair, f, &[0.5, 1.0, 2.0], DEFAULT_ORDER, TOL_LEFT_INVERSE)?;
            passed &= report.passed;
            if !(report.max_abs_residual <= worst.0) {
                worst = (report.max_abs_residual, format!("{pname}, f = {fname}"));
            }
        }
    }
    Ok(outcome(
        passed,
        format!(
            "{} pairs × 4 functions, max residual {:.3e} ({}), tol {TOL_LEFT_INVERSE:e}",
            pairs.len(),
            worst.0,
            worst.1
        ),
    ))
}

fn criterion7() -> Result<Outcome> {
    let (alpha, beta, lambda) = (0.7, 0.4, 0.5);
    let truncation = 30;
    let grid = Arc::new(Grid::sqrt_from_origin(5.0, 512)?);
    let base = make_power_pair(beta)?;
    let f = GridFunction::power(grid.clone(), alpha, lambda * rgamma(alpha))?;
    // f = λh_α turns the convolution series into the power-series pair with
    // generator coefficients; exp gives the Wright pair.
    let a = Generator::Exp.coeffs(truncation);
    let b = reciprocal_series(&a)?;
    let (kappa, k) = convolution_series_pair(&base, &f, &a, &b, truncation, &GridConvolution::default())?;
    let wright = make_wright_pair(alpha, beta, lambda)?;
    let mk = compare_on_grid(&kappa, |x| wright.eval(Side::Kappa, x), TOL_CONV_SERIES)?;
    let mkk = compare_on_grid(&k, |x| wright.eval(Side::K, x), TOL_CONV_SERIES)?;
    let sonin = check_sonin_grid(&kappa, &k, 8, DEFAULT_ORDER, TOL_CONV_SERIES)?;
    Ok(outcome(
        mk.passed && mkk.passed && sonin.passed,
        format!(
            "512-point grid: κ {:.3e}, k {:.3e} vs Wright closed forms; Sonin on grid {:.3e}; tol {TOL_CONV_SERIES:e}",
            mk.max_abs_residual, mkk.max_abs_residual, sonin.max_abs_residual
        ),
    ))
}

fn criterion8() -> Result<Outcome> {
    let report = check_inverse_laplace_horn(-0.7, -0.4, 0.3, 0.5, &[2.0, 4.0], TOL_HORN)?;
    Ok(outcome(
        report.passed,
        format!("p = 2, 4: max relative error {:.3e}, tol {TOL_HORN:e}", report.max_abs_residual),
    ))
}

fn criterion9() -> Result<Outcome> {
    let mismatched = SoninPair::from_kernels(
        KernelSpec::Wright { alpha: 0.7, beta: 0.4, lambda: 0.5 },
        KernelSpec::PowerLaw { alpha: 0.6 },
        SeriesEvalConfig::default(),
    )?;
    let negative = check_sonin(&mismatched, &XS, DEFAULT_ORDER, TOL_CLOSED)?;
    let scan = symmetric_uniqueness_scan(&default_symmetric_candidates(), &XS, DEFAULT_ORDER, TOL_CLOSED)?;
    let is_half = |k: &KernelSpec| match *k {
        KernelSpec::PowerLaw { alpha } => alpha == 0.5,
        KernelSpec::Wright { beta, lambda, .. } => beta == 0.5 && lambda == 0.0,
        _ => false,
    };
    let scan_ok = scan.iter().all(|c| c.passed == is_half(&c.kernel));
    let passing = scan.iter().filter(|c| c.passed).count();
    Ok(outcome(
        !negative.passed && negative.max_abs_residual > NEGATIVE_MIN_RESIDUAL && scan_ok,
        format!(
            "mismatched pair residual {:.3e} (> {NEGATIVE_MIN_RESIDUAL}); {passing} of {} symmetric candidates pass, all of them h_1/2",
            negative.max_abs_residual,
            scan.len()
        ),
    ))
}

type Criterion = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 9] = [
        ("Sonin condition, closed-form families", criterion1),
        ("Sonin condition, constructed families", criterion2),
        ("triangular system vs reciprocal series", criterion3),
        ("reduction lattice", criterion4),
        ("Laplace closed forms", criterion5),
        ("left-inverse identity", criterion6),
        ("convolution-series construction", criterion7),
        ("inverse-Laplace Horn identity", criterion8),
        ("negative control and symmetric uniqueness", criterion9),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(o) if o.passed => println!("PASS {}: {name}: {} [{secs:.1}s]", i + 1, o.detail),
            Ok(o) => {
                failures += 1;
                println!("FAIL {}: {name}: {} [{secs:.1}s]", i + 1, o.detail);
            }
            Err(e) => {
                failures += 1;
                println!("FAIL {}: {name}: error: {e} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
