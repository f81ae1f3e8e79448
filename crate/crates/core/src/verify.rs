//! Verification of Sonin pairs and the operators they generate.
//!
//! Every check returns a [`VerificationReport`]: one residual per point,
//! the largest absolute residual and a pass flag against a tolerance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convolution::decomposition::{Decomposition, Factor, PowerTerm};
use crate::convolution::grid::GridFunction;
use crate::convolution::jacobi::cached_rule;
use crate::convolution::operators::{gfd_regularized_apply, gfi, SampledFunction};
use crate::error::{domain, Error, Result};
use crate::kernels::{KernelSpec, Side, SoninPair};
use crate::special::{gamma_fn, rgamma, SeriesEvalConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub points: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl VerificationReport {
    /// A NaN residual makes the report fail.
    pub fn new(check_name: impl Into<String>, points: Vec<f64>, residuals: Vec<f64>, tolerance: f64) -> Self {
        assert_eq!(points.len(), residuals.len(), "one residual per point");
        let max_abs_residual =
            residuals.iter().fold(0.0f64, |m, r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r.abs()) });
        let passed = max_abs_residual <= tolerance;
        Self { check_name: check_name.into(), points, residuals, max_abs_residual, tolerance, passed }
    }
}

/// Residuals |(κ * k)(x) − 1| at the given points.
pub fn check_sonin(pair: &SoninPair, xs: &[f64], order: usize, tol: f64) -> Result<VerificationReport> {
    let mut residuals = Vec::with_capacity(xs.len());
    for &x in xs {
        if !(x > 0.0) {
            return Err(domain(format!("Sonin check points must be positive, got {x}")));
        }
        residuals.push((pair.convolve_at(x, order)? - 1.0).abs());
    }
    Ok(VerificationReport::new("sonin", xs.to_vec(), residuals, tol))
}

// ---------------------------------------------------------------------------
// Laplace domain
// ---------------------------------------------------------------------------

/// Points of a numerical Laplace transform on the real axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceCheckConfig {
    pub p_values: Vec<f64>,
    /// Upper integration limit X.
    pub truncation_x: f64,
    /// Largest acceptable estimate of ∫_X^∞ |K(x)| e^{−px} dx.
    pub tail_bound: f64,
    /// Convergence abscissa c of the pair; every p must exceed it.
    pub abscissa: f64,
}

impl LaplaceCheckConfig {
    /// X = max(20, 40/p_min), tail bound 1e-12, abscissa 0.
    pub fn new(p_values: Vec<f64>) -> Result<Self> {
        if p_values.is_empty() || p_values.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(domain("Laplace abscissae must be a non-empty list of positive numbers"));
        }
        let p_min = p_values.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(Self { truncation_x: (40.0 / p_min).max(20.0), p_values, tail_bound: 1e-12, abscissa: 0.0 })
    }
}

const PANEL_ORDER: usize = 16;
const CELL_ORDER: usize = 16;

/// ∫₀^∞ K(x) e^{−px} dx for K given by its power-term decomposition.
///
/// [0, ε] with ε = 1e-3·min(1, 1/p) is integrated term by term: constant
/// terms through the lower incomplete gamma function, function terms with a
/// Gauss–Jacobi rule carrying x^{μ−1}. The rest of [ε, X] uses 16-point
/// Gauss–Legendre panels, geometric up to min(1, 1/p) and of that width
/// beyond. The tail past X is estimated as 2|K(X)|e^{−pX}/p and must also be
/// decaying (|K(X)|e^{−pX} below its value at X/2).
pub fn laplace_transform_numeric(kernel: &Decomposition, p: f64, cfg: &LaplaceCheckConfig) -> Result<f64> {
    if !(p > cfg.abscissa) || !(p > 0.0) {
        return Err(Error::AbscissaViolation(format!(
            "p = {p} must exceed the convergence abscissa {}",
            cfg.abscissa.max(0.0)
        )));
    }
    let series = SeriesEvalConfig::default();
    let width = (1.0 / p).min(1.0);
    let eps = 1e-3 * width;
    let x_max = cfg.truncation_x;
    if !(x_max > 1.0) {
        return Err(domain(format!("truncation_x must exceed 1, got {x_max}")));
    }

    let mut total = 0.0;
    for t in kernel.terms() {
        total += match &t.factor {
            Factor::Constant(c) => {
                // c ∫₀^ε x^{μ−1} e^{−px} dx = c p^{−μ} γ(μ, pε)
                c * p.powf(-t.exponent) * series.lower_incomplete_gamma(t.exponent, p * eps)?
            }
            Factor::Function(g) => {
                let rule = cached_rule(0.0, t.exponent - 1.0, CELL_ORDER)?;
                let mut s = 0.0;
                for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let x = eps * u;
                    s += w * g(x)? * (-p * x).exp();
                }
                eps.powf(t.exponent) * s
            }
        };
    }

    let legendre = cached_rule(0.0, 0.0, PANEL_ORDER)?;
    let integrand = |x: f64| -> Result<f64> { Ok(kernel.eval(x)? * (-p * x).exp()) };
    let panel = |lo: f64, hi: f64| -> Result<f64> {
        let mut s = 0.0;
        for (&u, &w) in legendre.nodes.iter().zip(&legendre.weights) {
            s += w * integrand(lo + (hi - lo) * u)?;
        }
        Ok((hi - lo) * s)
    };
    let mut lo = eps;
    while lo < width {
        let hi = (2.0 * lo).min(width);
        total += panel(lo, hi)?;
        lo = hi;
    }
    while lo < x_max {
        let hi = (lo + width).min(x_max);
        total += panel(lo, hi)?;
        lo = hi;
    }

    let at_end = integrand(x_max)?.abs();
    let tail = 2.0 * at_end / p;
    if !(tail <= cfg.tail_bound) || at_end > integrand(0.5 * x_max)?.abs() {
        return Err(Error::TailBoundExceeded { estimate: tail, bound: cfg.tail_bound });
    }
    Ok(total)
}

fn check_abscissa(spec: &KernelSpec, p: f64) -> Result<()> {
    if spec.laplace_abscissa_ok(p) {
        Ok(())
    } else {
        Err(Error::AbscissaViolation(format!(
            "p = {p} lies outside the region where the closed-form transform holds (|λ p^(−α)| < 1)"
        )))
    }
}

/// At each p: max of |L[κ]L[k] − 1/p| and, where closed forms exist, the
/// relative errors of the numeric L[κ] and L[k] against them.
pub fn check_laplace_pair(pair: &SoninPair, cfg: &LaplaceCheckConfig, tol: f64) -> Result<VerificationReport> {
    let mut residuals = Vec::with_capacity(cfg.p_values.len());
    for &p in &cfg.p_values {
        check_abscissa(pair.kappa(), p)?;
        check_abscissa(pair.k(), p)?;
        let lk = laplace_transform_numeric(pair.terms(Side::Kappa), p, cfg)?;
        let lkk = laplace_transform_numeric(pair.terms(Side::K), p, cfg)?;
        let mut r = (lk * lkk - 1.0 / p).abs();
        for (spec, numeric) in [(pair.kappa(), lk), (pair.k(), lkk)] {
            if let Some(closed) = spec.laplace_closed_form(p) {
                r = r.max((numeric - closed).abs() / closed.abs().max(f64::MIN_POSITIVE));
            }
        }
        residuals.push(r);
    }
    Ok(VerificationReport::new("laplace", cfg.p_values.clone(), residuals, tol))
}

/// Numeric transform of one kernel against its closed form, relative error per p.
pub fn check_laplace_kernel(
    spec: &KernelSpec,
    terms: &Decomposition,
    cfg: &LaplaceCheckConfig,
    tol: f64,
) -> Result<VerificationReport> {
    let mut residuals = Vec::with_capacity(cfg.p_values.len());
    for &p in &cfg.p_values {
        check_abscissa(spec, p)?;
        let closed =
            spec.laplace_closed_form(p).ok_or_else(|| domain(format!("no closed-form transform at p = {p}")))?;
        let numeric = laplace_transform_numeric(terms, p, cfg)?;
        residuals.push((numeric - closed).abs() / closed.abs().max(f64::MIN_POSITIVE));
    }
    Ok(VerificationReport::new("laplace-kernel", cfg.p_values.clone(), residuals, tol))
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

/// Left-inverse identity: with F = κ * f, both d/dx(k * F) and k * F′ must
/// return f. Since F(0) = 0 the two differ only by k(x)F(0); the residual at
/// each point is the larger of the two errors.
pub fn check_left_inverse(
    pair: &SoninPair,
    f: &SampledFunction,
    xs: &[f64],
    order: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let big_f = gfi(pair, f, order)?;
    let mut residuals = Vec::with_capacity(xs.len());
    for &x in xs {
        let target = f.eval(x)?;
        let regularized = gfd_regularized_apply(pair, &big_f, x, order)?;
        let full = regularized + pair.eval(Side::K, x)? * big_f.value_at_zero();
        residuals.push((full - target).abs().max((regularized - target).abs()));
    }
    Ok(VerificationReport::new("left-inverse", xs.to_vec(), residuals, tol))
}

/// h_{−μ−ν}(x) Φ₃(−ν; −μ−ν; −bx, ax) must transform to p^μ (p+b)^ν e^{a/p}.
/// Compares the numeric forward transform with that closed form (relative
/// error) at each p.
pub fn check_inverse_laplace_horn(
    mu: f64,
    nu: f64,
    a: f64,
    b: f64,
    p_values: &[f64],
    tol: f64,
) -> Result<VerificationReport> {
    let sigma = -mu - nu;
    if !(sigma > 0.0) || ![mu, nu, a, b].iter().all(|v| v.is_finite()) {
        return Err(domain(format!("the inverse-Laplace formula needs mu + nu < 0, got mu = {mu}, nu = {nu}")));
    }
    if !(b >= 0.0) {
        return Err(domain(format!("b must be non-negative so that p > -b holds for every p > 0, got {b}")));
    }
    let cfg = LaplaceCheckConfig::new(p_values.to_vec())?;
    let series = SeriesEvalConfig::default();
    let scale = rgamma(sigma);
    let left = Decomposition::new(vec![PowerTerm {
        exponent: sigma,
        factor: Factor::function(move |x| Ok(scale * series.horn_phi3(-nu, sigma, -b * x, a * x)?)),
    }])?;
    let mut residuals = Vec::with_capacity(p_values.len());
    for &p in p_values {
        let closed = p.powf(mu) * (p + b).powf(nu) * (a / p).exp();
        let numeric = laplace_transform_numeric(&left, p, &cfg)?;
        residuals.push((numeric - closed).abs() / closed.abs());
    }
    Ok(VerificationReport::new("inverse-laplace-horn", p_values.to_vec(), residuals, tol))
}

// ---------------------------------------------------------------------------
// Grid pairs
// ---------------------------------------------------------------------------

/// |(κ * k)(x) − 1| at every `stride`-th grid point of two grid functions.
pub fn check_sonin_grid(
    kappa: &GridFunction,
    k: &GridFunction,
    stride: usize,
    order: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let pts = kappa.grid().points();
    let stride = stride.max(1);
    let mut points = Vec::new();
    let mut residuals = Vec::new();
    for j in (stride - 1..pts.len()).step_by(stride) {
        points.push(pts[j]);
        residuals.push((kappa.convolve_at(k, pts[j], order)? - 1.0).abs());
    }
    Ok(VerificationReport::new("sonin-grid", points, residuals, tol))
}

/// Largest |G(xᵢ) − reference(xᵢ)| over the grid, relative to max(1, |reference|).
pub fn compare_on_grid<F>(g: &GridFunction, reference: F, tol: f64) -> Result<VerificationReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let pts = g.grid().points().to_vec();
    let mut residuals = Vec::with_capacity(pts.len());
    for (x, v) in pts.iter().zip(g.values()) {
        let r = reference(*x)?;
        residuals.push((v - r).abs() / r.abs().max(1.0));
    }
    Ok(VerificationReport::new("grid-match", pts, residuals, tol))
}

// ---------------------------------------------------------------------------
// Consistency, uniqueness, reductions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub time: VerificationReport,
    pub frequency: VerificationReport,
    /// Both checks pass or both fail.
    pub consistent: bool,
}

/// Runs the time-domain and Laplace-domain Sonin checks with one tolerance
/// and flags the pair when exactly one of them passes.
pub fn check_time_frequency(
    pair: &SoninPair,
    xs: &[f64],
    laplace: &LaplaceCheckConfig,
    order: usize,
    tol: f64,
) -> Result<ConsistencyReport> {
    let time = check_sonin(pair, xs, order, tol)?;
    let mut residuals = Vec::with_capacity(laplace.p_values.len());
    for &p in &laplace.p_values {
        let lk = laplace_transform_numeric(pair.terms(Side::Kappa), p, laplace)?;
        let lkk = laplace_transform_numeric(pair.terms(Side::K), p, laplace)?;
        residuals.push((p * lk * lkk - 1.0).abs());
    }
    let frequency = VerificationReport::new("sonin-laplace", laplace.p_values.clone(), residuals, tol);
    let consistent = time.passed == frequency.passed;
    Ok(ConsistencyReport { time, frequency, consistent })
}

/// A candidate κ = k and whether it satisfied the Sonin condition.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricCandidate {
    pub kernel: KernelSpec,
    pub max_abs_residual: f64,
    pub passed: bool,
}

/// Pairs each candidate kernel with itself and runs the Sonin check. Among
/// the power-law and Wright candidates only h_{1/2} (equivalently Wright with
/// β = 1/2, λ = 0) should pass. A scan like this can falsify a symmetric
/// candidate but cannot prove that no other one exists.
pub fn symmetric_uniqueness_scan(
    candidates: &[KernelSpec],
    xs: &[f64],
    order: usize,
    tol: f64,
) -> Result<Vec<SymmetricCandidate>> {
    let mut out = Vec::with_capacity(candidates.len());
    for c in candidates {
        let pair = SoninPair::from_kernels(c.clone(), c.clone(), SeriesEvalConfig::default())?;
        let report = check_sonin(&pair, xs, order, tol)?;
        out.push(SymmetricCandidate {
            kernel: c.clone(),
            max_abs_residual: report.max_abs_residual,
            passed: report.passed,
        });
    }
    Ok(out)
}

/// Default candidate set: h_α for α = 0.1, 0.2, …, 0.9 and Wright kernels
/// with β ∈ {0.3, 0.5, 0.7}, λ ∈ {0, 0.5}, α = 0.7.
pub fn default_symmetric_candidates() -> Vec<KernelSpec> {
    let mut out: Vec<KernelSpec> = (1..=9).map(|i| KernelSpec::PowerLaw { alpha: i as f64 / 10.0 }).collect();
    for beta in [0.3, 0.5, 0.7] {
        for lambda in [0.0, 0.5] {
            out.push(KernelSpec::Wright { alpha: 0.7, beta, lambda });
        }
    }
    out
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Random draws of the four special-function reductions:
/// E^1_{α,β} = E_{α,β};  Γ(β)E^γ_{1,β} = ₁F₁(γ;β;·);
/// Γ(β)φ₃(γ;(1,1;β);y,z) = Φ₃(γ;β;y,z);  Γ(β)ξ₂(γ₁;γ₂;(1,1;β);y,z) = Ξ₂(γ₁;γ₂;β;y,z).
/// Draws: α ∈ (0.2, 1.5), β ∈ (0.1, 0.9), γ's ∈ (−1.5, 2.5), |y|, |z| ≤ 2.
/// The residual of a draw is the largest relative error of the four.
pub fn reduction_lattice(draws: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    let cfg = SeriesEvalConfig::from_env()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(draws);
    let mut residuals = Vec::with_capacity(draws);
    for i in 0..draws {
        let alpha = rng.gen_range(0.2..1.5);
        let beta = rng.gen_range(0.1..0.9);
        let gamma = rng.gen_range(-1.5..2.5);
        let gamma2 = rng.gen_range(-1.5..2.5);
        let y = rng.gen_range(-2.0..=2.0);
        let z = rng.gen_range(-2.0..=2.0);
        let gb = gamma_fn(beta)?;
        let r = [
            relative(cfg.prabhakar(alpha, beta, 1.0, z)?, cfg.mittag_leffler2(alpha, beta, z)?),
            relative(gb * cfg.prabhakar(1.0, beta, gamma, z)?, cfg.kummer_1f1(gamma, beta, z)?),
            relative(gb * cfg.phi3_general(gamma, 1.0, 1.0, beta, y, z)?, cfg.horn_phi3(gamma, beta, y, z)?),
            relative(
                gb * cfg.xi2_general(gamma, gamma2, 1.0, 1.0, beta, y, z)?,
                cfg.horn_xi2(gamma, gamma2, beta, y, z)?,
            ),
        ]
        .into_iter()
        .fold(0.0f64, f64::max);
        points.push(i as f64);
        residuals.push(r);
    }
    Ok(VerificationReport::new("reduction-lattice", points, residuals, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convolution::decomposition::DEFAULT_ORDER;
    use crate::kernels::{make_power_pair, make_wright_pair};

    #[test]
    fn report_pass_flag() {
        let r = VerificationReport::new("t", vec![1.0, 2.0], vec![1e-9, -3e-9], 1e-8);
        assert!(r.passed);
        assert_eq!(r.max_abs_residual, 3e-9);
        let r = VerificationReport::new("t", vec![1.0], vec![f64::NAN], 1.0);
        assert!(!r.passed);
    }

    #[test]
    fn power_law_transform() {
        let cfg = LaplaceCheckConfig::new(vec![2.0]).unwrap();
        let p = make_power_pair(0.3).unwrap();
        let v = laplace_transform_numeric(p.terms(Side::Kappa), 2.0, &cfg).unwrap();
        assert!((v - 2f64.powf(-0.3)).abs() < 1e-12);
    }

    #[test]
    fn abscissa_is_enforced() {
        let mut cfg = LaplaceCheckConfig::new(vec![2.0]).unwrap();
        cfg.abscissa = 3.0;
        let p = make_power_pair(0.3).unwrap();
        assert!(matches!(laplace_transform_numeric(p.terms(Side::Kappa), 2.0, &cfg), Err(Error::AbscissaViolation(_))));
    }

    #[test]
    fn growing_kernel_exceeds_tail_bound() {
        let d =
            Decomposition::new(vec![PowerTerm { exponent: 1.0, factor: Factor::function(|x| Ok((2.0 * x).exp())) }])
                .unwrap();
        let cfg = LaplaceCheckConfig::new(vec![1.0]).unwrap();
        assert!(matches!(laplace_transform_numeric(&d, 1.0, &cfg), Err(Error::TailBoundExceeded { .. })));
    }

    #[test]
    fn wright_pair_sonin() {
        let p = make_wright_pair(0.7, 0.4, 0.5).unwrap();
        assert!(check_sonin(&p, &[0.5, 1.0, 2.0], DEFAULT_ORDER, 1e-8).unwrap().passed);
    }
}
