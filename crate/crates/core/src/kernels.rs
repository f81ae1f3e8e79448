//! Catalog of Sonin kernel pairs.
//!
//! A [`KernelSpec`] is one kernel. A [`SoninPair`] holds (κ, k) together with
//! their power-term decompositions, which the quadrature needs. Every
//! symmetric family maps its associated kernel back into the same family
//! (β ↦ 1−β, γ ↦ −γ, …), so the k side reuses the κ-side evaluator.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::convolution::decomposition::{convolve_at, Decomposition, Factor, PowerTerm, DEFAULT_ORDER};
use crate::error::{domain, Error, Result};
use crate::series::{kernel_coeffs, solve_sonin_triangular, Generator, SeriesPairCoefficients};
use crate::special::{ln_abs_gamma, pochhammer, rgamma, SeriesEvalConfig};

/// Width (in exponent) of the band of leading power terms that are split off
/// exactly; whatever lies beyond is at least C³ at the origin.
pub const SINGULAR_SPAN: f64 = 4.0;

/// Upper bound on the number of split-off power terms.
pub const MAX_LEADING_TERMS: usize = 256;

/// Spot-check abscissae and tolerance applied when a pair is constructed.
pub const SPOT_CHECK_POINTS: [f64; 3] = [0.5, 1.0, 2.0];
pub const SPOT_CHECK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Kappa,
    K,
}

impl Side {
    pub fn name(&self) -> &'static str {
        match self {
            Side::Kappa => "kappa",
            Side::K => "k",
        }
    }
}

/// A single kernel on (0, ∞).
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// h_α(x) = x^{α−1}/Γ(α)
    PowerLaw { alpha: f64 },
    /// κ side: x^{α−1}e^{−ρx}/Γ(α); k side: h_{1−α,ρ}(x) + ρ∫₀ˣ h_{1−α,ρ}
    Tempered { alpha: f64, rho: f64, side: Side },
    /// κ side: h_{1−β+α} + h_{1−β}; k side: x^{β−1}E_{α,β}(−x^α)
    MlSum { alpha: f64, beta: f64, side: Side },
    /// x^{β−1} W_{α,β}(λx^α)
    Wright { alpha: f64, beta: f64, lambda: f64 },
    /// x^{β−1} E^γ_{α,β}(−λx^α)
    Prabhakar { alpha: f64, beta: f64, gamma: f64, lambda: f64 },
    /// x^{β−1} ₁F₁(γ; β; −λx) / Γ(β)
    Kummer { beta: f64, gamma: f64, lambda: f64 },
    /// x^{β−1} φ₃(γ; (α₁, α₂; β); −λ₁x^{α₁}, λ₂x^{α₂})
    Phi3 { alpha1: f64, alpha2: f64, beta: f64, gamma: f64, lambda1: f64, lambda2: f64 },
    /// x^{β−1} ξ₂(γ₁; γ₂; (α₁, α₂; β); −λ₁x^{α₁}, −λ₂x^{α₂})
    Xi2 { alpha1: f64, alpha2: f64, beta: f64, gamma1: f64, gamma2: f64, lambda1: f64, lambda2: f64 },
    /// x^{e−1} Σ cₙ (λx^α)ⁿ, usable for |λx^α| ≤ radius
    SeriesDefined { coeffs: Vec<f64>, alpha: f64, exponent: f64, lambda: f64, radius: f64 },
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(domain(format!("{name} must lie in (0, 1), got {v}")))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be positive, got {v}")))
    }
}

fn check_finite(pairs: &[(&str, f64)]) -> Result<()> {
    for (name, v) in pairs {
        if !v.is_finite() {
            return Err(domain(format!("{name} must be finite, got {v}")));
        }
    }
    Ok(())
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::PowerLaw { alpha } => check_unit("alpha", alpha),
            KernelSpec::Tempered { alpha, rho, .. } => {
                check_unit("alpha", alpha)?;
                check_positive("rho", rho)
            }
            KernelSpec::MlSum { alpha, beta, .. } => {
                check_unit("alpha", alpha)?;
                check_unit("beta", beta)?;
                if alpha >= beta {
                    return Err(domain(format!("ml-sum needs alpha < beta, got {alpha} >= {beta}")));
                }
                Ok(())
            }
            KernelSpec::Wright { alpha, beta, lambda } => {
                check_positive("alpha", alpha)?;
                check_unit("beta", beta)?;
                check_finite(&[("lambda", lambda)])
            }
            KernelSpec::Prabhakar { alpha, beta, gamma, lambda } => {
                check_positive("alpha", alpha)?;
                check_unit("beta", beta)?;
                check_finite(&[("gamma", gamma), ("lambda", lambda)])
            }
            KernelSpec::Kummer { beta, gamma, lambda } => {
                check_unit("beta", beta)?;
                check_finite(&[("gamma", gamma), ("lambda", lambda)])
            }
            KernelSpec::Phi3 { alpha1, alpha2, beta, gamma, lambda1, lambda2 } => {
                check_positive("alpha1", alpha1)?;
                check_positive("alpha2", alpha2)?;
                check_unit("beta", beta)?;
                check_finite(&[("gamma", gamma), ("lambda1", lambda1), ("lambda2", lambda2)])
            }
            KernelSpec::Xi2 { alpha1, alpha2, beta, gamma1, gamma2, lambda1, lambda2 } => {
                check_positive("alpha1", alpha1)?;
                check_positive("alpha2", alpha2)?;
                check_unit("beta", beta)?;
                check_finite(&[("gamma1", gamma1), ("gamma2", gamma2), ("lambda1", lambda1), ("lambda2", lambda2)])
            }
            KernelSpec::SeriesDefined { ref coeffs, alpha, exponent, lambda, radius } => {
                check_positive("alpha", alpha)?;
                check_unit("exponent", exponent)?;
                check_finite(&[("lambda", lambda)])?;
                if !(radius > 0.0) {
                    return Err(domain(format!("radius must be positive, got {radius}")));
                }
                if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(domain("series coefficients must be finite and non-empty"));
                }
                Ok(())
            }
        }
    }

    /// Exponent μ of the leading x^{μ−1} behaviour at the origin.
    pub fn leading_exponent(&self) -> f64 {
        match *self {
            KernelSpec::PowerLaw { alpha } => alpha,
            KernelSpec::Tempered { alpha, side: Side::Kappa, .. } => alpha,
            KernelSpec::Tempered { alpha, side: Side::K, .. } => 1.0 - alpha,
            KernelSpec::MlSum { beta, side: Side::Kappa, .. } => 1.0 - beta,
            KernelSpec::MlSum { beta, side: Side::K, .. } => beta,
            KernelSpec::Wright { beta, .. }
            | KernelSpec::Prabhakar { beta, .. }
            | KernelSpec::Kummer { beta, .. }
            | KernelSpec::Phi3 { beta, .. }
            | KernelSpec::Xi2 { beta, .. } => beta,
            KernelSpec::SeriesDefined { exponent, .. } => exponent,
        }
    }

    /// Rejects arguments outside the usable range of a truncated series.
    pub fn check_argument(&self, x: f64) -> Result<()> {
        if let KernelSpec::SeriesDefined { alpha, lambda, radius, .. } = *self {
            let z = (lambda * x.powf(alpha)).abs();
            if z > radius {
                return Err(Error::RadiusExceeded { argument: z, radius });
            }
        }
        Ok(())
    }

    /// Pointwise value at x > 0.
    pub fn eval(&self, x: f64, cfg: &SeriesEvalConfig) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(domain(format!("kernels are evaluated at finite x > 0, got {x}")));
        }
        self.check_argument(x)?;
        match *self {
            KernelSpec::PowerLaw { alpha } => Ok(x.powf(alpha - 1.0) * rgamma(alpha)),
            KernelSpec::Tempered { alpha, rho, side: Side::Kappa } => {
                Ok(x.powf(alpha - 1.0) * (-rho * x).exp() * rgamma(alpha))
            }
            KernelSpec::Tempered { alpha, rho, side: Side::K } => {
                let s = 1.0 - alpha;
                let tail = cfg.lower_gamma_series(s, rho * x)?;
                Ok(x.powf(-alpha) * (-rho * x).exp() * rgamma(s) * (1.0 + rho * x * tail))
            }
            KernelSpec::MlSum { alpha, beta, side: Side::Kappa } => {
                let (e1, e2) = (1.0 - beta + alpha, 1.0 - beta);
                Ok(x.powf(e1 - 1.0) * rgamma(e1) + x.powf(e2 - 1.0) * rgamma(e2))
            }
            KernelSpec::MlSum { alpha, beta, side: Side::K } => {
                Ok(x.powf(beta - 1.0) * cfg.mittag_leffler2(alpha, beta, -x.powf(alpha))?)
            }
            KernelSpec::Wright { alpha, beta, lambda } => {
                Ok(x.powf(beta - 1.0) * cfg.wright(alpha, beta, lambda * x.powf(alpha))?)
            }
            KernelSpec::Prabhakar { alpha, beta, gamma, lambda } => {
                Ok(x.powf(beta - 1.0) * cfg.prabhakar(alpha, beta, gamma, -lambda * x.powf(alpha))?)
            }
            KernelSpec::Kummer { beta, gamma, lambda } => {
                Ok(x.powf(beta - 1.0) * cfg.kummer_1f1(gamma, beta, -lambda * x)? * rgamma(beta))
            }
            KernelSpec::Phi3 { alpha1, alpha2, beta, gamma, lambda1, lambda2 } => {
                let v =
                    cfg.phi3_general(gamma, alpha1, alpha2, beta, -lambda1 * x.powf(alpha1), lambda2 * x.powf(alpha2))?;
                Ok(x.powf(beta - 1.0) * v)
            }
            KernelSpec::Xi2 { alpha1, alpha2, beta, gamma1, gamma2, lambda1, lambda2 } => {
                let v = cfg.xi2_general(
                    gamma1,
                    gamma2,
                    alpha1,
                    alpha2,
                    beta,
                    -lambda1 * x.powf(alpha1),
                    -lambda2 * x.powf(alpha2),
                )?;
                Ok(x.powf(beta - 1.0) * v)
            }
            KernelSpec::SeriesDefined { ref coeffs, alpha, exponent, lambda, .. } => {
                let z = lambda * x.powf(alpha);
                let s = coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c);
                Ok(x.powf(exponent - 1.0) * s)
            }
        }
    }

    /// Power terms c·x^{μ−1} of the expansion at the origin with μ ≤ `cut`,
    /// and whether these terms are the whole kernel.
    fn power_terms(&self, cut: f64) -> (Vec<(f64, f64)>, bool) {
        fn single<F: Fn(usize) -> f64>(mu0: f64, step: f64, cut: f64, coeff: F) -> Vec<(f64, f64)> {
            let mut out = Vec::new();
            let mut n = 0;
            while mu0 + step * n as f64 <= cut && out.len() <= 4 * MAX_LEADING_TERMS {
                out.push((mu0 + step * n as f64, coeff(n)));
                n += 1;
            }
            out
        }
        fn double<F: Fn(usize, usize) -> f64>(mu0: f64, s1: f64, s2: f64, cut: f64, coeff: F) -> Vec<(f64, f64)> {
            let mut out = Vec::new();
            let mut m = 0;
            while mu0 + s1 * m as f64 <= cut && out.len() <= 4 * MAX_LEADING_TERMS {
                let mut n = 0;
                while mu0 + s1 * m as f64 + s2 * n as f64 <= cut && out.len() <= 4 * MAX_LEADING_TERMS {
                    out.push((mu0 + s1 * m as f64 + s2 * n as f64, coeff(m, n)));
                    n += 1;
                }
                m += 1;
            }
            out
        }
        let ipow = |v: f64, n: usize| v.powi(n as i32);
        let fact = |n: usize| pochhammer(1.0, n);
        match *self {
            KernelSpec::PowerLaw { alpha } => (vec![(alpha, rgamma(alpha))], true),
            KernelSpec::MlSum { alpha, beta, side: Side::Kappa } => {
                let (e1, e2) = (1.0 - beta + alpha, 1.0 - beta);
                (vec![(e2, rgamma(e2)), (e1, rgamma(e1))], true)
            }
            KernelSpec::MlSum { alpha, beta, side: Side::K } => {
                (single(beta, alpha, cut, |n| ipow(-1.0, n) * rgamma(alpha * n as f64 + beta)), false)
            }
            KernelSpec::Wright { alpha, beta, lambda } => (
                single(beta, alpha, cut, |n| ipow(lambda, n) / fact(n) * rgamma(alpha * n as f64 + beta)),
                lambda == 0.0,
            ),
            KernelSpec::Prabhakar { alpha, beta, gamma, lambda } => (
                single(beta, alpha, cut, |n| {
                    pochhammer(gamma, n) * ipow(-lambda, n) / fact(n) * rgamma(alpha * n as f64 + beta)
                }),
                lambda == 0.0 || gamma == 0.0,
            ),
            KernelSpec::Kummer { beta, gamma, lambda } => (
                single(beta, 1.0, cut, |n| pochhammer(gamma, n) * ipow(-lambda, n) / fact(n) * rgamma(n as f64 + beta)),
                lambda == 0.0 || gamma == 0.0,
            ),
            KernelSpec::Phi3 { alpha1, alpha2, beta, gamma, lambda1, lambda2 } => (
                double(beta, alpha1, alpha2, cut, |m, n| {
                    pochhammer(gamma, m) * ipow(-lambda1, m) * ipow(lambda2, n) / (fact(m) * fact(n))
                        * rgamma(alpha1 * m as f64 + alpha2 * n as f64 + beta)
                }),
                (lambda1 == 0.0 || gamma == 0.0) && lambda2 == 0.0,
            ),
            KernelSpec::Xi2 { alpha1, alpha2, beta, gamma1, gamma2, lambda1, lambda2 } => (
                double(beta, alpha1, alpha2, cut, |m, n| {
                    pochhammer(gamma1, m) * pochhammer(gamma2, n) * ipow(-lambda1, m) * ipow(-lambda2, n)
                        / (fact(m) * fact(n))
                        * rgamma(alpha1 * m as f64 + alpha2 * n as f64 + beta)
                }),
                (lambda1 == 0.0 || gamma1 == 0.0) && (lambda2 == 0.0 || gamma2 == 0.0),
            ),
            KernelSpec::SeriesDefined { ref coeffs, alpha, exponent, lambda, .. } => (
                coeffs.iter().enumerate().map(|(n, c)| (exponent + alpha * n as f64, c * ipow(lambda, n))).collect(),
                true,
            ),
            KernelSpec::Tempered { .. } => (Vec::new(), false),
        }
    }

    /// Splits the kernel into Σ x^{μᵢ−1}gᵢ(x): exact leading power terms plus
    /// (when the expansion is infinite) one remainder term x⁰·R(x), where R is
    /// the kernel minus its leading terms.
    pub fn decompose(&self, cfg: &SeriesEvalConfig) -> Result<Decomposition> {
        self.validate()?;
        if let KernelSpec::Tempered { alpha, rho, side } = *self {
            return Ok(tempered_terms(alpha, rho, side, *cfg));
        }
        let mu0 = self.leading_exponent();
        let (mut terms, exhaustive) = self.power_terms(mu0 + SINGULAR_SPAN);
        terms.retain(|t| t.1 != 0.0 || t.0 == mu0);
        terms.sort_by(|a, b| a.0.total_cmp(&b.0));
        if !exhaustive && terms.len() > MAX_LEADING_TERMS {
            let cap = terms[MAX_LEADING_TERMS].0;
            terms.retain(|t| t.0 < cap);
            if cap <= 2.0 {
                return Err(domain(format!(
                    "exponent steps are too small to split off the singular part (cut at {cap})"
                )));
            }
        }
        let mut out: Vec<PowerTerm> = terms.iter().map(|&(mu, c)| PowerTerm::constant(mu, c)).collect();
        if !exhaustive {
            let kernel = self.clone();
            let cfg = *cfg;
            let leading = terms;
            out.push(PowerTerm {
                exponent: 1.0,
                factor: Factor::function(move |x| {
                    if x <= 0.0 {
                        return Ok(0.0);
                    }
                    let mut s = kernel.eval(x, &cfg)?;
                    for &(mu, c) in &leading {
                        s -= c * x.powf(mu - 1.0);
                    }
                    Ok(s)
                }),
            });
        }
        Decomposition::new(out)
    }

    /// Laplace transform in closed form at real p > 0, when one is available.
    pub fn laplace_closed_form(&self, p: f64) -> Option<f64> {
        let base = |lambda: f64, alpha: f64| 1.0 + lambda * p.powf(-alpha);
        let v = match *self {
            KernelSpec::PowerLaw { alpha } => p.powf(-alpha),
            KernelSpec::Tempered { alpha, rho, side: Side::Kappa } => (p + rho).powf(-alpha),
            KernelSpec::Tempered { alpha, rho, side: Side::K } => (p + rho).powf(alpha) / p,
            KernelSpec::MlSum { alpha, beta, side: Side::Kappa } => p.powf(beta - alpha - 1.0) + p.powf(beta - 1.0),
            KernelSpec::MlSum { alpha, beta, side: Side::K } => p.powf(alpha - beta) / (p.powf(alpha) + 1.0),
            KernelSpec::Wright { alpha, beta, lambda } => p.powf(-beta) * (lambda * p.powf(-alpha)).exp(),
            KernelSpec::Prabhakar { alpha, beta, gamma, lambda } => p.powf(-beta) * base(lambda, alpha).powf(-gamma),
            KernelSpec::Kummer { beta, gamma, lambda } => p.powf(-beta) * base(lambda, 1.0).powf(-gamma),
            KernelSpec::Phi3 { alpha1, alpha2, beta, gamma, lambda1, lambda2 } => {
                p.powf(-beta) * base(lambda1, alpha1).powf(-gamma) * (lambda2 * p.powf(-alpha2)).exp()
            }
            KernelSpec::Xi2 { alpha1, alpha2, beta, gamma1, gamma2, lambda1, lambda2 } => {
                p.powf(-beta) * base(lambda1, alpha1).powf(-gamma1) * base(lambda2, alpha2).powf(-gamma2)
            }
            KernelSpec::SeriesDefined { ref coeffs, alpha, exponent, lambda, .. } => {
                let mut s = 0.0;
                for (n, c) in coeffs.iter().enumerate() {
                    let e = alpha * n as f64 + exponent;
                    let (lg, _) = ln_abs_gamma(e).ok()?;
                    s += c * lambda.powi(n as i32) * (lg - e * p.ln()).exp();
                }
                s
            }
        };
        v.is_finite().then_some(v)
    }

    /// Whether p lies where the closed-form transform is the termwise
    /// transform of the defining series (|λᵢ p^{−αᵢ}| < 1 for binomial factors).
    pub fn laplace_abscissa_ok(&self, p: f64) -> bool {
        if !(p > 0.0) {
            return false;
        }
        let small = |lambda: f64, alpha: f64| (lambda * p.powf(-alpha)).abs() < 1.0;
        match *self {
            KernelSpec::Prabhakar { alpha, gamma, lambda, .. } => gamma == 0.0 || small(lambda, alpha),
            KernelSpec::Kummer { gamma, lambda, .. } => gamma == 0.0 || small(lambda, 1.0),
            KernelSpec::Phi3 { alpha1, gamma, lambda1, .. } => gamma == 0.0 || small(lambda1, alpha1),
            KernelSpec::Xi2 { alpha1, alpha2, gamma1, gamma2, lambda1, lambda2, .. } => {
                (gamma1 == 0.0 || small(lambda1, alpha1)) && (gamma2 == 0.0 || small(lambda2, alpha2))
            }
            _ => true,
        }
    }
}

fn tempered_terms(alpha: f64, rho: f64, side: Side, cfg: SeriesEvalConfig) -> Decomposition {
    let terms = match side {
        Side::Kappa => {
            let c = rgamma(alpha);
            vec![PowerTerm { exponent: alpha, factor: Factor::function(move |x| Ok(c * (-rho * x).exp())) }]
        }
        Side::K => {
            let s = 1.0 - alpha;
            let c = rgamma(s);
            vec![
                PowerTerm { exponent: s, factor: Factor::function(move |x| Ok(c * (-rho * x).exp())) },
                PowerTerm {
                    exponent: s + 1.0,
                    factor: Factor::function(move |x| {
                        Ok(c * rho * (-rho * x).exp() * cfg.lower_gamma_series(s, rho * x)?)
                    }),
                },
            ]
        }
    };
    Decomposition::new(terms).expect("tempered exponents are positive")
}

// ---------------------------------------------------------------------------
// Pair specifications
// ---------------------------------------------------------------------------

/// A named catalog pair with its parameters; serializes as
/// `{"family": "...", "params": {"name": value, ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPairSpec", into = "RawPairSpec")]
pub enum PairSpec {
    Power { alpha: f64 },
    Tempered { alpha: f64, rho: f64 },
    MlSum { alpha: f64, beta: f64 },
    Wright { alpha: f64, beta: f64, lambda: f64 },
    Prabhakar { alpha: f64, beta: f64, gamma: f64, lambda: f64 },
    Kummer { beta: f64, gamma: f64, lambda: f64 },
    Phi3 { alpha1: f64, alpha2: f64, beta: f64, gamma: f64, lambda1: f64, lambda2: f64 },
    Xi2 { alpha1: f64, alpha2: f64, beta: f64, gamma1: f64, gamma2: f64, lambda1: f64, lambda2: f64 },
    Series { generator: Generator, alpha: f64, beta: f64, lambda: f64, order: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawPairSpec {
    family: String,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

/// Family names accepted in pair specifications.
pub const FAMILIES: [&str; 11] = [
    "power",
    "tempered",
    "ml-sum",
    "wright",
    "prabhakar",
    "kummer",
    "phi3",
    "xi2",
    "series-exp",
    "series-binomial",
    "series-exp-binomial",
];

impl PairSpec {
    pub fn family(&self) -> &'static str {
        match self {
            PairSpec::Power { .. } => "power",
            PairSpec::Tempered { .. } => "tempered",
            PairSpec::MlSum { .. } => "ml-sum",
            PairSpec::Wright { .. } => "wright",
            PairSpec::Prabhakar { .. } => "prabhakar",
            PairSpec::Kummer { .. } => "kummer",
            PairSpec::Phi3 { .. } => "phi3",
            PairSpec::Xi2 { .. } => "xi2",
            PairSpec::Series { generator: Generator::Exp, .. } => "series-exp",
            PairSpec::Series { generator: Generator::Binomial { .. }, .. } => "series-binomial",
            PairSpec::Series { generator: Generator::ExpBinomial { .. }, .. } => "series-exp-binomial",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let list: Vec<(&str, f64)> = match *self {
            PairSpec::Power { alpha } => vec![("alpha", alpha)],
            PairSpec::Tempered { alpha, rho } => vec![("alpha", alpha), ("rho", rho)],
            PairSpec::MlSum { alpha, beta } => vec![("alpha", alpha), ("beta", beta)],
            PairSpec::Wright { alpha, beta, lambda } => vec![("alpha", alpha), ("beta", beta), ("lambda", lambda)],
            PairSpec::Prabhakar { alpha, beta, gamma, lambda } => {
                vec![("alpha", alpha), ("beta", beta), ("gamma", gamma), ("lambda", lambda)]
            }
            PairSpec::Kummer { beta, gamma, lambda } => vec![("beta", beta), ("gamma", gamma), ("lambda", lambda)],
            PairSpec::Phi3 { alpha1, alpha2, beta, gamma, lambda1, lambda2 } => vec![
                ("alpha1", alpha1),
                ("alpha2", alpha2),
                ("beta", beta),
                ("gamma", gamma),
                ("lambda1", lambda1),
                ("lambda2", lambda2),
            ],
            PairSpec::Xi2 { alpha1, alpha2, beta, gamma1, gamma2, lambda1, lambda2 } => vec![
                ("alpha1", alpha1),
                ("alpha2", alpha2),
                ("beta", beta),
                ("gamma1", gamma1),
                ("gamma2", gamma2),
                ("lambda1", lambda1),
                ("lambda2", lambda2),
            ],
            PairSpec::Series { generator, alpha, beta, lambda, order } => {
                let mut v = vec![("alpha", alpha), ("beta", beta), ("lambda", lambda), ("order", order as f64)];
                match generator {
                    Generator::Binomial { gamma } | Generator::ExpBinomial { gamma } => v.push(("gamma", gamma)),
                    Generator::Exp => {}
                }
                v
            }
        };
        list.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// Builds a spec from a family name and named parameters. Unknown
    /// parameter names are rejected; `order` defaults to 40 for series pairs.
    pub fn from_params(family: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match family {
            "power" => &["alpha"],
            "tempered" => &["alpha", "rho"],
            "ml-sum" => &["alpha", "beta"],
            "wright" => &["alpha", "beta", "lambda"],
            "prabhakar" => &["alpha", "beta", "gamma", "lambda"],
            "kummer" => &["beta", "gamma", "lambda"],
            "phi3" => &["alpha1", "alpha2", "beta", "gamma", "lambda1", "lambda2"],
            "xi2" => &["alpha1", "alpha2", "beta", "gamma1", "gamma2", "lambda1", "lambda2"],
            "series-exp" => &["alpha", "beta", "lambda", "order"],
            "series-binomial" | "series-exp-binomial" => &["alpha", "beta", "gamma", "lambda", "order"],
            other => return Err(domain(format!("unknown family {other:?}; expected one of {}", FAMILIES.join(", ")))),
        };
        if let Some(extra) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(domain(format!("family {family} has no parameter {extra:?}; expected {allowed:?}")));
        }
        let get = |name: &str| -> Result<f64> {
            params.get(name).copied().ok_or_else(|| domain(format!("family {family} needs parameter {name:?}")))
        };
        let order = || -> Result<usize> {
            match params.get("order") {
                None => Ok(crate::series::DEFAULT_ORDER),
                Some(&o) if o >= 0.0 && o.fract() == 0.0 && o <= 10_000.0 => Ok(o as usize),
                Some(&o) => Err(domain(format!("order must be a non-negative integer, got {o}"))),
            }
        };
        Ok(match family {
            "power" => PairSpec::Power { alpha: get("alpha")? },
            "tempered" => PairSpec::Tempered { alpha: get("alpha")?, rho: get("rho")? },
            "ml-sum" => PairSpec::MlSum { alpha: get("alpha")?, beta: get("beta")? },
            "wright" => PairSpec::Wright { alpha: get("alpha")?, beta: get("beta")?, lambda: get("lambda")? },
            "prabhakar" => PairSpec::Prabhakar {
                alpha: get("alpha")?,
                beta: get("beta")?,
                gamma: get("gamma")?,
                lambda: get("lambda")?,
            },
            "kummer" => PairSpec::Kummer { beta: get("beta")?, gamma: get("gamma")?, lambda: get("lambda")? },
            "phi3" => PairSpec::Phi3 {
                alpha1: get("alpha1")?,
                alpha2: get("alpha2")?,
                beta: get("beta")?,
                gamma: get("gamma")?,
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
            },
            "xi2" => PairSpec::Xi2 {
                alpha1: get("alpha1")?,
                alpha2: get("alpha2")?,
                beta: get("beta")?,
                gamma1: get("gamma1")?,
                gamma2: get("gamma2")?,
                lambda1: get("lambda1")?,
                lambda2: get("lambda2")?,
            },
            _ => {
                let generator = match family {
                    "series-exp" => Generator::Exp,
                    "series-binomial" => Generator::Binomial { gamma: get("gamma")? },
                    _ => Generator::ExpBinomial { gamma: get("gamma")? },
                };
                PairSpec::Series {
                    generator,
                    alpha: get("alpha")?,
                    beta: get("beta")?,
                    lambda: get("lambda")?,
                    order: order()?,
                }
            }
        })
    }

    /// (κ, k) kernel specifications; for series pairs this solves for the
    /// coefficients first.
    pub fn kernels(&self) -> Result<(KernelSpec, KernelSpec)> {
        Ok(match *self {
            PairSpec::Power { alpha } => (KernelSpec::PowerLaw { alpha }, KernelSpec::PowerLaw { alpha: 1.0 - alpha }),
            PairSpec::Tempered { alpha, rho } => (
                KernelSpec::Tempered { alpha, rho, side: Side::Kappa },
                KernelSpec::Tempered { alpha, rho, side: Side::K },
            ),
            PairSpec::MlSum { alpha, beta } => {
                (KernelSpec::MlSum { alpha, beta, side: Side::Kappa }, KernelSpec::MlSum { alpha, beta, side: Side::K })
            }
            PairSpec::Wright { alpha, beta, lambda } => (
                KernelSpec::Wright { alpha, beta, lambda },
                KernelSpec::Wright { alpha, beta: 1.0 - beta, lambda: -lambda },
            ),
            PairSpec::Prabhakar { alpha, beta, gamma, lambda } => (
                KernelSpec::Prabhakar { alpha, beta, gamma, lambda },
                KernelSpec::Prabhakar { alpha, beta: 1.0 - beta, gamma: -gamma, lambda },
            ),
            PairSpec::Kummer { beta, gamma, lambda } => (
                KernelSpec::Kummer { beta, gamma, lambda },
                KernelSpec::Kummer { beta: 1.0 - beta, gamma: -gamma, lambda },
            ),
            PairSpec::Phi3 { alpha1, alpha2, beta, gamma, lambda1, lambda2 } => (
                KernelSpec::Phi3 { alpha1, alpha2, beta, gamma, lambda1, lambda2 },
                KernelSpec::Phi3 { alpha1, alpha2, beta: 1.0 - beta, gamma: -gamma, lambda1, lambda2: -lambda2 },
            ),
            PairSpec::Xi2 { alpha1, alpha2, beta, gamma1, gamma2, lambda1, lambda2 } => (
                KernelSpec::Xi2 { alpha1, alpha2, beta, gamma1, gamma2, lambda1, lambda2 },
                KernelSpec::Xi2 {
                    alpha1,
                    alpha2,
                    beta: 1.0 - beta,
                    gamma1: -gamma1,
                    gamma2: -gamma2,
                    lambda1,
                    lambda2,
                },
            ),
            PairSpec::Series { alpha, beta, lambda, .. } => {
                let coeffs = self.series_coefficients()?.expect("series spec");
                series_kernels(&coeffs, lambda, alpha, beta)
            }
        })
    }

    /// Coefficient pair of a series spec, solved through the triangular system.
    pub fn series_coefficients(&self) -> Result<Option<SeriesPairCoefficients>> {
        match *self {
            PairSpec::Series { generator, alpha, beta, order, .. } => {
                if !(alpha > 0.0) || !(beta > 0.0 && beta < 1.0) {
                    return Err(domain(format!(
                        "series pairs need alpha > 0 and beta in (0, 1), got ({alpha}, {beta})"
                    )));
                }
                let a = kernel_coeffs(&generator.coeffs(order), alpha, beta);
                Ok(Some(solve_sonin_triangular(&a, alpha, beta)?))
            }
            _ => Ok(None),
        }
    }

    /// Constructs and spot-checks the pair.
    pub fn build(&self, cfg: &SeriesEvalConfig) -> Result<SoninPair> {
        let (kappa, k) = self.kernels()?;
        SoninPair::checked(Some(self.clone()), kappa, k, *cfg)
    }
}

fn series_kernels(coeffs: &SeriesPairCoefficients, lambda: f64, alpha: f64, beta: f64) -> (KernelSpec, KernelSpec) {
    let radius = coeffs.radius();
    (
        KernelSpec::SeriesDefined { coeffs: coeffs.a().coeffs().to_vec(), alpha, exponent: beta, lambda, radius },
        KernelSpec::SeriesDefined { coeffs: coeffs.b().coeffs().to_vec(), alpha, exponent: 1.0 - beta, lambda, radius },
    )
}

impl TryFrom<RawPairSpec> for PairSpec {
    type Error = Error;
    fn try_from(raw: RawPairSpec) -> Result<Self> {
        PairSpec::from_params(&raw.family, &raw.params)
    }
}

impl From<PairSpec> for RawPairSpec {
    fn from(spec: PairSpec) -> Self {
        RawPairSpec { family: spec.family().to_string(), params: spec.params() }
    }
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.family())?;
        for (i, (k, v)) in self.params().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Pairs
// ---------------------------------------------------------------------------

/// A (κ, k) pair with the decompositions used by the quadrature.
#[derive(Debug, Clone)]
pub struct SoninPair {
    spec: Option<PairSpec>,
    kappa: KernelSpec,
    k: KernelSpec,
    config: SeriesEvalConfig,
    kappa_terms: Decomposition,
    k_terms: Decomposition,
}

impl SoninPair {
    /// Validates both kernels, checks that they lie in C₋₁ with matching
    /// leading exponents, and spot-checks the Sonin condition.
    fn checked(spec: Option<PairSpec>, kappa: KernelSpec, k: KernelSpec, config: SeriesEvalConfig) -> Result<Self> {
        let pair = Self::from_kernels(kappa, k, config)?;
        let (mk, mk2) = (pair.kappa.leading_exponent(), pair.k.leading_exponent());
        if (mk + mk2 - 1.0).abs() > 1e-12 || !(mk2 > 0.0 && mk2 < 1.0) {
            return Err(domain(format!(
                "leading exponents {mk} and {mk2} cannot form a Sonin pair (they must sum to 1)"
            )));
        }
        let pair = Self { spec, ..pair };
        for &x in &SPOT_CHECK_POINTS {
            let residual = (pair.convolve_at(x, DEFAULT_ORDER)? - 1.0).abs();
            if !(residual <= SPOT_CHECK_TOL) {
                return Err(Error::SoninSpotCheck { x, residual });
            }
        }
        Ok(pair)
    }

    /// Pairs two arbitrary kernels without checking the Sonin condition.
    /// Intended for negative controls and exploratory scans.
    pub fn from_kernels(kappa: KernelSpec, k: KernelSpec, config: SeriesEvalConfig) -> Result<Self> {
        let kappa_terms = kappa.decompose(&config)?;
        let k_terms = k.decompose(&config)?;
        Ok(Self { spec: None, kappa, k, config, kappa_terms, k_terms })
    }

    pub fn spec(&self) -> Option<&PairSpec> {
        self.spec.as_ref()
    }

    pub fn kernel(&self, side: Side) -> &KernelSpec {
        match side {
            Side::Kappa => &self.kappa,
            Side::K => &self.k,
        }
    }

    pub fn kappa(&self) -> &KernelSpec {
        &self.kappa
    }

    pub fn k(&self) -> &KernelSpec {
        &self.k
    }

    pub fn config(&self) -> &SeriesEvalConfig {
        &self.config
    }

    pub fn terms(&self, side: Side) -> &Decomposition {
        match side {
            Side::Kappa => &self.kappa_terms,
            Side::K => &self.k_terms,
        }
    }

    pub fn eval(&self, side: Side, x: f64) -> Result<f64> {
        self.kernel(side).eval(x, &self.config)
    }

    /// Fails with `RadiusExceeded` when a truncated-series side is used past its radius.
    pub fn check_argument(&self, x: f64) -> Result<()> {
        self.kappa.check_argument(x)?;
        self.k.check_argument(x)
    }

    /// (κ * k)(x) by term-pair Gauss–Jacobi quadrature.
    pub fn convolve_at(&self, x: f64, order: usize) -> Result<f64> {
        self.check_argument(x)?;
        convolve_at(&self.kappa_terms, &self.k_terms, x, order)
    }
}

/// Pointwise kernel value.
pub fn eval_kernel(pair: &SoninPair, side: Side, x: f64) -> Result<f64> {
    pair.eval(side, x)
}

fn default_build(spec: PairSpec) -> Result<SoninPair> {
    spec.build(&SeriesEvalConfig::default())
}

/// κ = h_α, k = h_{1−α}, 0 < α < 1.
pub fn make_power_pair(alpha: f64) -> Result<SoninPair> {
    default_build(PairSpec::Power { alpha })
}

/// κ(x) = x^{α−1}e^{−ρx}/Γ(α) with its associated kernel.
pub fn make_tempered_pair(alpha: f64, rho: f64) -> Result<SoninPair> {
    default_build(PairSpec::Tempered { alpha, rho })
}

/// κ = h_{1−β+α} + h_{1−β}, k(x) = x^{β−1}E_{α,β}(−x^α), 0 < α < β < 1.
pub fn make_ml_sum_pair(alpha: f64, beta: f64) -> Result<SoninPair> {
    default_build(PairSpec::MlSum { alpha, beta })
}

pub fn make_wright_pair(alpha: f64, beta: f64, lambda: f64) -> Result<SoninPair> {
    default_build(PairSpec::Wright { alpha, beta, lambda })
}

pub fn make_prabhakar_pair(alpha: f64, beta: f64, gamma: f64, lambda: f64) -> Result<SoninPair> {
    default_build(PairSpec::Prabhakar { alpha, beta, gamma, lambda })
}

pub fn make_kummer_pair(beta: f64, gamma: f64, lambda: f64) -> Result<SoninPair> {
    default_build(PairSpec::Kummer { beta, gamma, lambda })
}

pub fn make_phi3_pair(
    alpha1: f64,
    alpha2: f64,
    beta: f64,
    gamma: f64,
    lambda1: f64,
    lambda2: f64,
) -> Result<SoninPair> {
    default_build(PairSpec::Phi3 { alpha1, alpha2, beta, gamma, lambda1, lambda2 })
}

#[allow(clippy::too_many_arguments)]
pub fn make_xi2_pair(
    alpha1: f64,
    alpha2: f64,
    beta: f64,
    gamma1: f64,
    gamma2: f64,
    lambda1: f64,
    lambda2: f64,
) -> Result<SoninPair> {
    default_build(PairSpec::Xi2 { alpha1, alpha2, beta, gamma1, gamma2, lambda1, lambda2 })
}

/// κ(x) = x^{β−1}Σ aₙ(λx^α)ⁿ, k(x) = x^{−β}Σ bₙ(λx^α)ⁿ from solved coefficients.
pub fn from_series_pair(coeffs: &SeriesPairCoefficients, lambda: f64) -> Result<SoninPair> {
    from_series_pair_with(coeffs, lambda, &SeriesEvalConfig::default())
}

pub fn from_series_pair_with(
    coeffs: &SeriesPairCoefficients,
    lambda: f64,
    cfg: &SeriesEvalConfig,
) -> Result<SoninPair> {
    if !lambda.is_finite() {
        return Err(domain(format!("lambda must be finite, got {lambda}")));
    }
    let (kappa, k) = series_kernels(coeffs, lambda, coeffs.alpha(), coeffs.beta());
    SoninPair::checked(None, kappa, k, *cfg)
}
