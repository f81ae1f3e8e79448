//! Truncated power-series algebra and the triangular coefficient system that
//! characterizes power-law-series Sonin pairs
//!
//! κ(x) = x^{β−1} Σ aₙ (λx^α)ⁿ,   k(x) = x^{−β} Σ bₙ (λx^α)ⁿ.
//!
//! With cₙ = Γ(αn+β)aₙ and dₙ = Γ(αn+1−β)bₙ the pair is Sonin iff Σ cₙzⁿ and
//! Σ dₙzⁿ are reciprocal power series.

use serde::{Deserialize, Serialize};

use twofloat::TwoFloat;

use crate::error::{domain, Error, Result};
use crate::special::{gamma_fn, ln_abs_gamma, pochhammer, rgamma};

/// Tolerance used when validating the triangular identities of a coefficient pair.
pub const PAIR_TOLERANCE: f64 = 1e-12;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSeries {
    coeffs: Vec<f64>,
}

impl PowerSeries {
    /// Series c₀ + c₁z + … + c_N z^N. Needs at least one coefficient, all finite.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain("a power series needs at least one coefficient"));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(domain(format!("coefficient {i} is not finite")));
        }
        Ok(Self { coeffs })
    }

    /// 1 + 0z + … + 0z^order
    pub fn identity(order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = 1.0;
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self { coeffs: self.coeffs[..=order.min(self.order())].to_vec() }
    }

    /// Horner evaluation of the truncated series.
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c)
    }
}

/// Coefficients of f·g, truncated at the smaller order.
pub fn cauchy_product(f: &PowerSeries, g: &PowerSeries) -> PowerSeries {
    let order = f.order().min(g.order());
    let coeffs = (0..=order).map(|n| (0..=n).map(|m| f.coeffs[m] * g.coeffs[n - m]).sum()).collect();
    PowerSeries { coeffs }
}

/// Coefficients of 1/f to the same order. The recurrence runs in
/// double-double arithmetic: for series like e^{−z} the rounding errors of a
/// plain recurrence grow like (3/2)ⁿ relative to the term scale.
pub fn reciprocal_series(f: &PowerSeries) -> Result<PowerSeries> {
    let d = reciprocal_dd(&f.coeffs)?;
    Ok(PowerSeries { coeffs: d.into_iter().map(f64::from).collect() })
}

fn reciprocal_dd(c: &[f64]) -> Result<Vec<TwoFloat>> {
    if c[0] == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    // Only TwoFloat ÷ f64 is used: the crate's divisions by a TwoFloat are
    // accurate to double precision only.
    let mut d = Vec::with_capacity(c.len());
    d.push(TwoFloat::new_div(1.0, c[0]));
    for n in 1..c.len() {
        let mut s = TwoFloat::from(0.0);
        for m in 1..=n {
            s += d[n - m] * c[m];
        }
        d.push(-s / c[0]);
    }
    Ok(d)
}

/// Power-series generators with known reciprocals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum Generator {
    /// exp(z)
    Exp,
    /// (1 + z)^{−γ}
    Binomial { gamma: f64 },
    /// exp(z)(1 + z)^{−γ}
    ExpBinomial { gamma: f64 },
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::Exp => "exp",
            Generator::Binomial { .. } => "binomial",
            Generator::ExpBinomial { .. } => "exp-binomial",
        }
    }

    pub fn coeffs(&self, order: usize) -> PowerSeries {
        match *self {
            Generator::Exp => coeffs_exp(order),
            Generator::Binomial { gamma } => coeffs_binomial(gamma, order),
            Generator::ExpBinomial { gamma } => coeffs_exp_binomial(gamma, order),
        }
    }

    /// Closed-form Taylor coefficients of 1/φ.
    pub fn reciprocal_coeffs(&self, order: usize) -> PowerSeries {
        let coeffs = match *self {
            Generator::Exp => (0..=order).map(|n| sign(n) * inv_factorial(n)).collect(),
            Generator::Binomial { gamma } => {
                (0..=order).map(|n| sign(n) * pochhammer(-gamma, n) * inv_factorial(n)).collect()
            }
            Generator::ExpBinomial { gamma } => (0..=order)
                .map(|n| {
                    let s: f64 = (0..=n).map(|m| pochhammer(-gamma, m) * inv_factorial(m) * inv_factorial(n - m)).sum();
                    sign(n) * s
                })
                .collect(),
        };
        PowerSeries { coeffs }
    }

    /// φ(z) in closed form, where it exists as a real number.
    pub fn eval(&self, z: f64) -> f64 {
        match *self {
            Generator::Exp => z.exp(),
            Generator::Binomial { gamma } => (1.0 + z).powf(-gamma),
            Generator::ExpBinomial { gamma } => z.exp() * (1.0 + z).powf(-gamma),
        }
    }
}

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn inv_factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc / k as f64)
}

/// 1/n!
pub fn coeffs_exp(order: usize) -> PowerSeries {
    PowerSeries { coeffs: (0..=order).map(inv_factorial).collect() }
}

/// (−1)ⁿ(γ)ₙ/n!
pub fn coeffs_binomial(gamma: f64, order: usize) -> PowerSeries {
    PowerSeries { coeffs: (0..=order).map(|n| sign(n) * pochhammer(gamma, n) * inv_factorial(n)).collect() }
}

/// Σ_{m≤n} (−1)ᵐ(γ)ₘ / (m!(n−m)!)
pub fn coeffs_exp_binomial(gamma: f64, order: usize) -> PowerSeries {
    let coeffs = (0..=order)
        .map(|n| (0..=n).map(|m| sign(m) * pochhammer(gamma, m) * inv_factorial(m) * inv_factorial(n - m)).sum())
        .collect();
    PowerSeries { coeffs }
}

/// Kernel coefficients aₙ = cₙ/Γ(αn + offset) from generator coefficients.
pub fn kernel_coeffs(c: &PowerSeries, alpha: f64, offset: f64) -> PowerSeries {
    PowerSeries { coeffs: c.coeffs.iter().enumerate().map(|(n, cn)| cn * rgamma(alpha * n as f64 + offset)).collect() }
}

/// Coefficients (aₙ, bₙ) of a power-law-series Sonin pair, validated on construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesPairCoefficients {
    a: PowerSeries,
    b: PowerSeries,
    alpha: f64,
    beta: f64,
}

impl SeriesPairCoefficients {
    pub fn new(a: PowerSeries, b: PowerSeries, alpha: f64, beta: f64) -> Result<Self> {
        check_exponents(alpha, beta)?;
        if a.coeffs[0] == 0.0 {
            return Err(Error::ZeroLeadingCoefficient);
        }
        if a.order() != b.order() {
            return Err(domain(format!("coefficient orders differ: a has {}, b has {}", a.order(), b.order())));
        }
        let pair = Self { a, b, alpha, beta };
        for (n, r) in pair.triangular_residuals().into_iter().enumerate() {
            if !(r <= PAIR_TOLERANCE) {
                return Err(Error::CoefficientConditionViolated { n, residual: r });
            }
        }
        Ok(pair)
    }

    pub fn a(&self) -> &PowerSeries {
        &self.a
    }

    pub fn b(&self) -> &PowerSeries {
        &self.b
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn order(&self) -> usize {
        self.a.order()
    }

    /// Relative residual of each equation of the triangular system:
    /// N = 0: |Γ(β)Γ(1−β)a₀b₀ − 1|; N ≥ 1: |Σₙ Γ(αn+β)Γ(α(N−n)+1−β)aₙb_{N−n}|
    /// divided by the largest term of the sum.
    pub fn triangular_residuals(&self) -> Vec<f64> {
        triangular_residuals(&self.a, &self.b, self.alpha, self.beta)
    }

    /// Largest |z| = |λx^α| at which dropping the terms beyond the truncation
    /// order stays below 1e-15 relative to the leading term, on both sides.
    pub fn radius(&self) -> f64 {
        truncation_radius(&self.a).min(truncation_radius(&self.b))
    }
}

fn check_exponents(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(domain(format!("beta must lie in (0, 1), got {beta}")));
    }
    Ok(())
}

/// ln|Γ(αn+β)| and sign for positive arguments.
fn ln_gamma_weight(arg: f64) -> (f64, f64) {
    ln_abs_gamma(arg).expect("positive gamma argument")
}

/// Per-equation relative residuals of the triangular system.
pub fn triangular_residuals(a: &PowerSeries, b: &PowerSeries, alpha: f64, beta: f64) -> Vec<f64> {
    let order = a.order().min(b.order());
    let la: Vec<f64> = (0..=order).map(|n| ln_gamma_weight(alpha * n as f64 + beta).0).collect();
    let lb: Vec<f64> = (0..=order).map(|n| ln_gamma_weight(alpha * n as f64 + 1.0 - beta).0).collect();
    let mut out = Vec::with_capacity(order + 1);
    out.push(((la[0] + lb[0]).exp() * a.coeffs[0] * b.coeffs[0] - 1.0).abs());
    for big_n in 1..=order {
        let mut sum = 0.0;
        let mut comp = 0.0;
        let mut largest: f64 = 0.0;
        for n in 0..=big_n {
            let (an, bn) = (a.coeffs[n], b.coeffs[big_n - n]);
            let t = if an == 0.0 || bn == 0.0 {
                0.0
            } else {
                an.signum() * bn.signum() * (la[n] + lb[big_n - n] + an.abs().ln() + bn.abs().ln()).exp()
            };
            let s = sum + t;
            comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
            sum = s;
            largest = largest.max(t.abs());
        }
        out.push(if largest == 0.0 { 0.0 } else { (sum + comp).abs() / largest });
    }
    out
}

/// Solves the triangular system for b by forward substitution:
/// b₀ = 1/(Γ(β)Γ(1−β)a₀) and, for N ≥ 1,
/// b_N = −Σ_{n=1..N} Γ(αn+β)Γ(α(N−n)+1−β) aₙ b_{N−n} / (Γ(β)Γ(αN+1−β) a₀).
/// Gamma weights enter through their logarithms, so large αn cannot overflow.
pub fn solve_sonin_triangular(a: &PowerSeries, alpha: f64, beta: f64) -> Result<SeriesPairCoefficients> {
    check_exponents(alpha, beta)?;
    if a.coeffs[0] == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let b = forward_substitution(a, alpha, beta).0;
    SeriesPairCoefficients::new(a.clone(), b, alpha, beta)
}

/// Largest Γ argument evaluated directly; beyond it the weights go through lnΓ.
const DIRECT_GAMMA_LIMIT: f64 = 170.0;

/// Γ(αn+β) and Γ(αn+1−β) for n ≤ order, or None when they would overflow.
fn direct_gamma_weights(order: usize, alpha: f64, beta: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    if alpha * order as f64 + 1.0 > DIRECT_GAMMA_LIMIT {
        return None;
    }
    let g = (0..=order).map(|n| gamma_fn(alpha * n as f64 + beta).ok()).collect::<Option<Vec<_>>>()?;
    let h = (0..=order).map(|n| gamma_fn(alpha * n as f64 + 1.0 - beta).ok()).collect::<Option<Vec<_>>>()?;
    Some((g, h))
}

/// Returns b together with, for each n, Σ|t| over the terms that entered b_n
/// (the natural scale for comparing two routes to b).
fn forward_substitution(a: &PowerSeries, alpha: f64, beta: f64) -> (PowerSeries, Vec<f64>) {
    match direct_gamma_weights(a.order(), alpha, beta) {
        Some((g, h)) => forward_substitution_direct(a, &g, &h),
        None => forward_substitution_log(a, alpha, beta),
    }
}

/// Double-double substitution with Γ(αn+β)aₙ rounded once, exactly as the
/// reciprocal route forms cₙ.
fn forward_substitution_direct(a: &PowerSeries, g: &[f64], h: &[f64]) -> (PowerSeries, Vec<f64>) {
    let c: Vec<f64> = a.coeffs.iter().zip(g).map(|(an, gn)| an * gn).collect();
    let mut b = vec![TwoFloat::new_div(1.0, c[0]) / h[0]];
    let mut scale = vec![f64::from(b[0]).abs()];
    for big_n in 1..c.len() {
        let mut sum = TwoFloat::from(0.0);
        let mut magnitude = 0.0;
        for n in 1..=big_n {
            let t = b[big_n - n] * h[big_n - n] * c[n];
            sum += t;
            magnitude += f64::from(t).abs();
        }
        b.push(-sum / c[0] / h[big_n]);
        scale.push(magnitude / (c[0] * h[big_n]).abs());
    }
    (PowerSeries { coeffs: b.into_iter().map(f64::from).collect() }, scale)
}

fn forward_substitution_log(a: &PowerSeries, alpha: f64, beta: f64) -> (PowerSeries, Vec<f64>) {
    let order = a.order();
    let la: Vec<f64> = (0..=order).map(|n| ln_gamma_weight(alpha * n as f64 + beta).0).collect();
    let lb: Vec<f64> = (0..=order).map(|n| ln_gamma_weight(alpha * n as f64 + 1.0 - beta).0).collect();
    let a0 = a.coeffs[0];
    let mut b = vec![(-(la[0] + lb[0])).exp() / a0];
    let mut scale = vec![b[0].abs()];
    for big_n in 1..=order {
        let mut sum = 0.0;
        let mut magnitude = 0.0;
        for n in 1..=big_n {
            let (an, bm) = (a.coeffs[n], b[big_n - n]);
            if an == 0.0 || bm == 0.0 {
                continue;
            }
            let ln_ratio = la[n] + lb[big_n - n] - la[0] - lb[big_n] + (an / a0).abs().ln() + bm.abs().ln();
            let t = (an / a0).signum() * bm.signum() * ln_ratio.exp();
            sum += t;
            magnitude += t.abs();
        }
        b.push(-sum);
        scale.push(magnitude);
    }
    (PowerSeries { coeffs: b }, scale)
}

/// The same b through the generator route: cₙ = Γ(αn+β)aₙ, d = 1/c,
/// bₙ = dₙ/Γ(αn+1−β).
pub fn solve_via_reciprocal(a: &PowerSeries, alpha: f64, beta: f64) -> Result<PowerSeries> {
    check_exponents(alpha, beta)?;
    if let Some((g, h)) = direct_gamma_weights(a.order(), alpha, beta) {
        let c: Vec<f64> = a.coeffs.iter().zip(&g).map(|(an, gn)| an * gn).collect();
        let d = reciprocal_dd(&c)?;
        return Ok(PowerSeries { coeffs: d.iter().zip(&h).map(|(dn, hn)| f64::from(*dn / *hn)).collect() });
    }
    let c = PowerSeries {
        coeffs: a
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, an)| {
                let (lg, sg) = ln_gamma_weight(alpha * n as f64 + beta);
                an * sg * lg.exp()
            })
            .collect(),
    };
    let d = reciprocal_series(&c)?;
    Ok(kernel_coeffs(&d, alpha, 1.0 - beta))
}

/// Coefficient-wise relative discrepancy |b − b′| / max(|b|, |b′|) between
/// the triangular solve and the reciprocal route. Coefficients that vanish
/// exactly (terminating series) come out as rounding noise in both routes,
/// so the denominator is floored at ε·Σ|t| of the equation that produced bₙ.
pub fn route_discrepancy(a: &PowerSeries, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    check_exponents(alpha, beta)?;
    if a.coeffs[0] == 0.0 {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let (b, scale) = forward_substitution(a, alpha, beta);
    let b2 = solve_via_reciprocal(a, alpha, beta)?;
    Ok(b.coeffs
        .iter()
        .zip(&b2.coeffs)
        .zip(&scale)
        .map(|((x, y), s)| {
            let denom = x.abs().max(y.abs()).max(f64::EPSILON * s);
            if denom == 0.0 {
                0.0
            } else {
                (x - y).abs() / denom
            }
        })
        .collect())
}

fn truncation_radius(s: &PowerSeries) -> f64 {
    let n_max = s.order();
    let c0 = s.coeffs[0].abs();
    if c0 == 0.0 {
        return 0.0;
    }
    let mut r = f64::INFINITY;
    // The first omitted term governs the tail; the last three retained ones
    // stand in for it, so an isolated zero coefficient cannot inflate r.
    for n in n_max.saturating_sub(2).max(1)..=n_max {
        let cn = s.coeffs[n].abs();
        if cn > 0.0 {
            r = r.min((1e-15 * c0 / cn).powf(1.0 / n as f64));
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_product_of_exp_truncations() {
        let f = PowerSeries::new(vec![1.0, 1.0, 0.5]).unwrap();
        let p = cauchy_product(&f, &f);
        assert_eq!(p.coeffs(), &[1.0, 2.0, 2.0]);
    }

    #[test]
    fn exp_times_binomial_matches_direct_sum() {
        let p = cauchy_product(&coeffs_exp(6), &coeffs_binomial(1.0, 6));
        let direct = coeffs_exp_binomial(1.0, 6);
        assert_eq!(p.coeffs()[0], 1.0);
        assert_eq!(p.coeffs()[1], 0.0);
        for (x, y) in p.coeffs().iter().zip(direct.coeffs()) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn generator_examples() {
        assert_eq!(coeffs_exp(3).coeffs(), &[1.0, 1.0, 0.5, 1.0 / 6.0]);
        assert_eq!(coeffs_binomial(2.0, 2).coeffs(), &[1.0, -2.0, 3.0]);
        assert_eq!(coeffs_exp_binomial(0.3, 1).coeffs(), &[1.0, 0.7]);
    }

    #[test]
    fn reciprocals_match_closed_forms() {
        for g in [Generator::Exp, Generator::Binomial { gamma: 1.3 }, Generator::ExpBinomial { gamma: 0.5 }] {
            let c = g.coeffs(25);
            let d = reciprocal_series(&c).unwrap();
            let closed = g.reciprocal_coeffs(25);
            for (n, (x, y)) in d.coeffs().iter().zip(closed.coeffs()).enumerate() {
                // Forward substitution loses accuracy relative to Σ|c_m d_{n−m}|, not to |d_n|.
                let scale: f64 = (0..=n).map(|m| (c.coeffs()[m] * closed.coeffs()[n - m]).abs()).sum();
                assert!((x - y).abs() <= 1e-12 * scale, "{g:?} n={n}");
            }
        }
        let zero = PowerSeries::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(reciprocal_series(&zero), Err(Error::ZeroLeadingCoefficient));
        assert_eq!(reciprocal_series(&PowerSeries::identity(4)).unwrap(), PowerSeries::identity(4));
    }

    #[test]
    fn triangular_solve_reproduces_exp_pair() {
        let (alpha, beta) = (0.7, 0.4);
        let a = kernel_coeffs(&coeffs_exp(20), alpha, beta);
        let pair = solve_sonin_triangular(&a, alpha, beta).unwrap();
        let (_, scale) = forward_substitution(&a, alpha, beta);
        for (n, s) in scale.iter().enumerate() {
            let expected = sign(n) * inv_factorial(n) * rgamma(alpha * n as f64 + 1.0 - beta);
            let got = pair.b().coeffs()[n];
            assert!((got - expected).abs() <= 1e-12 * s, "n={n}: {got} vs {expected}");
        }
    }

    #[test]
    fn power_law_pair_is_trivial() {
        let a = PowerSeries::new(vec![rgamma(0.3), 0.0, 0.0]).unwrap();
        let pair = solve_sonin_triangular(&a, 0.9, 0.3).unwrap();
        assert!((pair.b().coeffs()[0] - rgamma(0.7)).abs() < 1e-15);
        assert_eq!(&pair.b().coeffs()[1..], &[0.0, 0.0]);
    }

    #[test]
    fn triangular_solve_rejects_bad_input() {
        let a = PowerSeries::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(solve_sonin_triangular(&a, 0.0, 0.5), Err(Error::ParameterDomain(_))));
        assert!(matches!(solve_sonin_triangular(&a, 0.5, 1.0), Err(Error::ParameterDomain(_))));
        let z = PowerSeries::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(solve_sonin_triangular(&z, 0.5, 0.5), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn mismatched_coefficients_are_rejected() {
        let a = kernel_coeffs(&coeffs_exp(5), 0.5, 0.5);
        let b = kernel_coeffs(&coeffs_exp(5), 0.5, 0.5);
        assert!(matches!(
            SeriesPairCoefficients::new(a, b, 0.5, 0.5),
            Err(Error::CoefficientConditionViolated { n: 1, .. })
        ));
    }

    #[test]
    fn radius_is_finite_for_slow_decay() {
        let a = kernel_coeffs(&coeffs_binomial(1.3, 40), 0.2, 0.5);
        let pair = solve_sonin_triangular(&a, 0.2, 0.5).unwrap();
        let r = pair.radius();
        assert!(r.is_finite() && r > 0.0);
    }
}
