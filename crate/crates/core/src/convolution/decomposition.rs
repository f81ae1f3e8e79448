//! Functions written as finite sums  Σ x^{μᵢ−1} gᵢ(x),  μᵢ > 0, with each gᵢ
//! either a constant or a function that is smooth on [0, ∞).
//!
//! Convolving two such sums is done pair by pair after substituting ξ = xu:
//!
//!   (x^{μ−1}g * x^{ν−1}h)(x) = x^{μ+ν−1} ∫₀¹ (1−u)^{μ−1} u^{ν−1} g(x(1−u)) h(xu) du,
//!
//! so the endpoint singularities become a Jacobi weight. Two constant factors
//! give the Beta function exactly. The result is again a sum of the same kind,
//! which lets convolutions be nested lazily.

use std::fmt;
use std::sync::Arc;

use crate::convolution::jacobi::cached_rule;
use crate::error::{domain, Result};
use crate::special::beta;

/// Default Gauss–Jacobi order.
pub const DEFAULT_ORDER: usize = 32;

/// Exponents closer than this are merged.
const EXPONENT_MERGE: f64 = 1e-13;

pub type FactorFn = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

#[derive(Clone)]
pub enum Factor {
    Constant(f64),
    Function(FactorFn),
}

impl Factor {
    pub fn function<F: Fn(f64) -> Result<f64> + Send + Sync + 'static>(f: F) -> Self {
        Factor::Function(Arc::new(f))
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Factor::Constant(c) => Ok(*c),
            Factor::Function(f) => f(x),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Factor::Constant(_))
    }
}

impl fmt::Debug for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Constant(c) => write!(f, "Constant({c})"),
            Factor::Function(_) => write!(f, "Function(..)"),
        }
    }
}

/// x^{exponent−1} · factor(x)
#[derive(Clone, Debug)]
pub struct PowerTerm {
    pub exponent: f64,
    pub factor: Factor,
}

impl PowerTerm {
    pub fn constant(exponent: f64, c: f64) -> Self {
        Self { exponent, factor: Factor::Constant(c) }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let g = self.factor.eval(x)?;
        if g == 0.0 {
            return Ok(0.0);
        }
        Ok(x.powf(self.exponent - 1.0) * g)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Decomposition {
    terms: Vec<PowerTerm>,
}

impl Decomposition {
    pub fn new(terms: Vec<PowerTerm>) -> Result<Self> {
        for t in &terms {
            if !(t.exponent > 0.0) || !t.exponent.is_finite() {
                return Err(domain(format!(
                    "term exponent must be positive (x^(mu-1) with mu > 0), got {}",
                    t.exponent
                )));
            }
            if let Factor::Constant(c) = t.factor {
                if !c.is_finite() {
                    return Err(domain("constant factor is not finite"));
                }
            }
        }
        Ok(Self { terms }.merged())
    }

    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[PowerTerm] {
        &self.terms
    }

    /// Smallest exponent, i.e. the strength of the singularity at 0.
    pub fn leading_exponent(&self) -> Option<f64> {
        self.terms.iter().map(|t| t.exponent).min_by(f64::total_cmp)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let mut s = 0.0;
        for t in &self.terms {
            s += t.eval(x)?;
        }
        Ok(s)
    }

    pub fn scaled(&self, c: f64) -> Self {
        if c == 0.0 {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|t| PowerTerm {
                exponent: t.exponent,
                factor: match &t.factor {
                    Factor::Constant(v) => Factor::Constant(c * v),
                    Factor::Function(f) => {
                        let f = f.clone();
                        Factor::function(move |x| Ok(c * f(x)?))
                    }
                },
            })
            .collect();
        Self { terms }
    }

    pub fn plus(&self, other: &Decomposition) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }.merged()
    }

    /// Value at 0 when the sum is continuous there: terms with μ > 1 vanish,
    /// μ = 1 terms contribute g(0), μ < 1 makes the limit infinite.
    pub fn value_at_zero(&self) -> Result<f64> {
        let mut s = 0.0;
        for t in &self.terms {
            if t.exponent < 1.0 {
                if let Factor::Constant(0.0) = t.factor {
                    continue;
                }
                return Err(domain(format!("function is singular at 0 (term with exponent {})", t.exponent)));
            }
            if t.exponent == 1.0 {
                s += t.factor.eval(0.0)?;
            }
        }
        Ok(s)
    }

    /// Term-wise derivative. d/dx[x^{μ−1}g] = x^{μ−2}[(μ−1)g + x g′], so every
    /// exponent drops by one and must stay positive. Constants differentiate
    /// exactly; function factors use a Richardson-extrapolated five-point
    /// central difference with step 1e-4·x.
    pub fn derivative(&self) -> Result<Decomposition> {
        let mut terms = Vec::new();
        for t in &self.terms {
            let mu = t.exponent;
            match &t.factor {
                Factor::Constant(c) => {
                    if mu == 1.0 || *c == 0.0 {
                        continue;
                    }
                    terms.push(PowerTerm::constant(mu - 1.0, (mu - 1.0) * c));
                }
                Factor::Function(g) => {
                    let g = g.clone();
                    if mu == 1.0 {
                        terms
                            .push(PowerTerm { exponent: 1.0, factor: Factor::function(move |x| fd_derivative(&g, x)) });
                    } else {
                        let exponent = mu - 1.0;
                        let factor = Factor::function(move |x| {
                            let v = (mu - 1.0) * g(x)?;
                            if x == 0.0 {
                                return Ok(v);
                            }
                            Ok(v + x * fd_derivative(&g, x)?)
                        });
                        terms.push(PowerTerm { exponent, factor });
                    }
                }
            }
        }
        Decomposition::new(terms)
    }

    fn merged(mut self) -> Self {
        self.terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut out: Vec<PowerTerm> = Vec::with_capacity(self.terms.len());
        let mut pending_functions: Vec<PowerTerm> = Vec::new();
        for t in self.terms {
            if let Factor::Constant(c) = t.factor {
                if let Some(last) = out
                    .iter_mut()
                    .rev()
                    .find(|p| p.factor.is_constant() && (p.exponent - t.exponent).abs() <= EXPONENT_MERGE)
                {
                    if let Factor::Constant(ref mut v) = last.factor {
                        *v += c;
                    }
                    continue;
                }
                out.push(t);
            } else {
                pending_functions.push(t);
            }
        }
        out.retain(|t| !matches!(t.factor, Factor::Constant(c) if c == 0.0));
        out.extend(pending_functions);
        out.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        Self { terms: out }
    }
}

/// g′(x) from central differences: D(h) with the 5-point stencil, then
/// (16·D(h/2) − D(h)) / 15. Near x = 0 a one-sided difference is used.
pub(crate) fn fd_derivative(g: &FactorFn, x: f64) -> Result<f64> {
    if x <= 0.0 {
        let h = 1e-6;
        return Ok((-3.0 * g(0.0)? + 4.0 * g(h)? - g(2.0 * h)?) / (2.0 * h));
    }
    let stencil = |h: f64| -> Result<f64> {
        Ok((g(x - 2.0 * h)? - 8.0 * g(x - h)? + 8.0 * g(x + h)? - g(x + 2.0 * h)?) / (12.0 * h))
    };
    let h = 1e-4 * x;
    let d1 = stencil(h)?;
    let d2 = stencil(h / 2.0)?;
    Ok((16.0 * d2 - d1) / 15.0)
}

fn pair_integral(p: &PowerTerm, q: &PowerTerm, order: usize) -> Result<PowerTerm> {
    let exponent = p.exponent + q.exponent;
    if let (Factor::Constant(c), Factor::Constant(d)) = (&p.factor, &q.factor) {
        return Ok(PowerTerm::constant(exponent, c * d * beta(p.exponent, q.exponent)?));
    }
    let rule = cached_rule(p.exponent - 1.0, q.exponent - 1.0, order)?;
    let (g, h) = (p.factor.clone(), q.factor.clone());
    let factor = Factor::function(move |x| {
        let mut s = 0.0;
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let gv = g.eval(x * (1.0 - u))?;
            if gv == 0.0 {
                continue;
            }
            s += w * gv * h.eval(x * u)?;
        }
        Ok(s)
    });
    Ok(PowerTerm { exponent, factor })
}

/// Lazy Laplace convolution a * b.
pub fn convolve(a: &Decomposition, b: &Decomposition, order: usize) -> Result<Decomposition> {
    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
    for p in &a.terms {
        for q in &b.terms {
            terms.push(pair_integral(p, q, order)?);
        }
    }
    Decomposition::new(terms)
}

/// (a * b)(x) without building the intermediate decomposition.
pub fn convolve_at(a: &Decomposition, b: &Decomposition, x: f64, order: usize) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain(format!("convolution needs x > 0, got {x}")));
    }
    let mut s = 0.0;
    for p in &a.terms {
        for q in &b.terms {
            s += pair_integral(p, q, order)?.eval(x)?;
        }
    }
    Ok(s)
}
