//! General fractional integral and derivatives generated by a Sonin pair:
//!
//!   GFI              (κ * f)(x)
//!   GFD              d/dx (k * f)(x) = (k * f′)(x) + k(x) f(0)
//!   regularized GFD  (k * f′)(x)

use std::sync::Arc;

use crate::convolution::decomposition::{convolve, convolve_at, Decomposition, Factor, PowerTerm};
use crate::error::{domain, Error, Result};
use crate::kernels::{Side, SoninPair};

/// Operand of the operators: a decomposed function, an optional derivative
/// and the value at the origin.
#[derive(Clone, Debug)]
pub struct SampledFunction {
    value: Decomposition,
    derivative: Option<Decomposition>,
    value_at_zero: f64,
}

impl SampledFunction {
    pub fn new(value: Decomposition, derivative: Option<Decomposition>, value_at_zero: f64) -> Result<Self> {
        if !value_at_zero.is_finite() {
            return Err(domain("value_at_zero must be finite"));
        }
        Ok(Self { value, derivative, value_at_zero })
    }

    /// c·x^n with its exact derivative.
    pub fn monomial(c: f64, n: u32) -> Self {
        let value = Decomposition::new(vec![PowerTerm::constant(n as f64 + 1.0, c)]).expect("valid exponent");
        let derivative = if n == 0 {
            Decomposition::zero()
        } else {
            Decomposition::new(vec![PowerTerm::constant(n as f64, c * n as f64)]).expect("valid exponent")
        };
        Self { value, derivative: Some(derivative), value_at_zero: if n == 0 { c } else { 0.0 } }
    }

    pub fn zero() -> Self {
        Self { value: Decomposition::zero(), derivative: Some(Decomposition::zero()), value_at_zero: 0.0 }
    }

    /// f ≡ 1
    pub fn one() -> Self {
        Self::monomial(1.0, 0)
    }

    /// f(x) = x
    pub fn linear() -> Self {
        Self::monomial(1.0, 1)
    }

    /// f(x) = x²
    pub fn square() -> Self {
        Self::monomial(1.0, 2)
    }

    /// f(x) = e^{−x}
    pub fn exp_neg() -> Self {
        Self::from_smooth(|x| (-x).exp(), Some(|x: f64| -(-x).exp()))
    }

    /// A function smooth on [0, ∞), optionally with its derivative.
    pub fn from_smooth<F, D>(f: F, df: Option<D>) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        let value_at_zero = f(0.0);
        let g = f.clone();
        let value = Decomposition::new(vec![PowerTerm { exponent: 1.0, factor: Factor::function(move |x| Ok(g(x))) }])
            .expect("valid exponent");
        let derivative = df.map(|d| {
            Decomposition::new(vec![PowerTerm { exponent: 1.0, factor: Factor::function(move |x| Ok(d(x))) }])
                .expect("valid exponent")
        });
        Self { value, derivative, value_at_zero }
    }

    /// Piecewise-cubic (Catmull–Rom style Hermite) interpolant through
    /// samples on strictly increasing abscissae starting at x = 0; the
    /// derivative comes from the same interpolant.
    pub fn from_samples(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(domain("samples need matching x and y columns with at least two rows"));
        }
        if xs[0] != 0.0 {
            return Err(domain(format!("samples must start at x = 0 (the operators need f(0)), got {}", xs[0])));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) || xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(domain("sample abscissae must be finite and strictly increasing"));
        }
        let interp = Arc::new(CubicInterpolant::new(xs, ys));
        let value_at_zero = interp.ys[0];
        let (vi, di) = (interp.clone(), interp);
        let value = Decomposition::new(vec![PowerTerm {
            exponent: 1.0,
            factor: Factor::function(move |x| vi.eval(x).map(|v| v.0)),
        }])?;
        let derivative = Decomposition::new(vec![PowerTerm {
            exponent: 1.0,
            factor: Factor::function(move |x| di.eval(x).map(|v| v.1)),
        }])?;
        Ok(Self { value, derivative: Some(derivative), value_at_zero })
    }

    pub fn value(&self) -> &Decomposition {
        &self.value
    }

    pub fn derivative(&self) -> Option<&Decomposition> {
        self.derivative.as_ref()
    }

    pub fn value_at_zero(&self) -> f64 {
        self.value_at_zero
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.value.eval(x)
    }

    pub fn eval_derivative(&self, x: f64) -> Result<f64> {
        self.derivative.as_ref().ok_or(Error::MissingDerivative)?.eval(x)
    }
}

struct CubicInterpolant {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl CubicInterpolant {
    fn new(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        let slopes = (0..n)
            .map(|i| {
                let (l, r) = (i.saturating_sub(1), (i + 1).min(n - 1));
                (ys[r] - ys[l]) / (xs[r] - xs[l])
            })
            .collect();
        Self { xs, ys, slopes }
    }

    fn eval(&self, x: f64) -> Result<(f64, f64)> {
        let n = self.xs.len();
        if x < 0.0 || x > self.xs[n - 1] * (1.0 + 1e-12) {
            return Err(domain(format!("x = {x} lies outside the sampled range [0, {}]", self.xs[n - 1])));
        }
        let i = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            k => (k - 1).min(n - 2),
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = ((x - self.xs[i]) / h).clamp(0.0, 1.0);
        let (y0, y1, m0, m1) = (self.ys[i], self.ys[i + 1], self.slopes[i] * h, self.slopes[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v =
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 + (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
        let dv = ((6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1)
            / h;
        Ok((v, dv))
    }
}

/// F = κ * f as a lazily evaluated function. F(0) = 0 because every term of
/// κ * f has exponent above one; F′ is the term-wise derivative of the
/// decomposition.
pub fn gfi(pair: &SoninPair, f: &SampledFunction, order: usize) -> Result<SampledFunction> {
    let value = convolve(pair.terms(Side::Kappa), &f.value, order)?;
    let derivative = value.derivative()?;
    let value_at_zero = value.value_at_zero()?;
    SampledFunction::new(value, Some(derivative), value_at_zero)
}

/// (κ * f)(x)
pub fn gfi_apply(pair: &SoninPair, f: &SampledFunction, x: f64, order: usize) -> Result<f64> {
    pair.check_argument(x)?;
    convolve_at(pair.terms(Side::Kappa), &f.value, x, order)
}

/// d/dx (k * f)(x) through (k * f′)(x) + k(x) f(0).
pub fn gfd_apply(pair: &SoninPair, f: &SampledFunction, x: f64, order: usize) -> Result<f64> {
    let regular = gfd_regularized_apply(pair, f, x, order)?;
    if f.value_at_zero == 0.0 {
        return Ok(regular);
    }
    Ok(regular + pair.eval(Side::K, x)? * f.value_at_zero)
}

/// (k * f′)(x)
pub fn gfd_regularized_apply(pair: &SoninPair, f: &SampledFunction, x: f64, order: usize) -> Result<f64> {
    let df = f.derivative.as_ref().ok_or(Error::MissingDerivative)?;
    pair.check_argument(x)?;
    convolve_at(pair.terms(Side::K), df, x, order)
}
