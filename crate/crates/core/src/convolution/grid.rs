//! Grid-sampled functions in C₋₁ and the convolution-series construction
//!
//!   κ = a₀κ₁ + κ₁ * Σ_{n≥1} aₙ f^{<n>},   k = b₀k₁ + k₁ * Σ_{n≥1} bₙ f^{<n>}
//!
//! for a base pair (κ₁, k₁), which is a Sonin pair whenever a₀b₀ = 1 and
//! Σ_{m≤n} aₘb_{n−m} = 0 for n ≥ 1.
//!
//! A [`GridFunction`] is a sum of terms x^{μ−1}·g(x) in which g is either a
//! constant or a list of samples on the grid. Samples are interpolated with
//! six-point Lagrange polynomials in √x (sqrt grids) or in x (other grids).

use std::sync::Arc;

use crate::convolution::decomposition::{Decomposition, Factor, DEFAULT_ORDER};
use crate::convolution::jacobi::cached_rule;
use crate::error::{domain, Error, Result};
use crate::kernels::{Side, SoninPair};
use crate::series::PowerSeries;
use crate::special::beta;

/// Default point count of the construction grid.
pub const DEFAULT_GRID_POINTS: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Sqrt,
    Log,
}

impl std::str::FromStr for Spacing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Spacing::Linear),
            "sqrt" => Ok(Spacing::Sqrt),
            "log" => Ok(Spacing::Log),
            other => Err(domain(format!("unknown spacing {other:?}; expected linear, sqrt or log"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    coords: Vec<f64>,
    spacing: Spacing,
}

impl Grid {
    /// `count` points from `start` to `stop`, equally spaced in x, √x or ln x.
    pub fn new(start: f64, stop: f64, count: usize, spacing: Spacing) -> Result<Self> {
        if !(start > 0.0) || !stop.is_finite() {
            return Err(domain(format!("grid start must be positive and finite, got {start}")));
        }
        if !(stop >= start) {
            return Err(domain(format!("grid stop {stop} lies below start {start}")));
        }
        if count == 0 {
            return Err(domain("grid count must be at least 1"));
        }
        if count > 1 && stop == start {
            return Err(domain("a grid with several points needs stop > start"));
        }
        type Map = fn(f64) -> f64;
        let (fwd, inv): (Map, Map) = match spacing {
            Spacing::Linear => (|x| x, |t| t),
            Spacing::Sqrt => (f64::sqrt, |t| t * t),
            Spacing::Log => (f64::ln, f64::exp),
        };
        let (t0, t1) = (fwd(start), fwd(stop));
        let points: Vec<f64> = (0..count)
            .map(|i| {
                if count == 1 {
                    start
                } else if i == count - 1 {
                    stop
                } else {
                    inv(t0 + (t1 - t0) * i as f64 / (count - 1) as f64)
                }
            })
            .collect();
        Self::from_points(points, spacing)
    }

    /// Grid on (0, stop] uniform in √x: x_j = stop·(j/count)², j = 1..count.
    pub fn sqrt_from_origin(stop: f64, count: usize) -> Result<Self> {
        if !(stop > 0.0) || !stop.is_finite() || count == 0 {
            return Err(domain(format!("need stop > 0 and count >= 1, got ({stop}, {count})")));
        }
        let points = (1..=count).map(|j| stop * (j as f64 / count as f64).powi(2)).collect();
        Self::from_points(points, Spacing::Sqrt)
    }

    fn from_points(points: Vec<f64>, spacing: Spacing) -> Result<Self> {
        if points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("grid points must be strictly increasing"));
        }
        let coords = points.iter().map(|&x| coordinate(spacing, x)).collect();
        Ok(Self { points, coords, spacing })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Lagrange interpolation of `samples` at x using `width` neighbouring nodes.
    fn interpolate(&self, samples: &[f64], x: f64, width: usize) -> f64 {
        let n = self.points.len();
        let width = width.min(n);
        let t = coordinate(self.spacing, x);
        let i = self.coords.partition_point(|&c| c < t);
        let start = i.saturating_sub(width / 2).min(n - width);
        let idx = start..start + width;
        let mut s = 0.0;
        for j in idx.clone() {
            let mut l = 1.0;
            for m in idx.clone() {
                if m != j {
                    l *= (t - self.coords[m]) / (self.coords[j] - self.coords[m]);
                }
            }
            s += l * samples[j];
        }
        s
    }
}

fn coordinate(spacing: Spacing, x: f64) -> f64 {
    match spacing {
        Spacing::Sqrt => x.max(0.0).sqrt(),
        Spacing::Linear | Spacing::Log => x,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridFactor {
    Constant(f64),
    Samples(Vec<f64>),
}

/// x^{exponent−1} · factor
#[derive(Debug, Clone, PartialEq)]
pub struct GridTerm {
    pub exponent: f64,
    pub factor: GridFactor,
}

/// Quadrature settings for grid convolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConvolution {
    pub order: usize,
    /// Largest acceptable estimated quadrature/interpolation error (relative).
    pub tolerance: f64,
}

impl Default for GridConvolution {
    fn default() -> Self {
        Self { order: DEFAULT_ORDER, tolerance: 1e-6 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Arc<Grid>,
    terms: Vec<GridTerm>,
}

impl GridFunction {
    pub fn new(grid: Arc<Grid>, terms: Vec<GridTerm>) -> Result<Self> {
        for t in &terms {
            if !(t.exponent > 0.0) || !t.exponent.is_finite() {
                return Err(domain(format!("grid term exponent must be positive, got {}", t.exponent)));
            }
            if let GridFactor::Samples(s) = &t.factor {
                if s.len() != grid.len() {
                    return Err(domain("sample count does not match the grid"));
                }
            }
        }
        Ok(Self { grid, terms }.merged())
    }

    /// c·x^{μ−1}
    pub fn power(grid: Arc<Grid>, exponent: f64, c: f64) -> Result<Self> {
        Self::new(grid, vec![GridTerm { exponent, factor: GridFactor::Constant(c) }])
    }

    /// The constant function 1 (the zeroth convolution power).
    pub fn one(grid: Arc<Grid>) -> Self {
        Self::power(grid, 1.0, 1.0).expect("valid exponent")
    }

    /// Samples the function factors of a decomposition on the grid.
    pub fn from_decomposition(grid: Arc<Grid>, d: &Decomposition) -> Result<Self> {
        let mut terms = Vec::with_capacity(d.terms().len());
        for t in d.terms() {
            let factor = match &t.factor {
                Factor::Constant(c) => GridFactor::Constant(*c),
                Factor::Function(g) => {
                    GridFactor::Samples(grid.points().iter().map(|&x| g(x)).collect::<Result<Vec<_>>>()?)
                }
            };
            terms.push(GridTerm { exponent: t.exponent, factor });
        }
        Self::new(grid, terms)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn terms(&self) -> &[GridTerm] {
        &self.terms
    }

    /// Function values at the grid points.
    pub fn values(&self) -> Vec<f64> {
        self.grid
            .points()
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                self.terms
                    .iter()
                    .map(|t| {
                        let g = match &t.factor {
                            GridFactor::Constant(c) => *c,
                            GridFactor::Samples(s) => s[j],
                        };
                        x.powf(t.exponent - 1.0) * g
                    })
                    .sum()
            })
            .collect()
    }

    fn factor_at(&self, t: &GridTerm, x: f64, width: usize) -> f64 {
        match &t.factor {
            GridFactor::Constant(c) => *c,
            GridFactor::Samples(s) => self.grid.interpolate(s, x, width),
        }
    }

    /// Interpolated value at 0 < x ≤ last grid point.
    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| x.powf(t.exponent - 1.0) * self.factor_at(t, x, 6)).sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| GridTerm {
                exponent: t.exponent,
                factor: match &t.factor {
                    GridFactor::Constant(v) => GridFactor::Constant(c * v),
                    GridFactor::Samples(s) => GridFactor::Samples(s.iter().map(|v| c * v).collect()),
                },
            })
            .collect();
        Self { grid: self.grid.clone(), terms }.merged()
    }

    pub fn plus(&self, other: &GridFunction) -> Result<Self> {
        self.same_grid(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self { grid: self.grid.clone(), terms }.merged())
    }

    fn same_grid(&self, other: &GridFunction) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid {
            Ok(())
        } else {
            Err(domain("grid functions live on different grids"))
        }
    }

    fn merged(mut self) -> Self {
        self.terms.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
        let mut out: Vec<GridTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            match out.last_mut() {
                Some(last) if (last.exponent - t.exponent).abs() <= 1e-13 => {
                    last.factor = match (&last.factor, &t.factor) {
                        (GridFactor::Constant(a), GridFactor::Constant(b)) => GridFactor::Constant(a + b),
                        (GridFactor::Constant(a), GridFactor::Samples(s))
                        | (GridFactor::Samples(s), GridFactor::Constant(a)) => {
                            GridFactor::Samples(s.iter().map(|v| v + a).collect())
                        }
                        (GridFactor::Samples(s), GridFactor::Samples(r)) => {
                            GridFactor::Samples(s.iter().zip(r).map(|(a, b)| a + b).collect())
                        }
                    };
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| t.factor != GridFactor::Constant(0.0));
        Self { grid: self.grid, terms: out }
    }

    /// ∫₀¹(1−u)^{μ−1}u^{ν−1} g(x(1−u)) h(xu) du for one term pair.
    fn pair_factor(
        &self,
        p: &GridTerm,
        other: &GridFunction,
        q: &GridTerm,
        x: f64,
        order: usize,
        width: usize,
    ) -> Result<f64> {
        let rule = cached_rule(p.exponent - 1.0, q.exponent - 1.0, order)?;
        let mut s = 0.0;
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            s += w * self.factor_at(p, x * (1.0 - u), width) * other.factor_at(q, x * u, width);
        }
        Ok(s)
    }

    /// Convolution on the same grid. Constant×constant term pairs are exact;
    /// the others are recomputed on a subsample with half the quadrature order
    /// and four-point interpolation, and the larger discrepancy (relative to
    /// the factor scale) is compared against `cfg.tolerance`.
    pub fn convolve(&self, other: &GridFunction, cfg: &GridConvolution) -> Result<GridFunction> {
        self.same_grid(other)?;
        let pts = self.grid.points();
        let coarse_order = (cfg.order / 2).max(4);
        let mut estimate: f64 = 0.0;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for p in &self.terms {
            for q in &other.terms {
                let exponent = p.exponent + q.exponent;
                if let (GridFactor::Constant(c), GridFactor::Constant(d)) = (&p.factor, &q.factor) {
                    terms.push(GridTerm {
                        exponent,
                        factor: GridFactor::Constant(c * d * beta(p.exponent, q.exponent)?),
                    });
                    continue;
                }
                let samples =
                    pts.iter().map(|&x| self.pair_factor(p, other, q, x, cfg.order, 6)).collect::<Result<Vec<_>>>()?;
                let scale = samples.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
                let stride = (pts.len() / 32).max(1);
                for j in (0..pts.len()).step_by(stride) {
                    let coarse = self.pair_factor(p, other, q, pts[j], coarse_order, 4)?;
                    estimate = estimate.max((coarse - samples[j]).abs() / scale);
                }
                terms.push(GridTerm { exponent, factor: GridFactor::Samples(samples) });
            }
        }
        if estimate > cfg.tolerance {
            return Err(Error::GridTooCoarse { estimate, tolerance: cfg.tolerance });
        }
        GridFunction::new(self.grid.clone(), terms)
    }

    /// (self * other)(x) at arbitrary 0 < x ≤ last grid point.
    pub fn convolve_at(&self, other: &GridFunction, x: f64, order: usize) -> Result<f64> {
        self.same_grid(other)?;
        let mut s = 0.0;
        for p in &self.terms {
            for q in &other.terms {
                let factor = match (&p.factor, &q.factor) {
                    (GridFactor::Constant(c), GridFactor::Constant(d)) => c * d * beta(p.exponent, q.exponent)?,
                    _ => self.pair_factor(p, other, q, x, order, 6)?,
                };
                s += x.powf(p.exponent + q.exponent - 1.0) * factor;
            }
        }
        Ok(s)
    }
}

/// n-fold self-convolution f^{<n>}, with f^{<0>} ≡ 1.
pub fn convolution_power(f: &GridFunction, n: usize, cfg: &GridConvolution) -> Result<GridFunction> {
    if n == 0 {
        return Ok(GridFunction::one(f.grid.clone()));
    }
    let mut acc = f.clone();
    for _ in 1..n {
        acc = acc.convolve(f, cfg)?;
    }
    Ok(acc)
}

fn check_condab(a: &PowerSeries, b: &PowerSeries, truncation: usize) -> Result<()> {
    let (a, b) = (a.coeffs(), b.coeffs());
    let r0 = (a[0] * b[0] - 1.0).abs();
    if !(r0 <= 1e-10) {
        return Err(Error::CoefficientConditionViolated { n: 0, residual: r0 });
    }
    for n in 1..=truncation {
        let terms: Vec<f64> = (0..=n).map(|m| a[m] * b[n - m]).collect();
        let scale = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let residual = if scale == 0.0 { 0.0 } else { terms.iter().sum::<f64>().abs() / scale };
        if !(residual <= 1e-10) {
            return Err(Error::CoefficientConditionViolated { n, residual });
        }
    }
    Ok(())
}

/// Builds (κ, k) on f's grid from the base pair, the generating function f
/// and coefficients a, b, keeping the powers f^{<1>}, …, f^{<truncation>}.
pub fn convolution_series_pair(
    base: &SoninPair,
    f: &GridFunction,
    a: &PowerSeries,
    b: &PowerSeries,
    truncation: usize,
    cfg: &GridConvolution,
) -> Result<(GridFunction, GridFunction)> {
    if truncation > a.order() || truncation > b.order() {
        return Err(domain(format!(
            "truncation {truncation} exceeds the coefficient orders ({}, {})",
            a.order(),
            b.order()
        )));
    }
    check_condab(a, b, truncation)?;
    if f.terms.iter().all(|t| match &t.factor {
        GridFactor::Constant(c) => *c == 0.0,
        GridFactor::Samples(s) => s.iter().all(|v| *v == 0.0),
    }) {
        return Err(domain("the generating function f must not vanish identically"));
    }
    let grid = f.grid.clone();
    let kappa1 = GridFunction::from_decomposition(grid.clone(), base.terms(Side::Kappa))?;
    let k1 = GridFunction::from_decomposition(grid.clone(), base.terms(Side::K))?;

    let empty = GridFunction::new(grid.clone(), Vec::new())?;
    let (mut sa, mut sb) = (empty.clone(), empty);
    let mut power = f.clone();
    for n in 1..=truncation {
        if n > 1 {
            power = power.convolve(f, cfg)?;
        }
        sa = sa.plus(&power.scaled(a.coeffs()[n]))?;
        sb = sb.plus(&power.scaled(b.coeffs()[n]))?;
    }
    let kappa = kappa1.scaled(a.coeffs()[0]).plus(&kappa1.convolve(&sa, cfg)?)?;
    let k = k1.scaled(b.coeffs()[0]).plus(&k1.convolve(&sb, cfg)?)?;
    Ok((kappa, k))
}
