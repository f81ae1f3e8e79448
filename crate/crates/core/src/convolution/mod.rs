//! Weakly singular Laplace convolutions and the operators built on them.

pub mod decomposition;
pub mod grid;
pub mod jacobi;
pub mod operators;

pub use decomposition::{convolve, convolve_at, Decomposition, Factor, PowerTerm, DEFAULT_ORDER};
pub use grid::{
    convolution_power, convolution_series_pair, Grid, GridConvolution, GridFactor, GridFunction, GridTerm, Spacing,
};
pub use jacobi::{cached_rule, gauss_jacobi_rule, JacobiRule};
pub use operators::{gfd_apply, gfd_regularized_apply, gfi, gfi_apply, SampledFunction};

use crate::error::Result;
use crate::kernels::SoninPair;

/// (κ * k)(x) for a pair, summed over all term pairs of the two decompositions.
pub fn convolve_pair_at(pair: &SoninPair, x: f64, order: usize) -> Result<f64> {
    pair.convolve_at(x, order)
}
