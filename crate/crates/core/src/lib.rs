//! Sonin kernel pairs (κ, k) with (κ * k)(x) = 1, the general fractional
//! integrals and derivatives they generate, and numerical checks of both.
//!
//! Modules:
//! * [`special`]: Γ, Wright, Mittag-Leffler, Prabhakar, Kummer and Horn-type series.
//! * [`series`]: power-series algebra and the triangular coefficient system.
//! * [`kernels`]: the kernel catalog and [`SoninPair`].
//! * [`convolution`]: singular convolution quadrature, GFI/GFD, convolution series.
//! * [`verify`]: time- and Laplace-domain verification reports.

// `!(x > 0.0)` rejects NaN along with the out-of-range values, on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep all the digits they were computed with.
#![allow(clippy::excessive_precision)]

pub mod convolution;
pub mod error;
pub mod kernels;
pub mod series;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use kernels::{KernelSpec, PairSpec, Side, SoninPair};
pub use series::{PowerSeries, SeriesPairCoefficients};
pub use special::SeriesEvalConfig;
pub use verify::{LaplaceCheckConfig, VerificationReport};
