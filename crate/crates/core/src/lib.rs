//! Symmetric decreasing rearrangement of gridded probability densities,
//! Rényi entropies of all orders, convolution, and numerical checks of the
//! inequalities relating them.
//!
//! Densities live on uniform one-dimensional grids ([`Grid1D`]) or as
//! radial profiles in `n` dimensions ([`RadialDensity`]). Every check
//! returns a [`VerificationReport`] carrying both sides, the margin and the
//! tolerance it was judged with.

// `!(x > 0.0)` deliberately rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ball;
pub mod conjecture;
pub mod convolution;
pub mod density;
pub mod error;
pub mod information;
pub mod levy;
pub mod quadrature;
pub mod rearrangement;
pub mod report;
pub mod special;
pub mod verifier;

pub use density::{random_density, Density, DensityGeneratorSpec, GeneratorKind, Grid1D, GridSpec, RadialDensity};
pub use error::{Error, Result};
pub use information::{entropy_power, fisher_information, renyi_divergence, renyi_entropy, RenyiOrder};
pub use rearrangement::{majorizes, rearrange_1d, rearrange_radial};
pub use report::{SuiteSummary, VerificationReport};
pub use verifier::{run_suite, SuiteConfig, SuiteKind};
