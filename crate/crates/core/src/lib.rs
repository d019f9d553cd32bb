//! Hard binary-classification instances built from continuous LWE.
//!
//! The crate samples labeled mixtures of thin Gaussian "pancakes" whose
//! labels are fixed by a hidden direction `w`, builds the planted polynomial
//! threshold function that classifies them almost perfectly, and checks the
//! surrounding numerical facts (normalizers, reductions, tail bounds, total
//! variation distances) at desk scale.
//!
//! Module map:
//! - [`gaussian`]: ρ-parameterized Gaussians, θ-sums, discrete Gaussians over ℤ.
//! - [`samplers`]: CLWE, hCLWE and truncated hCLWE samplers and densities,
//!   and the rejection-sampling map from CLWE to hCLWE.
//! - [`instance`]: the labeled mixture, the monomial embedding, dataset files.
//! - [`oracle`]: interval geometry and the planted PTF with its exact error.
//! - [`harness`]: baselines, the Hoeffding distinguisher, TVD and the
//!   verification suite.

pub mod error;
pub mod gaussian;
pub mod harness;
pub mod instance;
pub mod oracle;
pub mod quadrature;
pub mod rng;
pub mod samplers;

pub use error::{Error, FormatError, Result};
