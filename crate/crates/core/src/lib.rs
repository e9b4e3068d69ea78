//! Large-deviation rate functions for stationary Gaussian AR(1) and MA(1)
//! processes, with finite-n Toeplitz machinery, numerical dual/contraction
//! oracles and Monte Carlo rate estimation.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cgf;
pub mod empirics;
pub mod error;
pub mod exec;
pub mod extended;
pub mod figures;
pub mod legendre;
pub mod model;
pub mod rates;
pub mod rng;
pub mod spectral;
pub mod table;
pub mod toeplitz;

pub use error::{LdpError, Result};
pub use exec::Exec;
pub use extended::ExtendedReal;
pub use model::{Ar1Params, Ma1Params, ProcessParams, SamplePath};
pub use toeplitz::{DomainRegion, LambdaPair};
