//! Compactly supported Legendre wavelets.
//!
//! The `legdN` family uses the odd-degree Legendre polynomial `P_v`,
//! `v = 2N − 1`, as the magnitude of its low-pass filter. This crate builds
//! the filters exactly, generates scaling/wavelet/packet functions by the
//! cascade algorithm, runs periodic 1D, 2D and wavelet-packet transforms,
//! and measures how far the family is from orthogonality.

pub mod analysis;
pub mod cascade;
pub mod cli;
pub mod error;
pub mod filterbank;
pub mod io;
pub mod legendre;
pub mod transform;

pub use error::{Error, Result};
pub use filterbank::{FilterBank, SignConvention};
pub use legendre::{Dyadic, LegendreOrder};
