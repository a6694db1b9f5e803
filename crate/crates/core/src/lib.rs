//! Spectra, series expansions and scattering of a two-magnon cavity near its
//! third-order exceptional point. Frequencies and rates are in units of `γ₂`.

pub mod cubic;
pub mod error;
pub mod exec;
pub mod kerr_drive;
pub mod params;
pub mod puiseux;
pub mod scattering;
pub mod spectral;

pub use error::{Error, Result};
