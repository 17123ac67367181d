//! Pseudo-spectral simulation and diagnostics for the coupled
//! wave / Klein-Gordon system
//!
//! ```text
//! u_tt - Δu     = A^{ab} ∂_a v ∂_b v + D v^2
//! v_tt - Δv + v = u B^{ab} ∂_a ∂_b v
//! ```
//!
//! on a periodic box, evolved in profile variables
//! `V = e^{itΛ} (∂_t - iΛ) f` so that the linear flow is exact.

pub mod config;
pub mod diagnostics;
pub mod dispersion;
pub mod error;
mod fft;
pub mod free;
pub mod grid;
pub mod lp;
pub mod params;
pub mod profiles;
pub mod radial;
pub mod run;
pub mod scattering;
pub mod system;

pub use dispersion::{bracket, lambda_kg, lambda_wave, Channel};
pub use error::{Result, WkgError};
pub use grid::{Field, SpectralGrid};
pub use params::DyadicParams;
