//! Modified scattering of the Klein-Gordon profile: the phase `Θ` driven by
//! the low-frequency wave field along Klein-Gordon characteristics, the
//! renormalized profile, convergence metrics and the resonance checker.

pub mod renorm;
pub mod report;
pub mod resonance;
pub mod theta;
pub mod ulow;
pub mod windows;

pub use renorm::{renorm_identity_residual, renormalize_profile};
pub use report::{ScatteringReport, ThetaSample, TrackedMode};
pub use resonance::{check_resonance_bounds, check_resonance_bounds_with, phase_phi, PhaseLabel, ResonanceReport};
pub use theta::ThetaField;
pub use ulow::{u_low_eval, u_low_eval_complex, wave_spectrum, LowModes};
pub use windows::{cauchy_windows, phase_drift_fit, unwrap_phase, wave_scattering_residual, CauchyWindows, PhaseFit, Window};

use crate::system::{CouplingCoefficients, Sign};

/// `q_±(ρ) = ∓ B^{jk} ρ_j ρ_k / (2 Λ_kg(ρ)) + B^{0k} ρ_k`.
pub fn q_pm(rho: &[f64; 3], coeffs: &CouplingCoefficients, sign: Sign) -> f64 {
    coeffs.q_pm(rho, sign)
}
