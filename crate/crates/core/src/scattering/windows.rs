//! Convergence metrics over dyadic time windows and phase-drift fits.

use crate::diagnostics::fit::linear_fit;
use crate::diagnostics::znorm::shell_sup;
use crate::error::{Result, WkgError};
use crate::grid::{Field, SpectralGrid};
use crate::params::{minus, plus, pow2, DyadicParams};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Shells used for the window weight.
pub const WINDOW_SHELLS: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub t1: f64,
    pub t2: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyWindows {
    /// Differences of the renormalized profile `V*`.
    pub renormalized: Vec<Window>,
    /// The same for the raw Klein-Gordon profile.
    pub raw: Vec<Window>,
}

/// Checks that the times double from one snapshot to the next and that
/// they span at least three windows.
pub fn check_dyadic(times: &[f64]) -> Result<()> {
    if times.len() < 4 {
        return Err(WkgError::Input(format!(
            "need at least 3 dyadic windows, got {} snapshots",
            times.len()
        )));
    }
    for w in times.windows(2) {
        if !(w[0] > 0.0) || (w[1] - 2.0 * w[0]).abs() > 1e-9 * w[1] {
            return Err(WkgError::Input(format!(
                "snapshot times must double: {} is followed by {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// `sup_{|k| <= 3} 2^{(N0-d')k^+} 2^{k^-(1/2-κ)} || φ_k f^ ||_∞`.
pub fn window_weight(grid: &SpectralGrid, f_hat: &[Complex64], params: &DyadicParams) -> f64 {
    let (kmin, kmax) = grid.k_range();
    let lo = kmin.max(-WINDOW_SHELLS);
    let hi = kmax.min(WINDOW_SHELLS);
    (lo..=hi)
        .map(|k| {
            let e = (params.n0 - params.d_prime()) * plus(k) + minus(k) * (0.5 - params.kappa);
            pow2(e) * shell_sup(grid, f_hat, k)
        })
        .fold(0.0, f64::max)
}

fn differences(times: &[f64], fields: &[Field], norm: impl Fn(&[Complex64]) -> f64) -> Result<Vec<Window>> {
    if times.len() != fields.len() {
        return Err(WkgError::Input("times and snapshots differ in length".into()));
    }
    check_dyadic(times)?;
    Ok(times
        .windows(2)
        .zip(fields.windows(2))
        .map(|(t, f)| {
            let d: Field = f[1].iter().zip(&f[0]).map(|(a, b)| a - b).collect();
            Window { t1: t[0], t2: t[1], value: norm(&d) }
        })
        .collect())
}

/// Weighted sup differences of `V*` and of the raw `V^kg` over consecutive
/// dyadic windows.
pub fn cauchy_windows(
    grid: &SpectralGrid,
    params: &DyadicParams,
    times: &[f64],
    v_star: &[Field],
    v_kg: &[Field],
) -> Result<CauchyWindows> {
    let w = |d: &[Complex64]| window_weight(grid, d, params);
    Ok(CauchyWindows {
        renormalized: differences(times, v_star, w)?,
        raw: differences(times, v_kg, w)?,
    })
}

/// `|| V^wa(t2) - V^wa(t1) ||_{L^2_ξ}` over consecutive dyadic windows.
pub fn wave_scattering_residual(grid: &SpectralGrid, times: &[f64], v_wa: &[Field]) -> Result<Vec<Window>> {
    differences(times, v_wa, |d| grid.l2_xi(d))
}

/// Removes `2π` jumps from a sequence of principal-value phases.
pub fn unwrap_phase(phases: &[f64]) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let mut out = Vec::with_capacity(phases.len());
    let mut shift = 0.0;
    for (k, &p) in phases.iter().enumerate() {
        if k > 0 {
            let d = p - phases[k - 1];
            shift -= tau * (d / tau).round();
        }
        out.push(p + shift);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseFit {
    pub offset: f64,
    /// Coefficient `c` of `log t`.
    pub rate: f64,
    /// `|| residual || / || φ - mean φ ||`.
    pub rel_residual: f64,
    /// Total change of the unwrapped phase over the samples.
    pub drift: f64,
}

/// Least-squares fit `φ(t) ≈ a + c log t` over samples with `t > 0`.
pub fn phase_drift_fit(times: &[f64], phases: &[f64]) -> Result<PhaseFit> {
    if times.len() != phases.len() {
        return Err(WkgError::Input("times and phases differ in length".into()));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(unwrap_phase(phases))
        .filter(|(t, _)| **t > 0.0)
        .map(|(t, p)| (t.ln(), p))
        .unzip();
    if x.len() < 3 {
        return Err(WkgError::Input(format!("phase fit needs at least 3 samples, got {}", x.len())));
    }
    let (a, c, _, resid) = linear_fit(&x, &y);
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let spread: f64 = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>().sqrt();
    let res: f64 = resid.iter().map(|r| r * r).sum::<f64>().sqrt();
    let lo = y.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(PhaseFit {
        offset: a,
        rate: c,
        rel_residual: if spread > 0.0 { res / spread } else { 0.0 },
        drift: hi - lo,
    })
}
