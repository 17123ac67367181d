//! Dyadic `Z`-norms of profiles.

use crate::grid::{par_sum, SpectralGrid};
use crate::lp::{atom_norms, phi_k};
use crate::params::{minus, plus, pow2, DyadicParams};
use num_complex::Complex64;
use rayon::prelude::*;

/// `|| φ_k f^ ||_∞` over non-Nyquist modes.
pub fn shell_sup(grid: &SpectralGrid, f_hat: &[Complex64], k: i32) -> f64 {
    f_hat
        .par_iter()
        .enumerate()
        .filter(|(i, _)| !grid.is_nyquist(*i))
        .map(|(i, z)| phi_k(k, grid.kmag(i)) * z.norm())
        .reduce(|| 0.0, f64::max)
}

/// `|| P_k f ||_{L^2}` via Plancherel.
pub fn shell_l2(grid: &SpectralGrid, f_hat: &[Complex64], k: i32) -> f64 {
    let s = par_sum(f_hat.len(), |i| {
        if grid.is_nyquist(i) {
            return 0.0;
        }
        let c = phi_k(k, grid.kmag(i));
        c * c * f_hat[i].norm_sqr()
    });
    (grid.spectral_measure() * s).sqrt()
}

/// Per-shell terms of the wave `Z`-norm; the norm is their maximum.
pub fn z_wave_terms(grid: &SpectralGrid, f_hat: &[Complex64], params: &DyadicParams) -> Vec<(i32, f64)> {
    let (kmin, kmax) = grid.k_range();
    let dp = params.d_prime();
    let dl = params.delta;
    (kmin..=kmax)
        .map(|k| {
            let hi = (params.n0 - dp) * plus(k);
            let sup = shell_sup(grid, f_hat, k);
            let first = pow2(hi + minus(k) * (1.0 + 4.0 * dl)) * sup;
            let atoms: f64 = if sup == 0.0 {
                0.0
            } else {
                atom_norms(grid, f_hat, k)
                    .into_iter()
                    .map(|(j, q)| pow2(j as f64) * q)
                    .sum()
            };
            let second = pow2(hi + minus(k) * (0.5 + 4.0 * dl)) * atoms;
            (k, first + second)
        })
        .collect()
}

/// `|| f ||_{Z_wa}`, the atom sum truncated once `2^j > 4 L`.
pub fn z_norm_wave(grid: &SpectralGrid, f_hat: &[Complex64], params: &DyadicParams) -> f64 {
    z_wave_terms(grid, f_hat, params).into_iter().map(|(_, v)| v).fold(0.0, f64::max)
}

pub fn z_kg_terms(grid: &SpectralGrid, f_hat: &[Complex64], params: &DyadicParams) -> Vec<(i32, f64)> {
    let (kmin, kmax) = grid.k_range();
    let dp = params.d_prime();
    let kap = params.kappa;
    (kmin..=kmax)
        .map(|k| {
            let a = pow2((params.n0 - dp) * plus(k) + minus(k) * (0.5 - kap)) * shell_sup(grid, f_hat, k);
            let b = pow2((params.n0 + 3.0 * params.d - 1.0) * plus(k) - minus(k) * (1.0 + kap)) * shell_l2(grid, f_hat, k);
            (k, a + b)
        })
        .collect()
}

/// `|| f ||_{Z_kg}`.
pub fn z_norm_kg(grid: &SpectralGrid, f_hat: &[Complex64], params: &DyadicParams) -> f64 {
    z_kg_terms(grid, f_hat, params).into_iter().map(|(_, v)| v).fold(0.0, f64::max)
}
