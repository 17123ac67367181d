//! Energy functionals of both components.

use crate::dispersion::bracket;
use crate::grid::{par_sum, Field, SpectralGrid};
use crate::params::DyadicParams;
use crate::system::nonlinear::real_inverses;
use crate::system::{CouplingCoefficients, ProfileState};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `∫ (P ∂_0 u)^2 + Σ_j (P ∂_j u)^2` with `P = |∇|^{-1/2} <∇>^{N(0)}`; the
/// zero mode is excluded.
pub fn energy_wave(grid: &SpectralGrid, state: &ProfileState, params: &DyadicParams) -> f64 {
    let f = state.spectral_fields(grid);
    let two_n = 2.0 * params.big_n(0);
    let s = par_sum(grid.len(), |i| {
        let r = grid.kmag(i);
        if r > 0.0 {
            bracket(r).powf(two_n) / r * (f.u_t[i].norm_sqr() + r * r * f.u[i].norm_sqr())
        } else {
            0.0
        }
    });
    grid.spectral_measure() * s
}

/// `|| |∇|^{-1/2} U^wa ||_{H^{N(0)}}^2`; equal to [`energy_wave`] for real
/// fields.
pub fn wave_normalized_norm_sq(grid: &SpectralGrid, u_wa: &[Complex64], params: &DyadicParams) -> f64 {
    let two_n = 2.0 * params.big_n(0);
    let s = par_sum(grid.len(), |i| {
        let r = grid.kmag(i);
        if r > 0.0 {
            bracket(r).powf(two_n) / r * u_wa[i].norm_sqr()
        } else {
            0.0
        }
    });
    grid.spectral_measure() * s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KgEnergy {
    /// `∫ (P ∂_0 v)^2 + (P v)^2 + Σ_j (P ∂_j v)^2`, `P = <∇>^{N(0)}`.
    pub flat: f64,
    /// `∫ u B^{ij} P ∂_i v P ∂_j v`.
    pub correction: f64,
}

impl KgEnergy {
    pub fn value(&self) -> f64 {
        self.flat + self.correction
    }
}

/// Klein-Gordon energy with the quasilinear correction. Logs a warning when
/// the correction exceeds half of the flat part.
pub fn energy_kg(
    grid: &SpectralGrid,
    state: &ProfileState,
    coeffs: &CouplingCoefficients,
    params: &DyadicParams,
) -> KgEnergy {
    let f = state.spectral_fields(grid);
    let n0 = params.big_n(0);
    let flat = par_sum(grid.len(), |i| {
        let b = bracket(grid.kmag(i));
        b.powf(2.0 * n0) * (f.v_t[i].norm_sqr() + b * b * f.v[i].norm_sqr())
    }) * grid.spectral_measure();

    let dim = grid.dim();
    let active = (1..=dim).any(|i| (1..=dim).any(|j| coeffs.b[i][j] != 0.0));
    let correction = if active {
        let mut spectral: Vec<Field> = Vec::with_capacity(dim + 1);
        spectral.push(f.u.clone());
        for a in 0..dim {
            let mut d = grid.derivative(&f.v, a);
            grid.apply_radial(&mut d, |r| bracket(r).powf(n0));
            spectral.push(d);
        }
        let phys = real_inverses(grid, &spectral);
        let u = &phys[0];
        let s = par_sum(grid.len(), |p| {
            let mut q = 0.0;
            for i in 0..dim {
                for j in 0..dim {
                    q += coeffs.b[i + 1][j + 1] * phys[i + 1][p] * phys[j + 1][p];
                }
            }
            u[p] * q
        });
        s * grid.cell_volume()
    } else {
        0.0
    };
    if correction.abs() > 0.5 * flat {
        log::warn!(
            "Klein-Gordon energy correction {correction:.3e} exceeds half the flat part {flat:.3e} at t = {}",
            state.t
        );
    }
    KgEnergy { flat, correction }
}

/// `|| U^kg ||_{H^{N(0)}}^2`; equal to the flat Klein-Gordon energy.
pub fn kg_normalized_norm_sq(grid: &SpectralGrid, u_kg: &[Complex64], params: &DyadicParams) -> f64 {
    let two_n = 2.0 * params.big_n(0);
    let s = par_sum(grid.len(), |i| bracket(grid.kmag(i)).powf(two_n) * u_kg[i].norm_sqr());
    grid.spectral_measure() * s
}
