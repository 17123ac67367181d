//! Profile calculus: `ξ`-derivatives, rotations, weighted profile norms and
//! the exact identity linking `Γ_l U` to the profile.

use crate::dispersion::Channel;
use crate::error::{Result, WkgError};
use crate::free::propagate;
use crate::grid::{par_sum, Field, SpectralGrid};
use crate::lp::phi_k;
use crate::params::{plus, pow2, DyadicParams};
use crate::system::{ProfileState, Solver};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Multiplies physical samples by the centered coordinate `x_l`.
pub fn multiply_by_x(grid: &SpectralGrid, phys: &mut [Complex64], l: usize) {
    let n = grid.n();
    let dim = grid.dim();
    // axis `l` varies with stride n^(dim - 1 - l)
    let stride = n.pow((dim - 1 - l) as u32);
    let coords = grid.x_coords();
    phys.par_iter_mut().enumerate().for_each(|(i, z)| {
        *z *= coords[(i / stride) % n];
    });
}

/// `F{x_l F^{-1} f}` without a containment check.
pub fn x_weight(grid: &SpectralGrid, f_hat: &[Complex64], l: usize) -> Field {
    let mut phys = grid.inverse(f_hat);
    multiply_by_x(grid, &mut phys, l);
    grid.forward_in_place(&mut phys);
    phys
}

/// `∂_{ξ_l} f^`, realised as the transform of `-i x_l f`. The physical
/// counterpart of `f^` must be contained in the box.
pub fn xi_derivative(grid: &SpectralGrid, f_hat: &[Complex64], l: usize) -> Result<Field> {
    check_axis(grid, l)?;
    let mut phys = grid.inverse(f_hat);
    grid.check_contained(&phys)?;
    multiply_by_x(grid, &mut phys, l);
    grid.forward_in_place(&mut phys);
    phys.par_iter_mut().for_each(|z| *z *= -I);
    Ok(phys)
}

/// [`xi_derivative`] without the containment check.
pub fn xi_derivative_unchecked(grid: &SpectralGrid, f_hat: &[Complex64], l: usize) -> Field {
    let mut out = x_weight(grid, f_hat, l);
    out.par_iter_mut().for_each(|z| *z *= -I);
    out
}

fn check_axis(grid: &SpectralGrid, l: usize) -> Result<()> {
    if l >= grid.dim() {
        Err(WkgError::Input(format!("axis {l} out of range for a {}-d grid", grid.dim())))
    } else {
        Ok(())
    }
}

/// `Ω_{jk} f = x_j ∂_k f - x_k ∂_j f` on Fourier data (axes are 0-based).
pub fn rotation_apply(grid: &SpectralGrid, f_hat: &[Complex64], j: usize, k: usize) -> Result<Field> {
    check_axis(grid, j)?;
    check_axis(grid, k)?;
    grid.check_contained(&grid.inverse(f_hat))?;
    Ok(rotation_unchecked(grid, f_hat, j, k))
}

pub(crate) fn rotation_unchecked(grid: &SpectralGrid, f_hat: &[Complex64], j: usize, k: usize) -> Field {
    let dk = grid.derivative(f_hat, k);
    let dj = grid.derivative(f_hat, j);
    let mut a = x_weight(grid, &dk, j);
    let b = x_weight(grid, &dj, k);
    a.par_iter_mut().zip(b.par_iter()).for_each(|(x, y)| *x -= y);
    a
}

/// The three rotations `Ω_23, Ω_31, Ω_12` as 0-based axis pairs.
pub const ROTATIONS: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];

/// How `∂_t V` enters the identity check.
#[derive(Debug, Clone, Copy)]
pub enum TimeRate<'a> {
    /// `∂_t V = e^{itΛ} N`, taken from the equation.
    Exact,
    /// Supplied externally, e.g. finite differences of stored profiles.
    Given { wave: &'a [Complex64], kg: &'a [Complex64] },
}

/// `∂_t V` by central differences of equally spaced states centered on the
/// middle one: 3 states give second order, 5 states fourth order.
pub fn central_rate(states: &[ProfileState], dt: f64) -> Result<(Field, Field)> {
    let w: &[f64] = match states.len() {
        3 => &[-0.5, 0.0, 0.5],
        5 => &[1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0],
        m => return Err(WkgError::Input(format!("central difference needs 3 or 5 states, got {m}"))),
    };
    let comb = |pick: fn(&ProfileState) -> &[Complex64]| -> Field {
        let len = pick(&states[0]).len();
        (0..len)
            .into_par_iter()
            .map(|i| {
                let mut s = Complex64::default();
                for (st, c) in states.iter().zip(w) {
                    if *c != 0.0 {
                        s += *c * pick(st)[i];
                    }
                }
                s / dt
            })
            .collect()
    };
    Ok((comb(|s| &s.v_wa), comb(|s| &s.v_kg)))
}

/// Relative residual `|| LHS - RHS || / || LHS ||` of
/// `F(Γ_l U) = i ∂_{ξ_l} N^ + e^{-itΛ} ∂_{ξ_l}(Λ V^)`, where the left side
/// is assembled as `x_l ∂_t U + t ∂_l U` with `∂_t U = e^{-itΛ} ∂_t V - iΛU`.
pub fn gamma_identity_residual(
    solver: &Solver,
    state: &ProfileState,
    channel: Channel,
    l: usize,
    rate: TimeRate<'_>,
) -> Result<f64> {
    let grid = solver.grid();
    check_axis(grid, l)?;
    let t = state.t;
    let (nw, nk) = solver.sources(&state.v_wa, &state.v_kg, t);
    let n_hat = match channel {
        Channel::Wave => nw,
        Channel::KleinGordon => nk,
    };
    let v = state.profile(channel);
    let u = state.normalized_channel(grid, channel);
    let ks = grid.wavevectors();

    // ∂_t U
    let du: Field = match rate {
        TimeRate::Exact => (0..grid.len())
            .into_par_iter()
            .map(|i| n_hat[i] - I * channel.lambda(&ks[i]) * u[i])
            .collect(),
        TimeRate::Given { wave, kg } => {
            let mut dv = match channel {
                Channel::Wave => wave.to_vec(),
                Channel::KleinGordon => kg.to_vec(),
            };
            propagate(grid, &mut dv, channel, t);
            (0..grid.len())
                .into_par_iter()
                .map(|i| dv[i] - I * channel.lambda(&ks[i]) * u[i])
                .collect()
        }
    };
    let mut lhs = x_weight(grid, &du, l);
    lhs.par_iter_mut().enumerate().for_each(|(i, z)| *z += t * I * ks[i][l] * u[i]);

    // i ∂_ξ N^ = F{x N}
    let mut rhs = x_weight(grid, &n_hat, l);
    let lam_v: Field = (0..grid.len()).into_par_iter().map(|i| channel.lambda(&ks[i]) * v[i]).collect();
    let mut d_lam_v = xi_derivative_unchecked(grid, &lam_v, l);
    propagate(grid, &mut d_lam_v, channel, t);
    rhs.par_iter_mut().zip(d_lam_v.par_iter()).for_each(|(a, b)| *a += b);

    let num = par_sum(lhs.len(), |i| (lhs[i] - rhs[i]).norm_sqr());
    let den = par_sum(lhs.len(), |i| lhs[i].norm_sqr());
    Ok(if den == 0.0 { num.sqrt() } else { (num / den).sqrt() })
}

/// One entry of the weighted profile record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedProfileEntry {
    /// Vector-field label: `id`, `omega23`, `omega31` or `omega12`.
    pub field: String,
    pub l: usize,
    pub k: i32,
    /// `2^{N(n+1)k^+} 2^{k/2} || φ_k ∂_{ξ_l} V^wa ||_{L^2_ξ}`.
    pub wave: f64,
    /// `2^{N(n+1)k^+} 2^{k^+} || φ_k ∂_{ξ_l} V^kg ||_{L^2_ξ}`.
    pub kg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct WeightedProfileRecord {
    pub n: u32,
    pub entries: Vec<WeightedProfileEntry>,
}

impl WeightedProfileRecord {
    /// Supremum over fields, `l` and `k` of `wave + kg`.
    pub fn sup(&self) -> f64 {
        self.entries.iter().map(|e| e.wave + e.kg).fold(0.0, f64::max)
    }
}

/// Per-shell `L^2_ξ` norms of `φ_k g` for every `k` in the grid's range.
pub fn shell_l2_xi(grid: &SpectralGrid, g: &[Complex64]) -> Vec<(i32, f64)> {
    let (kmin, kmax) = grid.k_range();
    let mw = grid.mode_weight();
    (kmin..=kmax)
        .map(|k| {
            let s = par_sum(g.len(), |i| {
                if grid.is_nyquist(i) {
                    return 0.0;
                }
                let c = phi_k(k, grid.kmag(i));
                c * c * g[i].norm_sqr()
            });
            (k, (mw * s).sqrt())
        })
        .collect()
}

/// Weighted profile norms with `n = 0` (no vector field) or `n = 1`
/// (one rotation).
pub fn weighted_profile_norms(
    grid: &SpectralGrid,
    state: &ProfileState,
    params: &DyadicParams,
    n: u32,
) -> Result<WeightedProfileRecord> {
    if n + 1 > params.n1 || n > 1 {
        return Err(WkgError::Input(format!(
            "vector-field order {n} not supported (need n <= min(N1 - 1, 1))"
        )));
    }
    let fields: Vec<(String, Field, Field)> = if n == 0 {
        vec![("id".to_string(), state.v_wa.clone(), state.v_kg.clone())]
    } else {
        if grid.dim() != 3 {
            return Err(WkgError::Input("rotations need a 3-d grid".into()));
        }
        ROTATIONS
            .iter()
            .map(|&(j, k)| {
                (
                    format!("omega{}{}", j + 1, k + 1),
                    rotation_unchecked(grid, &state.v_wa, j, k),
                    rotation_unchecked(grid, &state.v_kg, j, k),
                )
            })
            .collect()
    };
    let big_n = params.big_n(n + 1);
    let mut entries = Vec::new();
    for (name, vw, vk) in &fields {
        for l in 0..grid.dim() {
            let dw = shell_l2_xi(grid, &xi_derivative_unchecked(grid, vw, l));
            let dk = shell_l2_xi(grid, &xi_derivative_unchecked(grid, vk, l));
            for ((k, a), (_, b)) in dw.into_iter().zip(dk) {
                let base = big_n * plus(k);
                entries.push(WeightedProfileEntry {
                    field: name.clone(),
                    l,
                    k,
                    wave: pow2(base + 0.5 * k as f64) * a,
                    kg: pow2(base + plus(k)) * b,
                });
            }
        }
    }
    Ok(WeightedProfileRecord { n, entries })
}
