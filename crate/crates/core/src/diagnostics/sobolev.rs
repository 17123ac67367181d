//! Weighted Sobolev norms `H^{a,b}_{S,wa}`, `H^{a,b}_{S,kg}`, `H^{a,b}_Ω`.

use crate::dispersion::bracket;
use crate::error::{Result, WkgError};
use crate::grid::{par_sum, Field, SpectralGrid};
use crate::profiles::{multiply_by_x, rotation_unchecked, ROTATIONS};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `Σ_{|β'| <= |β| <= b} || x^{β'} ∂^β f ||_{H^a}`.
    Wa,
    /// `Σ_{|β|, |β'| <= b} || x^{β'} ∂^β f ||_{H^a}`.
    Kg,
    /// `Σ_{|α| <= b} || Ω^α f ||_{H^a}`.
    Omega,
}

/// `|| f ||_{H^a} = || <ξ>^a f^ ||_{L^2}` (Plancherel).
pub fn h_norm(grid: &SpectralGrid, f_hat: &[Complex64], a: f64) -> f64 {
    let s = par_sum(f_hat.len(), |i| bracket(grid.kmag(i)).powf(2.0 * a) * f_hat[i].norm_sqr());
    (grid.spectral_measure() * s).sqrt()
}

/// Multi-indices over `dim` axes with total order at most `b`.
pub fn multi_indices(dim: usize, b: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    let top = |a: usize| if a < dim { b } else { 0 };
    for i in 0..=top(0) {
        for j in 0..=top(1) {
            for k in 0..=top(2) {
                if i + j + k <= b {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out.sort_by_key(|m| (m[0] + m[1] + m[2], std::cmp::Reverse(*m)));
    out
}

fn order(m: &[u32; 3]) -> u32 {
    m[0] + m[1] + m[2]
}

/// Spectral `∂^β f`.
fn derivative_multi(grid: &SpectralGrid, f_hat: &[Complex64], beta: &[u32; 3]) -> Field {
    let mut out = f_hat.to_vec();
    let ks = grid.wavevectors();
    out.par_iter_mut().enumerate().for_each(|(i, z)| {
        let mut m = Complex64::new(1.0, 0.0);
        for a in 0..3 {
            for _ in 0..beta[a] {
                m *= Complex64::new(0.0, ks[i][a]);
            }
        }
        *z *= m;
    });
    if order(beta) > 0 {
        grid.apply_radial(&mut out, |_| 1.0);
    }
    out
}

/// The weighted norm of the chosen flavor. The physical counterpart of
/// `f^` must be contained in the box whenever `b > 0`.
pub fn sobolev_weighted_norm(grid: &SpectralGrid, f_hat: &[Complex64], a: f64, b: u32, flavor: Flavor) -> Result<f64> {
    if b > 2 {
        return Err(WkgError::Input(format!("weighted norms support b <= 2, got {b}")));
    }
    if b == 0 {
        return Ok(h_norm(grid, f_hat, a));
    }
    grid.check_contained(&grid.inverse(f_hat))?;
    Ok(weighted_unchecked(grid, f_hat, a, b, flavor))
}

pub(crate) fn weighted_unchecked(grid: &SpectralGrid, f_hat: &[Complex64], a: f64, b: u32, flavor: Flavor) -> f64 {
    let idx = multi_indices(grid.dim(), b);
    match flavor {
        Flavor::Wa | Flavor::Kg => {
            let mut total = 0.0;
            for beta in &idx {
                let phys = grid.inverse(&derivative_multi(grid, f_hat, beta));
                for bp in &idx {
                    if flavor == Flavor::Wa && order(bp) > order(beta) {
                        continue;
                    }
                    let mut g = phys.clone();
                    for axis in 0..grid.dim() {
                        for _ in 0..bp[axis] {
                            multiply_by_x(grid, &mut g, axis);
                        }
                    }
                    grid.forward_in_place(&mut g);
                    total += h_norm(grid, &g, a);
                }
            }
            total
        }
        Flavor::Omega => {
            if grid.dim() != 3 {
                // no rotations in one dimension
                return h_norm(grid, f_hat, a);
            }
            let mut total = 0.0;
            for alpha in multi_indices(3, b) {
                let mut g = f_hat.to_vec();
                // Ω^α = Ω_23^{α1} Ω_31^{α2} Ω_12^{α3}: the rightmost acts first
                for r in (0..3).rev() {
                    let (j, k) = ROTATIONS[r];
                    for _ in 0..alpha[r] {
                        g = rotation_unchecked(grid, &g, j, k);
                    }
                }
                total += h_norm(grid, &g, a);
            }
            total
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_counts() {
        assert_eq!(multi_indices(3, 0).len(), 1);
        assert_eq!(multi_indices(3, 1).len(), 4);
        assert_eq!(multi_indices(3, 2).len(), 10);
        assert_eq!(multi_indices(1, 2).len(), 3);
    }
}
