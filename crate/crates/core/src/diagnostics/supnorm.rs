//! Pointwise records `|| ∂^α ∂_0^{α_0} f ||_∞`, `|α| + α_0 <= 2`.

use super::sobolev::multi_indices;
use crate::dispersion::Channel;
use crate::grid::{Field, SpectralGrid};
use crate::system::{ProfileState, Solver};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupEntry {
    /// `u` or `v`.
    pub field: String,
    pub alpha: [u32; 3],
    pub alpha0: u32,
    pub value: f64,
}

impl SupEntry {
    /// Machine-readable column name, e.g. `sup_v_t1_x010`.
    pub fn name(&self) -> String {
        format!(
            "sup_{}_t{}_x{}{}{}",
            self.field, self.alpha0, self.alpha[0], self.alpha[1], self.alpha[2]
        )
    }
}

fn apply_alpha(grid: &SpectralGrid, f: &[Complex64], alpha: &[u32; 3]) -> Field {
    let ks = grid.wavevectors();
    let mut out = f.to_vec();
    out.par_iter_mut().enumerate().for_each(|(i, z)| {
        for a in 0..3 {
            for _ in 0..alpha[a] {
                *z *= Complex64::new(0.0, ks[i][a]);
            }
        }
    });
    out
}

fn sup_real(grid: &SpectralGrid, f: &[Complex64]) -> f64 {
    grid.inverse(f).par_iter().map(|z| z.re.abs()).reduce(|| 0.0, f64::max)
}

/// Sup norms of the solution and its derivatives; second time derivatives
/// come from the equations.
pub fn sup_norm_record(solver: &Solver, state: &ProfileState) -> Vec<SupEntry> {
    let grid = solver.grid();
    let f = state.spectral_fields(grid);
    let (nw, nk) = solver.sources(&state.v_wa, &state.v_kg, state.t);
    let ks = grid.wavevectors();
    // ∂_t^2 f = -Λ^2 f + N
    let second = |g: &[Complex64], n: &[Complex64], ch: Channel| -> Field {
        (0..grid.len())
            .into_par_iter()
            .map(|i| -ch.lambda(&ks[i]).powi(2) * g[i] + n[i])
            .collect()
    };
    let u_tt = second(&f.u, &nw, Channel::Wave);
    let v_tt = second(&f.v, &nk, Channel::KleinGordon);
    let mut out = Vec::new();
    for (name, levels) in [("u", [&f.u, &f.u_t, &u_tt]), ("v", [&f.v, &f.v_t, &v_tt])] {
        for alpha0 in 0..=2u32 {
            for alpha in multi_indices(grid.dim(), 2 - alpha0) {
                let g = apply_alpha(grid, levels[alpha0 as usize], &alpha);
                out.push(SupEntry {
                    field: name.to_string(),
                    alpha,
                    alpha0,
                    value: sup_real(grid, &g),
                });
            }
        }
    }
    out
}
