//! Frequency/space localized quantities of the Hardy-type lemma.

use crate::grid::{norm3, par_sum, SpectralGrid};
use crate::lp::{atom_norms, j_min, pk_physical};
use crate::profiles::xi_derivative_unchecked;
use crate::diagnostics::znorm::shell_l2;
use crate::lp::phi_k;
use num_complex::Complex64;

/// `(A_k, B_k)` with
/// `A_k = ||P_k f||_{L^2} + Σ_l ||φ_k ∂_{ξ_l} f^||_{L^2_ξ}` and
/// `B_k = (Σ_j 2^{2j} ||Q_{jk} f||^2)^{1/2}`.
pub fn hardy_quantities(grid: &SpectralGrid, f_hat: &[Complex64], k: i32) -> (f64, f64) {
    let mut a = shell_l2(grid, f_hat, k);
    let mw = grid.mode_weight();
    for l in 0..grid.dim() {
        let d = xi_derivative_unchecked(grid, f_hat, l);
        let s = par_sum(d.len(), |i| {
            if grid.is_nyquist(i) {
                return 0.0;
            }
            let c = phi_k(k, grid.kmag(i));
            c * c * d[i].norm_sqr()
        });
        a += (mw * s).sqrt();
    }
    let b = atom_norms(grid, f_hat, k)
        .into_iter()
        .map(|(j, q)| (2.0f64.powi(j) * q).powi(2))
        .sum::<f64>()
        .sqrt();
    (a, b)
}

/// `2^{max(-k,0)} ||P_k f||_{L^2} + || |x| P_k f ||_{L^2}`, the quantity
/// `B_k` is comparable to.
pub fn hardy_equivalent(grid: &SpectralGrid, f_hat: &[Complex64], k: i32) -> f64 {
    let pk = pk_physical(grid, f_hat, k);
    let dv = grid.cell_volume();
    let plain = (dv * pk.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt();
    let weighted = par_sum(pk.len(), |i| {
        let r = norm3(&grid.position(i));
        r * r * pk[i].norm_sqr()
    });
    2.0f64.powi(j_min(k)) * plain + (dv * weighted).sqrt()
}
