//! The renormalized profile `V*^ = e^{-iΘ} V^kg^` and a finite-difference
//! check of its evolution law.

use super::theta::ThetaField;
use crate::error::{Result, WkgError};
use crate::grid::{par_sum, Field};
use crate::system::{ProfileState, Solver};
use num_complex::Complex64;
use rayon::prelude::*;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `e^{-iΘ(ξ)} V^(ξ)` pointwise.
pub fn renormalize_profile(v_kg: &[Complex64], theta: &[f64]) -> Field {
    assert_eq!(v_kg.len(), theta.len(), "profile and phase differ in length");
    v_kg.par_iter()
        .zip(theta.par_iter())
        .map(|(v, th)| v * Complex64::from_polar(1.0, -th))
        .collect()
}

/// Relative `L^2` error, over the modes that carry a phase, between the
/// central difference of `V*` and
/// `e^{-iΘ} (∂_t V^kg - i q_+ u_low(tξ/Λ_kg(ξ), t) V^kg)` at the middle time.
/// `states` and `thetas` are 3 (second order) or 5 (fourth order) equally
/// spaced samples.
pub fn renorm_identity_residual(
    solver: &Solver,
    field: &ThetaField,
    states: &[&ProfileState],
    thetas: &[&[f64]],
) -> Result<f64> {
    let grid = solver.grid();
    let w: &[f64] = match (states.len(), thetas.len()) {
        (3, 3) => &[-0.5, 0.0, 0.5],
        (5, 5) => &[1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0],
        (a, b) => {
            return Err(WkgError::Input(format!(
                "renormalization check needs 3 or 5 states and phases, got {a} and {b}"
            )))
        }
    };
    let dt = states[1].t - states[0].t;
    if !(dt > 0.0) || states.windows(2).any(|p| ((p[1].t - p[0].t) - dt).abs() > 1e-9 * dt) {
        return Err(WkgError::Input(format!(
            "renormalization check needs equally spaced times, got {:?}",
            states.iter().map(|s| s.t).collect::<Vec<_>>()
        )));
    }
    let c = states.len() / 2;
    let mid = states[c];
    let (_, dv) = solver.rhs(&mid.v_wa, &mid.v_kg, mid.t);
    let ul = field.spread(grid.len(), &field.sample_state(grid, mid));
    let q = field.q_plus(grid.len());
    let renormalized: Vec<Field> = states
        .iter()
        .zip(thetas)
        .zip(w)
        .map(|((s, th), c)| if *c != 0.0 { renormalize_profile(&s.v_kg, th) } else { Vec::new() })
        .collect();
    let band = grid.dealias_mask();
    let terms: Vec<(f64, f64)> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            if !band[i] || grid.is_nyquist(i) {
                return (0.0, 0.0);
            }
            let mut fd = Complex64::default();
            for (f, c) in renormalized.iter().zip(w) {
                if *c != 0.0 {
                    fd += *c * f[i];
                }
            }
            fd /= dt;
            let v = mid.v_kg[i];
            let rhs = Complex64::from_polar(1.0, -thetas[c][i]) * (dv[i] - I * q[i] * ul[i] * v);
            ((fd - rhs).norm_sqr(), rhs.norm_sqr())
        })
        .collect();
    let num = par_sum(terms.len(), |i| terms[i].0);
    let den = par_sum(terms.len(), |i| terms[i].1);
    Ok(if den > 0.0 { (num / den).sqrt() } else { num.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_is_preserved() {
        let v: Vec<Complex64> = (0..50).map(|k| Complex64::new(k as f64 * 0.37 - 3.0, 1.0 / (k as f64 + 1.0))).collect();
        let th: Vec<f64> = (0..50).map(|k| (k as f64).sin() * 40.0).collect();
        let r = renormalize_profile(&v, &th);
        for (a, b) in v.iter().zip(&r) {
            assert!((a.norm() - b.norm()).abs() <= 1e-14 * a.norm().max(1.0));
        }
        assert_eq!(renormalize_profile(&v, &[0.0; 50]), v);
    }
}
