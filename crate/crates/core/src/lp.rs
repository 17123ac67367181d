//! Littlewood-Paley cutoffs and space-frequency atoms.
//!
//! All cutoffs are radial; they take `r = |xi|` (or `r = |x|` for the
//! physical-space cutoffs used by the atoms).

use crate::error::{Result, WkgError};
use crate::grid::{norm3, par_sum, Field, SpectralGrid};
use num_complex::Complex64;
use rayon::prelude::*;

const PLATEAU: f64 = 1.25;
const SUPPORT: f64 = 1.6;

fn g(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Base bump: smooth, even, `1` on `[0, 5/4]`, `0` beyond `8/5`.
pub fn bump(r: f64) -> f64 {
    let r = r.abs();
    if r <= PLATEAU {
        1.0
    } else if r >= SUPPORT {
        0.0
    } else {
        let s = (r - PLATEAU) / (SUPPORT - PLATEAU);
        let a = g(1.0 - s);
        a / (a + g(s))
    }
}

fn scaled(r: f64, k: i32) -> f64 {
    bump(r * (-k as f64).exp2())
}

/// `phi_k(r) = phi(r / 2^k) - phi(r / 2^(k-1))`, supported on
/// `[5/8 * 2^k, 8/5 * 2^k]`.
pub fn phi_k(k: i32, r: f64) -> f64 {
    scaled(r, k) - scaled(r, k - 1)
}

/// `phi_{<= B} = sum_{m <= B} phi_m`.
pub fn phi_le(b: f64, r: f64) -> f64 {
    scaled(r, b.floor() as i32)
}

/// `phi_{>= B} = sum_{m >= B} phi_m`.
pub fn phi_ge(b: f64, r: f64) -> f64 {
    1.0 - scaled(r, b.ceil() as i32 - 1)
}

/// `phi_{< B}`.
pub fn phi_lt(b: f64, r: f64) -> f64 {
    scaled(r, b.ceil() as i32 - 1)
}

/// `phi_{> B}`.
pub fn phi_gt(b: f64, r: f64) -> f64 {
    1.0 - scaled(r, b.floor() as i32)
}

/// Interval family: `phi_j` inside `(a, b)`, `phi_{<= a}` at `j = a`,
/// `phi_{>= b}` at `j = b`.
pub fn phi_interval(j: i32, a: i32, b: i32, r: f64) -> f64 {
    assert!(a < b && (a..=b).contains(&j), "need a < b and j in [a, b]");
    if j == a {
        phi_le(a as f64, r)
    } else if j == b {
        phi_ge(b as f64, r)
    } else {
        phi_k(j, r)
    }
}

/// Physical cutoff of the atom `(j, k)`.
pub fn atom_cutoff(j: i32, k: i32, r: f64) -> Result<f64> {
    check_atom(j, k)?;
    Ok(if k + j == 0 && k <= 0 {
        phi_le(-k as f64, r)
    } else if j == 0 {
        phi_le(0.0, r)
    } else {
        phi_k(j, r)
    })
}

fn check_atom(j: i32, k: i32) -> Result<()> {
    if j < 0 || k + j < 0 {
        Err(WkgError::InadmissibleAtom { j, k })
    } else {
        Ok(())
    }
}

/// First admissible `j` for shell `k`.
pub fn j_min(k: i32) -> i32 {
    (-k).max(0)
}

/// `P_k` applied to Fourier coefficients.
pub fn project_pk(grid: &SpectralGrid, f_hat: &[Complex64], k: i32) -> Field {
    let mut out = f_hat.to_vec();
    grid.apply_radial(&mut out, |r| phi_k(k, r));
    out
}

/// Physical samples of `P_k f`.
pub fn pk_physical(grid: &SpectralGrid, f_hat: &[Complex64], k: i32) -> Field {
    let mut out = project_pk(grid, f_hat, k);
    grid.inverse_in_place(&mut out);
    out
}

/// Physical samples of `Q_{jk} f`.
pub fn project_qjk(grid: &SpectralGrid, f_hat: &[Complex64], j: i32, k: i32) -> Result<Field> {
    check_atom(j, k)?;
    let mut pk = pk_physical(grid, f_hat, k);
    apply_atom_cutoff(grid, &mut pk, j, k);
    Ok(pk)
}

/// Multiplies physical samples in place by the atom cutoff.
pub fn apply_atom_cutoff(grid: &SpectralGrid, phys: &mut [Complex64], j: i32, k: i32) {
    pk_cutoff_iter(grid, phys, |r| atom_cutoff(j, k, r).unwrap_or(0.0));
}

fn pk_cutoff_iter(grid: &SpectralGrid, phys: &mut [Complex64], c: impl Fn(f64) -> f64 + Sync) {
    phys.par_iter_mut().enumerate().for_each(|(i, v)| {
        *v *= c(norm3(&grid.position(i)));
    });
}

/// Largest `j` whose atom cutoff still meets the box (`2^j <= 4 L`).
pub fn j_max(grid: &SpectralGrid) -> i32 {
    (4.0 * grid.box_length()).log2().floor() as i32
}

/// `||Q_{jk} f||_{L^2}` for every admissible `j` up to [`j_max`], computed
/// from one inverse transform of `P_k f`.
pub fn atom_norms(grid: &SpectralGrid, f_hat: &[Complex64], k: i32) -> Vec<(i32, f64)> {
    let pk = pk_physical(grid, f_hat, k);
    let radii: Vec<f64> = (0..grid.len()).map(|i| norm3(&grid.position(i))).collect();
    let dv = grid.cell_volume();
    (j_min(k)..=j_max(grid).max(j_min(k)))
        .map(|j| {
            let s = par_sum(pk.len(), |i| {
                let c = atom_cutoff(j, k, radii[i]).unwrap_or(0.0);
                c * c * pk[i].norm_sqr()
            });
            (j, (dv * s).sqrt())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn bump_shape() {
        assert_eq!(bump(0.0), 1.0);
        assert_eq!(bump(1.25), 1.0);
        assert_eq!(bump(1.6), 0.0);
        assert_eq!(bump(-1.0), 1.0);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = bump(1.25 + 0.35 * i as f64 / 100.0);
            assert!(v <= prev + 1e-15 && (0.0..=1.0).contains(&v));
            prev = v;
        }
    }

    #[test]
    fn plateau_and_partition() {
        assert_eq!(phi_k(0, 1.2), 1.0);
        let s: f64 = (-10..=10).map(|k| phi_k(k, 0.7)).sum();
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn interval_endpoints() {
        for &r in &[0.1, 0.5, 1.0, 3.0, 7.0, 20.0] {
            assert_eq!(phi_interval(-1, -1, 3, r), phi_le(-1.0, r));
            assert_eq!(phi_interval(3, -1, 3, r), phi_ge(3.0, r));
            assert_eq!(phi_interval(1, -1, 3, r), phi_k(1, r));
            let s: f64 = (-1..=3).map(|j| phi_interval(j, -1, 3, r)).sum();
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn le_and_gt_are_complementary() {
        for &b in &[-2.5, -1.0, 0.0, 0.3, 2.0] {
            for &r in &[0.01, 0.4, 1.1, 2.7, 9.0] {
                assert!((phi_le(b, r) + phi_gt(b, r) - 1.0).abs() < 1e-15);
                assert!((phi_lt(b, r) + phi_ge(b, r) - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn atom_cutoffs_partition_space() {
        for k in -4..=3 {
            for &r in &[0.0, 0.3, 1.0, 2.2, 15.0, 300.0] {
                let s: f64 = (j_min(k)..40).map(|j| atom_cutoff(j, k, r).unwrap()).sum();
                assert!((s - 1.0).abs() < 1e-14, "k={k} r={r} s={s}");
            }
        }
        assert!(atom_cutoff(1, -2, 1.0).is_err());
        assert!(atom_cutoff(-1, 3, 1.0).is_err());
    }

    #[test]
    fn single_mode_projection() {
        // L = 2 pi so that m = 1 has |xi| = 1
        let g = SpectralGrid::new(3, 16, 2.0 * PI).unwrap();
        let mut f = vec![Complex64::default(); g.len()];
        f[g.ravel([0, 0, 1])] = Complex64::new(1.0, 0.0);
        let p0 = project_pk(&g, &f, 0);
        assert_eq!(p0, f);
        let p5 = project_pk(&g, &f, 5);
        assert!(p5.iter().all(|z| z.norm() == 0.0));
    }

    proptest! {
        #[test]
        fn partition_of_unity(r in 1e-3..1e3f64) {
            let s: f64 = (-12..=12).map(|k| phi_k(k, r)).sum();
            prop_assert!((s - 1.0).abs() < 1e-13);
        }

        #[test]
        fn le_is_partial_sum(b in -6i32..6, r in 1e-3..1e2f64) {
            let s: f64 = (-20..=b).map(|k| phi_k(k, r)).sum();
            prop_assert!((s - phi_le(b as f64, r)).abs() < 1e-13);
        }
    }
}
