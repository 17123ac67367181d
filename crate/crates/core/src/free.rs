//! Exact free evolution of a profile, evaluated by direct Fourier summation.

use crate::dispersion::Channel;
use crate::grid::{dot3, Field, SpectralGrid};
use num_complex::Complex64;
use rayon::prelude::*;

/// `sum_xi exp(i (x.xi - t Lambda(xi))) f^(xi) * mode_weight / (2 pi)^dim`
/// at arbitrary points.
pub fn free_evolve_eval(
    grid: &SpectralGrid,
    profile_hat: &[Complex64],
    channel: Channel,
    t: f64,
    points: &[[f64; 3]],
) -> Vec<Complex64> {
    let scale = grid.spectral_measure();
    let modes: Vec<([f64; 3], Complex64)> = profile_hat
        .iter()
        .enumerate()
        .filter(|(i, z)| z.norm_sqr() > 0.0 && !grid.is_nyquist(*i))
        .map(|(i, &z)| {
            let xi = grid.wavevector(i);
            (xi, z * Complex64::from_polar(1.0, -t * channel.lambda(&xi)))
        })
        .collect();
    points
        .par_iter()
        .map(|x| {
            let s: Complex64 = modes
                .iter()
                .map(|(xi, z)| z * Complex64::from_polar(1.0, dot3(x, xi)))
                .sum();
            s * scale
        })
        .collect()
}

/// [`free_evolve_eval`] on the tensor product of per-axis sample
/// coordinates, summed one axis at a time. Output is row-major with the
/// first axis slowest; only the first `dim` axes are used.
pub fn free_evolve_tensor(
    grid: &SpectralGrid,
    profile_hat: &[Complex64],
    channel: Channel,
    t: f64,
    axes: &[Vec<f64>],
) -> Vec<Complex64> {
    let n = grid.n();
    let dim = grid.dim();
    assert!(axes.len() >= dim, "need one coordinate list per axis");
    let scale = grid.spectral_measure();
    let c: Field = profile_hat
        .par_iter()
        .enumerate()
        .map(|(i, z)| {
            if grid.is_nyquist(i) {
                Complex64::default()
            } else {
                scale * z * Complex64::from_polar(1.0, -t * channel.lambda(&grid.wavevector(i)))
            }
        })
        .collect();
    let ks = grid.wavenumbers();
    let table = |xs: &[f64]| -> Vec<Complex64> {
        xs.iter()
            .flat_map(|x| ks.iter().map(move |k| Complex64::from_polar(1.0, x * k)))
            .collect()
    };
    // contract the last axis of `data` (shape rows x n) against `e` (p x n)
    let contract = |data: &[Complex64], e: &[Complex64], p: usize| -> Field {
        data.par_chunks(n)
            .flat_map_iter(|row| (0..p).map(move |q| row.iter().zip(&e[q * n..(q + 1) * n]).map(|(a, b)| a * b).sum()))
            .collect()
    };
    if dim == 1 {
        let e = table(&axes[0]);
        return contract(&c, &e, axes[0].len());
    }
    let (p1, p2, p3) = (axes[0].len(), axes[1].len(), axes[2].len());
    // (m1, m2, m3) -> (m1, m2, q3)
    let t1 = contract(&c, &table(&axes[2]), p3);
    // -> (m1, q3, m2) -> (m1, q3, q2)
    let t1t = transpose_last(&t1, n, p3);
    let t2 = contract(&t1t, &table(&axes[1]), p2);
    // -> (q3, q2, m1) -> (q3, q2, q1)
    let t2t = transpose_first(&t2, n, p3 * p2);
    let t3 = contract(&t2t, &table(&axes[0]), p1);
    // (q3, q2, q1) -> (q1, q2, q3)
    let mut out = vec![Complex64::default(); p1 * p2 * p3];
    for a in 0..p3 {
        for b in 0..p2 {
            for q in 0..p1 {
                out[(q * p2 + b) * p3 + a] = t3[(a * p2 + b) * p1 + q];
            }
        }
    }
    out
}

// (blocks, rows, cols) -> (blocks, cols, rows)
fn transpose_last(d: &[Complex64], rows: usize, cols: usize) -> Field {
    let blocks = d.len() / (rows * cols);
    let mut out = vec![Complex64::default(); d.len()];
    for b in 0..blocks {
        let base = b * rows * cols;
        for r in 0..rows {
            for c in 0..cols {
                out[base + c * rows + r] = d[base + r * cols + c];
            }
        }
    }
    out
}

// (m, rest) -> (rest, m)
fn transpose_first(d: &[Complex64], m: usize, rest: usize) -> Field {
    let mut out = vec![Complex64::default(); d.len()];
    for i in 0..m {
        for j in 0..rest {
            out[j * m + i] = d[i * rest + j];
        }
    }
    out
}

/// Free evolution sampled on the grid itself (one inverse transform).
pub fn free_evolve_grid(grid: &SpectralGrid, profile_hat: &[Complex64], channel: Channel, t: f64) -> Field {
    let mut out = profile_hat.to_vec();
    grid.apply_radial_free(&mut out, |xi| Complex64::from_polar(1.0, -t * channel.lambda(xi)));
    grid.inverse_in_place(&mut out);
    out
}

/// Propagator `e^{-i t Lambda}` applied to spectral data.
pub fn propagate(grid: &SpectralGrid, f_hat: &mut [Complex64], channel: Channel, t: f64) {
    let ks = grid.wavevectors();
    f_hat.par_iter_mut().enumerate().for_each(|(i, z)| {
        *z *= Complex64::from_polar(1.0, -t * channel.lambda(&ks[i]));
    });
}
