//! Periodic box discretization.
//!
//! Transform convention (fixed once for the whole crate):
//!
//! ```text
//! f^(xi) = cell_volume * sum_x f(x) exp(-i x.xi)
//! f(x)   = mode_weight / (2 pi)^dim * sum_xi f^(xi) exp(i x.xi)
//! ```
//!
//! with centered coordinates `x = -L/2 + j L/n` and wavenumbers
//! `xi = (2 pi / L) m`, `m in [-n/2, n/2)`. Spectral arrays are stored in
//! FFT-native order along every axis (index `i` holds `m = i` for `i < n/2`
//! and `m = i - n` otherwise), row-major over axes.

use crate::error::{Result, WkgError};
use crate::fft::CubeFft;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

pub type Field = Vec<Complex64>;

#[derive(Debug, Clone)]
pub struct SpectralGrid {
    dim: usize,
    n: usize,
    box_length: f64,
    kvec: Vec<[f64; 3]>,
    kmag: Vec<f64>,
    neg: Vec<usize>,
    nyquist: Vec<bool>,
    fft: CubeFft,
}

impl SpectralGrid {
    /// Builds a `dim`-dimensional grid with `n` points per axis on a box of
    /// side `box_length`.
    pub fn new(dim: usize, n: usize, box_length: f64) -> Result<Self> {
        if dim != 1 && dim != 3 {
            return Err(WkgError::Grid(format!("dimension must be 1 or 3, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(WkgError::Grid(format!("points per axis must be a power of two >= 8, got {n}")));
        }
        if !(box_length > 0.0 && box_length.is_finite()) {
            return Err(WkgError::Grid(format!("box length must be positive, got {box_length}")));
        }
        let len = n.pow(dim as u32);
        let k0 = 2.0 * PI / box_length;
        let signed = |i: usize| -> f64 {
            if i < n / 2 {
                i as f64
            } else {
                i as f64 - n as f64
            }
        };
        let kvec: Vec<[f64; 3]> = (0..len)
            .map(|idx| {
                let mut xi = [0.0; 3];
                let ix = unravel(idx, n, dim);
                for a in 0..dim {
                    xi[a] = k0 * signed(ix[a]);
                }
                xi
            })
            .collect();
        let kmag = kvec.iter().map(|k| norm3(k)).collect();
        let neg = (0..len)
            .map(|idx| {
                let ix = unravel(idx, n, dim);
                let mut out = 0;
                for a in 0..dim {
                    out = out * n + (n - ix[a]) % n;
                }
                out
            })
            .collect();
        let nyquist = (0..len)
            .map(|idx| {
                let ix = unravel(idx, n, dim);
                (0..dim).any(|a| ix[a] == n / 2)
            })
            .collect();
        Ok(SpectralGrid {
            dim,
            n,
            box_length,
            kvec,
            kmag,
            neg,
            nyquist,
            fft: CubeFft::new(n, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of points (equivalently, of modes).
    pub fn len(&self) -> usize {
        self.kvec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kvec.is_empty()
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn dx(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Fundamental wavenumber `2 pi / L`.
    pub fn dk(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    pub fn cell_volume(&self) -> f64 {
        self.dx().powi(self.dim as i32)
    }

    /// Quadrature weight `d xi` of one mode.
    pub fn mode_weight(&self) -> f64 {
        self.dk().powi(self.dim as i32)
    }

    /// `mode_weight / (2 pi)^dim = 1 / L^dim`: the factor in front of every
    /// Fourier-side integral.
    pub fn spectral_measure(&self) -> f64 {
        self.mode_weight() / (2.0 * PI).powi(self.dim as i32)
    }

    /// Centered physical coordinate along one axis.
    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.box_length + i as f64 * self.dx()
    }

    /// 1-D coordinates `x_j` in `[-L/2, L/2)`.
    pub fn x_coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    /// Wavenumbers along one axis in FFT-native order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.dk() * self.signed_index(i) as f64).collect()
    }

    pub fn signed_index(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        unravel(idx, self.n, self.dim)
    }

    pub fn ravel(&self, ix: [usize; 3]) -> usize {
        match self.dim {
            1 => ix[0],
            _ => (ix[0] * self.n + ix[1]) * self.n + ix[2],
        }
    }

    /// Physical position of grid point `idx` (unused axes are zero).
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let ix = self.unravel(idx);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.coord(ix[a]);
        }
        x
    }

    pub fn positions(&self) -> Vec<[f64; 3]> {
        (0..self.len()).map(|i| self.position(i)).collect()
    }

    pub fn wavevector(&self, idx: usize) -> [f64; 3] {
        self.kvec[idx]
    }

    pub fn wavevectors(&self) -> &[[f64; 3]] {
        &self.kvec
    }

    pub fn kmag(&self, idx: usize) -> f64 {
        self.kmag[idx]
    }

    pub fn kmags(&self) -> &[f64] {
        &self.kmag
    }

    /// True when any axis sits on the unpaired Nyquist index `n/2`.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        self.nyquist[idx]
    }

    /// Index of the mode `-xi` (the Nyquist index maps to itself).
    pub fn neg_index(&self, idx: usize) -> usize {
        self.neg[idx]
    }

    /// Modes kept by the 2/3 truncation rule: `|m_a| <= n/3` on every axis.
    pub fn in_dealias_band(&self, idx: usize) -> bool {
        let cut = (self.n / 3) as i64;
        let ix = self.unravel(idx);
        (0..self.dim).all(|a| self.signed_index(ix[a]).abs() <= cut)
    }

    pub fn dealias_mask(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.in_dealias_band(i)).collect()
    }

    /// Smallest nonzero wavenumber magnitude.
    pub fn min_wavenumber(&self) -> f64 {
        self.dk()
    }

    /// Largest wavenumber magnitude among modes that survive multipliers.
    pub fn max_wavenumber(&self) -> f64 {
        let m = (self.n / 2 - 1) as f64;
        self.dk() * m * (self.dim as f64).sqrt()
    }

    /// Dyadic shells `k` whose cutoff `phi_k` is nonzero on at least one
    /// non-Nyquist grid mode.
    pub fn k_range(&self) -> (i32, i32) {
        // supp phi_k = [2^(k-1) * 5/4, 2^k * 8/5]
        let kmin = (self.min_wavenumber() / 1.6).log2().floor() as i32 + 1;
        let kmax = (self.max_wavenumber() / 1.25).log2().ceil() as i32;
        (kmin, kmax)
    }

    // (-1)^(i0 + i1 + i2): shifts the DFT onto centered coordinates
    fn sign(&self, idx: usize) -> f64 {
        let s = self.n.trailing_zeros();
        if (idx ^ (idx >> s) ^ (idx >> (2 * s))) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// Physical samples to Fourier coefficients.
    pub fn forward(&self, phys: &[Complex64]) -> Field {
        let mut out = phys.to_vec();
        self.forward_in_place(&mut out);
        out
    }

    pub fn forward_in_place(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.len(), "field does not match grid");
        self.fft.forward(data);
        let scale = self.cell_volume();
        data.par_iter_mut().enumerate().for_each(|(i, v)| *v *= scale * self.sign(i));
    }

    /// Fourier coefficients to physical samples.
    pub fn inverse(&self, spec: &[Complex64]) -> Field {
        let mut out = spec.to_vec();
        self.inverse_in_place(&mut out);
        out
    }

    pub fn inverse_in_place(&self, data: &mut [Complex64]) {
        assert_eq!(data.len(), self.len(), "field does not match grid");
        let scale = self.spectral_measure();
        data.par_iter_mut().enumerate().for_each(|(i, v)| *v *= scale * self.sign(i));
        self.fft.inverse(data);
    }

    pub fn forward_real(&self, phys: &[f64]) -> Field {
        let mut out: Field = phys.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.forward_in_place(&mut out);
        out
    }

    /// Real part of the inverse transform.
    pub fn inverse_real(&self, spec: &[Complex64]) -> Vec<f64> {
        self.inverse(spec).into_iter().map(|z| z.re).collect()
    }

    /// Pointwise product with `m(xi)`. The Nyquist modes are zeroed. A
    /// non-finite value at the zero mode is replaced by 0; anywhere else it
    /// is an error naming the mode.
    pub fn apply_multiplier<M>(&self, field: &mut [Complex64], m: M) -> Result<()>
    where
        M: Fn(&[f64; 3]) -> Complex64 + Sync,
    {
        assert_eq!(field.len(), self.len(), "field does not match grid");
        let bad = field
            .par_iter_mut()
            .enumerate()
            .map(|(i, v)| {
                if self.is_nyquist(i) {
                    *v = Complex64::default();
                    return None;
                }
                let xi = &self.kvec[i];
                let val = m(xi);
                if val.re.is_finite() && val.im.is_finite() {
                    *v *= val;
                    None
                } else if self.kmag[i] == 0.0 {
                    *v = Complex64::default();
                    None
                } else {
                    Some((i, val))
                }
            })
            .find_first(|b| b.is_some())
            .flatten();
        match bad {
            Some((index, val)) => Err(WkgError::NonFiniteMultiplier {
                index,
                xi: self.kvec[index],
                value: format!("{val}"),
            }),
            None => Ok(()),
        }
    }

    /// Real radial multiplier `m(|xi|)` applied without finiteness checks
    /// beyond the zero-mode rule; used on hot paths with known-good symbols.
    pub fn apply_radial(&self, field: &mut [Complex64], m: impl Fn(f64) -> f64 + Sync) {
        field.par_iter_mut().enumerate().for_each(|(i, v)| {
            if self.is_nyquist(i) {
                *v = Complex64::default();
            } else {
                let val = m(self.kmag[i]);
                *v *= if val.is_finite() { val } else { 0.0 };
            }
        });
    }

    /// Spectral partial derivative `d/dx_axis` (axis in `0..dim`).
    pub fn derivative(&self, spec: &[Complex64], axis: usize) -> Field {
        let mut out = spec.to_vec();
        self.apply_radial_free(&mut out, |xi| Complex64::new(0.0, xi[axis]));
        out
    }

    // multiplier application that cannot fail (finite symbols only)
    pub(crate) fn apply_radial_free(
        &self,
        field: &mut [Complex64],
        m: impl Fn(&[f64; 3]) -> Complex64 + Sync,
    ) {
        field.par_iter_mut().enumerate().for_each(|(i, v)| {
            if self.is_nyquist(i) {
                *v = Complex64::default();
            } else {
                *v *= m(&self.kvec[i]);
            }
        });
    }

    /// `||f||_{L^2}` of physical samples.
    pub fn l2_physical(&self, phys: &[Complex64]) -> f64 {
        (self.cell_volume() * phys.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn l2_physical_real(&self, phys: &[f64]) -> f64 {
        (self.cell_volume() * phys.iter().map(|z| z * z).sum::<f64>()).sqrt()
    }

    /// `||f||_{L^2}` computed from Fourier coefficients (Plancherel).
    pub fn l2_spectral(&self, spec: &[Complex64]) -> f64 {
        (self.spectral_measure() * spec.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// `||f^||_{L^2_xi}` with the `d xi` quadrature (no `(2 pi)^-dim`).
    pub fn l2_xi(&self, spec: &[Complex64]) -> f64 {
        (self.mode_weight() * spec.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Relative L^2 mass of physical samples lying within two cells of the
    /// box boundary.
    pub fn boundary_mass(&self, phys: &[Complex64]) -> f64 {
        let n = self.n;
        let near = |i: usize| i < 2 || i >= n - 2;
        let (mut edge, mut total) = (0.0, 0.0);
        for (idx, z) in phys.iter().enumerate() {
            let w = z.norm_sqr();
            total += w;
            let ix = self.unravel(idx);
            if (0..self.dim).any(|a| near(ix[a])) {
                edge += w;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            (edge / total).sqrt()
        }
    }

    /// Fails with [`WkgError::Containment`] when the boundary mass exceeds
    /// `1e-8`.
    pub fn check_contained(&self, phys: &[Complex64]) -> Result<()> {
        let mass = self.boundary_mass(phys);
        if mass < CONTAINMENT_TOL {
            Ok(())
        } else {
            Err(WkgError::Containment { mass })
        }
    }
}

/// Relative boundary mass tolerated by operations that multiply by `x`.
pub const CONTAINMENT_TOL: f64 = 1e-8;

fn unravel(idx: usize, n: usize, dim: usize) -> [usize; 3] {
    match dim {
        1 => [idx, 0, 0],
        _ => [idx / (n * n), (idx / n) % n, idx % n],
    }
}

/// Parallel sum of `f(0) + ... + f(len - 1)` with a fixed chunking, so the
/// result does not depend on thread scheduling.
pub fn par_sum(len: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    const CHUNK: usize = 4096;
    let parts: Vec<f64> = (0..len.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| (c * CHUNK..((c + 1) * CHUNK).min(len)).map(&f).sum())
        .collect();
    parts.iter().sum()
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(SpectralGrid::new(3, 12, 1.0).is_err());
        assert!(SpectralGrid::new(3, 4, 1.0).is_err());
        assert!(SpectralGrid::new(3, 8, 0.0).is_err());
        assert!(SpectralGrid::new(2, 8, 1.0).is_err());
    }

    #[test]
    fn box_of_two_pi_has_integer_wavenumbers() {
        let g = SpectralGrid::new(3, 8, 2.0 * PI).unwrap();
        let mut ks = g.wavenumbers();
        ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect: Vec<f64> = (-4..4).map(|m| m as f64).collect();
        for (a, b) in ks.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((g.mode_weight() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn smallest_wavenumber_and_cell_volume() {
        let g = SpectralGrid::new(1, 16, 32.0).unwrap();
        assert!((g.min_wavenumber() - 0.19635).abs() < 1e-5);
        let g = SpectralGrid::new(3, 64, 64.0).unwrap();
        assert_eq!(g.len(), 262_144);
        assert!((g.cell_volume() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coordinates_are_centered() {
        let g = SpectralGrid::new(1, 8, 4.0).unwrap();
        let x = g.x_coords();
        assert_eq!(x[0], -2.0);
        assert_eq!(x[4], 0.0);
        assert!(x[7] < 2.0);
    }

    #[test]
    fn single_mode_lands_on_its_wavenumber() {
        let g = SpectralGrid::new(1, 16, 10.0).unwrap();
        let m = 3;
        let xi = g.dk() * m as f64;
        let f: Field = g
            .x_coords()
            .iter()
            .map(|&x| Complex64::from_polar(1.0, xi * x))
            .collect();
        let fh = g.forward(&f);
        for (i, v) in fh.iter().enumerate() {
            if g.signed_index(i) == m {
                // integral of |e^{i x xi}|^2 over the box
                assert!((v - Complex64::new(10.0, 0.0)).norm() < 1e-12);
            } else {
                assert!(v.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn nyquist_zeroed_and_zero_mode_rule() {
        let g = SpectralGrid::new(1, 8, 8.0).unwrap();
        let mut f = vec![Complex64::new(1.0, 0.0); 8];
        g.apply_multiplier(&mut f, |xi| Complex64::new(1.0 / xi[0].abs(), 0.0)).unwrap();
        assert_eq!(f[0], Complex64::default());
        assert_eq!(f[4], Complex64::default());
        assert!(f[1].re > 0.0);
    }

    #[test]
    fn non_finite_multiplier_names_the_mode() {
        let g = SpectralGrid::new(1, 8, 8.0).unwrap();
        let mut f = vec![Complex64::new(1.0, 0.0); 8];
        let err = g
            .apply_multiplier(&mut f, |xi| {
                if (xi[0] - g.dk()).abs() < 1e-12 {
                    Complex64::new(f64::NAN, 0.0)
                } else {
                    Complex64::new(1.0, 0.0)
                }
            })
            .unwrap_err();
        match err {
            WkgError::NonFiniteMultiplier { index, .. } => assert_eq!(index, 1),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn k_range_covers_every_mode() {
        for &(n, l) in &[(16usize, 32.0), (32, 48.0), (64, 96.0), (8, 2.0 * PI)] {
            let g = SpectralGrid::new(3, n, l).unwrap();
            let (kmin, kmax) = g.k_range();
            for i in 1..g.len() {
                if g.is_nyquist(i) {
                    continue;
                }
                let s: f64 = (kmin..=kmax).map(|k| crate::lp::phi_k(k, g.kmag(i))).sum();
                assert!((s - 1.0).abs() < 1e-12, "mode {i} sum {s}");
            }
            assert!((0..g.len()).any(|i| !g.is_nyquist(i) && crate::lp::phi_k(kmin, g.kmag(i)) > 0.0));
            assert!((0..g.len()).any(|i| !g.is_nyquist(i) && crate::lp::phi_k(kmax, g.kmag(i)) > 0.0));
        }
    }
}
