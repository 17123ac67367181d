//! The low-frequency wave field `u_low(x, s) = F^{-1}{φ_≤0(<s>^p ρ) u^(ρ, s)}`,
//! summed directly over its surviving modes at arbitrary points.

use crate::dispersion::{bracket, Channel};
use crate::grid::{Field, SpectralGrid};
use crate::lp::bump;
use crate::system::state::reconstruct;
use crate::system::ProfileState;
use num_complex::Complex64;
use rayon::prelude::*;

/// Outer edge of the support of `φ_≤0`.
const CUTOFF_EDGE: f64 = 1.6;

#[derive(Debug, Clone)]
struct Row {
    m1: i64,
    m2: i64,
    /// First `m3` of the contiguous run.
    lo: i64,
    start: usize,
    len: usize,
}

/// Surviving low modes of one spectral field, grouped in rows of fixed
/// `(m1, m2)` with a contiguous run of `m3`. A 1-d grid uses the `m3` slot.
#[derive(Debug, Clone)]
pub struct LowModes {
    dim: usize,
    dk: f64,
    mmax: i64,
    rows: Vec<Row>,
    coef: Vec<Complex64>,
}

impl LowModes {
    /// Keeps `spectral_measure * φ_≤0(<s>^p |ρ|) * u^(ρ)` on every
    /// non-Nyquist mode where the cutoff is positive. The zero mode is
    /// stored as 0.
    pub fn new(grid: &SpectralGrid, u_hat: &[Complex64], s: f64, p: f64) -> Self {
        assert_eq!(u_hat.len(), grid.len(), "field does not match grid");
        let dk = grid.dk();
        let scale = bracket(s).powf(p);
        let n = grid.n() as i64;
        let mmax = ((CUTOFF_EDGE / scale / dk).floor() as i64).min(n / 2 - 1).max(0);
        let wrap = |m: i64| m.rem_euclid(n) as usize;
        let index = |m1: i64, m2: i64, m3: i64| -> usize {
            if grid.dim() == 1 {
                wrap(m3)
            } else {
                grid.ravel([wrap(m1), wrap(m2), wrap(m3)])
            }
        };
        let outer = if grid.dim() == 1 { 0 } else { mmax };
        let measure = grid.spectral_measure();
        let mut rows = Vec::new();
        let mut coef = Vec::new();
        for m1 in -outer..=outer {
            for m2 in -outer..=outer {
                let weight = |m3: i64| {
                    let r = dk * ((m1 * m1 + m2 * m2 + m3 * m3) as f64).sqrt();
                    bump(scale * r)
                };
                let Some(lo) = (-mmax..=mmax).find(|&m3| weight(m3) > 0.0) else {
                    continue;
                };
                let hi = (-mmax..=mmax).rev().find(|&m3| weight(m3) > 0.0).unwrap();
                let start = coef.len();
                for m3 in lo..=hi {
                    let c = if m1 == 0 && m2 == 0 && m3 == 0 {
                        Complex64::default()
                    } else {
                        measure * weight(m3) * u_hat[index(m1, m2, m3)]
                    };
                    coef.push(c);
                }
                rows.push(Row { m1, m2, lo, start, len: coef.len() - start });
            }
        }
        LowModes { dim: grid.dim(), dk, mmax, rows, coef }
    }

    /// `u_low` built from the wave profile of a state at its own time.
    pub fn from_state(grid: &SpectralGrid, state: &ProfileState, p: f64) -> Self {
        let u_hat = wave_spectrum(grid, state);
        Self::new(grid, &u_hat, state.t, p)
    }

    /// Number of stored modes, the zero mode included.
    pub fn len(&self) -> usize {
        self.coef.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coef.iter().all(|c| *c == Complex64::default())
    }

    fn tables(&self, x: &[f64; 3]) -> [Vec<Complex64>; 3] {
        let coords = if self.dim == 1 { [0.0, 0.0, x[0]] } else { *x };
        coords.map(|c| {
            (-self.mmax..=self.mmax)
                .map(|m| Complex64::from_polar(1.0, c * self.dk * m as f64))
                .collect()
        })
    }

    /// Full complex sum over all stored modes.
    pub fn eval_complex(&self, points: &[[f64; 3]]) -> Vec<Complex64> {
        let off = self.mmax;
        points
            .par_iter()
            .map(|x| {
                let [e1, e2, e3] = self.tables(x);
                let mut total = Complex64::default();
                for row in &self.rows {
                    let base = (row.lo + off) as usize;
                    let inner: Complex64 = self.coef[row.start..row.start + row.len]
                        .iter()
                        .zip(&e3[base..base + row.len])
                        .map(|(c, e)| c * e)
                        .sum();
                    total += e1[(row.m1 + off) as usize] * e2[(row.m2 + off) as usize] * inner;
                }
                total
            })
            .collect()
    }

    /// `(u(x), u(-x))` for a real field, summing only over the half space
    /// `m1 > 0`, or `m1 = 0, m2 > 0`, or `m1 = m2 = 0, m3 > 0`.
    pub fn eval_pairs(&self, points: &[[f64; 3]]) -> Vec<[f64; 2]> {
        let off = self.mmax;
        points
            .par_iter()
            .map(|x| {
                let [e1, e2, e3] = self.tables(x);
                // Σ Re(c) cos θ and Σ Im(c) sin θ
                let mut pc = 0.0;
                let mut qs = 0.0;
                for row in &self.rows {
                    if row.m1 < 0 || (row.m1 == 0 && row.m2 < 0) {
                        continue;
                    }
                    let mut lo = row.lo;
                    let mut start = row.start;
                    let mut len = row.len;
                    if row.m1 == 0 && row.m2 == 0 {
                        let skip = (1 - lo).max(0) as usize;
                        if skip >= len {
                            continue;
                        }
                        lo += skip as i64;
                        start += skip;
                        len -= skip;
                    }
                    let base = (lo + off) as usize;
                    let mut xr = Complex64::default();
                    let mut yi = Complex64::default();
                    for (c, e) in self.coef[start..start + len].iter().zip(&e3[base..base + len]) {
                        xr += c.re * e;
                        yi += c.im * e;
                    }
                    let r = e1[(row.m1 + off) as usize] * e2[(row.m2 + off) as usize];
                    pc += (r * xr).re;
                    qs += (r * yi).im;
                }
                [2.0 * (pc - qs), 2.0 * (pc + qs)]
            })
            .collect()
    }

    /// Real values of `u_low` at the points.
    pub fn eval(&self, points: &[[f64; 3]]) -> Vec<f64> {
        self.eval_pairs(points).into_iter().map(|v| v[0]).collect()
    }
}

/// Fourier coefficients of the wave component `u` at the state's time.
pub fn wave_spectrum(grid: &SpectralGrid, state: &ProfileState) -> Field {
    let u = state.normalized_channel(grid, Channel::Wave);
    reconstruct(grid, &u, Channel::Wave).0
}

/// `u_low(x, s)` at arbitrary points from the spectrum `u^(·, s)`.
pub fn u_low_eval(grid: &SpectralGrid, u_hat: &[Complex64], s: f64, points: &[[f64; 3]], p: f64) -> Vec<f64> {
    LowModes::new(grid, u_hat, s, p).eval(points)
}

/// Complex-valued sum over all modes; its imaginary part measures how far
/// `u^` is from Hermitian.
pub fn u_low_eval_complex(
    grid: &SpectralGrid,
    u_hat: &[Complex64],
    s: f64,
    points: &[[f64; 3]],
    p: f64,
) -> Vec<Complex64> {
    LowModes::new(grid, u_hat, s, p).eval_complex(points)
}
