//! Pseudo-spectral evaluation of the quadratic sources with 2/3-rule
//! truncation of inputs and outputs.

use super::coefficients::CouplingCoefficients;
use super::state::reconstruct;
use crate::dispersion::Channel;
use crate::grid::{Field, SpectralGrid};
use num_complex::Complex64;
use rayon::prelude::*;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Evaluates `N^wa = A^{ab} ∂_a v ∂_b v + D v^2` and
/// `N^kg = u (B^{jk} ∂_j ∂_k v + 2 B^{0k} ∂_k ∂_t v)`.
#[derive(Debug, Clone)]
pub struct Nonlinearity {
    coeffs: CouplingCoefficients,
    mask: Vec<bool>,
}

/// Physical fields entering the sources, on the grid.
#[derive(Debug, Clone, Default)]
pub struct SourceFields {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub v_t: Vec<f64>,
    pub grad_v: Vec<Vec<f64>>,
    /// `B^{jk} ∂_j ∂_k v + 2 B^{0k} ∂_k ∂_t v`.
    pub kg_operator: Vec<f64>,
}

impl Nonlinearity {
    pub fn new(grid: &SpectralGrid, coeffs: CouplingCoefficients) -> Self {
        Nonlinearity {
            coeffs,
            mask: grid.dealias_mask(),
        }
    }

    pub fn coefficients(&self) -> &CouplingCoefficients {
        &self.coeffs
    }

    pub fn dealias(&self, f: &mut [Complex64]) {
        f.par_iter_mut().zip(self.mask.par_iter()).for_each(|(z, &keep)| {
            if !keep {
                *z = Complex64::default();
            }
        });
    }

    /// Sources in Fourier space from normalized variables `U^wa, U^kg`.
    pub fn evaluate(&self, grid: &SpectralGrid, u_wa: &[Complex64], u_kg: &[Complex64]) -> (Field, Field) {
        let n = grid.len();
        let zeros = || vec![Complex64::default(); n];
        if self.coeffs.is_linear() {
            return (zeros(), zeros());
        }
        let src = self.source_fields(grid, u_wa, u_kg);
        let c = &self.coeffs;
        let wave_on = c.wave_source_active();
        let kg_on = c.kg_source_active();
        let dim = grid.dim();

        let mut z: Field = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut nw = 0.0;
                if wave_on {
                    let mut d = [0.0; 4];
                    d[0] = src.v_t[i];
                    for a in 0..dim {
                        d[a + 1] = src.grad_v[a][i];
                    }
                    for a in 0..=dim {
                        for b in 0..=dim {
                            nw += c.a[a][b] * d[a] * d[b];
                        }
                    }
                    nw += c.d * src.v[i] * src.v[i];
                }
                let nk = if kg_on { src.u[i] * src.kg_operator[i] } else { 0.0 };
                Complex64::new(nw, nk)
            })
            .collect();
        grid.forward_in_place(&mut z);
        let (mut nw, mut nk): (Field, Field) = (0..n)
            .into_par_iter()
            .map(|i| {
                let a = z[i];
                let b = z[grid.neg_index(i)].conj();
                (0.5 * (a + b), -0.5 * I * (a - b))
            })
            .unzip();
        self.dealias(&mut nw);
        self.dealias(&mut nk);
        (nw, nk)
    }

    /// Physical fields used by the sources (inputs truncated to the 2/3
    /// band). Fields not needed by the active coefficients are left empty.
    pub fn source_fields(&self, grid: &SpectralGrid, u_wa: &[Complex64], u_kg: &[Complex64]) -> SourceFields {
        let c = &self.coeffs;
        let mut ukg = u_kg.to_vec();
        self.dealias(&mut ukg);
        let (v_hat, vt_hat) = reconstruct(grid, &ukg, Channel::KleinGordon);
        let dim = grid.dim();

        let mut spectral: Vec<Field> = Vec::new();
        let wave_on = c.wave_source_active();
        let kg_on = c.kg_source_active();
        if wave_on {
            spectral.push(v_hat.clone());
            spectral.push(vt_hat.clone());
            for a in 0..dim {
                spectral.push(grid.derivative(&v_hat, a));
            }
        }
        if kg_on {
            let mut uwa = u_wa.to_vec();
            self.dealias(&mut uwa);
            let (u_hat, _) = reconstruct(grid, &uwa, Channel::Wave);
            let ks = grid.wavevectors();
            let op: Field = (0..grid.len())
                .into_par_iter()
                .map(|i| {
                    let xi = &ks[i];
                    let mut quad = 0.0;
                    let mut lin = 0.0;
                    for j in 0..dim {
                        lin += c.b[0][j + 1] * xi[j];
                        for k in 0..dim {
                            quad += c.b[j + 1][k + 1] * xi[j] * xi[k];
                        }
                    }
                    -quad * v_hat[i] + 2.0 * I * lin * vt_hat[i]
                })
                .collect();
            spectral.push(u_hat);
            spectral.push(op);
        }
        let mut phys = real_inverses(grid, &spectral).into_iter();
        let mut out = SourceFields::default();
        if wave_on {
            out.v = phys.next().unwrap();
            out.v_t = phys.next().unwrap();
            out.grad_v = (0..dim).map(|_| phys.next().unwrap()).collect();
        }
        if kg_on {
            out.u = phys.next().unwrap();
            out.kg_operator = phys.next().unwrap();
        }
        out
    }
}

/// Inverse transforms of Hermitian spectra, two per complex transform.
pub fn real_inverses(grid: &SpectralGrid, fields: &[Field]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(fields.len());
    for pair in fields.chunks(2) {
        if pair.len() == 2 {
            let (a, b) = super::state::pair_inverse(grid, &pair[0], &pair[1]);
            out.push(a);
            out.push(b);
        } else {
            out.push(grid.inverse_real(&pair[0]));
        }
    }
    out
}
