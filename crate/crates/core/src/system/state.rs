use crate::dispersion::Channel;
use crate::error::{Result, WkgError};
use crate::free::propagate;
use crate::grid::{Field, SpectralGrid};
use num_complex::Complex64;
use rayon::prelude::*;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Fourier-space profiles `V = e^{itΛ} U` of both components at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileState {
    pub v_wa: Field,
    pub v_kg: Field,
    pub t: f64,
}

/// Real physical fields.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalState {
    pub u: Vec<f64>,
    pub u_t: Vec<f64>,
    pub v: Vec<f64>,
    pub v_t: Vec<f64>,
    pub t: f64,
}

/// Reconstructed Fourier coefficients of `f` and `∂_t f` for both
/// components.
#[derive(Debug, Clone)]
pub struct SpectralFields {
    pub u: Field,
    pub u_t: Field,
    pub v: Field,
    pub v_t: Field,
}

impl ProfileState {
    pub fn zeros(grid: &SpectralGrid) -> Self {
        ProfileState {
            v_wa: vec![Complex64::default(); grid.len()],
            v_kg: vec![Complex64::default(); grid.len()],
            t: 0.0,
        }
    }

    /// Builds profiles from normalized variables at time `t`.
    pub fn from_normalized(grid: &SpectralGrid, mut u_wa: Field, mut u_kg: Field, t: f64) -> Self {
        propagate(grid, &mut u_wa, Channel::Wave, -t);
        propagate(grid, &mut u_kg, Channel::KleinGordon, -t);
        ProfileState { v_wa: u_wa, v_kg: u_kg, t }
    }

    /// Normalized variables `U = e^{-itΛ} V`.
    pub fn normalized(&self, grid: &SpectralGrid) -> (Field, Field) {
        (self.normalized_channel(grid, Channel::Wave), self.normalized_channel(grid, Channel::KleinGordon))
    }

    pub fn normalized_channel(&self, grid: &SpectralGrid, channel: Channel) -> Field {
        let mut out = self.profile(channel).to_vec();
        propagate(grid, &mut out, channel, self.t);
        out
    }

    pub fn profile(&self, channel: Channel) -> &[Complex64] {
        match channel {
            Channel::Wave => &self.v_wa,
            Channel::KleinGordon => &self.v_kg,
        }
    }

    pub fn spectral_fields(&self, grid: &SpectralGrid) -> SpectralFields {
        let (uw, uk) = self.normalized(grid);
        let (u, u_t) = reconstruct(grid, &uw, Channel::Wave);
        let (v, v_t) = reconstruct(grid, &uk, Channel::KleinGordon);
        SpectralFields { u, u_t, v, v_t }
    }

    pub fn physical(&self, grid: &SpectralGrid) -> PhysicalState {
        let (uw, uk) = self.normalized(grid);
        from_normalized(grid, &uw, &uk, self.t)
    }

    pub fn check_finite(&self) -> Result<()> {
        let ok = self
            .v_wa
            .par_iter()
            .chain(self.v_kg.par_iter())
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if ok {
            Ok(())
        } else {
            Err(WkgError::Numerical {
                t: self.t,
                what: "profile contains NaN or Inf".into(),
            })
        }
    }
}

/// `U = f_t - iΛ f` for both components.
pub fn to_normalized(grid: &SpectralGrid, phys: &PhysicalState) -> (Field, Field) {
    let n = grid.len();
    for f in [&phys.u, &phys.u_t, &phys.v, &phys.v_t] {
        assert_eq!(f.len(), n, "field does not match grid");
    }
    let combine = |f: &[f64], f_t: &[f64], ch: Channel| -> Field {
        let fh = grid.forward_real(f);
        let mut out = grid.forward_real(f_t);
        let ks = grid.wavevectors();
        out.par_iter_mut().enumerate().for_each(|(i, z)| {
            *z -= I * ch.lambda(&ks[i]) * fh[i];
        });
        out
    };
    (
        combine(&phys.u, &phys.u_t, Channel::Wave),
        combine(&phys.v, &phys.v_t, Channel::KleinGordon),
    )
}

/// Spectral `(f, f_t)` from `U = f_t - iΛ f`, assuming `f` real. The mean of
/// a wave field is not determined by `U` and is set to zero.
pub fn reconstruct(grid: &SpectralGrid, u: &[Complex64], channel: Channel) -> (Field, Field) {
    let ks = grid.wavevectors();
    let (f, f_t): (Field, Field) = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let a = u[i];
            let b = u[grid.neg_index(i)].conj();
            let f_t = 0.5 * (a + b);
            let lam_f = 0.5 * I * (a - b);
            let lam = channel.lambda(&ks[i]);
            let f = if lam > 0.0 { lam_f / lam } else { Complex64::default() };
            (f, f_t)
        })
        .unzip();
    (f, f_t)
}

/// Physical `u, u_t, v, v_t` from normalized variables.
pub fn from_normalized(grid: &SpectralGrid, u_wa: &[Complex64], u_kg: &[Complex64], t: f64) -> PhysicalState {
    let (u, u_t) = reconstruct(grid, u_wa, Channel::Wave);
    let (v, v_t) = reconstruct(grid, u_kg, Channel::KleinGordon);
    let (u, u_t) = pair_inverse(grid, &u, &u_t);
    let (v, v_t) = pair_inverse(grid, &v, &v_t);
    PhysicalState { u, u_t, v, v_t, t }
}

/// Inverse transforms of two real fields packed into one complex transform.
pub(crate) fn pair_inverse(grid: &SpectralGrid, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    let mut z: Field = a.par_iter().zip(b.par_iter()).map(|(x, y)| x + I * y).collect();
    grid.inverse_in_place(&mut z);
    z.into_iter().map(|w| (w.re, w.im)).unzip()
}

/// Largest `|Im|` relative to the largest `|Re|` of a transformed field.
pub fn imag_fraction(phys: &[Complex64]) -> f64 {
    let re = phys.iter().fold(0.0f64, |m, z| m.max(z.re.abs()));
    let im = phys.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    if re == 0.0 {
        im
    } else {
        im / re
    }
}
