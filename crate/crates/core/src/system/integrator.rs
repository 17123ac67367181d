//! Classical RK4 on the profile equation `∂_t V = e^{itΛ} N(e^{-itΛ} V)`.

use super::coefficients::CouplingCoefficients;
use super::nonlinear::Nonlinearity;
use super::state::ProfileState;
use crate::dispersion::Channel;
use crate::error::{Result, WkgError};
use crate::grid::{Field, SpectralGrid};
use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct Solver {
    grid: SpectralGrid,
    nonlinearity: Nonlinearity,
    lambda_wa: Vec<f64>,
    lambda_kg: Vec<f64>,
    band: Vec<bool>,
}

impl Solver {
    pub fn new(grid: SpectralGrid, coeffs: CouplingCoefficients) -> Result<Self> {
        coeffs.validate()?;
        let lambda_wa = grid.kmags().to_vec();
        let lambda_kg = grid.kmags().iter().map(|&r| crate::bracket(r)).collect();
        Ok(Solver {
            band: grid.dealias_mask(),
            nonlinearity: Nonlinearity::new(&grid, coeffs),
            grid,
            lambda_wa,
            lambda_kg,
        })
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn coefficients(&self) -> &CouplingCoefficients {
        self.nonlinearity.coefficients()
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nonlinearity
    }

    fn lambdas(&self, channel: Channel) -> &[f64] {
        match channel {
            Channel::Wave => &self.lambda_wa,
            Channel::KleinGordon => &self.lambda_kg,
        }
    }

    /// Multiplies by `e^{isΛ}` inside the 2/3 band; modes outside it never
    /// reach the sources, so they are left alone.
    fn rotate(&self, f: &mut [Complex64], channel: Channel, s: f64) {
        let lam = self.lambdas(channel);
        f.par_iter_mut()
            .zip(lam.par_iter().zip(self.band.par_iter()))
            .for_each(|(z, (&l, &keep))| {
                if keep {
                    *z *= Complex64::from_polar(1.0, s * l);
                }
            });
    }

    /// Sources `N^wa, N^kg` in Fourier space for the given profiles.
    pub fn sources(&self, v_wa: &[Complex64], v_kg: &[Complex64], t: f64) -> (Field, Field) {
        let mut uw = v_wa.to_vec();
        let mut uk = v_kg.to_vec();
        self.rotate(&mut uw, Channel::Wave, -t);
        self.rotate(&mut uk, Channel::KleinGordon, -t);
        self.nonlinearity.evaluate(&self.grid, &uw, &uk)
    }

    /// Right-hand side `∂_t V` of both profile equations.
    pub fn rhs(&self, v_wa: &[Complex64], v_kg: &[Complex64], t: f64) -> (Field, Field) {
        let (mut nw, mut nk) = self.sources(v_wa, v_kg, t);
        if !self.coefficients().is_linear() {
            self.rotate(&mut nw, Channel::Wave, t);
            self.rotate(&mut nk, Channel::KleinGordon, t);
        }
        (nw, nk)
    }

    /// One RK4 step of size `dt`.
    pub fn step(&self, state: &ProfileState, dt: f64) -> Result<ProfileState> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(WkgError::Config(format!("time step must be positive, got {dt}")));
        }
        if self.coefficients().is_linear() {
            return Ok(ProfileState {
                v_wa: state.v_wa.clone(),
                v_kg: state.v_kg.clone(),
                t: state.t + dt,
            });
        }
        let t = state.t;
        let check = |f: &[Complex64], at: f64| -> Result<()> {
            if f.par_iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                Ok(())
            } else {
                Err(WkgError::Numerical {
                    t: at,
                    what: "non-finite value in Runge-Kutta stage".into(),
                })
            }
        };
        let axpy = |y: &[Complex64], a: f64, x: &[Complex64]| -> Field {
            y.par_iter().zip(x.par_iter()).map(|(y, x)| y + a * x).collect()
        };

        let (k1w, k1k) = self.rhs(&state.v_wa, &state.v_kg, t);
        check(&k1w, t)?;
        check(&k1k, t)?;
        let (k2w, k2k) = self.rhs(&axpy(&state.v_wa, 0.5 * dt, &k1w), &axpy(&state.v_kg, 0.5 * dt, &k1k), t + 0.5 * dt);
        check(&k2w, t + 0.5 * dt)?;
        check(&k2k, t + 0.5 * dt)?;
        let (k3w, k3k) = self.rhs(&axpy(&state.v_wa, 0.5 * dt, &k2w), &axpy(&state.v_kg, 0.5 * dt, &k2k), t + 0.5 * dt);
        check(&k3w, t + 0.5 * dt)?;
        check(&k3k, t + 0.5 * dt)?;
        let (k4w, k4k) = self.rhs(&axpy(&state.v_wa, dt, &k3w), &axpy(&state.v_kg, dt, &k3k), t + dt);
        check(&k4w, t + dt)?;
        check(&k4k, t + dt)?;

        let combine = |y: &[Complex64], k1: &[Complex64], k2: &[Complex64], k3: &[Complex64], k4: &[Complex64]| -> Field {
            (0..y.len())
                .into_par_iter()
                .map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                .collect()
        };
        let next = ProfileState {
            v_wa: combine(&state.v_wa, &k1w, &k2w, &k3w, &k4w),
            v_kg: combine(&state.v_kg, &k1k, &k2k, &k3k, &k4k),
            t: t + dt,
        };
        next.check_finite()?;
        Ok(next)
    }

    /// Steps `count` times with fixed `dt`.
    pub fn advance(&self, state: &ProfileState, dt: f64, count: usize) -> Result<ProfileState> {
        let mut s = state.clone();
        for _ in 0..count {
            s = self.step(&s, dt)?;
        }
        Ok(s)
    }
}
