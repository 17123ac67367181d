//! The accumulated phase `Θ(ξ, t) = q_+(ξ) ∫_0^t u_low(sξ/Λ_kg(ξ), s) ds`.

use super::ulow::LowModes;
use crate::dispersion::lambda_kg;
use crate::error::{Result, WkgError};
use crate::grid::SpectralGrid;
use crate::system::{CouplingCoefficients, ProfileState, Sign};
use rayon::prelude::*;

/// Accumulated phase on the grid. Only modes inside the 2/3 band carry a
/// phase; everything else stays 0.
#[derive(Debug, Clone)]
pub struct ThetaField {
    pub theta: Vec<f64>,
    pub t: f64,
    pub p: f64,
    /// Representative modes `(ξ, -ξ)`, zero mode excluded.
    pairs: Vec<(usize, usize)>,
    /// `ξ / Λ_kg(ξ)` for each representative.
    dirs: Vec<[f64; 3]>,
    /// `(q_+(ξ), q_+(-ξ))`.
    q: Vec<(f64, f64)>,
    /// `u_low` at the characteristic points of time `t`, once known.
    cached: Option<(f64, Vec<[f64; 2]>)>,
}

fn in_half_space(m: [i64; 3]) -> bool {
    m[0] > 0 || (m[0] == 0 && (m[1] > 0 || (m[1] == 0 && m[2] > 0)))
}

impl ThetaField {
    pub fn new(grid: &SpectralGrid, coeffs: &CouplingCoefficients, p: f64) -> Self {
        let mut pairs = Vec::new();
        let mut dirs = Vec::new();
        let mut q = Vec::new();
        for i in 0..grid.len() {
            if !grid.in_dealias_band(i) || grid.is_nyquist(i) {
                continue;
            }
            let ix = grid.unravel(i);
            let mut m = [0i64; 3];
            for a in 0..grid.dim() {
                m[a] = grid.signed_index(ix[a]);
            }
            if !in_half_space(m) {
                continue;
            }
            let xi = grid.wavevector(i);
            let lam = lambda_kg(&xi);
            let neg = xi.map(|c| -c);
            pairs.push((i, grid.neg_index(i)));
            dirs.push(xi.map(|c| c / lam));
            q.push((coeffs.q_pm(&xi, Sign::Plus), coeffs.q_pm(&neg, Sign::Plus)));
        }
        ThetaField {
            theta: vec![0.0; grid.len()],
            t: 0.0,
            p,
            pairs,
            dirs,
            q,
            cached: None,
        }
    }

    /// Resumes from stored values at time `t`.
    pub fn with_values(grid: &SpectralGrid, coeffs: &CouplingCoefficients, p: f64, theta: Vec<f64>, t: f64) -> Result<Self> {
        if theta.len() != grid.len() {
            return Err(WkgError::Input(format!(
                "theta has {} values, grid has {} modes",
                theta.len(),
                grid.len()
            )));
        }
        let mut out = Self::new(grid, coeffs, p);
        out.theta = theta;
        out.t = t;
        Ok(out)
    }

    /// Number of representative modes `ξ` (each also covers `-ξ`).
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Characteristic points `s ξ / Λ_kg(ξ)` of the representatives.
    pub fn characteristic_points(&self, s: f64) -> Vec<[f64; 3]> {
        self.dirs.iter().map(|d| d.map(|c| s * c)).collect()
    }

    /// `u_low(sξ/Λ_kg(ξ), s)` spread onto the grid (0 off the band).
    pub fn spread(&self, len: usize, values: &[[f64; 2]]) -> Vec<f64> {
        let mut out = vec![0.0; len];
        for (&(i, j), v) in self.pairs.iter().zip(values) {
            out[i] = v[0];
            out[j] = v[1];
        }
        out
    }

    /// `q_+(ξ)` on the grid (0 off the band).
    pub fn q_plus(&self, len: usize) -> Vec<f64> {
        let vals: Vec<[f64; 2]> = self.q.iter().map(|&(a, b)| [a, b]).collect();
        self.spread(len, &vals)
    }

    /// Values of `u_low` from a state at the characteristic points of its
    /// own time, as `(ξ, -ξ)` pairs.
    pub fn sample_state(&self, grid: &SpectralGrid, state: &ProfileState) -> Vec<[f64; 2]> {
        LowModes::from_state(grid, state, self.p).eval_pairs(&self.characteristic_points(state.t))
    }

    /// One trapezoid step from `self.t` to `t_next`. `sample(s, points)`
    /// returns `(u_low(x, s), u_low(-x, s))` for each point `x`.
    pub fn advance_with<F>(&mut self, t_next: f64, mut sample: F) -> Result<()>
    where
        F: FnMut(f64, &[[f64; 3]]) -> Result<Vec<[f64; 2]>>,
    {
        let t0 = self.t;
        let left = match self.cached.take() {
            Some((tc, v)) if tc == t0 => v,
            _ => sample(t0, &self.characteristic_points(t0))?,
        };
        let right = sample(t_next, &self.characteristic_points(t_next))?;
        if left.len() != self.pairs.len() || right.len() != self.pairs.len() {
            return Err(WkgError::Input("u_low sampler returned the wrong number of values".into()));
        }
        let h = 0.5 * (t_next - t0);
        let incr: Vec<[f64; 2]> = self
            .q
            .par_iter()
            .zip(left.par_iter().zip(right.par_iter()))
            .map(|(&(qa, qb), (l, r))| [qa * (h * (l[0] + r[0])), qb * (h * (l[1] + r[1]))])
            .collect();
        for (&(i, j), d) in self.pairs.iter().zip(&incr) {
            self.theta[i] += d[0];
            self.theta[j] += d[1];
        }
        self.t = t_next;
        self.cached = Some((t_next, right));
        Ok(())
    }

    /// Trapezoid increment between two solver states; `before.t` must be
    /// the time `Θ` has been accumulated through.
    pub fn accumulate(&mut self, grid: &SpectralGrid, before: &ProfileState, after: &ProfileState) -> Result<()> {
        let tol = 1e-9 * self.t.abs().max(1.0);
        if (before.t - self.t).abs() > tol {
            return Err(WkgError::Input(format!(
                "theta is accumulated through t = {}, but the step starts at t = {}",
                self.t, before.t
            )));
        }
        if !(after.t > before.t) {
            return Err(WkgError::Input(format!(
                "theta step must move forward in time, got {} -> {}",
                before.t, after.t
            )));
        }
        let p = self.p;
        let t_next = after.t;
        self.advance_with(t_next, |s, pts| {
            let st = if s == t_next { after } else { before };
            Ok(LowModes::new(grid, &super::ulow::wave_spectrum(grid, st), s, p).eval_pairs(pts))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mode_and_out_of_band_modes_carry_no_phase() {
        let g = SpectralGrid::new(3, 8, 10.0).unwrap();
        let mut th = ThetaField::new(&g, &CouplingCoefficients::model(), 0.68);
        th.advance_with(1.0, |_, pts| Ok(vec![[1.0, 1.0]; pts.len()])).unwrap();
        assert_eq!(th.theta[0], 0.0);
        for i in 0..g.len() {
            if !g.in_dealias_band(i) {
                assert_eq!(th.theta[i], 0.0);
            }
        }
        // every band mode except zero is covered exactly once
        let band = (0..g.len()).filter(|&i| g.in_dealias_band(i)).count();
        assert_eq!(2 * th.pair_count() + 1, band);
    }

    #[test]
    fn constant_integrand_gives_q_times_t() {
        let g = SpectralGrid::new(3, 8, 10.0).unwrap();
        let c = CouplingCoefficients::model();
        let mut th = ThetaField::new(&g, &c, 0.68);
        for k in 1..=4 {
            th.advance_with(0.5 * k as f64, |_, pts| Ok(vec![[2.0, 2.0]; pts.len()])).unwrap();
        }
        let q = th.q_plus(g.len());
        for i in 0..g.len() {
            assert!((th.theta[i] - 4.0 * q[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn time_mismatch_is_rejected() {
        let g = SpectralGrid::new(3, 8, 10.0).unwrap();
        let mut th = ThetaField::new(&g, &CouplingCoefficients::model(), 0.68);
        let mut a = ProfileState::zeros(&g);
        a.t = 1.0;
        let mut b = a.clone();
        b.t = 1.5;
        assert!(th.accumulate(&g, &a, &b).is_err());
    }
}
