//! Radially symmetric reduction of the model problem, solved with finite
//! differences in the substitution variables `w = r u`, `z = r v`:
//!
//! ```text
//! w_tt - w_rr     = r (v_t^2 + v_r^2 + v^2)
//! z_tt - z_rr + z = c u z_rr
//! ```
//!
//! with `w = z = 0` at `r = 0` (odd reflection) and at `r = R`. The flag `c`
//! switches the back-reaction of `u` on `v` on or off.

use crate::error::{Result, WkgError};
use crate::system::initial::chi;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadialConfig {
    /// Outer radius `R`.
    pub r_max: f64,
    /// Number of intervals in `[0, R]`.
    pub n_r: usize,
    pub dt: f64,
    pub t_max: f64,
    /// Size of the Klein-Gordon data `v(0) = eps * chi`.
    pub eps: f64,
    /// Whether `u` feeds back into the Klein-Gordon equation.
    pub coupling: bool,
    /// Whether `v` sources the wave equation.
    pub wave_source: bool,
    /// Record diagnostics every this many steps.
    pub record_every: usize,
    /// Times at which full radial profiles are kept.
    pub profile_times: Vec<f64>,
}

impl Default for RadialConfig {
    fn default() -> Self {
        RadialConfig {
            r_max: 160.0,
            n_r: 3200,
            dt: 0.0125,
            t_max: 30.0,
            eps: 0.05,
            coupling: true,
            wave_source: true,
            record_every: 8,
            profile_times: vec![5.0, 10.0, 20.0, 30.0],
        }
    }
}

impl RadialConfig {
    pub fn dr(&self) -> f64 {
        self.r_max / self.n_r as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_r < 8 {
            return Err(WkgError::Config("radial.n_r must be at least 8".into()));
        }
        if !(self.dt > 0.0 && self.t_max >= 0.0 && self.r_max > 0.0) {
            return Err(WkgError::Config("radial dt, t_max and r_max must be positive".into()));
        }
        if self.dt >= self.dr() {
            return Err(WkgError::Config(format!(
                "radial CFL rule violated: dt = {} must be below dr = {}",
                self.dt,
                self.dr()
            )));
        }
        if self.r_max <= self.t_max + 4.0 {
            return Err(WkgError::Config(format!(
                "radial domain too small: need r_max > t_max + 4, got r_max = {}, t_max = {}",
                self.r_max, self.t_max
            )));
        }
        if self.record_every == 0 {
            return Err(WkgError::Config("radial.record_every must be positive".into()));
        }
        if !self.eps.is_finite() {
            return Err(WkgError::Config("radial.eps must be finite".into()));
        }
        Ok(())
    }
}

/// Radial fields at one time. Index `i` is the point `r = i dr`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSnapshot {
    pub t: f64,
    pub dr: f64,
    pub eps: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RadialSeries {
    pub times: Vec<f64>,
    /// `min_{r <= t/4} <t> u(r, t) / eps^2`; NaN before `t >= 4 dr`.
    pub light_cone_min: Vec<f64>,
    /// `∫ (v_t^2 + v_r^2 + v^2) r^2 dr`.
    pub energy_kg: Vec<f64>,
    pub u_origin: Vec<f64>,
    pub profiles: Vec<RadialSnapshot>,
}

impl RadialSeries {
    /// Relative drift of the Klein-Gordon energy against its first sample.
    pub fn energy_drift(&self) -> f64 {
        let e0 = self.energy_kg.first().copied().unwrap_or(0.0);
        if e0 == 0.0 {
            return 0.0;
        }
        self.energy_kg.iter().map(|e| (e - e0).abs() / e0).fold(0.0, f64::max)
    }
}

struct Radial {
    dr: f64,
    r: Vec<f64>,
    w: Vec<f64>,
    pw: Vec<f64>,
    z: Vec<f64>,
    pz: Vec<f64>,
    coupling: f64,
    source: f64,
}

/// Value at the origin of `f / r` for an odd grid function `f`.
fn origin_value(f: &[f64], dr: f64) -> f64 {
    (8.0 * f[1] - f[2]) / (6.0 * dr)
}

impl Radial {
    fn divided(&self, f: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = f.iter().zip(&self.r).map(|(a, r)| if *r > 0.0 { a / r } else { 0.0 }).collect();
        out[0] = origin_value(f, self.dr);
        out
    }

    fn accel_z(&self) -> Vec<f64> {
        let m = self.z.len();
        let h2 = self.dr * self.dr;
        let mut a = vec![0.0; m];
        for i in 1..m - 1 {
            let lap = (self.z[i + 1] - 2.0 * self.z[i] + self.z[i - 1]) / h2;
            let u = self.w[i] / self.r[i];
            a[i] = lap - self.z[i] + self.coupling * u * lap;
        }
        a
    }

    fn accel_w(&self) -> Vec<f64> {
        let m = self.w.len();
        let h2 = self.dr * self.dr;
        let v = self.divided(&self.z);
        let vt = self.divided(&self.pz);
        let mut a = vec![0.0; m];
        for i in 1..m - 1 {
            let lap = (self.w[i + 1] - 2.0 * self.w[i] + self.w[i - 1]) / h2;
            let vr = (v[i + 1] - v[i - 1]) / (2.0 * self.dr);
            let s = vt[i] * vt[i] + vr * vr + v[i] * v[i];
            a[i] = lap + self.source * self.r[i] * s;
        }
        a
    }

    fn step(&mut self, dt: f64, az: &mut Vec<f64>, aw: &mut Vec<f64>) {
        let m = self.z.len();
        for i in 1..m - 1 {
            self.pz[i] += 0.5 * dt * az[i];
            self.pw[i] += 0.5 * dt * aw[i];
            self.z[i] += dt * self.pz[i];
            self.w[i] += dt * self.pw[i];
        }
        *az = self.accel_z();
        for i in 1..m - 1 {
            self.pz[i] += 0.5 * dt * az[i];
        }
        // the wave source needs v_t at the new time, which is now complete
        *aw = self.accel_w();
        for i in 1..m - 1 {
            self.pw[i] += 0.5 * dt * aw[i];
        }
    }

    fn energy_kg(&self) -> f64 {
        let m = self.z.len();
        let mut e = 0.0;
        for i in 0..m - 1 {
            let dz = (self.z[i + 1] - self.z[i]) / self.dr;
            e += dz * dz;
        }
        for i in 1..m - 1 {
            e += self.pz[i] * self.pz[i] + self.z[i] * self.z[i];
        }
        e * self.dr
    }

    fn snapshot(&self, t: f64, eps: f64) -> RadialSnapshot {
        let mut u = self.divided(&self.w);
        let mut v = self.divided(&self.z);
        let last = u.len() - 1;
        u[last] = 0.0;
        v[last] = 0.0;
        RadialSnapshot { t, dr: self.dr, eps, u, v }
    }
}

/// `min_{r_i <= t/4} <t> u(r_i, t) / eps^2`. Zero data gives 0.
pub fn light_cone_min(snap: &RadialSnapshot) -> f64 {
    if snap.eps == 0.0 {
        return 0.0;
    }
    let bracket = (1.0 + snap.t * snap.t).sqrt();
    let reach = snap.t / 4.0;
    snap.u
        .iter()
        .enumerate()
        .take_while(|(i, _)| *i as f64 * snap.dr <= reach + 1e-12)
        .map(|(_, u)| bracket * u / (snap.eps * snap.eps))
        .fold(f64::INFINITY, f64::min)
}

/// Runs the radial model with data `(u, u_t, v, v_t)(0) = (0, 0, eps chi, 0)`.
pub fn run_radial_model(cfg: &RadialConfig) -> Result<RadialSeries> {
    cfg.validate()?;
    let dr = cfg.dr();
    let m = cfg.n_r + 1;
    let r: Vec<f64> = (0..m).map(|i| i as f64 * dr).collect();
    let mut z: Vec<f64> = r.iter().map(|&r| r * cfg.eps * chi(r)).collect();
    z[m - 1] = 0.0;
    let mut sys = Radial {
        dr,
        w: vec![0.0; m],
        pw: vec![0.0; m],
        z,
        pz: vec![0.0; m],
        r,
        coupling: if cfg.coupling { 1.0 } else { 0.0 },
        source: if cfg.wave_source { 1.0 } else { 0.0 },
    };
    let steps = (cfg.t_max / cfg.dt).round() as usize;
    let mut az = sys.accel_z();
    let mut aw = sys.accel_w();
    let mut series = RadialSeries::default();
    let mut pending: Vec<f64> = cfg.profile_times.clone();
    pending.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut next_profile = 0;

    for k in 0..=steps {
        let t = k as f64 * cfg.dt;
        if k % cfg.record_every == 0 || k == steps {
            let snap = sys.snapshot(t, cfg.eps);
            series.times.push(t);
            series.light_cone_min.push(if t >= 4.0 * dr { light_cone_min(&snap) } else { f64::NAN });
            series.energy_kg.push(sys.energy_kg());
            series.u_origin.push(snap.u[0]);
        }
        while next_profile < pending.len() && (pending[next_profile] - t).abs() <= 0.5 * cfg.dt {
            series.profiles.push(sys.snapshot(t, cfg.eps));
            next_profile += 1;
        }
        if k == steps {
            break;
        }
        sys.step(cfg.dt, &mut az, &mut aw);
        if !(sys.w.iter().chain(&sys.z).all(|x| x.is_finite())) {
            return Err(WkgError::Numerical {
                t: t + cfg.dt,
                what: "radial model produced NaN or Inf".into(),
            });
        }
    }
    Ok(series)
}
