//! Families of initial data.

use super::state::{to_normalized, PhysicalState, ProfileState};
use crate::dispersion::Channel;
use crate::error::{Result, WkgError};
use crate::diagnostics::sobolev::{weighted_unchecked, Flavor};
use crate::grid::{norm3, Field, SpectralGrid};
use crate::params::DyadicParams;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which physical field a bump is added to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldName {
    #[serde(rename = "u")]
    U,
    #[serde(rename = "u_t")]
    UT,
    #[serde(rename = "v")]
    V,
    #[serde(rename = "v_t")]
    VT,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    /// Integer wavenumber index per axis (signed).
    pub m: [i64; 3],
    pub re: f64,
    pub im: f64,
}

/// One additive piece of the initial data. Every amplitude is multiplied by
/// `eps0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataComponent {
    /// `amplitude * G(x - center) * cos(carrier . (x - center))` with
    /// `G(y) = exp(-|y|^2 / (2 width^2))`; with `laplacian = true` the
    /// bump is replaced by its Laplacian (a mean-free field).
    Gaussian {
        field: FieldName,
        amplitude: f64,
        #[serde(default)]
        center: [f64; 3],
        width: f64,
        #[serde(default)]
        carrier: [f64; 3],
        #[serde(default)]
        laplacian: bool,
    },
    /// Smooth radial bump with `1_{|y| <= 1} <= chi <= 1_{|y| <= 2}`.
    Chi {
        field: FieldName,
        amplitude: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    /// Complex packet placed directly on the normalized variable:
    /// `U(x) = amplitude * G(x - center) * exp(i carrier . (x - center))`.
    Packet {
        channel: Channel,
        amplitude: f64,
        #[serde(default)]
        center: [f64; 3],
        width: f64,
        #[serde(default)]
        carrier: [f64; 3],
    },
    /// Explicit Fourier coefficients of the normalized variable.
    Modes { channel: Channel, modes: Vec<Mode> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct InitialDataSpec {
    pub components: Vec<DataComponent>,
}

/// Initial state together with its reported smallness norms.
#[derive(Debug, Clone)]
pub struct InitialData {
    pub state: ProfileState,
    /// `(name, value)` pairs of the weighted Sobolev smallness norms.
    pub norms: Vec<(String, f64)>,
}

/// `1` on `[0, 1]`, `0` on `[2, inf)`, smooth in between.
pub fn chi(r: f64) -> f64 {
    let g = |x: f64| if x <= 0.0 { 0.0 } else { (-1.0 / x).exp() };
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let s = r - 1.0;
        g(1.0 - s) / (g(1.0 - s) + g(s))
    }
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

impl DataComponent {
    /// Radius of the ball (about the origin) outside which the component
    /// is below about 1% of its peak; `None` for non-localized data.
    pub fn radius(&self) -> Option<f64> {
        match self {
            DataComponent::Gaussian { center, width, .. } | DataComponent::Packet { center, width, .. } => {
                Some(norm3(center) + 3.0 * width)
            }
            DataComponent::Chi { center, .. } => Some(norm3(center) + 2.0),
            DataComponent::Modes { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(WkgError::Config(format!("initial data: {what}")));
        match self {
            DataComponent::Gaussian { width, amplitude, .. } | DataComponent::Packet { width, amplitude, .. } => {
                if !(*width > 0.0) {
                    return bad("width must be positive");
                }
                if !amplitude.is_finite() {
                    return bad("amplitude must be finite");
                }
            }
            DataComponent::Chi { amplitude, .. } => {
                if !amplitude.is_finite() {
                    return bad("amplitude must be finite");
                }
            }
            DataComponent::Modes { modes, .. } => {
                if modes.iter().any(|m| !(m.re.is_finite() && m.im.is_finite())) {
                    return bad("mode amplitudes must be finite");
                }
            }
        }
        Ok(())
    }
}

impl InitialDataSpec {
    /// Largest radius over the localized components (0 if there are none).
    pub fn radius(&self) -> f64 {
        self.components.iter().filter_map(|c| c.radius()).fold(0.0, f64::max)
    }

    /// Builds `V(0) = U(0)`. Localized data reaching the two boundary cells
    /// is rejected.
    pub fn build(&self, grid: &SpectralGrid, eps0: f64) -> Result<ProfileState> {
        if !(eps0 >= 0.0 && eps0.is_finite()) {
            return Err(WkgError::Config(format!("eps0 must be non-negative, got {eps0}")));
        }
        let dim = grid.dim();
        let n = grid.len();
        let pos = grid.positions();
        let mut phys = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        let mut direct = [vec![Complex64::default(); n], vec![Complex64::default(); n]];
        let slot = |f: FieldName| match f {
            FieldName::U => 0,
            FieldName::UT => 1,
            FieldName::V => 2,
            FieldName::VT => 3,
        };
        let chan = |c: Channel| match c {
            Channel::Wave => 0,
            Channel::KleinGordon => 1,
        };
        for comp in &self.components {
            comp.validate()?;
            match comp {
                DataComponent::Gaussian { field, amplitude, center, width, carrier, laplacian } => {
                    let target = &mut phys[slot(*field)];
                    let w2 = width * width;
                    for (i, x) in pos.iter().enumerate() {
                        let y = sub(x, center);
                        let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
                        let gauss = (-r2 / (2.0 * w2)).exp();
                        let phase = (carrier[0] * y[0] + carrier[1] * y[1] + carrier[2] * y[2]).cos();
                        let shape = if *laplacian {
                            gauss * (r2 / (w2 * w2) - dim as f64 / w2)
                        } else {
                            gauss
                        };
                        target[i] += eps0 * amplitude * shape * phase;
                    }
                }
                DataComponent::Chi { field, amplitude, center } => {
                    let target = &mut phys[slot(*field)];
                    for (i, x) in pos.iter().enumerate() {
                        target[i] += eps0 * amplitude * chi(norm3(&sub(x, center)));
                    }
                }
                DataComponent::Packet { channel, amplitude, center, width, carrier } => {
                    let w2 = width * width;
                    let u: Field = pos
                        .iter()
                        .map(|x| {
                            let y = sub(x, center);
                            let r2 = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
                            let ph = carrier[0] * y[0] + carrier[1] * y[1] + carrier[2] * y[2];
                            Complex64::from_polar(eps0 * amplitude * (-r2 / (2.0 * w2)).exp(), ph)
                        })
                        .collect();
                    grid.check_contained(&u)?;
                    let uh = grid.forward(&u);
                    for (d, s) in direct[chan(*channel)].iter_mut().zip(uh) {
                        *d += s;
                    }
                }
                DataComponent::Modes { channel, modes } => {
                    for m in modes {
                        let idx = mode_index(grid, m.m)?;
                        direct[chan(*channel)][idx] += eps0 * Complex64::new(m.re, m.im);
                    }
                }
            }
        }
        for f in &phys {
            let z: Field = f.iter().map(|&x| Complex64::new(x, 0.0)).collect();
            grid.check_contained(&z)?;
        }
        let [u, u_t, v, v_t] = phys;
        let (mut uw, mut uk) = to_normalized(grid, &PhysicalState { u, u_t, v, v_t, t: 0.0 });
        for (a, b) in uw.iter_mut().zip(&direct[0]) {
            *a += b;
        }
        for (a, b) in uk.iter_mut().zip(&direct[1]) {
            *a += b;
        }
        Ok(ProfileState { v_wa: uw, v_kg: uk, t: 0.0 })
    }
}

/// Builds the data and reports the smallness norms
/// `|| |∇|^{-1/2} U^wa ||_{H^{N(n),n}_{S,wa}}` and `|| U^kg ||_{H^{N(n),n}_{S,kg}}`
/// for `n = 0, 1` (`n <= N1` and at most 1 at desk scale).
pub fn make_initial_data(
    grid: &SpectralGrid,
    spec: &InitialDataSpec,
    eps0: f64,
    params: &DyadicParams,
) -> Result<InitialData> {
    let state = spec.build(grid, eps0)?;
    Ok(InitialData { norms: smallness_norms(grid, &state, params), state })
}

/// The norms reported by [`make_initial_data`], evaluated on any state's
/// profiles.
pub fn smallness_norms(grid: &SpectralGrid, state: &ProfileState, params: &DyadicParams) -> Vec<(String, f64)> {
    let mut wa = state.v_wa.clone();
    grid.apply_radial(&mut wa, |r| if r > 0.0 { r.powf(-0.5) } else { 0.0 });
    let mut out = Vec::new();
    for n in 0..=params.n1.min(1) {
        let a = params.big_n(n);
        out.push((format!("h_wa_n{n}"), weighted_unchecked(grid, &wa, a, n, Flavor::Wa)));
        out.push((format!("h_kg_n{n}"), weighted_unchecked(grid, &state.v_kg, a, n, Flavor::Kg)));
    }
    out
}

/// Storage index of the signed wavenumber index `m`.
pub fn mode_index(grid: &SpectralGrid, m: [i64; 3]) -> Result<usize> {
    let n = grid.n() as i64;
    let mut ix = [0usize; 3];
    for a in 0..3 {
        if a >= grid.dim() {
            if m[a] != 0 {
                return Err(WkgError::Config(format!("mode {m:?} has components beyond the grid dimension")));
            }
            continue;
        }
        if m[a] < -n / 2 || m[a] >= n / 2 {
            return Err(WkgError::Config(format!("mode {m:?} is outside [-n/2, n/2)")));
        }
        ix[a] = m[a].rem_euclid(n) as usize;
    }
    Ok(grid.ravel(ix))
}
