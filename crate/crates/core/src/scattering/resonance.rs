//! Quadratic phases `Φ_{σμν}(ξ, η) = Λ_σ(ξ) - Λ_μ(ξ-η) - Λ_ν(η)` and a
//! sampling check of their lower bounds away from resonance.

use crate::dispersion::Channel;
use crate::error::{Result, WkgError};
use crate::grid::norm3;
use crate::system::Sign;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// An element of `{(wa, ±), (kg, ±)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseLabel {
    pub channel: Channel,
    pub sign: Sign,
}

impl PhaseLabel {
    pub const fn new(channel: Channel, sign: Sign) -> Self {
        PhaseLabel { channel, sign }
    }

    /// `Λ_{·,±} = ±Λ_·`.
    pub fn lambda(self, xi: &[f64; 3]) -> f64 {
        self.sign.value() * self.channel.lambda(xi)
    }
}

const SIGNS: [Sign; 2] = [Sign::Plus, Sign::Minus];

pub fn phase_phi(sigma: PhaseLabel, mu: PhaseLabel, nu: PhaseLabel, xi: &[f64; 3], eta: &[f64; 3]) -> f64 {
    let d = [xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]];
    sigma.lambda(xi) - mu.lambda(&d) - nu.lambda(eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub b: f64,
    pub samples: u64,
    /// `|Φ| < |ξ|/(4b^2)` for `((wa,ι),(kg,ι1),(kg,ι2))`, summed over signs.
    pub wa_kg_kg: u64,
    /// `|Φ| < |η|/(4b^2)` for `((kg,ι),(kg,ι1),(wa,ι2))`, summed over signs.
    pub kg_kg_wa: u64,
    /// `√(1+x²) + √(1+y²) - (x+y) < 1/(2b)`.
    pub scalar_sum: u64,
    /// `x + √(1+y²) - √(1+(x+y)²) < x/(4b²)`.
    pub scalar_diff: u64,
}

impl ResonanceReport {
    pub fn violations(&self) -> u64 {
        self.wa_kg_kg + self.kg_kg_wa + self.scalar_sum + self.scalar_diff
    }
}

fn ball_point(rng: &mut ChaCha8Rng, b: f64) -> [f64; 3] {
    loop {
        let p = [
            rng.random_range(-b..=b),
            rng.random_range(-b..=b),
            rng.random_range(-b..=b),
        ];
        if norm3(&p) <= b {
            return p;
        }
    }
}

/// Counts violations of the phase bounds with the phase supplied by `phi`,
/// so that deliberately broken phases can be fed through the same sampler.
pub fn check_resonance_bounds_with<F>(b: f64, n_samples: u64, seed: u64, phi: F) -> Result<ResonanceReport>
where
    F: Fn(PhaseLabel, PhaseLabel, PhaseLabel, &[f64; 3], &[f64; 3]) -> f64,
{
    if !(b >= 1.0 && b.is_finite()) {
        return Err(WkgError::Input(format!("resonance check needs b >= 1, got {b}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = ResonanceReport { b, samples: n_samples, ..Default::default() };
    let scale = 1.0 / (4.0 * b * b);
    for _ in 0..n_samples {
        let (xi, eta) = loop {
            let xi = ball_point(&mut rng, b);
            let eta = ball_point(&mut rng, b);
            let d = [xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]];
            if norm3(&d) <= b {
                break (xi, eta);
            }
        };
        let bound_xi = norm3(&xi) * scale;
        let bound_eta = norm3(&eta) * scale;
        for s0 in SIGNS {
            for s1 in SIGNS {
                for s2 in SIGNS {
                    let wa = |s| PhaseLabel::new(Channel::Wave, s);
                    let kg = |s| PhaseLabel::new(Channel::KleinGordon, s);
                    if phi(wa(s0), kg(s1), kg(s2), &xi, &eta).abs() < bound_xi {
                        rep.wa_kg_kg += 1;
                    }
                    if phi(kg(s0), kg(s1), wa(s2), &xi, &eta).abs() < bound_eta {
                        rep.kg_kg_wa += 1;
                    }
                }
            }
        }
        let (x, y) = loop {
            let x: f64 = rng.random_range(0.0..=b);
            let y: f64 = rng.random_range(0.0..=b);
            if x + y <= b {
                break (x, y);
            }
        };
        if (1.0 + x * x).sqrt() + (1.0 + y * y).sqrt() - (x + y) < 1.0 / (2.0 * b) {
            rep.scalar_sum += 1;
        }
        if x + (1.0 + y * y).sqrt() - (1.0 + (x + y) * (x + y)).sqrt() < x * scale {
            rep.scalar_diff += 1;
        }
    }
    Ok(rep)
}

/// [`check_resonance_bounds_with`] for the true phase.
pub fn check_resonance_bounds(b: f64, n_samples: u64, seed: u64) -> Result<ResonanceReport> {
    check_resonance_bounds_with(b, n_samples, seed, phase_phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    const WA: PhaseLabel = PhaseLabel::new(Channel::Wave, Sign::Plus);
    const KG: PhaseLabel = PhaseLabel::new(Channel::KleinGordon, Sign::Plus);

    #[test]
    fn degenerate_points() {
        let z = [0.0; 3];
        assert_eq!(phase_phi(WA, KG, KG, &z, &z), -2.0);
        let xi = [0.4, -1.0, 2.0];
        assert!(phase_phi(KG, KG, WA, &xi, &z).abs() < 1e-15);
    }

    #[test]
    fn minus_labels_flip_the_dispersion() {
        let xi = [0.3, 0.1, -0.2];
        let eta = [1.0, 0.5, 0.0];
        let kgm = PhaseLabel::new(Channel::KleinGordon, Sign::Minus);
        let a = phase_phi(WA, KG, kgm, &xi, &eta);
        let b = phase_phi(WA, KG, KG, &xi, &eta);
        assert!((a - b - 2.0 * Channel::KleinGordon.lambda(&eta)).abs() < 1e-14);
    }

    #[test]
    fn small_sweep_is_clean() {
        for b in [1.0, 3.0] {
            let r = check_resonance_bounds(b, 2000, 7).unwrap();
            assert_eq!(r.violations(), 0, "{r:?}");
        }
    }

    #[test]
    fn rejects_small_b() {
        assert!(check_resonance_bounds(0.5, 10, 1).is_err());
    }
}
