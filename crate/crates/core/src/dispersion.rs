//! Dispersion relations of the two components.

use serde::{Deserialize, Serialize};

/// Which half of the system a field belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    #[serde(alias = "wa")]
    Wave,
    #[serde(alias = "kg")]
    KleinGordon,
}

impl Channel {
    pub fn lambda(self, xi: &[f64; 3]) -> f64 {
        match self {
            Channel::Wave => lambda_wave(xi),
            Channel::KleinGordon => lambda_kg(xi),
        }
    }

    pub fn lambda_of_mag(self, r: f64) -> f64 {
        match self {
            Channel::Wave => r,
            Channel::KleinGordon => bracket(r),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Channel::Wave => "wa",
            Channel::KleinGordon => "kg",
        }
    }
}

pub fn lambda_wave(xi: &[f64; 3]) -> f64 {
    (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
}

pub fn lambda_kg(xi: &[f64; 3]) -> f64 {
    (1.0 + xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
}

/// Japanese bracket `<r> = sqrt(1 + r^2)`.
pub fn bracket(r: f64) -> f64 {
    (1.0 + r * r).sqrt()
}
