use crate::error::{Result, WkgError};
use serde::{Deserialize, Serialize};

/// Constants `A^{ab}`, `B^{ab}`, `D` of the nonlinearities. Index 0 is time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingCoefficients {
    pub a: [[f64; 4]; 4],
    pub b: [[f64; 4]; 4],
    pub d: f64,
}

impl Default for CouplingCoefficients {
    fn default() -> Self {
        Self::model()
    }
}

impl CouplingCoefficients {
    /// Validates symmetry, finiteness and `B^{00} = 0`.
    pub fn new(a: [[f64; 4]; 4], b: [[f64; 4]; 4], d: f64) -> Result<Self> {
        let c = CouplingCoefficients { a, b, d };
        c.validate()?;
        Ok(c)
    }

    pub fn zero() -> Self {
        CouplingCoefficients {
            a: [[0.0; 4]; 4],
            b: [[0.0; 4]; 4],
            d: 0.0,
        }
    }

    /// The radial model problem: `A = I`, `D = 1`, `B = diag(0, 1, 1, 1)`,
    /// i.e. sources `|∇_{x,t} v|^2 + v^2` and `u Δv`.
    pub fn model() -> Self {
        let mut a = [[0.0; 4]; 4];
        let mut b = [[0.0; 4]; 4];
        for i in 0..4 {
            a[i][i] = 1.0;
            if i > 0 {
                b[i][i] = 1.0;
            }
        }
        CouplingCoefficients { a, b, d: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..4 {
            for j in 0..4 {
                if !self.a[i][j].is_finite() || !self.b[i][j].is_finite() {
                    return Err(WkgError::Config(format!("coefficient ({i},{j}) is not finite")));
                }
                if self.a[i][j] != self.a[j][i] {
                    return Err(WkgError::Config(format!("A is not symmetric at ({i},{j})")));
                }
                if self.b[i][j] != self.b[j][i] {
                    return Err(WkgError::Config(format!("B is not symmetric at ({i},{j})")));
                }
            }
        }
        if self.b[0][0] != 0.0 {
            return Err(WkgError::Config("B^00 must be zero".into()));
        }
        if !self.d.is_finite() {
            return Err(WkgError::Config("D is not finite".into()));
        }
        Ok(())
    }

    pub fn wave_source_active(&self) -> bool {
        self.d != 0.0 || self.a.iter().flatten().any(|&x| x != 0.0)
    }

    pub fn kg_source_active(&self) -> bool {
        self.b.iter().flatten().any(|&x| x != 0.0)
    }

    pub fn is_linear(&self) -> bool {
        !self.wave_source_active() && !self.kg_source_active()
    }

    /// Largest absolute entry of the spatial block of `B`.
    pub fn b_spatial_norm(&self) -> f64 {
        // operator norm bound for a symmetric 3x3 block: Frobenius norm
        let mut s = 0.0;
        for i in 1..4 {
            for j in 1..4 {
                s += self.b[i][j] * self.b[i][j];
            }
        }
        s.sqrt()
    }

    /// `q_±(ρ) = ∓ B^{jk} ρ_j ρ_k / (2 Λ_kg(ρ)) + B^{0k} ρ_k`.
    pub fn q_pm(&self, rho: &[f64; 3], sign: Sign) -> f64 {
        let mut quad = 0.0;
        let mut lin = 0.0;
        for j in 0..3 {
            lin += self.b[0][j + 1] * rho[j];
            for k in 0..3 {
                quad += self.b[j + 1][k + 1] * rho[j] * rho[k];
            }
        }
        let s = match sign {
            Sign::Plus => -1.0,
            Sign::Minus => 1.0,
        };
        s * quad / (2.0 * crate::dispersion::lambda_kg(rho)) + lin
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}
