use crate::error::{Result, WkgError};
use serde::{Deserialize, Serialize};

/// Norm parameters and the derived regularity ladders.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DyadicParams {
    pub n0: f64,
    pub n1: u32,
    pub d: f64,
    pub kappa: f64,
    pub delta: f64,
    pub beta: f64,
    pub p: f64,
}

impl Default for DyadicParams {
    /// Desk-scale values: the asymptotic `N0 = 40, d = 10` give weights like
    /// `2^{70 k}` that swamp every other term on a 64^3 grid.
    fn default() -> Self {
        DyadicParams {
            n0: 4.0,
            d: 1.0,
            ..Self::asymptotic()
        }
    }
}

impl DyadicParams {
    pub fn asymptotic() -> Self {
        DyadicParams {
            n0: 40.0,
            n1: 3,
            d: 10.0,
            kappa: 0.01,
            delta: 1e-10,
            beta: 1e-3,
            p: 0.68,
        }
    }

    pub fn d_prime(&self) -> f64 {
        1.5 * self.d
    }

    /// Regularity `N(n)` at vector-field order `n`.
    pub fn big_n(&self, n: u32) -> f64 {
        if n == 0 {
            self.n0 + 3.0 * self.d
        } else {
            self.n0 - self.d * n as f64
        }
    }

    /// Energy growth exponent index `H(n)`.
    pub fn h(&self, n: u32) -> u32 {
        if n == 0 {
            1
        } else {
            81 * n - 80
        }
    }

    /// `H'(n)`.
    pub fn h_prime(&self, n: u32) -> u32 {
        if n == 0 {
            6
        } else {
            self.h(n + 1)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.n0, self.d, self.kappa, self.delta, self.beta, self.p]
            .iter()
            .all(|x| x.is_finite());
        if !finite {
            return Err(WkgError::Config("params must be finite".into()));
        }
        if self.n1 == 0 {
            return Err(WkgError::Config("params.n1 must be at least 1".into()));
        }
        if self.d < 0.0 || self.kappa < 0.0 || self.delta < 0.0 || self.beta < 0.0 {
            return Err(WkgError::Config("params d, kappa, delta, beta must be non-negative".into()));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(WkgError::Config(format!("params.p must lie in (0, 1), got {}", self.p)));
        }
        Ok(())
    }
}

/// `2^e` with `e` assembled in log space first.
pub fn pow2(e: f64) -> f64 {
    e.exp2()
}

pub fn plus(k: i32) -> f64 {
    k.max(0) as f64
}

pub fn minus(k: i32) -> f64 {
    k.min(0) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotic_ladders() {
        let p = DyadicParams::asymptotic();
        assert_eq!(p.d_prime(), 15.0);
        assert_eq!(p.big_n(0), 70.0);
        assert_eq!(p.big_n(1), 30.0);
        assert_eq!(p.big_n(3), 10.0);
        assert_eq!(p.h(0), 1);
        assert_eq!(p.h(1), 1);
        assert_eq!(p.h(2), 82);
        assert_eq!(p.h_prime(0), 6);
        assert_eq!(p.h_prime(1), 82);
        assert_eq!(p.h_prime(2), 163);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn rejects_bad_p() {
        let p = DyadicParams { p: 1.5, ..Default::default() };
        assert!(p.validate().is_err());
    }
}
