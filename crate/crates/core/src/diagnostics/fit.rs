//! Power-law exponents from time series.

use crate::error::{Result, WkgError};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub stderr: f64,
    pub prefactor: f64,
    pub samples: usize,
    pub window: [f64; 2],
}

/// Ordinary least squares `y = a + b x`; returns `(a, b, stderr(b), residuals)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, Vec<f64>) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let resid: Vec<f64> = x.iter().zip(y).map(|(xi, yi)| yi - a - b * xi).collect();
    let ssr: f64 = resid.iter().map(|r| r * r).sum();
    let se = if x.len() > 2 && sxx > 0.0 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    (a, b, se, resid)
}

/// Least-squares slope of `log value` against `log t` over samples with
/// `t` in `window`. Needs at least 6 samples spanning a factor 4 in time.
pub fn decay_fit(times: &[f64], values: &[f64], window: [f64; 2]) -> Result<DecayFit> {
    if times.len() != values.len() {
        return Err(WkgError::Input("times and values differ in length".into()));
    }
    let picked: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .filter(|(t, _)| **t >= window[0] && **t <= window[1])
        .map(|(t, v)| (*t, *v))
        .collect();
    if picked.len() < 6 {
        return Err(WkgError::Input(format!("decay fit needs at least 6 samples, got {}", picked.len())));
    }
    if let Some((t, v)) = picked.iter().find(|(t, v)| !(*v > 0.0) || !(*t > 0.0)) {
        return Err(WkgError::Input(format!("non-positive sample {v} at t = {t}")));
    }
    let tmin = picked.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let tmax = picked.iter().map(|p| p.0).fold(0.0, f64::max);
    if tmax < 4.0 * tmin {
        return Err(WkgError::Input(format!(
            "decay fit needs times spanning a factor 4, got [{tmin}, {tmax}]"
        )));
    }
    let x: Vec<f64> = picked.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = picked.iter().map(|p| p.1.ln()).collect();
    let (a, b, se, _) = linear_fit(&x, &y);
    Ok(DecayFit {
        exponent: b,
        stderr: se,
        prefactor: a.exp(),
        samples: picked.len(),
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let t = [5.0, 8.0, 12.0, 18.0, 27.0, 40.0];
        let v: Vec<f64> = t.iter().map(|t: &f64| 3.0 * t.powf(-1.5)).collect();
        let f = decay_fit(&t, &v, [0.0, 100.0]).unwrap();
        assert!((f.exponent + 1.5).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
        assert!((f.prefactor - 3.0).abs() < 1e-10);
    }

    #[test]
    fn constant_series() {
        let t = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let f = decay_fit(&t, &[2.0; 6], [0.0, 10.0]).unwrap();
        assert!(f.exponent.abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_windows() {
        let t = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert!(decay_fit(&t, &[1.0, 1.0, 0.0, 1.0, 1.0, 1.0], [0.0, 10.0]).is_err());
        assert!(decay_fit(&t[..5], &[1.0; 5], [0.0, 10.0]).is_err());
        let t2 = [2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        assert!(decay_fit(&t2, &[1.0; 6], [0.0, 10.0]).is_err());
    }
}
