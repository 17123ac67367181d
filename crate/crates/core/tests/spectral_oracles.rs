use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use wkg_core::free::{free_evolve_eval, free_evolve_grid};
use wkg_core::lp::{phi_k, project_pk};
use wkg_core::profiles::{rotation_apply, xi_derivative, xi_derivative_unchecked};
use wkg_core::{Channel, SpectralGrid};

fn sample(grid: &SpectralGrid, f: impl Fn(&[f64; 3]) -> f64) -> Vec<f64> {
    grid.positions().iter().map(f).collect()
}

fn max_abs(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn gaussian_transform_matches_closed_form() {
    let grid = SpectralGrid::new(3, 64, 48.0).unwrap();
    let w = 2.0;
    let f = grid.forward_real(&sample(&grid, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * w * w)).exp()));
    let peak = (2.0 * PI * w * w).powf(1.5);
    for (i, z) in f.iter().enumerate() {
        let k2 = grid.kmag(i).powi(2);
        let exact = peak * (-w * w * k2 / 2.0).exp();
        assert!((z - exact).norm() < 1e-10 * peak, "mode {i}: {z} vs {exact}");
    }
}

#[test]
fn xi_derivative_of_gaussian_matches_analytic_derivative() {
    let grid = SpectralGrid::new(3, 64, 48.0).unwrap();
    let w = 2.0;
    let f = grid.forward_real(&sample(&grid, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * w * w)).exp()));
    for l in 0..3 {
        let d = xi_derivative(&grid, &f, l).unwrap();
        let exact: Vec<Complex64> = (0..grid.len()).map(|i| -w * w * grid.wavevector(i)[l] * f[i]).collect();
        assert!(max_diff(&d, &exact) < 1e-6 * max_abs(&f));
    }
}

#[test]
fn xi_derivative_of_translated_gaussian_picks_up_the_modulation() {
    let grid = SpectralGrid::new(3, 64, 48.0).unwrap();
    let a = [1.5, -2.0, 0.5];
    let g = |x: &[f64; 3]| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 8.0).exp();
    let f0 = grid.forward_real(&sample(&grid, g));
    let fa = grid.forward_real(&sample(&grid, |x| g(&[x[0] - a[0], x[1] - a[1], x[2] - a[2]])));
    let d0 = xi_derivative(&grid, &f0, 0).unwrap();
    let da = xi_derivative(&grid, &fa, 0).unwrap();
    let expected: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let xi = grid.wavevector(i);
            let m = Complex64::from_polar(1.0, -(a[0] * xi[0] + a[1] * xi[1] + a[2] * xi[2]));
            m * d0[i] - Complex64::new(0.0, a[0]) * fa[i]
        })
        .collect();
    assert!(max_diff(&da, &expected) < 1e-8 * max_abs(&f0));
}

#[test]
fn kg_product_rule_for_the_dispersion() {
    let grid = SpectralGrid::new(3, 64, 48.0).unwrap();
    let f = grid.forward_real(&sample(&grid, |x| (-(x[0] * x[0] + 1.5 * x[1] * x[1] + x[2] * x[2]) / 8.0).exp()));
    let lam_f: Vec<Complex64> = (0..grid.len()).map(|i| Channel::KleinGordon.lambda(&grid.wavevector(i)) * f[i]).collect();
    for l in 0..3 {
        let lhs = xi_derivative_unchecked(&grid, &lam_f, l);
        let df = xi_derivative(&grid, &f, l).unwrap();
        let rhs: Vec<Complex64> = (0..grid.len())
            .map(|i| {
                let xi = grid.wavevector(i);
                let lam = Channel::KleinGordon.lambda(&xi);
                xi[l] / lam * f[i] + lam * df[i]
            })
            .collect();
        let e = max_diff(&lhs, &rhs) / max_abs(&f);
        assert!(e < 1e-8, "axis {l}: {e:.3e}");
    }
}

#[test]
fn rotations_annihilate_radial_functions_and_satisfy_so3() {
    let grid = SpectralGrid::new(3, 64, 32.0).unwrap();
    let radial = grid.forward_real(&sample(&grid, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 4.0).exp()));
    for (j, k) in [(1, 2), (2, 0), (0, 1)] {
        let r = rotation_apply(&grid, &radial, j, k).unwrap();
        assert!(max_abs(&r) < 1e-8 * max_abs(&radial));
    }
    let f = grid.forward_real(&sample(&grid, |x| {
        (-(x[0] - 1.0).powi(2) / 2.5 - x[1] * x[1] / 4.0 - (x[2] + 0.5).powi(2) / 3.0).exp() * (1.0 + 0.3 * x[1])
    }));
    let o23 = |g: &[Complex64]| rotation_apply(&grid, g, 1, 2).unwrap();
    let o31 = |g: &[Complex64]| rotation_apply(&grid, g, 2, 0).unwrap();
    let o12 = rotation_apply(&grid, &f, 0, 1).unwrap();
    let a = o23(&o31(&f));
    let b = o31(&o23(&f));
    let comm: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
    let minus: Vec<Complex64> = o12.iter().map(|z| -z).collect();
    assert!(max_diff(&comm, &minus) < 1e-7 * max_abs(&o12));
}

#[test]
fn rotation_of_x1_gaussian() {
    // Ω_12 (x1 g) = x1 (x1 ∂2 - x2 ∂1) g - x2 g = -x2 g for radial g
    let grid = SpectralGrid::new(3, 64, 32.0).unwrap();
    let g = |x: &[f64; 3]| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 4.0).exp();
    let f = grid.forward_real(&sample(&grid, |x| x[0] * g(x)));
    let expected = grid.forward_real(&sample(&grid, |x| -x[1] * g(x)));
    let got = rotation_apply(&grid, &f, 0, 1).unwrap();
    assert!(max_diff(&got, &expected) < 1e-8 * max_abs(&expected));
}

#[test]
fn uncontained_fields_are_rejected() {
    let grid = SpectralGrid::new(3, 16, 10.0).unwrap();
    let f = grid.forward_real(&vec![1.0; grid.len()]);
    assert!(xi_derivative(&grid, &f, 0).is_err());
}

#[test]
fn free_evaluation_agrees_with_grid_propagation() {
    let grid = SpectralGrid::new(3, 16, 30.0).unwrap();
    let f = grid.forward_real(&sample(&grid, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 6.0).exp()));
    for channel in [Channel::Wave, Channel::KleinGordon] {
        let on_grid = free_evolve_grid(&grid, &f, channel, 3.0);
        let idx: Vec<usize> = (0..grid.len()).step_by(97).collect();
        let pts: Vec<[f64; 3]> = idx.iter().map(|&i| grid.position(i)).collect();
        let direct = free_evolve_eval(&grid, &f, channel, 3.0, &pts);
        for (k, &i) in idx.iter().enumerate() {
            assert!((direct[k] - on_grid[i]).norm() < 1e-10, "{channel:?} at {i}");
        }
    }
}

#[test]
fn littlewood_paley_pieces_sum_to_the_field() {
    let grid = SpectralGrid::new(3, 16, 20.0).unwrap();
    let f = grid.forward_real(&sample(&grid, |x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 3.0).exp()));
    let (kmin, kmax) = grid.k_range();
    let mut sum = vec![Complex64::default(); grid.len()];
    for k in kmin..=kmax {
        for (s, p) in sum.iter_mut().zip(project_pk(&grid, &f, k)) {
            *s += p;
        }
    }
    for i in 0..grid.len() {
        if !grid.is_nyquist(i) && i != 0 {
            assert!((sum[i] - f[i]).norm() < 1e-12 * max_abs(&f), "mode {i}");
        }
    }
    // each cutoff is a partition of unity away from 0
    for r in [0.01, 0.3, 1.0, 1.7, 5.5] {
        let total: f64 = (-12..=6).map(|k| phi_k(k, r)).sum();
        assert!((total - 1.0).abs() < 1e-12, "r = {r}: {total}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transforms_round_trip(values in prop::collection::vec(-1.0f64..1.0, 512)) {
        let grid = SpectralGrid::new(3, 8, 5.0).unwrap();
        let back = grid.inverse_real(&grid.forward_real(&values));
        for (a, b) in values.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn plancherel(values in prop::collection::vec(-1.0f64..1.0, 512), box_length in 1.0f64..50.0) {
        let grid = SpectralGrid::new(3, 8, box_length).unwrap();
        let a = grid.l2_physical_real(&values);
        let b = grid.l2_spectral(&grid.forward_real(&values));
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1e-300));
    }

    #[test]
    fn real_fields_have_hermitian_spectra(values in prop::collection::vec(-1.0f64..1.0, 512)) {
        let grid = SpectralGrid::new(3, 8, 5.0).unwrap();
        let f = grid.forward_real(&values);
        for i in 0..grid.len() {
            prop_assert!((f[i] - f[grid.neg_index(i)].conj()).norm() < 1e-12);
        }
    }
}
