//! Acceptance suite. Prints one line per criterion and a final tally. Pass
//! criterion numbers as arguments to run a subset, e.g.
//! `cargo test --test acceptance -- 4 9`. Failures only change the exit code
//! when `WKG_ACCEPTANCE_STRICT=1` is set, so that `cargo test` still runs the
//! remaining test targets; the FAIL lines are printed either way.

use num_complex::Complex64;
use std::time::Instant;
use wkg_core::config::{packet_data, reference_data, BoxRule, RunConfig};
use wkg_core::diagnostics::hardy::{hardy_equivalent, hardy_quantities};
use wkg_core::profiles::{central_rate, gamma_identity_residual, TimeRate};
use wkg_core::radial::{run_radial_model, RadialConfig};
use wkg_core::run::{decay_linear, resonance_sweep, simulate};
use wkg_core::scattering::{renorm_identity_residual, ThetaField};
use wkg_core::system::{make_initial_data, CouplingCoefficients, ProfileState, Solver};
use wkg_core::{Channel, DyadicParams, SpectralGrid};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Item = (u32, &'static str, fn() -> Outcome);

fn main() {
    let items: [Item; 10] = [
        (1, "linear exactness", linear_exactness),
        (2, "linear KG decay", kg_decay),
        (3, "linear wave decay", wave_decay),
        (4, "vector-field identity", gamma_identity),
        (5, "resonance inequalities", resonance),
        (6, "light-cone lower bound", light_cone),
        (7, "modified scattering", modified_scattering),
        (8, "slow energy growth", energy_growth),
        (9, "renormalization identity", renormalization),
        (10, "Hardy equivalence", hardy),
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (mut run, mut failed) = (0, 0);
    for (k, name, f) in items {
        if !wanted.is_empty() && !wanted.contains(&k) {
            continue;
        }
        run += 1;
        let start = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {k:>2} {name}: {} ({:.1} s)", o.detail, start.elapsed().as_secs_f64());
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", run - failed);
    let strict = std::env::var("WKG_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if failed > 0 && strict {
        std::process::exit(1);
    }
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn linear_exactness() -> Outcome {
    let grid = SpectralGrid::new(3, 32, 48.0).unwrap();
    let data = make_initial_data(&grid, &reference_data(2.5), 1e-2, &DyadicParams::default()).unwrap();
    let solver = Solver::new(grid, CouplingCoefficients::zero()).unwrap();
    let end = solver.advance(&data.state, 0.1, 200).unwrap();
    let d = max_diff(&end.v_wa, &data.state.v_wa).max(max_diff(&end.v_kg, &data.state.v_kg));
    outcome(d < 1e-12, format!("max |V(t) - V(0)| = {d:.3e} after 200 steps (< 1e-12)"))
}

fn decay(channel: Channel, lo: f64, hi: f64) -> Outcome {
    let cfg = RunConfig::default();
    let rep = decay_linear(&cfg).unwrap();
    let c = match channel {
        Channel::Wave => rep.wave,
        Channel::KleinGordon => rep.kg,
    };
    let e = c.fit.exponent;
    outcome(
        (lo..=hi).contains(&e),
        format!("exponent {e:.4} ± {:.4} (want [{lo}, {hi}])", c.fit.stderr),
    )
}

fn kg_decay() -> Outcome {
    decay(Channel::KleinGordon, -1.65, -1.35)
}

fn wave_decay() -> Outcome {
    decay(Channel::Wave, -1.15, -0.85)
}

/// States `t - 2dt, ..., t + 2dt` of the reference run for each time in
/// `times`, stepping from 0 with `dt`.
fn stencils(solver: &Solver, start: &ProfileState, dt: f64, times: &[f64]) -> Vec<Vec<ProfileState>> {
    let mut out = Vec::new();
    let mut s = start.clone();
    let mut k = 0usize;
    for &t in times {
        let centre = (t / dt).round() as usize;
        let mut window = Vec::new();
        while k <= centre + 2 {
            if k + 2 >= centre {
                window.push(s.clone());
            }
            s = solver.step(&s, dt).unwrap();
            k += 1;
            s.t = k as f64 * dt;
        }
        out.push(window);
    }
    out
}

fn gamma_identity() -> Outcome {
    let cfg = RunConfig::default();
    let grid = cfg.grid.build().unwrap();
    let data = make_initial_data(&grid, &cfg.initial, cfg.run.eps0, &cfg.params).unwrap();
    let solver = Solver::new(grid, cfg.coefficients).unwrap();
    let times = [1.0, 4.0];
    let residuals = |dt: f64| -> Vec<f64> {
        let mut res = Vec::new();
        for window in stencils(&solver, &data.state, dt, &times) {
            let (rw, rk) = central_rate(&window, dt).unwrap();
            for channel in [Channel::Wave, Channel::KleinGordon] {
                for l in 0..3 {
                    let rate = TimeRate::Given { wave: &rw, kg: &rk };
                    res.push(gamma_identity_residual(&solver, &window[2], channel, l, rate).unwrap());
                }
            }
        }
        res
    };
    let coarse = residuals(0.05);
    let fine = residuals(0.025);
    let worst = coarse.iter().cloned().fold(0.0, f64::max);
    let ratio = coarse.iter().zip(&fine).map(|(a, b)| a / b).fold(f64::INFINITY, f64::min);
    outcome(
        worst < 1e-6 && ratio >= 4.0,
        format!("max residual {worst:.3e} at dt=0.05 (< 1e-6), min shrink factor {ratio:.2} at dt/2 (>= 4)"),
    )
}

fn resonance() -> Outcome {
    let cfg = RunConfig::default();
    let reps = resonance_sweep(&cfg).unwrap();
    let total: u64 = reps.iter().map(|r| r.violations()).sum();
    let samples: u64 = reps.iter().map(|r| r.samples).sum();
    outcome(total == 0, format!("{total} violations in {samples} samples over b = {:?}", cfg.resonance.b))
}

fn light_cone() -> Outcome {
    let cfg = RadialConfig::default();
    let series = run_radial_model(&cfg).unwrap();
    let vals: Vec<f64> = series
        .times
        .iter()
        .zip(&series.light_cone_min)
        .filter(|(t, _)| **t >= 5.0 - 1e-9 && **t <= 30.0 + 1e-9)
        .map(|(_, v)| *v)
        .collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    outcome(
        !vals.is_empty() && lo >= 0.01 && hi <= 100.0,
        format!("u<t>/eps^2 in [{lo:.4}, {hi:.4}] over t in [5, 30] (band [0.01, 100])"),
    )
}

fn modified_scattering() -> Outcome {
    let mut cfg = RunConfig::default();
    cfg.run.eps0 = 1e-2;
    cfg.run.t_max = 32.0;
    cfg.run.dt = 0.1;
    cfg.run.box_rule = BoxRule::Relaxed;
    cfg.initial = packet_data(0.6, 5.0);
    cfg.snapshots.dyadic = false;
    cfg.snapshots.times = vec![2.0, 4.0, 8.0, 16.0, 32.0];
    cfg.snapshots.write_files = false;
    cfg.diagnostics.every = 40;
    cfg.diagnostics.sup_norms = false;
    cfg.scattering.modes = vec![[9, 0, 0]];
    let out = match simulate(&cfg) {
        Ok(o) => o,
        Err(e) => return outcome(false, format!("run failed: {e}")),
    };
    let rep = out.report;
    let Some(w) = rep.windows else {
        return outcome(false, "no Cauchy windows".into());
    };
    let vals: Vec<f64> = w.renormalized.iter().map(|x| x.value).collect();
    let ratios: Vec<f64> = vals.windows(2).map(|p| p[0] / p[1]).collect();
    let min_ratio = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let pass_a = min_ratio >= 1.3;
    let tm = &rep.tracked[0];
    let (raw, ren) = (tm.raw_fit.unwrap(), tm.renormalized_fit.unwrap());
    let pass_b = raw.rel_residual < 0.3 && raw.rate.abs() > 3.0 * ren.rate.abs();
    let pass_c = rep.max_modulus_defect <= 1e-14;
    outcome(
        pass_a && pass_b && pass_c,
        format!(
            "(a) window ratios {:?} (>= 1.3) {}; (b) c = {:.3e}, fit residual {:.3} (< 0.3), V* rate {:.3e} (|c| > 3x) {}; (c) modulus defect {:.1e} (<= 1e-14) {}",
            ratios.iter().map(|r| (r * 100.0).round() / 100.0).collect::<Vec<_>>(),
            ok(pass_a),
            raw.rate,
            raw.rel_residual,
            ren.rate,
            ok(pass_b),
            rep.max_modulus_defect,
            ok(pass_c)
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "fails"
    }
}

fn energy_growth() -> Outcome {
    let mut cfg = RunConfig::default();
    cfg.snapshots.write_files = false;
    cfg.scattering.enabled = false;
    cfg.diagnostics.sup_norms = false;
    cfg.diagnostics.reality = false;
    let out = match simulate(&cfg) {
        Ok(o) => o,
        Err(e) => return outcome(false, format!("run failed: {e}")),
    };
    let rel_change = |name: &str| {
        let c = out.series.column(name).unwrap();
        c.iter().map(|x| (x - c[0]).abs() / c[0]).fold(0.0, f64::max)
    };
    let growth = |name: &str| {
        let c = out.series.column(name).unwrap();
        c.iter().map(|x| x / c[0]).fold(0.0, f64::max)
    };
    let (ew, ek) = (rel_change("e_wa"), rel_change("e_kg"));
    let (zw, zk) = (growth("z_wa"), growth("z_kg"));
    outcome(
        ew < 0.05 && ek < 0.05 && zw <= 2.0 && zk <= 2.0,
        format!("energy change wa {ew:.2e}, kg {ek:.2e} (< 5%); Z growth wa {zw:.4}, kg {zk:.4} (<= 2)"),
    )
}

/// Residual of the renormalization identity around `t_mid` for step `dt`,
/// with a 5-point central difference of `V*`.
fn renorm_residual(t_mid: f64, dt: f64) -> f64 {
    let grid = SpectralGrid::new(3, 32, 48.0).unwrap();
    let params = DyadicParams::default();
    let coeffs = CouplingCoefficients::model();
    let data = make_initial_data(&grid, &reference_data(2.5), 1e-2, &params).unwrap();
    let solver = Solver::new(grid.clone(), coeffs).unwrap();
    let mut field = ThetaField::new(&grid, &coeffs, params.p);
    let centre = (t_mid / dt).round() as usize;
    let mut s = data.state;
    let mut states = Vec::new();
    let mut thetas = Vec::new();
    for k in 0..=centre + 2 {
        if k + 2 >= centre {
            states.push(s.clone());
            thetas.push(field.theta.clone());
        }
        if k == centre + 2 {
            break;
        }
        let mut next = solver.step(&s, dt).unwrap();
        next.t = (k + 1) as f64 * dt;
        field.accumulate(&grid, &s, &next).unwrap();
        s = next;
    }
    let st: Vec<&ProfileState> = states.iter().collect();
    let th: Vec<&[f64]> = thetas.iter().map(|v| v.as_slice()).collect();
    renorm_identity_residual(&solver, &field, &st, &th).unwrap()
}

fn renormalization() -> Outcome {
    let coarse = renorm_residual(1.0, 0.01);
    let fine = renorm_residual(1.0, 0.005);
    let ratio = coarse / fine;
    outcome(
        coarse < 1e-3 && ratio >= 4.0,
        format!("relative error {coarse:.3e} at dt=0.01 (< 1e-3), {fine:.3e} at dt=0.005, factor {ratio:.2} (>= 4)"),
    )
}

/// Twenty test profiles on a fixed grid: Gaussians, spherical shells and
/// translated bumps of several sizes.
fn hardy_profiles(grid: &SpectralGrid) -> Vec<Vec<f64>> {
    let pos = grid.positions();
    let mut out = Vec::new();
    let gauss = |c: [f64; 3], w: f64| -> Vec<f64> {
        pos.iter()
            .map(|x| {
                let r2 = (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2) + (x[2] - c[2]).powi(2);
                (-r2 / (2.0 * w * w)).exp()
            })
            .collect()
    };
    for w in [0.6, 1.0, 1.7, 2.5, 4.0, 6.0, 8.0] {
        out.push(gauss([0.0; 3], w));
    }
    for (r0, w) in [(3.0, 0.8), (5.0, 1.0), (8.0, 1.5), (10.0, 2.0), (6.0, 0.6), (12.0, 1.2)] {
        out.push(
            pos.iter()
                .map(|x| {
                    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
                    (-(r - r0).powi(2) / (2.0 * w * w)).exp()
                })
                .collect(),
        );
    }
    let bump = |c: [f64; 3], a: f64| -> Vec<f64> {
        pos.iter()
            .map(|x| {
                let r2 = ((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2) + (x[2] - c[2]).powi(2)) / (a * a);
                if r2 < 1.0 {
                    (-1.0 / (1.0 - r2)).exp()
                } else {
                    0.0
                }
            })
            .collect()
    };
    for (c, a) in [
        ([0.0, 0.0, 0.0], 3.0),
        ([4.0, 0.0, 0.0], 2.0),
        ([0.0, -6.0, 2.0], 4.0),
        ([5.0, 5.0, 5.0], 3.0),
        ([-8.0, 3.0, 0.0], 5.0),
        ([2.0, -2.0, -9.0], 6.0),
        ([-3.0, 7.0, -4.0], 2.5),
    ] {
        out.push(bump(c, a));
    }
    out
}

fn hardy() -> Outcome {
    let grid = SpectralGrid::new(3, 64, 48.0).unwrap();
    let profiles = hardy_profiles(&grid);
    let (kmin, kmax) = grid.k_range();
    let mut worst: f64 = 1.0;
    let mut compared = 0;
    for phys in &profiles {
        let f = grid.forward_real(phys);
        let scale = grid.l2_xi(&f);
        for k in kmin..=kmax {
            let (_, b) = hardy_quantities(&grid, &f, k);
            let e = hardy_equivalent(&grid, &f, k);
            // shells carrying no mass at all (relative to the profile) are skipped
            if b.max(e) <= 1e-12 * scale {
                continue;
            }
            compared += 1;
            let r = if b > e { b / e } else { e / b };
            worst = worst.max(r);
        }
    }
    outcome(
        worst <= 8.0,
        format!("{} profiles, {compared} (profile, k) pairs, worst ratio {worst:.3} (<= 8)", profiles.len()),
    )
}
