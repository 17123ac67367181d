//! Run orchestration: the simulation loop with online `Θ`, diagnostics and
//! snapshots, the linear decay protocol, the resonance sweep, and output
//! files.

use crate::config::RunConfig;
use crate::diagnostics::energy::{energy_kg, energy_wave};
use crate::diagnostics::{decay_fit, sup_norm_record, z_norm_kg, z_norm_wave, DecayFit, DiagnosticsSeries};
use crate::dispersion::Channel;
use crate::error::{Result, WkgError};
use crate::free::free_evolve_tensor;
use crate::grid::{Field, SpectralGrid};
use crate::profiles::weighted_profile_norms;
use crate::scattering::windows::check_dyadic;
use crate::scattering::{
    cauchy_windows, check_resonance_bounds, phase_drift_fit, renormalize_profile, wave_scattering_residual,
    ResonanceReport, ScatteringReport, ThetaField, ThetaSample, TrackedMode,
};
use crate::system::initial::{make_initial_data, mode_index, smallness_norms};
use crate::system::snapshot::Snapshot;
use crate::system::state::imag_fraction;
use crate::system::{ProfileState, Solver};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Everything a simulation produces.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub series: DiagnosticsSeries,
    pub report: ScatteringReport,
    pub initial_norms: Vec<(String, f64)>,
    pub final_state: ProfileState,
    pub theta: Option<ThetaField>,
    /// Snapshots in time order.
    pub snapshots: Vec<Snapshot>,
    pub steps: usize,
}

/// Small JSON summary written next to the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
    pub initial_norms: Vec<(String, f64)>,
    pub snapshots: Vec<String>,
}

fn step_time(k: usize, dt: f64) -> f64 {
    k as f64 * dt
}

/// Snapshot times requested by the configuration, on the step lattice.
fn snapshot_steps(cfg: &RunConfig, total: usize) -> Vec<usize> {
    let dt = cfg.run.dt;
    let mut times = cfg.snapshots.times.clone();
    if cfg.snapshots.dyadic {
        let mut t = 1.0;
        while t <= cfg.run.t_max + 1e-9 {
            times.push(t);
            t *= 2.0;
        }
    }
    let mut steps: Vec<usize> = times
        .into_iter()
        .filter(|t| *t <= cfg.run.t_max + 1e-9)
        .map(|t| ((t / dt).round() as usize).min(total))
        .collect();
    steps.sort_unstable();
    steps.dedup();
    steps
}

fn dominant_modes(grid: &SpectralGrid, v_kg: &[Complex64], count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (1..grid.len())
        .filter(|&i| grid.in_dealias_band(i) && !grid.is_nyquist(i))
        .collect();
    idx.sort_by(|&a, &b| v_kg[b].norm().total_cmp(&v_kg[a].norm()).then(a.cmp(&b)));
    idx.truncate(count);
    idx
}

fn signed_mode(grid: &SpectralGrid, i: usize) -> [i64; 3] {
    let ix = grid.unravel(i);
    let mut m = [0i64; 3];
    for a in 0..grid.dim() {
        m[a] = grid.signed_index(ix[a]);
    }
    m
}

/// Diagnostic columns for one state, as configured.
pub fn diagnostics_row(
    cfg: &RunConfig,
    solver: &Solver,
    state: &ProfileState,
    theta: Option<&ThetaField>,
) -> Result<Vec<(String, f64)>> {
    let grid = solver.grid();
    let d = &cfg.diagnostics;
    let params = &cfg.params;
    let mut row = Vec::new();
    if d.z_norms {
        row.push(("z_wa".to_string(), z_norm_wave(grid, &state.v_wa, params)));
        row.push(("z_kg".to_string(), z_norm_kg(grid, &state.v_kg, params)));
    }
    if d.energies {
        let ek = energy_kg(grid, state, solver.coefficients(), params);
        row.push(("e_wa".to_string(), energy_wave(grid, state, params)));
        row.push(("e_kg".to_string(), ek.value().max(0.0)));
        row.push(("e_kg_flat".to_string(), ek.flat));
    }
    if d.sup_norms {
        for e in sup_norm_record(solver, state) {
            row.push((e.name(), e.value));
        }
    }
    if d.sobolev {
        row.extend(smallness_norms(grid, state, params));
    }
    if d.weighted_profiles {
        let n = if grid.dim() == 3 && params.n1 >= 2 { 1 } else { 0 };
        row.push((format!("wp_sup_n{n}"), weighted_profile_norms(grid, state, params, n)?.sup()));
    }
    if d.reality {
        let f = state.spectral_fields(grid);
        row.push(("imag_u".to_string(), imag_fraction(&grid.inverse(&f.u))));
        row.push(("imag_v".to_string(), imag_fraction(&grid.inverse(&f.v))));
    }
    if let Some(th) = theta {
        row.push(("theta_max".to_string(), th.theta.iter().fold(0.0, |m, x| m.max(x.abs()))));
    }
    Ok(row)
}

fn modulus_defect(v: &[Complex64], v_star: &[Complex64]) -> f64 {
    v.iter().zip(v_star).map(|(a, b)| (a.norm() - b.norm()).abs()).fold(0.0, f64::max)
}

/// Runs the solver as configured, without touching the file system.
pub fn simulate(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate_simulation()?;
    let grid = cfg.grid.build()?;
    let coeffs = cfg.coefficients;
    let params = cfg.params;
    let dt = cfg.run.dt;
    let total = (cfg.run.t_max / dt).round() as usize;

    let (mut state, mut theta, initial_norms) = match &cfg.run.resume_from {
        Some(path) => {
            let snap = Snapshot::load(path)?;
            if snap.dim != grid.dim() || snap.n != grid.n() || snap.box_length != grid.box_length() {
                return Err(WkgError::Config(format!(
                    "snapshot {} was taken on a different grid",
                    path.display()
                )));
            }
            if snap.coefficients != coeffs {
                return Err(WkgError::Config(format!(
                    "snapshot {} was taken with different coefficients",
                    path.display()
                )));
            }
            let theta = if cfg.scattering.enabled {
                let values = snap.theta.clone().ok_or_else(|| {
                    WkgError::Config(format!("snapshot {} carries no theta to resume from", path.display()))
                })?;
                Some(ThetaField::with_values(&grid, &coeffs, params.p, values, snap.state.t)?)
            } else {
                None
            };
            let norms = smallness_norms(&grid, &snap.state, &params);
            (snap.state, theta, norms)
        }
        None => {
            let data = make_initial_data(&grid, &cfg.initial, cfg.run.eps0, &params)?;
            let theta = cfg.scattering.enabled.then(|| ThetaField::new(&grid, &coeffs, params.p));
            (data.state, theta, data.norms)
        }
    };
    let k0 = (state.t / dt).round() as usize;
    if (state.t - step_time(k0, dt)).abs() > 1e-9 * state.t.max(1.0) {
        return Err(WkgError::Config(format!(
            "resume time {} is not on the step lattice of dt = {dt}",
            state.t
        )));
    }
    state.t = step_time(k0, dt);
    if let Some(th) = theta.as_mut() {
        th.t = state.t;
    }
    let solver = Solver::new(grid.clone(), coeffs)?;
    let snap_steps = snapshot_steps(cfg, total);

    let tracked_idx: Vec<usize> = if cfg.scattering.modes.is_empty() {
        dominant_modes(&grid, &state.v_kg, cfg.scattering.tracked_modes)
    } else {
        cfg.scattering.modes.iter().map(|m| mode_index(&grid, *m)).collect::<Result<_>>()?
    };
    let mut tracked: Vec<TrackedMode> = tracked_idx
        .iter()
        .map(|&i| TrackedMode {
            m: signed_mode(&grid, i),
            xi: grid.wavevector(i),
            ..Default::default()
        })
        .collect();

    let mut series = DiagnosticsSeries::new();
    let mut report = ScatteringReport::default();
    let mut snapshots = Vec::new();
    let mut v_star_snaps: Vec<Field> = Vec::new();

    for k in k0..=total {
        let t = state.t;
        let zero_theta;
        let theta_vals: &[f64] = match theta.as_ref() {
            Some(th) => &th.theta,
            None => {
                zero_theta = vec![0.0; grid.len()];
                &zero_theta
            }
        };
        let is_diag = (k - k0) % cfg.diagnostics.every == 0 || k == total;
        let is_snap = snap_steps.binary_search(&k).is_ok();
        let is_track = cfg.scattering.enabled && ((k - k0) % cfg.scattering.track_every == 0 || k == total || is_snap);

        if is_diag {
            let row = diagnostics_row(cfg, &solver, &state, theta.as_ref())?;
            series.push(t, row)?;
        }
        if is_track {
            for (tm, &i) in tracked.iter_mut().zip(&tracked_idx) {
                let v = state.v_kg[i];
                let vs = v * Complex64::from_polar(1.0, -theta_vals[i]);
                tm.times.push(t);
                tm.raw_phase.push(v.arg());
                tm.renormalized_phase.push(vs.arg());
                tm.modulus.push(v.norm());
                tm.theta.push(theta_vals[i]);
            }
        }
        if is_diag || is_snap {
            let vs = renormalize_profile(&state.v_kg, theta_vals);
            report.max_modulus_defect = report.max_modulus_defect.max(modulus_defect(&state.v_kg, &vs));
            if is_snap {
                v_star_snaps.push(vs);
            }
        }
        if is_snap {
            snapshots.push(Snapshot::new(
                &grid,
                coeffs,
                params,
                state.clone(),
                theta.as_ref().map(|th| th.theta.clone()),
            ));
            if let Some(th) = theta.as_ref() {
                report.theta.push(ThetaSample {
                    t,
                    max_abs: th.theta.iter().fold(0.0, |m, x| m.max(x.abs())),
                    tracked: tracked_idx.iter().map(|&i| th.theta[i]).collect(),
                });
            }
        }
        if k == total {
            break;
        }
        let mut next = solver.step(&state, dt)?;
        next.t = step_time(k + 1, dt);
        if let Some(th) = theta.as_mut() {
            th.accumulate(&grid, &state, &next)?;
        }
        state = next;
    }

    // windows over the dyadic snapshots
    let dyadic: Vec<usize> = snapshots
        .iter()
        .enumerate()
        .filter(|(_, s)| s.state.t > 0.0 && (s.state.t.log2() - s.state.t.log2().round()).abs() < 1e-9)
        .map(|(i, _)| i)
        .collect();
    let times: Vec<f64> = dyadic.iter().map(|&i| snapshots[i].state.t).collect();
    report.snapshot_times = snapshots.iter().map(|s| s.state.t).collect();
    if check_dyadic(&times).is_ok() {
        let vs: Vec<Field> = dyadic.iter().map(|&i| v_star_snaps[i].clone()).collect();
        let vk: Vec<Field> = dyadic.iter().map(|&i| snapshots[i].state.v_kg.clone()).collect();
        let vw: Vec<Field> = dyadic.iter().map(|&i| snapshots[i].state.v_wa.clone()).collect();
        if cfg.scattering.enabled {
            report.windows = Some(cauchy_windows(&grid, &params, &times, &vs, &vk)?);
        }
        report.wave_windows = Some(wave_scattering_residual(&grid, &times, &vw)?);
    }
    for tm in tracked.iter_mut() {
        let pick = |v: &[f64]| -> (Vec<f64>, Vec<f64>) {
            tm.times
                .iter()
                .zip(v)
                .filter(|(t, _)| **t >= cfg.scattering.fit_from)
                .map(|(t, p)| (*t, *p))
                .unzip()
        };
        let (t1, p1) = pick(&tm.raw_phase);
        let (t2, p2) = pick(&tm.renormalized_phase);
        tm.raw_fit = phase_drift_fit(&t1, &p1).ok();
        tm.renormalized_fit = phase_drift_fit(&t2, &p2).ok();
    }
    report.tracked = tracked;

    Ok(RunOutcome {
        series,
        report,
        initial_norms,
        final_state: state,
        theta,
        snapshots,
        steps: total - k0,
    })
}

/// Header stamp for CSV files: `SOURCE_DATE_EPOCH` when set, else now (UTC).
pub fn csv_stamp() -> String {
    let when = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| chrono::DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(chrono::Utc::now);
    when.to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn snapshot_file_name(t: f64) -> String {
    format!("snap_t{t:010.4}.wkgs")
}

/// Writes `diagnostics.csv`, `scattering.json`, `summary.json`,
/// `config.toml` and (if enabled) the snapshot files into `dir`.
pub fn write_outputs(cfg: &RunConfig, outcome: &RunOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let csv_path = dir.join("diagnostics.csv");
    let f = std::io::BufWriter::new(std::fs::File::create(&csv_path)?);
    outcome.series.write_csv(f, &csv_stamp())?;
    written.push(csv_path);

    let json_path = dir.join("scattering.json");
    outcome.report.save(&json_path)?;
    written.push(json_path);

    let mut names = Vec::new();
    if cfg.snapshots.write_files {
        let snap_dir = dir.join("snapshots");
        std::fs::create_dir_all(&snap_dir)?;
        for s in &outcome.snapshots {
            let p = snap_dir.join(snapshot_file_name(s.state.t));
            s.save(&p)?;
            names.push(format!("snapshots/{}", snapshot_file_name(s.state.t)));
            written.push(p);
        }
    }
    let summary = RunSummary {
        t_start: outcome.series.times.first().copied().unwrap_or(0.0),
        t_end: outcome.final_state.t,
        steps: outcome.steps,
        initial_norms: outcome.initial_norms.clone(),
        snapshots: names,
    };
    let sp = dir.join("summary.json");
    serde_json::to_writer_pretty(std::io::BufWriter::new(std::fs::File::create(&sp)?), &summary)?;
    written.push(sp);
    let cp = dir.join("config.toml");
    std::fs::write(&cp, cfg.to_toml()?)?;
    written.push(cp);
    Ok(written)
}

/// Sup norms and fitted exponent for one channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDecay {
    pub times: Vec<f64>,
    pub sup: Vec<f64>,
    pub fit: DecayFit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub wave: ChannelDecay,
    pub kg: ChannelDecay,
}

/// Sup of `|e^{-itΛ} f|` for the Gaussian profile of the decay protocol,
/// over a cube of sample points that grows with `t`.
pub fn linear_sup_series(cfg: &RunConfig, channel: Channel) -> Result<Vec<f64>> {
    cfg.validate_decay()?;
    let d = &cfg.decay;
    let grid = SpectralGrid::new(3, d.n, d.box_length)?;
    let w2 = d.width * d.width;
    let phys: Vec<f64> = grid
        .positions()
        .iter()
        .map(|x| (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / (2.0 * w2)).exp())
        .collect();
    let profile = grid.forward_real(&phys);
    let half = 0.5 * d.box_length;
    let m = d.samples_per_axis;
    Ok(d.times
        .iter()
        .map(|&t| {
            let a = (1.1 * t + 3.0 * d.width).min(half);
            let axis: Vec<f64> = (0..m).map(|j| -a + 2.0 * a * j as f64 / (m - 1) as f64).collect();
            let vals = free_evolve_tensor(&grid, &profile, channel, t, &[axis.clone(), axis.clone(), axis]);
            vals.iter().map(|z| z.norm()).fold(0.0, f64::max)
        })
        .collect())
}

/// The linear decay protocol for both channels.
pub fn decay_linear(cfg: &RunConfig) -> Result<DecayReport> {
    let one = |ch: Channel| -> Result<ChannelDecay> {
        let sup = linear_sup_series(cfg, ch)?;
        let fit = decay_fit(&cfg.decay.times, &sup, cfg.decay.window)?;
        Ok(ChannelDecay { times: cfg.decay.times.clone(), sup, fit })
    };
    Ok(DecayReport { wave: one(Channel::Wave)?, kg: one(Channel::KleinGordon)? })
}

/// The resonance sweep over the configured `b` values; each `b` gets its
/// own stream derived from `seed`.
pub fn resonance_sweep(cfg: &RunConfig) -> Result<Vec<ResonanceReport>> {
    cfg.validate_resonance()?;
    cfg.resonance
        .b
        .iter()
        .enumerate()
        .map(|(k, &b)| check_resonance_bounds(b, cfg.resonance.samples, cfg.seed.wrapping_add(k as u64)))
        .collect()
}

/// Text summary of a finished run directory.
pub fn summarize(dir: &Path) -> Result<String> {
    use std::fmt::Write;
    let series = DiagnosticsSeries::read_csv(std::fs::File::open(dir.join("diagnostics.csv"))?)?;
    let report = ScatteringReport::load(&dir.join("scattering.json"))?;
    let mut out = String::new();
    let (t0, t1) = match (series.times.first(), series.times.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(WkgError::Input(format!("{} has no samples", dir.display()))),
    };
    writeln!(out, "samples: {} over t in [{t0}, {t1}]", series.len()).ok();
    writeln!(out, "{:<20} {:>14} {:>14} {:>10}", "column", "first", "last", "ratio").ok();
    for (j, name) in series.columns.iter().enumerate() {
        let a = series.rows[0][j];
        let b = series.rows[series.len() - 1][j];
        let ratio = if a != 0.0 { format!("{:.4}", b / a) } else { "-".to_string() };
        writeln!(out, "{name:<20} {a:>14.6e} {b:>14.6e} {ratio:>10}").ok();
    }
    if let Some(w) = &report.windows {
        writeln!(out, "Cauchy windows (renormalized / raw):").ok();
        for (a, b) in w.renormalized.iter().zip(&w.raw) {
            writeln!(out, "  [{}, {}]  {:.6e}  {:.6e}", a.t1, a.t2, a.value, b.value).ok();
        }
    }
    if let Some(w) = &report.wave_windows {
        writeln!(out, "wave windows:").ok();
        for a in w {
            writeln!(out, "  [{}, {}]  {:.6e}", a.t1, a.t2, a.value).ok();
        }
    }
    for tm in &report.tracked {
        write!(out, "tracked mode {:?}:", tm.m).ok();
        if let Some(f) = tm.raw_fit {
            write!(out, " raw phase rate {:.4e} (residual {:.3})", f.rate, f.rel_residual).ok();
        }
        if let Some(f) = tm.renormalized_fit {
            write!(out, ", renormalized drift {:.4e}", f.drift).ok();
        }
        writeln!(out).ok();
    }
    writeln!(out, "max | |V*| - |V^kg| |: {:.3e}", report.max_modulus_defect).ok();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::CouplingCoefficients;

    fn tiny() -> RunConfig {
        let mut c = RunConfig::default();
        c.grid.n = 16;
        c.grid.box_length = 40.0;
        c.run.dt = 0.25;
        c.run.t_max = 4.0;
        c.initial = crate::config::reference_data(1.5);
        c.diagnostics.every = 4;
        c
    }

    #[test]
    fn snapshot_steps_are_dyadic_by_default() {
        let c = tiny();
        assert_eq!(snapshot_steps(&c, 16), vec![4, 8, 16]);
    }

    #[test]
    fn linear_run_keeps_profiles() {
        let mut c = tiny();
        c.coefficients = CouplingCoefficients::zero();
        let out = simulate(&c).unwrap();
        let init = make_initial_data(&c.grid.build().unwrap(), &c.initial, c.run.eps0, &c.params).unwrap();
        assert_eq!(out.final_state.v_kg, init.state.v_kg);
        assert_eq!(out.series.len(), 5);
        let e = out.series.column("e_wa").unwrap();
        assert!(e.iter().all(|x| (x - e[0]).abs() <= 1e-10 * e[0]));
    }

    #[test]
    fn zero_data_gives_zero_series() {
        let mut c = tiny();
        c.run.eps0 = 0.0;
        let out = simulate(&c).unwrap();
        for row in &out.series.rows {
            assert!(row.iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn stamp_follows_source_date_epoch() {
        std::env::set_var("SOURCE_DATE_EPOCH", "86400");
        assert_eq!(csv_stamp(), "1970-01-02T00:00:00Z");
    }
}
