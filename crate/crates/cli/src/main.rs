use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use wkg_core::config::RunConfig;
use std::io::Write;
use wkg_core::diagnostics::series::format_num;
use wkg_core::radial::{run_radial_model, RadialSeries};
use wkg_core::run::{csv_stamp, decay_linear, resonance_sweep, simulate, summarize, write_outputs};
use wkg_core::{Result, WkgError};

#[derive(Parser, Debug)]
#[command(name = "wkg", version, about = "Wave / Klein-Gordon simulator and diagnostics")]
struct Cli {
    /// TOML configuration; built-in defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides `seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides `output`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    print_config: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the 3D solver and write diagnostics, scattering report and snapshots.
    Simulate,
    /// Run the radial model and write the light-cone series.
    Radial,
    /// Fit linear sup-norm decay exponents for both channels.
    DecayLinear,
    /// Sample the phase lower bounds; exits 0 iff there are no violations.
    ResonanceCheck {
        /// Comma separated `b` values, overriding `resonance.b`.
        #[arg(long, value_delimiter = ',')]
        b: Vec<f64>,
        /// Overrides `resonance.samples`.
        #[arg(long)]
        samples: Option<u64>,
    },
    /// Summarize a finished simulation directory (default: the output directory).
    Report {
        dir: Option<PathBuf>,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output = o.clone();
    }
    Ok(cfg)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let f = std::io::BufWriter::new(std::fs::File::create(path)?);
    serde_json::to_writer_pretty(f, value)?;
    Ok(())
}

/// The light-cone column is NaN until the cone covers a grid cell and may be
/// negative, so it is written directly rather than through a diagnostics table.
fn write_radial_csv(path: &Path, s: &RadialSeries) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "# generated {}", csv_stamp())?;
    writeln!(w, "t,light_cone_min,energy_kg,u_origin")?;
    for k in 0..s.times.len() {
        writeln!(
            w,
            "{},{},{},{}",
            format_num(s.times[k]),
            format_num(s.light_cone_min[k]),
            format_num(s.energy_kg[k]),
            format_num(s.u_origin[k])
        )?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| WkgError::Config(format!("cannot start {n} threads: {e}")))?;
    }
    let mut cfg = load_config(&cli)?;
    if let Some(Command::ResonanceCheck { b, samples }) = &cli.command {
        if !b.is_empty() {
            cfg.resonance.b = b.clone();
        }
        if let Some(n) = samples {
            cfg.resonance.samples = *n;
        }
    }
    if cli.print_config {
        print!("{}", cfg.to_toml()?);
        return Ok(0);
    }
    let Some(command) = cli.command else {
        return Err(WkgError::Config("no subcommand given; see --help".into()));
    };
    let out = cfg.output.clone();
    match command {
        Command::Simulate => {
            cfg.validate_simulation()?;
            log::info!("simulating to t = {} with dt = {}", cfg.run.t_max, cfg.run.dt);
            let outcome = simulate(&cfg)?;
            let files = write_outputs(&cfg, &outcome, &out)?;
            println!("{} steps, {} diagnostic rows, {} files in {}", outcome.steps, outcome.series.len(), files.len(), out.display());
        }
        Command::Radial => {
            cfg.radial.validate()?;
            let series = run_radial_model(&cfg.radial)?;
            std::fs::create_dir_all(&out)?;
            let path = out.join("radial.csv");
            write_radial_csv(&path, &series)?;
            println!("{} samples written to {}; energy drift {:.3e}", series.times.len(), path.display(), series.energy_drift());
        }
        Command::DecayLinear => {
            let rep = decay_linear(&cfg)?;
            std::fs::create_dir_all(&out)?;
            let path = out.join("decay.json");
            write_json(&path, &rep)?;
            println!(
                "wave exponent {:.4} ± {:.4}, kg exponent {:.4} ± {:.4} on [{}, {}]; written to {}",
                rep.wave.fit.exponent,
                rep.wave.fit.stderr,
                rep.kg.fit.exponent,
                rep.kg.fit.stderr,
                rep.kg.fit.window[0],
                rep.kg.fit.window[1],
                path.display()
            );
        }
        Command::ResonanceCheck { .. } => {
            let reps = resonance_sweep(&cfg)?;
            let mut bad = 0;
            for r in &reps {
                println!(
                    "b = {}: {} samples, violations wa-kg-kg {}, kg-kg-wa {}, scalar sum {}, scalar diff {}",
                    r.b, r.samples, r.wa_kg_kg, r.kg_kg_wa, r.scalar_sum, r.scalar_diff
                );
                bad += r.violations();
            }
            if bad > 0 {
                eprintln!("{bad} violations");
                return Ok(2);
            }
        }
        Command::Report { dir } => {
            print!("{}", summarize(dir.as_deref().unwrap_or(&out))?);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
