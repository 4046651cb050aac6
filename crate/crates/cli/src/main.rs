// Validation uses `!(x > 0.0)` so NaN inputs are rejected along with
// nonpositive ones; `x <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::{Path, PathBuf};

use browave::duality::{duality_report, molecule_catalog, required_diffusion};
use browave::model::{trap_parameters, MediumSpec, ParticleSpec};
use browave::PhysicalConstants;
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use browave_cli::csvout::{render_moments, render_rows, write_file};
use browave_cli::evolve::{run_evolve, Engine, EvolveOptions, Mode};
use browave_cli::figures::{self, fig5_phases, FIG2_TIMES};
use browave_cli::manifest::RunManifest;
use browave_cli::report::{render_catalog, render_duality, render_nogo, Format, TrapDiagnostics};
use browave_cli::units;
use browave_cli::AppError;

/// Can a Brownian particle behave as a matter wave? Reports the trapping it
/// would take, demonstrates why free diffusion cannot, and reproduces the
/// underlying dynamics by closed forms, PDE solvers, and seeded ensembles.
#[derive(Parser)]
#[command(name = "browave", version, about)]
struct Cli {
    /// Output format for report commands
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,

    /// Write output to this file (dataset commands require it)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Natural units (hbar = k_B = 1) instead of SI
    #[arg(long, global = true)]
    natural_units: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Requirements for one particle to behave as a matter wave
    Duality(DualityArgs),
    /// The free-diffusion contradiction: the coefficient the duality
    /// condition would demand diverges at early times
    Nogo(NogoArgs),
    /// Figure datasets as CSV
    Figures(FiguresArgs),
    /// Density evolution snapshots and moments by one of three engines
    Evolve(EvolveArgs),
    /// The built-in molecule catalog
    Catalog,
}

#[derive(Args)]
struct DualityArgs {
    /// Particle mass, e.g. 720Da or 1.2e-24kg
    #[arg(long, allow_hyphen_values = true)]
    mass: Option<String>,

    /// Particle radius, e.g. 0.35nm or 3.5e-10m
    #[arg(long, allow_hyphen_values = true)]
    radius: Option<String>,

    /// Pick mass and radius from the catalog by label (e.g. C60)
    #[arg(long, conflicts_with_all = ["mass", "radius"])]
    catalog: Option<String>,

    /// Temperature in K
    #[arg(long, allow_hyphen_values = true)]
    temperature: String,

    /// Optional medium shear modulus (e.g. 1GPa) for trap diagnostics
    #[arg(long, requires = "viscosity", allow_hyphen_values = true)]
    shear_modulus: Option<String>,

    /// Optional medium shear viscosity (e.g. 1Pas) for trap diagnostics
    #[arg(long, requires = "shear_modulus", allow_hyphen_values = true)]
    viscosity: Option<String>,
}

#[derive(Args)]
struct NogoArgs {
    /// Particle mass, e.g. 720Da
    #[arg(long, allow_hyphen_values = true)]
    mass: Option<String>,

    /// Pick the mass from the catalog by label
    #[arg(long, conflicts_with = "mass")]
    catalog: Option<String>,

    /// Temperature in K
    #[arg(long, allow_hyphen_values = true)]
    temperature: String,

    /// Comma-separated times in seconds
    #[arg(long, default_value = "1e-3,1,1e3", allow_hyphen_values = true)]
    times: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

#[derive(Args)]
struct FiguresArgs {
    /// Which dataset to emit
    #[arg(value_enum)]
    which: FigureId,

    /// Snapshot times: t*kM values for fig2, omega*t phases for fig5
    #[arg(long, allow_hyphen_values = true)]
    times: Option<String>,

    /// Grid nodes per density snapshot (fig2, fig5)
    #[arg(long, default_value_t = figures::DEFAULT_POINTS)]
    points: usize,

    /// Temperature in K (fig3)
    #[arg(long, default_value = "300")]
    temperature: String,

    /// Mass sweep lower bound in Da (fig3)
    #[arg(long, default_value_t = 720.0)]
    mass_min_da: f64,

    /// Mass sweep upper bound in Da (fig3)
    #[arg(long, default_value_t = 6910.0)]
    mass_max_da: f64,

    /// Sample count for the fig3 mass sweep
    #[arg(long, default_value_t = 200)]
    sweep_points: usize,

    /// Temperature sweep lower bound in K (fig4)
    #[arg(long, default_value_t = 1.0)]
    t_min: f64,

    /// Temperature sweep upper bound in K (fig4)
    #[arg(long, default_value_t = 400.0)]
    t_max: f64,

    /// Temperature sweep sample count (fig4)
    #[arg(long, default_value_t = 400)]
    t_steps: usize,

    /// Comma-separated m/R ratios in kg/m (fig4)
    #[arg(long, default_value = "2e-15,3e-15")]
    ratios: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Ou,
    Coherent,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Analytic,
    Pde,
    Ensemble,
}

#[derive(Args)]
struct EvolveArgs {
    /// Trapped relaxation (ou) or coherent oscillation (coherent)
    #[arg(value_enum)]
    mode: ModeArg,

    /// Evaluation engine
    #[arg(long, value_enum)]
    engine: EngineArg,

    /// Release point over the stationary width
    #[arg(long = "x0-over-sigma", alias = "x0-over-sigma0", default_value_t = 2.0)]
    x0_over_sigma: f64,

    /// Snapshot times: t*kM for ou, omega*t phases for coherent
    #[arg(long, allow_hyphen_values = true)]
    times: Option<String>,

    /// Grid nodes per density snapshot
    #[arg(long, default_value_t = figures::DEFAULT_POINTS)]
    points: usize,

    /// Engine time step (defaults: half the pde stability bound, 0.01/kM
    /// for ensembles)
    #[arg(long)]
    dt: Option<f64>,

    /// Ensemble seed
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Ensemble size
    #[arg(long, default_value_t = 10_000)]
    n_trajectories: usize,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
    }
}

fn run(cli: Cli) -> Result<(), AppError> {
    let constants = if cli.natural_units {
        PhysicalConstants::natural()
    } else {
        PhysicalConstants::si()
    };
    let format = Format::from(cli.format);
    match &cli.command {
        Command::Duality(args) => cmd_duality(&cli, &constants, format, args),
        Command::Nogo(args) => cmd_nogo(&cli, &constants, format, args),
        Command::Figures(args) => cmd_figures(&cli, &constants, args),
        Command::Evolve(args) => cmd_evolve(&cli, args),
        Command::Catalog => {
            let rendered = render_catalog(&constants, format);
            deliver_report(&cli, "catalog", &rendered, |m| {
                m.param("format", format_name(cli.format));
            })
        }
    }
}

fn catalog_particle(constants: &PhysicalConstants, label: &str) -> Result<ParticleSpec, AppError> {
    molecule_catalog(constants)
        .into_iter()
        .map(|e| e.particle)
        .find(|p| p.label().eq_ignore_ascii_case(label))
        .ok_or_else(|| {
            AppError::flag(
                "--catalog",
                format!("unknown molecule '{label}' (have C60, PFNS10, TPPF152, GramicidinA)"),
            )
        })
}

fn cmd_duality(
    cli: &Cli,
    constants: &PhysicalConstants,
    format: Format,
    args: &DualityArgs,
) -> Result<(), AppError> {
    let temperature =
        units::parse_temperature(&args.temperature).map_err(|e| AppError::flag("--temperature", e))?;
    let particle = match (&args.catalog, &args.mass, &args.radius) {
        (Some(label), None, None) => catalog_particle(constants, label)?,
        (None, Some(mass), Some(radius)) => {
            let mass = units::parse_mass(mass, constants).map_err(|e| AppError::flag("--mass", e))?;
            let radius =
                units::parse_length(radius, "radius").map_err(|e| AppError::flag("--radius", e))?;
            ParticleSpec::new(mass, radius, "particle")?
        }
        _ => {
            return Err(AppError::usage(
                "provide either --catalog LABEL or both --mass and --radius",
            ))
        }
    };
    let report = duality_report(constants, &particle, temperature)?;
    let trap_diag = match (&args.shear_modulus, &args.viscosity) {
        (Some(g), Some(eta)) => {
            let g = units::parse_pressure(g, "shear modulus")
                .map_err(|e| AppError::flag("--shear-modulus", e))?;
            let eta = units::parse_viscosity(eta).map_err(|e| AppError::flag("--viscosity", e))?;
            let medium = MediumSpec::new(temperature, eta, g)?;
            let trap = trap_parameters(&particle, &medium)?;
            Some(TrapDiagnostics::new(constants, trap, g, eta, temperature)?)
        }
        _ => None,
    };
    let rendered = render_duality(&particle, temperature, &report, trap_diag.as_ref(), format);
    deliver_report(cli, "duality", &rendered, |m| {
        m.param("format", format_name(cli.format))
            .param("label", particle.label())
            .param("mass_kg", format!("{:e}", particle.mass()))
            .param("radius_m", format!("{:e}", particle.radius()))
            .param("temperature_k", temperature);
    })
}

fn cmd_nogo(
    cli: &Cli,
    constants: &PhysicalConstants,
    format: Format,
    args: &NogoArgs,
) -> Result<(), AppError> {
    let temperature =
        units::parse_temperature(&args.temperature).map_err(|e| AppError::flag("--temperature", e))?;
    let mass = match (&args.catalog, &args.mass) {
        (Some(label), None) => catalog_particle(constants, label)?.mass(),
        (None, Some(mass)) => {
            units::parse_mass(mass, constants).map_err(|e| AppError::flag("--mass", e))?
        }
        _ => return Err(AppError::usage("provide either --catalog LABEL or --mass")),
    };
    let times = units::parse_times(&args.times).map_err(|e| AppError::flag("--times", e))?;
    for &t in &times {
        if !(t > 0.0) {
            return Err(AppError::flag(
                "--times",
                format!("times must be > 0, got {t} (the required coefficient diverges at 0)"),
            ));
        }
    }
    let rows: Vec<(f64, f64, f64)> = times
        .iter()
        .map(|&t| {
            let d = required_diffusion(constants, mass, temperature, t)?;
            Ok((t, d, d * t))
        })
        .collect::<Result<_, browave::Error>>()?;
    let d_times_t = required_diffusion(constants, mass, temperature, 1.0)?;
    let rendered = render_nogo(&rows, d_times_t, format);
    deliver_report(cli, "nogo", &rendered, |m| {
        m.param("format", format_name(cli.format))
            .param("mass_kg", format!("{mass:e}"))
            .param("temperature_k", temperature)
            .param("times_s", args.times.clone());
    })
}

fn cmd_figures(cli: &Cli, constants: &PhysicalConstants, args: &FiguresArgs) -> Result<(), AppError> {
    let out = require_out(cli)?;
    let mut manifest = RunManifest::new("figures");
    manifest.param("which", figure_name(args.which));
    let rows = match args.which {
        FigureId::Fig2 => {
            let times = parse_or_default_times(&args.times, &FIG2_TIMES)?;
            manifest
                .param("times_km", join_times(&times))
                .param("points", args.points)
                .param("x0_over_sigma0", "2,4");
            figures::fig2_rows(&times, args.points)?
        }
        FigureId::Fig3 => {
            let temperature = units::parse_temperature(&args.temperature)
                .map_err(|e| AppError::flag("--temperature", e))?;
            manifest
                .param("temperature_k", temperature)
                .param("mass_min_da", args.mass_min_da)
                .param("mass_max_da", args.mass_max_da)
                .param("sweep_points", args.sweep_points);
            figures::fig3_rows(
                constants,
                temperature,
                args.mass_min_da,
                args.mass_max_da,
                args.sweep_points,
            )?
        }
        FigureId::Fig4 => {
            let ratios =
                units::parse_list(&args.ratios, "ratio").map_err(|e| AppError::flag("--ratios", e))?;
            if ratios.iter().any(|&r| r <= 0.0) {
                return Err(AppError::flag("--ratios", "ratios must be positive"));
            }
            manifest
                .param("t_min_k", args.t_min)
                .param("t_max_k", args.t_max)
                .param("t_steps", args.t_steps)
                .param("ratios_kg_per_m", join_times(&ratios));
            figures::fig4_rows(constants, args.t_min, args.t_max, args.t_steps, &ratios)?
        }
        FigureId::Fig5 => {
            let phases = parse_or_default_times(&args.times, &fig5_phases())?;
            manifest
                .param("phases_wt", join_times(&phases))
                .param("points", args.points)
                .param("x0_over_sigma", "2,4");
            figures::fig5_rows(&phases, args.points)?
        }
    };
    write_file(&out, &render_rows(&rows))?;
    manifest.output(&out);
    let manifest_path = manifest.write_sidecar(&out)?;
    println!("wrote {}", out.display());
    println!("wrote {}", manifest_path.display());
    Ok(())
}

fn cmd_evolve(cli: &Cli, args: &EvolveArgs) -> Result<(), AppError> {
    let out = require_out(cli)?;
    let mode = match args.mode {
        ModeArg::Ou => Mode::Ou,
        ModeArg::Coherent => Mode::Coherent,
    };
    let engine = match args.engine {
        EngineArg::Analytic => Engine::Analytic,
        EngineArg::Pde => Engine::Pde,
        EngineArg::Ensemble => Engine::Ensemble,
    };
    let default_times: Vec<f64> = match mode {
        Mode::Ou => FIG2_TIMES.to_vec(),
        Mode::Coherent => fig5_phases(),
    };
    let times = parse_or_default_times(&args.times, &default_times)?;
    let opts = EvolveOptions {
        mode,
        engine,
        x0_over_sigma: args.x0_over_sigma,
        times: times.clone(),
        points: args.points,
        dt: args.dt,
        seed: args.seed,
        n_trajectories: args.n_trajectories,
    };
    let output = run_evolve(&opts)?;

    let moments_path = moments_path(&out);
    write_file(&out, &render_rows(&output.rows))?;
    write_file(&moments_path, &render_moments(&output.moments))?;

    let mut manifest = RunManifest::new("evolve");
    manifest
        .param("mode", mode_name(args.mode))
        .param("engine", engine_name(args.engine))
        .param("x0_over_sigma", args.x0_over_sigma)
        .param("times", join_times(&times))
        .param("points", args.points);
    if let Some(dt) = output.dt_used {
        manifest.param("dt", format!("{dt:e}"));
    }
    if engine == Engine::Ensemble {
        manifest.param("n_trajectories", args.n_trajectories);
        manifest.seed = Some(args.seed);
    }
    manifest.output(&out);
    manifest.output(&moments_path);
    let manifest_path = manifest.write_sidecar(&out)?;
    println!("wrote {}", out.display());
    println!("wrote {}", moments_path.display());
    println!("wrote {}", manifest_path.display());
    Ok(())
}

/// Print to stdout, or write to --out plus a manifest sidecar.
fn deliver_report(
    cli: &Cli,
    command: &str,
    rendered: &str,
    fill: impl FnOnce(&mut RunManifest),
) -> Result<(), AppError> {
    match &cli.out {
        None => {
            print!("{rendered}");
            Ok(())
        }
        Some(out) => {
            write_file(out, rendered)?;
            let mut manifest = RunManifest::new(command);
            fill(&mut manifest);
            manifest.output(out);
            let manifest_path = manifest.write_sidecar(out)?;
            println!("wrote {}", out.display());
            println!("wrote {}", manifest_path.display());
            Ok(())
        }
    }
}

fn require_out(cli: &Cli) -> Result<PathBuf, AppError> {
    cli.out
        .clone()
        .ok_or_else(|| AppError::flag("--out", "this command writes a dataset and needs a path"))
}

fn moments_path(out: &Path) -> PathBuf {
    match out.extension() {
        Some(ext) => out.with_extension(format!("moments.{}", ext.to_string_lossy())),
        None => out.with_extension("moments"),
    }
}

fn parse_or_default_times(arg: &Option<String>, default: &[f64]) -> Result<Vec<f64>, AppError> {
    match arg {
        Some(s) => units::parse_times(s).map_err(|e| AppError::flag("--times", e)),
        None => Ok(default.to_vec()),
    }
}

fn join_times(times: &[f64]) -> String {
    times
        .iter()
        .map(|t| format!("{t:e}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn format_name(f: FormatArg) -> &'static str {
    match f {
        FormatArg::Text => "text",
        FormatArg::Json => "json",
        FormatArg::Csv => "csv",
    }
}

fn figure_name(f: FigureId) -> &'static str {
    match f {
        FigureId::Fig2 => "fig2",
        FigureId::Fig3 => "fig3",
        FigureId::Fig4 => "fig4",
        FigureId::Fig5 => "fig5",
    }
}

fn mode_name(m: ModeArg) -> &'static str {
    match m {
        ModeArg::Ou => "ou",
        ModeArg::Coherent => "coherent",
    }
}

fn engine_name(e: EngineArg) -> &'static str {
    match e {
        EngineArg::Analytic => "analytic",
        EngineArg::Pde => "pde",
        EngineArg::Ensemble => "ensemble",
    }
}
