//! The `evolve` drivers: one mode (trapped relaxation or coherent
//! oscillation) evaluated by one engine (closed form, PDE solve, or seeded
//! ensemble), all emitting the same long-format density rows and a moments
//! table on the same nondimensional grid.

use browave::analytic::{coherent_density, coherent_wavefunction, ou_state};
use browave::fokker_planck::solve_fokker_planck;
use browave::grid::{field_moments, GridField, GridSpec};
use browave::langevin::{trapped_snapshots, SimConfig};
use browave::schrodinger::solve_schrodinger;
use browave::PhysicalConstants;

use crate::csvout::Row;
use crate::figures::{
    coherent_analytic_rows, coherent_unit_spec, density_grid, ou_analytic_rows, unit_trap,
};
use crate::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ou,
    Coherent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    Pde,
    Ensemble,
}

#[derive(Debug, Clone)]
pub struct EvolveOptions {
    pub mode: Mode,
    pub engine: Engine,
    /// Release point over the stationary (or coherent) width.
    pub x0_over_sigma: f64,
    /// Times: t·kM for the trapped mode, ωt for the coherent mode.
    pub times: Vec<f64>,
    pub points: usize,
    /// Solver or ensemble step; engine-specific default when absent.
    pub dt: Option<f64>,
    pub seed: u64,
    pub n_trajectories: usize,
}

/// Density rows plus a `(t, mean, variance)` table, one entry per snapshot.
#[derive(Debug, Clone)]
pub struct EvolveOutput {
    pub rows: Vec<Row>,
    pub moments: Vec<(f64, f64, f64)>,
    /// The dt the engine actually used, if it stepped.
    pub dt_used: Option<f64>,
}

pub fn run_evolve(opts: &EvolveOptions) -> Result<EvolveOutput, AppError> {
    if opts.times.is_empty() {
        return Err(AppError::flag("--times", "need at least one time"));
    }
    match (opts.mode, opts.engine) {
        (Mode::Ou, Engine::Analytic) => ou_analytic(opts),
        (Mode::Ou, Engine::Pde) => ou_pde(opts),
        (Mode::Ou, Engine::Ensemble) => ou_ensemble(opts),
        (Mode::Coherent, Engine::Analytic) => coherent_analytic(opts),
        (Mode::Coherent, Engine::Pde) => coherent_pde(opts),
        (Mode::Coherent, Engine::Ensemble) => Err(AppError::usage(
            "--engine ensemble is not valid for the coherent mode (the undamped trap has no \
             stochastic description here); use analytic or pde",
        )),
    }
}

fn ou_analytic(opts: &EvolveOptions) -> Result<EvolveOutput, AppError> {
    let constants = PhysicalConstants::natural();
    let trap = unit_trap();
    let rows = ou_analytic_rows(opts.x0_over_sigma, &opts.times, opts.points)?;
    let moments = opts
        .times
        .iter()
        .map(|&t| {
            let s = ou_state(&constants, &trap, 1.0, opts.x0_over_sigma, t)?;
            Ok((t, s.mean(), s.variance()))
        })
        .collect::<Result<_, AppError>>()?;
    Ok(EvolveOutput {
        rows,
        moments,
        dt_used: None,
    })
}

fn coherent_analytic(opts: &EvolveOptions) -> Result<EvolveOutput, AppError> {
    let spec = coherent_unit_spec(opts.x0_over_sigma)?;
    let rows = coherent_analytic_rows(opts.x0_over_sigma, &opts.times, opts.points)?;
    let moments = opts
        .times
        .iter()
        .map(|&wt| {
            let s = coherent_density(&spec, wt / spec.omega());
            (wt, s.mean(), s.variance())
        })
        .collect();
    Ok(EvolveOutput {
        rows,
        moments,
        dt_used: None,
    })
}

fn ou_pde(opts: &EvolveOptions) -> Result<EvolveOutput, AppError> {
    let constants = PhysicalConstants::natural();
    let trap = unit_trap();
    let grid = density_grid(opts.x0_over_sigma, opts.points)?;
    validate_positive_times(&opts.times)?;
    let t_end = max_time(&opts.times);
    // Half the diffusion stability bound (D = 1 in these units).
    let dt = opts.dt.unwrap_or(0.125 * grid.dx() * grid.dx());
    let report = solve_fokker_planck(
        &constants,
        &trap,
        1.0,
        opts.x0_over_sigma,
        t_end,
        dt,
        grid,
        &opts.times,
    )?;
    let series = format!("x0_over_sigma0={}", opts.x0_over_sigma);
    let mut rows = Vec::new();
    let mut moments = Vec::new();
    for (t, field) in &report.snapshots {
        push_field_rows(&mut rows, &series, *t, field);
        let (_, mean, var) = field_moments(field);
        moments.push((*t, mean, var));
    }
    Ok(EvolveOutput {
        rows,
        moments,
        dt_used: Some(dt),
    })
}

fn coherent_pde(opts: &EvolveOptions) -> Result<EvolveOutput, AppError> {
    let constants = PhysicalConstants::natural();
    let spec = coherent_unit_spec(opts.x0_over_sigma)?;
    let omega = spec.omega();
    let grid = density_grid(opts.x0_over_sigma, opts.points)?;
    for &wt in &opts.times {
        if wt < 0.0 {
            return Err(AppError::flag(
                "--times",
                format!("oscillator phases must be >= 0, got {wt}"),
            ));
        }
    }
    // Phases map to solver times t = ωt/ω.
    let sim_times: Vec<f64> = opts.times.iter().map(|wt| wt / omega).collect();
    let t_end = max_time(&sim_times).max(f64::MIN_POSITIVE);
    let period = std::f64::consts::TAU / omega;
    let dt = opts.dt.unwrap_or(period / 4096.0);
    let psi0 = coherent_wavefunction(&spec, 0.0, grid)?;
    let report = solve_schrodinger(&constants, spec.mass(), omega, &psi0, t_end, dt, &sim_times)?;
    let series = format!("x0_over_sigma={}", opts.x0_over_sigma);
    let mut rows = Vec::new();
    let mut moments = Vec::new();
    for (t, field) in &report.snapshots {
        let wt = omega * t;
        push_field_rows(&mut rows, &series, wt, field);
        let (_, mean, var) = field_moments(field);
        moments.push((wt, mean, var));
    }
    Ok(EvolveOutput {
        rows,
        moments,
        dt_used: Some(dt),
    })
}

fn ou_ensemble(opts: &EvolveOptions) -> Result<EvolveOutput, AppError> {
    let constants = PhysicalConstants::natural();
    let trap = unit_trap();
    let grid = density_grid(opts.x0_over_sigma, opts.points)?;
    validate_positive_times(&opts.times)?;
    if opts.n_trajectories < 2 {
        return Err(AppError::flag("--n-trajectories", "need at least 2"));
    }
    let dt = opts.dt.unwrap_or(0.01);
    let t_end = max_time(&opts.times);
    let n_steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    let steps: Vec<usize> = opts
        .times
        .iter()
        .map(|&t| ((t / dt).round() as usize).min(n_steps))
        .collect();
    let config = SimConfig {
        dt,
        n_steps,
        n_trajectories: opts.n_trajectories,
        seed: opts.seed,
        x0: opts.x0_over_sigma,
    };
    let snap = trapped_snapshots(&constants, &trap, 1.0, &config, &steps)?;
    let series = format!("x0_over_sigma0={}", opts.x0_over_sigma);
    let mut rows = Vec::new();
    let mut moments = Vec::new();
    for (k, &step) in snap.snapshot_steps.iter().enumerate() {
        let t = snap.snapshot_times[k];
        let density = histogram_density(&snap.positions[k], grid);
        for (i, &value) in density.iter().enumerate() {
            rows.push(Row {
                series: series.clone(),
                t_or_param: t,
                x: grid.x(i),
                value,
            });
        }
        moments.push((t, snap.stats.mean_t[step], snap.stats.variance_t[step]));
    }
    Ok(EvolveOutput {
        rows,
        moments,
        dt_used: Some(dt),
    })
}

fn push_field_rows(rows: &mut Vec<Row>, series: &str, t: f64, field: &GridField) {
    let density = field.density();
    let spec = field.spec();
    for (i, &value) in density.iter().enumerate() {
        rows.push(Row {
            series: series.to_string(),
            t_or_param: t,
            x: spec.x(i),
            value,
        });
    }
}

/// Bin positions into a density on the grid (bins centered on nodes);
/// samples outside the span are dropped, which costs only the far tail.
fn histogram_density(positions: &[f64], grid: GridSpec) -> Vec<f64> {
    let dx = grid.dx();
    let mut counts = vec![0u64; grid.n_points];
    for &x in positions {
        let idx = ((x - grid.x_min) / dx).round();
        if idx >= 0.0 && idx < grid.n_points as f64 {
            counts[idx as usize] += 1;
        }
    }
    let weight = 1.0 / (positions.len() as f64 * dx);
    counts.iter().map(|&c| c as f64 * weight).collect()
}

fn validate_positive_times(times: &[f64]) -> Result<(), AppError> {
    for &t in times {
        if !(t > 0.0) {
            return Err(AppError::flag(
                "--times",
                format!("trapped-relaxation times must be > 0, got {t}"),
            ));
        }
    }
    Ok(())
}

fn max_time(times: &[f64]) -> f64 {
    times.iter().cloned().fold(f64::MIN_POSITIVE, f64::max)
}
