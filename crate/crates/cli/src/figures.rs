//! Figure dataset builders. Axes are nondimensional the way the source
//! curves are usually plotted: positions in units of the stationary width,
//! times in units of the relaxation time (t·kM) or the oscillator phase
//! (ωt). Outputs are long-format rows, never images.

use browave::analytic::{coherent_density, ou_state, CoherentStateSpec};
use browave::duality::{de_broglie_wavelength, required_shear_modulus};
use browave::grid::GridSpec;
use browave::model::{ParticleSpec, TrapParameters};
use browave::PhysicalConstants;

use crate::csvout::Row;
use crate::AppError;

/// Default snapshot times t·kM for the trapped-relaxation figure: early,
/// one and two relaxation times, and effectively stationary.
pub const FIG2_TIMES: [f64; 4] = [0.05, 1.0, 2.0, 50.0];

/// Default oscillator phases ωt for the coherent-state figure: eighths of a
/// full period.
pub fn fig5_phases() -> Vec<f64> {
    (0..8).map(|k| k as f64 * std::f64::consts::FRAC_PI_4).collect()
}

/// Default node count for density grids.
pub const DEFAULT_POINTS: usize = 2401;

/// The common density grid: x/σ spanning ±(x0 + 8) so both solvers accept
/// the same geometry.
pub fn density_grid(x0_over_sigma: f64, points: usize) -> Result<GridSpec, AppError> {
    let reach = x0_over_sigma.abs() + 8.0;
    GridSpec::new(-reach, reach, points).map_err(|e| AppError::Usage(e.to_string()))
}

/// The nondimensional trap every figure run uses: kM = 1 and σ0 = 1 at
/// T = 1 in natural units.
pub fn unit_trap() -> TrapParameters {
    TrapParameters::from_parts(1.0, 1.0, 1.0).expect("unit trap parameters are valid")
}

/// Density rows of the trapped relaxation for one release point, evaluated
/// from the closed-form solution.
pub fn ou_analytic_rows(
    x0_over_sigma0: f64,
    times: &[f64],
    points: usize,
) -> Result<Vec<Row>, AppError> {
    let constants = PhysicalConstants::natural();
    let trap = unit_trap();
    let grid = density_grid(x0_over_sigma0, points)?;
    let series = format!("x0_over_sigma0={x0_over_sigma0}");
    let mut rows = Vec::with_capacity(times.len() * points);
    for &t in times {
        if !(t > 0.0) {
            return Err(AppError::flag(
                "--times",
                format!("trapped-relaxation times must be > 0, got {t}"),
            ));
        }
        let state = ou_state(&constants, &trap, 1.0, x0_over_sigma0, t)?;
        for i in 0..points {
            let x = grid.x(i);
            rows.push(Row {
                series: series.clone(),
                t_or_param: t,
                x,
                value: state.pdf(x),
            });
        }
    }
    Ok(rows)
}

/// Density rows of the coherent state for one release point. Times are
/// oscillator phases ωt; the natural-unit spec with ω = 1/2 makes σ = 1.
pub fn coherent_analytic_rows(
    x0_over_sigma: f64,
    phases: &[f64],
    points: usize,
) -> Result<Vec<Row>, AppError> {
    let spec = coherent_unit_spec(x0_over_sigma)?;
    let grid = density_grid(x0_over_sigma, points)?;
    let series = format!("x0_over_sigma={x0_over_sigma}");
    let mut rows = Vec::with_capacity(phases.len() * points);
    for &wt in phases {
        if wt < 0.0 {
            return Err(AppError::flag(
                "--times",
                format!("oscillator phases must be >= 0, got {wt}"),
            ));
        }
        let state = coherent_density(&spec, wt / spec.omega());
        for i in 0..points {
            let x = grid.x(i);
            rows.push(Row {
                series: series.clone(),
                t_or_param: wt,
                x,
                value: state.pdf(x),
            });
        }
    }
    Ok(rows)
}

/// Natural-unit coherent state with unit width: ħ = m = 1, ω = 1/2 gives
/// σ² = ħ/(2mω) = 1.
pub fn coherent_unit_spec(x0_over_sigma: f64) -> Result<CoherentStateSpec, AppError> {
    CoherentStateSpec::new(&PhysicalConstants::natural(), 1.0, 0.5, x0_over_sigma)
        .map_err(AppError::from)
}

/// Trapped relaxation densities for x0/σ0 = 2 and 4.
pub fn fig2_rows(times: &[f64], points: usize) -> Result<Vec<Row>, AppError> {
    let mut rows = ou_analytic_rows(2.0, times, points)?;
    rows.extend(ou_analytic_rows(4.0, times, points)?);
    Ok(rows)
}

/// de Broglie wavelength against mass in daltons at fixed temperature.
pub fn fig3_rows(
    constants: &PhysicalConstants,
    temperature: f64,
    mass_min_da: f64,
    mass_max_da: f64,
    points: usize,
) -> Result<Vec<Row>, AppError> {
    if !(mass_max_da > mass_min_da) || !(mass_min_da > 0.0) {
        return Err(AppError::usage(format!(
            "--mass-min-da/--mass-max-da: need 0 < min < max, got {mass_min_da}..{mass_max_da}"
        )));
    }
    if points < 2 {
        return Err(AppError::usage("--points: need at least 2".to_string()));
    }
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let mass_da =
            mass_min_da + (mass_max_da - mass_min_da) * i as f64 / (points - 1) as f64;
        let lambda =
            de_broglie_wavelength(constants, mass_da * constants.dalton, temperature)?;
        rows.push(Row {
            series: "lambda".to_string(),
            t_or_param: temperature,
            x: mass_da,
            value: lambda,
        });
    }
    Ok(rows)
}

/// Required shear modulus against temperature for a set of m/R ratios.
pub fn fig4_rows(
    constants: &PhysicalConstants,
    t_min: f64,
    t_max: f64,
    t_steps: usize,
    ratios: &[f64],
) -> Result<Vec<Row>, AppError> {
    if !(t_max > t_min) || !(t_min > 0.0) {
        return Err(AppError::usage(format!(
            "--t-min/--t-max: need 0 < min < max, got {t_min}..{t_max}"
        )));
    }
    if t_steps < 2 {
        return Err(AppError::usage("--t-steps: need at least 2".to_string()));
    }
    let mut rows = Vec::with_capacity(t_steps * ratios.len());
    for &ratio in ratios {
        // The radius cancels out of G for fixed m/R; any positive one works.
        let particle = ParticleSpec::new(ratio * 1e-9, 1e-9, format!("m_over_r={ratio:e}"))
            .map_err(AppError::from)?;
        let series = format!("m_over_r={ratio:e}");
        for i in 0..t_steps {
            let temperature = t_min + (t_max - t_min) * i as f64 / (t_steps - 1) as f64;
            rows.push(Row {
                series: series.clone(),
                t_or_param: ratio,
                x: temperature,
                value: required_shear_modulus(constants, &particle, temperature)?,
            });
        }
    }
    Ok(rows)
}

/// Coherent-state oscillation densities for x0/σ = 2 and 4.
pub fn fig5_rows(phases: &[f64], points: usize) -> Result<Vec<Row>, AppError> {
    let mut rows = coherent_analytic_rows(2.0, phases, points)?;
    rows.extend(coherent_analytic_rows(4.0, phases, points)?);
    Ok(rows)
}
