//! Crank-Nicolson integration of the drift-diffusion equation
//! ∂p/∂t = kM·∂x(x·p) + D·∂²p/∂x² for the overdamped trapped particle
//! (kM = 0 recovers free diffusion).
//!
//! The spatial operator is discretized in conservative flux form with
//! centered interface values and zero-flux boundaries, so the discrete mass
//! is conserved to solver roundoff.

use crate::grid::{trapezoid, GridField, GridSpec};
use crate::model::TrapParameters;
use crate::{Error, PhysicalConstants, Result};

/// Output of a PDE solve: the final field, any requested snapshots (tagged
/// with the actual step time they were taken at), and the change in
/// trapezoid norm over the run. For a density solve the drift is a mass
/// drift; for a wavefunction solve it is a norm drift. Both fields carry the
/// same value, named for the quantity they watch.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub final_field: GridField,
    pub snapshots: Vec<(f64, GridField)>,
    pub mass_drift: f64,
    pub norm_drift: f64,
}

/// Negative densities below this value abort the solve.
const BLOWUP_TOL: f64 = -1e-6;

/// Solve the trapped drift-diffusion equation from a point release at `x0`,
/// which is represented by the documented narrow-Gaussian surrogate of width
/// σ_init = max(3·dx, σ0/100) (3·dx when the trap is absent).
///
/// Stability preconditions: dt ≤ 0.25·dx²/D and, when trapped,
/// dt ≤ 0.05/kM. The grid must span ±(|x0| + 8·σ0) for trapped runs and
/// ±(|x0| + 8·√(2·D·t_end)) for free ones.
#[allow(clippy::too_many_arguments)]
pub fn solve_fokker_planck(
    constants: &PhysicalConstants,
    trap: &TrapParameters,
    temperature: f64,
    x0: f64,
    t_end: f64,
    dt: f64,
    grid: GridSpec,
    snapshot_times: &[f64],
) -> Result<SolveReport> {
    if !(temperature > 0.0) {
        return Err(Error::domain(format!(
            "temperature must be > 0, got {temperature}"
        )));
    }
    if !(t_end > 0.0) || !(dt > 0.0) {
        return Err(Error::domain(format!(
            "t_end and dt must be > 0, got t_end = {t_end}, dt = {dt}"
        )));
    }
    let km = trap.relaxation_rate_km;
    let diffusion = constants.boltzmann_kb * temperature * trap.mobility;
    if !(diffusion > 0.0) {
        return Err(Error::domain(format!(
            "diffusion coefficient must be > 0, got {diffusion}"
        )));
    }
    let dx = grid.dx();
    let dt_diffusion = 0.25 * dx * dx / diffusion;
    if dt > dt_diffusion {
        return Err(Error::UnstableTimestep {
            dt,
            bound: dt_diffusion,
            rule: "dt <= 0.25*dx^2/D",
        });
    }
    if km > 0.0 && dt > 0.05 / km {
        return Err(Error::UnstableTimestep {
            dt,
            bound: 0.05 / km,
            rule: "dt <= 0.05/kM",
        });
    }

    // Span requirement and the delta-surrogate width.
    let sigma0_sq = if trap.stiffness_k > 0.0 {
        constants.boltzmann_kb * temperature / trap.stiffness_k
    } else {
        f64::INFINITY
    };
    let reach = if sigma0_sq.is_finite() {
        x0.abs() + 8.0 * sigma0_sq.sqrt()
    } else {
        x0.abs() + 8.0 * (2.0 * diffusion * t_end).sqrt()
    };
    grid.require_span(-reach, reach)?;
    let sigma_init = if sigma0_sq.is_finite() {
        (3.0 * dx).max(sigma0_sq.sqrt() / 100.0)
    } else {
        3.0 * dx
    };

    let n_steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    let dt = t_end / n_steps as f64;
    let snapshot_plan = plan_snapshots(snapshot_times, dt, n_steps, t_end)?;

    // Initial condition: normalized narrow Gaussian at x0.
    let init = GridField::density_from_fn(grid, |x| {
        let z = (x - x0) / sigma_init;
        (-0.5 * z * z).exp()
    })?;
    let mut p = init.density();
    let initial_norm = trapezoid(&p, dx);

    let op = FluxOperator::new(grid, km, diffusion);
    let stepper = CrankNicolson::new(&op, dt);

    let mut snapshots: Vec<(f64, GridField)> = Vec::new();
    let emit = |step: usize, p: &[f64], snapshots: &mut Vec<(f64, GridField)>| -> Result<()> {
        for _ in snapshot_plan.iter().filter(|&&s| s == step) {
            let t = step as f64 * dt;
            snapshots.push((t, density_snapshot(grid, p)?));
        }
        Ok(())
    };

    emit(0, &p, &mut snapshots)?;
    let mut rhs = vec![0.0; grid.n_points];
    for step in 1..=n_steps {
        stepper.advance(&mut p, &mut rhs);
        let min = p.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < BLOWUP_TOL {
            return Err(Error::NegativeDensity {
                t: step as f64 * dt,
                min,
            });
        }
        emit(step, &p, &mut snapshots)?;
    }

    let drift = (trapezoid(&p, dx) - initial_norm).abs();
    Ok(SolveReport {
        final_field: density_snapshot(grid, &p)?,
        snapshots,
        mass_drift: drift,
        norm_drift: drift,
    })
}

/// Map requested snapshot times to step indices (nearest step).
pub(crate) fn plan_snapshots(
    times: &[f64],
    dt: f64,
    n_steps: usize,
    t_end: f64,
) -> Result<Vec<usize>> {
    times
        .iter()
        .map(|&t| {
            if t < 0.0 || t > t_end * (1.0 + 1e-9) + dt {
                return Err(Error::domain(format!(
                    "snapshot time {t} outside [0, {t_end}]"
                )));
            }
            Ok(((t / dt).round() as usize).min(n_steps))
        })
        .collect()
}

fn density_snapshot(grid: GridSpec, raw: &[f64]) -> Result<GridField> {
    // Discretization can leave values slightly below zero (bounded by the
    // blowup check); clip them before handing the field out.
    let clipped: Vec<f64> = raw.iter().map(|&v| v.max(0.0)).collect();
    GridField::density_from_values(grid, clipped)
}

/// Tridiagonal spatial operator A with dp/dt = A·p, assembled from interface
/// fluxes J_{i+1/2} = v_{i+1/2}·(p_i + p_{i+1})/2 - D·(p_{i+1} - p_i)/dx
/// with drift velocity v(x) = -kM·x and J = 0 at both boundaries.
struct FluxOperator {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
}

impl FluxOperator {
    fn new(grid: GridSpec, km: f64, diffusion: f64) -> Self {
        let n = grid.n_points;
        let dx = grid.dx();
        let d_over_dx = diffusion / dx;
        // v at the interface i+1/2 for i in 0..n-1
        let v_face: Vec<f64> = (0..n - 1)
            .map(|i| -km * 0.5 * (grid.x(i) + grid.x(i + 1)))
            .collect();
        let mut lower = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for i in 0..n {
            // Flux out through the right face (absent at the last node).
            if i < n - 1 {
                diag[i] -= (0.5 * v_face[i] + d_over_dx) / dx;
                upper[i] -= (0.5 * v_face[i] - d_over_dx) / dx;
            }
            // Flux in through the left face (absent at the first node).
            if i > 0 {
                lower[i] += (0.5 * v_face[i - 1] + d_over_dx) / dx;
                diag[i] += (0.5 * v_face[i - 1] - d_over_dx) / dx;
            }
        }
        FluxOperator { lower, diag, upper }
    }
}

/// Precomputed Crank-Nicolson step: rhs = (I + dt/2·A)·p, then solve
/// (I - dt/2·A)·p' = rhs with a prefactored Thomas sweep.
struct CrankNicolson {
    // Explicit half (I + dt/2 A).
    b_lower: Vec<f64>,
    b_diag: Vec<f64>,
    b_upper: Vec<f64>,
    // Prefactored implicit half.
    c_prime: Vec<f64>,
    inv_m: Vec<f64>,
    m_lower: Vec<f64>,
}

impl CrankNicolson {
    fn new(op: &FluxOperator, dt: f64) -> Self {
        let n = op.diag.len();
        let h = 0.5 * dt;
        let b_lower: Vec<f64> = op.lower.iter().map(|a| h * a).collect();
        let b_diag: Vec<f64> = op.diag.iter().map(|a| 1.0 + h * a).collect();
        let b_upper: Vec<f64> = op.upper.iter().map(|a| h * a).collect();
        let m_lower: Vec<f64> = op.lower.iter().map(|a| -h * a).collect();
        let m_diag: Vec<f64> = op.diag.iter().map(|a| 1.0 - h * a).collect();
        let m_upper: Vec<f64> = op.upper.iter().map(|a| -h * a).collect();
        let mut c_prime = vec![0.0; n];
        let mut inv_m = vec![0.0; n];
        inv_m[0] = 1.0 / m_diag[0];
        c_prime[0] = m_upper[0] * inv_m[0];
        for i in 1..n {
            let denom = m_diag[i] - m_lower[i] * c_prime[i - 1];
            inv_m[i] = 1.0 / denom;
            if i < n - 1 {
                c_prime[i] = m_upper[i] * inv_m[i];
            }
        }
        CrankNicolson {
            b_lower,
            b_diag,
            b_upper,
            c_prime,
            inv_m,
            m_lower,
        }
    }

    fn advance(&self, p: &mut [f64], rhs: &mut [f64]) {
        let n = p.len();
        rhs[0] = self.b_diag[0] * p[0] + self.b_upper[0] * p[1];
        for i in 1..n - 1 {
            rhs[i] =
                self.b_lower[i] * p[i - 1] + self.b_diag[i] * p[i] + self.b_upper[i] * p[i + 1];
        }
        rhs[n - 1] = self.b_lower[n - 1] * p[n - 2] + self.b_diag[n - 1] * p[n - 1];
        // Thomas forward sweep into p (reused as the d' buffer), then back
        // substitution.
        p[0] = rhs[0] * self.inv_m[0];
        for i in 1..n {
            p[i] = (rhs[i] - self.m_lower[i] * p[i - 1]) * self.inv_m[i];
        }
        for i in (0..n - 1).rev() {
            p[i] -= self.c_prime[i] * p[i + 1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{free_diffusion_state, ou_state};
    use crate::grid::{field_moments, l1_distance};
    use crate::model::GaussianState;

    fn natural() -> PhysicalConstants {
        PhysicalConstants::natural()
    }

    fn unit_trap() -> TrapParameters {
        TrapParameters::from_parts(1.0, 1.0, 1.0).unwrap()
    }

    fn free_trap() -> TrapParameters {
        TrapParameters::from_parts(0.0, 1.0, 1.0).unwrap()
    }

    fn exact_field(grid: GridSpec, state: GaussianState) -> GridField {
        GridField::density_from_fn(grid, |x| state.pdf(x)).unwrap()
    }

    #[test]
    fn trapped_solution_approaches_ou_density() {
        // Moderate resolution; the full-resolution oracle run lives in the
        // acceptance suite.
        let c = natural();
        let grid = GridSpec::new(-12.0, 12.0, 769).unwrap();
        let dx = grid.dx();
        let dt = 0.125 * dx * dx;
        let report = solve_fokker_planck(&c, &unit_trap(), 1.0, 2.0, 2.0, dt, grid, &[0.5, 1.0])
            .unwrap();
        assert!(report.mass_drift < 1e-8, "drift = {:e}", report.mass_drift);
        for (t, field) in &report.snapshots {
            let exact = exact_field(grid, ou_state(&c, &unit_trap(), 1.0, 2.0, *t).unwrap());
            let l1 = l1_distance(field, &exact).unwrap();
            assert!(l1 < 5e-3, "t = {t}: L1 = {l1}");
        }
        let exact_end = exact_field(grid, ou_state(&c, &unit_trap(), 1.0, 2.0, 2.0).unwrap());
        assert!(l1_distance(&report.final_field, &exact_end).unwrap() < 5e-3);
    }

    #[test]
    fn free_limit_matches_diffusion_density() {
        // The L1 floor is set by the delta surrogate width 3*dx, so the grid
        // must be fine enough for sigma_init^2 << 2Dt.
        let c = natural();
        let grid = GridSpec::new(-16.0, 16.0, 2049).unwrap();
        let dx = grid.dx();
        let dt = 0.2 * dx * dx;
        let report =
            solve_fokker_planck(&c, &free_trap(), 1.0, 0.0, 1.0, dt, grid, &[]).unwrap();
        let exact = exact_field(grid, free_diffusion_state(1.0, 1.0).unwrap());
        let l1 = l1_distance(&report.final_field, &exact).unwrap();
        assert!(l1 < 1e-3, "L1 = {l1}");
    }

    #[test]
    fn long_run_reaches_equilibrium_moments() {
        let c = natural();
        let grid = GridSpec::new(-10.5, 10.5, 337).unwrap();
        let dx = grid.dx();
        let dt = 0.25 * dx * dx;
        let report =
            solve_fokker_planck(&c, &unit_trap(), 1.0, 2.0, 50.0, dt, grid, &[]).unwrap();
        let (_, mean, var) = field_moments(&report.final_field);
        assert!(mean.abs() < 1e-6, "mean = {mean:e}");
        assert!((var - 1.0).abs() < 5e-3, "variance = {var}");
        assert!(report.mass_drift < 1e-8);
    }

    #[test]
    fn snapshots_carry_nearest_step_times() {
        let c = natural();
        let grid = GridSpec::new(-12.0, 12.0, 257).unwrap();
        let dx = grid.dx();
        let dt = 0.2 * dx * dx;
        let report = solve_fokker_planck(&c, &unit_trap(), 1.0, 2.0, 0.5, dt, grid, &[0.0, 0.25])
            .unwrap();
        assert_eq!(report.snapshots.len(), 2);
        assert_eq!(report.snapshots[0].0, 0.0);
        assert!((report.snapshots[1].0 - 0.25).abs() <= dt);
    }

    #[test]
    fn positivity_holds_at_snapshots() {
        let c = natural();
        let grid = GridSpec::new(-12.0, 12.0, 513).unwrap();
        let dx = grid.dx();
        let dt = 0.2 * dx * dx;
        let report =
            solve_fokker_planck(&c, &unit_trap(), 1.0, 2.0, 1.0, dt, grid, &[0.1, 0.5]).unwrap();
        for (_, field) in &report.snapshots {
            assert!(field.density().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn unstable_dt_rejected() {
        let c = natural();
        let grid = GridSpec::new(-12.0, 12.0, 513).unwrap();
        let dx = grid.dx();
        let err = solve_fokker_planck(
            &c,
            &unit_trap(),
            1.0,
            2.0,
            1.0,
            dx * dx, // 4x the diffusion bound
            grid,
            &[],
        );
        assert!(matches!(err, Err(Error::UnstableTimestep { .. })));
    }

    #[test]
    fn undersized_grid_rejected() {
        let c = natural();
        let grid = GridSpec::new(-5.0, 5.0, 257).unwrap();
        let dx = grid.dx();
        let err = solve_fokker_planck(&c, &unit_trap(), 1.0, 2.0, 1.0, 0.2 * dx * dx, grid, &[]);
        assert!(matches!(err, Err(Error::UndersizedGrid { .. })));
    }

    #[test]
    fn si_round_trip_matches_closed_form() {
        // Optical-tweezers scale: 100 nm bead in water-like viscosity with a
        // soft elastic trap; confirms the unit plumbing end to end.
        let c = PhysicalConstants::si();
        let particle = crate::model::ParticleSpec::new(1e-18, 1e-7, "bead").unwrap();
        let medium = crate::model::MediumSpec::new(293.0, 1e-3, 1e-6 / (6.0 * std::f64::consts::PI * 1e-7)).unwrap();
        let trap = crate::model::trap_parameters(&particle, &medium).unwrap();
        assert!((trap.stiffness_k - 1e-6).abs() / 1e-6 < 1e-12);
        let sigma0 = (c.boltzmann_kb * 293.0 / trap.stiffness_k).sqrt();
        let x0 = 2.0 * sigma0;
        let grid = GridSpec::new(-(x0 + 8.0 * sigma0), x0 + 8.0 * sigma0, 513).unwrap();
        let dx = grid.dx();
        let diffusion = c.boltzmann_kb * 293.0 * trap.mobility;
        let dt = 0.2 * dx * dx / diffusion;
        let t_end = 1.0 / trap.relaxation_rate_km;
        let report =
            solve_fokker_planck(&c, &trap, 293.0, x0, t_end, dt, grid, &[]).unwrap();
        let exact = exact_field(grid, ou_state(&c, &trap, 293.0, x0, t_end).unwrap());
        let l1 = l1_distance(&report.final_field, &exact).unwrap();
        assert!(l1 < 5e-3, "L1 = {l1}");
    }
}
