//! Split-step spectral propagation of the matter-wave equation
//! iħ·∂ψ/∂t = -(ħ²/2m)·∂²ψ/∂x² + ½mω²x²·ψ.
//!
//! Each step applies a half potential phase, a full kinetic step in
//! wavenumber space, and another half potential phase. The scheme assumes
//! periodic boundaries; callers keep the grid wide enough (±(|x0| + 8σ))
//! that wrap-around amplitudes stay negligible.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::fokker_planck::{plan_snapshots, SolveReport};
use crate::grid::{field_moments, trapezoid, GridField, GridSpec};
use crate::{Error, PhysicalConstants, Result};

/// Propagate `psi0` for `t_end` under a harmonic potential of frequency
/// `omega`. The step must satisfy dt ≤ 0.02·(2π/ω); it is shortened to
/// divide `t_end` evenly so snapshots and the final state land on steps.
pub fn solve_schrodinger(
    constants: &PhysicalConstants,
    mass: f64,
    omega: f64,
    psi0: &GridField,
    t_end: f64,
    dt: f64,
    snapshot_times: &[f64],
) -> Result<SolveReport> {
    if !(mass > 0.0) || !(omega > 0.0) {
        return Err(Error::domain(format!(
            "mass and frequency must be > 0, got m = {mass}, omega = {omega}"
        )));
    }
    if !(t_end > 0.0) || !(dt > 0.0) {
        return Err(Error::domain(format!(
            "t_end and dt must be > 0, got t_end = {t_end}, dt = {dt}"
        )));
    }
    let period = std::f64::consts::TAU / omega;
    if dt > 0.02 * period {
        return Err(Error::UnstableTimestep {
            dt,
            bound: 0.02 * period,
            rule: "dt <= 0.02*(2*pi/omega)",
        });
    }
    let values = psi0
        .wavefunction()
        .ok_or_else(|| Error::domain("initial state must be a wavefunction field".to_string()))?;
    let grid = psi0.spec();
    let initial_norm = psi0.norm();
    if (initial_norm - 1.0).abs() > crate::grid::NORM_TOL {
        return Err(Error::NotNormalized((initial_norm - 1.0).abs()));
    }
    // Span check against the packet's own moments: the density must stay
    // inside ±(|<x>| + 8σ) as it oscillates.
    let (_, mean, variance) = field_moments(psi0);
    let reach = mean.abs() + 8.0 * variance.sqrt();
    grid.require_span(-reach, reach)?;

    let n_steps = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    let dt = t_end / n_steps as f64;
    let snapshot_plan = plan_snapshots(snapshot_times, dt, n_steps, t_end)?;

    let stepper = SplitStep::new(constants, mass, omega, grid, dt);
    let mut psi = values.to_vec();

    let mut snapshots: Vec<(f64, GridField)> = Vec::new();
    let emit = |step: usize,
                psi: &[Complex64],
                snapshots: &mut Vec<(f64, GridField)>|
     -> Result<()> {
        for _ in snapshot_plan.iter().filter(|&&s| s == step) {
            let t = step as f64 * dt;
            snapshots.push((t, GridField::wavefunction_from_values(grid, psi.to_vec())?));
        }
        Ok(())
    };

    emit(0, &psi, &mut snapshots)?;
    for step in 1..=n_steps {
        stepper.advance(&mut psi);
        emit(step, &psi, &mut snapshots)?;
    }

    let final_field = GridField::wavefunction_from_values(grid, psi)?;
    let drift = (final_field.norm() - initial_norm).abs();
    Ok(SolveReport {
        final_field,
        snapshots,
        mass_drift: drift,
        norm_drift: drift,
    })
}

/// Kinetic and potential energy expectations ⟨T⟩ = (ħ²/2m)·∫|∂ψ/∂x|² dx and
/// ⟨V⟩ = ½mω²·∫x²|ψ|² dx, with the derivative taken spectrally.
pub fn energy_expectation(
    constants: &PhysicalConstants,
    psi: &GridField,
    mass: f64,
    omega: f64,
) -> Result<(f64, f64)> {
    let values = psi
        .wavefunction()
        .ok_or_else(|| Error::domain("energy expectation needs a wavefunction".to_string()))?;
    let grid = psi.spec();
    let n = grid.n_points;
    let mut spectrum = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut spectrum);
    // Parseval: sum_j |psi'_j|^2 = (1/n) * sum_k k^2 |Psi_k|^2.
    let grad_sq_sum: f64 = spectrum
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let k = wavenumber(j, n, grid.dx());
            k * k * z.norm_sqr()
        })
        .sum::<f64>()
        / n as f64;
    let kinetic = constants.hbar * constants.hbar / (2.0 * mass) * grad_sq_sum * grid.dx();
    let weighted: Vec<f64> = values
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let x = grid.x(i);
            0.5 * mass * omega * omega * x * x * z.norm_sqr()
        })
        .collect();
    let potential = trapezoid(&weighted, grid.dx());
    Ok((kinetic, potential))
}

/// Squared overlap |⟨a|b⟩|² of two wavefunctions on the same grid.
pub fn fidelity(a: &GridField, b: &GridField) -> Result<f64> {
    if a.spec() != b.spec() {
        return Err(Error::GridMismatch);
    }
    let (va, vb) = match (a.wavefunction(), b.wavefunction()) {
        (Some(va), Some(vb)) => (va, vb),
        _ => return Err(Error::domain("fidelity needs wavefunction fields".to_string())),
    };
    let overlap: Complex64 = va
        .iter()
        .zip(vb)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        * a.dx();
    Ok(overlap.norm_sqr())
}

struct SplitStep {
    half_potential: Vec<Complex64>,
    kinetic: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    inv_n: f64,
}

impl SplitStep {
    fn new(
        constants: &PhysicalConstants,
        mass: f64,
        omega: f64,
        grid: GridSpec,
        dt: f64,
    ) -> Self {
        let n = grid.n_points;
        let half_potential: Vec<Complex64> = (0..n)
            .map(|i| {
                let x = grid.x(i);
                let v = 0.5 * mass * omega * omega * x * x;
                Complex64::new(0.0, -v * (0.5 * dt) / constants.hbar).exp()
            })
            .collect();
        let kinetic: Vec<Complex64> = (0..n)
            .map(|j| {
                let k = wavenumber(j, n, grid.dx());
                let phase = -constants.hbar * k * k * dt / (2.0 * mass);
                Complex64::new(0.0, phase).exp()
            })
            .collect();
        let mut planner = FftPlanner::new();
        SplitStep {
            half_potential,
            kinetic,
            fft: planner.plan_fft_forward(n),
            ifft: planner.plan_fft_inverse(n),
            inv_n: 1.0 / n as f64,
        }
    }

    fn advance(&self, psi: &mut [Complex64]) {
        for (z, f) in psi.iter_mut().zip(&self.half_potential) {
            *z *= f;
        }
        self.fft.process(psi);
        for (z, f) in psi.iter_mut().zip(&self.kinetic) {
            *z *= f * self.inv_n;
        }
        self.ifft.process(psi);
        for (z, f) in psi.iter_mut().zip(&self.half_potential) {
            *z *= f;
        }
    }
}

/// Physical wavenumber of FFT bin `j` on a periodic domain of n·dx.
fn wavenumber(j: usize, n: usize, dx: f64) -> f64 {
    let signed = if j <= (n - 1) / 2 {
        j as isize
    } else {
        j as isize - n as isize
    };
    std::f64::consts::TAU * signed as f64 / (n as f64 * dx)
}
