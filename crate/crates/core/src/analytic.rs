//! Closed-form solutions: free diffusion, the damped trapped particle, the
//! coherent state of the undamped harmonic trap, and the kinetic-energy
//! functional of a Gaussian wave amplitude.

use num_complex::Complex64;

use crate::grid::{GridField, GridSpec};
use crate::model::{GaussianState, TrapParameters};
use crate::{Error, PhysicalConstants, Result};

/// Position density of a particle diffusing freely from the origin:
/// zero mean, variance 2Dt.
pub fn free_diffusion_state(diffusion: f64, t: f64) -> Result<GaussianState> {
    if !(diffusion > 0.0) {
        return Err(Error::domain(format!(
            "diffusion coefficient must be > 0, got {diffusion}"
        )));
    }
    if t == 0.0 {
        return Err(Error::DegenerateDelta);
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be > 0, got {t}")));
    }
    GaussianState::new(0.0, 2.0 * diffusion * t)
}

/// Mean-square displacement 2NDt of free diffusion in `dims_n` spatial
/// dimensions (1, 2, or 3).
pub fn free_diffusion_variance(diffusion: f64, t: f64, dims_n: u32) -> Result<f64> {
    if !(1..=3).contains(&dims_n) {
        return Err(Error::domain(format!(
            "spatial dimension must be 1, 2, or 3, got {dims_n}"
        )));
    }
    if !(diffusion >= 0.0) || !(t >= 0.0) {
        return Err(Error::domain(format!(
            "diffusion and time must be >= 0, got D = {diffusion}, t = {t}"
        )));
    }
    Ok(2.0 * dims_n as f64 * diffusion * t)
}

/// Position density of the overdamped trapped particle released from `x0`:
/// mean x0·e^(-kM·t), variance (k_B·T/k)·(1 - e^(-2·kM·t)).
pub fn ou_state(
    constants: &PhysicalConstants,
    trap: &TrapParameters,
    temperature: f64,
    x0: f64,
    t: f64,
) -> Result<GaussianState> {
    if !(trap.relaxation_rate_km > 0.0) {
        return Err(Error::domain(format!(
            "relaxation rate must be > 0, got {} (free diffusion handles the untrapped case)",
            trap.relaxation_rate_km
        )));
    }
    if !(temperature > 0.0) {
        return Err(Error::domain(format!(
            "temperature must be > 0, got {temperature}"
        )));
    }
    if t == 0.0 {
        return Err(Error::DegenerateDelta);
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("time must be > 0, got {t}")));
    }
    let km = trap.relaxation_rate_km;
    let sigma0_sq = constants.boltzmann_kb * temperature / trap.stiffness_k;
    let mean = x0 * (-km * t).exp();
    let variance = sigma0_sq * (1.0 - (-2.0 * km * t).exp());
    GaussianState::new(mean, variance)
}

/// A coherent state of the undamped harmonic trap: a Gaussian wave packet of
/// inverse width a = √(mω/ħ) released at displacement `x0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentStateSpec {
    mass: f64,
    omega: f64,
    x0: f64,
    a_param: f64,
}

impl CoherentStateSpec {
    pub fn new(constants: &PhysicalConstants, mass: f64, omega: f64, x0: f64) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::domain(format!("mass must be > 0, got {mass}")));
        }
        if !(omega > 0.0) {
            return Err(Error::domain(format!(
                "trap frequency must be > 0, got {omega}"
            )));
        }
        Ok(CoherentStateSpec {
            mass,
            omega,
            x0,
            a_param: (mass * omega / constants.hbar).sqrt(),
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Inverse width a = √(mω/ħ), 1/m.
    pub fn a_param(&self) -> f64 {
        self.a_param
    }

    /// The constant position variance 1/(2a²) = ħ/(2mω).
    pub fn variance(&self) -> f64 {
        1.0 / (2.0 * self.a_param * self.a_param)
    }

    /// Width σ = 1/(a√2).
    pub fn sigma(&self) -> f64 {
        self.variance().sqrt()
    }
}

/// Position density of the coherent state at time `t`: mean x0·cos(ωt),
/// variance constant in time.
pub fn coherent_density(spec: &CoherentStateSpec, t: f64) -> GaussianState {
    let mean = spec.x0 * (spec.omega * t).cos();
    GaussianState::new(mean, spec.variance()).expect("coherent variance is positive")
}

/// The complex coherent-state wavefunction sampled on `grid`, which must
/// span at least ±(|x0| + 8σ).
pub fn coherent_wavefunction(
    spec: &CoherentStateSpec,
    t: f64,
    grid: GridSpec,
) -> Result<GridField> {
    let reach = spec.x0.abs() + 8.0 * spec.sigma();
    grid.require_span(-reach, reach)?;
    let a = spec.a_param;
    let (x0, wt) = (spec.x0, spec.omega * t);
    let amplitude = a.sqrt() / std::f64::consts::PI.powf(0.25);
    let center = x0 * wt.cos();
    let sin_wt = wt.sin();
    let sin_2wt = (2.0 * wt).sin();
    GridField::wavefunction_from_fn(grid, |x| {
        let envelope = (-0.5 * a * a * (x - center) * (x - center)).exp();
        let phase = -0.5 * wt - a * a * (x * x0 * sin_wt - 0.25 * x0 * x0 * sin_2wt);
        amplitude * envelope * Complex64::new(0.0, phase).exp()
    })
}

/// The two real quadratures ψ₁ = cos φ·√p and ψ₂ = sin φ·√p of a matter
/// wave whose squared amplitude reproduces the Gaussian density `p`.
/// ψ₁² + ψ₂² = p holds pointwise by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePair {
    state: GaussianState,
    phase_phi: f64,
}

impl WavePair {
    pub fn state(&self) -> GaussianState {
        self.state
    }

    pub fn phase_phi(&self) -> f64 {
        self.phase_phi
    }

    pub fn psi1(&self, x: f64) -> f64 {
        self.phase_phi.cos() * self.state.pdf(x).sqrt()
    }

    pub fn psi2(&self, x: f64) -> f64 {
        self.phase_phi.sin() * self.state.pdf(x).sqrt()
    }

    /// √p at `x`, the amplitude shared by the two quadratures.
    pub fn amplitude(&self, x: f64) -> f64 {
        self.state.pdf(x).sqrt()
    }
}

/// Split a Gaussian density into the constant-phase quadrature pair.
pub fn decompose_wavefunction(state: GaussianState, phase_phi: f64) -> WavePair {
    WavePair { state, phase_phi }
}

/// |dψ/dx|² of the decomposed wave at `x`:
/// (x-μ)²·p(x)/(4σ⁴), independent of the constant phase φ.
pub fn gradient_amplitude_sq(state: &GaussianState, x: f64) -> f64 {
    let d = x - state.mean();
    let var = state.variance();
    d * d * state.pdf(x) / (4.0 * var * var)
}

/// Mean kinetic energy ħ²/(8mσ²) of a wave whose squared amplitude is a
/// Gaussian of variance σ².
pub fn kinetic_energy_gaussian(
    constants: &PhysicalConstants,
    mass: f64,
    variance: f64,
) -> Result<f64> {
    if !(mass > 0.0) || !(variance > 0.0) {
        return Err(Error::domain(format!(
            "mass and variance must be > 0, got m = {mass}, var = {variance}"
        )));
    }
    Ok(constants.hbar * constants.hbar / (8.0 * mass * variance))
}

/// Mean kinetic energy (ħ²/2m)·∫|dψ/dx|² dx of a sampled wavefunction,
/// using second-order centered differences in the interior, one-sided
/// differences at the boundaries, and trapezoid quadrature.
///
/// The input must be a wavefunction field; its grid norm is already within
/// 1e-6 of one by the field invariant.
pub fn kinetic_energy_numeric(
    constants: &PhysicalConstants,
    psi: &GridField,
    mass: f64,
) -> Result<f64> {
    if !(mass > 0.0) {
        return Err(Error::domain(format!("mass must be > 0, got {mass}")));
    }
    let values = psi
        .wavefunction()
        .ok_or_else(|| Error::domain("kinetic energy needs a wavefunction field".to_string()))?;
    let norm = psi.norm();
    if (norm - 1.0).abs() > crate::grid::NORM_TOL {
        return Err(Error::NotNormalized((norm - 1.0).abs()));
    }
    let n = values.len();
    let dx = psi.dx();
    let grad_sq: Vec<f64> = (0..n)
        .map(|i| {
            let d = if i == 0 {
                (values[1] - values[0]) / dx
            } else if i == n - 1 {
                (values[n - 1] - values[n - 2]) / dx
            } else {
                (values[i + 1] - values[i - 1]) / (2.0 * dx)
            };
            d.norm_sqr()
        })
        .collect();
    let integral = crate::grid::trapezoid(&grad_sq, dx);
    Ok(constants.hbar * constants.hbar / (2.0 * mass) * integral)
}
