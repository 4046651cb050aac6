//! Particle and medium parameterization plus the Gaussian density primitive
//! every other module consumes.

use serde::Serialize;

use crate::{Error, PhysicalConstants, Result};

/// A Brownian/quantum particle: mass, hydrodynamic radius, and a label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParticleSpec {
    mass: f64,
    radius: f64,
    label: String,
}

impl ParticleSpec {
    pub fn new(mass: f64, radius: f64, label: impl Into<String>) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::domain(format!("particle mass must be > 0, got {mass}")));
        }
        if !(radius > 0.0) {
            return Err(Error::domain(format!(
                "particle radius must be > 0, got {radius}"
            )));
        }
        Ok(ParticleSpec {
            mass,
            radius,
            label: label.into(),
        })
    }

    /// Mass in kg.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Radius in m.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Mass-to-radius ratio, kg/m.
    pub fn mass_over_radius(&self) -> f64 {
        self.mass / self.radius
    }
}

/// The material surrounding the particle: temperature plus the two
/// macroscopic moduli that set drag and trapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MediumSpec {
    temperature: f64,
    shear_viscosity: f64,
    shear_modulus: f64,
}

impl MediumSpec {
    pub fn new(temperature: f64, shear_viscosity: f64, shear_modulus: f64) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(Error::domain(format!(
                "temperature must be > 0, got {temperature}"
            )));
        }
        if !(shear_viscosity >= 0.0) {
            return Err(Error::domain(format!(
                "shear viscosity must be >= 0, got {shear_viscosity}"
            )));
        }
        if !(shear_modulus >= 0.0) {
            return Err(Error::domain(format!(
                "shear modulus must be >= 0, got {shear_modulus}"
            )));
        }
        Ok(MediumSpec {
            temperature,
            shear_viscosity,
            shear_modulus,
        })
    }

    /// Temperature in K.
    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    /// Shear viscosity η in Pa·s.
    pub fn shear_viscosity(&self) -> f64 {
        self.shear_viscosity
    }

    /// Elastic shear modulus G in Pa.
    pub fn shear_modulus(&self) -> f64 {
        self.shear_modulus
    }
}

/// Derived trap quantities for a sphere embedded in a viscoelastic medium:
/// stiffness k = 6πRG, Stokes mobility M = 1/(6πRη), relaxation rate
/// kM = G/η, and trap frequency ω = √(k/m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrapParameters {
    pub stiffness_k: f64,
    pub mobility: f64,
    pub relaxation_rate_km: f64,
    pub trap_frequency_omega: f64,
}

impl TrapParameters {
    /// Build directly from stiffness, mobility, and mass. The relaxation
    /// rate and trap frequency are derived so the struct invariants hold by
    /// construction. Used for nondimensional solver setups where no physical
    /// medium is in play.
    pub fn from_parts(stiffness_k: f64, mobility: f64, mass: f64) -> Result<Self> {
        if !(stiffness_k >= 0.0) {
            return Err(Error::domain(format!(
                "stiffness must be >= 0, got {stiffness_k}"
            )));
        }
        if !(mobility > 0.0) {
            return Err(Error::domain(format!("mobility must be > 0, got {mobility}")));
        }
        if !(mass > 0.0) {
            return Err(Error::domain(format!("mass must be > 0, got {mass}")));
        }
        Ok(TrapParameters {
            stiffness_k,
            mobility,
            relaxation_rate_km: stiffness_k * mobility,
            trap_frequency_omega: (stiffness_k / mass).sqrt(),
        })
    }
}

/// Trap parameters for `particle` embedded in `medium`.
///
/// Fails with [`Error::UndampedMedium`] when the viscosity is zero: the
/// mobility diverges and the overdamped description no longer applies.
pub fn trap_parameters(particle: &ParticleSpec, medium: &MediumSpec) -> Result<TrapParameters> {
    let eta = medium.shear_viscosity();
    if eta == 0.0 {
        return Err(Error::UndampedMedium);
    }
    let six_pi_r = 6.0 * std::f64::consts::PI * particle.radius();
    let stiffness_k = six_pi_r * medium.shear_modulus();
    let mobility = 1.0 / (six_pi_r * eta);
    TrapParameters::from_parts(stiffness_k, mobility, particle.mass())
}

/// Convert a mass given in daltons to kg.
pub fn da_to_kg(constants: &PhysicalConstants, mass_da: f64) -> Result<f64> {
    if !(mass_da > 0.0) {
        return Err(Error::domain(format!("mass must be > 0 Da, got {mass_da}")));
    }
    Ok(mass_da * constants.dalton)
}

/// A Gaussian position density: mean μ and variance σ² at one instant.
///
/// Variance is strictly positive; a point mass (delta) is never representable
/// here. Operations that would produce one (t = 0 in the diffusion and
/// trapped solutions) fail with [`Error::DegenerateDelta`] instead.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianState {
    mean: f64,
    variance: f64,
}

impl GaussianState {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !(variance > 0.0) {
            return Err(Error::DegenerateDelta);
        }
        if !mean.is_finite() || !variance.is_finite() {
            return Err(Error::domain(format!(
                "non-finite Gaussian moments: mean = {mean}, variance = {variance}"
            )));
        }
        Ok(GaussianState { mean, variance })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn sigma(&self) -> f64 {
        self.variance.sqrt()
    }

    /// The normal probability density at `x`, 1/m.
    pub fn pdf(&self, x: f64) -> f64 {
        let sigma = self.sigma();
        let z = (x - self.mean) / sigma;
        (-0.5 * z * z).exp() / (sigma * (2.0 * std::f64::consts::PI).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SQRT_TAU_INV: f64 = 0.3989422804014327; // 1/√(2π)

    fn si() -> PhysicalConstants {
        PhysicalConstants::si()
    }

    #[test]
    fn one_dalton_is_the_constant() {
        assert_eq!(da_to_kg(&si(), 1.0).unwrap(), 1.66053906660e-27);
    }

    #[test]
    fn catalog_masses_convert() {
        // Hand arithmetic: 720 x 1.66053906660e-27 and 6910 x same.
        let m720 = da_to_kg(&si(), 720.0).unwrap();
        assert!((m720 - 1.19559e-24).abs() / 1.19559e-24 < 1e-4);
        let m6910 = da_to_kg(&si(), 6910.0).unwrap();
        assert!((m6910 - 1.14743e-23).abs() / 1.14743e-23 < 1e-4);
    }

    #[test]
    fn nonpositive_mass_rejected() {
        assert!(da_to_kg(&si(), 0.0).is_err());
        assert!(da_to_kg(&si(), -1.0).is_err());
    }

    #[test]
    fn zero_modulus_means_no_trap() {
        let p = ParticleSpec::new(1e-24, 1e-9, "test").unwrap();
        let m = MediumSpec::new(300.0, 1.0, 0.0).unwrap();
        let trap = trap_parameters(&p, &m).unwrap();
        assert_eq!(trap.stiffness_k, 0.0);
        assert_eq!(trap.relaxation_rate_km, 0.0);
        assert_eq!(trap.trap_frequency_omega, 0.0);
        assert!(trap.mobility > 0.0);
    }

    #[test]
    fn trap_parameters_formula_case() {
        // R = 1e-9 m, G = 1 Pa, eta = 1 Pa.s, m = 1e-24 kg.
        let p = ParticleSpec::new(1e-24, 1e-9, "test").unwrap();
        let m = MediumSpec::new(300.0, 1.0, 1.0).unwrap();
        let trap = trap_parameters(&p, &m).unwrap();
        let k_expect = 6.0 * std::f64::consts::PI * 1e-9;
        assert!((trap.stiffness_k - k_expect).abs() / k_expect < 1e-14);
        assert!((trap.relaxation_rate_km - 1.0).abs() < 1e-12);
        let omega_expect = (6.0 * std::f64::consts::PI * 1e15).sqrt();
        assert!((trap.trap_frequency_omega - omega_expect).abs() / omega_expect < 1e-14);
    }

    #[test]
    fn undamped_medium_is_an_error() {
        let p = ParticleSpec::new(1e-24, 1e-9, "test").unwrap();
        let m = MediumSpec::new(300.0, 0.0, 1.0).unwrap();
        assert!(matches!(trap_parameters(&p, &m), Err(Error::UndampedMedium)));
    }

    #[test]
    fn standard_normal_peak_and_tail() {
        let g = GaussianState::new(0.0, 1.0).unwrap();
        assert!((g.pdf(0.0) - SQRT_TAU_INV).abs() < 1e-15);
        // Standard normal density at x = 1, independent evaluation.
        assert!((g.pdf(1.0) - 0.2419707245191434).abs() < 1e-15);
    }

    #[test]
    fn pdf_integrates_to_one() {
        // Trapezoid over [-8 sigma, 8 sigma] with 4001 points.
        let g = GaussianState::new(0.3, 2.5).unwrap();
        let (a, b) = (g.mean() - 8.0 * g.sigma(), g.mean() + 8.0 * g.sigma());
        let n = 4001;
        let dx = (b - a) / (n - 1) as f64;
        let mut sum = 0.0;
        for i in 0..n {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            sum += w * g.pdf(a + i as f64 * dx);
        }
        assert!((sum * dx - 1.0).abs() < 1e-8, "norm = {}", sum * dx);
    }

    #[test]
    fn zero_variance_is_degenerate() {
        assert!(matches!(
            GaussianState::new(0.0, 0.0),
            Err(Error::DegenerateDelta)
        ));
    }

    #[test]
    fn pdf_symmetric_about_zero_mean_bitwise() {
        let g = GaussianState::new(0.0, 0.7).unwrap();
        for d in [0.1, 0.5, 1.0, 3.7, 8.0] {
            assert_eq!(g.pdf(d).to_bits(), g.pdf(-d).to_bits());
        }
    }

    proptest! {
        #[test]
        fn pdf_symmetric_about_mean(mu in -10.0..10.0f64, var in 1e-4..1e4f64, d in 0.0..20.0f64) {
            let g = GaussianState::new(mu, var).unwrap();
            let (lo, hi) = (g.pdf(mu - d), g.pdf(mu + d));
            // mu +/- d round, so allow a few ulps of asymmetry.
            let scale = lo.abs().max(1e-300);
            prop_assert!((lo - hi).abs() / scale < 1e-12);
        }

        #[test]
        fn relaxation_rate_is_g_over_eta(
            radius in 1e-10..1e-6f64,
            mass in 1e-27..1e-20f64,
            g_pa in 1e-6..1e12f64,
            eta in 1e-6..1e3f64,
        ) {
            let p = ParticleSpec::new(mass, radius, "prop").unwrap();
            let m = MediumSpec::new(300.0, eta, g_pa).unwrap();
            let trap = trap_parameters(&p, &m).unwrap();
            let expect = g_pa / eta;
            prop_assert!((trap.relaxation_rate_km - expect).abs() / expect < 1e-12);
        }
    }
}
