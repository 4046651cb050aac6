//! Rendering for the duality, nogo, and catalog commands in the three
//! output formats.

use browave::duality::{molecule_catalog, required_frequency, DualityReport};
use browave::model::{ParticleSpec, TrapParameters};
use browave::PhysicalConstants;
use serde_json::json;

use crate::csvout::sig17;
use crate::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Optional damped-trap diagnostics attached to a duality report when the
/// user supplies a medium: derived trap parameters and the frequency the
/// trap must reach at a few multiples of the relaxation time.
#[derive(Debug, Clone)]
pub struct TrapDiagnostics {
    pub shear_modulus: f64,
    pub shear_viscosity: f64,
    pub trap: TrapParameters,
    /// (t·kM, required frequency at that time).
    pub frequency_curve: Vec<(f64, f64)>,
}

impl TrapDiagnostics {
    pub fn new(
        constants: &PhysicalConstants,
        trap: TrapParameters,
        shear_modulus: f64,
        shear_viscosity: f64,
        temperature: f64,
    ) -> Result<Self, AppError> {
        let km = trap.relaxation_rate_km;
        let frequency_curve = [0.5, 1.0, 2.0, 5.0]
            .iter()
            .map(|&tkm| {
                let w = required_frequency(constants, temperature, km, tkm / km)?;
                Ok((tkm, w))
            })
            .collect::<Result<_, browave::Error>>()?;
        Ok(TrapDiagnostics {
            shear_modulus,
            shear_viscosity,
            trap,
            frequency_curve,
        })
    }
}

pub fn render_duality(
    particle: &ParticleSpec,
    temperature: f64,
    report: &DualityReport,
    trap: Option<&TrapDiagnostics>,
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let mut value = json!({
                "particle": {
                    "label": particle.label(),
                    "mass_kg": particle.mass(),
                    "radius_m": particle.radius(),
                    "m_over_r_kg_per_m": particle.mass_over_radius(),
                },
                "temperature_k": temperature,
                "report": report,
            });
            if let Some(diag) = trap {
                value["trap"] = json!({
                    "shear_modulus_pa": diag.shear_modulus,
                    "shear_viscosity_pa_s": diag.shear_viscosity,
                    "stiffness_n_per_m": diag.trap.stiffness_k,
                    "mobility_m_per_n_s": diag.trap.mobility,
                    "relaxation_rate_per_s": diag.trap.relaxation_rate_km,
                    "trap_frequency_rad_per_s": diag.trap.trap_frequency_omega,
                    "required_frequency_curve": diag.frequency_curve
                        .iter()
                        .map(|(tkm, w)| json!({"t_km": tkm, "omega_rad_per_s": w}))
                        .collect::<Vec<_>>(),
                });
            }
            serde_json::to_string_pretty(&value).expect("report serializes") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("key,value\n");
            let mut kv = |k: &str, v: f64| out.push_str(&format!("{k},{}\n", sig17(v)));
            kv("mass_kg", particle.mass());
            kv("radius_m", particle.radius());
            kv("temperature_k", temperature);
            kv("required_variance_m2", report.required_variance);
            kv("required_omega_rad_per_s", report.required_omega_longterm);
            kv("de_broglie_lambda_m", report.de_broglie_lambda);
            kv("required_shear_modulus_pa", report.required_shear_modulus);
            kv("mean_kinetic_energy_j", report.mean_kinetic_energy);
            kv("ground_state_energy_j", report.ground_state_energy);
            if let Some(diag) = trap {
                kv("medium_shear_modulus_pa", diag.shear_modulus);
                kv("medium_shear_viscosity_pa_s", diag.shear_viscosity);
                kv("trap_stiffness_n_per_m", diag.trap.stiffness_k);
                kv("trap_mobility_m_per_n_s", diag.trap.mobility);
                kv("trap_relaxation_rate_per_s", diag.trap.relaxation_rate_km);
                kv("trap_frequency_rad_per_s", diag.trap.trap_frequency_omega);
                for (tkm, w) in &diag.frequency_curve {
                    kv(&format!("required_omega_at_tkm_{tkm}"), *w);
                }
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "particle: {} (mass {:.6e} kg, radius {:.6e} m)\n",
                particle.label(),
                particle.mass(),
                particle.radius()
            ));
            out.push_str(&format!("temperature: {temperature} K\n"));
            out.push_str(&format!(
                "required variance:        {:.6e} m^2 (sigma = {:.6e} m)\n",
                report.required_variance,
                report.required_variance.sqrt()
            ));
            out.push_str(&format!(
                "required trap frequency:  {:.6e} rad/s (long term)\n",
                report.required_omega_longterm
            ));
            out.push_str(&format!(
                "de Broglie wavelength:    {:.6e} m\n",
                report.de_broglie_lambda
            ));
            out.push_str(&format!(
                "required shear modulus:   {:.6e} Pa\n",
                report.required_shear_modulus
            ));
            out.push_str(&format!(
                "mean kinetic energy:      {:.6e} J (= ground-state energy / 2)\n",
                report.mean_kinetic_energy
            ));
            out.push_str(&format!(
                "ground-state energy:      {:.6e} J\n",
                report.ground_state_energy
            ));
            if let Some(diag) = trap {
                out.push_str(&format!(
                    "trap in medium (G = {:.6e} Pa, eta = {:.6e} Pa.s):\n",
                    diag.shear_modulus, diag.shear_viscosity
                ));
                out.push_str(&format!(
                    "  stiffness:       {:.6e} N/m\n",
                    diag.trap.stiffness_k
                ));
                out.push_str(&format!(
                    "  mobility:        {:.6e} m/(N.s)\n",
                    diag.trap.mobility
                ));
                out.push_str(&format!(
                    "  relaxation rate: {:.6e} 1/s\n",
                    diag.trap.relaxation_rate_km
                ));
                out.push_str(&format!(
                    "  trap frequency:  {:.6e} rad/s\n",
                    diag.trap.trap_frequency_omega
                ));
                for (tkm, w) in &diag.frequency_curve {
                    out.push_str(&format!(
                        "  required omega at t = {tkm}/kM: {w:.6e} rad/s\n"
                    ));
                }
            }
            out
        }
    }
}

/// The diverging-coefficient table: (t, D_required, D·t) rows plus the
/// verdict that no constant coefficient can satisfy the requirement.
pub fn render_nogo(rows: &[(f64, f64, f64)], d_times_t: f64, format: Format) -> String {
    const VERDICT: &str =
        "no time-independent diffusion coefficient satisfies the duality requirement";
    match format {
        Format::Json => {
            let value = json!({
                "rows": rows
                    .iter()
                    .map(|(t, d, dt)| json!({"t_s": t, "d_required_m2_per_s": d, "d_times_t_m2": dt}))
                    .collect::<Vec<_>>(),
                "d_times_t_constant_m2": d_times_t,
                "verdict": VERDICT,
            });
            serde_json::to_string_pretty(&value).expect("nogo serializes") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("t,d_required,d_times_t\n");
            for (t, d, dt) in rows {
                out.push_str(&format!("{},{},{}\n", sig17(*t), sig17(*d), sig17(*dt)));
            }
            out.push_str(&format!("# d_times_t constant: {}\n", sig17(d_times_t)));
            out.push_str(&format!("# verdict: {VERDICT}\n"));
            out
        }
        Format::Text => {
            let mut out = String::from("t [s]          D_required [m^2/s]   D*t [m^2]\n");
            for (t, d, dt) in rows {
                out.push_str(&format!("{t:<14.6e} {d:<20.6e} {dt:.6e}\n"));
            }
            out.push_str(&format!(
                "D*t is the constant {d_times_t:.6e} m^2 while D itself diverges as t -> 0: {VERDICT}\n"
            ));
            out
        }
    }
}

pub fn render_catalog(constants: &PhysicalConstants, format: Format) -> String {
    let entries = molecule_catalog(constants);
    match format {
        Format::Json => {
            let value: Vec<_> = entries
                .iter()
                .map(|e| {
                    json!({
                        "label": e.particle.label(),
                        "mass_da": e.particle.mass() / constants.dalton,
                        "mass_kg": e.particle.mass(),
                        "radius_m": e.particle.radius(),
                        "quoted_m_over_r_kg_per_m": e.quoted_m_over_r,
                        "m_over_r_kg_per_m": e.particle.mass_over_radius(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&value).expect("catalog serializes") + "\n"
        }
        Format::Csv => {
            let mut out = String::from("label,mass_da,mass_kg,radius_m,quoted_m_over_r,m_over_r\n");
            for e in &entries {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    e.particle.label(),
                    sig17(e.particle.mass() / constants.dalton),
                    sig17(e.particle.mass()),
                    sig17(e.particle.radius()),
                    sig17(e.quoted_m_over_r),
                    sig17(e.particle.mass_over_radius()),
                ));
            }
            out
        }
        Format::Text => {
            let mut out =
                String::from("label        mass [Da]  radius [m]  m/R quoted [kg/m]  m/R [kg/m]\n");
            for e in &entries {
                out.push_str(&format!(
                    "{:<12} {:<10.0} {:<11.2e} {:<18.2e} {:.4e}\n",
                    e.particle.label(),
                    e.particle.mass() / constants.dalton,
                    e.particle.radius(),
                    e.quoted_m_over_r,
                    e.particle.mass_over_radius(),
                ));
            }
            out
        }
    }
}
