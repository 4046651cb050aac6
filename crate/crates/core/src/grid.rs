//! Uniform 1-D spatial grids carrying either a real probability density or a
//! complex wavefunction.

use num_complex::Complex64;

use crate::{Error, Result};

/// Minimum number of grid nodes accepted anywhere in the crate.
pub const MIN_POINTS: usize = 64;

/// Norm tolerance for freshly constructed fields.
pub const NORM_TOL: f64 = 1e-6;

/// Geometry of a uniform grid: `n_points` nodes from `x_min` to `x_max`
/// inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_max > x_min) {
            return Err(Error::domain(format!(
                "grid needs x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::domain(format!(
                "grid needs at least {MIN_POINTS} points, got {n_points}"
            )));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Spacing between adjacent nodes.
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    /// Node coordinate at index `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }

    /// Check that the grid covers `[req_min, req_max]`, with a relative
    /// slack so that a span constructed to exactly the requirement passes.
    pub fn require_span(&self, req_min: f64, req_max: f64) -> Result<()> {
        let slack = 1e-9 * (req_max - req_min).abs().max(1.0);
        if self.x_min <= req_min + slack && self.x_max >= req_max - slack {
            Ok(())
        } else {
            Err(Error::UndersizedGrid {
                x_min: self.x_min,
                x_max: self.x_max,
                req_min,
                req_max,
            })
        }
    }
}

/// Sampled values of a field: one real channel for densities, two (packed as
/// complex numbers) for wavefunctions.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldValues {
    Density(Vec<f64>),
    Wavefunction(Vec<Complex64>),
}

/// A field sampled on a uniform grid.
///
/// Densities are kept nonnegative up to a -1e-12 discretization tolerance
/// and carry a trapezoid norm within 1e-6 of one; wavefunctions carry
/// ∫|ψ|² dx within 1e-6 of one.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    spec: GridSpec,
    values: FieldValues,
}

/// Trapezoid rule over uniformly sampled values.
pub fn trapezoid(values: &[f64], dx: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let interior: f64 = values[1..values.len() - 1].iter().sum();
    (interior + 0.5 * (values[0] + values[values.len() - 1])) * dx
}

impl GridField {
    /// Sample a density from `f` and renormalize it to unit trapezoid mass.
    pub fn density_from_fn(spec: GridSpec, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut values: Vec<f64> = (0..spec.n_points).map(|i| f(spec.x(i))).collect();
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::domain(
                "density sample must be finite and nonnegative".to_string(),
            ));
        }
        let norm = trapezoid(&values, spec.dx());
        if !(norm > 0.0) {
            return Err(Error::domain("density sample has zero mass".to_string()));
        }
        for v in &mut values {
            *v /= norm;
        }
        Ok(GridField {
            spec,
            values: FieldValues::Density(values),
        })
    }

    /// Wrap precomputed density values, validating the type invariants.
    /// Values in [-1e-12, 0) are clipped to zero.
    pub fn density_from_values(spec: GridSpec, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != spec.n_points {
            return Err(Error::domain(format!(
                "expected {} values, got {}",
                spec.n_points,
                values.len()
            )));
        }
        for v in &mut values {
            if *v < -1e-12 {
                return Err(Error::domain(format!("density value {v} below -1e-12")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let norm = trapezoid(&values, spec.dx());
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(GridField {
            spec,
            values: FieldValues::Density(values),
        })
    }

    /// Sample a wavefunction from `f` without renormalizing, validating that
    /// the grid norm ∫|ψ|² dx is within 1e-6 of one. Keeping the raw sample
    /// makes the norm itself a meaningful check on the sampled formula.
    pub fn wavefunction_from_fn(spec: GridSpec, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values: Vec<Complex64> = (0..spec.n_points).map(|i| f(spec.x(i))).collect();
        Self::wavefunction_from_values(spec, values)
    }

    /// Wrap precomputed wavefunction values, validating normalization.
    pub fn wavefunction_from_values(spec: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != spec.n_points {
            return Err(Error::domain(format!(
                "expected {} values, got {}",
                spec.n_points,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::domain("wavefunction sample must be finite".to_string()));
        }
        let field = GridField {
            spec,
            values: FieldValues::Wavefunction(values),
        };
        let norm = field.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized((norm - 1.0).abs()));
        }
        Ok(field)
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn dx(&self) -> f64 {
        self.spec.dx()
    }

    pub fn n_points(&self) -> usize {
        self.spec.n_points
    }

    pub fn xs(&self) -> Vec<f64> {
        self.spec.xs()
    }

    pub fn is_density(&self) -> bool {
        matches!(self.values, FieldValues::Density(_))
    }

    pub fn values(&self) -> &FieldValues {
        &self.values
    }

    /// Complex samples, present only for wavefunction fields.
    pub fn wavefunction(&self) -> Option<&[Complex64]> {
        match &self.values {
            FieldValues::Wavefunction(v) => Some(v),
            FieldValues::Density(_) => None,
        }
    }

    /// The probability density at each node: the values themselves for a
    /// density field, |ψ|² for a wavefunction field.
    pub fn density(&self) -> Vec<f64> {
        match &self.values {
            FieldValues::Density(v) => v.clone(),
            FieldValues::Wavefunction(v) => v.iter().map(|z| z.norm_sqr()).collect(),
        }
    }

    /// Trapezoid norm: ∫p dx or ∫|ψ|² dx.
    pub fn norm(&self) -> f64 {
        trapezoid(&self.density(), self.dx())
    }
}

/// Trapezoid-quadrature norm, mean, and central variance of a field's
/// probability density. Mean and variance are normalized by the norm so
/// small mass defects do not leak into the moments.
pub fn field_moments(field: &GridField) -> (f64, f64, f64) {
    let density = field.density();
    let dx = field.dx();
    let norm = trapezoid(&density, dx);
    let weighted: Vec<f64> = density
        .iter()
        .enumerate()
        .map(|(i, p)| field.spec.x(i) * p)
        .collect();
    let mean = trapezoid(&weighted, dx) / norm;
    let centered: Vec<f64> = density
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let d = field.spec.x(i) - mean;
            d * d * p
        })
        .collect();
    let variance = trapezoid(&centered, dx) / norm;
    (norm, mean, variance)
}

/// Trapezoid integral of |a - b| between the densities of two fields on the
/// same grid.
pub fn l1_distance(a: &GridField, b: &GridField) -> Result<f64> {
    if a.spec != b.spec {
        return Err(Error::GridMismatch);
    }
    let pa = a.density();
    let pb = b.density();
    let abs_diff: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| (x - y).abs()).collect();
    Ok(trapezoid(&abs_diff, a.dx()))
}
