use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A precondition on an input value was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// Trap parameters were requested for a medium with zero shear viscosity.
    /// The damped (Fokker-Planck) route needs a finite mobility; the undamped
    /// case is handled by the Schrödinger route instead.
    #[error("undamped medium: shear viscosity must be positive (use the wave-equation route for an undamped trap)")]
    UndampedMedium,

    /// A Gaussian state with zero variance was requested (a point mass).
    /// Delta initial conditions are represented by a documented
    /// narrow-Gaussian surrogate, never by variance = 0.
    #[error("degenerate delta: variance must be strictly positive (t = 0 has no Gaussian density)")]
    DegenerateDelta,

    /// The spatial grid does not cover the support required by the operation.
    #[error("undersized grid: span [{x_min}, {x_max}] does not cover required [{req_min}, {req_max}]")]
    UndersizedGrid {
        x_min: f64,
        x_max: f64,
        req_min: f64,
        req_max: f64,
    },

    /// The requested time step violates a solver stability bound.
    #[error("unstable time step: dt = {dt} exceeds the bound {bound} ({rule})")]
    UnstableTimestep {
        dt: f64,
        bound: f64,
        rule: &'static str,
    },

    /// The density solver produced values below the negativity tolerance.
    #[error("negative density blowup at t = {t}: min value {min} < -1e-6")]
    NegativeDensity { t: f64, min: f64 },

    /// Two fields that must share a grid do not.
    #[error("grid mismatch: fields are sampled on different grids")]
    GridMismatch,

    /// A field that must be normalized is not.
    #[error("field not normalized: |norm - 1| = {0:e}")]
    NotNormalized(f64),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
