//! Library for deciding whether a thermally agitated Brownian particle can
//! behave as a de Broglie matter wave.
//!
//! The crate is organized around three independent routes to the same
//! physics, which cross-validate each other:
//!
//! * closed-form solutions ([`analytic`]) for free diffusion, the trapped
//!   (Ornstein-Uhlenbeck) particle, and the coherent state of the quantum
//!   harmonic oscillator;
//! * direct numerical integration ([`fokker_planck`], [`schrodinger`]) of the
//!   drift-diffusion and matter-wave equations on a 1-D grid ([`grid`]);
//! * seeded stochastic ensembles ([`langevin`]) as a statistical oracle.
//!
//! [`duality`] holds the requirements themselves: the constant position
//! variance a matter wave demands, the contradiction that rules out free
//! diffusion, and the trap frequency / shear modulus needed to meet the
//! requirement, evaluated for a small catalog of molecules.

// Validation uses `!(x > 0.0)` so NaN inputs are rejected along with
// nonpositive ones; `x <= 0.0` would let NaN through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod constants;
pub mod duality;
mod error;
pub mod fokker_planck;
pub mod grid;
pub mod langevin;
pub mod model;
pub mod schrodinger;

pub use constants::PhysicalConstants;
pub use error::Error;
// Complex samples appear in the public field API; callers should not need
// their own num-complex pin to use it.
pub use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;
