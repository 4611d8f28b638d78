//! Exact finite-temperature thermodynamics and geometric phases of the 1D
//! anisotropic XY spin chain, plus the criticality analysis built on them:
//! pseudocritical-point location, logarithmic-divergence coefficients,
//! critical-exponent estimation, universality checks, and finite-temperature
//! data collapse.
//!
//! Units are J = 1 and k_B = 1 throughout; all energies and temperatures are
//! dimensionless. All computational functions are pure: grid scans over
//! `(lambda, T)` parallelize freely.

pub mod cli;
pub mod criticality;
pub mod error;
pub mod geophase;
pub mod grid;
pub mod model;
pub mod quadrature;
pub mod thermo;

pub use error::{Error, Result};
pub use model::{bogoliubov_angle, dispersion, min_gap, ModeMomentum, ModelParams};
pub use quadrature::{integrate, QuadratureResult, QuadratureSpec};
pub use thermo::{ThermalPoint, ThermoOutput};
