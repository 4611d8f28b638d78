//! Chain parameters and the single-mode spectrum.
//!
//! The diagonalized XY chain reduces to independent fermionic modes with
//! dispersion `Lambda_k = sqrt((lambda - cos k)^2 + gamma^2 sin^2 k)`
//! (one half of the excitation energy) and a Bogoliubov mixing angle
//! `theta_k`. Everything downstream (thermodynamics, geometric phases,
//! criticality analysis) consumes these two functions. Units are J = 1,
//! k_B = 1 throughout.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Anisotropy `gamma` in [0, 1] and transverse field `lambda >= 0`.
///
/// `gamma = 1` is the transverse Ising chain, `gamma = 0` the isotropic
/// XX chain; the quantum critical point sits at `lambda = 1` for every
/// `gamma > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    gamma: f64,
    lambda: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, lambda: f64) -> Result<Self> {
        if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParams(format!(
                "gamma must lie in [0, 1], got {gamma}"
            )));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidParams(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self { gamma, lambda })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// XX class (`gamma = 0`).
    pub fn is_isotropic(&self) -> bool {
        self.gamma == 0.0
    }

    /// Same anisotropy, different field. Fails if the new field is invalid.
    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.gamma, lambda)
    }
}

/// A mode momentum `k` in `[0, pi]`.
///
/// Finite chains use the discrete values `k_i = 2 pi (i - 1/2) / N`,
/// `i = 1..N/2`; each pairs with `-k_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMomentum(f64);

impl ModeMomentum {
    pub fn new(k: f64) -> Result<Self> {
        if !k.is_finite() || !(0.0..=PI).contains(&k) {
            return Err(Error::InvalidParams(format!(
                "mode momentum must lie in [0, pi], got {k}"
            )));
        }
        Ok(Self(k))
    }

    /// The i-th discrete mode of an N-site chain, `i = 1..N/2`.
    pub fn discrete(i: usize, n_sites: usize) -> Result<Self> {
        validate_n_sites(n_sites)?;
        if i == 0 || i > n_sites / 2 {
            return Err(Error::InvalidParams(format!(
                "mode index must lie in 1..=N/2, got i={i} for N={n_sites}"
            )));
        }
        Ok(Self(2.0 * PI * (i as f64 - 0.5) / n_sites as f64))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub(crate) fn unchecked(k: f64) -> Self {
        debug_assert!((0.0..=PI).contains(&k));
        Self(k)
    }
}

pub(crate) fn validate_n_sites(n_sites: usize) -> Result<()> {
    if n_sites < 4 || n_sites % 2 != 0 {
        return Err(Error::InvalidParams(format!(
            "chain length must be even and >= 4, got {n_sites}"
        )));
    }
    Ok(())
}

/// The positive momenta `k_i = 2 pi (i - 1/2)/N`, `i = 1..N/2`, as raw radians.
pub(crate) fn half_chain_momenta(n_sites: usize) -> impl Iterator<Item = f64> {
    let n = n_sites as f64;
    (1..=n_sites / 2).map(move |i| 2.0 * PI * (i as f64 - 0.5) / n)
}

#[inline]
pub(crate) fn dispersion_raw(k: f64, gamma: f64, lambda: f64) -> f64 {
    let (sin_k, cos_k) = k.sin_cos();
    let a = lambda - cos_k;
    let b = gamma * sin_k;
    (a * a + b * b).sqrt()
}

/// Quasiparticle dispersion `Lambda_k >= 0`.
pub fn dispersion(k: ModeMomentum, p: ModelParams) -> f64 {
    dispersion_raw(k.radians(), p.gamma, p.lambda)
}

/// Bogoliubov angle of mode `k`, quadrant-aware so the mode eigenstates
/// vary continuously in `k`: `theta_k = atan2(gamma sin k, cos k - lambda)`,
/// i.e. `cos theta_k = (cos k - lambda)/Lambda_k`.
///
/// This is the convention under which the thermal geometric-phase mode sum
/// reproduces the closed form `pi [1 + M_z(T)]`; see the geophase module.
pub fn bogoliubov_angle(k: ModeMomentum, p: ModelParams) -> f64 {
    let (sin_k, cos_k) = k.radians().sin_cos();
    (p.gamma * sin_k).atan2(cos_k - p.lambda)
}

/// Exact minimum of `Lambda_k` over `k` in `[0, pi]`.
///
/// `Lambda_k^2` is quadratic in `c = cos k`: it is minimized either at an
/// endpoint `c = +-1` or, when `gamma < 1` and `|c*| <= 1`, at the interior
/// stationary point `c* = lambda/(1 - gamma^2)`. No numerical search.
pub fn min_gap(p: ModelParams) -> f64 {
    gap_minimum(p).0
}

/// The momentum at which `Lambda_k` attains `min_gap`. Drives quadrature
/// split placement and the small-T peak of the thermal susceptibility term.
pub fn min_gap_momentum(p: ModelParams) -> ModeMomentum {
    ModeMomentum::unchecked(gap_minimum(p).1)
}

fn gap_minimum(p: ModelParams) -> (f64, f64) {
    let (gamma, lambda) = (p.gamma, p.lambda);
    // Lambda^2(c) = (1 - gamma^2) c^2 - 2 lambda c + lambda^2 + gamma^2
    let lambda_sq_at = |c: f64| {
        let a = lambda - c;
        a * a + gamma * gamma * (1.0 - c * c)
    };
    let mut best_val = lambda_sq_at(1.0);
    let mut best_c = 1.0;
    let at_minus_one = lambda_sq_at(-1.0);
    if at_minus_one < best_val {
        best_val = at_minus_one;
        best_c = -1.0;
    }
    if gamma < 1.0 {
        let c_star = lambda / (1.0 - gamma * gamma);
        if c_star.abs() <= 1.0 {
            let at_star = lambda_sq_at(c_star);
            if at_star < best_val {
                best_val = at_star;
                best_c = c_star;
            }
        }
    }
    (best_val.max(0.0).sqrt(), best_c.clamp(-1.0, 1.0).acos())
}
