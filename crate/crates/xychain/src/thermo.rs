//! Free energy, magnetization, and magnetic susceptibility per spin.
//!
//! Thermodynamic-limit values are `(1/pi) * integral over [0, pi]` of the
//! per-mode expressions; finite-N values sum the same expressions over the
//! discrete modes `k_i = 2 pi (i - 1/2)/N` and serve as independent oracles.
//!
//! `T = 0` is an explicit analytic branch (`tanh(beta Lambda) -> 1`,
//! thermal weights dropped), never a numerical `beta = infinity`. For the
//! XX class (`gamma = 0`) the zero-temperature magnetization integrand is
//! `sign(lambda - cos k)`, split at `k = arccos lambda`, and the
//! susceptibility becomes the analytic derivative `(2/pi)(1-lambda^2)^{-1/2}`
//! for `lambda < 1` (the thermal term of the integrand degenerates into a
//! delta peak there, so no quadrature route exists).

use crate::error::{Error, Result};
use crate::model::{
    dispersion_raw, half_chain_momenta, min_gap_momentum, validate_n_sites, ModelParams,
};
use crate::quadrature::{adaptive_panel_edges, integrate, integrate_on_edges, QuadratureSpec};
use std::f64::consts::{LN_2, PI};

/// A temperature `T >= 0` in units of J (k_B = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalPoint {
    temperature: f64,
}

impl ThermalPoint {
    pub fn new(temperature: f64) -> Result<Self> {
        if !temperature.is_finite() || temperature < 0.0 {
            return Err(Error::InvalidParams(format!(
                "temperature must be finite and >= 0, got {temperature}"
            )));
        }
        Ok(Self { temperature })
    }

    pub fn zero() -> Self {
        Self { temperature: 0.0 }
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn is_zero(&self) -> bool {
        self.temperature == 0.0
    }

    /// Inverse temperature; `None` on the zero-temperature branch.
    pub fn beta(&self) -> Option<f64> {
        (self.temperature > 0.0).then(|| 1.0 / self.temperature)
    }
}

/// The three observables at one `(gamma, lambda, T)` point.
#[derive(Debug, Clone, Copy)]
pub struct ThermoOutput {
    pub free_energy: f64,
    pub magnetization: f64,
    pub susceptibility: f64,
}

/// `ln cosh x` without overflow for large `|x|`.
#[inline]
fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - LN_2
}

/// `ln(2 cosh x)` for `x >= 0`, overflow-safe.
#[inline]
fn ln_2cosh(x: f64) -> f64 {
    x + (-2.0 * x).exp().ln_1p()
}

/// `sech^2 x`, overflow-safe for any `x`.
#[inline]
fn sech_sq(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    let s = 2.0 * e / (1.0 + e * e);
    s * s
}

/// Splits at the gap minimum when it lies strictly inside (0, pi).
/// For the XX chain with lambda < 1 this is exactly `arccos lambda`.
fn gap_splits(p: ModelParams) -> Vec<f64> {
    let k = min_gap_momentum(p).radians();
    if k > 0.0 && k < PI {
        vec![k]
    } else {
        Vec::new()
    }
}

fn spec_with_gap_splits(p: ModelParams, quad: &QuadratureSpec) -> QuadratureSpec {
    quad.with_splits(&gap_splits(p), 0.0, PI)
}

/// Per-mode magnetization kernel `tanh(beta Lambda) (lambda - cos k)/Lambda`
/// with its limits at gapless points; `beta = None` is the T = 0 branch.
#[inline]
fn magnetization_kernel(k: f64, gamma: f64, lambda: f64, beta: Option<f64>) -> f64 {
    let lam = dispersion_raw(k, gamma, lambda);
    if lam == 0.0 {
        return 0.0;
    }
    let ratio = (lambda - k.cos()) / lam;
    match beta {
        Some(b) => (b * lam).tanh() * ratio,
        None => ratio,
    }
}

/// Per-mode susceptibility kernel: thermal peak plus quantum term,
/// `beta sech^2(beta Lambda) (lambda-cos k)^2/Lambda^2
///  + tanh(beta Lambda) gamma^2 sin^2 k / Lambda^3`.
#[inline]
fn susceptibility_kernel(k: f64, gamma: f64, lambda: f64, beta: f64) -> f64 {
    let lam = dispersion_raw(k, gamma, lambda);
    if lam == 0.0 {
        // Limit at a gapless node: both realizations of Lambda -> 0
        // (gamma = 0 crossing, or lambda = 1 at k = 0) tend to beta.
        return beta;
    }
    let a = lambda - k.cos();
    let x = beta * lam;
    let thermal = beta * sech_sq(x) * (a * a) / (lam * lam);
    let s = gamma * k.sin();
    let quantum = x.tanh() * s * s / (lam * lam * lam);
    thermal + quantum
}

/// Zero-temperature quantum term `gamma^2 sin^2 k / Lambda^3`.
#[inline]
fn susceptibility_kernel_t0(k: f64, gamma: f64, lambda: f64) -> f64 {
    let lam = dispersion_raw(k, gamma, lambda);
    let s = gamma * k.sin();
    s * s / (lam * lam * lam)
}

/// Free energy per spin,
/// `F = -T ln 2 - (T/pi) * integral of ln cosh(beta Lambda_k)`;
/// at `T = 0` the beta -> infinity limit `-(1/pi) * integral of Lambda_k`.
pub fn free_energy(p: ModelParams, t: ThermalPoint, quad: &QuadratureSpec) -> Result<f64> {
    let (gamma, lambda) = (p.gamma(), p.lambda());
    let spec = spec_with_gap_splits(p, quad);
    match t.beta() {
        None => {
            let r = integrate(|k| dispersion_raw(k, gamma, lambda), 0.0, PI, &spec)?;
            Ok(-r.value / PI)
        }
        Some(beta) => {
            let temp = t.temperature();
            let r = integrate(
                |k| ln_cosh(beta * dispersion_raw(k, gamma, lambda)),
                0.0,
                PI,
                &spec,
            )?;
            Ok(-temp * LN_2 - temp / PI * r.value)
        }
    }
}

/// Magnetization per spin along the field,
/// `M_z = (1/pi) * integral of tanh(beta Lambda_k) (lambda - cos k)/Lambda_k`.
pub fn magnetization(p: ModelParams, t: ThermalPoint, quad: &QuadratureSpec) -> Result<f64> {
    let (gamma, lambda) = (p.gamma(), p.lambda());
    let spec = spec_with_gap_splits(p, quad);
    let beta = t.beta();
    let r = integrate(
        |k| magnetization_kernel(k, gamma, lambda, beta),
        0.0,
        PI,
        &spec,
    )?;
    Ok(r.value / PI)
}

/// Magnetic susceptibility per spin, `chi_z = -d^2 F / d lambda^2`.
///
/// Fails with `CriticalDivergence` at the quantum critical point
/// `(lambda = 1, T = 0)`, where `chi_z` is infinite.
pub fn susceptibility(p: ModelParams, t: ThermalPoint, quad: &QuadratureSpec) -> Result<f64> {
    let (gamma, lambda) = (p.gamma(), p.lambda());
    match t.beta() {
        None => {
            if lambda == 1.0 {
                return Err(Error::CriticalDivergence { gamma, lambda });
            }
            if p.is_isotropic() {
                // Derivative of the closed-form XX magnetization:
                // dM/dlambda = (2/pi)(1 - lambda^2)^{-1/2} for lambda < 1, else 0.
                if lambda < 1.0 {
                    return Ok(2.0 / (PI * (1.0 - lambda * lambda).sqrt()));
                }
                return Ok(0.0);
            }
            // min_gap > 0 here, so the thermal term vanishes exponentially
            // and only the quantum term survives.
            let spec = spec_with_gap_splits(p, quad);
            let r = integrate(|k| susceptibility_kernel_t0(k, gamma, lambda), 0.0, PI, &spec)?;
            Ok(r.value / PI)
        }
        Some(beta) => {
            let spec = spec_with_gap_splits(p, quad);
            let r = integrate(
                |k| susceptibility_kernel(k, gamma, lambda, beta),
                0.0,
                PI,
                &spec,
            )?;
            Ok(r.value / PI)
        }
    }
}

/// All three observables at one point.
pub fn observables(p: ModelParams, t: ThermalPoint, quad: &QuadratureSpec) -> Result<ThermoOutput> {
    Ok(ThermoOutput {
        free_energy: free_energy(p, t, quad)?,
        magnetization: magnetization(p, t, quad)?,
        susceptibility: susceptibility(p, t, quad)?,
    })
}

/// Finite-chain free energy per spin from the mode product
/// `Z = prod_k 2 cosh(beta Lambda_k)`:
/// `F_N = -(T/N) * sum over the N/2 positive modes of 2 ln[2 cosh(beta Lambda_k)]`.
/// Requires `T > 0` and even `N >= 4`.
pub fn free_energy_finite_n(p: ModelParams, t: ThermalPoint, n_sites: usize) -> Result<f64> {
    validate_n_sites(n_sites)?;
    let beta = t.beta().ok_or_else(|| {
        Error::InvalidParams("finite-N free energy requires T > 0".into())
    })?;
    let (gamma, lambda) = (p.gamma(), p.lambda());
    let sum: f64 = half_chain_momenta(n_sites)
        .map(|k| 2.0 * ln_2cosh(beta * dispersion_raw(k, gamma, lambda)))
        .sum();
    Ok(-t.temperature() * sum / n_sites as f64)
}

/// Finite-chain magnetization: discrete-mode analog of `magnetization`.
pub fn magnetization_finite_n(p: ModelParams, t: ThermalPoint, n_sites: usize) -> Result<f64> {
    validate_n_sites(n_sites)?;
    let (gamma, lambda) = (p.gamma(), p.lambda());
    let beta = t.beta();
    let sum: f64 = half_chain_momenta(n_sites)
        .map(|k| magnetization_kernel(k, gamma, lambda, beta))
        .sum();
    Ok(2.0 * sum / n_sites as f64)
}

/// Finite-chain susceptibility: discrete-mode analog of `susceptibility`.
pub fn susceptibility_finite_n(p: ModelParams, t: ThermalPoint, n_sites: usize) -> Result<f64> {
    validate_n_sites(n_sites)?;
    let (gamma, lambda) = (p.gamma(), p.lambda());
    let sum: f64 = match t.beta() {
        Some(beta) => half_chain_momenta(n_sites)
            .map(|k| susceptibility_kernel(k, gamma, lambda, beta))
            .sum(),
        None => {
            if lambda == 1.0 && !p.is_isotropic() {
                return Err(Error::CriticalDivergence { gamma, lambda });
            }
            // T = 0: thermal weights vanish for every gapped discrete mode;
            // the isotropic chain's quantum term is identically zero.
            half_chain_momenta(n_sites)
                .map(|k| {
                    if gamma == 0.0 {
                        0.0
                    } else {
                        susceptibility_kernel_t0(k, gamma, lambda)
                    }
                })
                .sum()
        }
    };
    Ok(2.0 * sum / n_sites as f64)
}

/// Independent susceptibility oracle: central second difference of the free
/// energy, `chi = -[F(lambda+h) - 2 F(lambda) + F(lambda-h)] / h^2`.
///
/// The three free energies are evaluated on one shared panel set (refined
/// adaptively for the central field): the quadrature truncation error then
/// varies smoothly in lambda and cancels in the second difference, which
/// would otherwise drown in noise amplified by 1/h^2.
///
/// Meaningful when `T > 0` or the gap is large against the step scale.
pub fn susceptibility_fd(
    p: ModelParams,
    t: ThermalPoint,
    h: f64,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParams(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    if p.lambda() < h {
        return Err(Error::InvalidParams(format!(
            "lambda = {} leaves no room for a backward step h = {h}",
            p.lambda()
        )));
    }
    let (gamma, lambda) = (p.gamma(), p.lambda());
    let spec = spec_with_gap_splits(p, quad);
    let free_energy_at = |l: f64, edges: &[f64]| -> Result<f64> {
        match t.beta() {
            None => Ok(-integrate_on_edges(|k| dispersion_raw(k, gamma, l), edges)? / PI),
            Some(beta) => {
                let temp = t.temperature();
                let r = integrate_on_edges(|k| ln_cosh(beta * dispersion_raw(k, gamma, l)), edges)?;
                Ok(-temp * LN_2 - temp / PI * r)
            }
        }
    };
    let edges = match t.beta() {
        None => adaptive_panel_edges(|k| dispersion_raw(k, gamma, lambda), 0.0, PI, &spec)?,
        Some(beta) => adaptive_panel_edges(
            |k| ln_cosh(beta * dispersion_raw(k, gamma, lambda)),
            0.0,
            PI,
            &spec,
        )?,
    };
    let f_plus = free_energy_at(lambda + h, &edges)?;
    let f_mid = free_energy_at(lambda, &edges)?;
    let f_minus = free_energy_at(lambda - h, &edges)?;
    Ok(-(f_plus - 2.0 * f_mid + f_minus) / (h * h))
}
