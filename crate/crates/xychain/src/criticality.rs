//! Criticality analysis: pseudocritical points, logarithmic-divergence
//! coefficients, critical exponents, universality checks, and data collapse.
//!
//! At fixed `T > 0` the susceptibility has a finite maximum at the
//! pseudocritical field `lambda_m(T)`, which drifts toward the quantum
//! critical point `lambda_c = 1` as `T -> 0`. The peak height grows as
//! `kappa_1 ln T + const`, the zero-temperature susceptibility diverges as
//! `kappa_2 ln|lambda - lambda_c| + const`, and the ratio `|kappa_2/kappa_1|`
//! estimates the correlation-length exponent `nu`. Rescaling
//! `F = 1 - exp[chi(lambda) - chi|_{lambda_m}]` against
//! `x = (lambda - lambda_m)/T` collapses the per-temperature curves.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::quadrature::QuadratureSpec;
use crate::thermo::{susceptibility, ThermalPoint};
use serde::Serialize;

/// The quantum critical point of the anisotropic family; hard-coded, never
/// re-estimated.
pub const LAMBDA_C: f64 = 1.0;

/// Susceptibility maximum at fixed temperature.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PseudocriticalResult {
    pub temperature: f64,
    pub lambda_m: f64,
    pub chi_max: f64,
}

/// Ordinary least squares in whatever coordinates the caller chose,
/// with the abscissa range kept for auditability.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
    pub x_min: f64,
    pub x_max: f64,
}

/// One rescaled susceptibility curve: `(x, F)` samples at fixed `T`.
#[derive(Debug, Clone)]
pub struct CollapseCurve {
    pub temperature: f64,
    pub points: Vec<(f64, f64)>,
}

/// The family of rescaled curves entering a collapse-quality estimate.
#[derive(Debug, Clone)]
pub struct CollapseData {
    pub curves: Vec<CollapseCurve>,
}

/// Which side of `lambda_c` the zero-temperature fit approaches from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ApproachSide {
    Below,
    Above,
}

/// Bracket, coarse-scan resolution, and refinement tolerance for the
/// pseudocritical search.
#[derive(Debug, Clone)]
pub struct PseudocritSearch {
    pub bracket: (f64, f64),
    pub coarse_points: usize,
    pub tol: f64,
}

impl Default for PseudocritSearch {
    fn default() -> Self {
        Self {
            bracket: (0.2, 1.8),
            coarse_points: 64,
            tol: 1e-7,
        }
    }
}

impl PseudocritSearch {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bracket;
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) || lo < 0.0 {
            return Err(Error::InvalidParams(format!(
                "bracket must satisfy 0 <= lo < hi, got [{lo}, {hi}]"
            )));
        }
        if self.coarse_points < 3 {
            return Err(Error::InvalidParams(
                "coarse scan needs at least 3 points".into(),
            ));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParams(format!(
                "search tolerance must be positive, got {}",
                self.tol
            )));
        }
        Ok(())
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt 5 - 1)/2

/// Golden-section maximization of `f` on `[lo, hi]` down to an interval of
/// width `tol`; returns the midpoint and the function value there.
fn golden_section_max<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let mid = 0.5 * (lo + hi);
    Ok((mid, f(mid)?))
}

/// Locate the susceptibility maximum at fixed `T > 0`: a coarse grid scan
/// over the bracket localizes the peak, golden-section refinement pins it.
///
/// Fails with `NoInteriorMaximum` when the coarse maximum sits on a bracket
/// endpoint.
pub fn find_pseudocritical(
    gamma: f64,
    temperature: f64,
    search: &PseudocritSearch,
    quad: &QuadratureSpec,
) -> Result<PseudocriticalResult> {
    search.validate()?;
    if !(temperature > 0.0) {
        return Err(Error::InvalidParams(format!(
            "pseudocritical search requires T > 0, got {temperature}"
        )));
    }
    let t = ThermalPoint::new(temperature)?;
    let chi_at = |lambda: f64| -> Result<f64> {
        susceptibility(ModelParams::new(gamma, lambda)?, t, quad)
    };

    let (lo, hi) = search.bracket;
    let n = search.coarse_points;
    let step = (hi - lo) / (n - 1) as f64;
    let mut best_idx = 0usize;
    let mut best_chi = f64::NEG_INFINITY;
    let mut grid = Vec::with_capacity(n);
    for i in 0..n {
        let lambda = if i == n - 1 { hi } else { lo + i as f64 * step };
        let chi = chi_at(lambda)?;
        if chi > best_chi {
            best_chi = chi;
            best_idx = i;
        }
        grid.push(lambda);
    }
    if best_idx == 0 || best_idx == n - 1 {
        return Err(Error::NoInteriorMaximum { lo, hi });
    }

    let (lambda_m, chi_max) =
        golden_section_max(chi_at, grid[best_idx - 1], grid[best_idx + 1], search.tol)?;
    Ok(PseudocriticalResult {
        temperature,
        lambda_m,
        chi_max,
    })
}

/// Drift exponent of the pseudocritical point: least-squares slope of
/// `ln|lambda_c - lambda_m|` against `ln T`.
pub fn pseudocritical_exponent(
    gamma: f64,
    temperatures: &[f64],
    search: &PseudocritSearch,
    quad: &QuadratureSpec,
) -> Result<LinearFit> {
    if temperatures.len() < 4 {
        return Err(Error::InvalidParams(format!(
            "drift fit needs at least 4 temperatures, got {}",
            temperatures.len()
        )));
    }
    let mut ln_t = Vec::with_capacity(temperatures.len());
    let mut ln_delta = Vec::with_capacity(temperatures.len());
    for &t in temperatures {
        let r = find_pseudocritical(gamma, t, search, quad)?;
        let delta = (LAMBDA_C - r.lambda_m).abs();
        if delta == 0.0 || !delta.ln().is_finite() {
            return Err(Error::DegenerateFit(format!(
                "|lambda_c - lambda_m| underflowed at T = {t}"
            )));
        }
        ln_t.push(t.ln());
        ln_delta.push(delta.ln());
    }
    linear_fit(&ln_t, &ln_delta)
}

/// Peak-height coefficient of `chi|_{lambda_m} ~ kappa_1 ln T + const`.
/// The slope is reported signed; `|kappa_1|` enters the exponent ratio.
pub fn fit_kappa1(
    gamma: f64,
    temperatures: &[f64],
    search: &PseudocritSearch,
    quad: &QuadratureSpec,
) -> Result<LinearFit> {
    if temperatures.len() < 4 {
        return Err(Error::InvalidParams(format!(
            "kappa_1 fit needs at least 4 temperatures, got {}",
            temperatures.len()
        )));
    }
    let (t_min, t_max) = temperatures
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &t| {
            (lo.min(t), hi.max(t))
        });
    if !(t_min > 0.0) || (t_max / t_min).ln() < 2.0 - 1e-9 {
        return Err(Error::InvalidParams(
            "kappa_1 fit needs positive temperatures spanning >= 2 e-foldings".into(),
        ));
    }
    let mut ln_t = Vec::with_capacity(temperatures.len());
    let mut chi_max = Vec::with_capacity(temperatures.len());
    for &t in temperatures {
        let r = find_pseudocritical(gamma, t, search, quad)?;
        ln_t.push(t.ln());
        chi_max.push(r.chi_max);
    }
    linear_fit(&ln_t, &chi_max)
}

/// Zero-temperature divergence coefficient of
/// `chi ~ kappa_2 ln|lambda - lambda_c| + const`, fitted against `ln delta`
/// for field offsets `delta = |lambda - lambda_c|` on the chosen side.
pub fn fit_kappa2(
    gamma: f64,
    deltas: &[f64],
    side: ApproachSide,
    quad: &QuadratureSpec,
) -> Result<LinearFit> {
    if deltas.len() < 2 {
        return Err(Error::InvalidParams(format!(
            "kappa_2 fit needs at least 2 offsets, got {}",
            deltas.len()
        )));
    }
    let mut ln_delta = Vec::with_capacity(deltas.len());
    let mut chi = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::InvalidParams(format!(
                "field offsets must be finite and >= 0, got {delta}"
            )));
        }
        let lambda = match side {
            ApproachSide::Below => LAMBDA_C - delta,
            ApproachSide::Above => LAMBDA_C + delta,
        };
        // delta = 0 lands on the critical point and surfaces the divergence.
        let value = susceptibility(ModelParams::new(gamma, lambda)?, ThermalPoint::zero(), quad)?;
        ln_delta.push(delta.ln());
        chi.push(value);
    }
    linear_fit(&ln_delta, &chi)
}

/// Correlation-length exponent from the two logarithmic coefficients,
/// `nu = |kappa_2 / kappa_1|`.
pub fn critical_exponent_nu(kappa1: &LinearFit, kappa2: &LinearFit) -> Result<f64> {
    if kappa1.slope == 0.0 {
        return Err(Error::DegenerateFit("kappa_1 slope is zero".into()));
    }
    Ok((kappa2.slope / kappa1.slope).abs())
}

/// Rescaled susceptibility curves `F(x) = 1 - exp[chi(lambda) - chi|_{lambda_m}]`
/// sampled at `lambda = lambda_m + x T` on the given grid, one curve per
/// temperature. `F(0) = 0` by construction.
pub fn collapse_curves(
    gamma: f64,
    temperatures: &[f64],
    x_grid: &[f64],
    search: &PseudocritSearch,
    quad: &QuadratureSpec,
) -> Result<CollapseData> {
    if temperatures.is_empty() {
        return Err(Error::InvalidParams("collapse needs at least one temperature".into()));
    }
    if x_grid.is_empty() {
        return Err(Error::InvalidParams("collapse needs a nonempty x grid".into()));
    }
    let mut curves = Vec::with_capacity(temperatures.len());
    for &temperature in temperatures {
        let peak = find_pseudocritical(gamma, temperature, search, quad)?;
        let t = ThermalPoint::new(temperature)?;
        let mut points = Vec::with_capacity(x_grid.len());
        for &x in x_grid {
            let lambda = peak.lambda_m + x * temperature;
            let chi = susceptibility(ModelParams::new(gamma, lambda)?, t, quad)?;
            points.push((x, 1.0 - (chi - peak.chi_max).exp()));
        }
        curves.push(CollapseCurve {
            temperature,
            points,
        });
    }
    Ok(CollapseData { curves })
}

/// How tightly the rescaled curves overlay: every curve is linearly
/// interpolated onto the shared grid and the root-mean-square of the
/// across-temperature standard deviation of `F` is returned.
pub fn collapse_quality(data: &CollapseData) -> Result<f64> {
    if data.curves.len() < 2 {
        return Err(Error::InsufficientOverlap);
    }
    let mut sorted: Vec<Vec<(f64, f64)>> = Vec::with_capacity(data.curves.len());
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for curve in &data.curves {
        if curve.points.len() < 2 {
            return Err(Error::InsufficientOverlap);
        }
        let mut pts = curve.points.clone();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        lo = lo.max(pts.first().unwrap().0);
        hi = hi.min(pts.last().unwrap().0);
        sorted.push(pts);
    }
    if !(lo <= hi) {
        return Err(Error::InsufficientOverlap);
    }
    // The first curve's abscissae inside the overlap define the shared grid.
    let shared: Vec<f64> = sorted[0]
        .iter()
        .map(|&(x, _)| x)
        .filter(|&x| x >= lo && x <= hi)
        .collect();
    if shared.is_empty() {
        return Err(Error::InsufficientOverlap);
    }

    let mut sum_var = 0.0;
    for &x in &shared {
        let values: Vec<f64> = sorted.iter().map(|pts| interp_linear(pts, x)).collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
        sum_var += var;
    }
    Ok((sum_var / shared.len() as f64).sqrt())
}

fn interp_linear(points: &[(f64, f64)], x: f64) -> f64 {
    match points.binary_search_by(|p| p.0.total_cmp(&x)) {
        Ok(i) => points[i].1,
        Err(i) => {
            // x lies inside the curve's span by construction of the overlap.
            let i = i.clamp(1, points.len() - 1);
            let (x0, y0) = points[i - 1];
            let (x1, y1) = points[i];
            y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        }
    }
}

/// Compact zero-temperature XX magnetization:
/// `M_z = 1 - (2/pi) arccos lambda` for `0 <= lambda <= 1`, saturating at 1.
pub fn xx_magnetization(lambda: f64) -> Result<f64> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidParams(format!(
            "lambda must be finite and >= 0, got {lambda}"
        )));
    }
    if lambda <= 1.0 {
        Ok(1.0 - 2.0 / std::f64::consts::PI * lambda.acos())
    } else {
        Ok(1.0)
    }
}

/// Leading XX-class susceptibility as `lambda -> 1^-`:
/// `chi_z = sqrt(2) (1 - lambda)^{-1/2}`. The exponent `-1/2` is the
/// testable content; the prefactor sits a factor of pi above the derivative
/// of the compact magnetization and is reported as-is.
pub fn xx_asymptotic_susceptibility(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParams(format!(
            "XX asymptote is defined for 0 < lambda < 1, got {lambda}"
        )));
    }
    Ok(2.0f64.sqrt() / (1.0 - lambda).sqrt())
}

/// Crossover boundary of the quantum-critical region,
/// `T_c = amplitude * |lambda - lambda_c|^{nu z}`.
pub fn crossover_temperature(lambda: f64, nu: f64, z: f64, amplitude: f64) -> f64 {
    amplitude * (lambda - LAMBDA_C).abs().powf(nu * z)
}

/// Ordinary least squares of `y` on `x` with the coefficient of
/// determination; rejects fewer than two points or constant abscissae.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidParams(format!(
            "fit needs matching coordinate lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "fit needs at least 2 points, got {n}"
        )));
    }
    let nf = n as f64;
    let mean_x = x.iter().sum::<f64>() / nf;
    let mean_y = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = x[i] - mean_x;
        let dy = y[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let ss_res: f64 = (0..n)
            .map(|i| {
                let r = y[i] - (intercept + slope * x[i]);
                r * r
            })
            .sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    let (x_min, x_max) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        n_points: n,
        x_min,
        x_max,
    })
}
