//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use xychain::criticality::{
    collapse_curves, collapse_quality, critical_exponent_nu, find_pseudocritical, fit_kappa1,
    fit_kappa2, linear_fit, pseudocritical_exponent, xx_magnetization, ApproachSide,
    PseudocritSearch, LAMBDA_C,
};
use xychain::geophase::{ground_state_gp, thermal_gp, thermal_gp_mode_sum};
use xychain::grid::logspace;
use xychain::model::ModelParams;
use xychain::quadrature::QuadratureSpec;
use xychain::thermo::{
    free_energy, free_energy_finite_n, magnetization, magnetization_finite_n, susceptibility,
    susceptibility_fd, susceptibility_finite_n, ThermalPoint,
};
use xychain::Error;

fn quad() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn tight() -> QuadratureSpec {
    QuadratureSpec {
        rel_tol: 1e-13,
        abs_tol: 1e-16,
        max_subdivisions: 4000,
        forced_splits: Vec::new(),
    }
}

fn params(gamma: f64, lambda: f64) -> ModelParams {
    ModelParams::new(gamma, lambda).unwrap()
}

fn temp(t: f64) -> ThermalPoint {
    ThermalPoint::new(t).unwrap()
}

fn report(id: u32, name: &str, detail: String) {
    println!("acceptance {id:02} {name}: PASS ({detail})");
}

/// Criterion 1: kappa_2 at gamma = 1 equals 1/pi within 0.5%, R^2 > 0.9999.
#[test]
fn criterion_01_kappa2_exactness() {
    let deltas = logspace(1e-6, 1e-3, 20);
    let fit = fit_kappa2(1.0, &deltas, ApproachSide::Below, &quad()).unwrap();
    let exact = 1.0 / PI;
    let rel_err = (fit.slope.abs() - exact).abs() / exact;
    assert!(
        rel_err < 0.005,
        "|kappa2| = {} vs 1/pi = {exact} ({rel_err:.2e} relative)",
        fit.slope.abs()
    );
    assert!(fit.r_squared > 0.9999, "R^2 = {}", fit.r_squared);
    report(
        1,
        "kappa2-exactness",
        format!(
            "|kappa2|={:.6} vs 1/pi={exact:.6}, R^2={:.6}",
            fit.slope.abs(),
            fit.r_squared
        ),
    );
}

/// Criterion 2: the kappa_2 family law |kappa_2| = (gamma pi)^-1 within 1%
/// at gamma = 0.8, 0.6, 0.4.
#[test]
fn criterion_02_kappa2_family_law() {
    let deltas = logspace(1e-6, 1e-3, 20);
    let mut detail = String::new();
    for &gamma in &[0.8, 0.6, 0.4] {
        let fit = fit_kappa2(gamma, &deltas, ApproachSide::Below, &quad()).unwrap();
        let exact = 1.0 / (gamma * PI);
        let rel_err = (fit.slope.abs() - exact).abs() / exact;
        assert!(
            rel_err < 0.01,
            "gamma={gamma}: |kappa2| = {} vs {exact} ({rel_err:.2e})",
            fit.slope.abs()
        );
        detail.push_str(&format!("gamma={gamma}: {:.4}; ", fit.slope.abs()));
    }
    report(2, "kappa2-family-law", detail);
}

/// Criterion 3: nu = |kappa2/kappa1| lies in [0.98, 1.02] for gamma = 1 and 0.8.
#[test]
fn criterion_03_nu_universality() {
    let temps = logspace((-6.0f64).exp(), (-3.0f64).exp(), 7);
    let deltas = logspace(1e-6, 1e-3, 20);
    let search = PseudocritSearch::default();
    let mut detail = String::new();
    for &gamma in &[1.0, 0.8] {
        let k1 = fit_kappa1(gamma, &temps, &search, &quad()).unwrap();
        let k2 = fit_kappa2(gamma, &deltas, ApproachSide::Below, &quad()).unwrap();
        let nu = critical_exponent_nu(&k1, &k2).unwrap();
        assert!(
            (0.98..=1.02).contains(&nu),
            "gamma={gamma}: nu = {nu} (kappa1={}, kappa2={})",
            k1.slope,
            k2.slope
        );
        detail.push_str(&format!("gamma={gamma}: nu={nu:.4}; "));
    }
    report(3, "nu-universality", detail);
}

/// Criterion 4: the pseudocritical point drifts toward lambda_c as
/// T^slope with slope = 1.70 +- 0.05 at gamma = 1.
#[test]
fn criterion_04_pseudocritical_drift() {
    let temps = logspace((-6.0f64).exp(), (-3.0f64).exp(), 7);
    let fit =
        pseudocritical_exponent(1.0, &temps, &PseudocritSearch::default(), &quad()).unwrap();
    assert!(
        (fit.slope - 1.70).abs() <= 0.05,
        "drift exponent = {} (R^2 = {})",
        fit.slope,
        fit.r_squared
    );
    assert!(fit.r_squared > 0.999, "R^2 = {}", fit.r_squared);
    report(
        4,
        "pseudocritical-drift",
        format!("slope={:.4}, R^2={:.6}", fit.slope, fit.r_squared),
    );
}

/// Criterion 5: data collapse quality < 0.02 for gamma = 1 and gamma = 0.8
/// at the four low temperatures, x in [-1, 1].
#[test]
fn criterion_05_data_collapse() {
    let temps: Vec<f64> = [-3.0f64, -4.0, -5.0, -5.5].iter().map(|e| e.exp()).collect();
    let x_grid: Vec<f64> = (0..41).map(|i| -1.0 + i as f64 / 20.0).collect();
    let search = PseudocritSearch::default();
    let mut detail = String::new();
    for &gamma in &[1.0, 0.8] {
        let data = collapse_curves(gamma, &temps, &x_grid, &search, &quad()).unwrap();
        let quality = collapse_quality(&data).unwrap();
        assert!(quality < 0.02, "gamma={gamma}: collapse quality = {quality}");
        detail.push_str(&format!("gamma={gamma}: q={quality:.5}; "));
    }
    report(5, "data-collapse", detail);
}

/// Criterion 6: XX-class exponent -1/2 from a log-log fit over
/// lambda in [0.99, 0.9999], and the compact magnetization value 1/3.
#[test]
fn criterion_06_xx_class() {
    let offsets = logspace(1e-4, 1e-2, 20);
    let ln_delta: Vec<f64> = offsets.iter().map(|d| d.ln()).collect();
    let ln_chi: Vec<f64> = offsets
        .iter()
        .map(|&d| {
            susceptibility(params(0.0, 1.0 - d), ThermalPoint::zero(), &quad())
                .unwrap()
                .ln()
        })
        .collect();
    let fit = linear_fit(&ln_delta, &ln_chi).unwrap();
    assert!(
        (fit.slope + 0.5).abs() <= 0.01,
        "XX exponent slope = {}",
        fit.slope
    );

    let closed = xx_magnetization(0.5).unwrap();
    assert!(
        (closed - 1.0 / 3.0).abs() < 1e-12,
        "compact form: {closed}"
    );
    let integrated = magnetization(params(0.0, 0.5), ThermalPoint::zero(), &quad()).unwrap();
    assert!(
        (integrated - 1.0 / 3.0).abs() < 1e-8,
        "direct integration: {integrated}"
    );
    report(
        6,
        "xx-class",
        format!(
            "slope={:.5}, M_compact={closed:.14}, M_integral={integrated:.14}",
            fit.slope
        ),
    );
}

/// Criterion 7: at 50 random points with T >= 0.05 and |lambda - 1| >= 0.05,
/// the integral, finite-difference, and finite-N routes agree.
#[test]
fn criterion_07_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    let spec = tight();
    let n = 1usize << 13;
    let mut worst_fd: f64 = 0.0;
    let mut worst_n: f64 = 0.0;
    let mut worst_m: f64 = 0.0;
    for trial in 0..50 {
        let gamma = rng.gen_range(0.2..=1.0);
        let lambda = loop {
            let l = rng.gen_range(0.1..1.9);
            if (l - 1.0f64).abs() >= 0.05 {
                break l;
            }
        };
        let t = rng.gen_range(0.05..1.0);
        let p = params(gamma, lambda);
        let tp = temp(t);

        let chi = susceptibility(p, tp, &spec).unwrap();
        let chi_fd = susceptibility_fd(p, tp, 1e-4, &spec).unwrap();
        let fd_rel = ((chi - chi_fd) / chi).abs();
        assert!(
            fd_rel < 1e-6,
            "trial {trial} (gamma={gamma}, lambda={lambda}, T={t}): chi={chi} fd={chi_fd} rel={fd_rel:.2e}"
        );
        worst_fd = worst_fd.max(fd_rel);

        let f = free_energy(p, tp, &spec).unwrap();
        let m = magnetization(p, tp, &spec).unwrap();
        for (label, integral, discrete) in [
            ("F", f, free_energy_finite_n(p, tp, n).unwrap()),
            ("M", m, magnetization_finite_n(p, tp, n).unwrap()),
            ("chi", chi, susceptibility_finite_n(p, tp, n).unwrap()),
        ] {
            let diff = (integral - discrete).abs();
            assert!(
                diff < 1e-6,
                "trial {trial} {label}: integral={integral} finite-N={discrete} diff={diff:.2e}"
            );
            worst_n = worst_n.max(diff);
        }

        let h = 1e-5;
        let m_fd = -(free_energy(p.with_lambda(lambda + h).unwrap(), tp, &spec).unwrap()
            - free_energy(p.with_lambda(lambda - h).unwrap(), tp, &spec).unwrap())
            / (2.0 * h);
        let m_diff = (m - m_fd).abs();
        assert!(
            m_diff < 1e-6,
            "trial {trial}: M={m} -dF/dlambda={m_fd} diff={m_diff:.2e}"
        );
        worst_m = worst_m.max(m_diff);
    }
    report(
        7,
        "oracle-equivalence",
        format!("worst: chi_fd rel={worst_fd:.2e}, finite-N={worst_n:.2e}, M fd={worst_m:.2e}"),
    );
}

/// Criterion 8: geometric-phase identities.
#[test]
fn criterion_08_gp_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(8675309);
    let spec = tight();

    // Mode sum vs closed form at 50 random points, 1e-10.
    let mut worst_identity: f64 = 0.0;
    for trial in 0..50 {
        let gamma = rng.gen_range(0.0..=1.0);
        let lambda = rng.gen_range(0.0..2.0);
        let t = rng.gen_range(0.05..2.0);
        let n = [512usize, 1024, 4096, 8192][trial % 4];
        let p = params(gamma, lambda);
        let tp = temp(t);
        let direct = thermal_gp_mode_sum(p, tp, n).unwrap().radians();
        let closed = PI * (1.0 + magnetization_finite_n(p, tp, n).unwrap());
        let diff = (direct - closed).abs();
        assert!(
            diff < 1e-10,
            "trial {trial} (gamma={gamma}, lambda={lambda}, T={t}, N={n}): diff={diff:.2e}"
        );
        worst_identity = worst_identity.max(diff);
    }

    // d beta_g / d lambda = pi chi(T=0) away from the critical point.
    let h = 1e-5;
    let mut worst_deriv: f64 = 0.0;
    for _ in 0..10 {
        let gamma = rng.gen_range(0.3..=1.0);
        let lambda = if rng.gen_bool(0.5) {
            rng.gen_range(0.2..0.8)
        } else {
            rng.gen_range(1.2..1.8)
        };
        let fd = (ground_state_gp(params(gamma, lambda + h), &spec)
            .unwrap()
            .radians()
            - ground_state_gp(params(gamma, lambda - h), &spec)
                .unwrap()
                .radians())
            / (2.0 * h);
        let exact = PI * susceptibility(params(gamma, lambda), ThermalPoint::zero(), &spec).unwrap();
        let rel = ((fd - exact) / exact).abs();
        assert!(
            rel < 1e-6,
            "gamma={gamma} lambda={lambda}: fd={fd} pi*chi={exact} rel={rel:.2e}"
        );
        worst_deriv = worst_deriv.max(rel);
    }

    // High-temperature limit: beta_T -> pi at T = 10^3.
    let mut worst_limit: f64 = 0.0;
    for _ in 0..10 {
        let gamma = rng.gen_range(0.0..=1.0);
        let lambda = rng.gen_range(0.0..0.3);
        let gp = thermal_gp(params(gamma, lambda), temp(1e3), &quad())
            .unwrap()
            .radians();
        let diff = (gp - PI).abs();
        assert!(diff < 1e-3, "gamma={gamma} lambda={lambda}: gp={gp}");
        worst_limit = worst_limit.max(diff);
    }

    report(
        8,
        "gp-identities",
        format!(
            "worst: mode-sum={worst_identity:.2e}, derivative rel={worst_deriv:.2e}, T->inf={worst_limit:.2e}"
        ),
    );
}

/// Criterion 9: the peak-height log law holds up to T ~ 0.5 and the fitted
/// |kappa_1| approaches 1/pi as the temperature ceiling drops.
#[test]
fn criterion_09_scaling_validity_ceiling() {
    let search = PseudocritSearch::default();
    let spec = quad();
    let mut errors = Vec::new();
    let mut r2_at_half = 0.0;
    for &ceiling in &[0.5, 0.25, 0.1] {
        let temps = logspace((-6.0f64).exp(), ceiling, 12);
        let fit = fit_kappa1(1.0, &temps, &search, &spec).unwrap();
        if ceiling == 0.5 {
            r2_at_half = fit.r_squared;
            assert!(fit.r_squared > 0.99, "R^2 at ceiling 0.5: {}", fit.r_squared);
        }
        errors.push((fit.slope.abs() - 1.0 / PI).abs());
    }
    assert!(
        errors[0] > errors[1] && errors[1] > errors[2],
        "|kappa1| error not monotone over ceilings: {errors:?}"
    );
    report(
        9,
        "scaling-validity-ceiling",
        format!("R^2(0.5)={r2_at_half:.5}, |kappa1| errors {errors:?}"),
    );
}

/// Criterion 10: the divergence at the critical point, the sharpening
/// precursor maxima, and the flat-band closed value.
#[test]
fn criterion_10_divergence_and_precursors() {
    let err = susceptibility(params(1.0, 1.0), ThermalPoint::zero(), &quad()).unwrap_err();
    assert!(
        matches!(err, Error::CriticalDivergence { .. }),
        "expected CriticalDivergence, got {err:?}"
    );

    let search = PseudocritSearch::default();
    let mut prev = f64::NEG_INFINITY;
    let mut peaks = Vec::new();
    for &t in &[0.5, 0.21, 0.06, 0.02] {
        let r = find_pseudocritical(1.0, t, &search, &quad()).unwrap();
        assert!(
            r.chi_max > prev,
            "chi_max not increasing at T={t}: {} <= {prev}",
            r.chi_max
        );
        assert!((r.lambda_m - LAMBDA_C).abs() < 0.5);
        prev = r.chi_max;
        peaks.push(r.chi_max);
    }

    let chi0 = susceptibility(params(1.0, 0.0), ThermalPoint::zero(), &quad()).unwrap();
    assert!((chi0 - 0.5).abs() < 1e-10, "chi(gamma=1, lambda=0, T=0) = {chi0}");

    report(
        10,
        "divergence-and-precursors",
        format!("chi_max sequence {peaks:?}, chi(1,0,0)={chi0:.12}"),
    );
}
