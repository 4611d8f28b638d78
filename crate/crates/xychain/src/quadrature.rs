//! Adaptive one-dimensional integration over a finite interval.
//!
//! A nested 7-point Gauss / 15-point Kronrod pair is applied per panel;
//! the difference of the two rules is the local error estimate. Panels are
//! bisected worst-first until the summed estimate meets the tolerance or
//! the subdivision budget runs out. Callers that know where an integrand
//! is non-smooth (gap minima, the `arccos lambda` kink of the XX chain)
//! seed the panel list through `forced_splits`; the near-gapless
//! integrands that arise as `lambda -> 1`, `T -> 0` are then resolved by
//! depth-first refinement toward the sharp feature.
//!
//! Evaluation and summation order are fixed, so a given call is
//! bit-reproducible run to run.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Tolerances and refinement limits for one `integrate` call.
#[derive(Debug, Clone)]
pub struct QuadratureSpec {
    /// Relative tolerance on the integral value. Must be > 0.
    pub rel_tol: f64,
    /// Absolute tolerance floor. Must be >= 0.
    pub abs_tol: f64,
    /// Maximum number of panel bisections before giving up.
    pub max_subdivisions: usize,
    /// Interior abscissae at which the initial panel list is split;
    /// strictly inside (a, b), sorted, duplicate-free.
    pub forced_splits: Vec<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            forced_splits: Vec::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    /// Copy of `self` with `extra` merged into the forced splits
    /// (sorted, deduplicated, restricted to the open interval `(a, b)`).
    pub fn with_splits(&self, extra: &[f64], a: f64, b: f64) -> Self {
        let mut splits: Vec<f64> = self
            .forced_splits
            .iter()
            .chain(extra.iter())
            .copied()
            .filter(|s| *s > a && *s < b && s.is_finite())
            .collect();
        splits.sort_by(f64::total_cmp);
        splits.dedup();
        Self {
            forced_splits: splits,
            ..self.clone()
        }
    }

    fn validate(&self, a: f64, b: f64) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::InvalidParams(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0) || !self.abs_tol.is_finite() {
            return Err(Error::InvalidParams(format!(
                "abs_tol must be >= 0, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidParams(
                "max_subdivisions must be >= 1".into(),
            ));
        }
        let mut prev = a;
        for &s in &self.forced_splits {
            if !(s > a && s < b) {
                return Err(Error::InvalidParams(format!(
                    "forced split {s} outside the open interval ({a}, {b})"
                )));
            }
            if s <= prev && prev != a {
                return Err(Error::InvalidParams(
                    "forced splits must be sorted and duplicate-free".into(),
                ));
            }
            prev = s;
        }
        Ok(())
    }
}

/// Converged (or partial) integral value with its error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
}

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
// Nodes ascend from the midpoint; Gauss nodes sit at the even indices.
const KRONROD_NODES: [f64; 8] = [
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];

const KRONROD_WEIGHTS: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];

const GAUSS_WEIGHTS: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Max-heap on the error estimate; ties broken left-to-right so refinement
// order (and thus the subdivision count) is deterministic.
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn eval_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    if !fc.is_finite() {
        return Err(Error::NonFiniteIntegrand { abscissa: center });
    }
    let mut kronrod = KRONROD_WEIGHTS[0] * fc;
    let mut gauss = GAUSS_WEIGHTS[0] * fc;
    for j in 1..8 {
        let dx = half * KRONROD_NODES[j];
        let x_lo = center - dx;
        let x_hi = center + dx;
        let f_lo = f(x_lo);
        if !f_lo.is_finite() {
            return Err(Error::NonFiniteIntegrand { abscissa: x_lo });
        }
        let f_hi = f(x_hi);
        if !f_hi.is_finite() {
            return Err(Error::NonFiniteIntegrand { abscissa: x_hi });
        }
        let pair = f_lo + f_hi;
        kronrod += KRONROD_WEIGHTS[j] * pair;
        if j % 2 == 0 {
            gauss += GAUSS_WEIGHTS[j / 2] * pair;
        }
    }
    let value = half * kronrod;
    let error = (half * (kronrod - gauss)).abs();
    Ok(Panel { a, b, value, error })
}

/// Integrate `f` over `[a, b]`.
///
/// Returns `Error::NonConvergence` (carrying the partial estimate) when the
/// subdivision budget is exhausted above tolerance, and
/// `Error::NonFiniteIntegrand` when `f` produces NaN/inf at a node.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult> {
    let (heap, frozen, subdivisions) = drive(&f, a, b, spec)?;
    Ok(finish(heap, frozen, subdivisions))
}

fn drive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(BinaryHeap<Panel>, Vec<Panel>, usize)> {
    if !a.is_finite() || !b.is_finite() || !(a < b) {
        return Err(Error::InvalidParams(format!(
            "integration interval must satisfy a < b, got [{a}, {b}]"
        )));
    }
    spec.validate(a, b)?;

    let mut edges = Vec::with_capacity(spec.forced_splits.len() + 2);
    edges.push(a);
    edges.extend_from_slice(&spec.forced_splits);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    // Panels too narrow to bisect keep contributing to the totals but are
    // never refined again.
    let mut frozen: Vec<Panel> = Vec::new();
    let mut value_sum = 0.0;
    let mut error_sum = 0.0;
    for w in edges.windows(2) {
        let panel = eval_panel(f, w[0], w[1])?;
        value_sum += panel.value;
        error_sum += panel.error;
        heap.push(panel);
    }

    let mut subdivisions = 0usize;
    loop {
        let tolerance = spec.abs_tol.max(spec.rel_tol * value_sum.abs());
        if error_sum <= tolerance {
            break;
        }
        if subdivisions >= spec.max_subdivisions || heap.is_empty() {
            let partial = finish(heap, frozen, subdivisions);
            return Err(Error::NonConvergence { partial });
        }
        let worst = heap.pop().unwrap();
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            frozen.push(worst);
            continue;
        }
        value_sum -= worst.value;
        error_sum -= worst.error;
        let left = eval_panel(f, worst.a, mid)?;
        let right = eval_panel(f, mid, worst.b)?;
        value_sum += left.value + right.value;
        error_sum += left.error + right.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    Ok((heap, frozen, subdivisions))
}

/// Panel edges of a converged adaptive run. Evaluating several nearby
/// integrands on one shared edge set keeps their quadrature errors
/// correlated, which is what makes finite-difference oracles on integral
/// quantities viable at double precision.
pub(crate) fn adaptive_panel_edges<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<f64>> {
    let result = integrate_panels(&f, a, b, spec)?;
    let mut edges: Vec<f64> = result.iter().map(|p| p.a).collect();
    edges.push(b);
    Ok(edges)
}

/// Composite evaluation on a fixed edge set, left to right; no refinement.
pub(crate) fn integrate_on_edges<F: Fn(f64) -> f64>(f: F, edges: &[f64]) -> Result<f64> {
    let mut value = 0.0;
    for w in edges.windows(2) {
        value += eval_panel(&f, w[0], w[1])?.value;
    }
    Ok(value)
}

fn integrate_panels<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Vec<Panel>> {
    let (heap, frozen, _) = drive(f, a, b, spec)?;
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Ok(panels)
}

// Final deterministic summation: panels sorted by position, left to right.
fn finish(heap: BinaryHeap<Panel>, frozen: Vec<Panel>, subdivisions: usize) -> QuadratureResult {
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = 0.0;
    let mut error = 0.0;
    for p in &panels {
        value += p.value;
        error += p.error;
    }
    QuadratureResult {
        value,
        error_estimate: error,
        subdivisions_used: subdivisions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn integrates_sine_over_half_period() {
        let r = integrate(|x| x.sin(), 0.0, PI, &QuadratureSpec::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "value={}", r.value);
    }

    #[test]
    fn integrates_constant_exactly() {
        let r = integrate(|_| 1.0, 0.0, PI, &QuadratureSpec::default()).unwrap();
        assert!((r.value - PI).abs() < 1e-14);
        assert_eq!(r.subdivisions_used, 0);
    }

    #[test]
    fn near_gapless_kernel_matches_composite_brute_force() {
        // f(k) = sin^2 k / (1 + lambda^2 - 2 lambda cos k)^{3/2} at lambda = 0.999
        // sharpens into a near-singular peak at k -> 0; the oracle is a
        // 10^7-point composite Simpson evaluation.
        let lambda = 0.999f64;
        let f = |k: f64| {
            let s = k.sin();
            s * s / (1.0 + lambda * lambda - 2.0 * lambda * k.cos()).powf(1.5)
        };
        let n = 10_000_000usize;
        let h = PI / n as f64;
        let mut acc = f(0.0) + f(PI);
        for i in 1..n {
            let w = if i % 2 == 0 { 2.0 } else { 4.0 };
            acc += w * f(i as f64 * h);
        }
        let brute = acc * h / 3.0;

        let r = integrate(f, 0.0, PI, &QuadratureSpec::default()).unwrap();
        assert!(
            ((r.value - brute) / brute).abs() < 1e-8,
            "adaptive={} brute={}",
            r.value,
            brute
        );
    }

    #[test]
    fn error_estimate_respects_tolerance_on_success() {
        let spec = QuadratureSpec::default();
        let r = integrate(|x| (3.0 * x).cos() * x.exp(), 0.0, PI, &spec).unwrap();
        assert!(r.error_estimate <= spec.abs_tol.max(spec.rel_tol * r.value.abs()));
    }

    #[test]
    fn budget_exhaustion_reports_partial_estimate() {
        let spec = QuadratureSpec {
            rel_tol: 1e-14,
            abs_tol: 0.0,
            max_subdivisions: 3,
            forced_splits: vec![],
        };
        let err = integrate(|x| (x - 0.7).abs().powf(-0.5), 0.0, 1.0, &spec).unwrap_err();
        match err {
            Error::NonConvergence { partial } => {
                assert_eq!(partial.subdivisions_used, 3);
                assert!(partial.value.is_finite());
                assert!(partial.error_estimate > 0.0);
            }
            other => panic!("expected NonConvergence, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrand_is_reported_with_location() {
        let err = integrate(
            |x| if x > 0.4 && x < 0.6 { f64::NAN } else { 1.0 },
            0.0,
            1.0,
            &QuadratureSpec::default(),
        )
        .unwrap_err();
        match err {
            Error::NonFiniteIntegrand { abscissa } => {
                assert!(abscissa > 0.4 && abscissa < 0.6);
            }
            other => panic!("expected NonFiniteIntegrand, got {other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_interval_and_splits() {
        let spec = QuadratureSpec::default();
        assert!(integrate(|x| x, 1.0, 0.0, &spec).is_err());
        let bad = QuadratureSpec {
            forced_splits: vec![2.0],
            ..QuadratureSpec::default()
        };
        assert!(integrate(|x| x, 0.0, 1.0, &bad).is_err());
    }

    #[test]
    fn with_splits_filters_sorts_and_dedups() {
        let spec = QuadratureSpec::default().with_splits(&[0.9, 0.1, 0.9, -3.0, 5.0], 0.0, 1.0);
        assert_eq!(spec.forced_splits, vec![0.1, 0.9]);
    }

    proptest! {
        // Polynomials up to the 7-point Gauss rule's degree (13) integrate to
        // machine accuracy on a single panel.
        #[test]
        fn low_order_polynomials_are_exact(coeffs in proptest::collection::vec(-2.0..2.0f64, 14)) {
            let f = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            let exact: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * PI.powi(n as i32 + 1) / (n as f64 + 1.0))
                .sum();
            let r = integrate(f, 0.0, PI, &QuadratureSpec::default()).unwrap();
            prop_assert!(
                (r.value - exact).abs() <= 1e-11 * (1.0 + exact.abs()),
                "value={} exact={}", r.value, exact
            );
        }

        #[test]
        fn linearity_within_ten_rel_tol(
            a1 in -3.0..3.0f64,
            a2 in -3.0..3.0f64,
            w1 in 0.5..4.0f64,
            w2 in 0.5..4.0f64,
        ) {
            let spec = QuadratureSpec::default();
            let f = move |x: f64| (w1 * x).sin() + a1 * x * x;
            let g = move |x: f64| (w2 * x).cos() - a2 * x;
            let alpha = 1.3;
            let beta = -0.7;
            let combined = integrate(|x| alpha * f(x) + beta * g(x), 0.0, PI, &spec).unwrap();
            let parts = alpha * integrate(f, 0.0, PI, &spec).unwrap().value
                + beta * integrate(g, 0.0, PI, &spec).unwrap().value;
            let scale = 1.0 + combined.value.abs().max(parts.abs());
            prop_assert!((combined.value - parts).abs() <= 10.0 * spec.rel_tol * scale);
        }

        // A forced split at a smooth interior point must not change the result
        // beyond the combined error estimates (plus a machine-level cushion).
        #[test]
        fn split_invariance_at_smooth_points(split in 0.3..2.8f64, w in 0.5..3.0f64) {
            let f = move |x: f64| (w * x).sin().exp();
            let plain_spec = QuadratureSpec::default();
            let split_spec = plain_spec.with_splits(&[split], 0.0, PI);
            let plain = integrate(f, 0.0, PI, &plain_spec).unwrap();
            let split = integrate(f, 0.0, PI, &split_spec).unwrap();
            let budget = plain.error_estimate + split.error_estimate
                + 1e-13 * (1.0 + plain.value.abs());
            prop_assert!((plain.value - split.value).abs() <= budget);
        }
    }
}
