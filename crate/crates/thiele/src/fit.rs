//! Builders: greedy adaptive ordering and the order-sensitive baseline.

use thiserror::Error;

use crate::model::{eval_parts, ThieleModel};
use crate::sample::SampleSet;

/// Default relative stopping tolerance for the adaptive builder.
pub const DEFAULT_TOL: f64 = 5e-15;

/// Stopping tolerance and order cap for [`fit_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    /// Relative stopping tolerance: the build stops once the largest error
    /// over the remaining points drops below `tol` times the largest
    /// remaining `|f|` (absolute comparison when that scale is zero).
    /// Must be positive.
    pub tol: f64,
    /// Optional cap on the model order `m`.
    pub max_order: Option<usize>,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_order: None }
    }
}

/// Diagnostics from an adaptive fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    /// Number of interpolation points consumed (model order plus one).
    pub steps_taken: usize,
    /// True when the stopping criterion fired before the points were
    /// exhausted: every remaining error was already below tolerance.
    pub stopped_early: bool,
    /// `|C(x_i) - f_i|` for every original sample, in input order.
    pub node_errors: Vec<f64>,
    /// Set when a candidate had to be skipped or the build was cut short
    /// (non-finite inverse difference at the selected point, or a zero
    /// final coefficient rejected).
    pub diagnostics: Option<String>,
}

/// Division by zero in the inverse-difference recursion: the continued
/// fraction does not exist for this point ordering. `step` is the index of
/// the point whose incorporation failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("denominator of zero was produced at step {step}")]
pub struct BreakdownError {
    pub step: usize,
}

/// Index of the sample with the smallest `|f|`, ties broken by lowest
/// index. Starting there means a zero of the underlying function, when
/// present in the data, is represented exactly by the first coefficient.
pub fn select_first_point(data: &SampleSet) -> usize {
    let fs = data.fs();
    let mut best = 0;
    for (i, &f) in fs.iter().enumerate().skip(1) {
        if f.abs() < fs[best].abs() {
            best = i;
        }
    }
    best
}

/// Working state of the adaptive builder: for every not-yet-selected point
/// `x_j` it carries the current-level inverse difference candidate, which
/// may be `±inf` (IEEE division by zero is allowed at non-selected entries
/// and is required for zero coefficients to appear later).
struct ResidualState {
    rr: Vec<f64>,
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl ResidualState {
    fn new(data: &SampleSet, skip: usize) -> Self {
        let mut xs = data.xs().to_vec();
        let mut fs = data.fs().to_vec();
        xs.remove(skip);
        fs.remove(skip);
        Self { rr: fs.clone(), xs, fs }
    }

    fn len(&self) -> usize {
        self.xs.len()
    }

    fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Advances every candidate one recursion level:
    /// `rr_j <- (x_j - z_prev) / (rr_j - a_prev)`.
    fn advance(&mut self, z_prev: f64, a_prev: f64) {
        for (rr, &x) in self.rr.iter_mut().zip(&self.xs) {
            *rr = (x - z_prev) / (*rr - a_prev);
        }
    }

    fn take(&mut self, j: usize) -> (f64, f64, f64) {
        (self.xs.remove(j), self.fs.remove(j), self.rr.remove(j))
    }

    /// Largest `|f|` over the remaining points; the scale of the relative
    /// stopping criterion.
    fn value_scale(&self) -> f64 {
        self.fs.iter().fold(0.0, |m: f64, &f| m.max(f.abs()))
    }

    /// Absolute errors of the given partial fraction at the remaining points.
    fn errors(&self, nodes: &[f64], coeffs: &[f64]) -> Vec<f64> {
        self.xs
            .iter()
            .zip(&self.fs)
            .map(|(&x, &f)| (eval_parts(nodes, coeffs, x) - f).abs())
            .collect()
    }
}

/// Builds the interpolating continued fraction with greedy point ordering.
///
/// The first node is picked by [`select_first_point`]. Every later step
/// evaluates the current convergent at the remaining points and selects the
/// point with the largest error (ties broken by lowest index); picking a
/// point the convergent does not yet interpolate is exactly what keeps every
/// coefficient finite. The build stops once the largest remaining error
/// drops below `cfg.tol` times the largest remaining `|f|`, which both
/// detects data that is rational to machine precision and keeps a zero from
/// ever landing in the final coefficient.
///
/// Floating point can still hand the selected point a non-finite inverse
/// difference, or a zero one at what would be the last accepted term; such
/// candidates are skipped in favour of the next-largest error with a usable
/// value, and the report carries a diagnostic. If no candidate qualifies the
/// build stops at the current order.
///
/// The returned model interpolates `f` at every selected node up to
/// rounding; `report.node_errors` covers all original samples. Identical
/// inputs produce bitwise-identical models.
///
/// # Panics
///
/// Panics if `cfg.tol` is not strictly positive.
pub fn fit_adaptive(data: &SampleSet, cfg: FitConfig) -> (ThieleModel, FitReport) {
    assert!(cfg.tol > 0.0, "tolerance must be positive");

    let first = select_first_point(data);
    let mut nodes = vec![data.xs()[first]];
    let mut coeffs = vec![data.fs()[first]];
    let mut state = ResidualState::new(data, first);
    let max_order = cfg.max_order.unwrap_or(data.len() - 1);

    let mut stopped_early = false;
    let mut diagnostics: Vec<String> = Vec::new();

    while !state.is_empty() && nodes.len() - 1 < max_order {
        let errs = state.errors(&nodes, &coeffs);
        let scale = state.value_scale();
        let threshold = if scale > 0.0 { cfg.tol * scale } else { cfg.tol };
        let max_err = errs.iter().fold(0.0, |m: f64, &e| m.max(e));
        if max_err < threshold {
            stopped_early = true;
            break;
        }

        let k = nodes.len();
        state.advance(nodes[k - 1], coeffs[k - 1]);

        // Candidates in decreasing error order, restricted to errors at or
        // above the threshold so that the selected point is never one the
        // current convergent already interpolates.
        let mut order: Vec<usize> = (0..state.len()).filter(|&j| errs[j] >= threshold).collect();
        order.sort_by(|&a, &b| errs[b].partial_cmp(&errs[a]).unwrap().then(a.cmp(&b)));

        let mut chosen = None;
        for &j in &order {
            let cand = state.rr[j];
            if !cand.is_finite() {
                diagnostics.push(format!(
                    "skipped x = {} at step {k}: non-finite inverse difference",
                    state.xs[j]
                ));
                continue;
            }
            if cand == 0.0 && zero_would_be_final(&nodes, &coeffs, &state, j, k, max_order, cfg.tol)
            {
                diagnostics.push(format!(
                    "rejected x = {} at step {k}: zero final inverse difference",
                    state.xs[j]
                ));
                continue;
            }
            chosen = Some(j);
            break;
        }

        match chosen {
            Some(j) => {
                let (z, _f, a) = state.take(j);
                nodes.push(z);
                coeffs.push(a);
            }
            None => {
                diagnostics.push(format!("no usable candidate at step {k}; build stopped"));
                break;
            }
        }
    }

    // An abnormal stop can strand a zero that was accepted mid-fraction in
    // the final slot; drop such terms rather than return a degenerate model.
    while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
        coeffs.pop();
        nodes.pop();
        diagnostics.push("trailing zero coefficient dropped".to_string());
    }

    let model = ThieleModel::new(nodes, coeffs).expect("builder maintains model invariants");
    let node_errors = data
        .points()
        .map(|(x, f)| (model.eval(x) - f).abs())
        .collect();
    let report = FitReport {
        steps_taken: model.order() + 1,
        stopped_early,
        node_errors,
        diagnostics: if diagnostics.is_empty() { None } else { Some(diagnostics.join("; ")) },
    };
    (model, report)
}

/// Whether accepting remaining point `j` with a zero inverse difference
/// would make that zero the final coefficient: either no points are left
/// afterwards (or the order cap is hit), or the extended fraction already
/// fits everything left below tolerance.
fn zero_would_be_final(
    nodes: &[f64],
    coeffs: &[f64],
    state: &ResidualState,
    j: usize,
    k: usize,
    max_order: usize,
    tol: f64,
) -> bool {
    if state.len() == 1 || k == max_order {
        return true;
    }
    let mut t_nodes = nodes.to_vec();
    let mut t_coeffs = coeffs.to_vec();
    t_nodes.push(state.xs[j]);
    t_coeffs.push(0.0);
    let mut max_err = 0.0_f64;
    let mut scale = 0.0_f64;
    for (i, (&x, &f)) in state.xs.iter().zip(&state.fs).enumerate() {
        if i == j {
            continue;
        }
        max_err = max_err.max((eval_parts(&t_nodes, &t_coeffs, x) - f).abs());
        scale = scale.max(f.abs());
    }
    let threshold = if scale > 0.0 { tol * scale } else { tol };
    max_err < threshold
}

/// Builds the continued fraction taking the points strictly in input order.
///
/// Incorporating point `k` drives its value through the inverse-difference
/// recursion against the coefficients fixed so far; the construction stops
/// with [`BreakdownError`] the moment any denominator is exactly zero, when
/// a diagonal entry comes out non-finite, or when the last coefficient is
/// exactly zero. Whether that happens depends on the input ordering, not on
/// the solvability of the interpolation problem — two successive points with
/// equal values, or three successive collinear points, already trigger it.
pub fn fit_fixed_order(data: &SampleSet) -> Result<ThieleModel, BreakdownError> {
    let xs = data.xs();
    let fs = data.fs();
    let mut nodes = vec![xs[0]];
    let mut coeffs = vec![fs[0]];

    for k in 1..xs.len() {
        // Chain f_k upward: v_i = (x_k - z_{i-1}) / (v_{i-1} - a_{i-1}).
        let mut v = fs[k];
        for i in 1..=k {
            let denom = v - coeffs[i - 1];
            if denom == 0.0 {
                return Err(BreakdownError { step: k });
            }
            v = (xs[k] - nodes[i - 1]) / denom;
        }
        if !v.is_finite() {
            return Err(BreakdownError { step: k });
        }
        nodes.push(xs[k]);
        coeffs.push(v);
    }

    if coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
        return Err(BreakdownError { step: xs.len() - 1 });
    }
    Ok(ThieleModel::new(nodes, coeffs).expect("checked above"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newman::newman_points;

    fn samples(xs: &[f64], fs: &[f64]) -> SampleSet {
        SampleSet::new(xs.to_vec(), fs.to_vec()).unwrap()
    }

    #[test]
    fn first_point_prefers_zero_value() {
        let data = samples(&[-1.0, 0.0, 1.0], &[1.0, 0.0, 1.0]);
        assert_eq!(select_first_point(&data), 1);
    }

    #[test]
    fn first_point_ties_break_low() {
        let data = samples(&[1.0, 2.0], &[3.0, 3.0]);
        assert_eq!(select_first_point(&data), 0);
    }

    #[test]
    fn first_point_on_newman_data_is_the_origin() {
        let data = newman_points(5).unwrap();
        let i = select_first_point(&data);
        assert_eq!(data.xs()[i], 0.0);
    }

    #[test]
    fn adaptive_reproduces_reciprocal_data() {
        // f(x) = 1/(1+x) at 0, 1, 2. Smallest |f| is at x = 2, then the
        // greedy order and exact inverse differences give
        // nodes (2, 0, 1), coeffs (1/3, -3, -1/3).
        let data = samples(&[0.0, 1.0, 2.0], &[1.0, 0.5, 1.0 / 3.0]);
        let (model, report) = fit_adaptive(&data, FitConfig::default());
        assert_eq!(model.order(), 2);
        assert_eq!(model.nodes(), &[2.0, 0.0, 1.0]);
        let expect = [1.0 / 3.0, -3.0, -1.0 / 3.0];
        for (a, e) in model.coeffs().iter().zip(expect) {
            assert!((a - e).abs() <= 1e-12 * e.abs(), "coeff {a} vs {e}");
        }
        for err in &report.node_errors {
            assert!(*err <= 1e-12);
        }
        assert!(!report.stopped_early);
        // Exact rational reproduction extends beyond the data.
        let v = model.eval(4.0);
        assert!((v - 0.2).abs() <= 1e-12 * 0.2, "got {v}");
    }

    #[test]
    fn adaptive_constant_data_stops_at_order_zero() {
        let data = samples(&[0.0, 1.0, 2.0, 3.0], &[4.0, 4.0, 4.0, 4.0]);
        let (model, report) = fit_adaptive(&data, FitConfig::default());
        assert_eq!(model.order(), 0);
        assert_eq!(model.coeffs(), &[4.0]);
        assert!(report.stopped_early);
        assert_eq!(report.steps_taken, 1);
    }

    #[test]
    fn adaptive_all_zero_data_uses_absolute_criterion() {
        let data = samples(&[0.0, 1.0, 2.0], &[0.0, 0.0, 0.0]);
        let (model, report) = fit_adaptive(&data, FitConfig::default());
        assert_eq!(model.order(), 0);
        assert!(report.stopped_early);
    }

    #[test]
    fn adaptive_line_data_stops_at_order_one() {
        let xs: Vec<f64> = (0..11).map(|i| -3.0 + 0.7 * i as f64).collect();
        let fs: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let data = SampleSet::new(xs, fs).unwrap();
        let (model, report) = fit_adaptive(&data, FitConfig::default());
        assert_eq!(model.order(), 1);
        assert!(report.stopped_early);
        let sup = report.node_errors.iter().fold(0.0_f64, |m, &e| m.max(e));
        assert!(sup < 1e-13, "sup node error {sup}");
    }

    #[test]
    fn adaptive_newman_consumes_all_points() {
        let data = newman_points(5).unwrap();
        let (model, report) = fit_adaptive(&data, FitConfig::default());
        assert_eq!(model.order(), 10);
        assert!(!report.stopped_early);
        assert_eq!(report.steps_taken, 11);
    }

    #[test]
    fn adaptive_respects_order_cap() {
        let data = newman_points(4).unwrap();
        let cfg = FitConfig { max_order: Some(3), ..FitConfig::default() };
        let (model, _) = fit_adaptive(&data, cfg);
        assert_eq!(model.order(), 3);
    }

    #[test]
    #[should_panic(expected = "tolerance must be positive")]
    fn adaptive_rejects_nonpositive_tolerance() {
        let data = samples(&[0.0, 1.0], &[1.0, 2.0]);
        fit_adaptive(&data, FitConfig { tol: 0.0, max_order: None });
    }

    #[test]
    fn fixed_order_matches_hand_recursion() {
        let data = samples(&[0.0, 1.0, 2.0], &[1.0, 0.5, 1.0 / 3.0]);
        let model = fit_fixed_order(&data).unwrap();
        assert_eq!(model.nodes(), &[0.0, 1.0, 2.0]);
        let expect = [1.0, -2.0, -1.0];
        for (a, e) in model.coeffs().iter().zip(expect) {
            assert!((a - e).abs() <= 1e-12 * e.abs(), "coeff {a} vs {e}");
        }
    }

    #[test]
    fn fixed_order_breaks_on_equal_values() {
        let data = samples(&[1.0, 2.0], &[3.0, 3.0]);
        assert_eq!(fit_fixed_order(&data), Err(BreakdownError { step: 1 }));
    }

    #[test]
    fn fixed_order_breaks_on_newman_points() {
        for n in [1, 2, 5] {
            let data = newman_points(n).unwrap();
            let err = fit_fixed_order(&data).expect_err("ordered points must break");
            assert!(err.step >= 1);
        }
    }

    #[test]
    fn fixed_order_breakdown_message_mirrors_the_maple_error() {
        let data = samples(&[1.0, 2.0], &[3.0, 3.0]);
        let msg = fit_fixed_order(&data).unwrap_err().to_string();
        assert!(msg.contains("denominator of zero was produced"), "{msg}");
    }

    #[test]
    fn fits_are_deterministic() {
        let data = newman_points(7).unwrap();
        let (a, _) = fit_adaptive(&data, FitConfig::default());
        let (b, _) = fit_adaptive(&data, FitConfig::default());
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(a.nodes()), bits(b.nodes()));
        assert_eq!(bits(a.coeffs()), bits(b.coeffs()));
    }

    #[test]
    fn single_point_fit() {
        let data = samples(&[2.5], &[-1.5]);
        let (model, report) = fit_adaptive(&data, FitConfig::default());
        assert_eq!(model.order(), 0);
        assert_eq!(model.eval(2.5), -1.5);
        assert!(!report.stopped_early);
        let fixed = fit_fixed_order(&data).unwrap();
        assert_eq!(fixed.coeffs(), &[-1.5]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn random_data() -> impl Strategy<Value = SampleSet> {
            proptest::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 1..20).prop_map(
                |mut pts| {
                    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                    pts.dedup_by(|a, b| a.0 == b.0);
                    let (xs, fs) = pts.into_iter().unzip();
                    SampleSet::new(xs, fs).unwrap()
                },
            )
        }

        proptest! {
            /// At every accepted step the selected point's error meets the
            /// threshold, so the previous convergent never interpolates it —
            /// the hypothesis that keeps the coefficients finite.
            #[test]
            fn greedy_steps_select_points_above_threshold(data in random_data()) {
                let cfg = FitConfig::default();
                let (model, _) = fit_adaptive(&data, cfg);
                for k in 1..=model.order() {
                    let nodes = &model.nodes()[..k];
                    let coeffs = &model.coeffs()[..k];
                    let remaining: Vec<(f64, f64)> = data
                        .points()
                        .filter(|(x, _)| !nodes.contains(x))
                        .collect();
                    let scale = remaining.iter().fold(0.0_f64, |m, &(_, f)| m.max(f.abs()));
                    let threshold = if scale > 0.0 { cfg.tol * scale } else { cfg.tol };
                    let z = model.nodes()[k];
                    let f = data.points().find(|(x, _)| *x == z).unwrap().1;
                    let err = (eval_parts(nodes, coeffs, z) - f).abs();
                    prop_assert!(err >= threshold, "step {k}: error {err} < {threshold}");
                    prop_assert!(err > 0.0);
                }
            }

            /// Every returned coefficient is finite and the order never
            /// exceeds the sample count minus one.
            #[test]
            fn coefficients_stay_finite(data in random_data()) {
                let (model, _) = fit_adaptive(&data, FitConfig::default());
                prop_assert!(model.order() < data.len());
                for a in model.coeffs() {
                    prop_assert!(a.is_finite());
                }
            }

            /// When the stopping criterion fires, every point left over is
            /// already matched below tolerance.
            #[test]
            fn early_stop_is_sound(data in random_data()) {
                let cfg = FitConfig::default();
                let (model, report) = fit_adaptive(&data, cfg);
                if report.stopped_early {
                    let leftover: Vec<(f64, f64)> = data
                        .points()
                        .filter(|(x, _)| !model.nodes().contains(x))
                        .collect();
                    let scale = leftover.iter().fold(0.0_f64, |m, &(_, f)| m.max(f.abs()));
                    let threshold = if scale > 0.0 { cfg.tol * scale } else { cfg.tol };
                    for (x, f) in leftover {
                        let err = (model.eval(x) - f).abs();
                        prop_assert!(err < threshold, "leftover error {err} >= {threshold}");
                    }
                }
            }
        }
    }
}
