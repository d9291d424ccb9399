//! Geometric point sets for interpolating `|x|` and the convergence study
//! over a range of set sizes.
//!
//! For a size parameter `n` the sample set is the `2n + 1` points
//!
//! ```text
//! (-1, -eta, ..., -eta^(n-1), 0, eta^(n-1), ..., eta, 1),   eta = exp(-1/sqrt(n))
//! ```
//!
//! with values `|x|`. Rational interpolants on these points converge
//! root-exponentially, so the log error plotted against `sqrt(n)` is
//! close to a straight, downward-sloping line.

use thiserror::Error;

use crate::convergents::convergent_trace;
use crate::exec::map_indexed;
use crate::fit::{fit_adaptive, FitConfig};
use crate::model::ThieleModel;
use crate::sample::SampleSet;

/// A ratio magnitude past this, somewhere in a bracket where the
/// denominator changes sign, is what separates a reportable pole from a
/// removable near-cancellation.
const POLE_RATIO_THRESHOLD: f64 = 1e6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NewmanError {
    #[error("point-set size must be at least 1, got {n}")]
    InvalidN { n: usize },
}

/// Size parameter `n` together with the derived ratio `eta = exp(-1/sqrt(n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewmanConfig {
    n: usize,
    eta: f64,
}

impl NewmanConfig {
    pub fn new(n: usize) -> Result<Self, NewmanError> {
        if n < 1 {
            return Err(NewmanError::InvalidN { n });
        }
        Ok(Self { n, eta: (-1.0 / (n as f64).sqrt()).exp() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Geometric ratio of the point set, strictly between 0 and 1.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The `2n + 1` points with values `|x|`. The left half is
    /// `-eta^j` for `j = 0..n`, mirrored exactly on the right around the
    /// included origin, so the set is symmetric bit for bit.
    pub fn points(&self) -> SampleSet {
        let n = self.n;
        let mut powers = Vec::with_capacity(n);
        let mut p = 1.0;
        for _ in 0..n {
            powers.push(p);
            p *= self.eta;
        }
        let mut xs = Vec::with_capacity(2 * n + 1);
        for &q in &powers {
            xs.push(-q);
        }
        xs.push(0.0);
        for &q in powers.iter().rev() {
            xs.push(q);
        }
        let fs: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
        SampleSet::new(xs, fs).expect("points are distinct and finite")
    }
}

/// Convenience for [`NewmanConfig::points`].
pub fn newman_points(n: usize) -> Result<SampleSet, NewmanError> {
    Ok(NewmanConfig::new(n)?.points())
}

/// Largest absolute deviation of a model from a reference function over a
/// uniform grid, together with the number of NaN evaluations left out of
/// the maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupError {
    pub value: f64,
    pub nan_skipped: usize,
}

/// Max of `|C(x) - f(x)|` over `count` evenly spaced points in `[lo, hi]`
/// (endpoints included). Grid points where the difference is NaN are
/// excluded and counted instead; an infinite difference (a pole on the
/// grid) propagates into the maximum.
///
/// # Panics
///
/// Panics unless `count >= 2` and `lo < hi`.
pub fn sup_error_on_grid<F>(model: &ThieleModel, f: F, lo: f64, hi: f64, count: usize) -> SupError
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    assert!(count >= 2, "grid needs at least two points");
    assert!(lo < hi, "empty grid range");
    let errs = map_indexed(count, |i| {
        let x = grid_point(lo, hi, count, i);
        (model.eval(x) - f(x)).abs()
    });
    let mut value = 0.0_f64;
    let mut nan_skipped = 0;
    for e in errs {
        if e.is_nan() {
            nan_skipped += 1;
        } else {
            value = value.max(e);
        }
    }
    SupError { value, nan_skipped }
}

/// Euclidean norm of the interpolation error over all samples.
pub fn node_error_norm(model: &ThieleModel, data: &SampleSet) -> f64 {
    data.points()
        .map(|(x, f)| {
            let e = model.eval(x) - f;
            e * e
        })
        .sum::<f64>()
        .sqrt()
}

/// An interval bracketing a pole candidate found by [`pole_scan`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleInterval {
    pub lo: f64,
    pub hi: f64,
}

/// Scans `[lo, hi]` at `samples` uniform points for sign changes of the
/// denominator `B_m`, evaluated through the rescaled recurrence (positive
/// rescaling keeps the signs intact). A strict sign change between adjacent
/// samples brackets a pole candidate; it is discarded as a removable
/// near-cancellation when the numerator `A_m` flips sign across the same
/// bracket while the ratio `|A_m / B_m|` stays below `1e6` at both ends and
/// the midpoint.
///
/// # Panics
///
/// Panics unless `samples >= 2` and `lo < hi`.
pub fn pole_scan(model: &ThieleModel, lo: f64, hi: f64, samples: usize) -> Vec<PoleInterval> {
    assert!(samples >= 2, "need at least two samples");
    assert!(lo < hi, "empty scan range");
    if model.order() == 0 {
        return Vec::new();
    }

    let evals = map_indexed(samples, |i| {
        let x = grid_point(lo, hi, samples, i);
        let t = convergent_trace(model, x, true);
        let (a, b) = t.pair(t.order() as isize);
        (a, b)
    });

    let ratio_bounded = |a: f64, b: f64| {
        let r = (a / b).abs();
        r.is_finite() && r <= POLE_RATIO_THRESHOLD
    };

    let mut out = Vec::new();
    for i in 0..samples - 1 {
        let (a0, b0) = evals[i];
        let (a1, b1) = evals[i + 1];
        if !(b0 != 0.0 && b1 != 0.0 && b0.signum() != b1.signum()) {
            continue;
        }
        let x0 = grid_point(lo, hi, samples, i);
        let x1 = grid_point(lo, hi, samples, i + 1);
        let numerator_flips = a0 != 0.0 && a1 != 0.0 && a0.signum() != a1.signum();
        if numerator_flips {
            let mid = 0.5 * (x0 + x1);
            let tm = convergent_trace(model, mid, true);
            let (am, bm) = tm.pair(tm.order() as isize);
            if ratio_bounded(a0, b0) && ratio_bounded(a1, b1) && ratio_bounded(am, bm) {
                continue; // removable: the fraction never actually blows up
            }
        }
        out.push(PoleInterval { lo: x0, hi: x1 });
    }
    out
}

/// One result row of the convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct NewmanStudyRow {
    pub n: usize,
    pub eta: f64,
    /// Order of the fitted model; equals `2n` when every point was used.
    pub order: usize,
    /// Sup error against `|x|` on the configured grid.
    pub sup_err: f64,
    /// 2-norm of the interpolation error over all `2n + 1` points.
    pub node_err_2norm: f64,
    pub poles_in_unit_interval: usize,
    pub stopped_early: bool,
}

/// Study configuration. The error grid defaults to 10000 points on
/// `[0, 0.01]` — the worst error sits next to the origin, where `|x|` has
/// its kink — and the pole scan to 20001 samples across `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub tol: f64,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_count: usize,
    pub pole_samples: usize,
}

impl StudyConfig {
    pub fn new(n_min: usize, n_max: usize) -> Self {
        Self {
            n_min,
            n_max,
            tol: crate::fit::DEFAULT_TOL,
            grid_lo: 0.0,
            grid_hi: 0.01,
            grid_count: 10_000,
            pole_samples: 20_001,
        }
    }
}

/// A study row that could not be produced.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyFailure {
    pub n: usize,
    pub message: String,
}

/// Study output: rows ordered by `n`, failed rows reported separately
/// without aborting the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct NewmanStudy {
    pub rows: Vec<NewmanStudyRow>,
    pub failures: Vec<StudyFailure>,
}

/// Runs the study for every `n` in `[n_min, n_max]`. Rows are independent
/// and run in parallel under the `parallel` feature; the output order and
/// content are deterministic either way.
///
/// # Panics
///
/// Panics unless `1 <= n_min <= n_max` and `cfg.tol > 0`.
pub fn run_newman_study(cfg: &StudyConfig) -> NewmanStudy {
    assert!(cfg.n_min >= 1, "n_min must be at least 1");
    assert!(cfg.n_min <= cfg.n_max, "n_min must not exceed n_max");

    let count = cfg.n_max - cfg.n_min + 1;
    let results = map_indexed(count, |i| study_row(cfg.n_min + i, cfg));

    let mut rows = Vec::with_capacity(count);
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(row) => rows.push(row),
            Err(failure) => failures.push(failure),
        }
    }
    NewmanStudy { rows, failures }
}

fn study_row(n: usize, cfg: &StudyConfig) -> Result<NewmanStudyRow, StudyFailure> {
    let config =
        NewmanConfig::new(n).map_err(|e| StudyFailure { n, message: e.to_string() })?;
    let data = config.points();
    let (model, report) = fit_adaptive(&data, FitConfig { tol: cfg.tol, max_order: None });
    let sup = sup_error_on_grid(&model, |x| x.abs(), cfg.grid_lo, cfg.grid_hi, cfg.grid_count);
    Ok(NewmanStudyRow {
        n,
        eta: config.eta(),
        order: model.order(),
        sup_err: sup.value,
        node_err_2norm: node_error_norm(&model, &data),
        poles_in_unit_interval: pole_scan(&model, -1.0, 1.0, cfg.pole_samples).len(),
        stopped_early: report.stopped_early,
    })
}

/// Ordinary-least-squares slope of `log10(sup_err)` against `sqrt(n)` over
/// the even-`n` rows (odd sizes put poles inside the interval and their
/// grid error is noisier). Rows with a nonpositive or non-finite error are
/// skipped; `None` when fewer than two rows remain.
pub fn even_trend_slope(rows: &[NewmanStudyRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n % 2 == 0 && r.sup_err.is_finite() && r.sup_err > 0.0)
        .map(|r| ((r.n as f64).sqrt(), r.sup_err.log10()))
        .collect();
    ols_slope(&pts)
}

pub(crate) fn ols_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in pts {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

fn grid_point(lo: f64, hi: f64, count: usize, i: usize) -> f64 {
    lo + (hi - lo) * (i as f64) / ((count - 1) as f64)
}
