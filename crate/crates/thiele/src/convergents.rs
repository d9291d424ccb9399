//! Numerators and denominators of the truncated fractions, evaluated
//! pointwise through the three-term recurrence, plus the consistency checks
//! built on them.

use thiserror::Error;

use crate::model::ThieleModel;
use crate::sample::SampleSet;

/// Rescale once `max(|A|, |B|)` passes this; the recurrence values grow like
/// products of `(x - z_k)` and overflow doubles around order 100 otherwise.
const RESCALE_THRESHOLD: f64 = 1e100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConvergentError {
    #[error("need at least {need} sample points off the nodes, got {got}")]
    InsufficientSamples { need: usize, got: usize },
    #[error("unscaled recurrence exceeded {RESCALE_THRESHOLD:e} at index {index}")]
    Overflow { index: usize },
    #[error("node z = {z} has no matching sample")]
    NodeNotInData { z: f64 },
}

/// Pointwise values `(A_i(x), B_i(x))` of the convergent numerators and
/// denominators at a fixed `x`, for `i = -2, ..., m`.
///
/// The seeds are `(A_-2, B_-2) = (0, 1)`, `(A_-1, B_-1) = (1, 0)` and
/// `(A_0, B_0) = (a_0, 1)`; later pairs follow
///
/// ```text
/// A_i = a_i * A_{i-1} + (x - z_{i-1}) * A_{i-2}
/// B_i = a_i * B_{i-1} + (x - z_{i-1}) * B_{i-2}
/// ```
///
/// so that `A_i(x) / B_i(x)` is the order-`i` truncation of the fraction.
/// When built scaled, the live pair and its lag are jointly divided by a
/// strictly positive factor whenever they grow past `1e100`; that leaves
/// every ratio and every sign unchanged, and the cumulative `ln` of the
/// factors divided out of entry `i` is available as [`Self::scale_log`].
#[derive(Debug, Clone)]
pub struct ConvergentTrace {
    pairs: Vec<(f64, f64)>,
    scaled: bool,
    scale_log: Vec<f64>,
}

impl ConvergentTrace {
    /// Highest convergent index `m`.
    pub fn order(&self) -> usize {
        self.pairs.len() - 3
    }

    pub fn is_scaled(&self) -> bool {
        self.scaled
    }

    /// `(A_i, B_i)` as stored, `-2 <= i <= m`. For scaled traces the true
    /// values are these times `exp(scale_log(i))`.
    pub fn pair(&self, i: isize) -> (f64, f64) {
        self.pairs[(i + 2) as usize]
    }

    /// Cumulative log of the positive factors divided out of entry `i`.
    pub fn scale_log(&self, i: isize) -> f64 {
        self.scale_log[(i + 2) as usize]
    }

    /// `A_i / B_i`; the scale factors cancel.
    pub fn ratio(&self, i: isize) -> f64 {
        let (a, b) = self.pair(i);
        a / b
    }

    /// `A_m / B_m`, the value of the full fraction at `x`.
    pub fn final_ratio(&self) -> f64 {
        self.ratio(self.order() as isize)
    }
}

/// Runs the three-term recurrence for `model` at `x`.
pub fn convergent_trace(model: &ThieleModel, x: f64, scaled: bool) -> ConvergentTrace {
    let coeffs = model.coeffs();
    let nodes = model.nodes();
    let m = model.order();

    let mut pairs = Vec::with_capacity(m + 3);
    let mut scale_log = Vec::with_capacity(m + 3);
    pairs.push((0.0, 1.0));
    pairs.push((1.0, 0.0));
    pairs.push((coeffs[0], 1.0));
    scale_log.extend([0.0, 0.0, 0.0]);

    let (mut a_lag, mut b_lag) = (1.0, 0.0);
    let (mut a_cur, mut b_cur) = (coeffs[0], 1.0);
    let mut cum_log = 0.0;

    for i in 1..=m {
        let dx = x - nodes[i - 1];
        let a = coeffs[i] * a_cur + dx * a_lag;
        let b = coeffs[i] * b_cur + dx * b_lag;
        (a_lag, b_lag) = (a_cur, b_cur);
        (a_cur, b_cur) = (a, b);
        if scaled {
            let mag = a_cur.abs().max(b_cur.abs());
            if mag > RESCALE_THRESHOLD {
                // Divide the lagged pair too so the next step stays
                // consistent; the factor is positive, signs survive.
                a_cur /= mag;
                b_cur /= mag;
                a_lag /= mag;
                b_lag /= mag;
                cum_log += mag.ln();
            }
        }
        pairs.push((a_cur, b_cur));
        scale_log.push(cum_log);
    }

    ConvergentTrace { pairs, scaled, scale_log }
}

/// Checks that every two consecutive convergents of `model` differ as
/// rational functions, by finding for each `i < m` a sample `x` where the
/// cross difference `A_i B_{i+1} - A_{i+1} B_i` is nonzero relative to the
/// size of its two products. Sample points falling on a node are ignored;
/// at least `m + 2` usable points are required so a nonzero cross
/// difference, a polynomial of degree at most `m + 1`, cannot hide its
/// zeros among them. Adaptively built models always pass.
pub fn check_consecutive_distinct(
    model: &ThieleModel,
    sample_xs: &[f64],
) -> Result<bool, ConvergentError> {
    let m = model.order();
    let usable: Vec<f64> = sample_xs
        .iter()
        .copied()
        .filter(|x| !model.nodes().contains(x))
        .collect();
    if usable.len() < m + 2 {
        return Err(ConvergentError::InsufficientSamples { need: m + 2, got: usable.len() });
    }

    let traces: Vec<ConvergentTrace> =
        usable.iter().map(|&x| convergent_trace(model, x, true)).collect();

    for i in 0..m as isize {
        let mut witnessed = false;
        for t in &traces {
            let (a0, b0) = t.pair(i);
            let (a1, b1) = t.pair(i + 1);
            let lhs = a0 * b1;
            let rhs = a1 * b0;
            let scale = lhs.abs().max(rhs.abs());
            if (lhs - rhs).abs() > 1e-12 * scale {
                witnessed = true;
                break;
            }
        }
        if !witnessed {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Re-derives every accepted coefficient from the linearized residuals of
/// the two preceding convergents,
///
/// ```text
/// a_{j+1} = -(z_{j+1} - z_j) * (f(z_{j+1}) B_{j-1}(z_{j+1}) - A_{j-1}(z_{j+1}))
///                            / (f(z_{j+1}) B_j(z_{j+1})     - A_j(z_{j+1}))
/// ```
///
/// and returns the largest deviation from the stored coefficients,
/// normalized by `max(1, |a_{j+1}|)`. The traces must be unscaled — the
/// identity compares residuals across two levels and per-level scale factors
/// would contaminate the ratio — so the check fails with
/// [`ConvergentError::Overflow`] once the raw recurrence passes `1e100`,
/// which keeps it away from wide node ranges at high order.
///
/// The linearized residuals `f B - A` shrink toward rounding noise as the
/// interpolant converges, so the recomputation is meaningful for small and
/// medium orders (tight agreement up to m of a few dozen) and degrades
/// gradually beyond that.
///
/// `data` must contain every node of `model` (the model should have been
/// fitted from it).
pub fn check_phi_residual_identity(
    model: &ThieleModel,
    data: &SampleSet,
) -> Result<f64, ConvergentError> {
    let m = model.order();
    let nodes = model.nodes();
    let coeffs = model.coeffs();

    let mut worst = 0.0_f64;
    for step in 1..=m {
        let z = nodes[step];
        let f = data
            .value_at(z)
            .ok_or(ConvergentError::NodeNotInData { z })?;
        let trace = convergent_trace(model, z, false);
        for i in 0..step {
            let (a, b) = trace.pair(i as isize);
            if a.abs() > RESCALE_THRESHOLD || b.abs() > RESCALE_THRESHOLD {
                return Err(ConvergentError::Overflow { index: i });
            }
        }
        let j = step as isize - 1;
        let (a_prev, b_prev) = trace.pair(j - 1);
        let (a_cur, b_cur) = trace.pair(j);
        let recomputed = -(z - nodes[step - 1]) * (f * b_prev - a_prev) / (f * b_cur - a_cur);
        let dev = (recomputed - coeffs[step]).abs() / coeffs[step].abs().max(1.0);
        worst = worst.max(dev);
    }
    Ok(worst)
}
