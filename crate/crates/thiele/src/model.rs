//! The interpolating continued fraction and its evaluation.

use thiserror::Error;

use crate::exec::map_indexed;

/// Errors raised while validating a continued-fraction model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("model must contain at least one term")]
    Empty,
    #[error("got {nodes} nodes but {coeffs} coefficients")]
    LengthMismatch { nodes: usize, coeffs: usize },
    #[error("duplicate node z = {z}")]
    DuplicateNode { z: f64 },
    #[error("node at index {index} is not finite")]
    NonFiniteNode { index: usize },
    #[error("coefficient at index {index} is not finite")]
    NonFiniteCoeff { index: usize },
    #[error("final coefficient must be nonzero")]
    ZeroFinalCoeff,
}

/// An interpolating continued fraction of order `m`,
///
/// ```text
/// C(x) = a0 + (x - z0) / (a1 + (x - z1) / (... + (x - z_{m-1}) / a_m))
/// ```
///
/// with nodes `z_0..z_m` in selection order and finite coefficients
/// `a_0..a_m`. The final coefficient is nonzero whenever `m >= 1`; a zero
/// there makes the last term collapse and is rejected at construction.
/// Models are immutable and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct ThieleModel {
    nodes: Vec<f64>,
    coeffs: Vec<f64>,
}

impl ThieleModel {
    pub fn new(nodes: Vec<f64>, coeffs: Vec<f64>) -> Result<Self, ModelError> {
        if nodes.len() != coeffs.len() {
            return Err(ModelError::LengthMismatch { nodes: nodes.len(), coeffs: coeffs.len() });
        }
        if nodes.is_empty() {
            return Err(ModelError::Empty);
        }
        for (index, &z) in nodes.iter().enumerate() {
            if !z.is_finite() {
                return Err(ModelError::NonFiniteNode { index });
            }
        }
        for (index, &a) in coeffs.iter().enumerate() {
            if !a.is_finite() {
                return Err(ModelError::NonFiniteCoeff { index });
            }
        }
        let mut sorted = nodes.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(ModelError::DuplicateNode { z: pair[0] });
            }
        }
        if coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            return Err(ModelError::ZeroFinalCoeff);
        }
        Ok(Self { nodes, coeffs })
    }

    /// Order `m` of the fraction (number of terms minus one).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Nodes `z_0..z_m` in selection order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Coefficients `a_0..a_m`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Evaluates the fraction at `x` by the backward recurrence:
    /// `res = 0`, then `res = (x - z_{i-1}) / (a_i + res)` for
    /// `i = m, ..., 1`, returning `a_0 + res`.
    ///
    /// Arithmetic is plain IEEE 754 and nothing is trapped: near a pole the
    /// result is `±inf`, and when `x` coincides with a node whose partial
    /// tail sums to zero a `0/0` can yield NaN. Nudging `x` by one ulp
    /// (`f64::from_bits(x.to_bits() + 1)`) sidesteps the NaN corner.
    pub fn eval(&self, x: f64) -> f64 {
        eval_parts(&self.nodes, &self.coeffs, x)
    }

    /// Elementwise [`Self::eval`] over a slice, order preserved. Each output
    /// is bit-identical to the corresponding scalar call; with the
    /// `parallel` feature the map runs on rayon.
    pub fn eval_batch(&self, xs: &[f64]) -> Vec<f64> {
        map_indexed(xs.len(), |i| self.eval(xs[i]))
    }
}

/// Backward evaluation on raw node/coefficient slices. Shared by
/// [`ThieleModel::eval`] and the builders, which evaluate partially
/// constructed fractions.
pub(crate) fn eval_parts(nodes: &[f64], coeffs: &[f64], x: f64) -> f64 {
    let mut res = 0.0;
    for i in (1..coeffs.len()).rev() {
        res = (x - nodes[i - 1]) / (coeffs[i] + res);
    }
    coeffs[0] + res
}
