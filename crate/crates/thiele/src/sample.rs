//! Interpolation data: distinct abscissae with finite values.

use thiserror::Error;

/// Errors raised while validating interpolation data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SampleError {
    #[error("sample set must contain at least one point")]
    Empty,
    #[error("got {xs} abscissae but {fs} values")]
    LengthMismatch { xs: usize, fs: usize },
    #[error("abscissa at index {index} is not finite")]
    NonFiniteAbscissa { index: usize },
    #[error("value at index {index} is not finite")]
    NonFiniteValue { index: usize },
    #[error("duplicate abscissa x = {x}")]
    DuplicateAbscissa { x: f64 },
}

/// A set of interpolation points `(x_i, f_i)` with pairwise-distinct `x_i`
/// and finite `f_i`. Construction validates; the fields are immutable
/// afterwards, so a `SampleSet` can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    xs: Vec<f64>,
    fs: Vec<f64>,
}

impl SampleSet {
    /// Builds a sample set, rejecting empty data, length mismatches,
    /// non-finite entries and exact duplicate abscissae. Near-duplicates
    /// are accepted; deduplication beyond bit-exact equality is the
    /// caller's responsibility.
    pub fn new(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self, SampleError> {
        if xs.len() != fs.len() {
            return Err(SampleError::LengthMismatch { xs: xs.len(), fs: fs.len() });
        }
        if xs.is_empty() {
            return Err(SampleError::Empty);
        }
        for (index, &x) in xs.iter().enumerate() {
            if !x.is_finite() {
                return Err(SampleError::NonFiniteAbscissa { index });
            }
        }
        for (index, &f) in fs.iter().enumerate() {
            if !f.is_finite() {
                return Err(SampleError::NonFiniteValue { index });
            }
        }
        let mut sorted = xs.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(SampleError::DuplicateAbscissa { x: pair[0] });
            }
        }
        Ok(Self { xs, fs })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn fs(&self) -> &[f64] {
        &self.fs
    }

    /// Iterates over `(x_i, f_i)` pairs in input order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.fs.iter().copied())
    }

    /// Value `f_i` for an abscissa that is known to be in the set
    /// (bit-exact match).
    pub(crate) fn value_at(&self, x: f64) -> Option<f64> {
        self.xs.iter().position(|&xi| xi == x).map(|i| self.fs[i])
    }
}
