//! Rational interpolation with Thiele continued fractions.
//!
//! Given samples of a function at distinct points, this crate builds an
//! interpolating continued fraction
//!
//! ```text
//! C(x) = a0 + (x - z0) / (a1 + (x - z1) / (a2 + ...))
//! ```
//!
//! whose coefficients `a_i` are inverse differences of the data. Taking the
//! points in a fixed order can hit a division by zero even when the
//! interpolation problem is solvable (two points with equal values, or three
//! collinear points, already break it). [`fit_adaptive`] instead orders the
//! points greedily — each step picks the point where the current convergent
//! is worst — which keeps every coefficient finite and doubles as a stopping
//! rule when the data is rational to machine precision. [`fit_fixed_order`]
//! is the order-sensitive construction, kept around to demonstrate the
//! breakdown.
//!
//! The [`convergents`] module evaluates the numerator/denominator pairs of
//! the truncated fractions through the standard three-term recurrence and
//! provides the consistency checks built on them (consecutive-convergent
//! distinctness, residual-ratio recovery of the coefficients, pole
//! bracketing). The [`newman`] module generates geometric point sets for
//! interpolating `|x|` and runs the convergence study over a range of set
//! sizes. The [`io`] module reads sample CSV and serializes models as JSON
//! documents with exact decimal round-trips.
//!
//! Batch evaluation, grid scans and study rows are data-parallel and run on
//! rayon when the default `parallel` feature is enabled; disabling it yields
//! a dependency-free sequential build with identical results.

pub mod convergents;
mod exec;
pub mod fit;
pub mod io;
pub mod model;
pub mod newman;
pub mod sample;

pub use fit::{fit_adaptive, fit_fixed_order, select_first_point, BreakdownError, FitConfig, FitReport};
pub use model::{ModelError, ThieleModel};
pub use sample::{SampleError, SampleSet};
