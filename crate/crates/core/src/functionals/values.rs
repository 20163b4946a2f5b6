//! Result carriers for functionals and inequality checks.

use serde::{Deserialize, Serialize};

/// Multiple of the combined error used for `satisfied` and `equality_case` decisions.
pub const DECISION_FACTOR: f64 = 3.0;

/// A functional value with its error estimate and the number of terms behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionalValue {
    pub value: f64,
    /// Quadrature refinement error or Monte Carlo standard error (plus any tail bound).
    pub err: f64,
    pub n_terms: u64,
    pub tag: String,
}

impl FunctionalValue {
    pub fn new(tag: impl Into<String>, value: f64, err: f64, n_terms: u64) -> Self {
        Self { value, err: err.abs(), n_terms: n_terms.max(1), tag: tag.into() }
    }

    /// An exact constant, such as the zero side of an inequality.
    pub fn exact(tag: impl Into<String>, value: f64) -> Self {
        Self::new(tag, value, 0.0, 1)
    }

    pub fn scaled(&self, factor: f64, tag: impl Into<String>) -> Self {
        Self::new(tag, self.value * factor, self.err * factor.abs(), self.n_terms)
    }

    /// Sum of two independent estimates; errors add in quadrature.
    pub fn plus(&self, other: &Self, tag: impl Into<String>) -> Self {
        Self::new(tag, self.value + other.value, self.err.hypot(other.err), self.n_terms + other.n_terms)
    }
}

/// Outcome of comparing `lhs ≥ rhs` (or `lhs = rhs` for identities).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub lhs: FunctionalValue,
    pub rhs: FunctionalValue,
    /// `lhs.value − rhs.value`.
    pub slack: f64,
    /// Combined error `sqrt(lhs.err² + rhs.err²)`.
    pub err: f64,
    /// Decision threshold applied to the slack.
    pub threshold: f64,
    pub satisfied: bool,
    pub equality_case: bool,
    /// Set for open conjectures, whose outcome is recorded but never asserted.
    pub exploratory: bool,
}

impl InequalityReport {
    /// Decides with the threshold `DECISION_FACTOR × combined error`.
    pub fn new(lhs: FunctionalValue, rhs: FunctionalValue) -> Self {
        let err = lhs.err.hypot(rhs.err);
        Self::with_threshold(lhs, rhs, DECISION_FACTOR * err)
    }

    /// Decides with `DECISION_FACTOR × err` for a slack whose error is estimated jointly
    /// rather than from the two sides separately.
    pub fn with_error(lhs: FunctionalValue, rhs: FunctionalValue, err: f64) -> Self {
        let mut r = Self::with_threshold(lhs, rhs, DECISION_FACTOR * err.abs());
        r.err = err.abs();
        r
    }

    /// Decides with an explicit absolute threshold, for checks pinned to a fixed tolerance.
    pub fn with_threshold(lhs: FunctionalValue, rhs: FunctionalValue, threshold: f64) -> Self {
        let slack = lhs.value - rhs.value;
        let err = lhs.err.hypot(rhs.err);
        Self {
            satisfied: slack >= -threshold,
            equality_case: slack.abs() <= threshold,
            lhs,
            rhs,
            slack,
            err,
            threshold,
            exploratory: false,
        }
    }

    pub fn exploratory(mut self) -> Self {
        self.exploratory = true;
        self
    }

    /// Strict inequality: the slack exceeds the decision threshold.
    pub fn strict(&self) -> bool {
        self.slack > self.threshold
    }
}
