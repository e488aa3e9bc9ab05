use crate::error::{Error, Result};
use crate::model::InvariantPolynomial;

/// Soft upper bounds on `epsilon` and `delta` applied by [`ModelParams::new`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamLimits {
    pub max_epsilon: f64,
    pub max_delta: f64,
}

impl Default for ParamLimits {
    fn default() -> Self {
        Self {
            max_epsilon: 0.25,
            max_delta: 0.5,
        }
    }
}

impl ParamLimits {
    /// Only the hard constraints `0 < epsilon < 1`, `0 < delta <= 1`.
    pub fn relaxed() -> Self {
        Self {
            max_epsilon: 1.0,
            max_delta: 1.0,
        }
    }
}

/// Fiber-disc radius, gluing strip width and the invariant of a model neighborhood.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    epsilon: f64,
    delta: f64,
    invariant: InvariantPolynomial,
}

impl ModelParams {
    pub fn new(epsilon: f64, delta: f64, invariant: InvariantPolynomial) -> Result<Self> {
        Self::with_limits(epsilon, delta, invariant, ParamLimits::default())
    }

    pub fn with_limits(
        epsilon: f64,
        delta: f64,
        invariant: InvariantPolynomial,
        limits: ParamLimits,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParams(format!(
                "epsilon = {epsilon} must lie in (0, 1)"
            )));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "delta = {delta} must lie in (0, 1]"
            )));
        }
        if epsilon > limits.max_epsilon {
            return Err(Error::InvalidParams(format!(
                "epsilon = {epsilon} exceeds the limit {}",
                limits.max_epsilon
            )));
        }
        if delta > limits.max_delta {
            return Err(Error::InvalidParams(format!(
                "delta = {delta} exceeds the limit {}",
                limits.max_delta
            )));
        }
        // every chart must stay inside X: |S1| <= ln(1/eps) - delta on the closed disc
        let bound = (1.0 / epsilon).ln() - delta;
        let s1_max = invariant.max_abs_s1_on_disc(epsilon);
        if s1_max > bound {
            return Err(Error::InvalidParams(format!(
                "max |S1| = {s1_max:.6} on the fiber disc exceeds ln(1/epsilon) - delta = {bound:.6}"
            )));
        }
        Ok(Self {
            epsilon,
            delta,
            invariant,
        })
    }

    /// `S = 0`, `epsilon = 0.1`, `delta = 0.3`.
    pub fn standard() -> Self {
        Self::new(0.1, 0.3, InvariantPolynomial::zero()).expect("standard parameters are valid")
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn invariant(&self) -> &InvariantPolynomial {
        &self.invariant
    }
}
