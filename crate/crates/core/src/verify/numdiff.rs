//! Central-difference Jacobians and singular-value rank decisions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Central-difference Jacobian of `map` at `x` with step `step`.
///
/// Rows index outputs and columns index inputs. Real differences only: the
/// maps of interest involve complex conjugation and are not holomorphic.
pub fn jacobian<F>(map: F, x: &[f64], step: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if step.is_nan() || step <= 0.0 {
        return Err(Error::EvaluationFailed(format!(
            "step {step} must be positive"
        )));
    }
    let rows = map(x)?.len();
    let mut jac = DMatrix::zeros(rows, x.len());
    let mut probe = x.to_vec();
    for j in 0..x.len() {
        probe[j] = x[j] + step;
        let plus = map(&probe)?;
        probe[j] = x[j] - step;
        let minus = map(&probe)?;
        probe[j] = x[j];
        if plus.len() != rows || minus.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: plus.len().min(minus.len()),
            });
        }
        for i in 0..rows {
            let d = (plus[i] - minus[i]) / (2.0 * step);
            if !d.is_finite() {
                return Err(Error::EvaluationFailed(format!(
                    "non-finite difference in column {j}"
                )));
            }
            jac[(i, j)] = d;
        }
    }
    Ok(jac)
}

/// Singular values in decreasing order.
pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values exceeding `rank_tol` times the largest.
pub fn numerical_rank(m: &DMatrix<f64>, rank_tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&largest) = s.first() else {
        return 0;
    };
    s.iter().filter(|&&v| v > rank_tol * largest).count()
}
