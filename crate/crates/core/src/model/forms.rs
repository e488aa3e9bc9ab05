//! Constant symplectic forms in real coordinates `(p1, p2, q1, q2)` per point.

use nalgebra::Matrix4;

use crate::error::{Error, Result};

/// Which form to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// `omega_0 = dp1 ^ dq1 + dp2 ^ dq2` on one copy of C^2.
    Omega,
    /// `(-omega) + (-omega) + omega` on three copies.
    OmegaTilde,
}

/// Per-slot signs of a product form on `(C^2)^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlotSigns(pub [f64; 3]);

impl SlotSigns {
    /// The signs of `(M x M)^- x M`.
    pub const CORRESPONDENCE: SlotSigns = SlotSigns([-1.0, -1.0, 1.0]);
    /// All-positive signs; the addition graph is not isotropic for this form.
    pub const ALL_POSITIVE: SlotSigns = SlotSigns([1.0, 1.0, 1.0]);
}

/// `omega_0(v, w)` for 4-component real tangent vectors.
pub fn omega(v: &[f64; 4], w: &[f64; 4]) -> f64 {
    v[0] * w[2] - v[2] * w[0] + v[1] * w[3] - v[3] * w[1]
}

/// Matrix of `omega_0`, so that `omega(v, w) = v^T M w`.
pub fn omega_matrix() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, -1.0, 0.0, 0.0,
    )
}

/// Signed sum of `omega` over the three 4-component slots of 12-vectors.
pub fn omega_product(signs: SlotSigns, v: &[f64], w: &[f64]) -> Result<f64> {
    check_len(v, 12)?;
    check_len(w, 12)?;
    let mut total = 0.0;
    for (slot, sign) in signs.0.iter().enumerate() {
        let r = 4 * slot..4 * slot + 4;
        let vs: [f64; 4] = v[r.clone()].try_into().expect("slice of length 4");
        let ws: [f64; 4] = w[r].try_into().expect("slice of length 4");
        total += sign * omega(&vs, &ws);
    }
    Ok(total)
}

/// Evaluates `omega` (4-vectors) or `omega tilde` (12-vectors).
pub fn symplectic_form(kind: FormKind, v: &[f64], w: &[f64]) -> Result<f64> {
    match kind {
        FormKind::Omega => {
            check_len(v, 4)?;
            check_len(w, 4)?;
            let v: [f64; 4] = v.try_into().expect("checked length");
            let w: [f64; 4] = w.try_into().expect("checked length");
            Ok(omega(&v, &w))
        }
        FormKind::OmegaTilde => omega_product(SlotSigns::CORRESPONDENCE, v, w),
    }
}

fn check_len(v: &[f64], expected: usize) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        })
    }
}
