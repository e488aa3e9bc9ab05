//! The classifying invariant `S` as a real bivariate polynomial.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::ComplexValue;

/// Value and first partials of `S` at a point `b = b1 + i b2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantValue {
    pub value: f64,
    pub s1: f64,
    pub s2: f64,
}

/// `S(b1, b2) = sum c_ij b1^i b2^j` with `c_00 = 0`.
///
/// Partials are evaluated exactly from the coefficients, so the mixed-partial
/// identity `d2 S1 = d1 S2` holds by construction.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InvariantPolynomial {
    coeffs: BTreeMap<(u32, u32), f64>,
}

impl InvariantPolynomial {
    /// The zero invariant, i.e. the standard model neighborhood.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a polynomial from `(i, j, c_ij)` triples. Repeated monomials are
    /// summed; the constant term must vanish.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, f64)>,
    {
        let mut coeffs = BTreeMap::new();
        for (i, j, c) in terms {
            if !c.is_finite() {
                return Err(Error::InvalidInvariant(format!(
                    "coefficient of b1^{i} b2^{j} is not finite"
                )));
            }
            *coeffs.entry((i, j)).or_insert(0.0) += c;
        }
        coeffs.retain(|_, c| *c != 0.0);
        if coeffs.contains_key(&(0, 0)) {
            return Err(Error::InvalidInvariant(
                "S must vanish at the critical value (c_00 = 0)".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.coeffs.iter().map(|(&(i, j), &c)| (i, j, c))
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    /// `S(b)` together with `S1 = dS/db1` and `S2 = dS/db2`.
    pub fn eval(&self, b: ComplexValue) -> InvariantValue {
        let (x, y) = (b.re, b.im);
        let mut out = InvariantValue {
            value: 0.0,
            s1: 0.0,
            s2: 0.0,
        };
        for (&(i, j), &c) in &self.coeffs {
            let xi = x.powi(i as i32);
            let yj = y.powi(j as i32);
            out.value += c * xi * yj;
            if i > 0 {
                out.s1 += c * f64::from(i) * x.powi(i as i32 - 1) * yj;
            }
            if j > 0 {
                out.s2 += c * f64::from(j) * xi * y.powi(j as i32 - 1);
            }
        }
        out
    }

    /// `e^{S1(b) + i S2(b)}`, the factor relating the sections `sigma_0` and `sigma_1`.
    pub fn phase(&self, b: ComplexValue) -> ComplexValue {
        let v = self.eval(b);
        ComplexValue::new(v.s1, v.s2).exp()
    }

    /// Largest `|S1|` over the closed disc of radius `radius`, estimated on a
    /// polar grid.
    pub fn max_abs_s1_on_disc(&self, radius: f64) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        const RINGS: usize = 64;
        const SPOKES: usize = 256;
        let mut best = self.eval(ComplexValue::new(0.0, 0.0)).s1.abs();
        for r in 1..=RINGS {
            let rho = radius * r as f64 / RINGS as f64;
            for k in 0..SPOKES {
                let theta = std::f64::consts::TAU * k as f64 / SPOKES as f64;
                let s1 = self.eval(ComplexValue::from_polar(rho, theta)).s1;
                best = best.max(s1.abs());
            }
        }
        best
    }
}
