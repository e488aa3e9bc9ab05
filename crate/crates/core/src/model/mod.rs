//! The standard focus-focus system `H(p, q) = -conj(p) q` on C^2, its
//! Hamiltonian flows, Lagrangian sections and Liouville coordinates.
//!
//! Real coordinates are `p = p1 + i p2`, `q = q1 + i q2` with
//! `omega_0 = dp1 ^ dq1 + dp2 ^ dq2` and the convention `i_X omega = -dH`.
//! With these choices the flow of `H1 = Re H` is `(e^t p, e^-t q)` and the
//! flow of `H2 = Im H` is `(e^{it} p, e^{it} q)`.

mod forms;
mod invariant;
mod params;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg, Sub};

pub use forms::{omega, omega_matrix, omega_product, symplectic_form, FormKind, SlotSigns};
pub use invariant::{InvariantPolynomial, InvariantValue};
pub use params::{ModelParams, ParamLimits};

use crate::error::{Error, Result};

/// Complex scalar used for coordinates and fiber values.
pub type ComplexValue = num_complex::Complex64;

/// `1 / z`, rejecting zero.
pub fn checked_inv(z: ComplexValue) -> Result<ComplexValue> {
    if z == ComplexValue::new(0.0, 0.0) {
        Err(Error::ZeroComplex)
    } else {
        Ok(z.inv())
    }
}

/// Principal argument in `(-pi, pi]`, rejecting zero.
pub fn checked_arg(z: ComplexValue) -> Result<f64> {
    if z == ComplexValue::new(0.0, 0.0) {
        return Err(Error::ZeroComplex);
    }
    let a = z.arg();
    // atan2 returns -pi for (-x, -0.0)
    Ok(if a == -PI { PI } else { a })
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(TAU);
    if t > PI {
        t -= TAU;
    }
    t
}

/// A point `(p, q)` of C^2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointC2 {
    pub p: ComplexValue,
    pub q: ComplexValue,
}

impl PointC2 {
    pub const ORIGIN: PointC2 = PointC2 {
        p: ComplexValue::new(0.0, 0.0),
        q: ComplexValue::new(0.0, 0.0),
    };

    pub fn new(p: ComplexValue, q: ComplexValue) -> Self {
        Self { p, q }
    }

    /// Shorthand for points with real coordinates.
    pub fn real(p: f64, q: f64) -> Self {
        Self::new(ComplexValue::new(p, 0.0), ComplexValue::new(q, 0.0))
    }

    /// Fiber value `b = -conj(p) q`.
    pub fn fiber(&self) -> ComplexValue {
        -self.p.conj() * self.q
    }

    pub fn is_origin(&self) -> bool {
        self.p.norm_sqr() == 0.0 && self.q.norm_sqr() == 0.0
    }

    pub fn to_real(&self) -> [f64; 4] {
        [self.p.re, self.p.im, self.q.re, self.q.im]
    }

    pub fn from_real(x: &[f64]) -> Self {
        Self::new(ComplexValue::new(x[0], x[1]), ComplexValue::new(x[2], x[3]))
    }

    /// Largest coordinate-wise deviation in real coordinates.
    pub fn max_abs_diff(&self, other: &PointC2) -> f64 {
        self.to_real()
            .iter()
            .zip(other.to_real())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Moves the point onto the fiber `target` by rescaling `q`; `p` is kept.
    ///
    /// Useful for snapping noisy data onto a common fiber before adding.
    pub fn with_fiber(&self, target: ComplexValue) -> Result<Self> {
        if self.p.norm_sqr() == 0.0 {
            return Err(Error::DivisionAtSingularBranch);
        }
        Ok(Self::new(self.p, -target / self.p.conj()))
    }
}

impl fmt::Display for PointC2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}{:+}i, {}{:+}i)",
            self.p.re, self.p.im, self.q.re, self.q.im
        )
    }
}

/// Flow times `(t1, t2)` for `(H1, H2)`; `t2` is meaningful modulo `2 pi`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TimePair {
    pub t1: f64,
    pub t2: f64,
}

impl TimePair {
    pub const ZERO: TimePair = TimePair { t1: 0.0, t2: 0.0 };

    pub fn new(t1: f64, t2: f64) -> Self {
        Self { t1, t2 }
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.t1 * k, self.t2 * k)
    }

    /// Distance modulo the rotation lattice generated by `(0, 2 pi)`.
    pub fn distance_mod_rotation(&self, other: &TimePair) -> f64 {
        (self.t1 - other.t1)
            .abs()
            .max(wrap_angle(self.t2 - other.t2).abs())
    }
}

impl Add for TimePair {
    type Output = TimePair;
    fn add(self, o: TimePair) -> TimePair {
        TimePair::new(self.t1 + o.t1, self.t2 + o.t2)
    }
}

impl Sub for TimePair {
    type Output = TimePair;
    fn sub(self, o: TimePair) -> TimePair {
        TimePair::new(self.t1 - o.t1, self.t2 - o.t2)
    }
}

impl Neg for TimePair {
    type Output = TimePair;
    fn neg(self) -> TimePair {
        TimePair::new(-self.t1, -self.t2)
    }
}

/// The period lattice of a regular fiber of `X_S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodLattice {
    pub gen_rotation: TimePair,
    pub gen_monodromy: TimePair,
}

impl PeriodLattice {
    pub fn at(b: ComplexValue, params: &ModelParams) -> Result<Self> {
        Ok(Self {
            gen_rotation: TimePair::new(0.0, TAU),
            gen_monodromy: travel_time(b, params)?,
        })
    }

    /// `m * rotation + n * monodromy`.
    pub fn element(&self, m: i32, n: i32) -> TimePair {
        self.gen_rotation.scale(f64::from(m)) + self.gen_monodromy.scale(f64::from(n))
    }
}

/// Lagrangian sections of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionKind {
    /// `(1, -b)`
    Sigma0,
    /// `sigma_0` flowed by `(S1(b), S2(b))`
    Sigma1,
    /// `(-conj(b), 1)`
    Sigma2,
    /// The descended section of `X_S`, represented by the `sigma_1` formula.
    SigmaS,
}

/// The fiber value `b = -conj(p) q = H1 + i H2`.
pub fn hamiltonian(pt: &PointC2) -> ComplexValue {
    pt.fiber()
}

/// Time-`t` map of the commuting `H1`, `H2` flows.
pub fn flow(pt: &PointC2, t: TimePair) -> PointC2 {
    let rot = ComplexValue::from_polar(1.0, t.t2);
    let grow = t.t1.exp();
    PointC2::new(pt.p * rot * grow, pt.q * rot / grow)
}

/// Value of a section on the fiber `b`.
pub fn section(kind: SectionKind, b: ComplexValue, params: &ModelParams) -> Result<PointC2> {
    check_fiber(b, params)?;
    Ok(section_unchecked(kind, b, params.invariant()))
}

pub(crate) fn section_unchecked(
    kind: SectionKind,
    b: ComplexValue,
    s: &InvariantPolynomial,
) -> PointC2 {
    match kind {
        SectionKind::Sigma0 => PointC2::new(ComplexValue::new(1.0, 0.0), -b),
        SectionKind::Sigma1 | SectionKind::SigmaS => {
            let v = s.eval(b);
            let p = ComplexValue::new(v.s1, v.s2).exp();
            let q = -ComplexValue::new(-v.s1, v.s2).exp() * b;
            PointC2::new(p, q)
        }
        SectionKind::Sigma2 => PointC2::new(-b.conj(), ComplexValue::new(1.0, 0.0)),
    }
}

/// Time for `sigma_2` to flow onto `sigma_1`: one period of `sigma_S` on fiber `b`.
pub fn travel_time(b: ComplexValue, params: &ModelParams) -> Result<TimePair> {
    check_fiber(b, params)?;
    travel_time_unchecked(b, params.invariant())
}

pub(crate) fn travel_time_unchecked(b: ComplexValue, s: &InvariantPolynomial) -> Result<TimePair> {
    let arg = checked_arg(b).map_err(|_| Error::SingularFiber)?;
    let v = s.eval(b);
    Ok(TimePair::new(v.s1 - b.norm().ln(), v.s2 + arg - PI))
}

/// Liouville coordinates `Psi(b, t) = flow(section(b), t)`.
pub fn liouville(
    kind: SectionKind,
    b: ComplexValue,
    t: TimePair,
    params: &ModelParams,
) -> Result<PointC2> {
    Ok(flow(&section(kind, b, params)?, t))
}

fn check_fiber(b: ComplexValue, params: &ModelParams) -> Result<()> {
    let modulus = b.norm();
    if modulus < params.epsilon() {
        Ok(())
    } else {
        Err(Error::FiberOutOfRange {
            modulus,
            epsilon: params.epsilon(),
        })
    }
}
