//! Fiberwise addition on `X_S` with `sigma_S` as the identity.
//!
//! On a regular fiber `b` the sum of two canonical points is given by one of
//! two closed forms, depending on which of the sections `sigma_1`, `sigma_2` is
//! used as the origin of the time coordinates:
//!
//! * `Add1`: `(e^{-S1-iS2} p1 p2, e^{S1-iS2} q1 / conj(p2))`
//! * `Add2`: `(p1 / conj(q2), q1 q2)`
//!
//! Exactly one of the two lands in the formal domain, and
//! [`select_branch`] picks it. On the singular fiber the law degenerates to
//! `(C*, x)`, with the singular point absorbing.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::model::{
    checked_arg, flow, section_unchecked, wrap_angle, ComplexValue, ModelParams, PointC2,
    SectionKind, TimePair,
};
use crate::neighborhood::{normalize, CanonicalPoint};

/// Relative tolerance for two fiber values to count as equal.
pub const FIBER_REL_TOL: f64 = 1e-12;

/// Which section serves as the origin of the raw addition formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionBranch {
    /// `Add1`, origin `sigma_1`.
    SigmaOne,
    /// `Add2`, origin `sigma_2`.
    SigmaTwo,
}

/// A linear change of trivialization `H -> A H` of the base.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrivializationMatrix(Matrix2<f64>);

impl TrivializationMatrix {
    pub fn new(rows: [[f64; 2]; 2]) -> Result<Self> {
        let m = Matrix2::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1]);
        let scale = m.norm_squared().max(f64::MIN_POSITIVE);
        let det = m.determinant().abs();
        if det.is_nan() || det <= 1e-12 * scale {
            return Err(Error::SingularMatrix);
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.0
    }
}

/// The addition formulas, with an optional distortion of the `e^{S1}` factor
/// in `Add1`. Only the verification suite's negative controls use a
/// non-standard law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdditionLaw {
    s1_factor_scale: f64,
}

impl Default for AdditionLaw {
    fn default() -> Self {
        Self::STANDARD
    }
}

impl AdditionLaw {
    pub const STANDARD: AdditionLaw = AdditionLaw {
        s1_factor_scale: 1.0,
    };

    /// `Add1` with `e^{S1}` replaced by `scale * e^{S1}`.
    pub fn with_scaled_s1_factor(scale: f64) -> Self {
        Self {
            s1_factor_scale: scale,
        }
    }

    pub fn add_formal(
        &self,
        x: &CanonicalPoint,
        y: &CanonicalPoint,
        branch: SelectionBranch,
        params: &ModelParams,
    ) -> Result<PointC2> {
        let b = common_fiber(x, y)?;
        if is_zero(b) {
            return Err(Error::SingularFiberInput);
        }
        self.formal_at(x.point(), y.point(), branch, b, params)
    }

    fn formal_at(
        &self,
        x: &PointC2,
        y: &PointC2,
        branch: SelectionBranch,
        b: ComplexValue,
        params: &ModelParams,
    ) -> Result<PointC2> {
        match branch {
            SelectionBranch::SigmaOne => {
                if is_zero(y.p) {
                    return Err(Error::SingularFiberInput);
                }
                let v = params.invariant().eval(b);
                let k = self.s1_factor_scale;
                let p = ComplexValue::new(-v.s1, -v.s2).exp() / k * x.p * y.p;
                let q = ComplexValue::new(v.s1, -v.s2).exp() * k * x.q / y.p.conj();
                Ok(PointC2::new(p, q))
            }
            SelectionBranch::SigmaTwo => {
                if is_zero(y.q) {
                    return Err(Error::SingularFiberInput);
                }
                Ok(PointC2::new(x.p / y.q.conj(), x.q * y.q))
            }
        }
    }

    /// The full addition, including the singular fiber.
    pub fn add(
        &self,
        x: &CanonicalPoint,
        y: &CanonicalPoint,
        params: &ModelParams,
    ) -> Result<CanonicalPoint> {
        if on_singular_fiber(x) || on_singular_fiber(y) {
            if !(on_singular_fiber(x) && on_singular_fiber(y)) {
                return Err(mismatch(x.fiber(), y.fiber()));
            }
            return add_singular(x, y, params);
        }
        let b = common_fiber(x, y)?;
        let branch = branch_at(x.point(), y.point(), b, params);
        let raw = self.formal_at(x.point(), y.point(), branch, b, params)?;
        normalize(&raw, params)
    }
}

fn is_zero(z: ComplexValue) -> bool {
    z.norm_sqr() == 0.0
}

fn on_singular_fiber(x: &CanonicalPoint) -> bool {
    is_zero(x.point().p) || is_zero(x.point().q)
}

fn mismatch(a: ComplexValue, b: ComplexValue) -> Error {
    Error::FiberMismatch(a.to_string(), b.to_string())
}

/// Shared fiber value of two points, within [`FIBER_REL_TOL`].
pub fn common_fiber(x: &CanonicalPoint, y: &CanonicalPoint) -> Result<ComplexValue> {
    let (bx, by) = (x.fiber(), y.fiber());
    let scale = bx.norm().max(by.norm());
    if (bx - by).norm() > FIBER_REL_TOL * scale {
        return Err(mismatch(bx, by));
    }
    Ok((bx + by) * 0.5)
}

fn branch_at(x: &PointC2, y: &PointC2, b: ComplexValue, params: &ModelParams) -> SelectionBranch {
    let s1 = params.invariant().eval(b).s1;
    if (x.q * y.q).norm() >= (-s1).exp() * b.norm() {
        SelectionBranch::SigmaTwo
    } else {
        SelectionBranch::SigmaOne
    }
}

/// Raw output of `Add1` or `Add2`, not normalized.
pub fn add_formal(
    x: &CanonicalPoint,
    y: &CanonicalPoint,
    branch: SelectionBranch,
    params: &ModelParams,
) -> Result<PointC2> {
    AdditionLaw::STANDARD.add_formal(x, y, branch, params)
}

/// The branch whose raw output lies in the formal domain:
/// `SigmaTwo` iff `|q1 q2| >= e^{-S1(b)} |b|`.
pub fn select_branch(
    x: &CanonicalPoint,
    y: &CanonicalPoint,
    params: &ModelParams,
) -> Result<SelectionBranch> {
    let b = common_fiber(x, y)?;
    if is_zero(b) {
        return Err(Error::SingularFiberInput);
    }
    Ok(branch_at(x.point(), y.point(), b, params))
}

/// `x + y` in `X_S`.
pub fn add(x: &CanonicalPoint, y: &CanonicalPoint, params: &ModelParams) -> Result<CanonicalPoint> {
    AdditionLaw::STANDARD.add(x, y, params)
}

fn add_singular(
    x: &CanonicalPoint,
    y: &CanonicalPoint,
    params: &ModelParams,
) -> Result<CanonicalPoint> {
    if x.is_singular_point() && y.is_singular_point() {
        return Err(Error::UndefinedAtDoublePoint);
    }
    if x.is_singular_point() || y.is_singular_point() {
        return Ok(CanonicalPoint::singular_point());
    }
    let v = params.invariant().eval(ComplexValue::new(0.0, 0.0));
    let zero = ComplexValue::new(0.0, 0.0);
    let (a, b) = (x.point(), y.point());
    let raw = match (is_zero(a.q), is_zero(b.q)) {
        // (p1, 0) + (p2, 0)
        (true, true) => PointC2::new(a.p * b.p * ComplexValue::new(-v.s1, -v.s2).exp(), zero),
        // (0, q1) + (0, q2)
        (false, false) => PointC2::new(zero, a.q * b.q),
        (true, false) => mixed_singular(a.p, b.q, v.s1, v.s2),
        (false, true) => mixed_singular(b.p, a.q, v.s1, v.s2),
    };
    normalize(&raw, params)
}

/// `(p, 0) + (0, q)`; the boundary `|p/q| = e^{S1(0)}` goes to the first case.
fn mixed_singular(p: ComplexValue, q: ComplexValue, s1: f64, s2: f64) -> PointC2 {
    let zero = ComplexValue::new(0.0, 0.0);
    if p.norm() <= s1.exp() * q.norm() {
        PointC2::new(p / q.conj(), zero)
    } else {
        PointC2::new(zero, ComplexValue::new(s1, -s2).exp() * q / p.conj())
    }
}

/// The identity `sigma_S(b)` as a canonical point.
pub fn identity(b: ComplexValue, params: &ModelParams) -> Result<CanonicalPoint> {
    let s = crate::model::section(SectionKind::SigmaS, b, params)?;
    normalize(&s, params)
}

/// Group inverse; the singular point has none.
pub fn inverse(x: &CanonicalPoint, params: &ModelParams) -> Result<CanonicalPoint> {
    if x.is_singular_point() {
        return Err(Error::NoInverseAtSingularPoint);
    }
    if on_singular_fiber(x) {
        let z = cstar_from_fiber(x, params)?;
        return cstar_to_fiber(z.inv(), params);
    }
    let pt = x.point();
    let b = pt.fiber();
    normalize(&PointC2::new(-b.conj() * pt.q.conj(), pt.q.inv()), params)
}

/// The isomorphism `C* -> F_s \ {s}`.
pub fn cstar_to_fiber(z: ComplexValue, params: &ModelParams) -> Result<CanonicalPoint> {
    if is_zero(z) {
        return Err(Error::ZeroInput);
    }
    let zero = ComplexValue::new(0.0, 0.0);
    let raw = if z.norm() <= 1.0 {
        let v = params.invariant().eval(zero);
        PointC2::new(z * ComplexValue::new(v.s1, v.s2).exp(), zero)
    } else {
        PointC2::new(zero, z.conj().inv())
    };
    normalize(&raw, params)
}

/// Inverse of [`cstar_to_fiber`].
pub fn cstar_from_fiber(x: &CanonicalPoint, params: &ModelParams) -> Result<ComplexValue> {
    if x.is_singular_point() {
        return Err(Error::SingularPointInput);
    }
    let pt = x.point();
    if is_zero(pt.q) {
        let v = params.invariant().eval(ComplexValue::new(0.0, 0.0));
        Ok(pt.p * ComplexValue::new(-v.s1, -v.s2).exp())
    } else if is_zero(pt.p) {
        Ok(pt.q.conj().inv())
    } else {
        Err(Error::NotOnSingularFiber)
    }
}

/// Flow times carrying `origin` to `x` on a common regular fiber.
fn times_from(origin: &PointC2, x: &PointC2) -> Result<TimePair> {
    let arg_x = checked_arg(x.p).map_err(|_| Error::SingularFiberInput)?;
    let arg_o = checked_arg(origin.p).map_err(|_| Error::SingularFiberInput)?;
    Ok(TimePair::new(
        x.p.norm().ln() - origin.p.norm().ln(),
        arg_x - arg_o,
    ))
}

/// Addition straight from the definition: Liouville times of `x` and `y`
/// relative to `origin`, taken in the trivialization `A H`, summed, and flowed.
pub fn add_with_origin(
    origin: &PointC2,
    x: &CanonicalPoint,
    y: &CanonicalPoint,
    a: &TrivializationMatrix,
    params: &ModelParams,
) -> Result<CanonicalPoint> {
    let b = common_fiber(x, y)?;
    if is_zero(b) {
        return Err(Error::SingularFiberInput);
    }
    // flowing G = A H for times s equals flowing H for times A^T s
    let at = a.0.transpose();
    let lu = at.lu();
    let to_g = |t: TimePair| -> Result<Vector2<f64>> {
        lu.solve(&Vector2::new(t.t1, t.t2))
            .ok_or(Error::SingularMatrix)
    };
    let s = to_g(times_from(origin, x.point())?)? + to_g(times_from(origin, y.point())?)?;
    let back = at * s;
    let raw = flow(origin, TimePair::new(back[0], back[1]));
    normalize(&raw, params)
}

/// Independent route to [`add`] through Liouville coordinates based at `sigma_S`.
pub fn add_via_liouville(
    x: &CanonicalPoint,
    y: &CanonicalPoint,
    a: &TrivializationMatrix,
    params: &ModelParams,
) -> Result<CanonicalPoint> {
    let b = common_fiber(x, y)?;
    let origin = section_unchecked(SectionKind::SigmaS, b, params.invariant());
    add_with_origin(&origin, x, y, a, params)
}

/// Re-expresses an addition triple for the section `flow(sigma_S, t(b))`:
/// `z' = normalize(flow(z, -t(b)))`.
pub fn change_section<F>(
    triple: [CanonicalPoint; 3],
    shift: F,
    params: &ModelParams,
) -> Result<[CanonicalPoint; 3]>
where
    F: Fn(ComplexValue) -> TimePair,
{
    let [x, y, z] = triple;
    if z.is_singular_point() {
        return Ok(triple);
    }
    let t = shift(z.fiber());
    let moved = normalize(&flow(z.point(), -t), params)?;
    Ok([x, y, moved])
}

/// Recovers `(S1(b), S2(b))` by solving for the flow time that carries
/// `sigma_2(b)` onto `sigma_1(b)`.
pub fn recover_partials(b: ComplexValue, params: &ModelParams) -> Result<(f64, f64)> {
    if is_zero(b) {
        return Err(Error::SingularFiber);
    }
    let from = crate::model::section(SectionKind::Sigma2, b, params)?;
    let target = crate::model::section(SectionKind::Sigma1, b, params)?;
    let arg_b = checked_arg(b)?;

    // damped Newton for z = t1 + i t2 in e^z p_from = p_target,
    // started from the S = 0 period
    let mut z = ComplexValue::new(-b.norm().ln(), arg_b - std::f64::consts::PI);
    let residual = |z: ComplexValue| z.exp() * from.p - target.p;
    let scale = target.p.norm();
    let mut r = residual(z);
    let mut converged = false;
    for _ in 0..200 {
        if r.norm() <= 1e-15 * scale {
            converged = true;
            break;
        }
        let step = -r / (z.exp() * from.p);
        let mut alpha = 1.0;
        loop {
            let trial = z + step * alpha;
            let rt = residual(trial);
            if rt.norm() < (1.0 - 0.5 * alpha) * r.norm() || alpha < 1e-12 {
                z = trial;
                r = rt;
                break;
            }
            alpha *= 0.5;
        }
    }
    if !converged && r.norm() > 1e-13 * scale {
        return Err(Error::NoConvergence);
    }
    let t = TimePair::new(z.re, z.im);
    let landed = flow(&from, t);
    if landed.max_abs_diff(&target) > 1e-12 * (1.0 + target.q.norm() + scale) {
        return Err(Error::NoConvergence);
    }
    Ok((
        t.t1 + b.norm().ln(),
        wrap_angle(t.t2 - arg_b + std::f64::consts::PI),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{InvariantPolynomial, ParamLimits};
    use crate::neighborhood::{quotient_distance, RegionTag};

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn wide() -> ModelParams {
        ModelParams::with_limits(
            0.5,
            0.3,
            InvariantPolynomial::zero(),
            ParamLimits::relaxed(),
        )
        .unwrap()
    }

    fn canon(p: f64, q: f64, params: &ModelParams) -> CanonicalPoint {
        normalize(&PointC2::real(p, q), params).unwrap()
    }

    fn generic() -> ModelParams {
        let s = InvariantPolynomial::from_terms([(1, 0, 0.3), (0, 1, 0.2), (1, 1, 0.1)]).unwrap();
        ModelParams::new(0.1, 0.3, s).unwrap()
    }

    #[test]
    fn add1_identity() {
        let params = generic();
        let b = c(0.03, -0.04);
        let x = normalize(&PointC2::new(c(0.2, 0.3), -b / c(0.2, -0.3)), &params).unwrap();
        let e = identity(b, &params).unwrap();
        let out = add_formal(&x, &e, SelectionBranch::SigmaOne, &params).unwrap();
        assert!(out.max_abs_diff(x.point()) < 1e-15);
    }

    #[test]
    fn formal_branches() {
        let params = wide();
        let x = canon(0.5, 0.5, &params);
        let two = add_formal(&x, &x, SelectionBranch::SigmaTwo, &params).unwrap();
        assert!(two.max_abs_diff(&PointC2::real(1.0, 0.25)) < 1e-15);
        let one = add_formal(&x, &x, SelectionBranch::SigmaOne, &params).unwrap();
        assert!(one.max_abs_diff(&PointC2::real(0.25, 1.0)) < 1e-15);
        assert!(quotient_distance(&one, &two, &params) < 1e-15);
    }

    #[test]
    fn select_branch_examples() {
        let params = wide();
        let pick = |p, q| {
            let x = canon(p, q, &params);
            select_branch(&x, &x, &params).unwrap()
        };
        assert_eq!(pick(0.5, 0.5), SelectionBranch::SigmaTwo);
        assert_eq!(pick(0.9, 0.1), SelectionBranch::SigmaOne);
        assert_eq!(pick(0.1, 0.9), SelectionBranch::SigmaTwo);
    }

    #[test]
    fn formal_rejects_bad_input() {
        let params = wide();
        let x = canon(0.5, 0.5, &params);
        let y = canon(0.5, 0.4, &params);
        assert!(matches!(
            add_formal(&x, &y, SelectionBranch::SigmaOne, &params),
            Err(Error::FiberMismatch(..))
        ));
        let s = canon(0.5, 0.0, &params);
        assert_eq!(
            add_formal(&s, &s, SelectionBranch::SigmaOne, &params),
            Err(Error::SingularFiberInput)
        );
    }

    #[test]
    fn add_examples() {
        let params = wide();
        let x = canon(0.9, 0.1, &params);
        let out = add(&x, &x, &params).unwrap();
        assert!(out.point().max_abs_diff(&PointC2::real(0.81, 0.1 / 0.9)) < 1e-15);

        let e = identity(x.fiber(), &params).unwrap();
        assert!(
            add(&x, &e, &params)
                .unwrap()
                .point()
                .max_abs_diff(x.point())
                < 1e-15
        );

        let out = add(
            &canon(0.5, 0.0, &params),
            &canon(0.0, 0.5, &params),
            &params,
        )
        .unwrap();
        assert_eq!(*out.point(), PointC2::real(1.0, 0.0));

        let s = CanonicalPoint::singular_point();
        assert_eq!(add(&s, &s, &params), Err(Error::UndefinedAtDoublePoint));
        assert!(add(&s, &canon(0.3, 0.0, &params), &params)
            .unwrap()
            .is_singular_point());
        assert!(add(&canon(0.0, 0.3, &params), &s, &params)
            .unwrap()
            .is_singular_point());
        assert!(matches!(
            add(&canon(0.3, 0.0, &params), &x, &params),
            Err(Error::FiberMismatch(..))
        ));
    }

    #[test]
    fn singular_mixed_second_branch() {
        let params = ModelParams::standard();
        // |p/q| = 2 > 1
        let out = add(
            &canon(0.5, 0.0, &params),
            &canon(0.0, 0.25, &params),
            &params,
        )
        .unwrap();
        assert!(out.point().max_abs_diff(&PointC2::real(0.0, 0.5)) < 1e-15);
    }

    #[test]
    fn singular_mixed_second_branch_phase() {
        // the q-branch carries e^{S1(0) - i S2(0)}
        let s = InvariantPolynomial::from_terms([(1, 0, 0.2), (0, 1, 0.4)]).unwrap();
        let params = ModelParams::new(0.1, 0.3, s).unwrap();
        let x = canon(0.9, 0.0, &params);
        let y = canon(0.0, 0.3, &params);
        let out = add(&x, &y, &params).unwrap();
        let zx = cstar_from_fiber(&x, &params).unwrap();
        let zy = cstar_from_fiber(&y, &params).unwrap();
        let expected = cstar_to_fiber(zx * zy, &params).unwrap();
        assert!(out.point().max_abs_diff(expected.point()) < 1e-15);
        let direct = c(0.2, -0.4).exp() * c(0.3, 0.0) / c(0.9, 0.0);
        assert!((out.point().q - direct).norm() < 1e-15);
    }

    #[test]
    fn inverse_examples() {
        let params = wide();
        let x = canon(0.8, 0.5, &params);
        let inv = inverse(&x, &params).unwrap();
        assert!(inv.point().max_abs_diff(&PointC2::real(0.5, 0.8)) < 1e-15);
        let sum = add(&x, &inv, &params).unwrap();
        let e = identity(x.fiber(), &params).unwrap();
        assert!(quotient_distance(sum.point(), e.point(), &params) < 1e-15);

        assert!(
            inverse(&e, &params)
                .unwrap()
                .point()
                .max_abs_diff(e.point())
                < 1e-15
        );

        let p = canon(0.6, 0.0, &params);
        let inv = inverse(&p, &params).unwrap();
        assert!(inv.point().max_abs_diff(&PointC2::real(0.0, 0.6)) < 1e-15);
        let sum = add(&p, &inv, &params).unwrap();
        assert!(sum.point().max_abs_diff(&PointC2::real(1.0, 0.0)) < 1e-15);

        assert_eq!(
            inverse(&CanonicalPoint::singular_point(), &params),
            Err(Error::NoInverseAtSingularPoint)
        );
    }

    #[test]
    fn cstar_examples() {
        let params = ModelParams::standard();
        let one = cstar_to_fiber(c(1.0, 0.0), &params).unwrap();
        assert_eq!(*one.point(), PointC2::real(1.0, 0.0));
        let two = cstar_to_fiber(c(2.0, 0.0), &params).unwrap();
        assert_eq!(*two.point(), PointC2::real(0.0, 0.5));
        let a = cstar_to_fiber(c(0.5, 0.0), &params).unwrap();
        let b = cstar_to_fiber(c(4.0, 0.0), &params).unwrap();
        assert_eq!(*b.point(), PointC2::real(0.0, 0.25));
        let sum = add(&a, &b, &params).unwrap();
        assert!(sum.point().max_abs_diff(two.point()) < 1e-15);
        assert_eq!(cstar_to_fiber(c(0.0, 0.0), &params), Err(Error::ZeroInput));
        assert_eq!(
            cstar_from_fiber(&CanonicalPoint::singular_point(), &params),
            Err(Error::SingularPointInput)
        );
        assert_eq!(
            cstar_from_fiber(&canon(0.5, 0.1, &params), &params),
            Err(Error::NotOnSingularFiber)
        );
    }

    #[test]
    fn cstar_round_trip() {
        let s = InvariantPolynomial::from_terms([(1, 0, -0.3), (0, 1, 0.7)]).unwrap();
        let params = ModelParams::new(0.1, 0.3, s).unwrap();
        for &z in &[c(0.3, 0.4), c(-2.0, 1.0), c(0.0, -1.0), c(5.0, 0.1)] {
            let pt = cstar_to_fiber(z, &params).unwrap();
            assert!(crate::neighborhood::classify(pt.point(), &params).contains(&RegionTag::D));
            let back = cstar_from_fiber(&pt, &params).unwrap();
            assert!((back - z).norm() < 1e-14 * z.norm());
        }
    }

    #[test]
    fn liouville_route_examples() {
        let params = wide();
        let x = canon(0.5, 0.5, &params);
        let direct = add(&x, &x, &params).unwrap();
        let id = add_via_liouville(&x, &x, &TrivializationMatrix::identity(), &params).unwrap();
        assert!(quotient_distance(id.point(), &PointC2::real(1.0, 0.25), &params) < 1e-14);
        assert!(quotient_distance(id.point(), direct.point(), &params) < 1e-14);
        let a = TrivializationMatrix::new([[2.0, 0.0], [0.0, 1.0]]).unwrap();
        let scaled = add_via_liouville(&x, &x, &a, &params).unwrap();
        assert!(quotient_distance(scaled.point(), direct.point(), &params) < 1e-14);
        let e = identity(x.fiber(), &params).unwrap();
        let sheared = TrivializationMatrix::new([[1.0, 3.0], [-0.5, 2.0]]).unwrap();
        let out = add_via_liouville(&x, &e, &sheared, &params).unwrap();
        assert!(quotient_distance(out.point(), x.point(), &params) < 1e-13);
        assert_eq!(
            TrivializationMatrix::new([[1.0, 2.0], [2.0, 4.0]]),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn change_section_examples() {
        let params = generic();
        let b = c(0.02, 0.05);
        let x = normalize(&PointC2::new(c(0.4, 0.1), -b / c(0.4, -0.1)), &params).unwrap();
        let y = normalize(&PointC2::new(c(-0.2, 0.6), -b / c(-0.2, -0.6)), &params).unwrap();
        let z = add(&x, &y, &params).unwrap();
        let same = change_section([x, y, z], |_| TimePair::ZERO, &params).unwrap();
        assert_eq!(same, [x, y, z]);
        let shifted = change_section(
            [x, y, z],
            |_| TimePair::new(0.0, std::f64::consts::PI),
            &params,
        )
        .unwrap();
        let expected = normalize(
            &flow(z.point(), TimePair::new(0.0, -std::f64::consts::PI)),
            &params,
        )
        .unwrap();
        assert_eq!(shifted[2], expected);
        let s = CanonicalPoint::singular_point();
        let fixed = change_section([s, s, s], |_| TimePair::new(0.3, 1.0), &params).unwrap();
        assert!(fixed.iter().all(|p| p.is_singular_point()));
    }

    #[test]
    fn change_section_matches_shifted_origin() {
        let params = generic();
        let shift = |b: ComplexValue| TimePair::new(0.1 + b.re, 0.5 - 2.0 * b.im);
        let b = c(-0.04, 0.03);
        let x = normalize(&PointC2::new(c(0.7, 0.1), -b / c(0.7, -0.1)), &params).unwrap();
        let y = normalize(&PointC2::new(c(0.1, -0.3), -b / c(0.1, 0.3)), &params).unwrap();
        let z = add(&x, &y, &params).unwrap();
        let [_, _, moved] = change_section([x, y, z], shift, &params).unwrap();
        let origin = flow(
            &section_unchecked(SectionKind::SigmaS, b, params.invariant()),
            shift(b),
        );
        let oracle =
            add_with_origin(&origin, &x, &y, &TrivializationMatrix::identity(), &params).unwrap();
        assert!(quotient_distance(moved.point(), oracle.point(), &params) < 1e-12);
    }

    #[test]
    fn recover_partials_examples() {
        let params = wide();
        let (s1, s2) = recover_partials(c(-0.25, 0.0), &params).unwrap();
        assert!(s1.abs() < 1e-12 && s2.abs() < 1e-12);
        let lin = ModelParams::with_limits(
            0.3,
            0.1,
            InvariantPolynomial::from_terms([(1, 0, 1.0)]).unwrap(),
            ParamLimits::relaxed(),
        )
        .unwrap();
        let (s1, s2) = recover_partials(c(-0.25, 0.0), &lin).unwrap();
        assert!((s1 - 1.0).abs() < 1e-12 && s2.abs() < 1e-12);
        assert_eq!(
            recover_partials(c(0.0, 0.0), &params),
            Err(Error::SingularFiber)
        );
    }
}
