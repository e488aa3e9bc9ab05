//! Chart structure of `X_S`: region membership, the deck maps that realize
//! the gluing, and normalization into the formal domain
//! `D = { |q| < 1, |p| <= e^{S1(b)} }`.
//!
//! The deck map `Up` is the time-`t(b)` flow written in closed form,
//! `Up(p, q) = (e^{S1+iS2} / conj(q), conj(p) q^2 e^{-S1+iS2})`, and `Down`
//! is its inverse. Both extend continuously across the singular fiber.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{ComplexValue, ModelParams, PointC2};

/// Relative width of the seam band at `|q| = 1`.
///
/// Points with `|q| >= 1 - SEAM_TOL` are sent through `Up`, and `|p|` up to
/// `e^{S1} / (1 - SEAM_TOL)` is accepted. The two thresholds are reciprocal, so
/// the canonical domain is still a strict fundamental domain; the shift only
/// absorbs rounding on the identified circles.
pub const SEAM_TOL: f64 = 1e-12;

const MAX_DECK_STEPS: usize = 64;

/// Named regions of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionTag {
    X,
    XPrime,
    D0,
    U,
    D,
    DPlus,
    DMinus,
    UPlus,
    UMinus,
    Sigma1Circle,
    Sigma2Circle,
    SingularFiber,
    SingularPoint,
}

/// Direction of a deck transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeckDirection {
    /// From the `|q| ~ 1` strip to the `|p| > e^{S1}` strip.
    Up,
    /// The inverse of `Up`.
    Down,
}

/// A point of `X_S`, stored as its unique representative in the formal domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalPoint(PointC2);

impl CanonicalPoint {
    pub fn point(&self) -> &PointC2 {
        &self.0
    }

    pub fn fiber(&self) -> ComplexValue {
        self.0.fiber()
    }

    pub fn is_singular_point(&self) -> bool {
        self.0.is_origin()
    }

    /// The singular point `s`.
    pub fn singular_point() -> Self {
        CanonicalPoint(PointC2::ORIGIN)
    }
}

impl From<CanonicalPoint> for PointC2 {
    fn from(c: CanonicalPoint) -> PointC2 {
        c.0
    }
}

fn s1_bound(pt: &PointC2, params: &ModelParams) -> f64 {
    params.invariant().eval(pt.fiber()).s1.exp()
}

/// All regions containing `pt`. Each region keeps its own strict or non-strict
/// inequalities.
pub fn classify(pt: &PointC2, params: &ModelParams) -> BTreeSet<RegionTag> {
    let mut tags = BTreeSet::new();
    let b = pt.fiber();
    let (ap, aq) = (pt.p.norm(), pt.q.norm());
    if ap * aq >= params.epsilon() {
        return tags;
    }
    tags.insert(RegionTag::X);
    let v = params.invariant().eval(b);
    let delta = params.delta();
    let (lo, mid, hi) = ((v.s1 - delta).exp(), v.s1.exp(), (v.s1 + delta).exp());

    if aq <= 1.0 && ap < hi {
        tags.insert(RegionTag::XPrime);
    }
    if aq < 1.0 && ap < mid {
        tags.insert(RegionTag::D0);
    }
    if lo < ap && ap < hi {
        tags.insert(RegionTag::U);
    }
    if aq < 1.0 && ap <= mid {
        tags.insert(RegionTag::D);
    }
    if (-delta).exp() < aq && aq < 1.0 {
        tags.insert(RegionTag::DPlus);
    }
    if lo < ap && ap < mid {
        tags.insert(RegionTag::DMinus);
        tags.insert(RegionTag::UMinus);
    }
    if mid < ap && ap < hi {
        tags.insert(RegionTag::UPlus);
    }
    if aq == 1.0 {
        tags.insert(RegionTag::Sigma1Circle);
    }
    if ap == mid {
        tags.insert(RegionTag::Sigma2Circle);
    }
    if b.norm_sqr() == 0.0 {
        tags.insert(RegionTag::SingularFiber);
    }
    if pt.is_origin() {
        tags.insert(RegionTag::SingularPoint);
    }
    tags
}

/// Membership in `D0` with every bound tightened by the relative `margin`.
pub fn d0_contains(pt: &PointC2, params: &ModelParams, margin: f64) -> bool {
    let keep = 1.0 - margin;
    pt.fiber().norm() < keep * params.epsilon()
        && pt.q.norm() < keep
        && pt.p.norm() < keep * s1_bound(pt, params)
}

/// Membership in `U` with the fiber bound and strip width tightened by `margin`.
pub fn u_contains(pt: &PointC2, params: &ModelParams, margin: f64) -> bool {
    let keep = 1.0 - margin;
    if pt.fiber().norm() >= keep * params.epsilon() {
        return false;
    }
    let s1 = params.invariant().eval(pt.fiber()).s1;
    let width = keep * params.delta();
    let ap = pt.p.norm();
    (s1 - width).exp() < ap && ap < (s1 + width).exp()
}

/// Applies one deck transformation.
pub fn deck(pt: &PointC2, direction: DeckDirection, params: &ModelParams) -> Result<PointC2> {
    let b = pt.fiber();
    let v = params.invariant().eval(b);
    match direction {
        DeckDirection::Up => {
            if pt.q.norm_sqr() == 0.0 {
                return Err(Error::DivisionAtSingularBranch);
            }
            let p = ComplexValue::new(v.s1, v.s2).exp() / pt.q.conj();
            let q = pt.p.conj() * pt.q * pt.q * ComplexValue::new(-v.s1, v.s2).exp();
            Ok(PointC2::new(p, q))
        }
        DeckDirection::Down => {
            if pt.p.norm_sqr() == 0.0 {
                return Err(Error::DivisionAtSingularBranch);
            }
            let p = pt.p * pt.p * pt.q.conj() * ComplexValue::new(-v.s1, -v.s2).exp();
            let q = ComplexValue::new(v.s1, -v.s2).exp() / pt.p.conj();
            Ok(PointC2::new(p, q))
        }
    }
}

/// Order in which the two seam rules are tried; only one ever applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeckOrder {
    UpFirst,
    DownFirst,
}

/// The unique representative of `pt` in the formal domain.
pub fn normalize(pt: &PointC2, params: &ModelParams) -> Result<CanonicalPoint> {
    normalize_with_order(pt, params, DeckOrder::UpFirst)
}

pub fn normalize_with_order(
    pt: &PointC2,
    params: &ModelParams,
    order: DeckOrder,
) -> Result<CanonicalPoint> {
    if !(pt.p.re.is_finite() && pt.p.im.is_finite() && pt.q.re.is_finite() && pt.q.im.is_finite()) {
        return Err(Error::NotInModel);
    }
    if pt.fiber().norm() >= params.epsilon() {
        return Err(Error::NotInModel);
    }
    let seam = 1.0 - SEAM_TOL;
    let mut cur = *pt;
    for _ in 0..MAX_DECK_STEPS {
        let needs_up = cur.q.norm() >= seam;
        let needs_down = cur.p.norm() > s1_bound(&cur, params) / seam;
        let step = match (order, needs_up, needs_down) {
            (_, false, false) => return Ok(CanonicalPoint(cur)),
            (DeckOrder::UpFirst, true, _) | (DeckOrder::DownFirst, true, false) => {
                DeckDirection::Up
            }
            _ => DeckDirection::Down,
        };
        cur = deck(&cur, step, params)?;
    }
    Err(Error::NotInModel)
}

/// Coordinate distance between two points of `X_S`, also comparing against the
/// deck images of `b` so that representatives on either side of the seam
/// compare equal.
pub fn quotient_distance(a: &PointC2, b: &PointC2, params: &ModelParams) -> f64 {
    let mut best = a.max_abs_diff(b);
    for dir in [DeckDirection::Up, DeckDirection::Down] {
        if let Ok(img) = deck(b, dir, params) {
            best = best.min(a.max_abs_diff(&img));
        }
    }
    best
}

/// Equality in `X_S` within `tol` per real coordinate.
pub fn same_point(a: &PointC2, b: &PointC2, tol: f64, params: &ModelParams) -> Result<bool> {
    let na = normalize(a, params)?;
    let nb = normalize(b, params)?;
    Ok(quotient_distance(na.point(), nb.point(), params) <= tol)
}

/// Default tolerance for [`same_point`].
pub const SAME_POINT_TOL: f64 = 1e-9;
