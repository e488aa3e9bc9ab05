//! The immersed addition graph `{(x, y, x + y)}` in `X_S^3`.
//!
//! Two polynomial maps `F1`, `F2: C^3 -> (C^2)^3` parametrize the graph near
//! the singular fiber. Composing them with the `D0` and `U` charts of each
//! slot gives six chart embeddings `E1..E6` covering the closure of the graph.
//! `E1` and `E2` meet only at the double point `(s, s, s)`.

mod tubular;

pub use tubular::{tubular_g, tubular_phi, BundlePoint, TubularChart};

use std::fmt;

use crate::error::{Error, Result};
use crate::group::add;
use crate::model::{ComplexValue, InvariantPolynomial, ModelParams, PointC2};
use crate::neighborhood::{
    d0_contains, deck, normalize, quotient_distance, u_contains, CanonicalPoint, DeckDirection,
};

/// Chart coordinates `(a, b, c)`; the fiber value of the image is `abc`.
pub type ChartCoords = [ComplexValue; 3];

/// Tolerance for a graph point to satisfy the addition law.
pub const GRAPH_TOL: f64 = 1e-9;

/// Tolerance for accepting a closed-form chart inverse.
const INVERSE_TOL: f64 = 1e-9;

/// One of the two raw graph maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphMap {
    /// `(conj a, -bc, conj b, -ac, e^{-S1-iS2} conj(ab), -e^{S1-iS2} c)`
    F1,
    /// `(-conj(bc), a, -conj(ac), b, -conj c, ab)`
    F2,
}

/// Chart of `X_S` used for one slot of a graph chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotChart {
    D0,
    U,
}

/// The six charts of the immersed graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphChartId {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
}

impl GraphChartId {
    pub const ALL: [GraphChartId; 6] = [
        GraphChartId::E1,
        GraphChartId::E2,
        GraphChartId::E3,
        GraphChartId::E4,
        GraphChartId::E5,
        GraphChartId::E6,
    ];

    pub fn graph_map(self) -> GraphMap {
        match self {
            GraphChartId::E2 | GraphChartId::E6 => GraphMap::F2,
            _ => GraphMap::F1,
        }
    }

    pub fn slots(self) -> [SlotChart; 3] {
        use SlotChart::{D0, U};
        match self {
            GraphChartId::E1 | GraphChartId::E2 => [D0, D0, D0],
            GraphChartId::E3 => [U, U, U],
            GraphChartId::E4 => [D0, U, D0],
            GraphChartId::E5 => [U, D0, D0],
            GraphChartId::E6 => [D0, D0, U],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GraphChartId::E1 => "E1",
            GraphChartId::E2 => "E2",
            GraphChartId::E3 => "E3",
            GraphChartId::E4 => "E4",
            GraphChartId::E5 => "E5",
            GraphChartId::E6 => "E6",
        }
    }
}

impl fmt::Display for GraphChartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A chart together with coordinates in it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphChartPoint {
    pub chart: GraphChartId,
    pub coords: ChartCoords,
}

/// A point `(x, y, z)` of the closed graph: `z = x + y`, or `x = y = s` and
/// `z` on the singular fiber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphPoint {
    pub x: CanonicalPoint,
    pub y: CanonicalPoint,
    pub z: CanonicalPoint,
}

impl GraphPoint {
    /// Builds a graph point, checking the addition law within [`GRAPH_TOL`].
    pub fn new(
        x: CanonicalPoint,
        y: CanonicalPoint,
        z: CanonicalPoint,
        params: &ModelParams,
    ) -> Result<Self> {
        let gp = Self { x, y, z };
        gp.validate(params)?;
        Ok(gp)
    }

    /// `(x, y, x + y)`.
    pub fn from_sum(x: CanonicalPoint, y: CanonicalPoint, params: &ModelParams) -> Result<Self> {
        let z = add(&x, &y, params)?;
        Ok(Self { x, y, z })
    }

    /// True for the closure points `(s, s, z)`.
    pub fn is_closure_point(&self) -> bool {
        self.x.is_singular_point() && self.y.is_singular_point()
    }

    /// Distance of `z` from `x + y` in `X_S`; zero for valid closure points.
    pub fn addition_defect(&self, params: &ModelParams) -> Result<f64> {
        if self.is_closure_point() {
            let b = self.z.fiber();
            return Ok(b.norm());
        }
        let sum = add(&self.x, &self.y, params)?;
        Ok(quotient_distance(sum.point(), self.z.point(), params))
    }

    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        let defect = self
            .addition_defect(params)
            .map_err(|_| Error::NotOnGraph(f64::INFINITY))?;
        if defect > GRAPH_TOL {
            return Err(Error::NotOnGraph(defect));
        }
        Ok(())
    }
}

/// Evaluates `F1` or `F2` at `(a, b, c)` as six complex numbers
/// `(p_x, q_x, p_y, q_y, p_z, q_z)`.
pub fn graph_map(
    which: GraphMap,
    coords: ChartCoords,
    s: &InvariantPolynomial,
) -> [ComplexValue; 6] {
    let [a, b, c] = coords;
    match which {
        GraphMap::F1 => {
            let v = s.eval(a * b * c);
            [
                a.conj(),
                -(b * c),
                b.conj(),
                -(a * c),
                ComplexValue::new(-v.s1, -v.s2).exp() * (a * b).conj(),
                -(ComplexValue::new(v.s1, -v.s2).exp() * c),
            ]
        }
        GraphMap::F2 => [-(b * c).conj(), a, -(a * c).conj(), b, -c.conj(), a * b],
    }
}

/// [`graph_map`] grouped into the three slot representatives.
pub fn graph_map_points(
    which: GraphMap,
    coords: ChartCoords,
    s: &InvariantPolynomial,
) -> [PointC2; 3] {
    let w = graph_map(which, coords, s);
    [
        PointC2::new(w[0], w[1]),
        PointC2::new(w[2], w[3]),
        PointC2::new(w[4], w[5]),
    ]
}

fn slot_contains(slot: SlotChart, pt: &PointC2, params: &ModelParams, margin: f64) -> bool {
    match slot {
        SlotChart::D0 => d0_contains(pt, params, margin),
        SlotChart::U => u_contains(pt, params, margin),
    }
}

fn all_finite(coords: &ChartCoords) -> bool {
    coords.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Chart domain membership: every slot of the raw image lies in its
/// designated region and `|abc| < epsilon`.
pub fn chart_contains(chart: GraphChartId, coords: ChartCoords, params: &ModelParams) -> bool {
    chart_contains_with_margin(chart, coords, params, 0.0)
}

/// [`chart_contains`] with every open bound tightened by the relative `margin`.
pub fn chart_contains_with_margin(
    chart: GraphChartId,
    coords: ChartCoords,
    params: &ModelParams,
    margin: f64,
) -> bool {
    if !all_finite(&coords) {
        return false;
    }
    let [a, b, c] = coords;
    if (a * b * c).norm() >= (1.0 - margin) * params.epsilon() {
        return false;
    }
    let pts = graph_map_points(chart.graph_map(), coords, params.invariant());
    chart
        .slots()
        .iter()
        .zip(pts.iter())
        .all(|(slot, pt)| slot_contains(*slot, pt, params, margin))
}

/// The chart embedding `f_i`: the raw image, each slot read in its chart and
/// normalized.
pub fn chart_embed(
    chart: GraphChartId,
    coords: ChartCoords,
    params: &ModelParams,
) -> Result<GraphPoint> {
    if !chart_contains(chart, coords, params) {
        return Err(Error::OutsideChartDomain(chart.name().to_string()));
    }
    let [x, y, z] = graph_map_points(chart.graph_map(), coords, params.invariant());
    Ok(GraphPoint {
        x: normalize(&x, params)?,
        y: normalize(&y, params)?,
        z: normalize(&z, params)?,
    })
}

/// Closed-form inverse of the raw map from slot representatives.
fn invert_raw(which: GraphMap, pts: &[PointC2; 3], s: &InvariantPolynomial) -> ChartCoords {
    match which {
        GraphMap::F1 => {
            let fiber = pts[0].fiber();
            let v = s.eval(fiber);
            [
                pts[0].p.conj(),
                pts[1].p.conj(),
                -pts[2].q * ComplexValue::new(-v.s1, v.s2).exp(),
            ]
        }
        GraphMap::F2 => [pts[0].q, pts[1].q, -pts[2].p.conj()],
    }
}

/// Representatives of a canonical point usable in a slot chart.
fn slot_candidates(slot: SlotChart, pt: &CanonicalPoint, params: &ModelParams) -> Vec<PointC2> {
    let base = *pt.point();
    let mut out = Vec::with_capacity(3);
    match slot {
        SlotChart::D0 => {
            if d0_contains(&base, params, 0.0) {
                out.push(base);
            }
        }
        SlotChart::U => {
            let mut reps = vec![base];
            for dir in [DeckDirection::Up, DeckDirection::Down] {
                if let Ok(img) = deck(&base, dir, params) {
                    reps.push(img);
                }
            }
            out.extend(reps.into_iter().filter(|r| u_contains(r, params, 0.0)));
        }
    }
    out
}

fn coords_distance(a: &ChartCoords, b: &ChartCoords) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(u, v)| (u - v).re.abs().max((u - v).im.abs()))
        .fold(0.0, f64::max)
}

/// Preimages of `gp` in one chart.
pub fn locate_in(chart: GraphChartId, gp: &GraphPoint, params: &ModelParams) -> Vec<ChartCoords> {
    let [sx, sy, sz] = chart.slots();
    let cx = slot_candidates(sx, &gp.x, params);
    let cy = slot_candidates(sy, &gp.y, params);
    let cz = slot_candidates(sz, &gp.z, params);
    let mut found: Vec<ChartCoords> = Vec::new();
    for x in &cx {
        for y in &cy {
            for z in &cz {
                let reps = [*x, *y, *z];
                let coords = invert_raw(chart.graph_map(), &reps, params.invariant());
                if !chart_contains(chart, coords, params) {
                    continue;
                }
                let back = graph_map_points(chart.graph_map(), coords, params.invariant());
                let err = back
                    .iter()
                    .zip(reps.iter())
                    .map(|(u, v)| u.max_abs_diff(v))
                    .fold(0.0, f64::max);
                if err > INVERSE_TOL {
                    continue;
                }
                if !found
                    .iter()
                    .any(|f| coords_distance(f, &coords) <= INVERSE_TOL)
                {
                    found.push(coords);
                }
            }
        }
    }
    found
}

/// All chart preimages of a point of the closed graph.
pub fn locate(gp: &GraphPoint, params: &ModelParams) -> Result<Vec<GraphChartPoint>> {
    gp.validate(params)?;
    let mut out = Vec::new();
    for chart in GraphChartId::ALL {
        for coords in locate_in(chart, gp, params) {
            out.push(GraphChartPoint { chart, coords });
        }
    }
    Ok(out)
}

/// The projection `(x, y, z) -> (x, y)`.
pub fn project_pr(gp: &GraphPoint) -> (CanonicalPoint, CanonicalPoint) {
    (gp.x, gp.y)
}

/// Moves coordinates from one chart to another on their overlap.
///
/// `E1 <-> E6` uses the involution [`tubular_phi`], `E2 <-> E6` is the
/// identity, and every other pair inverts the target embedding in closed form.
pub fn chart_transition(
    from: GraphChartId,
    to: GraphChartId,
    coords: ChartCoords,
    params: &ModelParams,
) -> Result<ChartCoords> {
    let not_in = || Error::NotInOverlap(from.name().to_string(), to.name().to_string());
    if !chart_contains(from, coords, params) {
        return Err(not_in());
    }
    use GraphChartId::{E1, E2, E6};
    let out = match (from, to) {
        _ if from == to => coords,
        (E1, E6) | (E6, E1) => tubular_phi(coords).map_err(|_| not_in())?,
        (E2, E6) | (E6, E2) => coords,
        _ => {
            let gp = chart_embed(from, coords, params)?;
            let found = locate_in(to, &gp, params);
            *found.first().ok_or_else(not_in)?
        }
    };
    if !chart_contains(to, out, params) {
        return Err(not_in());
    }
    Ok(out)
}

/// Largest slot-wise distance in `X_S` between two graph points.
pub fn graph_distance(a: &GraphPoint, b: &GraphPoint, params: &ModelParams) -> f64 {
    quotient_distance(a.x.point(), b.x.point(), params)
        .max(quotient_distance(a.y.point(), b.y.point(), params))
        .max(quotient_distance(a.z.point(), b.z.point(), params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::identity;
    use crate::model::{section, SectionKind};

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn r(x: f64) -> ComplexValue {
        c(x, 0.0)
    }

    fn generic() -> ModelParams {
        let s = InvariantPolynomial::from_terms([(1, 0, 0.3), (0, 1, 0.2), (1, 1, 0.1)]).unwrap();
        ModelParams::new(0.1, 0.3, s).unwrap()
    }

    fn close6(a: [ComplexValue; 6], b: [ComplexValue; 6]) -> bool {
        a.iter().zip(b.iter()).all(|(u, v)| (u - v).norm() < 1e-15)
    }

    #[test]
    fn graph_map_examples() {
        let s = InvariantPolynomial::zero();
        assert!(graph_map(GraphMap::F1, [r(0.0); 3], &s)
            .iter()
            .all(|z| z.norm() == 0.0));
        let f1 = graph_map(GraphMap::F1, [r(0.5); 3], &s);
        assert!(close6(
            f1,
            [r(0.5), r(-0.25), r(0.5), r(-0.25), r(0.25), r(-0.5)]
        ));
        let f2 = graph_map(GraphMap::F2, [r(0.5); 3], &s);
        assert!(close6(
            f2,
            [r(-0.25), r(0.5), r(-0.25), r(0.5), r(-0.5), r(0.25)]
        ));
    }

    #[test]
    fn graph_maps_share_fiber() {
        let params = generic();
        let coords = [c(0.3, -0.2), c(0.1, 0.5), c(-0.4, 0.2)];
        let f = coords[0] * coords[1] * coords[2];
        for which in [GraphMap::F1, GraphMap::F2] {
            for pt in graph_map_points(which, coords, params.invariant()) {
                assert!((pt.fiber() - f).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn contains_examples() {
        let params = ModelParams::new(0.2, 0.3, InvariantPolynomial::zero()).unwrap();
        assert!(chart_contains(GraphChartId::E1, [r(0.5); 3], &params));
        assert!(chart_contains(
            GraphChartId::E3,
            [r(1.0), r(1.0), c(0.05, 0.02)],
            &params
        ));
        assert!(!chart_contains(
            GraphChartId::E1,
            [r(1.0), r(0.5), r(0.5)],
            &params
        ));
        assert!(!chart_contains(
            GraphChartId::E1,
            [r(0.9), r(0.9), r(0.9)],
            &params
        ));
    }

    #[test]
    fn embed_examples() {
        let params = ModelParams::new(0.2, 0.3, InvariantPolynomial::zero()).unwrap();
        let gp = chart_embed(GraphChartId::E1, [r(0.5); 3], &params).unwrap();
        assert_eq!(*gp.x.point(), PointC2::real(0.5, -0.25));
        assert_eq!(*gp.y.point(), PointC2::real(0.5, -0.25));
        assert_eq!(*gp.z.point(), PointC2::real(0.25, -0.5));
        gp.validate(&params).unwrap();

        let cc = c(0.05, -0.03);
        let gp = chart_embed(GraphChartId::E3, [r(1.0), r(1.0), cc], &params).unwrap();
        let sig = section(SectionKind::SigmaS, cc, &params).unwrap();
        for pt in [gp.x, gp.y, gp.z] {
            assert!(quotient_distance(pt.point(), &sig, &params) < 1e-15);
        }

        let gp = chart_embed(GraphChartId::E1, [r(0.0), r(0.0), c(0.4, 0.1)], &params).unwrap();
        assert!(gp.is_closure_point());
        assert_eq!(*gp.z.point(), PointC2::new(r(0.0), c(-0.4, -0.1)));
        gp.validate(&params).unwrap();

        assert!(matches!(
            chart_embed(GraphChartId::E1, [r(1.0), r(0.5), r(0.5)], &params),
            Err(Error::OutsideChartDomain(_))
        ));
    }

    #[test]
    fn embeddings_satisfy_addition_for_general_s() {
        let params = generic();
        let samples: [(GraphChartId, ChartCoords); 6] = [
            (GraphChartId::E1, [c(0.3, 0.1), c(-0.2, 0.4), c(0.5, -0.1)]),
            (GraphChartId::E2, [c(0.3, 0.1), c(-0.2, 0.4), c(0.5, -0.1)]),
            (GraphChartId::E3, [c(1.4, 0.1), c(1.3, 0.2), c(0.02, 0.03)]),
            (GraphChartId::E4, [c(0.3, 0.2), c(1.1, 0.5), c(0.1, -0.05)]),
            (GraphChartId::E5, [c(1.0, -0.6), c(0.2, 0.2), c(0.05, 0.08)]),
            (
                GraphChartId::E6,
                [c(0.05, 0.02), c(-0.03, 0.04), c(0.9, 0.5)],
            ),
        ];
        for (chart, coords) in samples {
            assert!(chart_contains(chart, coords, &params), "{chart}");
            let gp = chart_embed(chart, coords, &params).unwrap();
            assert!(gp.addition_defect(&params).unwrap() < 1e-12, "{chart}");
            let found = locate_in(chart, &gp, &params);
            assert!(
                found.iter().any(|f| coords_distance(f, &coords) < 1e-12),
                "{chart}: {found:?}"
            );
        }
    }

    #[test]
    fn locate_double_point() {
        let params = generic();
        let s = CanonicalPoint::singular_point();
        let gp = GraphPoint { x: s, y: s, z: s };
        let found = locate(&gp, &params).unwrap();
        assert_eq!(found.len(), 2);
        assert_eq!(found[0].chart, GraphChartId::E1);
        assert_eq!(found[1].chart, GraphChartId::E2);
        assert!(found
            .iter()
            .all(|f| f.coords.iter().all(|z| z.norm() == 0.0)));
    }

    #[test]
    fn locate_sigma_triple() {
        let params = ModelParams::standard();
        let b = c(0.03, -0.02);
        let e = identity(b, &params).unwrap();
        let gp = GraphPoint::new(e, e, e, &params).unwrap();
        let found = locate(&gp, &params).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].chart, GraphChartId::E3);
        assert!(coords_distance(&found[0].coords, &[r(1.0), r(1.0), b]) < 1e-15);
    }

    #[test]
    fn locate_rejects_non_graph() {
        let params = ModelParams::standard();
        let x = normalize(&PointC2::real(0.5, -0.1), &params).unwrap();
        let gp = GraphPoint { x, y: x, z: x };
        assert!(matches!(locate(&gp, &params), Err(Error::NotOnGraph(_))));
    }

    #[test]
    fn transition_examples() {
        let params = generic();
        let e1 = [c(0.1, 0.05), c(0.2, -0.1), c(0.6, 0.1)];
        let e6 = chart_transition(GraphChartId::E1, GraphChartId::E6, e1, &params).unwrap();
        let back = chart_transition(GraphChartId::E6, GraphChartId::E1, e6, &params).unwrap();
        assert!(coords_distance(&back, &e1) < 1e-15);
        let a = chart_embed(GraphChartId::E1, e1, &params).unwrap();
        let b = chart_embed(GraphChartId::E6, e6, &params).unwrap();
        assert!(graph_distance(&a, &b, &params) < 1e-14);

        let e2 = [c(0.05, 0.02), c(-0.03, 0.04), c(1.2, 0.2)];
        let same = chart_transition(GraphChartId::E2, GraphChartId::E6, e2, &params).unwrap();
        assert_eq!(same, e2);

        assert!(matches!(
            chart_transition(
                GraphChartId::E1,
                GraphChartId::E6,
                [r(0.1), r(0.2), r(1.0)],
                &params
            ),
            Err(Error::NotInOverlap(..))
        ));
        assert!(matches!(
            chart_transition(GraphChartId::E1, GraphChartId::E3, [r(0.5); 3], &params),
            Err(Error::NotInOverlap(..))
        ));
    }

    #[test]
    fn projection() {
        let params = ModelParams::standard();
        let gp = chart_embed(GraphChartId::E1, [r(0.5), r(0.5), r(0.3)], &params).unwrap();
        assert_eq!(project_pr(&gp), (gp.x, gp.y));
        let s = CanonicalPoint::singular_point();
        let z = normalize(&PointC2::real(0.0, 0.4), &params).unwrap();
        let closure = GraphPoint::new(s, s, z, &params).unwrap();
        assert_eq!(project_pr(&closure), (s, s));
    }
}
