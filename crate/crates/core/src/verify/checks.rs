//! The individual checks behind [`super::CheckId`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, Vector4};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::numdiff::{jacobian, numerical_rank, singular_values};
use super::sampling::{
    chart_coords, chart_coords_where, fiber, flatten, mixed_fiber, point_on, point_on_fiber,
    point_on_singular_fiber, MARGIN,
};
use super::{CheckId, ComponentReport, Controls, ToleranceConfig};
use crate::error::Result;
use crate::graph::{
    chart_contains_with_margin, chart_embed, chart_transition, graph_distance, graph_map, locate,
    tubular_g, tubular_phi, ChartCoords, GraphChartId, GraphMap, GraphPoint, TubularChart,
};
use crate::group::{
    add, add_via_liouville, add_with_origin, change_section, common_fiber, identity, inverse,
    recover_partials, SelectionBranch, TrivializationMatrix,
};
use crate::model::{
    flow, hamiltonian, omega_matrix, omega_product, section, section_unchecked, travel_time,
    wrap_angle, ComplexValue, InvariantPolynomial, ModelParams, PointC2, SectionKind, TimePair,
};
use crate::neighborhood::{deck, normalize, quotient_distance, CanonicalPoint, DeckDirection};

const FLOW_FIELD_TOL: f64 = 1e-6;
const LIOUVILLE_TOL: f64 = 1e-5;
const SECTION_TOL: f64 = 1e-6;
const DECK_TOL: f64 = 1e-5;
const ORACLE_TOL: f64 = 1e-9;
const PERIOD_TOL: f64 = 1e-9;
const RECOVER_TOL: f64 = 1e-6;
const CONTINUITY_TOL: f64 = 1e-3;
const CONTINUITY_FIBER: f64 = 1e-6;
const BRANCH_SEPARATION: f64 = 0.1;
const SINGULAR_POINT_SEPARATION: f64 = 0.1;
const DOUBLE_POINT_TOL: f64 = 1e-12;
const ADDITION_COHERENCE_TOL: f64 = 1e-10;
const TUBULAR_TOL: f64 = 1e-12;
const INJECTIVITY_TOL: f64 = 1e-9;
const INVARIANCE_TOL: f64 = 1e-9;
const COUNT_TOL: f64 = 0.5;
const RECOVER_GRID: usize = 10;

pub(super) struct Context<'a> {
    pub params: &'a ModelParams,
    pub tol: &'a ToleranceConfig,
    pub controls: &'a Controls,
}

type Parts = (usize, Vec<ComponentReport>);

/// Worst case of one sub-criterion.
struct Tracker {
    name: &'static str,
    threshold: f64,
    samples: usize,
    max: f64,
    worst: Vec<f64>,
}

impl Tracker {
    fn new(name: &'static str, threshold: f64) -> Self {
        Self {
            name,
            threshold,
            samples: 0,
            max: 0.0,
            worst: Vec::new(),
        }
    }

    fn record(&mut self, err: f64, input: &[f64]) {
        self.samples += 1;
        let e = if err.is_nan() { f64::INFINITY } else { err };
        if e > self.max || (self.worst.is_empty() && e >= self.max) {
            self.max = e;
            self.worst = input.to_vec();
        }
    }

    /// Counting mode: the error is the number of failed samples.
    fn tally(&mut self, failed: bool, input: &[f64]) {
        self.samples += 1;
        if failed {
            if self.max == 0.0 {
                self.worst = input.to_vec();
            }
            self.max += 1.0;
        }
    }

    fn finish(self) -> ComponentReport {
        ComponentReport {
            name: self.name,
            samples: self.samples,
            max_error: self.max,
            threshold: self.threshold,
            worst_input: self.worst,
        }
    }
}

fn parts(samples: usize, trackers: Vec<Tracker>) -> Parts {
    (samples, trackers.into_iter().map(Tracker::finish).collect())
}

pub(super) fn run(id: CheckId, ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    match id {
        CheckId::FlowField => flow_field(ctx, rng),
        CheckId::LiouvillePullback => liouville_pullback(ctx, rng),
        CheckId::SectionLagrangian => section_lagrangian(ctx, rng),
        CheckId::DeckSymplectic => deck_symplectic(ctx, rng),
        CheckId::GroupLaws => group_laws(ctx, rng),
        CheckId::SelectionExclusive => selection_exclusive(ctx, rng),
        CheckId::SingularContinuity => singular_continuity(ctx, rng),
        CheckId::PeriodClosure => period_closure(ctx, rng),
        CheckId::GraphLagrangian => graph_lagrangian(ctx, rng),
        CheckId::GraphImmersion => graph_immersion(ctx, rng),
        CheckId::DoublePoint => double_point(ctx),
        CheckId::ChartCompatibility => chart_compatibility(ctx, rng),
        CheckId::Covering => covering(ctx, rng),
        CheckId::Tubular => tubular(ctx, rng),
        CheckId::TrivializationInvariance => trivialization_invariance(ctx, rng),
    }
}

fn qd(a: &CanonicalPoint, b: &CanonicalPoint, params: &ModelParams) -> f64 {
    quotient_distance(a.point(), b.point(), params)
}

fn points_input(pts: &[&CanonicalPoint]) -> Vec<f64> {
    pts.iter().flat_map(|p| p.point().to_real()).collect()
}

fn omega_dmatrix() -> DMatrix<f64> {
    let m = omega_matrix();
    DMatrix::from_fn(4, 4, |i, j| m[(i, j)])
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

/// `F1` or `F2` as a map `R^6 -> R^12` in `(p1, p2, q1, q2)` slot layout.
fn raw_real_map<'a>(
    which: GraphMap,
    s: &'a InvariantPolynomial,
) -> impl Fn(&[f64]) -> Result<Vec<f64>> + 'a {
    move |r: &[f64]| {
        let coords = [c(r[0], r[1]), c(r[2], r[3]), c(r[4], r[5])];
        Ok(flatten(&graph_map(which, coords, s)))
    }
}

fn random_trivialization<R: Rng>(rng: &mut R) -> TrivializationMatrix {
    loop {
        let rows = [
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
        ];
        let det: f64 = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
        if det.abs() > 0.1 {
            if let Ok(a) = TrivializationMatrix::new(rows) {
                return a;
            }
        }
    }
}

fn flow_field(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let (params, h) = (ctx.params, ctx.tol.fd_step);
    let m = omega_matrix();
    let mut t = Tracker::new("flow_field", FLOW_FIELD_TOL);
    for _ in 0..ctx.tol.samples {
        let b = mixed_fiber(rng, params);
        let pt = *point_on(rng, b, params)?.point();
        let jt = jacobian(
            |v| Ok(flow(&pt, TimePair::new(v[0], v[1])).to_real().to_vec()),
            &[0.0, 0.0],
            h,
        )?;
        let jh = jacobian(
            |r| {
                let z = hamiltonian(&PointC2::from_real(r));
                Ok(vec![z.re, z.im])
            },
            &pt.to_real(),
            h,
        )?;
        let mut err: f64 = 0.0;
        for k in 0..2 {
            let grad = Vector4::new(jh[(k, 0)], jh[(k, 1)], jh[(k, 2)], jh[(k, 3)]);
            // omega(X, .) = -dH  <=>  X = -M grad H
            let field = -(m * grad);
            for i in 0..4 {
                err = err.max((jt[(i, k)] - field[i]).abs());
            }
        }
        t.record(err, &pt.to_real());
    }
    Ok(parts(ctx.tol.samples, vec![t]))
}

fn liouville_pullback(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let (params, h) = (ctx.params, ctx.tol.fd_step);
    let s = params.invariant();
    let m = omega_dmatrix();
    let mut expected = DMatrix::<f64>::zeros(4, 4);
    expected[(0, 2)] = 1.0;
    expected[(2, 0)] = -1.0;
    expected[(1, 3)] = 1.0;
    expected[(3, 1)] = -1.0;
    let mut t = Tracker::new("liouville_pullback", LIOUVILLE_TOL);
    for _ in 0..ctx.tol.samples {
        let b = fiber(rng, params);
        let x = [b.re, b.im, rng.gen_range(-1.0..1.0), rng.gen_range(-PI..PI)];
        let j = jacobian(
            |v| {
                let sec = section_unchecked(SectionKind::Sigma1, c(v[0], v[1]), s);
                Ok(flow(&sec, TimePair::new(v[2], v[3])).to_real().to_vec())
            },
            &x,
            h,
        )?;
        let pulled = j.transpose() * &m * &j;
        t.record((pulled - &expected).amax(), &x);
    }
    Ok(parts(ctx.tol.samples, vec![t]))
}

fn section_lagrangian(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let (params, h) = (ctx.params, ctx.tol.fd_step);
    let s = params.invariant();
    let m = omega_dmatrix();
    let mut t = Tracker::new("section_lagrangian", SECTION_TOL);
    for _ in 0..ctx.tol.samples {
        let b = fiber(rng, params);
        let j = jacobian(
            |v| {
                Ok(section_unchecked(SectionKind::Sigma1, c(v[0], v[1]), s)
                    .to_real()
                    .to_vec())
            },
            &[b.re, b.im],
            h,
        )?;
        let form = (j.column(0).transpose() * &m * j.column(1))[(0, 0)];
        t.record(form.abs(), &[b.re, b.im]);
    }
    Ok(parts(ctx.tol.samples, vec![t]))
}

fn deck_symplectic(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let (params, h) = (ctx.params, ctx.tol.fd_step);
    let m = omega_dmatrix();
    let delta = params.delta();
    let mut t = Tracker::new("deck_symplectic", DECK_TOL);
    for _ in 0..ctx.tol.samples {
        let b = fiber(rng, params);
        let s1 = params.invariant().eval(b).s1;
        // Up acts on the strip e^{-delta} < |q| < 1, Down on e^{S1} < |p| < e^{S1 + delta}
        let q = ComplexValue::from_polar(rng.gen_range(-delta..0.0).exp(), rng.gen_range(-PI..PI));
        let up_pt = PointC2::new(-b.conj() / q.conj(), q);
        let p = ComplexValue::from_polar(
            (s1 + rng.gen_range(0.0..delta)).exp(),
            rng.gen_range(-PI..PI),
        );
        let down_pt = PointC2::new(p, -b / p.conj());
        for (pt, dir) in [(up_pt, DeckDirection::Up), (down_pt, DeckDirection::Down)] {
            let j = jacobian(
                |r| {
                    Ok(deck(&PointC2::from_real(r), dir, params)?
                        .to_real()
                        .to_vec())
                },
                &pt.to_real(),
                h,
            )?;
            let err = (j.transpose() * &m * &j - &m).amax();
            t.record(err, &pt.to_real());
        }
    }
    Ok(parts(ctx.tol.samples, vec![t]))
}

fn group_laws(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let params = ctx.params;
    let law = ctx.controls.law;
    let alg = ctx.tol.alg_tol;
    let n = 10 * ctx.tol.samples;
    let mut comm = Tracker::new("commutativity", alg);
    let mut assoc = Tracker::new("associativity", alg);
    let mut ident = Tracker::new("identity", alg);
    let mut inv = Tracker::new("inverse", alg);
    let mut oracle = Tracker::new("liouville_oracle", ORACLE_TOL);
    for _ in 0..n {
        let b = mixed_fiber(rng, params);
        let x = point_on(rng, b, params)?;
        let y = point_on(rng, b, params)?;
        let w = point_on(rng, b, params)?;
        let input = points_input(&[&x, &y, &w]);
        let xy = law.add(&x, &y, params)?;
        comm.record(qd(&xy, &law.add(&y, &x, params)?, params), &input);
        let left = law.add(&xy, &w, params)?;
        let right = law.add(&x, &law.add(&y, &w, params)?, params)?;
        assoc.record(qd(&left, &right, params), &input);
        let e = identity(b, params)?;
        ident.record(qd(&law.add(&x, &e, params)?, &x, params), &input);
        let xi = inverse(&x, params)?;
        inv.record(qd(&law.add(&x, &xi, params)?, &e, params), &input);
        if b.norm_sqr() > 0.0 {
            let a = random_trivialization(rng);
            let via = add_via_liouville(&x, &y, &a, params)?;
            oracle.record(qd(&xy, &via, params), &input);
        }
    }
    Ok(parts(n, vec![comm, assoc, ident, inv, oracle]))
}

fn selection_exclusive(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let params = ctx.params;
    let law = ctx.controls.law;
    let n = 10 * ctx.tol.samples;
    let mut t = Tracker::new("selection_exclusive", COUNT_TOL);
    for _ in 0..n {
        let b = fiber(rng, params);
        let x = point_on_fiber(rng, b, params)?;
        let y = point_on_fiber(rng, b, params)?;
        let bb = common_fiber(&x, &y)?;
        let bound = params.invariant().eval(bb).s1.exp();
        let in_d = |p: &PointC2| p.q.norm() < 1.0 && p.p.norm() <= bound;
        let one = in_d(&law.add_formal(&x, &y, SelectionBranch::SigmaOne, params)?);
        let two = in_d(&law.add_formal(&x, &y, SelectionBranch::SigmaTwo, params)?);
        let chosen = crate::group::select_branch(&x, &y, params)?;
        let agrees = match chosen {
            SelectionBranch::SigmaOne => one,
            SelectionBranch::SigmaTwo => two,
        };
        t.tally(one == two || !agrees, &points_input(&[&x, &y]));
    }
    Ok(parts(n, vec![t]))
}

#[derive(Clone, Copy, PartialEq)]
enum SingularType {
    P,
    Q,
}

fn singular_limit_pair<R: Rng>(
    rng: &mut R,
    params: &ModelParams,
) -> (CanonicalPoint, CanonicalPoint, [SingularType; 2]) {
    let zero = c(0.0, 0.0);
    let s1 = params.invariant().eval(zero).s1;
    let draw = |rng: &mut R| -> (PointC2, SingularType, f64) {
        // one decade away from s: the approach rate degrades like |b| / |q1 q2|
        let modulus = rng
            .gen_range(SINGULAR_POINT_SEPARATION.ln()..(1.0 - MARGIN).ln())
            .exp();
        let phase = rng.gen_range(-PI..PI);
        if rng.gen_bool(0.5) {
            let m = modulus * s1.exp();
            (
                PointC2::new(ComplexValue::from_polar(m, phase), zero),
                SingularType::P,
                m,
            )
        } else {
            (
                PointC2::new(zero, ComplexValue::from_polar(modulus, phase)),
                SingularType::Q,
                modulus,
            )
        }
    };
    loop {
        let (x, tx, mx) = draw(rng);
        let (y, ty, my) = draw(rng);
        if tx != ty {
            let (mp, mq) = if tx == SingularType::P {
                (mx, my)
            } else {
                (my, mx)
            };
            if ((mp / mq).ln() - s1).abs() < BRANCH_SEPARATION {
                continue;
            }
        }
        // canonical by construction
        let xc = normalize(&x, params).expect("singular-fiber sample is canonical");
        let yc = normalize(&y, params).expect("singular-fiber sample is canonical");
        return (xc, yc, [tx, ty]);
    }
}

fn push_off(pt: &CanonicalPoint, kind: SingularType, b: ComplexValue) -> PointC2 {
    let p = pt.point();
    match kind {
        SingularType::P => PointC2::new(p.p, -b / p.p.conj()),
        SingularType::Q => PointC2::new(-b.conj() / p.q.conj(), p.q),
    }
}

fn singular_continuity(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let params = ctx.params;
    let law = ctx.controls.law;
    let mut t = Tracker::new("singular_continuity", CONTINUITY_TOL);
    for _ in 0..ctx.tol.samples {
        let (x0, y0, [tx, ty]) = singular_limit_pair(rng, params);
        let limit = add(&x0, &y0, params)?;
        let b = ComplexValue::from_polar(CONTINUITY_FIBER, rng.gen_range(-PI..PI));
        let x = normalize(&push_off(&x0, tx, b), params)?;
        let y = normalize(&push_off(&y0, ty, b), params)?;
        let near = law.add(&x, &y, params)?;
        t.record(qd(&near, &limit, params), &points_input(&[&x, &y]));
    }
    Ok(parts(ctx.tol.samples, vec![t]))
}

fn period_closure(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let params = ctx.params;
    let mut closure = Tracker::new("period_closure", PERIOD_TOL);
    for _ in 0..ctx.tol.samples {
        let b = fiber(rng, params);
        let moved = flow(
            &section(SectionKind::Sigma2, b, params)?,
            travel_time(b, params)?,
        );
        let lhs = normalize(&moved, params)?;
        let rhs = normalize(&section(SectionKind::Sigma1, b, params)?, params)?;
        closure.record(qd(&lhs, &rhs, params), &[b.re, b.im]);
    }
    let mut recover = Tracker::new("recover_partials", RECOVER_TOL);
    let eps = params.epsilon();
    for i in 0..RECOVER_GRID {
        for j in 0..RECOVER_GRID {
            let r = eps * (0.05 + 0.85 * (i as f64 + 0.5) / RECOVER_GRID as f64);
            let theta = -PI + 2.0 * PI * (j as f64 + 0.5) / RECOVER_GRID as f64;
            let b = ComplexValue::from_polar(r, theta);
            let (s1, s2) = recover_partials(b, params)?;
            let v = params.invariant().eval(b);
            let err = (s1 - v.s1).abs().max(wrap_angle(s2 - v.s2).abs());
            recover.record(err, &[b.re, b.im]);
        }
    }
    Ok(parts(ctx.tol.samples, vec![closure, recover]))
}

fn chart_input(chart: GraphChartId, coords: &ChartCoords) -> Vec<f64> {
    let mut v = vec![
        GraphChartId::ALL
            .iter()
            .position(|c| *c == chart)
            .unwrap_or(0) as f64
            + 1.0,
    ];
    v.extend(flatten(coords));
    v
}

fn graph_jacobian(
    chart: GraphChartId,
    coords: &ChartCoords,
    ctx: &Context<'_>,
) -> Result<DMatrix<f64>> {
    let map = raw_real_map(chart.graph_map(), ctx.params.invariant());
    jacobian(map, &flatten(coords), ctx.tol.fd_step)
}

fn per_chart(samples: usize) -> usize {
    (samples / 5).max(1)
}

fn graph_lagrangian(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let m = per_chart(ctx.tol.samples);
    let mut t = Tracker::new("graph_lagrangian", ctx.tol.form_tol);
    for chart in GraphChartId::ALL {
        for _ in 0..m {
            let coords = chart_coords(rng, chart, ctx.params)?;
            let j = graph_jacobian(chart, &coords, ctx)?;
            let cols: Vec<Vec<f64>> = (0..6)
                .map(|k| j.column(k).iter().copied().collect())
                .collect();
            let mut err: f64 = 0.0;
            for a in 0..6 {
                for b in a + 1..6 {
                    err = err.max(omega_product(ctx.controls.signs, &cols[a], &cols[b])?.abs());
                }
            }
            t.record(err, &chart_input(chart, &coords));
        }
    }
    Ok(parts(6 * m, vec![t]))
}

fn graph_immersion(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let m = per_chart(ctx.tol.samples);
    // reported as 1 / sigma_min against 1 / rank_tol
    let mut t = Tracker::new("inverse_min_singular_value", 1.0 / ctx.tol.rank_tol);
    for chart in GraphChartId::ALL {
        for _ in 0..m {
            let coords = chart_coords(rng, chart, ctx.params)?;
            let j = graph_jacobian(chart, &coords, ctx)?;
            let smin = singular_values(&j).last().copied().unwrap_or(0.0);
            t.record(1.0 / smin, &chart_input(chart, &coords));
        }
    }
    Ok(parts(6 * m, vec![t]))
}

fn double_point(ctx: &Context<'_>) -> Result<Parts> {
    let params = ctx.params;
    let s = params.invariant();
    let origin = [0.0; 6];
    let j1 = jacobian(raw_real_map(GraphMap::F1, s), &origin, ctx.tol.fd_step)?;
    let j2 = jacobian(raw_real_map(GraphMap::F2, s), &origin, ctx.tol.fd_step)?;
    let mut j = DMatrix::<f64>::zeros(12, 12);
    j.view_mut((0, 0), (12, 6)).copy_from(&j1);
    j.view_mut((0, 6), (12, 6)).copy_from(&j2);

    let mut rank = Tracker::new("rank_deficit", COUNT_TOL);
    rank.record((12 - numerical_rank(&j, ctx.tol.rank_tol)) as f64, &origin);

    // the differentials hit disjoint real coordinates; the F1 `c` columns carry |e^{S(0)}|
    let expected = s.eval(c(0.0, 0.0)).s1.exp().min(1.0);
    let smin = singular_values(&j).last().copied().unwrap_or(0.0);
    let mut sigma = Tracker::new("min_singular_value", DOUBLE_POINT_TOL);
    sigma.record((smin - expected).abs(), &[smin, expected]);

    let sing = CanonicalPoint::singular_point();
    let found = locate(
        &GraphPoint {
            x: sing,
            y: sing,
            z: sing,
        },
        params,
    )?;
    let charts: Vec<GraphChartId> = found.iter().map(|f| f.chart).collect();
    let at_origin = found
        .iter()
        .all(|f| f.coords.iter().all(|z| z.norm_sqr() == 0.0));
    let mut loc = Tracker::new("double_point_preimages", COUNT_TOL);
    loc.tally(
        charts != [GraphChartId::E1, GraphChartId::E2] || !at_origin,
        &[found.len() as f64],
    );
    Ok(parts(1, vec![rank, sigma, loc]))
}

fn chart_compatibility(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let params = ctx.params;
    let alg = ctx.tol.alg_tol;
    let m = ctx.tol.samples.div_ceil(6);
    let mut addition = Tracker::new("addition_coherence", ADDITION_COHERENCE_TOL);
    let mut inverse_t = Tracker::new("chart_inverse", alg);
    let mut coherence = Tracker::new("embedding_coherence", alg);
    let mut transition = Tracker::new("transition_coherence", alg);
    for chart in GraphChartId::ALL {
        for _ in 0..m {
            let coords = chart_coords(rng, chart, params)?;
            let input = chart_input(chart, &coords);
            let gp = chart_embed(chart, coords, params)?;
            addition.record(gp.addition_defect(params)?, &input);
            let found = locate(&gp, params)?;
            let back = found
                .iter()
                .filter(|f| f.chart == chart)
                .map(|f| {
                    f.coords
                        .iter()
                        .zip(coords.iter())
                        .map(|(u, v)| (u - v).norm())
                        .fold(0.0, f64::max)
                })
                .fold(f64::INFINITY, f64::min);
            inverse_t.record(back, &input);
            for f in &found {
                let other = chart_embed(f.chart, f.coords, params)?;
                coherence.record(graph_distance(&other, &gp, params), &input);
                if f.chart != chart {
                    let moved = chart_transition(chart, f.chart, coords, params)?;
                    let emb = chart_embed(f.chart, moved, params)?;
                    transition.record(graph_distance(&emb, &gp, params), &input);
                }
            }
        }
    }
    // the closed-form gluings of the exceptional sphere
    let pairs = [
        (GraphChartId::E1, GraphChartId::E6),
        (GraphChartId::E6, GraphChartId::E1),
        (GraphChartId::E2, GraphChartId::E6),
        (GraphChartId::E6, GraphChartId::E2),
    ];
    for (from, to) in pairs {
        for _ in 0..m {
            let coords = chart_coords_where(rng, from, params, |x| {
                closed_form_transition(from, to, *x)
                    .map(|y| chart_contains_with_margin(to, y, params, MARGIN))
                    .unwrap_or(false)
            })?;
            let moved = chart_transition(from, to, coords, params)?;
            let a = chart_embed(from, coords, params)?;
            let b = chart_embed(to, moved, params)?;
            transition.record(graph_distance(&a, &b, params), &chart_input(from, &coords));
        }
    }
    let total = 6 * m + pairs.len() * m;
    Ok(parts(
        total,
        vec![addition, inverse_t, coherence, transition],
    ))
}

fn closed_form_transition(
    from: GraphChartId,
    to: GraphChartId,
    x: ChartCoords,
) -> Result<ChartCoords> {
    use GraphChartId::{E1, E2, E6};
    match (from, to) {
        (E1, E6) | (E6, E1) => tubular_phi(x),
        (E2, E6) | (E6, E2) => Ok(x),
        _ => Ok(x),
    }
}

fn covering(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let params = ctx.params;
    let law = ctx.controls.law;
    let n = ctx.tol.samples;
    let mut random = Tracker::new("random_triples", COUNT_TOL);
    let mut closure = Tracker::new("closure_points", COUNT_TOL);
    let mut families = Tracker::new("special_families", COUNT_TOL);
    let lands = |gp: &GraphPoint, want: Option<GraphChartId>| -> bool {
        match locate(gp, params) {
            Ok(found) => match want {
                Some(chart) => found.iter().any(|f| f.chart == chart),
                None => !found.is_empty(),
            },
            Err(_) => false,
        }
    };
    for _ in 0..n {
        let b = mixed_fiber(rng, params);
        let x = point_on(rng, b, params)?;
        let y = point_on(rng, b, params)?;
        let gp = GraphPoint {
            x,
            y,
            z: law.add(&x, &y, params)?,
        };
        random.tally(!lands(&gp, None), &points_input(&[&x, &y]));

        let s = CanonicalPoint::singular_point();
        let z = point_on_singular_fiber(rng, params)?;
        closure.tally(
            !lands(&GraphPoint { x: s, y: s, z }, None),
            &points_input(&[&z]),
        );

        let b = fiber(rng, params);
        let x = point_on_fiber(rng, b, params)?;
        let e = identity(b, params)?;
        let xi = inverse(&x, params)?;
        let cases = [
            (GraphPoint { x, y: e, z: x }, GraphChartId::E4),
            (GraphPoint { x: e, y: x, z: x }, GraphChartId::E5),
            (GraphPoint { x: e, y: e, z: e }, GraphChartId::E3),
            (GraphPoint { x, y: xi, z: e }, GraphChartId::E6),
        ];
        for (gp, chart) in cases {
            families.tally(
                !lands(&gp, Some(chart)),
                &points_input(&[&gp.x, &gp.y, &gp.z]),
            );
        }
    }
    Ok(parts(n, vec![random, closure, families]))
}

fn tubular(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let params = ctx.params;
    let n = ctx.tol.samples;
    let mut compat = Tracker::new("g2_phi_equals_g1", TUBULAR_TOL);
    let mut invariants = Tracker::new("tautological_invariants", COUNT_TOL);
    let mut zero = Tracker::new("zero_section", COUNT_TOL);
    let mut injective = Tracker::new("inverse_min_separation", 1.0 / INJECTIVITY_TOL);
    let in_e6 = |x: &ChartCoords| {
        tubular_phi(*x)
            .map(|y| chart_contains_with_margin(GraphChartId::E6, y, params, MARGIN))
            .unwrap_or(false)
    };
    for _ in 0..n {
        let x = chart_coords_where(rng, GraphChartId::E1, params, in_e6)?;
        let input = flatten(&x);
        let g1 = tubular_g(TubularChart::Chart1, x, params)?;
        let g2 = tubular_g(TubularChart::Chart6, tubular_phi(x)?, params)?;
        compat.record(g1.distance(&g2), &input);
        invariants.tally(
            g1.invariant_defect() != 0.0 || g2.invariant_defect() != 0.0,
            &input,
        );
        let z = tubular_g(
            TubularChart::Chart1,
            [c(0.0, 0.0), c(0.0, 0.0), x[2]],
            params,
        )?;
        zero.tally(!z.is_zero_section() || g1.is_zero_section(), &input);
    }
    let charts = [
        TubularChart::Chart1,
        TubularChart::Chart2,
        TubularChart::Chart6,
    ];
    for k in 0..n {
        let chart = charts[k % charts.len()];
        let u = chart_coords(rng, chart.graph_chart(), params)?;
        let v = chart_coords(rng, chart.graph_chart(), params)?;
        let gu = tubular_g(chart, u, params)?;
        let gv = tubular_g(chart, v, params)?;
        invariants.tally(
            gu.invariant_defect() != 0.0 || gv.invariant_defect() != 0.0,
            &flatten(&u),
        );
        let mut input = flatten(&u);
        input.extend(flatten(&v));
        injective.record(1.0 / gu.distance(&gv), &input);
    }
    Ok(parts(2 * n, vec![compat, invariants, zero, injective]))
}

fn trivialization_invariance(ctx: &Context<'_>, rng: &mut ChaCha8Rng) -> Result<Parts> {
    let params = ctx.params;
    let law = ctx.controls.law;
    let n = ctx.tol.samples;
    let coef: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let shift = move |b: ComplexValue| {
        TimePair::new(
            coef[0] + coef[1] * b.re + coef[2] * b.im,
            PI * coef[3] + coef[4] * b.re + coef[5] * b.im * b.re,
        )
    };
    let mut addition = Tracker::new("addition_vs_liouville", INVARIANCE_TOL);
    let mut trivialization = Tracker::new("trivialization_change", INVARIANCE_TOL);
    let mut section_change = Tracker::new("section_change", INVARIANCE_TOL);
    let id = TrivializationMatrix::identity();
    for _ in 0..n {
        let b = fiber(rng, params);
        let x = point_on_fiber(rng, b, params)?;
        let y = point_on_fiber(rng, b, params)?;
        let input = points_input(&[&x, &y]);
        let a = random_trivialization(rng);
        let z = law.add(&x, &y, params)?;
        let via_a = add_via_liouville(&x, &y, &a, params)?;
        let via_id = add_via_liouville(&x, &y, &id, params)?;
        addition.record(qd(&z, &via_a, params), &input);
        trivialization.record(qd(&via_a, &via_id, params), &input);

        let [_, _, moved] = change_section([x, y, z], shift, params)?;
        let base = section_unchecked(
            SectionKind::SigmaS,
            common_fiber(&x, &y)?,
            params.invariant(),
        );
        let oracle = add_with_origin(&flow(&base, shift(b)), &x, &y, &a, params)?;
        section_change.record(qd(&moved, &oracle, params), &input);
    }
    Ok(parts(n, vec![addition, trivialization, section_change]))
}
