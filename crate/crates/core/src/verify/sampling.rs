//! Random samples of fibers, canonical points and chart coordinates.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{chart_contains_with_margin, ChartCoords, GraphChartId};
use crate::model::{ComplexValue, ModelParams, PointC2};
use crate::neighborhood::{normalize, CanonicalPoint};

/// Relative distance kept from open boundaries.
pub const MARGIN: f64 = 0.1;

/// Share of samples placed on the singular fiber where a check mixes both.
pub const SINGULAR_SHARE: f64 = 0.2;

const MAX_TRIES: usize = 20_000_000;

/// Uniform point of the disc `|z| < radius`.
pub fn disc<R: Rng>(rng: &mut R, radius: f64) -> ComplexValue {
    let r = radius * rng.gen::<f64>().sqrt();
    ComplexValue::from_polar(r, rng.gen_range(-PI..PI))
}

/// Uniform regular fiber value in the disc of radius `(1 - MARGIN) epsilon`.
pub fn fiber<R: Rng>(rng: &mut R, params: &ModelParams) -> ComplexValue {
    loop {
        let b = disc(rng, (1.0 - MARGIN) * params.epsilon());
        if b.norm_sqr() > 0.0 {
            return b;
        }
    }
}

/// Canonical point on the regular fiber `b`, with `ln|q|` uniform over the
/// canonical range `(ln(e^{-S1}|b|), 0)`.
pub fn point_on_fiber<R: Rng>(
    rng: &mut R,
    b: ComplexValue,
    params: &ModelParams,
) -> Result<CanonicalPoint> {
    let s1 = params.invariant().eval(b).s1;
    let lo = b.norm().ln() - s1;
    let q = ComplexValue::from_polar(rng.gen_range(lo..0.0).exp(), rng.gen_range(-PI..PI));
    let p = -b.conj() / q.conj();
    normalize(&PointC2::new(p, q), params)
}

/// Regular point of the singular fiber: `(p, 0)` or `(0, q)` with the nonzero
/// modulus log-uniform over two decades of its canonical range.
pub fn point_on_singular_fiber<R: Rng>(
    rng: &mut R,
    params: &ModelParams,
) -> Result<CanonicalPoint> {
    let zero = ComplexValue::new(0.0, 0.0);
    let phase = rng.gen_range(-PI..PI);
    let scale = rng.gen_range((0.01f64).ln()..(1.0 - MARGIN).ln()).exp();
    let pt = if rng.gen_bool(0.5) {
        let s1 = params.invariant().eval(zero).s1;
        PointC2::new(ComplexValue::from_polar(scale * s1.exp(), phase), zero)
    } else {
        PointC2::new(zero, ComplexValue::from_polar(scale, phase))
    };
    normalize(&pt, params)
}

/// A fiber value, zero with probability [`SINGULAR_SHARE`].
pub fn mixed_fiber<R: Rng>(rng: &mut R, params: &ModelParams) -> ComplexValue {
    if rng.gen_bool(SINGULAR_SHARE) {
        ComplexValue::new(0.0, 0.0)
    } else {
        fiber(rng, params)
    }
}

/// Canonical non-singular point on fiber `b`, including `b = 0`.
pub fn point_on<R: Rng>(
    rng: &mut R,
    b: ComplexValue,
    params: &ModelParams,
) -> Result<CanonicalPoint> {
    if b.norm_sqr() == 0.0 {
        point_on_singular_fiber(rng, params)
    } else {
        point_on_fiber(rng, b, params)
    }
}

/// Radii of the sampling discs for each chart coordinate.
fn chart_radii(chart: GraphChartId, params: &ModelParams) -> [f64; 3] {
    let s1 = params.invariant().max_abs_s1_on_disc(params.epsilon());
    let wide = (s1 + params.delta()).exp();
    match chart {
        // the third coordinate is forced small by |abc| < epsilon and |a|, |b| ~ e^{S1}
        GraphChartId::E3 => [wide, wide, (params.epsilon() * wide * wide).min(wide)],
        _ => [wide; 3],
    }
}

/// Chart coordinates uniform in the sampling discs, rejected until they lie
/// in the chart domain with [`MARGIN`], and accepted by `extra`.
pub fn chart_coords_where<R, F>(
    rng: &mut R,
    chart: GraphChartId,
    params: &ModelParams,
    extra: F,
) -> Result<ChartCoords>
where
    R: Rng,
    F: Fn(&ChartCoords) -> bool,
{
    let radii = chart_radii(chart, params);
    for _ in 0..MAX_TRIES {
        let coords = [
            disc(rng, radii[0]),
            disc(rng, radii[1]),
            disc(rng, radii[2]),
        ];
        if chart_contains_with_margin(chart, coords, params, MARGIN) && extra(&coords) {
            return Ok(coords);
        }
    }
    Err(Error::EvaluationFailed(format!(
        "no sample found in chart {chart}"
    )))
}

pub fn chart_coords<R: Rng>(
    rng: &mut R,
    chart: GraphChartId,
    params: &ModelParams,
) -> Result<ChartCoords> {
    chart_coords_where(rng, chart, params, |_| true)
}

/// Flattens complex numbers to `(re, im)` pairs for report inputs.
pub fn flatten(values: &[ComplexValue]) -> Vec<f64> {
    values.iter().flat_map(|z| [z.re, z.im]).collect()
}
