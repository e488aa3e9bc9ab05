//! Polylines in the `(|p|, |q|)` projection, emitted as CSV or SVG.
//!
//! Curves that depend on the invariant are drawn along the ray of real
//! positive `p, q`, that is fiber values `b = -r`.

use std::fmt::Write as _;

use focus_addition::model::{flow, ComplexValue, ModelParams, PointC2, TimePair};

use crate::points::fmt_real;
use crate::CliError;

const POINTS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureKind {
    /// Level sets of |p||q| inside the formal domain and its boundary.
    PqProjection,
    /// Trajectories of the H1 flow.
    H1Flow,
    /// Boundaries of the chart regions D0, D+ and U.
    Charts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub id: String,
    /// `(|p|, |q|)` vertices.
    pub points: Vec<(f64, f64)>,
}

fn s1_on_ray(r: f64, params: &ModelParams) -> f64 {
    params.invariant().eval(ComplexValue::new(-r, 0.0)).s1
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| a + (b - a) * k as f64 / (n - 1) as f64)
}

/// `|p||q| = r` for `|q|` log-spaced over `[lo, hi]`.
fn hyperbola(id: String, r: f64, lo: f64, hi: f64) -> Curve {
    let points = linspace(lo.ln(), hi.ln(), POINTS)
        .map(|lq| (r / lq.exp(), lq.exp()))
        .collect();
    Curve { id, points }
}

/// `|p| = e^{S1(-r) + shift}` traced for `r` in `[0, epsilon]`.
fn p_boundary(id: &str, shift: f64, params: &ModelParams) -> Curve {
    let points = linspace(0.0, params.epsilon(), POINTS)
        .map(|r| {
            let ap = (s1_on_ray(r, params) + shift).exp();
            (ap, r / ap)
        })
        .collect();
    Curve {
        id: id.to_string(),
        points,
    }
}

/// `|q| = level` for `|p|` up to the epsilon hyperbola.
fn q_boundary(id: &str, level: f64, params: &ModelParams) -> Curve {
    Curve {
        id: id.to_string(),
        points: linspace(0.0, params.epsilon() / level, POINTS)
            .map(|ap| (ap, level))
            .collect(),
    }
}

fn epsilon_curve(params: &ModelParams) -> Curve {
    let eps = params.epsilon();
    let lo = eps * (-(s1_on_ray(eps, params) + params.delta())).exp();
    hyperbola("epsilon".into(), eps, lo, 1.0)
}

fn check_levels(fibers: &[f64]) -> Result<(), CliError> {
    match fibers.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        Some(r) => Err(CliError::usage(format!("fiber level {r} must be positive"))),
        None => Ok(()),
    }
}

fn pq_projection(params: &ModelParams, fibers: &[f64]) -> Vec<Curve> {
    let mut curves: Vec<Curve> = fibers
        .iter()
        .map(|&r| {
            let lo = r * (-s1_on_ray(r, params)).exp();
            hyperbola(format!("level_{r}"), r, lo, 1.0)
        })
        .collect();
    curves.push(q_boundary("sigma1", 1.0, params));
    curves.push(p_boundary("sigma2", 0.0, params));
    curves.push(epsilon_curve(params));
    curves
}

fn h1_flow(params: &ModelParams, fibers: &[f64]) -> Vec<Curve> {
    let mut curves: Vec<Curve> = fibers
        .iter()
        .map(|&r| {
            let start = PointC2::real(r.sqrt(), r.sqrt());
            // |p| and |q| sweep [r, 1]
            let reach = 0.5 * r.ln().abs();
            let points = linspace(-reach, reach, POINTS)
                .map(|t| {
                    let pt = flow(&start, TimePair::new(t, 0.0));
                    (pt.p.norm(), pt.q.norm())
                })
                .collect();
            Curve {
                id: format!("flow_{r}"),
                points,
            }
        })
        .collect();
    let top = s1_on_ray(0.0, params).exp().max(1.0);
    curves.push(Curve {
        id: "singular_p".into(),
        points: linspace(0.0, top, POINTS).map(|a| (a, 0.0)).collect(),
    });
    curves.push(Curve {
        id: "singular_q".into(),
        points: linspace(0.0, 1.0, POINTS).map(|a| (0.0, a)).collect(),
    });
    curves
}

fn charts(params: &ModelParams) -> Vec<Curve> {
    let delta = params.delta();
    vec![
        q_boundary("d0_q", 1.0, params),
        p_boundary("d0_p", 0.0, params),
        q_boundary("dplus_lower", (-delta).exp(), params),
        p_boundary("u_lower", -delta, params),
        p_boundary("u_upper", delta, params),
        epsilon_curve(params),
    ]
}

pub fn build(
    kind: FigureKind,
    params: &ModelParams,
    fibers: &[f64],
) -> Result<Vec<Curve>, CliError> {
    check_levels(fibers)?;
    Ok(match kind {
        FigureKind::PqProjection => pq_projection(params, fibers),
        FigureKind::H1Flow => h1_flow(params, fibers),
        FigureKind::Charts => charts(params),
    })
}

pub fn to_csv(curves: &[Curve]) -> String {
    let mut out = String::from("curve_id,abs_p,abs_q\n");
    for c in curves {
        for (ap, aq) in &c.points {
            let _ = writeln!(out, "{},{},{}", c.id, fmt_real(*ap), fmt_real(*aq));
        }
    }
    out
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

pub fn to_svg(curves: &[Curve]) -> String {
    let (size, pad) = (480.0, 40.0);
    let max_of = |f: fn(&(f64, f64)) -> f64| {
        curves
            .iter()
            .flat_map(|c| c.points.iter().map(f))
            .fold(f64::MIN_POSITIVE, f64::max)
    };
    let (pmax, qmax) = (max_of(|v| v.0), max_of(|v| v.1));
    let sx = |ap: f64| pad + (size - 2.0 * pad) * ap / pmax;
    let sy = |aq: f64| size - pad - (size - 2.0 * pad) * aq / qmax;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        out,
        r#"<path d="M{pad} {pad} V{y0} H{x1}" fill="none" stroke="black"/>"#,
        y0 = size - pad,
        x1 = size - pad
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}">|p|</text>"#,
        size - pad,
        size - pad / 3.0
    );
    let _ = writeln!(out, r#"<text x="4" y="{}">|q|</text>"#, pad - 8.0);
    for (k, c) in curves.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|(ap, aq)| format!("{:.2},{:.2}", sx(*ap), sy(*aq)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{colour}" points="{}"><title>{}</title></polyline>"#,
            pts.join(" "),
            c.id
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{colour}" font-size="11">{}</text>"#,
            size - 3.0 * pad,
            pad + 14.0 * k as f64,
            c.id
        );
    }
    out.push_str("</svg>\n");
    out
}
