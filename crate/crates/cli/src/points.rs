//! Text syntax for complex numbers and points: `re,im` and `re,im;re,im`.

use focus_addition::graph::ChartCoords;
use focus_addition::model::{ComplexValue, PointC2};

use crate::CliError;

fn parse_real(s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("not a number: {s:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::usage(format!("not finite: {s:?}")))
    }
}

pub fn parse_complex(s: &str) -> Result<ComplexValue, CliError> {
    match s.split(',').collect::<Vec<_>>().as_slice() {
        [re, im] => Ok(ComplexValue::new(parse_real(re)?, parse_real(im)?)),
        _ => Err(CliError::usage(format!("expected \"re,im\", got {s:?}"))),
    }
}

pub fn parse_point(s: &str) -> Result<PointC2, CliError> {
    match s.split(';').collect::<Vec<_>>().as_slice() {
        [p, q] => Ok(PointC2::new(parse_complex(p)?, parse_complex(q)?)),
        _ => Err(CliError::usage(format!(
            "expected \"re,im;re,im\", got {s:?}"
        ))),
    }
}

/// Comma-separated list of reals.
pub fn parse_reals(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(parse_real).collect()
}

/// Shortest round-trip decimal, with negative zero printed as `0`.
pub fn fmt_real(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

pub fn fmt_complex(z: ComplexValue) -> String {
    format!("{},{}", fmt_real(z.re), fmt_real(z.im))
}

pub fn fmt_point(pt: &PointC2) -> String {
    format!("{};{}", fmt_complex(pt.p), fmt_complex(pt.q))
}

pub fn fmt_coords(c: &ChartCoords) -> String {
    c.iter()
        .map(|z| fmt_complex(*z))
        .collect::<Vec<_>>()
        .join(";")
}
