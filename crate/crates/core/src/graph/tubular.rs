//! The `O(-1) + O(-1)` model of a neighborhood of the exceptional sphere.
//!
//! The sphere is covered by `E1` (coordinate `c`) and `E6` (coordinate `1/c`),
//! glued by `phi(a, b, c) = (-bc, -ac, 1/c)`. `E2` and `E6` share coordinates.

use num_complex::Complex64 as ComplexValue;

use super::{chart_contains, ChartCoords, GraphChartId};
use crate::error::{Error, Result};
use crate::model::ModelParams;

/// Chart of the tubular model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TubularChart {
    Chart1,
    Chart2,
    Chart6,
}

impl TubularChart {
    pub fn graph_chart(self) -> GraphChartId {
        match self {
            TubularChart::Chart1 => GraphChartId::E1,
            TubularChart::Chart2 => GraphChartId::E2,
            TubularChart::Chart6 => GraphChartId::E6,
        }
    }
}

/// A point `([l0 : l1], (v1, v2, v3, v4))` of `O(-1) + O(-1)` over `P^1`, with
/// `(v1, v2)` and `(v3, v4)` on the line spanned by `(l0, l1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BundlePoint {
    lambda: [ComplexValue; 2],
    v: [ComplexValue; 4],
}

impl BundlePoint {
    /// Checks `v1 l1 = v2 l0` and `v3 l1 = v4 l0` exactly.
    pub fn new(lambda: [ComplexValue; 2], v: [ComplexValue; 4]) -> Result<Self> {
        if lambda[0].norm_sqr() == 0.0 && lambda[1].norm_sqr() == 0.0 {
            return Err(Error::InvalidInvariant("lambda = [0:0]".into()));
        }
        let bp = Self { lambda, v };
        if bp.invariant_defect() != 0.0 {
            return Err(Error::InvalidInvariant(
                "vector components off the tautological line".into(),
            ));
        }
        Ok(bp)
    }

    pub fn lambda(&self) -> [ComplexValue; 2] {
        self.lambda
    }

    pub fn v(&self) -> [ComplexValue; 4] {
        self.v
    }

    /// Largest of `|v1 l1 - v2 l0|`, `|v3 l1 - v4 l0|`.
    pub fn invariant_defect(&self) -> f64 {
        let [l0, l1] = self.lambda;
        let [v1, v2, v3, v4] = self.v;
        (v1 * l1 - v2 * l0).norm().max((v3 * l1 - v4 * l0).norm())
    }

    pub fn is_zero_section(&self) -> bool {
        self.v.iter().all(|z| z.norm_sqr() == 0.0)
    }

    /// Projective distance of the base points plus the largest vector difference.
    pub fn distance(&self, other: &BundlePoint) -> f64 {
        let [a0, a1] = self.lambda;
        let [b0, b1] = other.lambda;
        let na = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        let nb = (b0.norm_sqr() + b1.norm_sqr()).sqrt();
        let base = (a0 * b1 - a1 * b0).norm() / (na * nb);
        let fiber = self
            .v
            .iter()
            .zip(other.v.iter())
            .map(|(u, w)| (u - w).norm())
            .fold(0.0, f64::max);
        base + fiber
    }
}

/// `phi(a, b, c) = (-bc, -ac, 1/c)`, an involution.
pub fn tubular_phi(coords: ChartCoords) -> Result<ChartCoords> {
    let [a, b, c] = coords;
    if c.norm_sqr() == 0.0 {
        return Err(Error::ZeroThirdCoordinate);
    }
    Ok([-(b * c), -(a * c), c.inv()])
}

/// `G1(a, b, c) = ([1 : -c], (b, -bc, a, -ac))` on `E1`,
/// `G2(a, b, c) = ([-c : 1], (-ac, a, -bc, b))` on `E2` and `E6`.
pub fn tubular_g(
    chart: TubularChart,
    coords: ChartCoords,
    params: &ModelParams,
) -> Result<BundlePoint> {
    let id = chart.graph_chart();
    if !chart_contains(id, coords, params) {
        return Err(Error::OutsideChartDomain(id.name().to_string()));
    }
    Ok(tubular_g_unchecked(chart, coords))
}

pub(crate) fn tubular_g_unchecked(chart: TubularChart, coords: ChartCoords) -> BundlePoint {
    let [a, b, c] = coords;
    let one = ComplexValue::new(1.0, 0.0);
    match chart {
        TubularChart::Chart1 => BundlePoint {
            lambda: [one, -c],
            v: [b, b * (-c), a, a * (-c)],
        },
        TubularChart::Chart2 | TubularChart::Chart6 => BundlePoint {
            lambda: [-c, one],
            v: [a * (-c), a, b * (-c), b],
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn r(x: f64) -> ComplexValue {
        c(x, 0.0)
    }

    #[test]
    fn phi_examples() {
        let out = tubular_phi([r(0.1), r(0.2), r(1.0)]).unwrap();
        assert_eq!(out, [r(-0.2), r(-0.1), r(1.0)]);
        let x = [c(0.1, 0.3), c(-0.2, 0.05), c(0.7, -0.4)];
        let back = tubular_phi(tubular_phi(x).unwrap()).unwrap();
        for (u, v) in back.iter().zip(x.iter()) {
            assert!((u - v).norm() < 1e-15);
        }
        let zero = tubular_phi([r(0.0), r(0.0), c(0.5, 0.5)]).unwrap();
        assert_eq!(zero[0].norm() + zero[1].norm(), 0.0);
        assert_eq!(
            tubular_phi([r(1.0), r(1.0), r(0.0)]),
            Err(Error::ZeroThirdCoordinate)
        );
    }

    #[test]
    fn g_examples() {
        let params = ModelParams::standard();
        let g = tubular_g(TubularChart::Chart1, [r(0.0), r(0.0), r(0.4)], &params).unwrap();
        assert!(g.is_zero_section());
        assert_eq!(g.lambda(), [r(1.0), r(-0.4)]);

        let g = tubular_g(TubularChart::Chart1, [r(0.1), r(0.2), r(0.5)], &params).unwrap();
        assert_eq!(g.lambda(), [r(1.0), r(-0.5)]);
        let expected = [r(0.2), r(-0.1), r(0.1), r(-0.05)];
        for (u, v) in g.v().iter().zip(expected.iter()) {
            assert!((u - v).norm() < 1e-16);
        }
        assert_eq!(g.invariant_defect(), 0.0);
        assert!(BundlePoint::new(g.lambda(), g.v()).is_ok());

        assert!(matches!(
            tubular_g(TubularChart::Chart1, [r(1.0), r(0.2), r(0.5)], &params),
            Err(Error::OutsideChartDomain(_))
        ));
    }

    #[test]
    fn g2_phi_equals_g1() {
        let params = ModelParams::standard();
        let x = [c(0.05, 0.02), c(-0.04, 0.03), c(0.9, 0.1)];
        let g1 = tubular_g(TubularChart::Chart1, x, &params).unwrap();
        let g2 = tubular_g(TubularChart::Chart6, tubular_phi(x).unwrap(), &params).unwrap();
        assert!(g1.distance(&g2) < 1e-15);
    }

    #[test]
    fn bundle_point_validation() {
        assert!(BundlePoint::new([r(0.0), r(0.0)], [r(0.0); 4]).is_err());
        assert!(BundlePoint::new([r(1.0), r(2.0)], [r(1.0), r(1.0), r(0.0), r(0.0)]).is_err());
        assert!(BundlePoint::new([r(1.0), r(2.0)], [r(1.0), r(2.0), r(3.0), r(6.0)]).is_ok());
    }
}
