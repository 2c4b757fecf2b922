//! The chart frame: L1 annihilates the defining function, L2 = d/dw2.
//! Together they form a basis of the (1,0) tangent space on the chart.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Chart;
use crate::types::{ComplexPoint2, ComplexVector2};

/// Condition-number guard for the frame solve.
pub const FRAME_COND_LIMIT: f64 = 1e8;

/// Coefficient of d/dw2 in L1 at a chart point: a = -(dr/dw1)/(dr/dw2).
pub fn l1_slope(chart: &Chart, w: ComplexPoint2) -> Result<Complex64> {
    let rw1 = chart.poly.jet(w, [1, 0, 0, 0]);
    let rw2 = chart.poly.jet(w, [0, 0, 1, 0]);
    if rw2.norm() < chart.w2_floor {
        return Err(Error::ChartCondition {
            value: rw2.norm(),
            threshold: chart.w2_floor,
        });
    }
    Ok(-rw1 / rw2)
}

/// L1 at a world point, expressed in chart coordinates: (1, a).
pub fn vector_field_l1(chart: &Chart, z_world: ComplexPoint2) -> Result<ComplexVector2> {
    let w = chart.to_chart_point(z_world);
    let a = l1_slope(chart, w)?;
    Ok(ComplexVector2::new(Complex64::new(1.0, 0.0), a))
}

/// Solve X = b1 L1 + b2 L2 for a chart-coordinate vector X, with the frame
/// condition number monitored.
pub fn frame_coefficients(chart: &Chart, w: ComplexPoint2, x_chart: ComplexVector2) -> Result<(Complex64, Complex64)> {
    let a = l1_slope(chart, w)?;
    // Frame matrix [[1, 0], [a, 1]]: condition number grows like 1 + |a|^2.
    let s = a.norm_sqr();
    let cond = 1.0 + s + (s * (s + 2.0)).sqrt() * 0.5;
    if cond > FRAME_COND_LIMIT {
        return Err(Error::IllConditioned(cond));
    }
    let b1 = x_chart.v1;
    let b2 = x_chart.v2 - a * b1;
    Ok((b1, b2))
}

/// Residual of L1 applied to the defining function; identically zero in
/// exact arithmetic.
pub fn l1_annihilation_residual(chart: &Chart, z_world: ComplexPoint2) -> Result<f64> {
    let w = chart.to_chart_point(z_world);
    let a = l1_slope(chart, w)?;
    let rw1 = chart.poly.jet(w, [1, 0, 0, 0]);
    let rw2 = chart.poly.jet(w, [0, 0, 1, 0]);
    Ok((rw1 + a * rw2).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;
    use crate::geometry::Chart;
    use crate::poly::Poly4;

    fn identity_chart_for(name: &str) -> Chart {
        let dom = fixtures::registry().get(name).unwrap();
        let poly: Poly4 = dom.sheets[0].clone();
        Chart::identity(
            ComplexPoint2::from_reals(0.0, 0.0, 1.0, 0.0),
            dom.type_m,
            10.0,
            0,
            poly,
            1e-6,
        )
    }

    #[test]
    fn l1_on_ball_axis() {
        let chart = identity_chart_for("ball");
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.5, 0.0);
        let l1 = vector_field_l1(&chart, z).unwrap();
        assert!(l1.sub(ComplexVector2::from_reals(1.0, 0.0, 0.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn l1_on_egg_axis() {
        let chart = identity_chart_for("egg2");
        for t in [0.2, 0.5, 0.8] {
            let z = ComplexPoint2::from_reals(0.0, 0.0, t, 0.0);
            let l1 = vector_field_l1(&chart, z).unwrap();
            assert!(l1.sub(ComplexVector2::from_reals(1.0, 0.0, 0.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn l1_off_axis_ball() {
        let chart = identity_chart_for("ball");
        let z = ComplexPoint2::from_reals(0.5, 0.0, 0.5, 0.0);
        let l1 = vector_field_l1(&chart, z).unwrap();
        // -(zbar1)/(zbar2) = -1 there.
        assert!(l1.sub(ComplexVector2::from_reals(1.0, 0.0, -1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn l1_annihilates_r() {
        let dom = fixtures::registry().get("egg2").unwrap();
        for chart in dom.charts.iter().step_by(9) {
            let inward = dom.base_point.sub(chart.center);
            let z = chart.center.add(inward.scale_re(0.1));
            let res = l1_annihilation_residual(chart, z).unwrap();
            assert!(res < 1e-10, "residual {res}");
        }
    }
}
