//! Orthogonal decomposition of tangent vectors into complex normal and
//! complex tangential components at the nearest boundary point.

use crate::error::Result;
use crate::geometry::DomainModel;
use crate::types::{ComplexPoint2, ComplexVector2};

/// Decomposition X = X_H + X_N at the nearest boundary point pi(z), with the
/// unit complex normal n = dbar r(pi(z)) / |dbar r(pi(z))|.
#[derive(Debug, Clone, Copy)]
pub struct TangentSplit {
    pub projection: ComplexPoint2,
    pub unit_normal: ComplexVector2,
    pub x_h: ComplexVector2,
    pub x_n: ComplexVector2,
    /// Set when z lies beyond the projection collar and the normal was taken
    /// from the nearest reference chart rather than from pi(z).
    pub extrapolated: bool,
}

pub fn tangent_split(domain: &DomainModel, z: ComplexPoint2, x: ComplexVector2) -> Result<TangentSplit> {
    let ctx = domain.point_context(z)?;
    Ok(split_with_normal(&ctx.into_split_carrier(), x))
}

/// Carrier for a precomputed (projection, normal) pair.
#[derive(Debug, Clone, Copy)]
pub struct SplitCarrier {
    pub projection: ComplexPoint2,
    pub unit_normal: ComplexVector2,
    pub extrapolated: bool,
}

impl super::PointContext {
    pub fn into_split_carrier(&self) -> SplitCarrier {
        SplitCarrier {
            projection: self.projection,
            unit_normal: self.unit_normal,
            extrapolated: self.extrapolated,
        }
    }
}

pub fn split_with_normal(carrier: &SplitCarrier, x: ComplexVector2) -> TangentSplit {
    let n = carrier.unit_normal;
    let coeff = x.hermitian_dot(n);
    let x_n = n.scale(coeff);
    let x_h = x.sub(x_n);
    TangentSplit {
        projection: carrier.projection,
        unit_normal: n,
        x_h,
        x_n,
        extrapolated: carrier.extrapolated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    #[test]
    fn ball_normal_and_tangent_vectors() {
        let ball = fixtures::registry().get("ball").unwrap();
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.5, 0.0);

        let s = tangent_split(ball, z, ComplexVector2::from_reals(0.0, 0.0, 1.0, 0.0)).unwrap();
        assert!(s.x_n.sub(ComplexVector2::from_reals(0.0, 0.0, 1.0, 0.0)).norm() < 1e-9);
        assert!(s.x_h.norm() < 1e-9);

        let s = tangent_split(ball, z, ComplexVector2::from_reals(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!(s.x_h.sub(ComplexVector2::from_reals(1.0, 0.0, 0.0, 0.0)).norm() < 1e-9);
        assert!(s.x_n.norm() < 1e-9);

        // Linearity of the split.
        let s = tangent_split(ball, z, ComplexVector2::from_reals(1.0, 0.0, 1.0, 0.0)).unwrap();
        assert!(s.x_h.sub(ComplexVector2::from_reals(1.0, 0.0, 0.0, 0.0)).norm() < 1e-9);
        assert!(s.x_n.sub(ComplexVector2::from_reals(0.0, 0.0, 1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn split_reconstructs_and_is_orthogonal() {
        let egg2 = fixtures::registry().get("egg2").unwrap();
        let z = ComplexPoint2::from_reals(0.3, 0.1, 0.7, 0.05);
        let x = ComplexVector2::from_reals(0.4, -0.2, 0.1, 0.9);
        let s = tangent_split(egg2, z, x).unwrap();
        assert!(s.x_h.add(s.x_n).sub(x).norm() < 1e-12);
        // <x_h, dbar r(pi)> = 0 via the unit normal.
        let ip = s.x_h.hermitian_dot(s.unit_normal).norm();
        assert!(ip < 1e-10, "inner product {ip}");
        // Pythagoras.
        let lhs = x.norm_sqr();
        let rhs = s.x_h.norm_sqr() + s.x_n.norm_sqr();
        assert!((lhs - rhs).abs() < 1e-10 * lhs.max(1.0));
    }
}
