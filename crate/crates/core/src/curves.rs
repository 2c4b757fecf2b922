//! Polyline curves: Euclidean and Finsler lengths, maximal boundary distance,
//! and resampling.
//!
//! Finsler lengths use a midpoint rule per segment with adaptive bisection;
//! the metric blows up like 1/delta near the boundary, and bisection
//! concentrates quadrature nodes there automatically.

use std::io::Write;

use crate::error::{Error, Result};
use crate::geometry::DomainModel;
use crate::metrics::MetricField;
use crate::types::ComplexPoint2;

/// Relative tolerance of the adaptive segment quadrature.
pub const QUADRATURE_REL_TOL: f64 = 1e-4;
const QUADRATURE_MAX_DEPTH: usize = 24;

/// An ordered polyline with strictly increasing parameters normalized to
/// [0, 1]. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PolylineCurve {
    points: Vec<ComplexPoint2>,
    params: Vec<f64>,
}

impl PolylineCurve {
    /// Build with chord-length parameterization.
    pub fn new(points: Vec<ComplexPoint2>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::CurveValidity("a curve needs at least two points".into()));
        }
        let mut cum = vec![0.0];
        for w in points.windows(2) {
            let d = w[0].dist(w[1]);
            if d == 0.0 {
                return Err(Error::CurveValidity("consecutive points must be distinct".into()));
            }
            cum.push(cum.last().unwrap() + d);
        }
        let total = *cum.last().unwrap();
        let params = cum.iter().map(|c| c / total).collect();
        Ok(PolylineCurve { points, params })
    }

    /// Build with explicit parameters (strictly increasing, endpoints 0 and 1).
    pub fn with_params(points: Vec<ComplexPoint2>, params: Vec<f64>) -> Result<Self> {
        if points.len() < 2 || points.len() != params.len() {
            return Err(Error::CurveValidity("points/params length mismatch".into()));
        }
        if (params[0] - 0.0).abs() > 1e-12 || (params[params.len() - 1] - 1.0).abs() > 1e-12 {
            return Err(Error::CurveValidity("parameters must span [0, 1]".into()));
        }
        for w in params.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::CurveValidity("parameters must be strictly increasing".into()));
            }
        }
        for w in points.windows(2) {
            if w[0].dist(w[1]) == 0.0 {
                return Err(Error::CurveValidity("consecutive points must be distinct".into()));
            }
        }
        Ok(PolylineCurve { points, params })
    }

    pub fn points(&self) -> &[ComplexPoint2] {
        &self.points
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn first(&self) -> ComplexPoint2 {
        self.points[0]
    }

    pub fn last(&self) -> ComplexPoint2 {
        *self.points.last().unwrap()
    }

    pub fn reversed(&self) -> PolylineCurve {
        let points: Vec<_> = self.points.iter().rev().copied().collect();
        let params: Vec<_> = self.params.iter().rev().map(|p| 1.0 - p).collect();
        PolylineCurve { points, params }
    }

    /// Point at a parameter value, by linear interpolation between vertices.
    pub fn at(&self, t: f64) -> ComplexPoint2 {
        let t = t.clamp(0.0, 1.0);
        match self.params.binary_search_by(|p| p.partial_cmp(&t).unwrap()) {
            Ok(i) => self.points[i],
            Err(i) => {
                let i = i.clamp(1, self.points.len() - 1);
                let (t0, t1) = (self.params[i - 1], self.params[i]);
                let s = (t - t0) / (t1 - t0);
                self.points[i - 1].lerp(self.points[i], s)
            }
        }
    }

    /// Vertex membership and chord-midpoint membership in the domain.
    pub fn validate_in(&self, domain: &DomainModel) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            if !domain.contains(*p) {
                return Err(Error::CurveValidity(format!("vertex {i} outside the domain")));
            }
        }
        for (i, w) in self.points.windows(2).enumerate() {
            let mid = w[0].lerp(w[1], 0.5);
            if !domain.contains(mid) {
                return Err(Error::CurveValidity(format!("chord {i} exits the domain")));
            }
        }
        Ok(())
    }
}

/// Sum of segment chord lengths.
pub fn euclidean_length(curve: &PolylineCurve) -> f64 {
    curve.points().windows(2).map(|w| w[0].dist(w[1])).sum()
}

fn segment_quadrature(metric: &MetricField, a: ComplexPoint2, b: ComplexPoint2) -> Result<f64> {
    let chord = b.sub(a);
    let mid = a.lerp(b, 0.5);
    let ctx = metric.domain.point_context(mid)?;
    Ok(metric.eval_with_ctx(&ctx, chord)?)
}

fn adaptive_segment(
    metric: &MetricField,
    a: ComplexPoint2,
    b: ComplexPoint2,
    whole: f64,
    depth: usize,
) -> Result<f64> {
    let mid = a.lerp(b, 0.5);
    let left = segment_quadrature(metric, a, mid)?;
    let right = segment_quadrature(metric, mid, b)?;
    let refined = left + right;
    if depth >= QUADRATURE_MAX_DEPTH
        || (whole - refined).abs() <= QUADRATURE_REL_TOL * refined.abs().max(1e-300)
    {
        return Ok(refined);
    }
    Ok(adaptive_segment(metric, a, mid, left, depth + 1)?
        + adaptive_segment(metric, mid, b, right, depth + 1)?)
}

/// Finsler length of the curve under the given metric field.
pub fn finsler_length(metric: &MetricField, curve: &PolylineCurve) -> Result<f64> {
    let mut total = 0.0;
    for (i, w) in curve.points().windows(2).enumerate() {
        let whole = segment_quadrature(metric, w[0], w[1]).map_err(|e| Error::Numeric {
            context: format!("finsler_length segment {i}: {e}"),
            residual: f64::NAN,
        })?;
        total += adaptive_segment(metric, w[0], w[1], whole, 0).map_err(|e| Error::Numeric {
            context: format!("finsler_length segment {i}: {e}"),
            residual: f64::NAN,
        })?;
    }
    Ok(total)
}

/// Cumulative Finsler length at each vertex, plus the total.
pub fn finsler_cumlen(metric: &MetricField, curve: &PolylineCurve) -> Result<(Vec<f64>, f64)> {
    let mut cum = Vec::with_capacity(curve.points().len());
    cum.push(0.0);
    for w in curve.points().windows(2) {
        let whole = segment_quadrature(metric, w[0], w[1])?;
        let len = adaptive_segment(metric, w[0], w[1], whole, 0)?;
        cum.push(cum.last().unwrap() + len);
    }
    let total = *cum.last().unwrap();
    Ok((cum, total))
}

fn max_delta_on_segment(
    domain: &DomainModel,
    a: ComplexPoint2,
    da: f64,
    b: ComplexPoint2,
    db: f64,
    depth: usize,
) -> Result<f64> {
    let len = a.dist(b);
    let local = da.max(db);
    // Refinement matched to the metric blow-up scale: stop once the segment
    // is short relative to the local boundary distance.
    if depth >= 16 || len <= 0.25 * local.max(1e-6) {
        return Ok(local);
    }
    let mid = a.lerp(b, 0.5);
    let dm = domain.boundary_distance(mid)?;
    let l = max_delta_on_segment(domain, a, da, mid, dm, depth + 1)?;
    let r = max_delta_on_segment(domain, mid, dm, b, db, depth + 1)?;
    Ok(l.max(r))
}

/// Maximum boundary distance attained along the curve (vertices plus
/// adaptively sampled segment interiors).
pub fn max_boundary_distance(domain: &DomainModel, curve: &PolylineCurve) -> Result<f64> {
    let mut best: f64 = 0.0;
    let deltas: Vec<f64> = curve
        .points()
        .iter()
        .map(|p| domain.boundary_distance(*p))
        .collect::<Result<_>>()?;
    for (i, w) in curve.points().windows(2).enumerate() {
        best = best.max(max_delta_on_segment(
            domain,
            w[0],
            deltas[i],
            w[1],
            deltas[i + 1],
            0,
        )?);
    }
    Ok(best)
}

/// Insert vertices so that every chord is at most `max_step` long. Endpoints,
/// ordering and the image are preserved; parameters interpolate linearly.
pub fn resample(curve: &PolylineCurve, max_step: f64) -> Result<PolylineCurve> {
    if max_step <= 0.0 {
        return Err(Error::Precondition("max_step must be positive".into()));
    }
    let mut points = Vec::new();
    let mut params = Vec::new();
    for (i, w) in curve.points().windows(2).enumerate() {
        let d = w[0].dist(w[1]);
        let pieces = (d / max_step).ceil().max(1.0) as usize;
        let (t0, t1) = (curve.params()[i], curve.params()[i + 1]);
        for k in 0..pieces {
            let s = k as f64 / pieces as f64;
            points.push(w[0].lerp(w[1], s));
            params.push(t0 + (t1 - t0) * s);
        }
    }
    points.push(curve.last());
    params.push(1.0);
    PolylineCurve::with_params(points, params)
}

/// Curve dump CSV: (param, z1 re, z1 im, z2 re, z2 im, delta).
pub fn dump_curve<W: Write>(domain: &DomainModel, curve: &PolylineCurve, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["param", "z1_re", "z1_im", "z2_re", "z2_im", "delta"])
        .map_err(|e| Error::Config(format!("csv write: {e}")))?;
    for (p, t) in curve.points().iter().zip(curve.params()) {
        let c = p.to_reals();
        let delta = domain.boundary_distance(*p)?;
        w.write_record([
            format!("{t:.17e}"),
            format!("{:.17e}", c[0]),
            format!("{:.17e}", c[1]),
            format!("{:.17e}", c[2]),
            format!("{:.17e}", c[3]),
            format!("{delta:.17e}"),
        ])
        .map_err(|e| Error::Config(format!("csv write: {e}")))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;
    use crate::metrics::{MetricField, MetricKind};

    fn pt(x2: f64) -> ComplexPoint2 {
        ComplexPoint2::from_reals(0.0, 0.0, x2, 0.0)
    }

    #[test]
    fn euclidean_lengths() {
        let two = PolylineCurve::new(vec![pt(0.1), pt(0.9)]).unwrap();
        assert!((euclidean_length(&two) - 0.8).abs() < 1e-15);
        let three = PolylineCurve::new(vec![pt(0.1), pt(0.5), pt(0.9)]).unwrap();
        assert!((euclidean_length(&three) - 0.8).abs() < 1e-15);
        // Square wave of 4 unit steps.
        let sq = PolylineCurve::new(vec![
            ComplexPoint2::from_reals(0.0, 0.0, 0.0, 0.0),
            ComplexPoint2::from_reals(1.0, 0.0, 0.0, 0.0),
            ComplexPoint2::from_reals(1.0, 0.0, 1.0, 0.0),
            ComplexPoint2::from_reals(2.0, 0.0, 1.0, 0.0),
            ComplexPoint2::from_reals(2.0, 0.0, 0.0, 0.0),
        ])
        .unwrap();
        assert!((euclidean_length(&sq) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn finsler_length_normal_segment_closed_form() {
        let ball = fixtures::registry().get("ball").unwrap().clone();
        let metric = MetricField::new(ball, MetricKind::NormalOnly).unwrap();
        // Depth runs from t1 to t2; the closed form is log(t2/t1).
        let (t1, t2) = (0.1, 0.4);
        let curve = PolylineCurve::new(vec![pt(1.0 - t1), pt(1.0 - t2)]).unwrap();
        let len = finsler_length(&metric, &curve).unwrap();
        let expect = (t2 / t1).ln();
        assert!((len - expect).abs() < 2e-4 * expect, "{len} vs {expect}");
        // Reversal invariance.
        let rev = finsler_length(&metric, &curve.reversed()).unwrap();
        assert!((len - rev).abs() < 1e-12);
    }

    #[test]
    fn finsler_additivity_over_concatenation() {
        let ball = fixtures::registry().get("ball").unwrap().clone();
        let metric = MetricField::new(ball, MetricKind::NormalOnly).unwrap();
        let whole = PolylineCurve::new(vec![pt(0.9), pt(0.5)]).unwrap();
        let part1 = PolylineCurve::new(vec![pt(0.9), pt(0.7)]).unwrap();
        let part2 = PolylineCurve::new(vec![pt(0.7), pt(0.5)]).unwrap();
        let w = finsler_length(&metric, &whole).unwrap();
        let p = finsler_length(&metric, &part1).unwrap() + finsler_length(&metric, &part2).unwrap();
        assert!((w - p).abs() < 5e-4 * w, "{w} vs {p}");
    }

    #[test]
    fn resample_preserves_length_and_count() {
        let a = ComplexPoint2::from_reals(0.0, 0.0, 0.0, 0.0);
        let b = ComplexPoint2::from_reals(1.0, 0.0, 0.0, 0.0);
        let c = PolylineCurve::new(vec![a, b]).unwrap();
        let r = resample(&c, 0.25).unwrap();
        assert_eq!(r.points().len(), 5);
        assert!((euclidean_length(&r) - 1.0).abs() < 1e-15);
        // Already-fine curve unchanged.
        let r2 = resample(&r, 0.25).unwrap();
        assert_eq!(r2.points().len(), r.points().len());
        // Oversized step leaves the curve unchanged.
        let r3 = resample(&c, 10.0).unwrap();
        assert_eq!(r3.points().len(), 2);
    }

    #[test]
    fn finsler_invariant_under_resample() {
        let ball = fixtures::registry().get("ball").unwrap().clone();
        let metric = MetricField::new(ball, MetricKind::NormalOnly).unwrap();
        let curve = PolylineCurve::new(vec![pt(0.9), pt(0.5)]).unwrap();
        let l0 = finsler_length(&metric, &curve).unwrap();
        let l1 = finsler_length(&metric, &resample(&curve, 0.05).unwrap()).unwrap();
        assert!((l0 - l1).abs() < 1e-3 * l0, "{l0} vs {l1}");
    }

    #[test]
    fn max_boundary_distance_examples() {
        let ball = fixtures::registry().get("ball").unwrap();
        let radial = PolylineCurve::new(vec![pt(0.2), pt(0.9)]).unwrap();
        let h = max_boundary_distance(ball, &radial).unwrap();
        assert!((h - 0.8).abs() < 1e-6, "H = {h}");
        let through_center = PolylineCurve::new(vec![pt(-0.5), pt(0.5)]).unwrap();
        let h = max_boundary_distance(ball, &through_center).unwrap();
        assert!((h - 1.0).abs() < 1e-4, "H = {h}");
    }

    #[test]
    fn constant_metric_reduces_to_euclidean() {
        // The patched metric deep inside the ball is exactly the seam
        // constant times |X|; a short deep chord must integrate to that.
        let ball = fixtures::registry().get("ball").unwrap().clone();
        let metric = MetricField::new(ball, MetricKind::CatlinPatched).unwrap();
        let c_int = metric.seam().unwrap().c_interior;
        let curve = PolylineCurve::new(vec![
            ComplexPoint2::from_reals(-0.1, 0.0, 0.0, 0.0),
            ComplexPoint2::from_reals(0.1, 0.0, 0.0, 0.0),
        ])
        .unwrap();
        let len = finsler_length(&metric, &curve).unwrap();
        assert!((len - 0.2 * c_int).abs() < 1e-10, "{len} vs {}", 0.2 * c_int);
    }

    #[test]
    fn invalid_curves_rejected() {
        assert!(PolylineCurve::new(vec![pt(0.5)]).is_err());
        assert!(PolylineCurve::new(vec![pt(0.5), pt(0.5)]).is_err());
        let ball = fixtures::registry().get("ball").unwrap();
        let out = PolylineCurve::new(vec![pt(0.5), ComplexPoint2::from_reals(0.0, 0.0, 1.01, 0.0)]).unwrap();
        assert!(out.validate_in(ball).is_err());
    }
}
