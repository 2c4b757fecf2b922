//! Evaluatable Finsler metric fields over a domain.
//!
//! Kinds:
//!   * `CatlinLocal(chart)` — the chart-local |r|-form metric;
//!   * `CatlinPatched` — chart max in the collar, calibrated Euclidean
//!     multiple deep inside, smoothstep-blended in between;
//!   * `LowerComparison` / `UpperComparison` — the raw sandwich shapes
//!     |X_N|/delta + |X_H|/delta^(1/m) and |X_N|/delta + |X_H|/delta^(1/2);
//!   * `NormalOnly` — |X_N|/delta, whose radial distances have a closed form
//!     used as a test oracle throughout.

mod catlin;
mod coefficients;
mod frame;

pub use catlin::{calibrate_seam, comparison_values, PatchedDetail, SeamCalibration};
pub use coefficients::{catlin_coefficients, CatlinCoefficients};
pub use frame::{frame_coefficients, l1_annihilation_residual, vector_field_l1, FRAME_COND_LIMIT};

use std::io::Write;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{split, DomainModel, PointContext};
use crate::types::{ComplexPoint2, ComplexVector2};

/// Which metric a `MetricField` evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricKind {
    CatlinLocal { chart: usize },
    CatlinPatched,
    LowerComparison,
    UpperComparison,
    NormalOnly,
}

impl MetricKind {
    pub fn tag(&self) -> String {
        match self {
            MetricKind::CatlinLocal { chart } => format!("catlin_local_{chart}"),
            MetricKind::CatlinPatched => "catlin_patched".into(),
            MetricKind::LowerComparison => "lower_comparison".into(),
            MetricKind::UpperComparison => "upper_comparison".into(),
            MetricKind::NormalOnly => "normal_only".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "catlin_patched" => Ok(MetricKind::CatlinPatched),
            "lower_comparison" => Ok(MetricKind::LowerComparison),
            "upper_comparison" => Ok(MetricKind::UpperComparison),
            "normal_only" => Ok(MetricKind::NormalOnly),
            other => Err(Error::Config(format!("unknown metric kind '{other}'"))),
        }
    }
}

/// An evaluatable Finsler metric (z, X) -> value over a fixed domain.
/// Evaluations are pure; the field is freely shareable across threads.
#[derive(Clone)]
pub struct MetricField {
    pub domain: Arc<DomainModel>,
    pub kind: MetricKind,
    /// Exponent used by the comparison shapes (the global D'Angelo type).
    pub exponent_m: u32,
    seam: Option<SeamCalibration>,
}

impl MetricField {
    pub fn new(domain: Arc<DomainModel>, kind: MetricKind) -> Result<Self> {
        let seam = match kind {
            MetricKind::CatlinPatched => Some(calibrate_seam(&domain)?),
            _ => None,
        };
        let exponent_m = domain.type_m;
        Ok(MetricField {
            domain,
            kind,
            exponent_m,
            seam,
        })
    }

    pub fn seam(&self) -> Option<&SeamCalibration> {
        self.seam.as_ref()
    }

    /// Metric value at a point; computes the point context internally.
    pub fn eval(&self, z: ComplexPoint2, x: ComplexVector2) -> Result<f64> {
        let ctx = self.domain.point_context(z)?;
        self.eval_with_ctx(&ctx, x)
    }

    /// Metric value with a precomputed point context (the fast path used by
    /// graph construction and quadrature).
    pub fn eval_with_ctx(&self, ctx: &PointContext, x: ComplexVector2) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Precondition("metric argument not finite".into()));
        }
        match self.kind {
            MetricKind::CatlinLocal { chart } => catlin::catlin_metric(&self.domain, chart, ctx.z, x),
            MetricKind::CatlinPatched => {
                let seam = self.seam.as_ref().expect("patched metric has a seam calibration");
                Ok(catlin::patched_detail(&self.domain, seam, ctx, x)?.value)
            }
            MetricKind::LowerComparison | MetricKind::UpperComparison => {
                let s = split::split_with_normal(&ctx.into_split_carrier(), x);
                let (lo, hi) =
                    comparison_values(self.exponent_m, ctx.delta, s.x_n.norm(), s.x_h.norm());
                Ok(match self.kind {
                    MetricKind::LowerComparison => lo,
                    _ => hi,
                })
            }
            MetricKind::NormalOnly => {
                let s = split::split_with_normal(&ctx.into_split_carrier(), x);
                Ok(s.x_n.norm() / ctx.delta)
            }
        }
    }

    /// Patched-metric evaluation with the winning chart's coefficient table;
    /// other kinds report an empty table.
    pub fn eval_detailed(&self, z: ComplexPoint2, x: ComplexVector2) -> Result<PatchedDetail> {
        let ctx = self.domain.point_context(z)?;
        match self.kind {
            MetricKind::CatlinPatched => {
                let seam = self.seam.as_ref().expect("patched metric has a seam calibration");
                catlin::patched_detail(&self.domain, seam, &ctx, x)
            }
            _ => Ok(PatchedDetail {
                value: self.eval_with_ctx(&ctx, x)?,
                delta: ctx.delta,
                c_values: vec![0.0; (self.domain.type_m - 1) as usize],
                chart: None,
            }),
        }
    }
}

/// Chart-local split-form metric (delta in place of |r|, orthogonal split in
/// place of the frame).
pub fn catlin_metric_split(
    domain: &DomainModel,
    chart_idx: usize,
    z: ComplexPoint2,
    x: ComplexVector2,
) -> Result<f64> {
    let ctx = domain.point_context(z)?;
    if ctx.delta >= domain.collar_eps {
        return Err(Error::Collar {
            delta: ctx.delta,
            collar: domain.collar_eps,
        });
    }
    catlin::catlin_metric_split_ctx(domain, chart_idx, &ctx, x)
}

/// Chart-local |r|-form metric.
pub fn catlin_metric(domain: &DomainModel, chart_idx: usize, z: ComplexPoint2, x: ComplexVector2) -> Result<f64> {
    catlin::catlin_metric(domain, chart_idx, z, x)
}

/// Globally patched metric value.
pub fn patched_metric(field: &MetricField, z: ComplexPoint2, x: ComplexVector2) -> Result<f64> {
    match field.kind {
        MetricKind::CatlinPatched => field.eval(z, x),
        _ => Err(Error::Precondition("patched_metric needs a CatlinPatched field".into())),
    }
}

/// The raw comparison bounds at a collar point.
pub fn comparison_metrics(domain: &DomainModel, z: ComplexPoint2, x: ComplexVector2) -> Result<(f64, f64)> {
    let ctx = domain.point_context(z)?;
    if ctx.delta >= domain.collar_eps {
        return Err(Error::Collar {
            delta: ctx.delta,
            collar: domain.collar_eps,
        });
    }
    if x.norm() == 0.0 {
        return Ok((0.0, 0.0));
    }
    let s = split::split_with_normal(&ctx.into_split_carrier(), x);
    Ok(comparison_values(domain.type_m, ctx.delta, s.x_n.norm(), s.x_h.norm()))
}

/// One row of a metric-sample dump.
pub struct MetricSample {
    pub z: ComplexPoint2,
    pub x: ComplexVector2,
}

/// Write the metric-sample CSV: point, vector, kind, value, delta, C_2..C_m.
/// Rows are emitted in sample order.
pub fn dump_samples<W: Write>(field: &MetricField, samples: &[MetricSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let m = field.domain.type_m;
    let mut header = vec![
        "z1_re".to_string(),
        "z1_im".to_string(),
        "z2_re".to_string(),
        "z2_im".to_string(),
        "x1_re".to_string(),
        "x1_im".to_string(),
        "x2_re".to_string(),
        "x2_im".to_string(),
        "kind".to_string(),
        "value".to_string(),
        "delta".to_string(),
    ];
    for l in 2..=m {
        header.push(format!("c{l}"));
    }
    w.write_record(&header).map_err(csv_err)?;
    for s in samples {
        let d = field.eval_detailed(s.z, s.x)?;
        let zc = s.z.to_reals();
        let xc = [s.x.v1.re, s.x.v1.im, s.x.v2.re, s.x.v2.im];
        let mut rec: Vec<String> = zc.iter().chain(xc.iter()).map(|v| format!("{v:.17e}")).collect();
        rec.push(field.kind.tag());
        rec.push(format!("{:.17e}", d.value));
        rec.push(format!("{:.17e}", d.delta));
        for c in &d.c_values {
            rec.push(format!("{c:.17e}"));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv write: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    fn field(name: &str, kind: MetricKind) -> MetricField {
        let dom = fixtures::registry().get(name).unwrap().clone();
        MetricField::new(dom, kind).unwrap()
    }

    fn chart_at_north(domain: &DomainModel) -> usize {
        let xi = ComplexPoint2::from_reals(0.0, 0.0, 1.0, 0.0);
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, c) in domain.charts.iter().enumerate() {
            let d = c.center.dist(xi);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        assert!(best_d < 1e-9, "expected a chart centered at (0,1)");
        best
    }

    #[test]
    fn ball_catlin_metric_normal_direction() {
        let dom = fixtures::registry().get("ball").unwrap();
        let idx = dom
            .charts
            .iter()
            .position(|c| c.center.dist(ComplexPoint2::from_reals(0.0, 0.0, 1.0, 0.0)) < 0.45)
            .expect("chart near (0,1)");
        for t in [0.1, 0.2, 0.4] {
            let z = ComplexPoint2::from_reals(0.0, 0.0, 1.0 - t, 0.0);
            let x = ComplexVector2::from_reals(0.0, 0.0, 1.0, 0.0);
            let v = catlin_metric(dom, idx, z, x).unwrap();
            // In any chart whose rotation fixes the z2 axis up to phase, the
            // normal coefficient magnitude is 1, so M = 1/|r| exactly on the
            // axis when the chart is centered at (0,1). Off-center charts see
            // a tangential leak bounded by the frame tilt; compare loosely.
            let expect = 1.0 / (2.0 * t - t * t);
            assert!(
                (v - expect).abs() < 0.35 * expect,
                "t={t}: value {v} vs expected {expect}"
            );
        }
    }

    #[test]
    fn egg2_axis_metric_examples_in_centered_chart() {
        let dom = fixtures::registry().get("egg2").unwrap();
        let idx = chart_at_north(dom);
        for t in [0.1, 0.25] {
            let z = ComplexPoint2::from_reals(0.0, 0.0, 1.0 - t, 0.0);
            let abs_r = 1.0 - (1.0 - t) * (1.0 - t);
            // Normal vector: only b2 survives on the axis.
            let v = catlin_metric(dom, idx, z, ComplexVector2::from_reals(0.0, 0.0, 1.0, 0.0)).unwrap();
            assert!((v - 1.0 / abs_r).abs() < 1e-9 * (1.0 / abs_r), "normal: {v}");
            // Tangential vector: only C4 = 4 contributes on the axis.
            let v = catlin_metric(dom, idx, z, ComplexVector2::from_reals(1.0, 0.0, 0.0, 0.0)).unwrap();
            let expect = (4.0f64 / abs_r).powf(0.25);
            assert!((v - expect).abs() < 1e-9 * expect, "tangential: {v} vs {expect}");
        }
    }

    #[test]
    fn zero_vector_gives_zero() {
        let dom = fixtures::registry().get("egg2").unwrap();
        let idx = chart_at_north(dom);
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.8, 0.0);
        assert_eq!(catlin_metric(dom, idx, z, ComplexVector2::ZERO).unwrap(), 0.0);
    }

    #[test]
    fn ball_split_metric_examples() {
        let dom = fixtures::registry().get("ball").unwrap();
        let idx = dom
            .charts
            .iter()
            .position(|c| c.center.dist(ComplexPoint2::from_reals(0.0, 0.0, 1.0, 0.0)) < 0.45)
            .unwrap();
        for t in [0.1, 0.3] {
            let z = ComplexPoint2::from_reals(0.0, 0.0, 1.0 - t, 0.0);
            let v = catlin_metric_split(dom, idx, z, ComplexVector2::from_reals(0.0, 0.0, 1.0, 0.0)).unwrap();
            assert!((v - 1.0 / t).abs() < 1e-7 / t, "normal split: {v}");
            let v = catlin_metric_split(dom, idx, z, ComplexVector2::from_reals(1.0, 0.0, 0.0, 0.0)).unwrap();
            // C2 = 1 + |z1|^2/|z2|^2 = 1 on the axis in the centered chart;
            // off-center charts raise C2 slightly, never below (1/t)^(1/2).
            let expect = (1.0f64 / t).sqrt();
            assert!(v >= expect * (1.0 - 1e-9) && v < expect * 1.6, "tangential split: {v} vs {expect}");
        }
    }

    #[test]
    fn split_and_r_forms_are_comparable_on_collar() {
        let dom = fixtures::registry().get("egg2").unwrap();
        let field = MetricField::new(dom.clone(), MetricKind::CatlinPatched).unwrap();
        let pts = dom
            .sample_interior(40, crate::geometry::DepthProfile::DyadicCollar { bands: 4 }, 11)
            .unwrap();
        let mut ratio_max: f64 = 0.0;
        let mut ratio_min = f64::INFINITY;
        let mut rng = crate::rng::stage_rng(3, "cmp", 0);
        use rand::Rng;
        for z in pts {
            let x = ComplexVector2::from_reals(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            if x.norm() < 1e-3 {
                continue;
            }
            let ctx = dom.point_context(z).unwrap();
            let idx = dom
                .charts_at(z)
                .map(|(i, _)| i)
                .next()
                .expect("collar point is chart-covered");
            let m_r = catlin_metric(&dom, idx, z, x).unwrap();
            let m_s = catlin::catlin_metric_split_ctx(&dom, idx, &ctx, x).unwrap();
            let ratio = m_r / m_s;
            ratio_max = ratio_max.max(ratio);
            ratio_min = ratio_min.min(ratio);
            // Inside the unblended collar, patched is at least any single
            // chart value (max property).
            if ctx.delta < 0.5 * dom.collar_eps {
                let p = field.eval_with_ctx(&ctx, x).unwrap();
                assert!(p >= m_s - 1e-12);
            }
        }
        assert!(ratio_max.is_finite() && ratio_min > 0.0);
        assert!(ratio_max / ratio_min < 25.0, "comparability spread {ratio_min}..{ratio_max}");
    }

    #[test]
    fn comparison_shapes() {
        let dom = fixtures::registry().get("egg2").unwrap();
        for t in [0.05, 0.2] {
            let z = ComplexPoint2::from_reals(0.0, 0.0, 1.0 - t, 0.0);
            // Purely normal: both bounds agree with |X_N|/delta.
            let (lo, hi) = comparison_metrics(dom, z, ComplexVector2::from_reals(0.0, 0.0, 1.0, 0.0)).unwrap();
            assert!((lo - 1.0 / t).abs() < 1e-6 / t);
            assert!((hi - 1.0 / t).abs() < 1e-6 / t);
            // Purely tangential on the egg axis: t^(-1/4) vs t^(-1/2).
            let (lo, hi) = comparison_metrics(dom, z, ComplexVector2::from_reals(1.0, 0.0, 0.0, 0.0)).unwrap();
            assert!((lo - t.powf(-0.25)).abs() < 1e-6 * t.powf(-0.25), "lo = {lo}");
            assert!((hi - t.powf(-0.5)).abs() < 1e-6 * t.powf(-0.5), "hi = {hi}");
        }
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.9, 0.0);
        let (lo, hi) = comparison_metrics(dom, z, ComplexVector2::ZERO).unwrap();
        assert_eq!((lo, hi), (0.0, 0.0));
    }

    #[test]
    fn patched_deep_interior_is_seam_constant() {
        let f = field("ball", MetricKind::CatlinPatched);
        let seam = *f.seam().unwrap();
        let v = f
            .eval(
                ComplexPoint2::from_reals(0.0, 0.0, 0.0, 0.0),
                ComplexVector2::from_reals(1.0, 0.0, 0.0, 0.0),
            )
            .unwrap();
        assert!((v - seam.c_interior).abs() < 1e-12);
        // The two pieces agree within factor 2 on the seam in the
        // interquartile sense; the extremes record the anisotropy spread.
        assert!(seam.ratio_q1 > 0.5, "seam ratio q1 {}", seam.ratio_q1);
        assert!(seam.ratio_q3 < 2.0, "seam ratio q3 {}", seam.ratio_q3);
        assert!(seam.ratio_lo > 0.0 && seam.ratio_hi.is_finite());
    }

    #[test]
    fn normal_only_matches_closed_form() {
        let f = field("ball", MetricKind::NormalOnly);
        for t in [0.1, 0.4] {
            let z = ComplexPoint2::from_reals(0.0, 0.0, 1.0 - t, 0.0);
            let v = f.eval(z, ComplexVector2::from_reals(0.0, 0.0, 1.0, 0.0)).unwrap();
            assert!((v - 1.0 / t).abs() < 1e-7 / t);
        }
    }

    #[test]
    fn homogeneity_sampled() {
        let f = field("egg2", MetricKind::CatlinPatched);
        let dom = &f.domain;
        let pts = dom
            .sample_interior(12, crate::geometry::DepthProfile::Uniform, 5)
            .unwrap();
        use rand::Rng;
        let mut rng = crate::rng::stage_rng(17, "homog", 0);
        for z in pts {
            let x = ComplexVector2::from_reals(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            let t = num_complex::Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let ctx = dom.point_context(z).unwrap();
            let a = f.eval_with_ctx(&ctx, x.scale(t)).unwrap();
            let b = f.eval_with_ctx(&ctx, x).unwrap() * t.norm();
            assert!((a - b).abs() <= 1e-10 * b.max(1e-12), "homogeneity: {a} vs {b}");
        }
    }
}
