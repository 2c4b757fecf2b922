//! The boundary-anisotropic metric forms.
//!
//! Per chart: M(z, X) = |b2|/|r(z)| + |b1| sum_{l=2}^{m} (C_l(z)/|r(z)|)^{1/l}
//! in the chart frame, and the split variant that replaces the frame by the
//! orthogonal decomposition and |r| by the boundary distance:
//! Mtilde(z, X) = |X_N|/delta + |X_H| sum_{l=2}^{m} (C_l(z)/delta)^{1/l}.
//!
//! Globally the collar takes the max of Mtilde over the covering charts and
//! the deep interior uses a calibrated multiple of the Euclidean norm, the
//! two joined by a smoothstep blend over the outer half of the collar.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{split, DomainModel, PointContext};
use crate::metrics::coefficients::catlin_coefficients;
use crate::metrics::frame;
use crate::rng::stage_rng;
use crate::types::{ComplexPoint2, ComplexVector2};

/// Chart-local metric in the |r| form.
pub fn catlin_metric(domain: &DomainModel, chart_idx: usize, z: ComplexPoint2, x: ComplexVector2) -> Result<f64> {
    let chart = &domain.charts[chart_idx];
    if !chart.contains(z) {
        return Err(Error::OutOfChart(format!(
            "point {:?} outside chart {chart_idx}",
            z.to_reals()
        )));
    }
    let r = domain.eval_r(z)?;
    if r >= 0.0 {
        return Err(Error::Membership("metric point must be interior".into()));
    }
    if x.norm() == 0.0 {
        return Ok(0.0);
    }
    let w = chart.to_chart_point(z);
    let xw = chart.to_chart_vector(x);
    let (b1, b2) = frame::frame_coefficients(chart, w, xw)?;
    let coeffs = catlin_coefficients(chart, z, chart.type_m)?;
    let abs_r = r.abs();
    let mut tangential = 0.0;
    for l in 2..=chart.type_m {
        tangential += (coeffs.c(l) / abs_r).powf(1.0 / l as f64);
    }
    Ok(b2.norm() / abs_r + b1.norm() * tangential)
}

/// Chart-local metric in the split/boundary-distance form.
pub fn catlin_metric_split_ctx(
    domain: &DomainModel,
    chart_idx: usize,
    ctx: &PointContext,
    x: ComplexVector2,
) -> Result<f64> {
    let chart = &domain.charts[chart_idx];
    if !chart.contains(ctx.z) {
        return Err(Error::OutOfChart(format!(
            "point {:?} outside chart {chart_idx}",
            ctx.z.to_reals()
        )));
    }
    if x.norm() == 0.0 {
        return Ok(0.0);
    }
    let s = split::split_with_normal(&ctx.into_split_carrier(), x);
    let coeffs = catlin_coefficients(chart, ctx.z, chart.type_m)?;
    let delta = ctx.delta;
    let mut tangential = 0.0;
    for l in 2..=chart.type_m {
        tangential += (coeffs.c(l) / delta).powf(1.0 / l as f64);
    }
    Ok(s.x_n.norm() / delta + s.x_h.norm() * tangential)
}

/// Split-form metric plus the winning chart's coefficient table, for dumps.
pub struct PatchedDetail {
    pub value: f64,
    pub delta: f64,
    /// C_2..C_m of the chart attaining the max (padded with zeros when the
    /// interior piece wins or the chart order is lower than the global type).
    pub c_values: Vec<f64>,
    pub chart: Option<usize>,
}

/// Interior scaling of the patched metric, calibrated once per domain by
/// matching medians of the two pieces on the collar seam. The collar piece
/// is direction-anisotropic, so the agreement statistic is recorded as the
/// interquartile ratio range (the factor-2 target) plus the observed extremes.
#[derive(Debug, Clone, Copy)]
pub struct SeamCalibration {
    pub c_interior: f64,
    /// 25th/75th percentile of collar-piece / interior-piece on the seam.
    pub ratio_q1: f64,
    pub ratio_q3: f64,
    /// Observed extremes of the same ratio.
    pub ratio_lo: f64,
    pub ratio_hi: f64,
}

/// Max of the split-form metric over the charts covering `z`. Charts that
/// fail their nondegeneracy condition are skipped; at least one must apply.
pub fn patched_collar_detail(domain: &DomainModel, ctx: &PointContext, x: ComplexVector2) -> Result<PatchedDetail> {
    let mut best: Option<(f64, usize, Vec<f64>)> = None;
    for (idx, chart) in domain.charts_at(ctx.z) {
        if x.norm() == 0.0 {
            return Ok(PatchedDetail {
                value: 0.0,
                delta: ctx.delta,
                c_values: vec![0.0; (domain.type_m - 1) as usize],
                chart: Some(idx),
            });
        }
        let s = split::split_with_normal(&ctx.into_split_carrier(), x);
        let coeffs = match catlin_coefficients(chart, ctx.z, chart.type_m) {
            Ok(c) => c,
            Err(Error::ChartCondition { .. }) => continue,
            Err(e) => return Err(e),
        };
        let mut tangential = 0.0;
        for l in 2..=chart.type_m {
            tangential += (coeffs.c(l) / ctx.delta).powf(1.0 / l as f64);
        }
        let v = s.x_n.norm() / ctx.delta + s.x_h.norm() * tangential;
        if best.as_ref().map_or(true, |(bv, _, _)| v > *bv) {
            let mut padded = vec![0.0; (domain.type_m - 1) as usize];
            for l in 2..=chart.type_m {
                padded[(l - 2) as usize] = coeffs.c(l);
            }
            best = Some((v, idx, padded));
        }
    }
    match best {
        Some((value, chart, c_values)) => Ok(PatchedDetail {
            value,
            delta: ctx.delta,
            c_values,
            chart: Some(chart),
        }),
        None => Err(Error::OutOfChart(format!(
            "no valid chart covers collar point {:?} of {}",
            ctx.z.to_reals(),
            domain.name
        ))),
    }
}

fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * (3.0 - 2.0 * u)
}

/// Globally patched metric value with detail. Inside the inner collar this is
/// the chart max; beyond the collar it is c_interior |X|; over the outer half
/// of the collar the two are blended by a fixed smoothstep profile in delta.
pub fn patched_detail(
    domain: &DomainModel,
    seam: &SeamCalibration,
    ctx: &PointContext,
    x: ComplexVector2,
) -> Result<PatchedDetail> {
    let eps = domain.collar_eps;
    let pad = (domain.type_m - 1) as usize;
    if x.norm() == 0.0 {
        return Ok(PatchedDetail {
            value: 0.0,
            delta: ctx.delta,
            c_values: vec![0.0; pad],
            chart: None,
        });
    }
    if ctx.delta >= eps {
        return Ok(PatchedDetail {
            value: seam.c_interior * x.norm(),
            delta: ctx.delta,
            c_values: vec![0.0; pad],
            chart: None,
        });
    }
    let collar = patched_collar_detail(domain, ctx, x)?;
    if ctx.delta < 0.5 * eps {
        return Ok(collar);
    }
    let s = smoothstep((ctx.delta - 0.5 * eps) / (0.5 * eps));
    Ok(PatchedDetail {
        value: (1.0 - s) * collar.value + s * seam.c_interior * x.norm(),
        delta: ctx.delta,
        c_values: collar.c_values,
        chart: collar.chart,
    })
}

/// Raw-shape comparison bounds (constant 1): the lower bound uses the global
/// type exponent, the upper the strongly pseudoconvex exponent 1/2.
pub fn comparison_values(type_m: u32, delta: f64, x_n: f64, x_h: f64) -> (f64, f64) {
    let lower = x_n / delta + x_h / delta.powf(1.0 / type_m as f64);
    let upper = x_n / delta + x_h / delta.sqrt();
    (lower, upper)
}

/// Calibrate the interior constant: sample points on the outer seam band of
/// the collar with isotropic directions and match the medians of the two
/// pieces. Domains whose collar covers everything never use the interior
/// piece and keep the neutral constant 1.
pub fn calibrate_seam(domain: &DomainModel) -> Result<SeamCalibration> {
    if domain.collar_eps >= domain.inradius {
        return Ok(SeamCalibration {
            c_interior: 1.0,
            ratio_q1: 1.0,
            ratio_q3: 1.0,
            ratio_lo: 1.0,
            ratio_hi: 1.0,
        });
    }
    let eps = domain.collar_eps;
    let mut rng = stage_rng(0x5EA1_0001, &format!("seam/{}", domain.name), 0);
    let mut ratios = Vec::new();
    let step = (domain.boundary_samples.len() / 160).max(1);
    for b in domain.boundary_samples.iter().step_by(step) {
        let inward = domain.base_point.sub(*b);
        let n = inward.norm();
        if n < 1e-9 {
            continue;
        }
        let z = b.add(inward.scale_re(0.96 * eps / n));
        if !domain.is_interior(z) {
            continue;
        }
        let ctx = domain.point_context(z)?;
        if ctx.delta < 0.88 * eps || ctx.delta >= eps {
            continue;
        }
        let x = random_unit_vector(&mut rng);
        match patched_collar_detail(domain, &ctx, x) {
            Ok(d) => ratios.push(d.value / x.norm()),
            Err(Error::OutOfChart(_)) | Err(Error::ChartCondition { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    if ratios.len() < 16 {
        return Err(Error::Sampling(format!(
            "seam calibration collected only {} samples on {}",
            ratios.len(),
            domain.name
        )));
    }
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let c_interior = ratios[ratios.len() / 2];
    let q = |p: f64| ratios[((ratios.len() - 1) as f64 * p) as usize] / c_interior;
    Ok(SeamCalibration {
        c_interior,
        ratio_q1: q(0.25),
        ratio_q3: q(0.75),
        ratio_lo: ratios.first().copied().unwrap() / c_interior,
        ratio_hi: ratios.last().copied().unwrap() / c_interior,
    })
}

fn random_unit_vector(rng: &mut impl Rng) -> ComplexVector2 {
    loop {
        let mut c = [0.0; 4];
        for v in c.iter_mut() {
            let u: f64 = rng.gen_range(1e-12..1.0);
            let ph: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            *v = (-2.0 * u.ln()).sqrt() * ph.cos();
        }
        let x = ComplexVector2::from_reals(c[0], c[1], c[2], c[3]);
        let n = x.norm();
        if n > 1e-6 {
            return x.scale_re(1.0 / n);
        }
    }
}
