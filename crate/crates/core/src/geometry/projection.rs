//! Nearest-point projection onto the boundary and boundary distance.
//!
//! The workhorse is Newton iteration on the Lagrange system
//!     xi - z - t * grad r(xi) = 0,   r(xi) = 0,
//! seeded by marching along the gradient to the first boundary crossing.
//! A dense deterministic boundary sample provides the fallback and the
//! uniqueness spot-checks at fixture construction time.

use nalgebra::{SMatrix, SVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{DomainModel, BOUNDARY_TOL};
use crate::rng::stage_rng;
use crate::types::{ComplexPoint2, ComplexVector2};

/// Residual tolerance on r at the projected point.
pub const PROJECTION_RESIDUAL_TOL: f64 = 1e-10;
/// Newton iteration cap.
pub const NEWTON_MAX_ITERS: usize = 50;

/// Result of a boundary projection.
#[derive(Debug, Clone, Copy)]
pub struct Projection {
    pub point: ComplexPoint2,
    pub sheet: usize,
    pub delta: f64,
}

/// Everything downstream metric evaluations need about a point: boundary
/// distance, nearest boundary point, unit complex normal there, and whether
/// the normal had to be extrapolated from the nearest reference chart.
#[derive(Debug, Clone, Copy)]
pub struct PointContext {
    pub z: ComplexPoint2,
    pub delta: f64,
    pub projection: ComplexPoint2,
    pub sheet: usize,
    pub unit_normal: ComplexVector2,
    pub extrapolated: bool,
}

fn as_vec(z: ComplexPoint2) -> SVector<f64, 4> {
    let c = z.to_reals();
    SVector::<f64, 4>::new(c[0], c[1], c[2], c[3])
}

fn from_vec(v: SVector<f64, 4>) -> ComplexPoint2 {
    ComplexPoint2::from_reals(v[0], v[1], v[2], v[3])
}

/// March from an interior point along a direction until r crosses zero, then
/// bisect. Returns the crossing point when one exists inside the bbox.
fn ray_to_boundary(
    domain: &DomainModel,
    sheet: usize,
    from: ComplexPoint2,
    dir: SVector<f64, 4>,
) -> Option<ComplexPoint2> {
    let poly = &domain.sheets[sheet];
    let n = dir.norm();
    if n < 1e-14 {
        return None;
    }
    let dir = dir / n;
    let mut t_lo = 0.0;
    let mut t_hi = None;
    let mut t = 1e-3;
    let t_max = 8.0;
    while t < t_max {
        let p = from_vec(as_vec(from) + dir * t);
        if poly.eval(p).re >= 0.0 {
            t_hi = Some(t);
            break;
        }
        t_lo = t;
        t *= 1.6;
    }
    let mut hi = t_hi?;
    let mut lo = t_lo;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        let p = from_vec(as_vec(from) + dir * mid);
        if poly.eval(p).re >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(from_vec(as_vec(from) + dir * (0.5 * (lo + hi))))
}

/// Newton iteration on the Lagrange system for one sheet. Returns the
/// projected point with |r| <= tolerance and the alignment residual met,
/// or a numeric error carrying the final residual.
fn newton_project(
    domain: &DomainModel,
    sheet: usize,
    z: ComplexPoint2,
    seed: ComplexPoint2,
) -> Result<ComplexPoint2> {
    let poly = &domain.sheets[sheet];
    let zv = as_vec(z);
    let mut xi = as_vec(seed);
    let g0 = SVector::<f64, 4>::from_column_slice(&poly.grad_real(seed));
    let gn = g0.norm();
    if gn < 1e-12 {
        return Err(Error::Numeric {
            context: "projection seed gradient".into(),
            residual: gn,
        });
    }
    let mut t = (xi - zv).dot(&g0) / (gn * gn);

    for _ in 0..NEWTON_MAX_ITERS {
        let p = from_vec(xi);
        let g = SVector::<f64, 4>::from_column_slice(&poly.grad_real(p));
        let r = poly.eval(p).re;
        let fvec = xi - zv - g * t;
        let res = fvec.norm() + r.abs();
        if r.abs() <= PROJECTION_RESIDUAL_TOL && fvec.norm() <= 1e-9 * (1.0 + (xi - zv).norm()) {
            return Ok(p);
        }

        let h = poly.hessian_real(p);
        let mut j = SMatrix::<f64, 5, 5>::zeros();
        for i in 0..4 {
            for k in 0..4 {
                j[(i, k)] = if i == k { 1.0 } else { 0.0 } - t * h[i][k];
            }
            j[(i, 4)] = -g[i];
            j[(4, i)] = g[i];
        }
        let mut rhs = SVector::<f64, 5>::zeros();
        for i in 0..4 {
            rhs[i] = -fvec[i];
        }
        rhs[4] = -r;

        let step = match j.lu().solve(&rhs) {
            Some(s) => s,
            None => {
                return Err(Error::Numeric {
                    context: "projection Newton solve".into(),
                    residual: res,
                })
            }
        };
        // Damp oversized steps; the seed is already near the boundary.
        let mut scale = 1.0;
        let step_norm = step.fixed_rows::<4>(0).norm();
        if step_norm > 0.5 {
            scale = 0.5 / step_norm;
        }
        for i in 0..4 {
            xi[i] += scale * step[i];
        }
        t += scale * step[4];
    }

    let p = from_vec(xi);
    Err(Error::Numeric {
        context: "projection Newton non-convergence".into(),
        residual: poly.eval(p).re.abs(),
    })
}

/// Dense-sample argmin fallback, polished by a short pattern refinement over
/// the boundary sample neighbors plus a final Newton attempt.
fn dense_project(domain: &DomainModel, z: ComplexPoint2) -> Result<Projection> {
    if domain.boundary_samples.is_empty() {
        return Err(Error::Numeric {
            context: "dense projection without boundary samples".into(),
            residual: f64::NAN,
        });
    }
    let mut best = domain.boundary_samples[0];
    let mut best_d = best.dist(z);
    for s in &domain.boundary_samples[1..] {
        let d = s.dist(z);
        if d < best_d {
            best_d = d;
            best = *s;
        }
    }
    let sheet = domain.active_sheet(best);
    match newton_project(domain, sheet, z, best) {
        Ok(p) if domain.eval_r_unchecked(p) <= BOUNDARY_TOL => Ok(Projection {
            point: p,
            sheet,
            delta: p.dist(z),
        }),
        _ => Ok(Projection {
            point: best,
            sheet,
            delta: best_d,
        }),
    }
}

/// Project an interior point to the nearest boundary point.
///
/// Valid inside the projection collar; outside it callers should use
/// `compute_context`, which falls back to the extrapolated normal.
pub fn project_to_boundary(domain: &DomainModel, z: ComplexPoint2) -> Result<Projection> {
    let r = domain.eval_r(z)?;
    if r >= BOUNDARY_TOL {
        return Err(Error::Membership(format!(
            "point {:?} is not inside {} (r = {r:.3e})",
            z.to_reals(),
            domain.name
        )));
    }
    let p = project_any(domain, z)?;
    if p.delta >= domain.collar_eps {
        return Err(Error::Collar {
            delta: p.delta,
            collar: domain.collar_eps,
        });
    }
    Ok(p)
}

/// Projection without the collar membership requirement (used for boundary
/// distance everywhere in the domain).
fn project_any(domain: &DomainModel, z: ComplexPoint2) -> Result<Projection> {
    let mut best: Option<Projection> = None;
    for sheet in 0..domain.sheets.len() {
        let poly = &domain.sheets[sheet];
        let g = SVector::<f64, 4>::from_column_slice(&poly.grad_real(z));
        let seed = if g.norm() > 1e-10 {
            ray_to_boundary(domain, sheet, z, g)
        } else {
            None
        };
        let candidate = match seed {
            Some(s) => newton_project(domain, sheet, z, s).ok(),
            None => None,
        };
        if let Some(p) = candidate {
            // The candidate must lie on the actual boundary of the
            // intersection: all other sheets nonpositive.
            let on_boundary = domain.eval_r_unchecked(p) <= BOUNDARY_TOL;
            if on_boundary {
                let d = p.dist(z);
                if best.as_ref().map_or(true, |b| d < b.delta) {
                    best = Some(Projection {
                        point: p,
                        sheet,
                        delta: d,
                    });
                }
            }
        }
    }
    match best {
        Some(p) => Ok(p),
        None => dense_project(domain, z),
    }
}

/// Boundary distance delta(z) for interior points.
pub fn boundary_distance(domain: &DomainModel, z: ComplexPoint2) -> Result<f64> {
    let r = domain.eval_r(z)?;
    if r >= BOUNDARY_TOL {
        return Err(Error::Membership(format!(
            "point {:?} is not inside {} (r = {r:.3e})",
            z.to_reals(),
            domain.name
        )));
    }
    Ok(project_any(domain, z)?.delta)
}

/// Full point context: distance, projection, and the unit complex normal.
/// Outside the collar the normal is taken from the nearest reference chart
/// and the context is flagged extrapolated.
pub fn compute_context(domain: &DomainModel, z: ComplexPoint2) -> Result<PointContext> {
    let proj = project_any(domain, z)?;
    let in_collar = proj.delta < domain.collar_eps;
    let (normal_at, sheet, extrapolated) = if in_collar {
        (proj.point, proj.sheet, false)
    } else {
        let idx = domain.nearest_chart(z);
        let c = &domain.charts[idx];
        (c.center, c.sheet, true)
    };
    let dbar = domain.sheets[sheet].dbar(normal_at);
    let n = dbar.norm();
    if n < 1e-12 {
        return Err(Error::Numeric {
            context: "unit normal".into(),
            residual: n,
        });
    }
    Ok(PointContext {
        z,
        delta: proj.delta,
        projection: proj.point,
        sheet: proj.sheet,
        unit_normal: ComplexVector2::new(dbar.v1 / n, dbar.v2 / n),
        extrapolated: !in_collar && extrapolated,
    })
}

/// Deterministic dense boundary sample by casting rays from the base point.
/// Model fixtures are star-shaped about their base point, so each ray meets
/// the boundary exactly once.
pub fn cast_boundary_samples(domain: &DomainModel, count: usize) -> Result<Vec<ComplexPoint2>> {
    let mut rng = stage_rng(0xF1D0_0001, &format!("boundary/{}", domain.name), 0);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > count * 40 {
            return Err(Error::Sampling(format!(
                "boundary sampling exhausted on {}",
                domain.name
            )));
        }
        let mut dir = SVector::<f64, 4>::zeros();
        for i in 0..4 {
            // Box-Muller pair; only the cosine branch is needed.
            let u: f64 = rng.gen_range(1e-12..1.0);
            let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            dir[i] = (-2.0 * u.ln()).sqrt() * v.cos();
        }
        // Crossing of max_i r_i = 0 along the ray: march on the effective max.
        let n = dir.norm();
        if n < 1e-9 {
            continue;
        }
        let dir = dir / n;
        let from = domain.base_point;
        let mut lo = 0.0f64;
        let mut hi_opt = None;
        let mut t = 1e-3;
        while t < 8.0 {
            let p = from_vec(as_vec(from) + dir * t);
            if !domain.bbox.contains(p) || domain.eval_r_unchecked(p) >= 0.0 {
                hi_opt = Some(t);
                break;
            }
            lo = t;
            t *= 1.5;
        }
        let Some(mut hi) = hi_opt else { continue };
        for _ in 0..70 {
            let mid = 0.5 * (lo + hi);
            let p = from_vec(as_vec(from) + dir * mid);
            if !domain.bbox.contains(p) || domain.eval_r_unchecked(p) >= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let p = from_vec(as_vec(from) + dir * (0.5 * (lo + hi)));
        if domain.bbox.contains(p) && domain.eval_r_unchecked(p).abs() < 1e-6 {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    #[test]
    fn ball_center_distance_is_one() {
        let ball = fixtures::registry().get("ball").unwrap();
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.0, 0.0);
        let d = boundary_distance(ball, z).unwrap();
        assert!((d - 1.0).abs() < 1e-6, "delta = {d}");
    }

    #[test]
    fn ball_radial_distances() {
        let ball = fixtures::registry().get("ball").unwrap();
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.75, 0.0);
        let d = boundary_distance(ball, z).unwrap();
        assert!((d - 0.25).abs() < 1e-9, "delta = {d}");
    }

    #[test]
    fn egg_axis_projection() {
        let egg2 = fixtures::registry().get("egg2").unwrap();
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.9, 0.0);
        let d = boundary_distance(egg2, z).unwrap();
        assert!((d - 0.1).abs() < 1e-8, "delta = {d}");
        let p = project_to_boundary(egg2, z).unwrap();
        assert!(p.point.dist(ComplexPoint2::from_reals(0.0, 0.0, 1.0, 0.0)) < 1e-6);
    }

    #[test]
    fn ball_rotated_radial_projection() {
        let ball = fixtures::registry().get("ball").unwrap();
        let th = std::f64::consts::PI / 3.0;
        let z = ComplexPoint2::from_reals(0.6 * th.cos(), 0.6 * th.sin(), 0.0, 0.0);
        let p = project_to_boundary(ball, z).unwrap();
        let expect = ComplexPoint2::from_reals(th.cos(), th.sin(), 0.0, 0.0);
        assert!(p.point.dist(expect) < 1e-8);
    }

    #[test]
    fn projection_requires_membership() {
        let ball = fixtures::registry().get("ball").unwrap();
        let z = ComplexPoint2::from_reals(1.01, 0.0, 0.0, 0.0);
        assert!(matches!(
            project_to_boundary(ball, z),
            Err(Error::Membership(_))
        ));
    }

    #[test]
    fn collar_error_outside_collar() {
        let ball = fixtures::registry().get("ball").unwrap();
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.1, 0.0);
        assert!(matches!(
            project_to_boundary(ball, z),
            Err(Error::Collar { .. })
        ));
    }
}
