//! Built-in model domains and the fixture registry.
//!
//! Three fixtures ship with the crate:
//!   ball — |z1|^2 + |z2|^2 < 1 (strongly pseudoconvex, type 2 everywhere);
//!   egg2 — |z1|^4 + |z2|^2 < 1 (type 4 on the circle z1 = 0);
//!   egg3 — |z1|^6 + |z2|^2 < 1 (type 6 on the circle z1 = 0).
//!
//! Reference points are generated deterministically: the degenerate circle
//! gets a ring of high-type charts, then a greedy covering of a dense
//! boundary sample fills in strongly pseudoconvex charts so the whole
//! projection collar is chart-covered. The same construction can be driven
//! from a TOML fixture file; see `DomainConfig`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{make_chart, projection, BBox, DomainConfig, DomainModel, ReferencePoint};
use crate::poly::{MonomialSpec, Poly4};
use crate::types::ComplexPoint2;

const CHART_RADIUS: f64 = 1.05;
const COLLAR_EPS: f64 = 0.5;
const COVER_RADIUS: f64 = 0.40;
const COVER_SAMPLES: usize = 8192;

/// Registry of built-in fixtures, constructed once per process.
pub fn registry() -> &'static BTreeMap<String, Arc<DomainModel>> {
    static REG: OnceLock<BTreeMap<String, Arc<DomainModel>>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut m = BTreeMap::new();
        for name in ["ball", "egg2", "egg3"] {
            let cfg = builtin_config(name).expect("builtin fixture config");
            let dom = DomainModel::build(&cfg).expect("builtin fixture build");
            m.insert(name.to_string(), Arc::new(dom));
        }
        m
    })
}

/// Fetch a fixture by name.
pub fn get(name: &str) -> Result<Arc<DomainModel>> {
    registry()
        .get(name)
        .cloned()
        .ok_or_else(|| Error::Config(format!("unknown domain fixture '{name}'")))
}

/// Names of the built-in fixtures.
pub fn names() -> Vec<String> {
    registry().keys().cloned().collect()
}

/// The full fixture description for a built-in domain, as written to TOML.
pub fn builtin_config(name: &str) -> Result<DomainConfig> {
    match name {
        "ball" => egg_family_config("ball", 1),
        "egg2" => egg_family_config("egg2", 2),
        "egg3" => egg_family_config("egg3", 3),
        _ => Err(Error::Config(format!("unknown builtin fixture '{name}'"))),
    }
}

/// r = |z1|^(2p) + |z2|^2 - 1. For p = 1 this is the unit ball.
fn egg_family_config(name: &str, p: u8) -> Result<DomainConfig> {
    let monomials = vec![
        MonomialSpec {
            powers: [p, p, 0, 0],
            re: 1.0,
            im: 0.0,
        },
        MonomialSpec {
            powers: [0, 0, 1, 1],
            re: 1.0,
            im: 0.0,
        },
        MonomialSpec {
            powers: [0, 0, 0, 0],
            re: -1.0,
            im: 0.0,
        },
    ];
    let poly = Poly4::from_monomials(&monomials);
    let type_m = 2 * p as u32;

    // Degenerate ring charts for the eggs; the ball needs none.
    let mut reference_points: Vec<ReferencePoint> = Vec::new();
    if p > 1 {
        let ring = 12;
        for j in 0..ring {
            let th = std::f64::consts::TAU * j as f64 / ring as f64;
            reference_points.push(ReferencePoint {
                point: [0.0, 0.0, th.cos(), th.sin()],
                type_m,
            });
        }
    }

    let base_point = [0.0, 0.0, 0.0, 0.0];
    let bbox_lo = [-1.02; 4];
    let bbox_hi = [1.02; 4];

    // Greedy covering of a dense boundary sample by strongly pseudoconvex
    // reference points, seeded by the ring points above.
    let samples = boundary_sample_for_cover(&poly, base_point, bbox_lo, bbox_hi)?;
    let mut centers: Vec<ComplexPoint2> = reference_points
        .iter()
        .map(|r| ComplexPoint2::from_reals(r.point[0], r.point[1], r.point[2], r.point[3]))
        .collect();
    for s in &samples {
        if centers.iter().all(|c| c.dist(*s) > COVER_RADIUS) {
            centers.push(*s);
            let c = s.to_reals();
            reference_points.push(ReferencePoint {
                point: c,
                type_m: 2,
            });
        }
    }

    Ok(DomainConfig {
        name: name.to_string(),
        monomials,
        type_m,
        collar_eps: COLLAR_EPS,
        chart_radius: CHART_RADIUS,
        bbox_lo,
        bbox_hi,
        base_point,
        inradius: 1.0,
        reference_points,
    })
}

/// Boundary sample used only to drive the greedy covering; the fixture build
/// recasts its own (identically seeded) sample afterwards.
fn boundary_sample_for_cover(
    poly: &Poly4,
    base: [f64; 4],
    lo: [f64; 4],
    hi: [f64; 4],
) -> Result<Vec<ComplexPoint2>> {
    let skeleton = DomainModel {
        name: "cover-skeleton".into(),
        sheets: vec![poly.clone()],
        type_m: 2,
        collar_eps: COLLAR_EPS,
        charts: Vec::new(),
        bbox: BBox { lo, hi },
        base_point: ComplexPoint2::from_reals(base[0], base[1], base[2], base[3]),
        inradius: 1.0,
        jet_depth: 4,
        boundary_samples: Vec::new(),
    };
    projection::cast_boundary_samples(&skeleton, COVER_SAMPLES)
}

/// Intersection of a domain with a Euclidean ball window U = B(center, radius):
/// a two-sheet domain whose second sheet is the sphere. The chart atlas keeps
/// the base charts near the window and adds strongly pseudoconvex charts on
/// the spherical part of the boundary. The collar is sized to cover the whole
/// intersection, so the patched metric never leaves its chart regime there.
pub fn intersect_ball_cap(
    base: &DomainModel,
    center: ComplexPoint2,
    radius: f64,
    interior_seed: ComplexPoint2,
) -> Result<DomainModel> {
    let mut cap = Poly4::zero();
    // |z1 - c1|^2 + |z2 - c2|^2 - R^2
    cap.add_term([1, 1, 0, 0], Complex64::new(1.0, 0.0));
    cap.add_term([1, 0, 0, 0], -center.z1.conj());
    cap.add_term([0, 1, 0, 0], -center.z1);
    cap.add_term([0, 0, 1, 1], Complex64::new(1.0, 0.0));
    cap.add_term([0, 0, 1, 0], -center.z2.conj());
    cap.add_term([0, 0, 0, 1], -center.z2);
    cap.add_term(
        [0, 0, 0, 0],
        Complex64::new(center.z1.norm_sqr() + center.z2.norm_sqr() - radius * radius, 0.0),
    );

    let base_sheet = base.sheets[0].clone();
    if base_sheet.eval(interior_seed).re >= 0.0 || cap.eval(interior_seed).re >= 0.0 {
        return Err(Error::Precondition(
            "interior seed is not inside the window intersection".into(),
        ));
    }

    let cap_bbox = BBox {
        lo: [
            center.z1.re - radius,
            center.z1.im - radius,
            center.z2.re - radius,
            center.z2.im - radius,
        ],
        hi: [
            center.z1.re + radius,
            center.z1.im + radius,
            center.z2.re + radius,
            center.z2.im + radius,
        ],
    };
    let bbox = base.bbox.intersect(&cap_bbox);

    // Keep base charts that can see the window.
    let mut charts: Vec<_> = base
        .charts
        .iter()
        .filter(|c| {
            let d = c.center.dist(center);
            d <= radius + 0.35
        })
        .cloned()
        .collect();
    if charts.is_empty() {
        return Err(Error::Precondition(
            "window does not meet the base chart atlas".into(),
        ));
    }

    let mut domain = DomainModel {
        name: format!("{}_cap", base.name),
        sheets: vec![base_sheet, cap],
        type_m: base.type_m,
        collar_eps: 0.0, // provisional; sized from the cast sample below
        charts: Vec::new(),
        bbox,
        base_point: interior_seed,
        inradius: 0.0,
        jet_depth: base.jet_depth,
        boundary_samples: Vec::new(),
    };
    domain.boundary_samples = projection::cast_boundary_samples(&domain, 3000)?;

    // Spherical-part charts via greedy covering of the cast sample.
    let sphere_cover = 0.30;
    let mut sphere_centers: Vec<ComplexPoint2> = Vec::new();
    for s in &domain.boundary_samples {
        let on_sphere = domain.sheets[1].eval(*s).re.abs() < 1e-6;
        if !on_sphere {
            continue;
        }
        if sphere_centers.iter().all(|c| c.dist(*s) > sphere_cover) {
            sphere_centers.push(*s);
        }
    }
    for c in &sphere_centers {
        charts.push(make_chart(&domain.sheets[1], 1, *c, 2, CHART_RADIUS)?);
    }
    domain.charts = charts;

    // Size the collar to cover the whole intersection: max interior depth
    // estimated on the cast boundary sample plus the seed.
    let mut max_depth: f64 = 0.0;
    for s in domain.boundary_samples.iter().step_by(37) {
        let inward = interior_seed.sub(*s);
        for frac in [0.35, 0.7, 1.0] {
            let z = s.add(inward.scale_re(frac));
            if domain.is_interior(z) {
                if let Ok(d) = projection::boundary_distance(&domain, z) {
                    max_depth = max_depth.max(d);
                }
            }
        }
    }
    if max_depth <= 0.0 {
        return Err(Error::Precondition("window interior is empty".into()));
    }
    domain.inradius = max_depth;
    domain.collar_eps = (max_depth * 1.05).min(radius);
    domain.validate()?;
    Ok(domain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_fixtures_build() {
        let names = names();
        assert!(names.contains(&"ball".to_string()));
        assert!(names.contains(&"egg2".to_string()));
        assert!(names.contains(&"egg3".to_string()));
    }

    #[test]
    fn config_round_trips_through_toml() {
        let cfg = builtin_config("egg2").unwrap();
        let text = cfg.to_toml();
        let back = DomainConfig::from_toml(&text).unwrap();
        assert_eq!(back.name, "egg2");
        assert_eq!(back.type_m, 4);
        assert_eq!(back.reference_points.len(), cfg.reference_points.len());
    }

    #[test]
    fn egg2_ring_points_have_type_four() {
        let cfg = builtin_config("egg2").unwrap();
        let ring: Vec<_> = cfg
            .reference_points
            .iter()
            .filter(|r| r.type_m == 4)
            .collect();
        assert_eq!(ring.len(), 12);
        for r in ring {
            assert!(r.point[0].abs() < 1e-12 && r.point[1].abs() < 1e-12);
        }
    }

    #[test]
    fn cap_window_intersection_builds() {
        let egg2 = get("egg2").unwrap();
        let xi = ComplexPoint2::from_reals(0.0, 0.0, 1.0, 0.0);
        let seed = ComplexPoint2::from_reals(0.0, 0.0, 0.72, 0.0);
        let cap = intersect_ball_cap(&egg2, xi, 0.45, seed).unwrap();
        assert_eq!(cap.sheets.len(), 2);
        assert!(cap.collar_eps > 0.0);
        // Depth monotonicity under intersection.
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.9, 0.0);
        let d_base = egg2.boundary_distance(z).unwrap();
        let d_cap = cap.boundary_distance(z).unwrap();
        assert!(d_cap <= d_base + 1e-9);
    }
}
