//! Defining-function domains in C^2 with boundary distance, nearest-point
//! projection, complex tangent/normal decomposition, and interior sampling.
//!
//! A domain is the sublevel set { max_i r_i < 0 } of one or more polynomial
//! sheets; the model fixtures use a single sheet, window intersections add a
//! spherical cap sheet. Every boundary reference point carries a rotated
//! chart in which the defining function has a nondegenerate w2-derivative.

mod projection;
mod sample;
pub(crate) mod split;

pub mod fixtures;

pub use projection::{PointContext, Projection};
pub use sample::DepthProfile;
pub use split::TangentSplit;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{FlatPoly, JetTable, MonomialSpec, Poly4};
use crate::types::{ComplexPoint2, ComplexVector2};

/// Axis-aligned box in the four real coordinates (Re z1, Im z1, Re z2, Im z2).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BBox {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
}

impl BBox {
    pub fn contains(&self, z: ComplexPoint2) -> bool {
        let c = z.to_reals();
        (0..4).all(|i| c[i] >= self.lo[i] && c[i] <= self.hi[i])
    }

    pub fn intersect(&self, other: &BBox) -> BBox {
        let mut lo = [0.0; 4];
        let mut hi = [0.0; 4];
        for i in 0..4 {
            lo[i] = self.lo[i].max(other.lo[i]);
            hi[i] = self.hi[i].min(other.hi[i]);
        }
        BBox { lo, hi }
    }

    pub fn around(points: &[ComplexPoint2], pad: f64) -> BBox {
        let mut lo = [f64::INFINITY; 4];
        let mut hi = [f64::NEG_INFINITY; 4];
        for p in points {
            let c = p.to_reals();
            for i in 0..4 {
                lo[i] = lo[i].min(c[i] - pad);
                hi[i] = hi[i].max(c[i] + pad);
            }
        }
        BBox { lo, hi }
    }
}

/// A rotated boundary chart. World coordinates map to chart coordinates by
/// the unitary `w = U z`; the chart polynomial is the defining function in
/// chart coordinates, arranged so its w2-derivative is bounded below near
/// the chart.
#[derive(Debug, Clone)]
pub struct Chart {
    pub center: ComplexPoint2,
    /// D'Angelo type at the chart center.
    pub type_m: u32,
    /// Membership radius of the closed chart ball.
    pub radius: f64,
    /// Sheet of the domain this chart's boundary piece belongs to.
    pub sheet: usize,
    /// Unitary rows: w_i = sum_j u[i][j] z_j.
    pub u: [[Complex64; 2]; 2],
    /// Defining function in chart coordinates.
    pub poly: Poly4,
    /// Lower bound enforced on |dr/dw2| inside the chart.
    pub w2_floor: f64,
    /// Compiled derivatives of the chart polynomial, to order type_m.
    jets: JetTable,
}

impl Chart {
    pub fn to_chart_point(&self, z: ComplexPoint2) -> ComplexPoint2 {
        ComplexPoint2::new(
            self.u[0][0] * z.z1 + self.u[0][1] * z.z2,
            self.u[1][0] * z.z1 + self.u[1][1] * z.z2,
        )
    }

    pub fn to_chart_vector(&self, x: ComplexVector2) -> ComplexVector2 {
        ComplexVector2::new(
            self.u[0][0] * x.v1 + self.u[0][1] * x.v2,
            self.u[1][0] * x.v1 + self.u[1][1] * x.v2,
        )
    }

    pub fn from_chart_vector(&self, x: ComplexVector2) -> ComplexVector2 {
        // U^* = conjugate transpose.
        ComplexVector2::new(
            self.u[0][0].conj() * x.v1 + self.u[1][0].conj() * x.v2,
            self.u[0][1].conj() * x.v1 + self.u[1][1].conj() * x.v2,
        )
    }

    pub fn contains(&self, z: ComplexPoint2) -> bool {
        self.center.dist(z) <= self.radius
    }

    /// Mixed Wirtinger derivative of the chart polynomial at a chart point,
    /// served from the compiled table (orders up to type_m).
    #[inline]
    pub fn jet(&self, w: ComplexPoint2, e: [u8; 4]) -> Complex64 {
        self.jets.jet(w, e)
    }

    /// All chart-polynomial derivatives at a point in canonical graded order.
    pub fn jet_all(&self, w: ComplexPoint2) -> Vec<Complex64> {
        self.jets.jet_all(w)
    }

    /// Identity chart (no rotation) over a given sheet; used where the
    /// canonical coordinates already satisfy the w2 condition.
    pub fn identity(center: ComplexPoint2, type_m: u32, radius: f64, sheet: usize, poly: Poly4, w2_floor: f64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let jets = JetTable::build(&poly, type_m.max(2) as usize);
        Chart {
            center,
            type_m,
            radius,
            sheet,
            u: [[one, zero], [zero, one]],
            poly,
            w2_floor,
            jets,
        }
    }
}

/// A reference point declared in a fixture: boundary point plus its type.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferencePoint {
    pub point: [f64; 4],
    pub type_m: u32,
}

/// Structured-text fixture schema. All reals are serialized in decimal with
/// 17 significant digits; see the repository README for the field reference.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainConfig {
    pub name: String,
    /// Monomials of the defining polynomial r (single-sheet fixtures).
    pub monomials: Vec<MonomialSpec>,
    /// Global D'Angelo type (max over reference points).
    pub type_m: u32,
    pub collar_eps: f64,
    pub chart_radius: f64,
    pub bbox_lo: [f64; 4],
    pub bbox_hi: [f64; 4],
    pub base_point: [f64; 4],
    pub inradius: f64,
    pub reference_points: Vec<ReferencePoint>,
}

impl DomainConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("fixture parse: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("fixture serialization")
    }
}

/// A smoothly bounded model domain with its chart atlas.
#[derive(Debug)]
pub struct DomainModel {
    pub name: String,
    /// Defining sheets; the domain is { z : max_i r_i(z) < 0 }.
    pub sheets: Vec<Poly4>,
    pub type_m: u32,
    pub collar_eps: f64,
    pub charts: Vec<Chart>,
    pub bbox: BBox,
    pub base_point: ComplexPoint2,
    pub inradius: f64,
    /// Maximum jet order served by the oracle (type + 2).
    pub jet_depth: u32,
    /// Deterministic dense boundary sample used by projection fallbacks and
    /// construction-time validation.
    pub boundary_samples: Vec<ComplexPoint2>,
    /// Compiled sheet values and low-order derivatives for the hot paths.
    pub(crate) sheet_flat: Vec<FlatPoly>,
    pub(crate) sheet_jets: Vec<JetTable>,
}

/// Compile the fast evaluators for a sheet list.
pub(crate) fn compile_sheets(sheets: &[Poly4]) -> (Vec<FlatPoly>, Vec<JetTable>) {
    let flat = sheets.iter().map(FlatPoly::compile).collect();
    let jets = sheets.iter().map(|p| JetTable::build(p, 2)).collect();
    (flat, jets)
}

/// Tolerance accepted on r when classifying boundary membership.
pub const BOUNDARY_TOL: f64 = 1e-9;

impl DomainModel {
    /// Defining function value; negative iff the point is in the domain
    /// (up to boundary tolerance).
    pub fn eval_r(&self, z: ComplexPoint2) -> Result<f64> {
        if !self.bbox.contains(z) {
            return Err(Error::OutOfChart(format!(
                "point {:?} outside bbox of {}",
                z.to_reals(),
                self.name
            )));
        }
        Ok(self.eval_r_unchecked(z))
    }

    pub fn eval_r_unchecked(&self, z: ComplexPoint2) -> f64 {
        self.sheet_flat
            .iter()
            .map(|p| p.eval(z).re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sheet attaining the max of the defining functions at `z`.
    pub fn active_sheet(&self, z: ComplexPoint2) -> usize {
        let mut best = 0;
        let mut best_v = f64::NEG_INFINITY;
        for (i, p) in self.sheet_flat.iter().enumerate() {
            let v = p.eval(z).re;
            if v > best_v {
                best_v = v;
                best = i;
            }
        }
        best
    }

    /// Sheet value at a point.
    pub(crate) fn sheet_value(&self, sheet: usize, z: ComplexPoint2) -> f64 {
        self.sheet_flat[sheet].eval(z).re
    }

    /// Real gradient of a sheet in coordinates (x1, y1, x2, y2).
    pub(crate) fn sheet_grad_real(&self, sheet: usize, z: ComplexPoint2) -> [f64; 4] {
        self.sheet_jets[sheet].grad_real(z)
    }

    /// Real 4x4 Hessian of a sheet.
    pub(crate) fn sheet_hessian_real(&self, sheet: usize, z: ComplexPoint2) -> [[f64; 4]; 4] {
        self.sheet_jets[sheet].hessian_real(z)
    }

    /// Antiholomorphic gradient of a sheet as a complex vector.
    pub(crate) fn sheet_dbar(&self, sheet: usize, z: ComplexPoint2) -> ComplexVector2 {
        let t = &self.sheet_jets[sheet];
        let p = crate::poly::Pows::at(z);
        ComplexVector2::new(t.jet_pows(&p, [0, 1, 0, 0]), t.jet_pows(&p, [0, 0, 0, 1]))
    }

    /// Mixed Wirtinger derivative of the active sheet's defining function.
    /// Orders beyond the declared oracle depth are a capability error.
    pub fn eval_jet(&self, z: ComplexPoint2, dz1: u8, dzbar1: u8, dz2: u8, dzbar2: u8) -> Result<Complex64> {
        let order = (dz1 + dzbar1 + dz2 + dzbar2) as usize;
        if order > self.jet_depth as usize {
            return Err(Error::Capability {
                requested: order,
                available: self.jet_depth as usize,
            });
        }
        if !self.bbox.contains(z) {
            return Err(Error::OutOfChart(format!(
                "point {:?} outside bbox of {}",
                z.to_reals(),
                self.name
            )));
        }
        let sheet = self.active_sheet(z);
        Ok(self.sheets[sheet].jet(z, [dz1, dzbar1, dz2, dzbar2]))
    }

    pub fn contains(&self, z: ComplexPoint2) -> bool {
        self.bbox.contains(z) && self.eval_r_unchecked(z) < BOUNDARY_TOL
    }

    pub fn is_interior(&self, z: ComplexPoint2) -> bool {
        self.bbox.contains(z) && self.eval_r_unchecked(z) < -BOUNDARY_TOL
    }

    /// Charts whose closed ball contains `z`.
    pub fn charts_at(&self, z: ComplexPoint2) -> impl Iterator<Item = (usize, &Chart)> {
        self.charts
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.contains(z))
    }

    pub fn nearest_chart(&self, z: ComplexPoint2) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, c) in self.charts.iter().enumerate() {
            let d = c.center.dist(z);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        best
    }

    /// Build a domain from a fixture description: rotates a chart at every
    /// reference point, casts a dense boundary sample, and validates the
    /// construction invariants.
    pub fn build(config: &DomainConfig) -> Result<DomainModel> {
        let poly = Poly4::from_monomials(&config.monomials);
        if !poly.is_real_valued() {
            return Err(Error::Config(format!(
                "defining polynomial of {} is not real-valued",
                config.name
            )));
        }
        let base_point = ComplexPoint2::from_reals(
            config.base_point[0],
            config.base_point[1],
            config.base_point[2],
            config.base_point[3],
        );
        let bbox = BBox {
            lo: config.bbox_lo,
            hi: config.bbox_hi,
        };
        if poly.eval(base_point).re >= 0.0 {
            return Err(Error::Config(format!(
                "base point of {} is not interior",
                config.name
            )));
        }
        let max_type = config
            .reference_points
            .iter()
            .map(|r| r.type_m)
            .max()
            .unwrap_or(2);
        if max_type != config.type_m {
            return Err(Error::Config(format!(
                "type_m {} does not match max reference type {}",
                config.type_m, max_type
            )));
        }

        let mut charts = Vec::with_capacity(config.reference_points.len());
        for rp in &config.reference_points {
            let xi = ComplexPoint2::from_reals(rp.point[0], rp.point[1], rp.point[2], rp.point[3]);
            let rv = poly.eval(xi).re;
            if rv.abs() > 1e-7 {
                return Err(Error::Config(format!(
                    "reference point {:?} of {} is off-boundary: r = {rv:.3e}",
                    rp.point, config.name
                )));
            }
            charts.push(make_chart(&poly, 0, xi, rp.type_m, config.chart_radius)?);
        }

        let sheets = vec![poly];
        let (sheet_flat, sheet_jets) = compile_sheets(&sheets);
        let mut domain = DomainModel {
            name: config.name.clone(),
            sheets,
            type_m: config.type_m,
            collar_eps: config.collar_eps,
            charts,
            bbox,
            base_point,
            inradius: config.inradius,
            jet_depth: config.type_m + 2,
            boundary_samples: Vec::new(),
            sheet_flat,
            sheet_jets,
        };
        domain.boundary_samples = projection::cast_boundary_samples(&domain, 4096)?;
        domain.validate()?;
        Ok(domain)
    }

    /// Construction-time invariants: chart coverage of the collar, chart
    /// nondegeneracy, and projection uniqueness on a spot-check grid.
    fn validate(&self) -> Result<()> {
        // Collar coverage: each boundary sample within chart reach minus collar.
        for b in &self.boundary_samples {
            let covered = self
                .charts
                .iter()
                .any(|c| c.center.dist(*b) + self.collar_eps <= c.radius + 1e-9);
            if !covered {
                return Err(Error::Config(format!(
                    "boundary sample {:?} of {} not covered by the chart atlas",
                    b.to_reals(),
                    self.name
                )));
            }
        }
        // Projection spot check against the dense sample.
        let step = (self.boundary_samples.len() / 24).max(1);
        for b in self.boundary_samples.iter().step_by(step) {
            let inward = self.base_point.sub(*b);
            let z = b.add(inward.scale_re(0.35 * self.collar_eps / inward.norm().max(1e-12)));
            if !self.is_interior(z) {
                continue;
            }
            let ctx = projection::compute_context(self, z)?;
            let dense = self
                .boundary_samples
                .iter()
                .map(|s| s.dist(z))
                .fold(f64::INFINITY, f64::min);
            if ctx.delta > dense * (1.0 + 1e-6) + 1e-9 {
                return Err(Error::Numeric {
                    context: format!("projection uniqueness check on {}", self.name),
                    residual: ctx.delta - dense,
                });
            }
        }
        Ok(())
    }

    pub fn boundary_distance(&self, z: ComplexPoint2) -> Result<f64> {
        projection::boundary_distance(self, z)
    }

    pub fn project_to_boundary(&self, z: ComplexPoint2) -> Result<Projection> {
        projection::project_to_boundary(self, z)
    }

    pub fn point_context(&self, z: ComplexPoint2) -> Result<PointContext> {
        projection::compute_context(self, z)
    }

    pub fn tangent_split(&self, z: ComplexPoint2, x: ComplexVector2) -> Result<TangentSplit> {
        split::tangent_split(self, z, x)
    }

    pub fn sample_interior(
        &self,
        count: usize,
        profile: DepthProfile,
        seed: u64,
    ) -> Result<Vec<ComplexPoint2>> {
        sample::sample_interior(self, count, profile, seed)
    }
}

/// Build the rotated chart at a boundary point: the unitary maps the complex
/// normal direction to the w2 axis, and the chart polynomial is the pullback
/// of the sheet's defining function.
pub(crate) fn make_chart(
    sheet_poly: &Poly4,
    sheet: usize,
    xi: ComplexPoint2,
    type_m: u32,
    radius: f64,
) -> Result<Chart> {
    let dbar = sheet_poly.dbar(xi);
    let g = dbar.norm();
    if g < 1e-8 {
        return Err(Error::Config(format!(
            "degenerate gradient at reference point {:?}",
            xi.to_reals()
        )));
    }
    let n1 = dbar.v1 / g;
    let n2 = dbar.v2 / g;
    // Rows of U: first the tangential direction, then the one mapping the
    // normal to (0, 1).
    let u = [[-n2, n1], [n1.conj(), n2.conj()]];
    // z = U^* w.
    let u_star = [
        [u[0][0].conj(), u[1][0].conj()],
        [u[0][1].conj(), u[1][1].conj()],
    ];
    let zero = Complex64::new(0.0, 0.0);
    let poly = sheet_poly.compose_affine(u_star, [zero, zero]);
    let jets = JetTable::build(&poly, type_m.max(2) as usize);
    let chart = Chart {
        center: xi,
        type_m,
        radius,
        sheet,
        u,
        poly,
        w2_floor: 0.05 * g,
        jets,
    };
    // The rotation must put the full gradient into the w2 slot.
    let w_center = chart.to_chart_point(xi);
    let dw2 = chart.poly.jet(w_center, [0, 0, 1, 0]).norm();
    if (dw2 - g).abs() > 1e-8 * g.max(1.0) {
        return Err(Error::Numeric {
            context: "chart rotation".into(),
            residual: (dw2 - g).abs(),
        });
    }
    Ok(chart)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fixtures;

    #[test]
    fn eval_r_examples() {
        let ball = fixtures::registry().get("ball").unwrap();
        let egg2 = fixtures::registry().get("egg2").unwrap();
        let center = ComplexPoint2::from_reals(0.0, 0.0, 0.0, 0.0);
        assert!((ball.eval_r(center).unwrap() + 1.0).abs() < 1e-15);
        let bpt = ComplexPoint2::from_reals(0.0, 0.0, 1.0, 0.0);
        assert!(egg2.eval_r(bpt).unwrap().abs() < 1e-15);
        let mid = ComplexPoint2::from_reals(0.5, 0.0, 0.5, 0.0);
        assert!((egg2.eval_r(mid).unwrap() - (-0.6875)).abs() < 1e-15);
    }

    #[test]
    fn eval_r_outside_bbox_errors() {
        let ball = fixtures::registry().get("ball").unwrap();
        let far = ComplexPoint2::from_reals(5.0, 0.0, 0.0, 0.0);
        assert!(matches!(ball.eval_r(far), Err(Error::OutOfChart(_))));
    }

    #[test]
    fn eval_jet_examples() {
        let ball = fixtures::registry().get("ball").unwrap();
        let egg2 = fixtures::registry().get("egg2").unwrap();
        let z = ComplexPoint2::from_reals(0.3, 0.0, 0.0, 0.0);
        let d = ball.eval_jet(z, 1, 0, 0, 0).unwrap();
        assert!((d - Complex64::new(0.3, 0.0)).norm() < 1e-14);
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.5, 0.0);
        let d = egg2.eval_jet(z, 1, 1, 0, 0).unwrap();
        assert!(d.norm() < 1e-14);
        // Zeroth jet matches eval_r.
        let z = ComplexPoint2::from_reals(0.2, 0.1, -0.3, 0.2);
        let j0 = egg2.eval_jet(z, 0, 0, 0, 0).unwrap();
        assert!((j0.re - egg2.eval_r(z).unwrap()).abs() < 1e-14);
        assert!(j0.im.abs() < 1e-14);
    }

    #[test]
    fn eval_jet_depth_guard() {
        let ball = fixtures::registry().get("ball").unwrap();
        let z = ComplexPoint2::from_reals(0.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            ball.eval_jet(z, 3, 2, 0, 0),
            Err(Error::Capability { .. })
        ));
    }
}
