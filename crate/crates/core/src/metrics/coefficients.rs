//! Iterated Levi-form coefficients.
//!
//! The scalar field g = dd^bar r(L1, L1bar) is carried as a truncated jet
//! sourced from the chart's jet oracle; applying L1 and L1bar as first-order
//! operators with jet-valued coefficients produces every iterated value
//!     L_{j,k}(z) = L1^{j-1} L1bar^{k-1} g (z)
//! exactly up to rounding. C_l(z) is the max of |L_{j,k}(z)| over j+k = l.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::Chart;
use crate::jets::Jet4;
use crate::types::ComplexPoint2;

/// Coefficient table of one chart at one point.
#[derive(Debug, Clone)]
pub struct CatlinCoefficients {
    /// Chart base point (world coordinates).
    pub base_point: ComplexPoint2,
    /// Highest total order carried.
    pub up_to: u32,
    /// C_l for l = 2..=up_to, indexed by l - 2.
    pub c_values: Vec<f64>,
    /// Raw iterated values (j, k, L_{j,k}) for j + k <= up_to.
    pub raw: Vec<(u32, u32, Complex64)>,
}

impl CatlinCoefficients {
    pub fn c(&self, l: u32) -> f64 {
        self.c_values[(l - 2) as usize]
    }
}

/// Compute the coefficient table for `chart` at the world point `z`.
pub fn catlin_coefficients(chart: &Chart, z_world: ComplexPoint2, up_to: u32) -> Result<CatlinCoefficients> {
    if up_to < 2 {
        return Err(Error::Precondition("coefficient order must be at least 2".into()));
    }
    if up_to > chart.type_m {
        return Err(Error::Capability {
            requested: up_to as usize,
            available: chart.type_m as usize,
        });
    }
    if !chart.contains(z_world) {
        return Err(Error::OutOfChart(format!(
            "point {:?} outside chart at {:?}",
            z_world.to_reals(),
            chart.center.to_reals()
        )));
    }
    let w = chart.to_chart_point(z_world);

    if up_to == 2 {
        // Levi form along L1 only; plain jet values suffice.
        let rw2 = chart.poly.jet(w, [0, 0, 1, 0]);
        if rw2.norm() < chart.w2_floor {
            return Err(Error::ChartCondition {
                value: rw2.norm(),
                threshold: chart.w2_floor,
            });
        }
        let a = -chart.poly.jet(w, [1, 0, 0, 0]) / rw2;
        let r11 = chart.poly.jet(w, [1, 1, 0, 0]);
        let r12 = chart.poly.jet(w, [1, 0, 0, 1]);
        let r21 = chart.poly.jet(w, [0, 1, 1, 0]);
        let r22 = chart.poly.jet(w, [0, 0, 1, 1]);
        let g = r11 + a.conj() * r12 + a * r21 + a * a.conj() * r22;
        return Ok(CatlinCoefficients {
            base_point: chart.center,
            up_to,
            c_values: vec![g.norm()],
            raw: vec![(1, 1, g)],
        });
    }

    let series_order = (up_to - 2) as usize;
    let container = series_order + 2;
    let r = Jet4::from_oracle(container, |m| chart.poly.jet(w, m));

    let rw1 = r.derivative(0);
    let rw2 = r.derivative(2);
    if rw2.value().norm() < chart.w2_floor {
        return Err(Error::ChartCondition {
            value: rw2.value().norm(),
            threshold: chart.w2_floor,
        });
    }
    let a = rw1.div(&rw2)?.scale(Complex64::new(-1.0, 0.0));
    let abar = a.conj();

    let r11 = r.derivative(0).derivative(1);
    let r12 = r.derivative(0).derivative(3);
    let r21 = r.derivative(2).derivative(1);
    let r22 = r.derivative(2).derivative(3);
    let g = r11
        .add(&abar.mul(&r12))
        .add(&a.mul(&r21))
        .add(&a.mul(&abar).mul(&r22));

    let apply_l1 = |f: &Jet4| f.derivative(0).add(&a.mul(&f.derivative(2)));
    let apply_l1bar = |f: &Jet4| f.derivative(1).add(&abar.mul(&f.derivative(3)));

    // Fill L_{j,k} by increasing j along k = 1, then increasing k.
    let mut raw = Vec::new();
    let mut row = g.clone(); // L_{1,1}
    let mut k = 1u32;
    loop {
        let mut cur = row.clone();
        let mut j = 1u32;
        while j + k <= up_to {
            raw.push((j, k, cur.value()));
            j += 1;
            if j + k <= up_to {
                cur = apply_l1(&cur);
            }
        }
        k += 1;
        if k + 1 > up_to {
            break;
        }
        row = apply_l1bar(&row);
    }

    let mut c_values = vec![0.0f64; (up_to - 1) as usize];
    for (j, kk, v) in &raw {
        let l = j + kk;
        if l >= 2 {
            let idx = (l - 2) as usize;
            c_values[idx] = c_values[idx].max(v.norm());
        }
    }
    Ok(CatlinCoefficients {
        base_point: chart.center,
        up_to,
        c_values,
        raw,
    })
}
