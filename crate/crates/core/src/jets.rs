//! Truncated Taylor jets in the four Wirtinger variables.
//!
//! The iterated Levi-form coefficients are produced by applying first-order
//! differential operators with non-constant coefficients to a scalar field.
//! Carrying a truncated jet of every intermediate field (sourced point-wise
//! from the domain's jet oracle) makes that iteration exact up to the carried
//! order, with no symbolic engine and no finite-difference noise.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ORDER: usize = 8;

struct IndexTables {
    /// Multi-indices with total degree <= order, in graded lexicographic order.
    multis: Vec<[u8; 4]>,
    /// Dense rank lookup: (a,b,c,d) -> packed position.
    rank: Vec<usize>,
    order: usize,
}

fn tables(order: usize) -> &'static IndexTables {
    static TABLES: OnceLock<Vec<IndexTables>> = OnceLock::new();
    let all = TABLES.get_or_init(|| {
        (0..=MAX_ORDER)
            .map(|n| {
                let mut multis = Vec::new();
                for total in 0..=n {
                    for a in 0..=total {
                        for b in 0..=(total - a) {
                            for c in 0..=(total - a - b) {
                                let d = total - a - b - c;
                                multis.push([a as u8, b as u8, c as u8, d as u8]);
                            }
                        }
                    }
                }
                let side = n + 1;
                let mut rank = vec![usize::MAX; side * side * side * side];
                for (i, m) in multis.iter().enumerate() {
                    let idx = (((m[0] as usize * side) + m[1] as usize) * side + m[2] as usize)
                        * side
                        + m[3] as usize;
                    rank[idx] = i;
                }
                IndexTables {
                    multis,
                    rank,
                    order: n,
                }
            })
            .collect()
    });
    &all[order]
}

impl IndexTables {
    #[inline]
    fn pos(&self, m: [u8; 4]) -> usize {
        let side = self.order + 1;
        let idx = (((m[0] as usize * side) + m[1] as usize) * side + m[2] as usize) * side
            + m[3] as usize;
        self.rank[idx]
    }
}

/// Multi-indices of total degree <= order, in the canonical graded order.
/// The enumeration for a smaller order is a prefix of that for a larger one.
pub(crate) fn multi_indices(order: usize) -> &'static [[u8; 4]] {
    &tables(order).multis
}

/// Position of a multi-index in the canonical graded order.
pub(crate) fn rank_of(order: usize, m: [u8; 4]) -> usize {
    tables(order).pos(m)
}

/// A truncated jet: coefficients of the Taylor expansion around a base point,
/// valid up to total degree `valid` (the container holds degree <= `order`).
#[derive(Debug, Clone)]
pub struct Jet4 {
    order: usize,
    valid: usize,
    c: Vec<Complex64>,
}

impl Jet4 {
    pub fn zero(order: usize) -> Self {
        let t = tables(order);
        Self {
            order,
            valid: order,
            c: vec![Complex64::new(0.0, 0.0); t.multis.len()],
        }
    }

    pub fn constant(order: usize, v: Complex64) -> Self {
        let mut j = Self::zero(order);
        j.c[0] = v;
        j
    }

    /// Build from a jet oracle: `f(multi)` returns the mixed Wirtinger
    /// derivative of the field at the base point.
    pub fn from_oracle<F: FnMut([u8; 4]) -> Complex64>(order: usize, mut f: F) -> Self {
        let t = tables(order);
        let mut j = Self::zero(order);
        for (i, m) in t.multis.iter().enumerate() {
            let fact: f64 = m
                .iter()
                .map(|&k| (1..=k as u64).product::<u64>() as f64)
                .product();
            j.c[i] = f(*m) / fact;
        }
        j
    }

    /// Build from raw derivative values listed in canonical graded order
    /// (a prefix of a longer table is accepted).
    pub fn from_values(order: usize, raw: &[Complex64]) -> Self {
        let t = tables(order);
        assert!(raw.len() >= t.multis.len(), "jet value table too short");
        let mut j = Self::zero(order);
        for (i, m) in t.multis.iter().enumerate() {
            let fact: f64 = m
                .iter()
                .map(|&k| (1..=k as u64).product::<u64>() as f64)
                .product();
            j.c[i] = raw[i] / fact;
        }
        j
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn valid(&self) -> usize {
        self.valid
    }

    /// Value of the field at the base point.
    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for (a, b) in out.c.iter_mut().zip(other.c.iter()) {
            *a += *b;
        }
        out.valid = self.valid.min(other.valid);
        out
    }

    pub fn scale(&self, t: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.c.iter_mut() {
            *a *= t;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let t = tables(self.order);
        let mut out = Self::zero(self.order);
        out.valid = self.valid.min(other.valid);
        for (ia, ma) in t.multis.iter().enumerate() {
            let ca = self.c[ia];
            if ca.norm_sqr() == 0.0 {
                continue;
            }
            let da = ma.iter().map(|&x| x as usize).sum::<usize>();
            for (ib, mb) in t.multis.iter().enumerate() {
                let cb = other.c[ib];
                if cb.norm_sqr() == 0.0 {
                    continue;
                }
                let db = mb.iter().map(|&x| x as usize).sum::<usize>();
                if da + db > out.valid {
                    continue;
                }
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2], ma[3] + mb[3]];
                let pos = t.pos(m);
                out.c[pos] += ca * cb;
            }
        }
        out
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.c[0];
        if c0.norm() < 1e-300 {
            return Err(Error::Numeric {
                context: "jet inversion".into(),
                residual: c0.norm(),
            });
        }
        // 1/f = (1/c0) sum_k u^k with u = 1 - f/c0 (u has no constant term).
        let mut u = self.scale(-c0.inv());
        u.c[0] += Complex64::new(1.0, 0.0);
        let mut acc = Jet4::constant(self.order, Complex64::new(1.0, 0.0));
        acc.valid = self.valid;
        let mut upow = acc.clone();
        for _ in 1..=self.valid {
            upow = upow.mul(&u);
            acc = acc.add(&upow);
        }
        Ok(acc.scale(c0.inv()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Formal partial derivative with respect to variable `v` (0..4 maps to
    /// z1, z1bar, z2, z2bar). The result is valid one order lower.
    pub fn derivative(&self, v: usize) -> Self {
        let t = tables(self.order);
        let mut out = Self::zero(self.order);
        out.valid = self.valid.saturating_sub(1);
        for (i, m) in t.multis.iter().enumerate() {
            if m[v] == 0 || self.c[i].norm_sqr() == 0.0 {
                continue;
            }
            let mut ml = *m;
            ml[v] -= 1;
            let pos = t.pos(ml);
            out.c[pos] += self.c[i] * m[v] as f64;
        }
        out
    }

    /// Conjugate jet: swaps the holomorphic and antiholomorphic exponents and
    /// conjugates coefficients (matching conjugation of the underlying field
    /// on the real slice).
    pub fn conj(&self) -> Self {
        let t = tables(self.order);
        let mut out = Self::zero(self.order);
        out.valid = self.valid;
        for (i, m) in t.multis.iter().enumerate() {
            if self.c[i].norm_sqr() == 0.0 {
                continue;
            }
            let pos = t.pos([m[1], m[0], m[3], m[2]]);
            out.c[pos] = self.c[i].conj();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn product_of_linear_terms() {
        // f = 1 + h1, g = 1 + h1bar -> fg has coefficient 1 on h1*h1bar.
        let mut f = Jet4::zero(2);
        f.c[0] = c(1.0, 0.0);
        let t = tables(2);
        f.c[t.pos([1, 0, 0, 0])] = c(1.0, 0.0);
        let mut g = Jet4::zero(2);
        g.c[0] = c(1.0, 0.0);
        g.c[t.pos([0, 1, 0, 0])] = c(1.0, 0.0);
        let p = f.mul(&g);
        assert_eq!(p.c[t.pos([1, 1, 0, 0])], c(1.0, 0.0));
        assert_eq!(p.value(), c(1.0, 0.0));
    }

    #[test]
    fn inverse_round_trip() {
        let t = tables(3);
        let mut f = Jet4::zero(3);
        f.c[0] = c(2.0, 0.5);
        f.c[t.pos([1, 0, 0, 0])] = c(-0.3, 0.1);
        f.c[t.pos([0, 0, 1, 0])] = c(0.7, 0.0);
        f.c[t.pos([1, 0, 1, 0])] = c(0.2, -0.4);
        let inv = f.inv().unwrap();
        let prod = f.mul(&inv);
        assert!((prod.value() - c(1.0, 0.0)).norm() < 1e-13);
        for (i, m) in t.multis.iter().enumerate().skip(1) {
            if m.iter().map(|&x| x as usize).sum::<usize>() <= prod.valid() {
                assert!(prod.c[i].norm() < 1e-12, "coefficient {m:?} nonzero");
            }
        }
    }

    #[test]
    fn derivative_drops_validity() {
        let f = Jet4::constant(2, c(1.0, 0.0));
        let d = f.derivative(0);
        assert_eq!(d.valid(), 1);
        assert_eq!(d.value(), c(0.0, 0.0));
    }

    #[test]
    fn oracle_round_trip_on_polynomial() {
        use crate::poly::Poly4;
        use crate::types::ComplexPoint2;
        // f = z1^2 z2bar at base (1+0i, 2+0i)
        let mut p = Poly4::zero();
        p.add_term([2, 0, 0, 1], c(1.0, 0.0));
        let z = ComplexPoint2::from_reals(1.0, 0.0, 2.0, 0.0);
        let jet = Jet4::from_oracle(3, |m| p.jet(z, m));
        assert!((jet.value() - p.eval(z)).norm() < 1e-14);
        // Coefficient of h1 = d/dz1 value = 2 z1 z2bar = 4.
        let t = tables(3);
        assert!((jet.c[t.pos([1, 0, 0, 0])] - c(4.0, 0.0)).norm() < 1e-14);
    }
}
