//! Sparse polynomials in the four Wirtinger variables (z1, z1bar, z2, z2bar).
//!
//! Model-domain defining functions are real-valued polynomials of this form,
//! so every derivative the pipeline needs is available in closed form: the
//! jet oracle is exact formal differentiation of the monomial list.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::types::{ComplexPoint2, ComplexVector2};

/// Exponents of one monomial: powers of (z1, z1bar, z2, z2bar).
pub type Expo = [u8; 4];

/// Sparse polynomial with complex coefficients in the four Wirtinger variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly4 {
    terms: BTreeMap<Expo, Complex64>,
}

/// Serialized monomial: exponents plus real/imaginary coefficient parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonomialSpec {
    pub powers: [u8; 4],
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl Poly4 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        let mut p = Self::default();
        p.add_term([0, 0, 0, 0], c);
        p
    }

    /// Variable generator: index 0..4 maps to (z1, z1bar, z2, z2bar).
    pub fn var(i: usize) -> Self {
        let mut e = [0u8; 4];
        e[i] = 1;
        let mut p = Self::default();
        p.add_term(e, Complex64::new(1.0, 0.0));
        p
    }

    pub fn from_monomials(specs: &[MonomialSpec]) -> Self {
        let mut p = Self::default();
        for s in specs {
            p.add_term(s.powers, Complex64::new(s.re, s.im));
        }
        p
    }

    pub fn to_monomials(&self) -> Vec<MonomialSpec> {
        self.terms
            .iter()
            .map(|(e, c)| MonomialSpec {
                powers: *e,
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    pub fn add_term(&mut self, e: Expo, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(e).or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if entry.norm_sqr() == 0.0 {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Complex64)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn scale(&self, t: Complex64) -> Self {
        let mut out = Self::default();
        for (e, c) in self.terms() {
            out.add_term(*e, *c * t);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u8) -> Self {
        let mut out = Self::constant(Complex64::new(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Formal Wirtinger derivative of multi-order `e`.
    pub fn derivative(&self, e: Expo) -> Self {
        let mut out = Self::default();
        'terms: for (m, c) in self.terms() {
            let mut coeff = *c;
            let mut p = *m;
            for v in 0..4 {
                for _ in 0..e[v] {
                    if p[v] == 0 {
                        continue 'terms;
                    }
                    coeff *= p[v] as f64;
                    p[v] -= 1;
                }
            }
            out.add_term(p, coeff);
        }
        out
    }

    /// Evaluate at a point, substituting the conjugate variables consistently.
    pub fn eval(&self, z: ComplexPoint2) -> Complex64 {
        self.eval_formal([z.z1, z.z1.conj(), z.z2, z.z2.conj()])
    }

    /// Evaluate treating all four variables as independent complex arguments.
    /// Used by the complex-step differentiation cross-checks, which exploit
    /// the holomorphic extension in each real coordinate.
    pub fn eval_formal(&self, w: [Complex64; 4]) -> Complex64 {
        let deg = self.total_degree();
        let one = Complex64::new(1.0, 0.0);
        let mut pows = [vec![one], vec![one], vec![one], vec![one]];
        for v in 0..4 {
            for k in 1..=deg {
                let prev = pows[v][k - 1];
                pows[v].push(prev * w[v]);
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.terms() {
            acc += c
                * pows[0][e[0] as usize]
                * pows[1][e[1] as usize]
                * pows[2][e[2] as usize]
                * pows[3][e[3] as usize];
        }
        acc
    }

    /// Jet oracle: mixed Wirtinger derivative evaluated at `z`.
    pub fn jet(&self, z: ComplexPoint2, e: Expo) -> Complex64 {
        self.derivative(e).eval(z)
    }

    /// Holomorphic gradient (dr/dz1, dr/dz2) at `z`.
    pub fn grad_z(&self, z: ComplexPoint2) -> (Complex64, Complex64) {
        (self.jet(z, [1, 0, 0, 0]), self.jet(z, [0, 0, 1, 0]))
    }

    /// Antiholomorphic gradient (dr/dz1bar, dr/dz2bar) at `z`, as a vector.
    /// For a real-valued polynomial this equals the conjugate of `grad_z` and
    /// represents the real gradient direction under C^2 = R^4 (up to factor 2).
    pub fn dbar(&self, z: ComplexPoint2) -> ComplexVector2 {
        ComplexVector2::new(self.jet(z, [0, 1, 0, 0]), self.jet(z, [0, 0, 0, 1]))
    }

    /// Real gradient in coordinates (x1, y1, x2, y2).
    pub fn grad_real(&self, z: ComplexPoint2) -> [f64; 4] {
        let (g1, g2) = self.grad_z(z);
        [2.0 * g1.re, -2.0 * g1.im, 2.0 * g2.re, -2.0 * g2.im]
    }

    /// Real 4x4 Hessian in coordinates (x1, y1, x2, y2), via Wirtinger jets.
    pub fn hessian_real(&self, z: ComplexPoint2) -> [[f64; 4]; 4] {
        // d/dx_k = d_k + d_kbar ; d/dy_k = i d_k - i d_kbar,
        // with (d_0, d_1, d_2, d_3) = (d_z1, d_z1bar, d_z2, d_z2bar).
        let parts: [[(usize, Complex64); 2]; 4] = [
            [(0, Complex64::new(1.0, 0.0)), (1, Complex64::new(1.0, 0.0))],
            [(0, Complex64::new(0.0, 1.0)), (1, Complex64::new(0.0, -1.0))],
            [(2, Complex64::new(1.0, 0.0)), (3, Complex64::new(1.0, 0.0))],
            [(2, Complex64::new(0.0, 1.0)), (3, Complex64::new(0.0, -1.0))],
        ];
        let mut h = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for (va, ca) in parts[i] {
                    for (vb, cb) in parts[j] {
                        let mut e = [0u8; 4];
                        e[va] += 1;
                        e[vb] += 1;
                        acc += ca * cb * self.jet(z, e);
                    }
                }
                h[i][j] = acc.re;
                h[j][i] = acc.re;
            }
        }
        h
    }

    /// Conjugate polynomial: swaps holomorphic/antiholomorphic exponents and
    /// conjugates coefficients. A real-valued polynomial equals its conjugate.
    pub fn conj(&self) -> Self {
        let mut out = Self::default();
        for (e, c) in self.terms() {
            out.add_term([e[1], e[0], e[3], e[2]], c.conj());
        }
        out
    }

    /// True when the polynomial is real-valued on the diagonal z_bar = conj(z).
    pub fn is_real_valued(&self) -> bool {
        let diff = self.add(&self.conj().scale(Complex64::new(-1.0, 0.0)));
        diff.terms.values().all(|c| c.norm() < 1e-14)
    }

    /// Substitute the affine holomorphic map `z = L w + t` (and its conjugate
    /// for the bar variables). Rows of `L` give z1, z2 in terms of (w1, w2).
    pub fn compose_affine(&self, l: [[Complex64; 2]; 2], t: [Complex64; 2]) -> Self {
        let w1 = Self::var(0);
        let w2 = Self::var(2);
        let w1b = Self::var(1);
        let w2b = Self::var(3);

        let lin = |a: Complex64, b: Complex64, c: Complex64, conj: bool| -> Self {
            let (u, v) = if conj {
                (w1b.clone(), w2b.clone())
            } else {
                (w1.clone(), w2.clone())
            };
            u.scale(a).add(&v.scale(b)).add(&Self::constant(c))
        };

        let subs = [
            lin(l[0][0], l[0][1], t[0], false),
            lin(l[0][0].conj(), l[0][1].conj(), t[0].conj(), true),
            lin(l[1][0], l[1][1], t[1], false),
            lin(l[1][0].conj(), l[1][1].conj(), t[1].conj(), true),
        ];

        let mut out = Self::default();
        for (e, c) in self.terms() {
            let mut term = Self::constant(*c);
            for v in 0..4 {
                term = term.mul(&subs[v].pow(e[v]));
            }
            out = out.add(&term);
        }
        out
    }
}

/// Highest per-variable exponent supported by the compiled evaluators.
pub const MAX_POW: usize = 12;

/// A polynomial compiled to a flat term list for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct FlatPoly {
    terms: Vec<([u8; 4], Complex64)>,
}

/// Per-point power tables shared by all flat evaluations at that point.
pub struct Pows {
    p: [[Complex64; MAX_POW + 1]; 4],
}

impl Pows {
    pub fn at(z: ComplexPoint2) -> Pows {
        Self::at_formal([z.z1, z.z1.conj(), z.z2, z.z2.conj()])
    }

    pub fn at_formal(w: [Complex64; 4]) -> Pows {
        let one = Complex64::new(1.0, 0.0);
        let mut p = [[one; MAX_POW + 1]; 4];
        for v in 0..4 {
            for k in 1..=MAX_POW {
                p[v][k] = p[v][k - 1] * w[v];
            }
        }
        Pows { p }
    }
}

impl FlatPoly {
    pub fn compile(p: &Poly4) -> FlatPoly {
        let terms: Vec<_> = p.terms().map(|(e, c)| (*e, *c)).collect();
        for (e, _) in &terms {
            assert!(e.iter().all(|&x| (x as usize) <= MAX_POW));
        }
        FlatPoly { terms }
    }

    #[inline]
    pub fn eval_pows(&self, pows: &Pows) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            acc += *c
                * pows.p[0][e[0] as usize]
                * pows.p[1][e[1] as usize]
                * pows.p[2][e[2] as usize]
                * pows.p[3][e[3] as usize];
        }
        acc
    }

    pub fn eval(&self, z: ComplexPoint2) -> Complex64 {
        self.eval_pows(&Pows::at(z))
    }
}

/// All Wirtinger derivatives of a polynomial up to a total order, compiled
/// for fast point evaluation. Entry order matches the canonical graded
/// multi-index enumeration shared with the truncated-jet algebra.
#[derive(Debug, Clone)]
pub struct JetTable {
    pub order: usize,
    entries: Vec<FlatPoly>,
}

impl JetTable {
    pub fn build(p: &Poly4, order: usize) -> JetTable {
        let entries = crate::jets::multi_indices(order)
            .iter()
            .map(|m| FlatPoly::compile(&p.derivative(*m)))
            .collect();
        JetTable { order, entries }
    }

    #[inline]
    pub fn jet_pows(&self, pows: &Pows, e: [u8; 4]) -> Complex64 {
        self.entries[crate::jets::rank_of(self.order, e)].eval_pows(pows)
    }

    pub fn jet(&self, z: ComplexPoint2, e: [u8; 4]) -> Complex64 {
        self.jet_pows(&Pows::at(z), e)
    }

    /// All derivative values at a point, in canonical graded order.
    pub fn jet_all(&self, z: ComplexPoint2) -> Vec<Complex64> {
        let pows = Pows::at(z);
        self.entries.iter().map(|f| f.eval_pows(&pows)).collect()
    }

    /// Holomorphic gradient (dr/dz1, dr/dz2).
    pub fn grad_z(&self, pows: &Pows) -> (Complex64, Complex64) {
        (self.jet_pows(pows, [1, 0, 0, 0]), self.jet_pows(pows, [0, 0, 1, 0]))
    }

    /// Real gradient in coordinates (x1, y1, x2, y2).
    pub fn grad_real(&self, z: ComplexPoint2) -> [f64; 4] {
        let (g1, g2) = self.grad_z(&Pows::at(z));
        [2.0 * g1.re, -2.0 * g1.im, 2.0 * g2.re, -2.0 * g2.im]
    }

    /// Real 4x4 Hessian in coordinates (x1, y1, x2, y2).
    pub fn hessian_real(&self, z: ComplexPoint2) -> [[f64; 4]; 4] {
        let pows = Pows::at(z);
        let parts: [[(usize, Complex64); 2]; 4] = [
            [(0, Complex64::new(1.0, 0.0)), (1, Complex64::new(1.0, 0.0))],
            [(0, Complex64::new(0.0, 1.0)), (1, Complex64::new(0.0, -1.0))],
            [(2, Complex64::new(1.0, 0.0)), (3, Complex64::new(1.0, 0.0))],
            [(2, Complex64::new(0.0, 1.0)), (3, Complex64::new(0.0, -1.0))],
        ];
        let mut h = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for (va, ca) in parts[i] {
                    for (vb, cb) in parts[j] {
                        let mut e = [0u8; 4];
                        e[va] += 1;
                        e[vb] += 1;
                        acc += ca * cb * self.jet_pows(&pows, e);
                    }
                }
                h[i][j] = acc.re;
                h[j][i] = acc.re;
            }
        }
        h
    }
}
