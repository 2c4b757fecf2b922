use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point of C^2, stored as two complex coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint2 {
    pub z1: Complex64,
    pub z2: Complex64,
}

/// A holomorphic tangent vector at a point of C^2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexVector2 {
    pub v1: Complex64,
    pub v2: Complex64,
}

impl ComplexPoint2 {
    pub fn new(z1: Complex64, z2: Complex64) -> Self {
        Self { z1, z2 }
    }

    /// Build from four real components (Re z1, Im z1, Re z2, Im z2).
    pub fn from_reals(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self {
            z1: Complex64::new(x1, y1),
            z2: Complex64::new(x2, y2),
        }
    }

    pub fn to_reals(self) -> [f64; 4] {
        [self.z1.re, self.z1.im, self.z2.re, self.z2.im]
    }

    pub fn is_finite(self) -> bool {
        self.to_reals().iter().all(|c| c.is_finite())
    }

    /// Euclidean distance between two points.
    pub fn dist(self, other: Self) -> f64 {
        ((self.z1 - other.z1).norm_sqr() + (self.z2 - other.z2).norm_sqr()).sqrt()
    }

    pub fn sub(self, other: Self) -> ComplexVector2 {
        ComplexVector2 {
            v1: self.z1 - other.z1,
            v2: self.z2 - other.z2,
        }
    }

    pub fn add(self, v: ComplexVector2) -> Self {
        Self {
            z1: self.z1 + v.v1,
            z2: self.z2 + v.v2,
        }
    }

    /// Linear interpolation between two points: `self + t (other - self)`.
    pub fn lerp(self, other: Self, t: f64) -> Self {
        Self {
            z1: self.z1 + (other.z1 - self.z1) * t,
            z2: self.z2 + (other.z2 - self.z2) * t,
        }
    }
}

impl ComplexVector2 {
    pub const ZERO: Self = Self {
        v1: Complex64::new(0.0, 0.0),
        v2: Complex64::new(0.0, 0.0),
    };

    pub fn new(v1: Complex64, v2: Complex64) -> Self {
        Self { v1, v2 }
    }

    pub fn from_reals(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self {
            v1: Complex64::new(x1, y1),
            v2: Complex64::new(x2, y2),
        }
    }

    pub fn is_finite(self) -> bool {
        self.v1.re.is_finite() && self.v1.im.is_finite() && self.v2.re.is_finite() && self.v2.im.is_finite()
    }

    pub fn norm(self) -> f64 {
        (self.v1.norm_sqr() + self.v2.norm_sqr()).sqrt()
    }

    pub fn norm_sqr(self) -> f64 {
        self.v1.norm_sqr() + self.v2.norm_sqr()
    }

    /// Standard Hermitian product `<X, Y> = sum_k X_k conj(Y_k)`.
    pub fn hermitian_dot(self, other: Self) -> Complex64 {
        self.v1 * other.v1.conj() + self.v2 * other.v2.conj()
    }

    pub fn scale(self, t: Complex64) -> Self {
        Self {
            v1: self.v1 * t,
            v2: self.v2 * t,
        }
    }

    pub fn scale_re(self, t: f64) -> Self {
        Self {
            v1: self.v1 * t,
            v2: self.v2 * t,
        }
    }

    pub fn add(self, other: Self) -> Self {
        Self {
            v1: self.v1 + other.v1,
            v2: self.v2 + other.v2,
        }
    }

    pub fn sub(self, other: Self) -> Self {
        Self {
            v1: self.v1 - other.v1,
            v2: self.v2 - other.v2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_dot_matches_norm() {
        let v = ComplexVector2::from_reals(1.0, -2.0, 0.5, 3.0);
        let d = v.hermitian_dot(v);
        assert!((d.im).abs() < 1e-15);
        assert!((d.re - v.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn lerp_endpoints() {
        let a = ComplexPoint2::from_reals(0.0, 0.0, 1.0, 0.0);
        let b = ComplexPoint2::from_reals(1.0, 2.0, -1.0, 0.5);
        assert_eq!(a.lerp(b, 0.0), a);
        assert_eq!(a.lerp(b, 1.0), b);
    }
}
