use std::ops::{Add, Sub};

use super::poly::Poly;

/// Floating-point mirror of [`Poly`] for paths whose data is irrational
/// (orthonormal recurrence coefficients carry square roots).
#[derive(Clone, PartialEq, Debug, Default)]
pub struct PolyF {
    pub coeffs: Vec<f64>,
}

impl PolyF {
    pub fn zero() -> Self {
        PolyF { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        PolyF { coeffs: vec![c] }
    }

    pub fn linear(c0: f64, c1: f64) -> Self {
        PolyF {
            coeffs: vec![c0, c1],
        }
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn scale(&self, s: f64) -> PolyF {
        PolyF {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn mul_x(&self) -> PolyF {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend_from_slice(&self.coeffs);
        PolyF { coeffs }
    }

    /// `(p(x) - p(a)) / (x - a)`
    pub fn divided_difference_at(&self, a: f64) -> PolyF {
        let n = self.coeffs.len();
        if n <= 1 {
            return PolyF::zero();
        }
        let mut quot = vec![0.0; n - 1];
        let mut acc = 0.0;
        for k in (1..n).rev() {
            acc = acc * a + self.coeffs[k];
            quot[k - 1] = acc;
        }
        PolyF { coeffs: quot }
    }

    /// Largest absolute coefficient difference against `other`, scaled by
    /// the larger coefficient magnitude (at least 1).
    pub fn rel_distance(&self, other: &PolyF) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        let scale = self
            .coeffs
            .iter()
            .chain(&other.coeffs)
            .fold(1.0f64, |m, c| m.max(c.abs()));
        (0..n)
            .map(|k| (self.coeff(k) - other.coeff(k)).abs())
            .fold(0.0, f64::max)
            / scale
    }
}

impl From<&Poly> for PolyF {
    fn from(p: &Poly) -> Self {
        PolyF {
            coeffs: p.to_f64_coeffs(),
        }
    }
}

impl Add<&PolyF> for &PolyF {
    type Output = PolyF;
    fn add(self, rhs: &PolyF) -> PolyF {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyF {
            coeffs: (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
        }
    }
}

impl Sub<&PolyF> for &PolyF {
    type Output = PolyF;
    fn sub(self, rhs: &PolyF) -> PolyF {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyF {
            coeffs: (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divided_difference_matches_exact() {
        let p = PolyF {
            coeffs: vec![2.0, -3.0, 1.0],
        };
        assert_eq!(p.divided_difference_at(1.0).coeffs, vec![-2.0, 1.0]);
        assert_eq!(p.eval(2.0), 0.0);
    }
}
