use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::rat::{to_f64, Rat};

/// Dense univariate polynomial over the rationals.
///
/// `coeffs[k]` is the coefficient of `x^k`. The trailing coefficient is never
/// zero; the zero polynomial is the empty list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::monomial(1)
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = Rat::one();
        Poly { coeffs }
    }

    /// `c0 + c1 x`
    pub fn linear(c0: Rat, c1: Rat) -> Self {
        Self::from_coeffs(vec![c0, c1])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| super::rat::int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    /// Coefficient of `x^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(to_f64).collect()
    }

    pub fn scale(&self, s: &Rat) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rat::from_integer((k as i64).into()))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Poly {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// `(p(x) - p(a)) / (x - a)` as an exact polynomial (synthetic division).
    ///
    /// This is also the limit value at `x = a`, so callers never need a
    /// special case there.
    pub fn divided_difference_at(&self, a: &Rat) -> Poly {
        let Some(deg) = self.degree() else {
            return Poly::zero();
        };
        if deg == 0 {
            return Poly::zero();
        }
        let mut quot = vec![Rat::zero(); deg];
        let mut acc = Rat::zero();
        for k in (1..=deg).rev() {
            acc = acc * a + &self.coeffs[k];
            quot[k - 1] = acc.clone();
        }
        Poly::from_coeffs(quot)
    }

    /// `(p(x) - p(t)) / (x - t)` as a polynomial in `t` whose coefficients are
    /// polynomials in `x`.
    pub fn divided_difference(&self) -> BivarPoly {
        let Some(deg) = self.degree() else {
            return BivarPoly { t_coeffs: Vec::new() };
        };
        // (x^j - t^j)/(x - t) = sum_{k<j} x^(j-1-k) t^k
        let t_coeffs = (0..deg)
            .map(|k| {
                Poly::from_coeffs(((k + 1)..=deg).map(|j| self.coeffs[j].clone()).collect())
            })
            .collect();
        BivarPoly::from_t_coeffs(t_coeffs)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dlead = divisor.leading().expect("division by the zero polynomial");
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rat::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + ddeg] / dlead;
            if !q.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &q * dc;
                }
            }
            quot[k] = q;
        }
        rem.truncate(ddeg);
        (Poly::from_coeffs(quot), Poly::from_coeffs(rem))
    }

    /// Monic associate; the zero polynomial maps to itself.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free factorisation (Yun). Returns `(factor, multiplicity)` pairs
    /// with monic, pairwise coprime, square-free factors of positive degree.
    pub fn square_free_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let next_b = b.div_rem(&a).0;
            let next_c = d.div_rem(&a).0;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            d = &next_c - &next_b.derivative();
            b = next_b;
            i += 1;
        }
        out
    }

    /// Substitutes `x -> x^k`.
    pub fn compose_power(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Poly::from_coeffs(coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}*x")?,
                (_, true) => write!(f, "x^{k}")?,
                (_, false) => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
        impl $tr<Poly> for &Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// Polynomial in `t` with coefficients in `Q[x]`: `t_coeffs[k]` multiplies `t^k`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BivarPoly {
    t_coeffs: Vec<Poly>,
}

impl BivarPoly {
    pub fn from_t_coeffs(mut t_coeffs: Vec<Poly>) -> Self {
        while t_coeffs.last().is_some_and(Poly::is_zero) {
            t_coeffs.pop();
        }
        BivarPoly { t_coeffs }
    }

    pub fn t_coeffs(&self) -> &[Poly] {
        &self.t_coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.t_coeffs.is_empty()
    }

    pub fn degree_in_t(&self) -> Option<usize> {
        self.t_coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rat, t: &Rat) -> Rat {
        self.t_coeffs
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| acc * t + c.eval(x))
    }
}

/// Exact Horner evaluation.
pub fn poly_eval(p: &Poly, x: &Rat) -> Rat {
    p.eval(x)
}

pub fn divided_difference(p: &Poly) -> BivarPoly {
    p.divided_difference()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rat::{int, rat};

    #[test]
    fn horner_examples() {
        let p = Poly::from_coeffs(vec![rat(11, 4), int(-3), int(1)]);
        assert_eq!(poly_eval(&p, &int(2)), rat(3, 4));
        assert_eq!(poly_eval(&Poly::zero(), &int(5)), int(0));
        // p_1 of the unit-shift pencil vanishes at b_0 + d = 2
        assert_eq!(poly_eval(&Poly::from_ints(&[-4, 2]), &int(2)), int(0));
    }

    #[test]
    fn divided_difference_examples() {
        let sq = divided_difference(&Poly::monomial(2));
        assert_eq!(sq.t_coeffs(), &[Poly::x(), Poly::one()]);

        assert!(divided_difference(&Poly::constant(int(7))).is_zero());

        let cube = divided_difference(&Poly::monomial(3));
        assert_eq!(
            cube.t_coeffs(),
            &[Poly::monomial(2), Poly::x(), Poly::one()]
        );
        assert_eq!(cube.degree_in_t(), Some(2));
    }

    #[test]
    fn divided_difference_at_point() {
        // (x^2 - 3x + 2 - 0)/(x - 1) = x - 2
        let p = Poly::from_ints(&[2, -3, 1]);
        assert_eq!(p.divided_difference_at(&int(1)), Poly::from_ints(&[-2, 1]));
        // limit at the node: (x^3 - a^3)/(x - a) = x^2 + a x + a^2
        let q = Poly::monomial(3).divided_difference_at(&int(2));
        assert_eq!(q, Poly::from_ints(&[4, 2, 1]));
    }

    #[test]
    fn normalisation_and_degree() {
        let p = Poly::from_coeffs(vec![int(1), int(0), int(0)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(Poly::zero().degree(), None);
        assert!((&Poly::x() - &Poly::x()).is_zero());
    }

    #[test]
    fn euclid_and_square_free() {
        // (x - 1)^2 (x + 2)
        let p = &(&Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[-1, 1])) * &Poly::from_ints(&[2, 1]);
        let (q, r) = p.div_rem(&Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q.degree(), Some(2));
        let sf = p.square_free_decomposition();
        assert_eq!(sf, vec![(Poly::from_ints(&[2, 1]), 1), (Poly::from_ints(&[-1, 1]), 2)]);
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[11, -12, 4]).to_string(), "4*x^2 - 12*x + 11");
        assert_eq!(Poly::from_ints(&[0, -1]).to_string(), "-x");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
