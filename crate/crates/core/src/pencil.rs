//! Jacobi-type pencils `J5 - x J3` and the fourth-order recurrence they
//! generate.
//!
//! `J3` is tridiagonal with diagonal `b` and positive off-diagonal `a`; `J5`
//! is five-diagonal with diagonal `alpha_j5`, first off-diagonal `beta_j5`
//! and positive second off-diagonal `gamma`. The associated polynomials obey
//!
//! ```text
//! gamma_{n-2} p_{n-2} + (beta_{n-1} - x a_{n-1}) p_{n-1} + (alpha_n - x b_n) p_n
//!     + (beta_n - x a_n) p_{n+1} + gamma_n p_{n+2} = 0
//! ```
//!
//! seeded by `p_0 = 1`, `p_1 = alpha_const x + beta_const`, with every
//! negative-index quantity taken as zero.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{Poly, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PencilData {
    /// `J3` off-diagonal.
    pub a: Vec<Rat>,
    /// `J3` diagonal.
    pub b: Vec<Rat>,
    /// `J5` diagonal.
    pub alpha_j5: Vec<Rat>,
    /// `J5` first off-diagonal.
    pub beta_j5: Vec<Rat>,
    /// `J5` second off-diagonal.
    pub gamma: Vec<Rat>,
    pub alpha_const: Rat,
    pub beta_const: Rat,
}

/// The four basic solutions `p, q, u, w` of the difference equation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolutionQuad {
    pub p: Vec<Poly>,
    pub q: Vec<Poly>,
    pub u: Vec<Poly>,
    pub w: Vec<Poly>,
}

impl PencilData {
    /// Number of recurrence rows the stored prefixes support: `p_0..p_depth`
    /// can be generated for any `depth <= max_depth()`.
    pub fn max_depth(&self) -> usize {
        [
            self.a.len(),
            self.b.len(),
            self.alpha_j5.len(),
            self.beta_j5.len(),
            self.gamma.len(),
        ]
        .into_iter()
        .min()
        .unwrap()
            + 1
    }

    pub(crate) fn a_at(&self, k: isize) -> Rat {
        at(&self.a, k)
    }

    pub(crate) fn b_at(&self, k: isize) -> Rat {
        at(&self.b, k)
    }

    pub(crate) fn alpha_at(&self, k: isize) -> Rat {
        at(&self.alpha_j5, k)
    }

    pub(crate) fn beta_at(&self, k: isize) -> Rat {
        at(&self.beta_j5, k)
    }

    pub(crate) fn gamma_at(&self, k: isize) -> Rat {
        at(&self.gamma, k)
    }

    /// Coefficients of row `n` of `J5 - x J3`, as `(column, entry)` pairs
    /// for columns `n-2..=n+2` that exist.
    pub(crate) fn row_terms(&self, n: usize) -> Vec<(usize, Poly)> {
        let n = n as isize;
        let lin = |c0: Rat, c1: Rat| Poly::linear(c0, -c1);
        let terms = [
            (n - 2, Poly::constant(self.gamma_at(n - 2))),
            (n - 1, lin(self.beta_at(n - 1), self.a_at(n - 1))),
            (n, lin(self.alpha_at(n), self.b_at(n))),
            (n + 1, lin(self.beta_at(n), self.a_at(n))),
            (n + 2, Poly::constant(self.gamma_at(n))),
        ];
        terms
            .into_iter()
            .filter(|(k, _)| *k >= 0)
            .map(|(k, c)| (k as usize, c))
            .collect()
    }

    /// `J3` restricted to its leading `size x size` block.
    pub fn j3_block(&self, size: usize) -> Vec<Vec<Rat>> {
        band_block(size, |i, j| match i.abs_diff(j) {
            0 => self.b_at(i as isize),
            1 => self.a_at(i.min(j) as isize),
            _ => Rat::zero(),
        })
    }

    /// `J5` restricted to its leading `size x size` block.
    pub fn j5_block(&self, size: usize) -> Vec<Vec<Rat>> {
        band_block(size, |i, j| match i.abs_diff(j) {
            0 => self.alpha_at(i as isize),
            1 => self.beta_at(i.min(j) as isize),
            2 => self.gamma_at(i.min(j) as isize),
            _ => Rat::zero(),
        })
    }
}

fn at(v: &[Rat], k: isize) -> Rat {
    if k < 0 {
        Rat::zero()
    } else {
        v.get(k as usize).cloned().unwrap_or_else(Rat::zero)
    }
}

fn band_block(size: usize, f: impl Fn(usize, usize) -> Rat) -> Vec<Vec<Rat>> {
    (0..size)
        .map(|i| (0..size).map(|j| f(i, j)).collect())
        .collect()
}

/// Checks positivity of `a`, `gamma` and `alpha_const`, and that the
/// prefixes reach the recurrence row `depth - 2`.
pub fn validate_pencil(p: &PencilData, depth: usize) -> Result<()> {
    if let Some(index) = p.a.iter().position(|x| !x.is_positive()) {
        return Err(Error::NonpositiveA { index });
    }
    if let Some(index) = p.gamma.iter().position(|x| !x.is_positive()) {
        return Err(Error::NonpositiveGamma { index });
    }
    if !p.alpha_const.is_positive() {
        return Err(Error::NonpositiveAlphaConst);
    }
    let needed = depth.saturating_sub(1);
    for (field, have) in [
        ("a", p.a.len()),
        ("b", p.b.len()),
        ("alpha_j5", p.alpha_j5.len()),
        ("beta_j5", p.beta_j5.len()),
        ("gamma", p.gamma.len()),
    ] {
        if have < needed {
            return Err(Error::InsufficientPrefix {
                field,
                needed,
                have,
            });
        }
    }
    Ok(())
}

/// `p_0..p_depth`, obtained by solving row `n` of the recurrence for
/// `p_{n+2}` (division by `gamma_n > 0`).
pub fn associated_polynomials(p: &PencilData, depth: usize) -> Result<Vec<Poly>> {
    validate_pencil(p, depth)?;
    let mut out = vec![Poly::one()];
    if depth == 0 {
        return Ok(out);
    }
    out.push(Poly::linear(p.beta_const.clone(), p.alpha_const.clone()));
    for n in 0..depth.saturating_sub(1) {
        let mut acc = Poly::zero();
        for (k, coeff) in p.row_terms(n) {
            if k < n + 2 {
                acc = &acc + &(&coeff * &out[k]);
            }
        }
        let inv = -p.gamma[n].recip();
        out.push(acc.scale(&inv));
    }
    Ok(out)
}

/// Deletes the first row and column of `J3` and `J5`; the new constants are
/// `a_0/gamma_0` and `-beta_0/gamma_0`.
pub fn shifted_pencil(p: &PencilData) -> Result<PencilData> {
    for (field, have) in [
        ("a", p.a.len()),
        ("b", p.b.len()),
        ("alpha_j5", p.alpha_j5.len()),
        ("beta_j5", p.beta_j5.len()),
        ("gamma", p.gamma.len()),
    ] {
        if have == 0 {
            return Err(Error::InsufficientPrefix {
                field,
                needed: 1,
                have,
            });
        }
    }
    if !p.gamma[0].is_positive() {
        return Err(Error::NonpositiveGamma { index: 0 });
    }
    let g0 = &p.gamma[0];
    Ok(PencilData {
        a: p.a[1..].to_vec(),
        b: p.b[1..].to_vec(),
        alpha_j5: p.alpha_j5[1..].to_vec(),
        beta_j5: p.beta_j5[1..].to_vec(),
        gamma: p.gamma[1..].to_vec(),
        alpha_const: &p.a[0] / g0,
        beta_const: -(&p.beta_j5[0] / g0),
    })
}

/// Which shifted family to build.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShiftOrder {
    /// `u_0 = 0`, `u_k = f_{k-1}` from the shifted pencil.
    Single,
    /// `w_0 = w_1 = 0`, `w_k = f~_{k-2}` from the double-shifted pencil.
    Double,
}

/// `u_0..u_depth` or `w_0..w_depth`.
pub fn shifted_solutions(p: &PencilData, order: ShiftOrder, depth: usize) -> Result<Vec<Poly>> {
    validate_pencil(p, depth)?;
    let lead = match order {
        ShiftOrder::Single => 1,
        ShiftOrder::Double => 2,
    };
    let mut out = vec![Poly::zero(); lead.min(depth + 1)];
    if depth < lead {
        return Ok(out);
    }
    let mut base = shifted_pencil(p)?;
    if order == ShiftOrder::Double {
        base = shifted_pencil(&base)?;
    }
    out.extend(associated_polynomials(&base, depth - lead)?);
    Ok(out)
}

/// Left-hand side of row `n` of the difference equation applied to `seq`.
/// The zero polynomial means the relation holds at `n`.
pub fn recurrence_residual(p: &PencilData, seq: &[Poly], n: usize) -> Result<Poly> {
    if seq.len() < n + 3 {
        return Err(Error::IndexOutOfRange {
            index: n,
            needed: n + 2,
            have: seq.len(),
        });
    }
    if p.max_depth() < n + 2 {
        return Err(Error::IndexOutOfRange {
            index: n,
            needed: n,
            have: p.max_depth().saturating_sub(1),
        });
    }
    Ok(p.row_terms(n)
        .into_iter()
        .fold(Poly::zero(), |acc, (k, coeff)| &acc + &(&coeff * &seq[k])))
}

/// The pencil `(J3, J3^2, 1/a_0, -b_0/a_0)`, whose associated polynomials are
/// the orthonormal polynomials of the Jacobi matrix `J3`.
pub fn degenerate_from_jacobi(a: &[Rat], b: &[Rat]) -> Result<PencilData> {
    if let Some(index) = a.iter().position(|x| !x.is_positive()) {
        return Err(Error::NonpositiveA { index });
    }
    let len = a.len().min(b.len());
    if len == 0 {
        return Err(Error::InsufficientPrefix {
            field: "a",
            needed: 1,
            have: 0,
        });
    }
    let rows = len - 1;
    let ai = |k: isize| at(a, k);
    let bi = |k: isize| at(b, k);
    let sq = |x: Rat| &x * &x;
    let alpha_j5 = (0..rows as isize)
        .map(|n| sq(ai(n - 1)) + sq(bi(n)) + sq(ai(n)))
        .collect();
    let beta_j5 = (0..rows as isize)
        .map(|n| ai(n) * (bi(n) + bi(n + 1)))
        .collect();
    let gamma = (0..rows as isize).map(|n| ai(n) * ai(n + 1)).collect();
    Ok(PencilData {
        a: a[..len].to_vec(),
        b: b[..len].to_vec(),
        alpha_j5,
        beta_j5,
        gamma,
        alpha_const: a[0].recip(),
        beta_const: -(&b[0] / &a[0]),
    })
}

/// Both sides of the Christoffel–Darboux analog at `(lam, y)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CdSides {
    pub lhs: Rat,
    pub rhs: Rat,
}

impl CdSides {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// ```text
/// sum_{k=0}^n (a_{k-1} p_{k-1}(y) + b_k p_k(y) + a_k p_{k+1}(y)) p_k(lam)
///   = [ gamma_{n-1} W_{n+1,n-1} + gamma_n W_{n+2,n} + (beta_n - a_n lam) W_{n+1,n} ] / (lam - y)
/// ```
/// with `W_{i,k} = p_i(lam) p_k(y) - p_i(y) p_k(lam)`.
pub fn christoffel_darboux(p: &PencilData, n: usize, lam: &Rat, y: &Rat) -> Result<CdSides> {
    if lam == y {
        return Err(Error::EqualArguments);
    }
    let polys = associated_polynomials(p, n + 2)?;
    let at_lam: Vec<Rat> = polys.iter().map(|q| q.eval(lam)).collect();
    let at_y: Vec<Rat> = polys.iter().map(|q| q.eval(y)).collect();
    let get = |v: &[Rat], k: isize| at(v, k);

    let mut lhs = Rat::zero();
    for k in 0..=n as isize {
        let j3_row = p.a_at(k - 1) * get(&at_y, k - 1)
            + p.b_at(k) * get(&at_y, k)
            + p.a_at(k) * get(&at_y, k + 1);
        lhs += j3_row * get(&at_lam, k);
    }

    let n = n as isize;
    let wr = |i: isize, k: isize| {
        get(&at_lam, i) * get(&at_y, k) - get(&at_y, i) * get(&at_lam, k)
    };
    let numer = p.gamma_at(n - 1) * wr(n + 1, n - 1)
        + p.gamma_at(n) * wr(n + 2, n)
        + (p.beta_at(n) - p.a_at(n) * lam) * wr(n + 1, n);
    let rhs = numer / (lam - y);
    Ok(CdSides { lhs, rhs })
}
