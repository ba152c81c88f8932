//! The spectral function of a pencil, its moments and Hankel determinants,
//! the determinant representation of `p_n`, second-kind polynomials and the
//! independence test for the four basic solutions.
//!
//! `S` is the unique bilinear form on real polynomials with
//! `S(p_n, p_m) = delta_{nm}`. Writing `x^m = sum_i c_{m,i} p_i` gives
//! `s_{m,n} = S(x^m, x^n) = sum_i c_{m,i} c_{n,i}`, so the moment table is
//! computed from the pencil alone, with no measure in sight.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{det_rat, sign, Poly, Rat};
use crate::pencil::{
    associated_polynomials, shifted_solutions, PencilData, ShiftOrder, SolutionQuad,
};

/// `s[m][n] = S(x^m, x^n)` for `m, n <= max_degree`, with the Hankel-type
/// determinants `Delta_n = det(s[j][k])_{j,k<=n}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentTable {
    s: Vec<Vec<Rat>>,
    delta: Vec<Rat>,
}

impl MomentTable {
    /// Builds a table from a symmetric moment matrix, computing every
    /// `Delta_n` and rejecting a non-positive one.
    pub fn from_moments(s: Vec<Vec<Rat>>) -> Result<Self> {
        let size = s.len();
        if size == 0 {
            return Err(Error::InsufficientTable { needed: 0, have: 0 });
        }
        for (i, row) in s.iter().enumerate() {
            if row.len() != size {
                return Err(Error::NonSquare {
                    rows: size,
                    cols: row.len(),
                });
            }
            for j in 0..i {
                if row[j] != s[j][i] {
                    return Err(Error::InvalidMeasure(format!(
                        "moment table is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let mut delta = Vec::with_capacity(size);
        for n in 0..size {
            let block: Vec<Vec<Rat>> = s[..=n].iter().map(|r| r[..=n].to_vec()).collect();
            let d = det_rat(&block)?;
            if !d.is_positive() {
                return Err(Error::HankelNotPositive {
                    n,
                    value: d.to_string(),
                });
            }
            delta.push(d);
        }
        Ok(MomentTable { s, delta })
    }

    /// Largest monomial degree covered.
    pub fn max_degree(&self) -> usize {
        self.s.len() - 1
    }

    pub fn s(&self, m: usize, n: usize) -> &Rat {
        &self.s[m][n]
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.s
    }

    /// `Delta_n`, with `Delta_{-1} = 1`.
    pub fn delta(&self, n: isize) -> Rat {
        if n < 0 {
            Rat::one()
        } else {
            self.delta[n as usize].clone()
        }
    }

    pub fn deltas(&self) -> &[Rat] {
        &self.delta
    }

    /// `S(u, v)` for real polynomials of degree at most `max_degree`.
    pub fn pair(&self, u: &Poly, v: &Poly) -> Result<Rat> {
        let need = u.degree().unwrap_or(0).max(v.degree().unwrap_or(0));
        if need > self.max_degree() {
            return Err(Error::InsufficientTable {
                needed: need,
                have: self.max_degree(),
            });
        }
        let mut acc = Rat::zero();
        for (i, ui) in u.coeffs().iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.coeffs().iter().enumerate() {
                acc += ui * vj * &self.s[i][j];
            }
        }
        Ok(acc)
    }

    /// The same table cut down to degree `m`.
    pub fn truncated(&self, m: usize) -> MomentTable {
        let m = m.min(self.max_degree());
        MomentTable {
            s: self.s[..=m].iter().map(|r| r[..=m].to_vec()).collect(),
            delta: self.delta[..=m].to_vec(),
        }
    }
}

/// Coordinates of `x^m` in the basis `p_0..p_m` (triangular back-substitution).
pub fn monomial_coords(pbasis: &[Poly], m: usize) -> Result<Vec<Rat>> {
    if pbasis.len() <= m {
        return Err(Error::InsufficientBasis {
            needed: m,
            have: pbasis.len(),
        });
    }
    let mut coords = vec![Rat::zero(); m + 1];
    let mut rest = Poly::monomial(m);
    for i in (0..=m).rev() {
        let pi = &pbasis[i];
        if pi.degree() != Some(i) {
            return Err(Error::InsufficientBasis {
                needed: m,
                have: i,
            });
        }
        let c = rest.coeff(i) / pi.leading().unwrap();
        if !c.is_zero() {
            rest = &rest - &pi.scale(&c);
        }
        coords[i] = c;
    }
    debug_assert!(rest.is_zero());
    Ok(coords)
}

/// Moments `s_{m,n}` for `m, n <= max_degree`, computed from the pencil.
pub fn moment_table(p: &PencilData, max_degree: usize) -> Result<MomentTable> {
    let basis = associated_polynomials(p, max_degree)?;
    moment_table_from_basis(&basis, max_degree)
}

/// Moments of the form that makes the given basis orthonormal.
pub fn moment_table_from_basis(basis: &[Poly], max_degree: usize) -> Result<MomentTable> {
    let coords: Vec<Vec<Rat>> = (0..=max_degree)
        .map(|m| monomial_coords(basis, m))
        .collect::<Result<_>>()?;
    let s = (0..=max_degree)
        .map(|m| {
            (0..=max_degree)
                .map(|n| {
                    coords[m]
                        .iter()
                        .zip(&coords[n])
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect()
        })
        .collect();
    MomentTable::from_moments(s)
}

/// The cofactor polynomial `M_n(x)`: determinant of the `(n+1) x (n+1)` array
/// whose row `j < n` is `(s_{0,j}, ..., s_{n,j})` and whose last row is
/// `(1, x, ..., x^n)`. Then `p_n = M_n / sqrt(Delta_{n-1} Delta_n)`.
pub fn detrep_polynomial(table: &MomentTable, n: usize) -> Result<Poly> {
    if n > table.max_degree() {
        return Err(Error::InsufficientTable {
            needed: n,
            have: table.max_degree(),
        });
    }
    // expand along the monomial row
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let minor: Vec<Vec<Rat>> = (0..n)
            .map(|j| {
                (0..=n)
                    .filter(|&col| col != k)
                    .map(|col| table.s(col, j).clone())
                    .collect()
            })
            .collect();
        let d = det_rat(&minor)?;
        coeffs.push(if (n + k) % 2 == 0 { d } else { -d });
    }
    Ok(Poly::from_coeffs(coeffs))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DetRep {
    Ok,
    Mismatch,
}

/// Verifies `M_n^2 = Delta_{n-1} Delta_n p_n^2` exactly, plus agreement of
/// the leading-coefficient signs (the square-root-free form of the
/// determinant representation).
pub fn detrep_check(table: &MomentTable, pbasis: &[Poly], n: usize) -> Result<DetRep> {
    if pbasis.len() <= n {
        return Err(Error::InsufficientBasis {
            needed: n,
            have: pbasis.len(),
        });
    }
    let m = detrep_polynomial(table, n)?;
    let pn = &pbasis[n];
    let lhs = &m * &m;
    let scale = table.delta(n as isize - 1) * table.delta(n as isize);
    let rhs = (pn * pn).scale(&scale);
    let signs = match (m.leading(), pn.leading()) {
        (Some(a), Some(b)) => sign(a) == sign(b),
        _ => false,
    };
    Ok(if lhs == rhs && signs {
        DetRep::Ok
    } else {
        DetRep::Mismatch
    })
}

/// Second-kind polynomials `q_n(x) = S_t((p_n(x) - p_n(t))/(x - t), 1)` for
/// `n = 0..=depth`.
pub fn second_kind(p: &PencilData, table: &MomentTable, depth: usize) -> Result<Vec<Poly>> {
    let needed = depth.saturating_sub(1);
    if table.max_degree() < needed {
        return Err(Error::InsufficientTable {
            needed,
            have: table.max_degree(),
        });
    }
    let basis = associated_polynomials(p, depth)?;
    Ok(basis.iter().map(|pn| second_kind_of(pn, table)).collect())
}

fn second_kind_of(pn: &Poly, table: &MomentTable) -> Poly {
    pn.divided_difference()
        .t_coeffs()
        .iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (k, c)| &acc + &c.scale(table.s(k, 0)))
}

/// `p, q, u, w` up to index `depth`.
pub fn basic_solutions(p: &PencilData, depth: usize) -> Result<SolutionQuad> {
    let table = moment_table(p, depth.saturating_sub(1))?;
    Ok(SolutionQuad {
        p: associated_polynomials(p, depth)?,
        q: second_kind(p, &table, depth)?,
        u: shifted_solutions(p, ShiftOrder::Single, depth)?,
        w: shifted_solutions(p, ShiftOrder::Double, depth)?,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Independence {
    Nonsingular,
    Singular,
}

/// The `4 x 4` matrix `[p_n, q_n, u_n, w_n](lam)`, `n = 0..3`, and its
/// exact determinant.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndependenceSample {
    pub lam: Rat,
    pub matrix: Vec<Vec<Rat>>,
    pub det: Rat,
    pub verdict: Independence,
}

pub fn independence_check(quad: &SolutionQuad, lam: &Rat) -> Result<IndependenceSample> {
    let have = [quad.p.len(), quad.q.len(), quad.u.len(), quad.w.len()]
        .into_iter()
        .min()
        .unwrap();
    if have < 4 {
        return Err(Error::InsufficientList { needed: 3, have });
    }
    let matrix: Vec<Vec<Rat>> = (0..4)
        .map(|n| {
            [&quad.p, &quad.q, &quad.u, &quad.w]
                .iter()
                .map(|seq| seq[n].eval(lam))
                .collect()
        })
        .collect();
    let det = det_rat(&matrix)?;
    let verdict = if det.is_zero() {
        Independence::Singular
    } else {
        Independence::Nonsingular
    };
    Ok(IndependenceSample {
        lam: lam.clone(),
        matrix,
        det,
        verdict,
    })
}
