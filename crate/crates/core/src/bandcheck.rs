//! Symmetry of `A^N`, banded expansions of `x^N p_k` and the residue-class
//! sieve that turns scalar polynomials into `N x N` matrix polynomials.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{Poly, PolyMatrix, Rat};
use crate::perturb::{apply_a_power, measure_moments, monic_recurrence, Measure, PerturbationParams};
use crate::spectral::MomentTable;

/// Largest residue searched when looking for `r_m(0) != 0`, counted past `N`.
const WITNESS_SEARCH: usize = 16;

fn integral(u: &Poly, v: &Poly, moments: &[Rat]) -> Result<Rat> {
    let need = u.degree().unwrap_or(0) + v.degree().unwrap_or(0);
    if moments.len() <= need {
        return Err(Error::InsufficientMoments {
            needed: need,
            have: moments.len().saturating_sub(1),
        });
    }
    let mut acc = Rat::zero();
    for (i, x) in u.coeffs().iter().enumerate() {
        for (j, y) in v.coeffs().iter().enumerate() {
            acc += x * y * &moments[i + j];
        }
    }
    Ok(acc)
}

/// `<A^N w, g> - <w, A^N g>` in `L^2(sigma)`.
pub fn pair_defect(
    prm: &PerturbationParams,
    moments: &[Rat],
    order: usize,
    w: &Poly,
    g: &Poly,
) -> Result<Rat> {
    let aw = apply_a_power(prm, w, order);
    let ag = apply_a_power(prm, g, order);
    Ok(integral(&aw, g, moments)? - integral(w, &ag, moments)?)
}

/// The refutation built from `phi = (c x + d)(d^N - x^N)/(d - x)` and an
/// orthogonal polynomial `r_m` with `m > N`, `r_m(0) != 0`: the defect
/// equals `-r_m(0) <phi, phi>`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub m: usize,
    pub phi: Poly,
    pub r_m: Poly,
    pub defect: Rat,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymmetryReport {
    pub order: usize,
    pub grid_degree: usize,
    /// Largest `|defect|` over monomial pairs `(x^i, x^j)`, `i, j <= grid_degree`.
    pub max_defect: Rat,
    /// Degrees `(i, j)` attaining `max_defect`, if it is nonzero.
    pub grid_witness: Option<(usize, usize)>,
    pub witness: Option<Witness>,
}

impl SymmetryReport {
    /// No defect found; evidence on the grid only, not a proof.
    pub fn symmetric_on_grid(&self) -> bool {
        self.max_defect.is_zero() && self.witness.as_ref().is_none_or(|w| w.defect.is_zero())
    }
}

/// Exact defect sweep over all monomial pairs up to `grid_degree`, preceded
/// by the `phi`/`r_m` refutation when `c != 0` and `d != 0`.
pub fn symmetry_defect(
    prm: &PerturbationParams,
    m: &Measure,
    order: usize,
    grid_degree: usize,
) -> Result<SymmetryReport> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let witness = if !prm.c().is_zero() && !prm.d().is_zero() {
        find_witness(prm, m, order)?
    } else {
        None
    };
    let moments = measure_moments(m, 2 * grid_degree + order + 1)?;
    let mut report = grid_sweep(prm, &moments, order, grid_degree)?;
    report.witness = witness;
    Ok(report)
}

/// The monomial sweep on its own, against explicit moments.
pub fn grid_sweep(
    prm: &PerturbationParams,
    moments: &[Rat],
    order: usize,
    grid_degree: usize,
) -> Result<SymmetryReport> {
    let mut max_defect = Rat::zero();
    let mut grid_witness = None;
    for i in 0..=grid_degree {
        for j in 0..=grid_degree {
            let d = pair_defect(prm, moments, order, &Poly::monomial(i), &Poly::monomial(j))?.abs();
            if d > max_defect {
                max_defect = d;
                grid_witness = Some((i, j));
            }
        }
    }
    Ok(SymmetryReport {
        order,
        grid_degree,
        max_defect,
        grid_witness,
        witness: None,
    })
}

fn find_witness(prm: &PerturbationParams, m: &Measure, order: usize) -> Result<Option<Witness>> {
    let limit = match m.max_degree() {
        Some(max) => max.min(order + WITNESS_SEARCH),
        None => order + WITNESS_SEARCH,
    };
    if limit <= order {
        return Ok(None);
    }
    let rec = monic_recurrence(m, limit)?;
    let polys = rec.monic_polys(limit)?;
    let Some(mm) = (order + 1..=limit).find(|&k| !polys[k].coeff(0).is_zero()) else {
        return Ok(None);
    };
    let xn = Poly::monomial(order);
    let tail = Poly::linear(prm.d().clone(), prm.c().clone());
    let phi = &tail * &xn.divided_difference_at(prm.d());
    let moments = measure_moments(m, mm + 2 * order + 1)?;
    let defect = pair_defect(prm, &moments, order, &phi, &polys[mm])?;
    Ok(Some(Witness {
        m: mm,
        phi,
        r_m: polys[mm].clone(),
        defect,
    }))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BandFit {
    pub order: usize,
    /// `xi[k][i] = S(x^N p_k, p_i)` for `0 <= i <= k + N`.
    pub xi: Vec<Vec<Rat>>,
    /// `xi[k][i] = 0` whenever `i < k - N`.
    pub banded: bool,
    /// When banded: row `k` holds `xi[k][k..=k+N]`, the coefficients of the
    /// `(2N+1)`-diagonal recurrence.
    pub recurrence: Option<Vec<Vec<Rat>>>,
}

impl BandFit {
    /// Entries `(k, i, xi[k][i])` below the band that are nonzero.
    pub fn off_band(&self) -> Vec<(usize, usize, Rat)> {
        let n = self.order;
        self.xi
            .iter()
            .enumerate()
            .flat_map(|(k, row)| {
                row.iter()
                    .enumerate()
                    .take(k.saturating_sub(n))
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(i, v)| (k, i, v.clone()))
            })
            .collect()
    }

    /// Pairs `(k, j)` where `xi[k][k-j] != xi[k-j][k]`, `1 <= j <= N`.
    pub fn hermitian_mismatches(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in 0..self.xi.len() {
            for j in 1..=self.order.min(k) {
                if self.xi[k][k - j] != self.xi[k - j][k] {
                    out.push((k, j));
                }
            }
        }
        out
    }
}

/// Expands `x^N p_k` against `p` through the spectral function, for every
/// `k` the table supports (`k + N <= max_degree`).
pub fn band_fit(p: &[Poly], table: &MomentTable, order: usize) -> Result<BandFit> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let reach = table.max_degree().min(p.len().saturating_sub(1));
    if reach < order {
        return Err(Error::InsufficientTable {
            needed: order,
            have: reach,
        });
    }
    let rows = reach - order;
    let xn = Poly::monomial(order);
    let mut xi = Vec::with_capacity(rows + 1);
    for k in 0..=rows {
        let lhs = &xn * &p[k];
        let row = (0..=k + order)
            .map(|i| table.pair(&lhs, &p[i]))
            .collect::<Result<Vec<_>>>()?;
        xi.push(row);
    }
    let banded = xi
        .iter()
        .enumerate()
        .all(|(k, row)| row.iter().take(k.saturating_sub(order)).all(Zero::is_zero));
    let recurrence = banded.then(|| {
        xi.iter()
            .enumerate()
            .map(|(k, row)| row[k..=k + order].to_vec())
            .collect()
    });
    Ok(BandFit {
        order,
        xi,
        banded,
        recurrence,
    })
}

/// `R_{N,m}(p)(t) = sum_n [t^{nN+m}] p * t^n`.
pub fn sieve(p: &Poly, order: usize, m: usize) -> Result<Poly> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    if m >= order {
        return Err(Error::ResidueOutOfRange { m, order });
    }
    Ok(Poly::from_coeffs(
        p.coeffs().iter().skip(m).step_by(order).cloned().collect(),
    ))
}

/// `sum_m t^m parts[m](t^N)`, the inverse of sieving with `N = parts.len()`.
pub fn unsieve(parts: &[Poly]) -> Poly {
    let order = parts.len();
    parts
        .iter()
        .enumerate()
        .fold(Poly::zero(), |acc, (m, q)| &acc + &q.compose_power(order).shift_up(m))
}

/// Block `P_n`: row `i`, column `m` holds `R_{N,m}(p_{nN+i})`.
pub fn assemble_block(p: &[Poly], order: usize, n: usize) -> Result<PolyMatrix> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    let last = n * order + order - 1;
    if p.len() <= last {
        return Err(Error::InsufficientList {
            needed: last,
            have: p.len(),
        });
    }
    let mut entries = Vec::with_capacity(order * order);
    for i in 0..order {
        for m in 0..order {
            entries.push(sieve(&p[n * order + i], order, m)?);
        }
    }
    PolyMatrix::new(order, order, entries)
}
