//! The rank-one perturbed multiplication operator
//! `A[p] = x p + p(0) (c x + d)` and the pencils it produces.
//!
//! Every "limit at a point" that the transforms need is realised as an exact
//! polynomial divided difference.

use nalgebra::{DMatrix, SymmetricEigen};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{to_f64, Poly, PolyF, Rat};
use crate::pencil::{degenerate_from_jacobi, PencilData};
use crate::spectral::MomentTable;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PerturbationParams {
    c: Rat,
    d: Rat,
}

impl PerturbationParams {
    /// Requires `c > -1`.
    pub fn new(c: Rat, d: Rat) -> Result<Self> {
        if c <= -Rat::one() {
            return Err(Error::InvalidParams { c: c.to_string() });
        }
        Ok(PerturbationParams { c, d })
    }

    pub fn c(&self) -> &Rat {
        &self.c
    }

    pub fn d(&self) -> &Rat {
        &self.d
    }

    fn c1(&self) -> Rat {
        &self.c + Rat::one()
    }

    /// `c x + d`
    fn tail(&self) -> Poly {
        Poly::linear(self.d.clone(), self.c.clone())
    }
}

/// Probability measure on the real line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Measure {
    Discrete { nodes: Vec<Rat>, weights: Vec<Rat> },
    /// `(1-x)^a (1+x)^b` on `[-1, 1]`, scaled to unit mass.
    JacobiWeight { a: Rat, b: Rat },
}

impl Measure {
    pub fn validate(&self) -> Result<()> {
        match self {
            Measure::Discrete { nodes, weights } => {
                if nodes.is_empty() {
                    return Err(Error::InvalidMeasure("no nodes".into()));
                }
                if nodes.len() != weights.len() {
                    return Err(Error::InvalidMeasure(format!(
                        "{} nodes but {} weights",
                        nodes.len(),
                        weights.len()
                    )));
                }
                if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
                    return Err(Error::InvalidMeasure(format!("weight {i} is not positive")));
                }
                let total: Rat = weights.iter().sum();
                if !total.is_one() {
                    return Err(Error::InvalidMeasure(format!("weights sum to {total}, not 1")));
                }
                for (i, x) in nodes.iter().enumerate() {
                    if nodes[..i].contains(x) {
                        return Err(Error::InvalidMeasure(format!("node {x} repeated")));
                    }
                }
                Ok(())
            }
            Measure::JacobiWeight { a, b } => {
                let m1 = -Rat::one();
                if *a <= m1 || *b <= m1 {
                    return Err(Error::InvalidMeasure(format!(
                        "jacobi exponents must exceed -1 (a = {a}, b = {b})"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Largest `n` for which the orthogonal polynomial of degree `n` exists.
    pub fn max_degree(&self) -> Option<usize> {
        match self {
            Measure::Discrete { nodes, .. } => Some(nodes.len() - 1),
            Measure::JacobiWeight { .. } => None,
        }
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        match self.max_degree() {
            Some(max) if n > max => Err(Error::InvalidMeasure(format!(
                "a measure with {} nodes supports degrees up to {max}, {n} requested",
                max + 1
            ))),
            _ => Ok(()),
        }
    }
}

/// Monic three-term recurrence `x r_k = r_{k+1} + alpha_k r_k + beta_k r_{k-1}`.
/// `beta[0]` holds the total mass (1).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonicRecurrence {
    pub alpha: Vec<Rat>,
    pub beta: Vec<Rat>,
}

impl MonicRecurrence {
    /// The recurrence of a measure given by its (rational) Jacobi matrix.
    pub fn from_jacobi(a: &[Rat], b: &[Rat]) -> Self {
        let len = b.len().min(a.len() + 1);
        let mut beta = vec![Rat::one()];
        beta.extend(a[..len - 1].iter().map(|x| x * x));
        MonicRecurrence {
            alpha: b[..len].to_vec(),
            beta,
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// `m_0..m_k_max`, read off as `(T^k)_{00}` of the recurrence matrix.
    pub fn moments(&self, k_max: usize) -> Result<Vec<Rat>> {
        let needed = k_max / 2 + 1;
        if self.len() < needed {
            return Err(Error::InsufficientList {
                needed,
                have: self.len(),
            });
        }
        // coordinates of x^k in the monic basis
        let width = needed + 1;
        let mut coords = vec![Rat::zero(); width];
        coords[0] = Rat::one();
        let mut out = Vec::with_capacity(k_max + 1);
        for _ in 0..=k_max {
            out.push(coords[0].clone());
            let mut next = vec![Rat::zero(); width];
            for i in 0..width {
                let mut v = Rat::zero();
                if i > 0 {
                    v += &coords[i - 1];
                }
                if i < self.len() {
                    v += &self.alpha[i] * &coords[i];
                }
                if i + 1 < width && i + 1 < self.len() {
                    v += &self.beta[i + 1] * &coords[i + 1];
                }
                next[i] = v;
            }
            coords = next;
        }
        Ok(out)
    }

    /// Squared norms `||r_n||^2 = beta_0 beta_1 ... beta_n`.
    pub fn squared_norms(&self) -> Vec<Rat> {
        self.beta
            .iter()
            .scan(Rat::one(), |acc, b| {
                *acc *= b;
                Some(acc.clone())
            })
            .collect()
    }

    /// Monic polynomials `r_0..r_depth`; needs `len() >= depth`.
    pub fn monic_polys(&self, depth: usize) -> Result<Vec<Poly>> {
        if depth > self.len() {
            return Err(Error::InsufficientList {
                needed: depth,
                have: self.len(),
            });
        }
        let mut out = vec![Poly::one()];
        for k in 0..depth {
            let mut next = &out[k].shift_up(1) - &out[k].scale(&self.alpha[k]);
            if k > 0 {
                next = &next - &out[k - 1].scale(&self.beta[k]);
            }
            out.push(next);
        }
        Ok(out)
    }

    /// Orthonormal Jacobi matrix `(a, b)` with `a_k = sqrt(beta_{k+1})`.
    pub fn orthonormal_jacobi_f64(&self) -> (Vec<f64>, Vec<f64>) {
        let a = self.beta[1..].iter().map(|b| to_f64(b).sqrt()).collect();
        let b = self.alpha.iter().map(to_f64).collect();
        (a, b)
    }

    /// Orthonormal polynomials `r_0..r_depth` in floating point; needs
    /// `len() > depth`.
    pub fn orthonormal_polys_f64(&self, depth: usize) -> Result<Vec<PolyF>> {
        if depth >= self.len() {
            return Err(Error::InsufficientList {
                needed: depth,
                have: self.len(),
            });
        }
        let norms = self.squared_norms();
        Ok(self
            .monic_polys(depth)?
            .iter()
            .zip(&norms)
            .map(|(p, h)| PolyF::from(p).scale(1.0 / to_f64(h).sqrt()))
            .collect())
    }
}

/// `alpha_0..alpha_{len-1}` and `beta_0..beta_{len-1}` of the measure.
pub fn monic_recurrence(m: &Measure, len: usize) -> Result<MonicRecurrence> {
    m.validate()?;
    match m {
        Measure::JacobiWeight { a, b } => Ok(jacobi_recurrence(a, b, len)),
        Measure::Discrete { nodes, weights } => {
            if len > 0 {
                m.check_degree(len - 1)?;
            }
            Ok(stieltjes(nodes, weights, len))
        }
    }
}

pub(crate) fn jacobi_recurrence(a: &Rat, b: &Rat, len: usize) -> MonicRecurrence {
    let one = Rat::one();
    let two = &one + &one;
    let four = &two * &two;
    let ab = a + b;
    let mut alpha = Vec::with_capacity(len);
    let mut beta = Vec::with_capacity(len);
    for n in 0..len {
        let nn = Rat::from_integer(n.into());
        let s = &two * &nn + &ab;
        alpha.push(if n == 0 {
            (b - a) / (&ab + &two)
        } else {
            (b * b - a * a) / (&s * (&s + &two))
        });
        beta.push(match n {
            0 => one.clone(),
            1 => {
                let t = &ab + &two;
                &four * (&one + a) * (&one + b) / (&t * &t * (&ab + &one + &two))
            }
            _ => {
                &four * &nn * (&nn + a) * (&nn + b) * (&nn + &ab)
                    / (&s * &s * (&s + &one) * (&s - &one))
            }
        });
    }
    MonicRecurrence { alpha, beta }
}

// Stieltjes procedure on a finite node set, exact.
fn stieltjes(nodes: &[Rat], weights: &[Rat], len: usize) -> MonicRecurrence {
    let inner = |u: &[Rat], v: &[Rat]| -> Rat {
        weights
            .iter()
            .zip(u.iter().zip(v))
            .map(|(w, (x, y))| w * x * y)
            .sum()
    };
    let mut prev = vec![Rat::zero(); nodes.len()];
    let mut cur = vec![Rat::one(); nodes.len()];
    let mut prev_norm = Rat::one();
    let mut alpha = Vec::with_capacity(len);
    let mut beta = Vec::with_capacity(len);
    for k in 0..len {
        let norm = inner(&cur, &cur);
        let xcur: Vec<Rat> = nodes.iter().zip(&cur).map(|(x, v)| x * v).collect();
        let ak = inner(&xcur, &cur) / &norm;
        let bk = if k == 0 { norm.clone() } else { &norm / &prev_norm };
        let next: Vec<Rat> = (0..nodes.len())
            .map(|i| &xcur[i] - &ak * &cur[i] - if k == 0 { Rat::zero() } else { &bk * &prev[i] })
            .collect();
        alpha.push(ak);
        beta.push(bk);
        prev = std::mem::replace(&mut cur, next);
        prev_norm = norm;
    }
    MonicRecurrence { alpha, beta }
}

/// Normalised moments `m_0..m_k_max`.
pub fn measure_moments(m: &Measure, k_max: usize) -> Result<Vec<Rat>> {
    m.validate()?;
    match m {
        Measure::Discrete { nodes, weights } => Ok((0..=k_max)
            .map(|k| {
                nodes
                    .iter()
                    .zip(weights)
                    .map(|(x, w)| w * pow(x, k))
                    .sum()
            })
            .collect()),
        Measure::JacobiWeight { a, b } => jacobi_recurrence(a, b, k_max / 2 + 1).moments(k_max),
    }
}

fn pow(x: &Rat, k: usize) -> Rat {
    (0..k).fold(Rat::one(), |acc, _| acc * x)
}

/// `A^n[p] = x^n p + p(0) (c x + d) (x^n - d^n)/(x - d)`.
pub fn apply_a_power(prm: &PerturbationParams, p: &Poly, n: usize) -> Poly {
    let xn = Poly::monomial(n);
    let p0 = p.coeff(0);
    let head = &xn * p;
    if p0.is_zero() {
        return head;
    }
    let dd = xn.divided_difference_at(&prm.d);
    &head + &(&prm.tail() * &dd).scale(&p0)
}

/// `u(A)[1] = (c+1) u + (c+1) d (u(x) - u(d))/(x - d) - c u(d)`.
pub fn u_of_a_at_one(prm: &PerturbationParams, u: &Poly) -> Poly {
    let c1 = prm.c1();
    let ud = u.eval(&prm.d);
    let lead = u.scale(&c1);
    let dd = u.divided_difference_at(&prm.d).scale(&(&c1 * &prm.d));
    &(&lead + &dd) - &Poly::constant(&prm.c * ud)
}

/// `p_n = r_n/(c+1) - d/(c+1) (r_n(x) - r_n(0))/x + c/(c+1) r_n(0)`.
pub fn p_from_r(prm: &PerturbationParams, r: &[Poly]) -> Vec<Poly> {
    let inv = prm.c1().recip();
    let d_coef = -(&prm.d * &inv);
    let c_coef = &prm.c * &inv;
    r.iter()
        .map(|rn| {
            let r0 = rn.coeff(0);
            let dd = rn.divided_difference_at(&Rat::zero()).scale(&d_coef);
            &(&rn.scale(&inv) + &dd) + &Poly::constant(&c_coef * r0)
        })
        .collect()
}

/// Inverse of [`p_from_r`]; each entry is `p_n(A)[1]`.
pub fn r_from_p(prm: &PerturbationParams, p: &[Poly]) -> Vec<Poly> {
    p.iter().map(|pn| u_of_a_at_one(prm, pn)).collect()
}

/// [`p_from_r`] for floating-point input.
pub fn p_from_r_f64(prm: &PerturbationParams, r: &[PolyF]) -> Vec<PolyF> {
    let c = to_f64(&prm.c);
    let d = to_f64(&prm.d);
    r.iter()
        .map(|rn| {
            let r0 = rn.coeff(0);
            let head = rn.scale(1.0 / (c + 1.0));
            let dd = rn.divided_difference_at(0.0).scale(-d / (c + 1.0));
            &(&head + &dd) + &PolyF::constant(c * r0 / (c + 1.0))
        })
        .collect()
}

fn bracket_f64(prm: &PerturbationParams, p: &PolyF) -> PolyF {
    let c = to_f64(&prm.c);
    let d = to_f64(&prm.d);
    let pd = p.eval(d);
    let head = p.scale(c + 1.0);
    let dd = p.divided_difference_at(d).scale((c + 1.0) * d);
    &(&head + &dd) - &PolyF::constant(c * pd)
}

/// Coefficients of a three-term recurrence
/// `x r_n = lower_n r_{n-1} + diag_n r_n + upper_n r_{n+1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ThreeTerm {
    pub lower: Vec<Rat>,
    pub diag: Vec<Rat>,
    pub upper: Vec<Rat>,
}

impl ThreeTerm {
    /// Orthonormal form: `lower_n = a_{n-1}`, `diag_n = b_n`, `upper_n = a_n`.
    pub fn symmetric(a: &[Rat], b: &[Rat]) -> Self {
        let mut lower = vec![Rat::zero()];
        lower.extend(a.iter().cloned());
        ThreeTerm {
            lower,
            diag: b.to_vec(),
            upper: a.to_vec(),
        }
    }
}

impl From<&MonicRecurrence> for ThreeTerm {
    fn from(rec: &MonicRecurrence) -> Self {
        let mut lower = vec![Rat::zero()];
        lower.extend(rec.beta.iter().skip(1).cloned());
        ThreeTerm {
            lower,
            diag: rec.alpha.clone(),
            upper: vec![Rat::one(); rec.len()],
        }
    }
}

/// Residual of
/// `x p_n - p_n(d)/(c+1) (c x + d) - a_{n-1} p_{n-1} - b_n p_n - a_n p_{n+1}`.
pub fn recurrence3_residual(
    prm: &PerturbationParams,
    p: &[Poly],
    a: &[Rat],
    b: &[Rat],
    n: usize,
) -> Result<Poly> {
    recurrence3_residual_with(prm, p, &ThreeTerm::symmetric(a, b), n)
}

/// [`recurrence3_residual`] with arbitrary three-term coefficients (the
/// identity is linear, so monic families work the same way).
pub fn recurrence3_residual_with(
    prm: &PerturbationParams,
    p: &[Poly],
    coeffs: &ThreeTerm,
    n: usize,
) -> Result<Poly> {
    let have = p
        .len()
        .min(coeffs.diag.len() + 1)
        .min(coeffs.upper.len() + 1)
        .min(coeffs.lower.len() + 1);
    if have < n + 2 {
        return Err(Error::IndexOutOfRange {
            index: n,
            needed: n + 1,
            have: have.saturating_sub(1),
        });
    }
    let pd = p[n].eval(&prm.d);
    let mut res = &p[n].shift_up(1) - &prm.tail().scale(&(pd / prm.c1()));
    if n > 0 {
        res = &res - &p[n - 1].scale(&coeffs.lower[n]);
    }
    res = &res - &p[n].scale(&coeffs.diag[n]);
    res = &res - &p[n + 1].scale(&coeffs.upper[n]);
    Ok(res)
}

/// How [`orthonormality_check`] normalises its output.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrthoMode {
    /// Gram matrix minus the identity.
    Orthonormal,
    /// The raw Gram matrix; its diagonal holds `||r_n||^2` for monic input.
    Monic,
}

/// `defect[n][m] = int B_n B_m dsigma - delta_{nm}` where
/// `B_n = (c+1) p_n + (c+1) d (p_n(x) - p_n(d))/(x - d) - c p_n(d)`.
pub fn orthonormality_check(
    prm: &PerturbationParams,
    m: &Measure,
    p: &[Poly],
    nmax: usize,
    mode: OrthoMode,
) -> Result<Vec<Vec<Rat>>> {
    m.validate()?;
    m.check_degree(nmax)?;
    let brackets = brackets_exact(prm, p, nmax)?;
    let top = brackets.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let moments = measure_moments(m, 2 * top)?;
    gram(&brackets, &moments, mode)
}

/// [`orthonormality_check`] against an explicit moment list.
pub fn orthonormality_from_moments(
    prm: &PerturbationParams,
    moments: &[Rat],
    p: &[Poly],
    nmax: usize,
    mode: OrthoMode,
) -> Result<Vec<Vec<Rat>>> {
    let brackets = brackets_exact(prm, p, nmax)?;
    gram(&brackets, moments, mode)
}

fn brackets_exact(prm: &PerturbationParams, p: &[Poly], nmax: usize) -> Result<Vec<Poly>> {
    if p.len() < nmax + 1 {
        return Err(Error::InsufficientList {
            needed: nmax,
            have: p.len(),
        });
    }
    Ok(r_from_p(prm, &p[..=nmax]))
}

fn gram(brackets: &[Poly], moments: &[Rat], mode: OrthoMode) -> Result<Vec<Vec<Rat>>> {
    let top = brackets.iter().filter_map(Poly::degree).max().unwrap_or(0);
    if moments.len() < 2 * top + 1 {
        return Err(Error::InsufficientMoments {
            needed: 2 * top,
            have: moments.len().saturating_sub(1),
        });
    }
    let integral = |u: &Poly, v: &Poly| -> Rat {
        let mut acc = Rat::zero();
        for (i, x) in u.coeffs().iter().enumerate() {
            for (j, y) in v.coeffs().iter().enumerate() {
                acc += x * y * &moments[i + j];
            }
        }
        acc
    };
    Ok(brackets
        .iter()
        .enumerate()
        .map(|(n, u)| {
            brackets
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    let g = integral(u, v);
                    if mode == OrthoMode::Orthonormal && n == k {
                        g - Rat::one()
                    } else {
                        g
                    }
                })
                .collect()
        })
        .collect())
}

/// Gauss rule with `n` nodes for the measure (Golub–Welsch for the Jacobi
/// weight; the nodes themselves for a discrete measure).
pub fn quadrature(m: &Measure, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    m.validate()?;
    match m {
        Measure::Discrete { nodes, weights } => Ok((
            nodes.iter().map(to_f64).collect(),
            weights.iter().map(to_f64).collect(),
        )),
        Measure::JacobiWeight { .. } => {
            let rec = monic_recurrence(m, n)?;
            let (a, b) = rec.orthonormal_jacobi_f64();
            let t = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
                0 => b[i],
                1 => a[i.min(j)],
                _ => 0.0,
            });
            let eig = SymmetricEigen::new(t);
            let mut rule: Vec<(f64, f64)> = (0..n)
                .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
                .collect();
            rule.sort_by(|x, y| x.0.total_cmp(&y.0));
            Ok(rule.into_iter().unzip())
        }
    }
}

/// Floating-point orthonormality defects for square-root-normalised input,
/// integrated by Gauss quadrature (exact up to rounding for these degrees).
pub fn orthonormality_check_f64(
    prm: &PerturbationParams,
    m: &Measure,
    p: &[PolyF],
    nmax: usize,
) -> Result<Vec<Vec<f64>>> {
    m.validate()?;
    m.check_degree(nmax)?;
    if p.len() < nmax + 1 {
        return Err(Error::InsufficientList {
            needed: nmax,
            have: p.len(),
        });
    }
    let brackets: Vec<PolyF> = p[..=nmax].iter().map(|q| bracket_f64(prm, q)).collect();
    let (nodes, weights) = quadrature(m, nmax + 2)?;
    let values: Vec<Vec<f64>> = brackets
        .iter()
        .map(|q| nodes.iter().map(|&x| q.eval(x)).collect())
        .collect();
    Ok((0..=nmax)
        .map(|n| {
            (0..=nmax)
                .map(|k| {
                    let g: f64 = weights
                        .iter()
                        .enumerate()
                        .map(|(i, w)| w * values[n][i] * values[k][i])
                        .sum();
                    g - if n == k { 1.0 } else { 0.0 }
                })
                .collect()
        })
        .collect())
}

/// Floating-point pencil, used where `J3` carries square roots.
#[derive(Clone, PartialEq, Debug)]
pub struct PencilF {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub alpha_j5: Vec<f64>,
    pub beta_j5: Vec<f64>,
    pub gamma: Vec<f64>,
    pub alpha_const: f64,
    pub beta_const: f64,
}

impl PencilF {
    /// `p_0..p_depth` by the fourth-order recurrence.
    pub fn associated_polynomials(&self, depth: usize) -> Result<Vec<PolyF>> {
        let rows = depth.saturating_sub(1);
        let have = self
            .gamma
            .len()
            .min(self.beta_j5.len())
            .min(self.alpha_j5.len());
        if have < rows {
            return Err(Error::InsufficientPrefix {
                field: "gamma",
                needed: rows,
                have,
            });
        }
        let at = |v: &[f64], k: isize| -> f64 {
            if k < 0 {
                0.0
            } else {
                v.get(k as usize).copied().unwrap_or(0.0)
            }
        };
        let mut out = vec![PolyF::constant(1.0)];
        if depth == 0 {
            return Ok(out);
        }
        out.push(PolyF::linear(self.beta_const, self.alpha_const));
        for n in 0..rows {
            let i = n as isize;
            let mut acc = PolyF::zero();
            if n >= 2 {
                acc = &acc + &out[n - 2].scale(at(&self.gamma, i - 2));
            }
            if n >= 1 {
                let q = &out[n - 1];
                acc = &acc + &(&q.scale(at(&self.beta_j5, i - 1)) - &q.mul_x().scale(at(&self.a, i - 1)));
            }
            acc = &acc + &(&out[n].scale(self.alpha_j5[n]) - &out[n].mul_x().scale(at(&self.b, i)));
            acc = &acc + &(&out[n + 1].scale(self.beta_j5[n]) - &out[n + 1].mul_x().scale(at(&self.a, i)));
            out.push(acc.scale(-1.0 / self.gamma[n]));
        }
        Ok(out)
    }
}

/// The pencil `(J3, J3^2, alpha, beta)` for the measure perturbed by `A`:
/// `J3` is the orthonormal Jacobi matrix of the measure and
/// `alpha = 1/((1+c) sqrt(D1))`, `beta = -((1+c) m_1 + d)/((1+c) sqrt(D1))`
/// with `D1 = m_0 m_2 - m_1^2`.
pub fn build_pencil_from_perturbation(
    prm: &PerturbationParams,
    m: &Measure,
    depth: usize,
) -> Result<PencilF> {
    m.validate()?;
    let len = depth.max(1);
    m.check_degree(len)?;
    let moments = measure_moments(m, 2)?;
    let delta1 = &moments[0] * &moments[2] - &moments[1] * &moments[1];
    let rec = monic_recurrence(m, len + 1)?;
    let (a, b) = rec.orthonormal_jacobi_f64();
    let a = a[..len].to_vec();
    let b = b[..len].to_vec();
    let rows = len - 1;
    let ai = |k: isize| if k < 0 { 0.0 } else { a[k as usize] };
    let alpha_j5 = (0..rows)
        .map(|n| ai(n as isize - 1).powi(2) + b[n] * b[n] + a[n] * a[n])
        .collect();
    let beta_j5 = (0..rows).map(|n| a[n] * (b[n] + b[n + 1])).collect();
    let gamma = (0..rows).map(|n| a[n] * a[n + 1]).collect();
    let c1 = to_f64(&prm.c1());
    let root = to_f64(&delta1).sqrt();
    let alpha_const = 1.0 / (c1 * root);
    let beta_const = -(c1 * to_f64(&moments[1]) + to_f64(&prm.d)) / (c1 * root);
    Ok(PencilF {
        a,
        b,
        alpha_j5,
        beta_j5,
        gamma,
        alpha_const,
        beta_const,
    })
}

/// Exact version of [`build_pencil_from_perturbation`] for a measure given
/// by a rational orthonormal Jacobi matrix `(a, b)`; then `sqrt(D1) = a_0`
/// and `m_1 = b_0`.
pub fn pencil_from_jacobi_matrix(prm: &PerturbationParams, a: &[Rat], b: &[Rat]) -> Result<PencilData> {
    let mut p = degenerate_from_jacobi(a, b)?;
    let c1 = prm.c1();
    let den = &c1 * &a[0];
    p.alpha_const = den.recip();
    p.beta_const = -(&c1 * &b[0] + &prm.d) / den;
    Ok(p)
}

/// Orthonormal polynomials `r_0..r_depth` of a rational Jacobi matrix.
pub fn orthonormal_from_jacobi(a: &[Rat], b: &[Rat], depth: usize) -> Result<Vec<Poly>> {
    let have = a.len().min(b.len());
    if have < depth {
        return Err(Error::InsufficientList {
            needed: depth,
            have,
        });
    }
    if let Some(index) = a[..depth].iter().position(|x| !x.is_positive()) {
        return Err(Error::NonpositiveA { index });
    }
    let mut out = vec![Poly::one()];
    for n in 0..depth {
        let mut next = &out[n].shift_up(1) - &out[n].scale(&b[n]);
        if n > 0 {
            next = &next - &out[n - 1].scale(&a[n - 1]);
        }
        out.push(next.scale(&a[n].recip()));
    }
    Ok(out)
}

/// `S(x^m, x^n) = int A^m[1] A^n[1] dsigma` for `m, n <= max_degree`, given
/// the moments of the measure.
pub fn perturbation_moment_table(
    prm: &PerturbationParams,
    moments: &[Rat],
    max_degree: usize,
) -> Result<MomentTable> {
    let powers: Vec<Poly> = (0..=max_degree)
        .map(|k| apply_a_power(prm, &Poly::one(), k))
        .collect();
    let rows = gram(&powers, moments, OrthoMode::Monic)?;
    MomentTable::from_moments(rows)
}
