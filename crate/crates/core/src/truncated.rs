//! Truncated pencils `J5[j] - x J3[j]` (leading `j x j` blocks).

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{
    det_rat, polymat_det, roots_with_multiplicity, to_f64, ComplexF, Poly, PolyMatrix, Rat,
};
use crate::pencil::{associated_polynomials, shifted_solutions, PencilData, ShiftOrder};

/// Two roots closer than this are one eigenvalue.
pub const CLUSTER_TOL: f64 = 1e-9;
/// Relative residual bound for reported eigenpairs.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Bound on `|[J3 x', x'']_C|` (and the sesquilinear pairing) for unit vectors.
pub const PAIRING_TOL: f64 = 1e-8;
/// Bound on `|im lambda|` when `J3[j]` is positive definite.
pub const REAL_TOL: f64 = 1e-9;

#[derive(Clone, PartialEq, Debug)]
pub struct EigenPair {
    pub value: ComplexF,
    /// Algebraic multiplicity as a root of `D_j`.
    pub multiplicity: usize,
    /// Unit-norm basis of the eigenspace (at most two vectors).
    pub vectors: Vec<Vec<ComplexF>>,
    /// Largest `||(J5 - value J3) x|| / ||x||` over `vectors`.
    pub residual: f64,
}

#[derive(Clone, PartialEq, Debug)]
pub struct TruncatedSpectrum {
    pub j: usize,
    pub charpoly: Poly,
    pub eigenpairs: Vec<EigenPair>,
}

impl TruncatedSpectrum {
    /// Eigenvalues repeated by multiplicity.
    pub fn eigenvalues(&self) -> Vec<ComplexF> {
        self.eigenpairs
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }
}

fn require(field: &'static str, have: usize, needed: usize) -> Result<()> {
    if have < needed {
        Err(Error::InsufficientPrefix {
            field,
            needed,
            have,
        })
    } else {
        Ok(())
    }
}

fn check_block(p: &PencilData, j: usize) -> Result<()> {
    require("a", p.a.len(), j.saturating_sub(1))?;
    require("b", p.b.len(), j)?;
    require("alpha_j5", p.alpha_j5.len(), j)?;
    require("beta_j5", p.beta_j5.len(), j.saturating_sub(1))?;
    require("gamma", p.gamma.len(), j.saturating_sub(2))
}

/// The matrix `J5[j] - x J3[j]`.
pub fn truncated_pencil(p: &PencilData, j: usize) -> Result<PolyMatrix> {
    check_block(p, j)?;
    let j3 = p.j3_block(j);
    let j5 = p.j5_block(j);
    Ok(PolyMatrix::from_fn(j, j, |r, c| {
        Poly::linear(j5[r][c].clone(), -j3[r][c].clone())
    }))
}

/// `D_j(x) = det(J5[j] - x J3[j])`, with `D_0 = 1`.
pub fn char_poly(p: &PencilData, j: usize) -> Result<Poly> {
    polymat_det(&truncated_pencil(p, j)?)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factorization {
    pub c: Rat,
    pub ok: bool,
    pub charpoly: Poly,
    /// `p_j u_{j+1} - p_{j+1} u_j`
    pub wronskian: Poly,
}

/// `p_j u_{j+1} - p_{j+1} u_j`.
pub fn wronskian(p: &PencilData, j: usize) -> Result<Poly> {
    let ps = associated_polynomials(p, j + 1)?;
    let us = shifted_solutions(p, ShiftOrder::Single, j + 1)?;
    Ok(&(&ps[j] * &us[j + 1]) - &(&ps[j + 1] * &us[j]))
}

/// Finds `c_j` with `D_j = c_j (p_j u_{j+1} - p_{j+1} u_j)` by matching the
/// coefficient at `deg D_j`, then checks the identity exactly.
pub fn factorization_check(p: &PencilData, j: usize) -> Result<Factorization> {
    let charpoly = char_poly(p, j)?;
    let w = wronskian(p, j)?;
    if w.is_zero() {
        return Err(Error::ZeroWronskian { j });
    }
    let c = match charpoly.degree() {
        None => Rat::zero(),
        Some(deg) => {
            let wc = w.coeff(deg);
            if wc.is_zero() {
                Rat::zero()
            } else {
                charpoly.coeff(deg) / wc
            }
        }
    };
    let ok = w.scale(&c) == charpoly;
    Ok(Factorization {
        c,
        ok,
        charpoly,
        wronskian: w,
    })
}

fn to_cmatrix(m: &[Vec<Rat>]) -> DMatrix<Complex64> {
    let n = m.len();
    DMatrix::from_fn(n, n, |i, k| Complex64::new(to_f64(&m[i][k]), 0.0))
}

fn norm(v: &[ComplexF]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalized(v: Vec<ComplexF>) -> Vec<ComplexF> {
    let n = norm(&v);
    if n == 0.0 {
        v
    } else {
        v.into_iter().map(|z| z / n).collect()
    }
}

fn rel_residual(j5: &DMatrix<Complex64>, j3: &DMatrix<Complex64>, lam: ComplexF, x: &[ComplexF]) -> f64 {
    let v = nalgebra::DVector::from_column_slice(x);
    let r = j5 * &v - (j3 * &v) * lam;
    r.norm() / v.norm()
}

/// Eigenvalues of the truncated pencil with eigenvectors built from the
/// span representation `x = c1 (p_0..p_{j-1}) + c2 (u_0..u_{j-1})`, where
/// `(c1, c2)` spans the kernel of `[[p_j, u_j], [p_{j+1}, u_{j+1}]]`.
pub fn pencil_eigs(p: &PencilData, j: usize) -> Result<TruncatedSpectrum> {
    let charpoly = char_poly(p, j)?;
    if charpoly.is_zero() {
        return Err(Error::SingularPencil { j });
    }
    if charpoly.degree() == Some(0) {
        return Ok(TruncatedSpectrum {
            j,
            charpoly,
            eigenpairs: Vec::new(),
        });
    }
    let ps = associated_polynomials(p, j + 1)?;
    let us = shifted_solutions(p, ShiftOrder::Single, j + 1)?;
    let j3 = to_cmatrix(&p.j3_block(j));
    let j5 = to_cmatrix(&p.j5_block(j));

    let mut clusters: Vec<(ComplexF, usize)> = Vec::new();
    for (z, m) in roots_with_multiplicity(&charpoly)? {
        match clusters.iter_mut().find(|(c, _)| (*c - z).norm() <= CLUSTER_TOL) {
            Some(c) => c.1 += m,
            None => clusters.push((z, m)),
        }
    }

    let mut eigenpairs = Vec::with_capacity(clusters.len());
    for (lam, multiplicity) in clusters {
        let vp: Vec<ComplexF> = ps[..j].iter().map(|q| q.eval_complex(lam)).collect();
        let vu: Vec<ComplexF> = us[..j].iter().map(|q| q.eval_complex(lam)).collect();
        let rp = rel_residual(&j5, &j3, lam, &vp);
        let ru = if norm(&vu) > 0.0 {
            rel_residual(&j5, &j3, lam, &vu)
        } else {
            f64::INFINITY
        };

        let mut vectors = if multiplicity >= 2 && rp <= RESIDUAL_TOL && ru <= RESIDUAL_TOL {
            vec![normalized(vp), normalized(vu)]
        } else {
            let k = [
                [ps[j].eval_complex(lam), us[j].eval_complex(lam)],
                [ps[j + 1].eval_complex(lam), us[j + 1].eval_complex(lam)],
            ];
            let row = if k[0][0].norm() + k[0][1].norm() >= k[1][0].norm() + k[1][1].norm() {
                k[0]
            } else {
                k[1]
            };
            let (c1, c2) = if row[0].norm() + row[1].norm() == 0.0 {
                (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            } else {
                (-row[1], row[0])
            };
            let x: Vec<ComplexF> = vp.iter().zip(&vu).map(|(a, b)| c1 * a + c2 * b).collect();
            vec![normalized(x)]
        };

        let mut residual = vectors
            .iter()
            .map(|x| rel_residual(&j5, &j3, lam, x))
            .fold(0.0, f64::max);
        if !(residual <= RESIDUAL_TOL) {
            // span route lost accuracy; take the smallest right singular vector
            let x = null_vector(&(&j5 - &j3 * lam));
            residual = rel_residual(&j5, &j3, lam, &x);
            vectors = vec![x];
        }
        if !(residual <= RESIDUAL_TOL) {
            return Err(Error::EigenResidual {
                value: format!("{lam}"),
                residual,
            });
        }
        eigenpairs.push(EigenPair {
            value: lam,
            multiplicity,
            vectors,
            residual,
        });
    }
    Ok(TruncatedSpectrum {
        j,
        charpoly,
        eigenpairs,
    })
}

fn null_vector(m: &DMatrix<Complex64>) -> Vec<ComplexF> {
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, &s)| if s < best.1 { (i, s) } else { best });
    normalized(v_t.row(idx).iter().map(|z| z.conj()).collect())
}

fn j3_apply(x: &[ComplexF], j3: &[Vec<Rat>]) -> Result<Vec<ComplexF>> {
    if j3.len() != x.len() || j3.iter().any(|r| r.len() != x.len()) {
        return Err(Error::DimensionMismatch {
            expected: j3.len(),
            got: x.len(),
        });
    }
    Ok(j3
        .iter()
        .map(|row| row.iter().zip(x).map(|(a, xi)| xi * to_f64(a)).sum())
        .collect())
}

/// `[J3 x, y]_C = sum_i (J3 x)_i y_i` (bilinear: `y` is not conjugated).
pub fn bilinear_form_c(x: &[ComplexF], y: &[ComplexF], j3: &[Vec<Rat>]) -> Result<ComplexF> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let jx = j3_apply(x, j3)?;
    Ok(jx.iter().zip(y).map(|(a, b)| a * b).sum())
}

/// `(J3 x, y) = sum_i (J3 x)_i conj(y_i)`.
pub fn sesquilinear_form(x: &[ComplexF], y: &[ComplexF], j3: &[Vec<Rat>]) -> Result<ComplexF> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    let jx = j3_apply(x, j3)?;
    Ok(jx.iter().zip(y).map(|(a, b)| a * b.conj()).sum())
}

#[derive(Clone, PartialEq, Debug)]
pub struct PairCheck {
    /// Indices into `TruncatedSpectrum::eigenpairs`.
    pub first: usize,
    pub second: usize,
    pub bilinear: ComplexF,
    pub sesquilinear: ComplexF,
    /// `lambda' = conj(lambda'')`: the sesquilinear pairing is not forced to vanish.
    pub conjugate_pair: bool,
    pub bilinear_ok: bool,
    /// `None` when `conjugate_pair`.
    pub sesquilinear_ok: Option<bool>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct OrthogonalityReport {
    pub pairs: Vec<PairCheck>,
    pub j3_positive_definite: bool,
    pub max_abs_imag: f64,
    /// Only asserted for a positive-definite `J3[j]`.
    pub all_real: Option<bool>,
}

impl OrthogonalityReport {
    pub fn passes(&self) -> bool {
        self.pairs
            .iter()
            .all(|p| p.bilinear_ok && p.sesquilinear_ok != Some(false))
            && self.all_real != Some(false)
    }
}

/// Positive definiteness through leading principal minors.
pub fn is_positive_definite(m: &[Vec<Rat>]) -> Result<bool> {
    for k in 1..=m.len() {
        let block: Vec<Vec<Rat>> = m[..k].iter().map(|r| r[..k].to_vec()).collect();
        if !det_rat(&block)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both pairings for every pair of eigenvectors with distinct eigenvalues,
/// plus the reality check for a positive-definite `J3[j]`.
pub fn orthogonality_report(spec: &TruncatedSpectrum, p: &PencilData) -> Result<OrthogonalityReport> {
    let j3 = p.j3_block(spec.j);
    let mut pairs = Vec::new();
    for (i, e1) in spec.eigenpairs.iter().enumerate() {
        for (k, e2) in spec.eigenpairs.iter().enumerate().skip(i + 1) {
            let conjugate_pair = (e1.value - e2.value.conj()).norm() <= CLUSTER_TOL;
            for x in &e1.vectors {
                for y in &e2.vectors {
                    let bilinear = bilinear_form_c(x, y, &j3)?;
                    let sesquilinear = sesquilinear_form(x, y, &j3)?;
                    pairs.push(PairCheck {
                        first: i,
                        second: k,
                        bilinear,
                        sesquilinear,
                        conjugate_pair,
                        bilinear_ok: bilinear.norm() <= PAIRING_TOL,
                        sesquilinear_ok: (!conjugate_pair)
                            .then_some(sesquilinear.norm() <= PAIRING_TOL),
                    });
                }
            }
        }
    }
    let j3_positive_definite = is_positive_definite(&j3)?;
    let max_abs_imag = spec
        .eigenpairs
        .iter()
        .map(|e| e.value.im.abs())
        .fold(0.0, f64::max);
    Ok(OrthogonalityReport {
        pairs,
        j3_positive_definite,
        max_abs_imag,
        all_real: j3_positive_definite.then_some(max_abs_imag <= REAL_TOL),
    })
}
