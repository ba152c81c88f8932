use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly::Poly;
use crate::error::{Error, Result};

pub type ComplexF = Complex64;

const ORDER_GRID: f64 = 1e-12;
const POLISH_STEPS: usize = 8;

/// All complex roots of `p`, with multiplicity, sorted by `(re, im)`.
///
/// Multiplicities are found exactly by square-free factorisation over the
/// rationals; each square-free factor is then solved through the eigenvalues
/// of its companion matrix and polished by a few Newton steps.
pub fn roots_float(p: &Poly) -> Result<Vec<ComplexF>> {
    if p.is_zero() {
        return Err(Error::UndefinedRoots);
    }
    let mut roots = Vec::new();
    for (factor, mult) in p.square_free_decomposition() {
        for z in simple_roots(&factor) {
            roots.extend(std::iter::repeat_n(z, mult));
        }
    }
    sort_roots(&mut roots);
    Ok(roots)
}

/// Distinct roots with their exact multiplicities.
pub fn roots_with_multiplicity(p: &Poly) -> Result<Vec<(ComplexF, usize)>> {
    if p.is_zero() {
        return Err(Error::UndefinedRoots);
    }
    let mut out: Vec<(ComplexF, usize)> = p
        .square_free_decomposition()
        .into_iter()
        .flat_map(|(factor, mult)| {
            simple_roots(&factor)
                .into_iter()
                .map(move |z| (z, mult))
        })
        .collect();
    out.sort_by(|a, b| root_key(a.0).partial_cmp(&root_key(b.0)).unwrap());
    Ok(out)
}

pub fn sort_roots(roots: &mut [ComplexF]) {
    roots.sort_by(|a, b| root_key(*a).partial_cmp(&root_key(*b)).unwrap());
}

fn root_key(z: ComplexF) -> (f64, f64) {
    let snap = |v: f64| {
        let r = (v / ORDER_GRID).round() * ORDER_GRID;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    };
    (snap(z.re), snap(z.im))
}

// Roots of a square-free polynomial of positive degree.
fn simple_roots(p: &Poly) -> Vec<ComplexF> {
    let monic = p.monic().to_f64_coeffs();
    let deg = monic.len() - 1;
    if deg == 1 {
        return vec![ComplexF::new(-monic[0], 0.0)];
    }
    let companion = DMatrix::<f64>::from_fn(deg, deg, |i, j| {
        if j == deg - 1 {
            -monic[i]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let dp = p.derivative();
    companion
        .complex_eigenvalues()
        .iter()
        .map(|&z| polish(p, &dp, z))
        .collect()
}

fn polish(p: &Poly, dp: &Poly, mut z: ComplexF) -> ComplexF {
    let mut best = p.eval_complex(z).norm();
    for _ in 0..POLISH_STEPS {
        let d = dp.eval_complex(z);
        if d.norm() == 0.0 {
            break;
        }
        let cand = z - p.eval_complex(z) / d;
        let val = p.eval_complex(cand).norm();
        if !cand.re.is_finite() || !cand.im.is_finite() || val >= best {
            break;
        }
        z = cand;
        best = val;
    }
    z
}
