//! Polynomial solutions of the fourth-order equation
//!
//! ```text
//! c(t) y'''' + d(t) y''' + f(t) y'' + g(t) y' + h y + lam (phi(t) y'' + psi(t) y' + theta y) = 0
//! ```
//!
//! with `deg c <= 4, deg d <= 3, deg f <= 2, deg g <= 1, deg phi <= 2, deg psi <= 1`
//! and constant `h`, `theta`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactcore::{Poly, Rat};
use crate::perturb::jacobi_recurrence;

/// Coefficient record; each array is indexed by the power of `t`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OdeCoeffs {
    pub c: [Rat; 5],
    pub d: [Rat; 4],
    pub f: [Rat; 3],
    pub g: [Rat; 2],
    pub h: Rat,
    pub phi: [Rat; 3],
    pub psi: [Rat; 2],
    pub theta: Rat,
}

fn r(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// The coefficients for which the perturbed Jacobi polynomials (`c = 0`,
/// `d = 1`) are the polynomial solutions, with `lam_n = n(n + a + b + 1)`.
pub fn jacobi_ode_coeffs(a: &Rat, b: &Rat) -> OdeCoeffs {
    let ab = a + b;
    OdeCoeffs {
        c: [r(0), r(-1), r(1), r(1), r(-1)],
        d: [r(-4), a - b + r(4), r(2) * b + r(10), -(&ab + r(10))],
        f: [r(3) * a - r(3) * b, a + r(9) * b + r(22), r(-6) * (&ab + r(4))],
        g: [r(2) * a + r(6) * b + r(8), r(-6) * (&ab + r(2))],
        h: r(0),
        phi: [r(0), r(-1), r(1)],
        psi: [r(-2), r(4)],
        theta: r(2),
    }
}

// k (k-1) ... (k-m+1)
fn falling(k: usize, m: usize) -> Rat {
    (0..m).fold(Rat::one(), |acc, i| {
        if k < i {
            Rat::zero()
        } else {
            acc * r((k - i) as i64)
        }
    })
}

/// Entry `(j, j + s)` of the linear system, `s = 0..=4`, split into its
/// `lam`-free part and its `lam` coefficient.
fn band_entry(co: &OdeCoeffs, j: usize, s: usize) -> (Rat, Rat) {
    let k = j + s;
    // derivative order m pairs with coefficient index m - s
    let pick = |coeffs: &[Rat], m: usize| -> Rat {
        if m < s {
            return Rat::zero();
        }
        coeffs
            .get(m - s)
            .map(|c| c * falling(k, m))
            .unwrap_or_else(Rat::zero)
    };
    let free = pick(&co.c, 4) + pick(&co.d, 3) + pick(&co.f, 2) + pick(&co.g, 1) + pick(std::slice::from_ref(&co.h), 0);
    let with_lam = pick(&co.phi, 2) + pick(&co.psi, 1) + pick(std::slice::from_ref(&co.theta), 0);
    (free, with_lam)
}

/// The `(n+1) x (n+1)` system whose kernel is the space of coefficient
/// vectors `(mu_0..mu_n)` of degree-`n` polynomial solutions at `lam`.
pub fn build_system(co: &OdeCoeffs, n: usize, lam: &Rat) -> Vec<Vec<Rat>> {
    (0..=n)
        .map(|j| {
            (0..=n)
                .map(|k| {
                    if k < j || k > j + 4 {
                        Rat::zero()
                    } else {
                        let (free, with_lam) = band_entry(co, j, k - j);
                        free + with_lam * lam
                    }
                })
                .collect()
        })
        .collect()
}

/// The eigenvalue fixed by the degree-`n` equation, and the solution
/// coefficients normalised to `mu_n = 1`.
pub fn solve_polynomial_eigen(co: &OdeCoeffs, n: usize) -> Result<(Rat, Vec<Rat>)> {
    let (free, with_lam) = band_entry(co, n, 0);
    if with_lam.is_zero() {
        return Err(Error::LambdaIndeterminate);
    }
    let lam = -free / with_lam;
    let sys = build_system(co, n, &lam);
    let mut mu = vec![Rat::zero(); n + 1];
    mu[n] = Rat::one();
    for j in (0..n).rev() {
        let pivot = &sys[j][j];
        if pivot.is_zero() {
            return Err(Error::DegenerateDiagonal { j });
        }
        let rest: Rat = (j + 1..=n.min(j + 4)).map(|k| &sys[j][k] * &mu[k]).sum();
        mu[j] = -rest / pivot;
    }
    Ok((lam, mu))
}

/// Left-hand side of the equation applied to `y`.
pub fn verify_ode(co: &OdeCoeffs, lam: &Rat, y: &Poly) -> Poly {
    let poly = |c: &[Rat]| Poly::from_coeffs(c.to_vec());
    let y1 = y.derivative();
    let y2 = y1.derivative();
    let y3 = y2.derivative();
    let y4 = y3.derivative();
    let free = &(&(&(&(&poly(&co.c) * &y4) + &(&poly(&co.d) * &y3)) + &(&poly(&co.f) * &y2))
        + &(&poly(&co.g) * &y1))
        + &y.scale(&co.h);
    let with_lam = &(&(&poly(&co.phi) * &y2) + &(&poly(&co.psi) * &y1)) + &y.scale(&co.theta);
    &free + &with_lam.scale(lam)
}

/// `r_n - (r_n(t) - r_n(0))/t` for the monic Jacobi polynomial `r_n` with
/// weight `(1-t)^a (1+t)^b`.
pub fn perturbed_jacobi(a: &Rat, b: &Rat, n: usize) -> Result<Poly> {
    let m1 = -Rat::one();
    if *a <= m1 || *b <= m1 {
        return Err(Error::InvalidMeasure(format!(
            "jacobi exponents must exceed -1 (a = {a}, b = {b})"
        )));
    }
    let rn = jacobi_recurrence(a, b, n).monic_polys(n)?.pop().expect("r_0 always present");
    Ok(&rn - &rn.divided_difference_at(&Rat::zero()))
}
