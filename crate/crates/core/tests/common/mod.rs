#![allow(dead_code)]

use num_traits::{One, Zero};
use pencil_core::exactcore::{int, rat, Poly, Rat};
use pencil_core::pencil::{degenerate_from_jacobi, PencilData};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_1234;

pub fn rng() -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(SEED)
}

/// Random rational in `[lo, hi]` with denominator at most 6.
pub fn rand_rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rat {
    let den = rng.gen_range(1..=6);
    rat(rng.gen_range(lo * den..=hi * den), den)
}

/// Random rational in `(0, hi]`.
pub fn rand_pos(rng: &mut ChaCha8Rng, hi: i64) -> Rat {
    let den = rng.gen_range(1..=6);
    rat(rng.gen_range(1..=hi * den), den)
}

pub fn rand_poly(rng: &mut ChaCha8Rng, degree: usize) -> Poly {
    let mut c: Vec<Rat> = (0..=degree).map(|_| rand_rat(rng, -3, 3)).collect();
    if c[degree].is_zero() {
        c[degree] = Rat::one();
    }
    Poly::from_coeffs(c)
}

/// `a = 1, b = 0`, `J5 = J3^2`.
pub fn chebyshev_like(len: usize) -> PencilData {
    degenerate_from_jacobi(&vec![int(1); len], &vec![int(0); len]).unwrap()
}

/// `a = 1/2, b = 1`, `J5 = J3^2` with the constants `2` and `-4` of the
/// perturbed family at `c = 0, d = 1`.
pub fn unit_shift(len: usize) -> PencilData {
    let mut p = degenerate_from_jacobi(&vec![rat(1, 2); len], &vec![int(1); len]).unwrap();
    p.alpha_const = int(2);
    p.beta_const = int(-4);
    p
}

/// A pencil with an independent five-diagonal `J5`.
pub fn random_pencil(rng: &mut ChaCha8Rng, len: usize) -> PencilData {
    PencilData {
        a: (0..len).map(|_| rand_pos(rng, 2)).collect(),
        b: (0..len).map(|_| rand_rat(rng, -2, 2)).collect(),
        alpha_j5: (0..len).map(|_| rand_rat(rng, -3, 3)).collect(),
        beta_j5: (0..len).map(|_| rand_rat(rng, -2, 2)).collect(),
        gamma: (0..len).map(|_| rand_pos(rng, 2)).collect(),
        alpha_const: rand_pos(rng, 2),
        beta_const: rand_rat(rng, -2, 2),
    }
}

pub fn test_pencils(len: usize) -> Vec<(&'static str, PencilData)> {
    let mut r = rng();
    vec![
        ("chebyshev-like", chebyshev_like(len)),
        ("unit-shift", unit_shift(len)),
        ("random", random_pencil(&mut r, len)),
    ]
}

/// Orthonormal polynomials from `a_n r_{n+1} = (x - b_n) r_n - a_{n-1} r_{n-1}`.
pub fn three_term_oracle(a: &[Rat], b: &[Rat], depth: usize) -> Vec<Poly> {
    let mut out = vec![Poly::one()];
    for n in 0..depth {
        let mut c = vec![Rat::zero(); n + 2];
        for (k, v) in out[n].coeffs().iter().enumerate() {
            c[k + 1] += v;
            c[k] -= &b[n] * v;
        }
        if n > 0 {
            for (k, v) in out[n - 1].coeffs().iter().enumerate() {
                c[k] -= &a[n - 1] * v;
            }
        }
        out.push(Poly::from_coeffs(c.into_iter().map(|v| v / &a[n]).collect()));
    }
    out
}

/// `sum_i u_i v_j m_{i+j}`.
pub fn contract(u: &Poly, v: &Poly, moments: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (i, x) in u.coeffs().iter().enumerate() {
        for (j, y) in v.coeffs().iter().enumerate() {
            acc += x * y * &moments[i + j];
        }
    }
    acc
}

/// `(T^k)_{00}` for the symmetric tridiagonal `T = tridiag(a, b, a)`.
pub fn jacobi_matrix_moments(a: &[Rat], b: &[Rat], k_max: usize) -> Vec<Rat> {
    let size = k_max + 1;
    let at = |v: &[Rat], i: usize| v.get(i).cloned().unwrap_or_else(Rat::zero);
    let mut vec = vec![Rat::zero(); size];
    vec[0] = Rat::one();
    let mut out = Vec::with_capacity(k_max + 1);
    for _ in 0..=k_max {
        out.push(vec[0].clone());
        let next = (0..size)
            .map(|i| {
                let mut s = at(b, i) * &vec[i];
                if i > 0 {
                    s += at(a, i - 1) * &vec[i - 1];
                }
                if i + 1 < size {
                    s += at(a, i) * &vec[i + 1];
                }
                s
            })
            .collect();
        vec = next;
    }
    out
}

/// Generalized binomial `C(z, k)`.
pub fn binom(z: &Rat, k: usize) -> Rat {
    (0..k).fold(Rat::one(), |acc, i| {
        acc * (z - int(i as i64)) / int(i as i64 + 1)
    })
}

/// Monic Jacobi polynomial for weight `(1-x)^a (1+x)^b` from the explicit sum
/// `sum_s C(n+a, n-s) C(n+b, s) ((x-1)/2)^s ((x+1)/2)^(n-s)`.
pub fn monic_jacobi_oracle(a: &Rat, b: &Rat, n: usize) -> Poly {
    let nn = int(n as i64);
    let xm = Poly::from_coeffs(vec![rat(-1, 2), rat(1, 2)]);
    let xp = Poly::from_coeffs(vec![rat(1, 2), rat(1, 2)]);
    let pow = |p: &Poly, k: usize| (0..k).fold(Poly::one(), |acc, _| &acc * p);
    let mut sum = Poly::zero();
    for s in 0..=n {
        let coef = binom(&(&nn + a), n - s) * binom(&(&nn + b), s);
        sum = &sum + &(&pow(&xm, s) * &pow(&xp, n - s)).scale(&coef);
    }
    sum.monic()
}
