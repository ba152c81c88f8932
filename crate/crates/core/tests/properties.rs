mod common;

use num_traits::Zero;
use pencil_core::bandcheck::{band_fit, sieve, unsieve};
use pencil_core::exactcore::{
    det_rat, int, mat_vec, polymat_det, rat, roots_float, solve_linear_exact, to_f64, Poly,
    PolyMatrix, Rat,
};
use pencil_core::odecheck::{build_system, verify_ode, OdeCoeffs};
use pencil_core::pencil::{
    associated_polynomials, christoffel_darboux, degenerate_from_jacobi, recurrence_residual,
    shifted_solutions, PencilData, ShiftOrder,
};
use pencil_core::perturb::{apply_a_power, p_from_r, r_from_p, PerturbationParams};
use pencil_core::spectral::moment_table;
use pencil_core::truncated::pencil_eigs;
use proptest::prelude::*;

fn any_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn pos_rat() -> impl Strategy<Value = Rat> {
    (1i64..=24, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn any_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(any_rat(), 1..=max_deg + 1).prop_map(Poly::from_coeffs)
}

fn any_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<Rat>>> {
    (1..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(any_rat(), n), n))
}

fn any_pencil(len: usize) -> impl Strategy<Value = PencilData> {
    (
        prop::collection::vec(pos_rat(), len),
        prop::collection::vec(any_rat(), len),
        prop::collection::vec(any_rat(), len),
        prop::collection::vec(any_rat(), len),
        prop::collection::vec(pos_rat(), len),
        pos_rat(),
        any_rat(),
    )
        .prop_map(|(a, b, alpha_j5, beta_j5, gamma, alpha_const, beta_const)| PencilData {
            a,
            b,
            alpha_j5,
            beta_j5,
            gamma,
            alpha_const,
            beta_const,
        })
}

fn any_params() -> impl Strategy<Value = PerturbationParams> {
    ((0i64..=30, 1i64..=10), any_rat()).prop_map(|((n, k), d)| {
        // c = -1 + 1/k + n/10 > -1
        let c = rat(n, 10) - int(1) + rat(1, k);
        PerturbationParams::new(c, d).unwrap()
    })
}

// Laplace expansion along the first row.
fn det_oracle(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Rat::zero();
    for j in 0..n {
        let minor: Vec<Vec<Rat>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][j] * det_oracle(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divided_difference_identity(p in any_poly(9), x in any_rat(), t in any_rat()) {
        let dd = p.divided_difference();
        prop_assert_eq!((&x - &t) * dd.eval(&x, &t), p.eval(&x) - p.eval(&t));
        if x != t {
            prop_assert_eq!(p.divided_difference_at(&t).eval(&x), (p.eval(&x) - p.eval(&t)) / (&x - &t));
        }
    }

    #[test]
    fn determinants_agree(m in any_matrix(5)) {
        let want = det_oracle(&m);
        prop_assert_eq!(det_rat(&m).unwrap(), want.clone());
        let n = m.len();
        let pm = PolyMatrix::from_fn(n, n, |i, j| Poly::linear(m[i][j].clone(), Rat::zero()));
        prop_assert_eq!(polymat_det(&pm).unwrap(), Poly::constant(want));
    }

    #[test]
    fn polymat_det_evaluates_pointwise(
        entries in prop::collection::vec((any_rat(), any_rat()), 16),
        x in any_rat(),
    ) {
        let pm = PolyMatrix::from_fn(4, 4, |i, j| {
            let (c0, c1) = &entries[4 * i + j];
            Poly::linear(c0.clone(), c1.clone())
        });
        prop_assert_eq!(polymat_det(&pm).unwrap().eval(&x), det_rat(&pm.eval(&x)).unwrap());
    }

    #[test]
    fn solve_is_exact(m in any_matrix(5), seed in prop::collection::vec(any_rat(), 5)) {
        let b = seed[..m.len()].to_vec();
        match solve_linear_exact(&m, &b) {
            Ok(x) => prop_assert_eq!(mat_vec(&m, &x), b),
            Err(_) => prop_assert!(det_rat(&m).unwrap().is_zero()),
        }
    }

    #[test]
    fn root_sum_and_product(roots in prop::collection::vec(-12i64..=12, 1..=6)) {
        let p = roots
            .iter()
            .fold(Poly::one(), |acc, &r| &acc * &Poly::from_ints(&[-r, 1]));
        let z = roots_float(&p).unwrap();
        prop_assert_eq!(z.len(), roots.len());
        let sum: f64 = z.iter().map(|w| w.re).sum();
        let want: f64 = roots.iter().map(|&r| r as f64).sum();
        prop_assert!((sum - want).abs() < 1e-6);
        let deg = roots.len();
        let prod = z.iter().fold(num_complex::Complex64::new(1.0, 0.0), |acc, w| acc * w);
        let sign = if deg % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((prod.re - sign * to_f64(&p.coeff(0))).abs() < 1e-6 * (1.0 + to_f64(&p.coeff(0)).abs()));
    }

    #[test]
    fn associated_polys_solve_recurrence(p in any_pencil(8)) {
        let seq = associated_polynomials(&p, 8).unwrap();
        for (n, q) in seq.iter().enumerate() {
            prop_assert_eq!(q.degree(), Some(n));
        }
        for n in 0..=6 {
            prop_assert!(recurrence_residual(&p, &seq, n).unwrap().is_zero());
        }
        let u = shifted_solutions(&p, ShiftOrder::Single, 8).unwrap();
        for n in 1..=6 {
            prop_assert!(recurrence_residual(&p, &u, n).unwrap().is_zero());
        }
    }

    #[test]
    fn christoffel_darboux_random(p in any_pencil(12), n in 0usize..=10, lam in any_rat(), y in any_rat()) {
        prop_assume!(lam != y);
        prop_assert!(christoffel_darboux(&p, n, &lam, &y).unwrap().holds());
    }

    #[test]
    fn eigenpairs_have_small_residual(p in any_pencil(8), j in 1usize..=6) {
        if let Ok(spec) = pencil_eigs(&p, j) {
            prop_assert!(spec.eigenvalues().len() <= j);
            for e in &spec.eigenpairs {
                prop_assert!(e.residual <= 1e-8);
                prop_assert!(e.vectors.len() <= 2);
            }
        }
    }

    #[test]
    fn operator_power_consistency(prm in any_params(), p in any_poly(6), n in 1usize..=6) {
        let once = apply_a_power(&prm, &p, 1);
        prop_assert_eq!(apply_a_power(&prm, &p, n), apply_a_power(&prm, &once, n - 1));
    }

    #[test]
    fn transform_roundtrip(prm in any_params(), seed in prop::collection::vec(any_poly(10), 1..=6)) {
        // force deg r_n = n
        let r: Vec<Poly> = seed
            .iter()
            .enumerate()
            .map(|(n, q)| &q.div_rem(&Poly::monomial(n + 1)).1 + &Poly::monomial(n))
            .collect();
        let p = p_from_r(&prm, &r);
        prop_assert_eq!(r_from_p(&prm, &p), r.clone());
        for (pn, rn) in p.iter().zip(&r) {
            prop_assert_eq!(pn.eval(prm.d()), rn.coeff(0));
            prop_assert_eq!(pn.degree(), rn.degree());
        }
    }

    #[test]
    fn sieve_reconstruction(p in any_poly(12), order in 1usize..=4) {
        let parts: Vec<Poly> = (0..order).map(|m| sieve(&p, order, m).unwrap()).collect();
        prop_assert_eq!(unsieve(&parts), p);
    }

    #[test]
    fn banded_fit_is_hermitian(a in prop::collection::vec(pos_rat(), 8), b in prop::collection::vec(any_rat(), 8)) {
        let pencil = degenerate_from_jacobi(&a, &b).unwrap();
        let basis = associated_polynomials(&pencil, 6).unwrap();
        let table = moment_table(&pencil, 6).unwrap();
        for order in 1..=2 {
            let fit = band_fit(&basis, &table, order).unwrap();
            prop_assert!(fit.banded);
            prop_assert!(fit.hermitian_mismatches().is_empty());
        }
    }

    #[test]
    fn linear_system_matches_residual(
        co in prop::collection::vec(any_rat(), 17),
        mu in prop::collection::vec(any_rat(), 1..=9),
        lam in any_rat(),
    ) {
        let co = OdeCoeffs {
            c: [co[0].clone(), co[1].clone(), co[2].clone(), co[3].clone(), co[4].clone()],
            d: [co[5].clone(), co[6].clone(), co[7].clone(), co[8].clone()],
            f: [co[9].clone(), co[10].clone(), co[11].clone()],
            g: [co[12].clone(), co[13].clone()],
            h: co[14].clone(),
            phi: [co[15].clone(), co[16].clone(), int(1)],
            psi: [int(-2), int(4)],
            theta: int(2),
        };
        let n = mu.len() - 1;
        let sys = build_system(&co, n, &lam);
        let lhs = Poly::from_coeffs(mat_vec(&sys, &mu));
        let rhs = verify_ode(&co, &lam, &Poly::from_coeffs(mu));
        prop_assert_eq!(lhs, rhs);
    }
}
