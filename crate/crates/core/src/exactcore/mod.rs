//! Exact scalars and polynomials, polynomial-entry matrices, exact linear
//! solving and floating-point root finding.

mod matrix;
mod poly;
mod polyf;
mod rat;
mod roots;

pub use matrix::{det_rat, mat_vec, polymat_det, solve_linear_exact, PolyMatrix, COFACTOR_CAP};
pub use poly::{divided_difference, poly_eval, BivarPoly, Poly};
pub use polyf::PolyF;
pub use rat::{int, parse_rat, rat, rat_sqrt, sign, to_f64, Rat};
pub use roots::{roots_float, roots_with_multiplicity, sort_roots, ComplexF};
