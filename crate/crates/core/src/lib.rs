//! Orthogonal polynomials of Jacobi-type pencils `J5 - x J3`, checked in
//! exact rational arithmetic.
//!
//! Modules, bottom-up:
//! - [`exactcore`]: rationals, polynomials, polynomial matrices, root finding
//! - [`pencil`]: pencil data, the fourth-order recurrence, shifted families,
//!   the Christoffel–Darboux analog
//! - [`spectral`]: moments of the spectral function, Hankel determinants,
//!   determinant representation, second-kind polynomials
//! - [`truncated`]: characteristic polynomials and eigenpairs of truncated pencils
//! - [`perturb`]: the rank-one perturbed multiplication operator family
//! - [`odecheck`]: polynomial solutions of the fourth-order ODE
//! - [`bandcheck`]: symmetry of operator powers, banded fits and sieving

pub mod bandcheck;
pub mod error;
pub mod exactcore;
pub mod odecheck;
pub mod pencil;
pub mod perturb;
pub mod spectral;
pub mod truncated;

pub use error::{Error, Result};
