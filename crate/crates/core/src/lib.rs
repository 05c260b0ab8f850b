//! Numerics for the Riemann zeta function and its a-points: Euler–Maclaurin
//! `zeta`, the functional-equation factor `Delta`, argument-principle search for
//! solutions of `zeta(s) = a`, Dirichlet-series algebra for the generalized von
//! Mangoldt coefficients, and harnesses that check the explicit formulas tying
//! sums of `Delta` over a-points to Chebyshev's `psi`.

pub mod apoints;
pub mod cli;
pub mod complexfn;
pub mod dirichlet;
pub mod error;
pub mod quad;
pub mod sum;
pub mod verify;

pub use complexfn::{cplx, ComplexValue, EvalParams};
pub use error::{Error, Result};
