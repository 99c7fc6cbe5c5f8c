//! Exact engine for polar chains: meromorphic top-degree forms with
//! first-order poles on normal-crossing divisors, the residue boundary
//! operator, the chain relations, and the cylinder homotopy.

pub mod error;
pub mod forms;
pub mod chains;
pub mod geometry;
pub mod homotopy;
pub mod maps;
pub mod poly;
pub mod session;
pub mod verify;
pub mod rational;
pub mod residue;
pub mod scalar;
pub mod univariate;

pub use error::{Error, Result};
pub use poly::{Monomial, Polynomial, Vars};
pub use rational::RationalFunction;
pub use scalar::{Rational, Scalar};
