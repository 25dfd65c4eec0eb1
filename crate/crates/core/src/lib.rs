//! Critical degree, cocritical degree and critical diameter of totally
//! acyclic complexes over Artinian complete intersections `k[x_1..x_n]/(f)`.
//!
//! The modules build on each other bottom-up:
//!
//! * [`ffield`]: dense linear algebra over `F_p` and `F_{p^e}`
//! * [`polyring`]: polynomials, Gröbner bases with cofactors, quotient rings
//! * [`complexes`]: free complexes, chain maps, minimalization, homotopies
//! * [`resolve`]: minimal free and complete resolutions
//! * [`cioper`]: Eisenbud operators and their linear combinations
//! * [`critical`]: the degree analyzers and the law checks

pub mod cioper;
pub mod complexes;
pub mod critical;
pub mod error;
pub mod ffield;
pub mod polyring;
pub mod resolve;

pub use error::{Error, Result};
