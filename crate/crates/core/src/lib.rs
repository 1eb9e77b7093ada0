//! Exact workbench for quantum cluster algebras of valued quivers.
//!
//! * [`qring`]: the coefficient ring `Z[q^{±1/2}]` and quantum binomials.
//! * [`torus`]: the based quantum torus and its normalized monomials.
//! * [`seedkit`]: compatible pairs, quantum seed mutation, rank-2 recursion.
//! * [`speckit`]: valued quivers, their exchange/Ext matrices and Euler form.
//! * [`repbrute`]: finite-field representation oracle (Hall numbers,
//!   Grassmannians, extensions, Hom-strata, interpolation in `q`).
//! * [`ccmap`]: quantum cluster characters and multiplication checkers.
//! * [`rank2basis`]: the rank-2 basis `{X_d}` and its verification.

pub mod ccmap;
pub mod error;
pub mod ffield;
pub mod linalg;
pub mod par;
pub mod qring;
pub mod rank2basis;
pub mod repbrute;
pub mod seedkit;
pub mod speckit;
pub mod torus;

pub use error::{Error, Result};
pub use par::Exec;
pub use qring::{qbinom, QCoeff, QPoly};
pub use torus::{SkewForm, TorusElement};
