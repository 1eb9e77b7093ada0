//! Brute-force representation theory of valued quivers over finite fields.

pub mod hom;
pub mod counts;
pub mod descr;
pub mod iso;
pub mod species;
pub mod sub;

pub use species::{Rep, Species};
