//! Exact arithmetic: prime fields, seeded randomness, univariate and
//! bivariate polynomials, dense linear algebra.

pub mod bivar;
pub mod field;
pub mod matrix;
pub mod rng;
pub mod unipoly;

pub use bivar::{resultant_v, BivarPoly};
pub use field::{Fe, Field, MEDIUM_PRIME, MERSENNE_61, SECOND_PRIME};
pub use matrix::{proportional, rank_and_kernel, rank_of_rows, FieldMatrix};
pub use rng::{derive_seed, label_tag, SeededRng};
pub use unipoly::{interpolate, UniPoly};
