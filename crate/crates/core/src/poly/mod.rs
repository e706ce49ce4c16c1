//! Forms of bounded degree or bidegree on a fixed monomial basis.

mod basis;
mod binary;
mod form;
mod line;
pub mod series;

pub use basis::{jet_indices, BasisKind, MonomialBasis};
pub use binary::BinaryForm;
pub use form::{jet_list, Form, Jets};
pub use line::{AffinePoint, Line};
pub use series::{compose, smooth_branch, u_branch, Branch};
