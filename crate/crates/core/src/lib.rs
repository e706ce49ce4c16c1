//! Exact finite-field verification of linear systems of plane curves with
//! imposed singularities, Prym-canonical models and a genus-5 nodal family.

pub mod cli;
pub mod error;
pub mod exact;
pub mod formulas;
pub mod genus5;
pub mod linsys;
pub mod planeprym;
pub mod poly;

pub use error::{Error, Result};
