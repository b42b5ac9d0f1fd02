//! Symbolic polynomial arithmetic used by the derivation/automorphism audits.
//!
//! Two layers: reduced univariate rational functions (a proper field, good
//! for exact elimination over ℚ(λ)), and sparse multivariate fractions used
//! to substitute printed parametric families into their defining equations.

mod mpoly;
mod parser;
mod upoly;

pub use mpoly::{MPoly, PolyFrac};
pub use parser::parse_poly_frac;
pub use upoly::{RatFn, UPoly};
