//! Sparse exact Laurent polynomials in `x = (t, z)` and a product-form
//! representation for powers that are too large to expand.

mod poly;
mod packed;
mod polytope;
mod ring;
mod separable;
mod text;

pub use poly::{Exponent, LaurentPoly, SigmaScope, VarLayout};
pub use polytope::LatticePolytopeT;
pub use ring::PolyRing;
pub use separable::{BinaryForm, SepTerm, SeparableForm};
