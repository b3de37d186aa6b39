//! Coefficient rings: `Z/p^M`, truncated unramified extensions `Z_p^(m)`,
//! truncated jets over either, and the matrix and univariate polynomial
//! helpers shared by every check.

mod fp;
mod jet;
mod kronecker;
mod matrix;
mod modulus;
mod tpoly;
mod traits;
mod unramified;

pub use fp::{find_defining_polynomial, is_irreducible_mod_p};
pub use jet::{JetElem, JetRing};
pub use matrix::Matrix;
pub use modulus::{invert_mod, is_prime, valuation_of_integer, ModulusContext, Valuation};
pub use tpoly::TPoly;
pub use traits::{PadicRing, Ring};
pub use unramified::UnramifiedRing;
