//! Exact and p-adic machinery for Dwork-type congruences of Hasse–Witt
//! matrices and for the p-adic solutions of the KZ equations with
//! parameter `q`.
//!
//! The crate is `no_std` and only needs `alloc`. IO, file formats and the
//! command line live in the `hwkz` companion crate.
//!
//! Layout:
//! - [`ring`]: `Z/p^M`, the unramified rings `Z_p^(m)` mod `p^M`, jets,
//!   matrices and univariate polynomials over those rings.
//! - [`laurent`]: sparse exact Laurent polynomials in `(t, z)` and the
//!   product-form representation used for large powers.
//! - [`dwork`]: ghost polynomials, admissibility, Hasse–Witt matrices and
//!   the congruence checks built on them.
//! - [`kz`]: master polynomials, hypergeometric solutions and their checks.
//! - [`padic_eval`]: domain points, limit sequences and the relations they
//!   satisfy at a point.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dwork;
mod error;
pub mod kz;
pub mod laurent;
pub mod padic_eval;
pub mod ring;

pub use error::{Error, Result};
