//! Master polynomials `Φ_s`, the hypergeometric solutions `I_s` of the KZ
//! equations mod `p^{es}` and the congruences they satisfy.

mod congruences;
mod gaudin;
mod leading;
mod params;
mod point;
mod solutions;

pub use congruences::{check_mod_p_stability, check_solution_congruences};
pub use gaudin::GaudinData;
pub use leading::{check_leading_terms, check_minor, det_phi1_check, leading_term_solutions, minor_m, LeadingTerm};
pub use params::{describe, make_params, Degrees, KzDescription, KzParams};
pub use point::{check_kz_solution_at, check_mod_p_stability_at, check_solution_congruences_at, KzLevel, KzPoint};
pub use solutions::{
    check_gradient_identity, check_kz_admissible, check_kz_identities, check_kz_solution, hasse_witt_phi, kz_newton_intervals, hypergeometric_solutions, kz_tuple, master_polynomial,
    MasterPolynomial, SolutionMatrix,
};
