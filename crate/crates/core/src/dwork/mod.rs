//! Ghost polynomials, admissibility, Hasse–Witt matrices and executable
//! versions of the Dwork-type congruences they satisfy.
//!
//! Every check returns [`CongruenceReport`]s. Symbolic checks compare full
//! polynomials; evaluation checks compare values at sample points, which is
//! implied by (but weaker than) the polynomial statement.

mod admissible;
mod algebra;
mod evaluation;
mod ghost;
mod hasse_witt;
mod report;
mod symbolic;
mod tuple;

pub use admissible::{check_admissible, AdmissibilityWitness};
pub use algebra::TuplePoly;
pub use evaluation::{
    check_derivation_congruence_at, check_det_congruence_at, check_ghost_divisibility_at, check_hw_factorization_identity_at,
    check_mod_p_factorization_at, check_ratio_congruence_at, check_second_derivation_congruence_at, sample_points, TupleEvaluator,
};
pub(crate) use ghost::monomial_text;
pub use ghost::{check_ghost_divisibility, check_newton_inclusion, check_newton_inclusion_with, check_reconstruction, GhostSequence};
pub use hasse_witt::{hasse_witt, hasse_witt_values, HasseWittMatrix};
pub use report::{all_pass, CongruenceReport, Mode, Param};
pub use symbolic::{
    check_derivation_congruence, check_det_congruence, check_hw_factorization_identity, check_mod_p_factorization, check_ratio_congruence,
    check_second_derivation_congruence,
};
pub use tuple::{DworkTuple, IndexSet};
