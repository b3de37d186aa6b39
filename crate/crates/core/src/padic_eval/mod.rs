//! The p-adic limits at points of unramified rings: domain points, the
//! convergent sequences `B_s`, `𝓘_s`, `𝓘^{(i)}_s`, `𝒜^{(i)}_s`, and the
//! relations their limits satisfy (Gaudin, connection, rank).

mod domain;
mod limits;

pub use domain::{check_extension_degree, classify_point, default_attempts, find_domain_points, find_domain_points_within, point_ring, rank_hypothesis_holds, DomainPoint};
pub use limits::{LimitApproximation, LimitTarget, PointEvaluation};
