//! Cohomology of circle bundles over symplectic manifolds and closed Reeb
//! orbits of K-contact structures on them.

pub mod graded;
pub mod gysin;
pub mod int_linalg;
pub mod numeric;
pub mod reeb;
pub mod sphere_flow;
pub mod verdict;
