//! Finite Clifford semigroups and strong semilattices of groups: algebra,
//! order theory, finite topologies, explicit metrics and C¹ rigidity probes.

pub mod c1;
pub mod catalog;
pub mod demo;
pub mod document;
pub mod iso;
pub mod metrics;
pub mod order;
pub mod semigroup;
pub mod strong;
pub mod topology;
