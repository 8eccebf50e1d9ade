//! Polytopes of local strategies for binary-outcome bipartite scenarios,
//! with and without one bit of one-way classical communication.
//!
//! The crate is organized around the pipeline used to catalog facet
//! inequalities of the one-bit polytope:
//!
//! * [`scenario`] enumerates deterministic strategies and their exact
//!   coordinate vectors,
//! * [`polytope`] converts vertex lists to certified facet lists
//!   (double description, exact rational arithmetic),
//! * [`symmetry`] reduces inequality lists to relabeling-equivalence
//!   classes,
//! * [`bridge`] moves inequalities between the no-signalling (Bell)
//!   coordinate space and the one-bit space,
//! * [`cutting`] runs the cut-solve-filter-merge workflow on scenarios
//!   too large for direct facet enumeration,
//! * [`quantum`] computes see-saw lower bounds on the quantum value of
//!   an inequality together with figures of merit and noise resistance.

pub mod bridge;
pub mod catalog;
pub mod cutting;
pub mod exact;
pub mod io;
pub mod known;
pub mod polytope;
pub mod quantum;
pub mod scenario;
pub mod symmetry;

// pub use bridge::{BellInequality, CommInequality};
// pub use catalog::{FacetCatalog, FacetClass};
// pub use cutting::{CutSpec, RunRecord};
pub use exact::{IntegerInequality, Rational, RationalVector};
pub use polytope::{Facet, VRep};
// pub use quantum::{BoundsReport, QuantumModel, SeesawConfig};
pub use scenario::{CommPartition, Scenario, StrategyVertex};
// pub use symmetry::Relabeling;
