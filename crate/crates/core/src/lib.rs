//! Exponential random graph models viewed as lattice gases on the edge
//! sites of the complete graph.
//!
//! The crate computes the free energy of a small ERGM two independent ways:
//!
//! * [`ensemble`] enumerates every labeled graph on `n` vertices and sums the
//!   Boltzmann weights directly (the ground truth at desk scale);
//! * [`expansion`] rewrites the normalized partition function as a polymer
//!   gas, evaluates the truncated cluster (high-temperature) expansion of
//!   `log W`, and certifies convergence through the Kotecký-Preiss condition
//!   with an analytic tail obtained from the rooted-hypergraph coefficient
//!   recursion.
//!
//! [`graph`] provides graphs, motifs and exact homomorphism densities;
//! [`lattice`] turns a weighted motif family into the sparse interaction
//! `K(X)` over edge subsets.

pub mod ensemble;
pub mod error;
pub mod expansion;
pub mod graph;
pub mod lattice;
pub mod numeric;
pub mod numfmt;
pub mod report;

pub use error::{Error, Result};
pub use graph::{
    enumerate_graphs, hom_count, hom_density, weighted_density, EdgeSite, EdgeSubset, ErgmModel,
    Motif, ParameterVector, SimpleGraph,
};
pub use lattice::{build_interaction, exact_density, hamiltonian, Interaction, SpinConfiguration};
