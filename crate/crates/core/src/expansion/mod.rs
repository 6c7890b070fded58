//! Polymer representation of `W`, the cluster expansion of `log W`, and its
//! convergence certificate.

pub mod coefficients;
pub mod hypergraph;
pub mod kp;
pub mod polymer;
pub mod region;
pub mod series;
pub mod ursell;

pub use coefficients::{
    abar_recursion, gamma_recursion, radius_and_tail, series_satisfies_identity, CoefficientTable, TailBound,
};
pub use hypergraph::{enumerate_connected_hypergraphs, links_connected, Hypergraph, MAX_LINKS_DEFAULT};
pub use kp::{kp_certify, kp_certify_with_norm, FailReason, KpCertificate, KpVerdict, SiteSum};
pub use polymer::{activity_bound, cluster_representation_sum, polymer_activity, Polymer, PolymerSet};
pub use region::{norm_budget, norm_threshold, optimal_log_m, optimal_m, region_bound};
pub use series::{pinned_cluster_sum, truncated_log_partition, LogSeries, OrderTerm};
pub use ursell::{ursell_coefficient, UrsellCache};
