//! Connes noncommutative distances on finite weighted graphs.
//!
//! The noncommutative distance between two vertices `i`, `j` of a weighted
//! graph is the supremum of `|a(i) - a(j)|` over real vertex potentials `a`
//! whose commutator with the Dirac operator `D` has operator norm at most 1.
//! The off-diagonal moduli of `D` are the inverse edge weights.
//!
//! Besides the exact convex solver ([`solver::nc_distance`]) the crate
//! computes every estimate that brackets the distance without solving:
//!
//! * geodesic upper bound and the degree lower bound `ℓ/Δ(G)` obtained from
//!   a spectral triple on the split graph ([`estimators`]),
//! * blob-chain sandwich bounds after block-cutpoint pruning
//!   ([`decomposition`], [`estimators::blob_chain_bounds`]),
//! * the four chain bounds L1/L2/R1/R2 with admissible-decomposition
//!   enumeration ([`chain`]),
//! * edge-perturbation intervals and the induced-path upper bound.

pub mod chain;
pub mod decomposition;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod solver;
pub mod spectral;

pub use error::NcdError;
pub use graph::{DiracOperator, GraphDocument, Orientation, Potential, WeightedGraph};
pub use solver::{DistanceResult, SolverConfig};
