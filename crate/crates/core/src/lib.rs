//! Matrix-weighted input-output economy networks.
//!
//! A network of `n` economies with `d` industries each is a directed graph
//! whose edges carry a scalar weight and a `d×d` nonnegative coefficient
//! matrix. Stacking the weighted blocks gives the `dn×dn` system
//! `x = Ā·x + y`; iterating `x[k+1] = Ā·x[k] + y` is a distributed way to
//! reach its solution.
//!
//! - [`matrix`]: dense kernels (classification, power iteration, solves,
//!   minors, primitivity by powers).
//! - [`graph`]: SCCs, root sets, periodicity.
//! - [`economy`]: the network type, assumption checks, lifting, PageRank
//!   regularization and the Hawkins–Simon test.
//! - [`dynamics`]: the update law, simulations and equilibria.

pub mod dynamics;
pub mod economy;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod matrix;
#[cfg(feature = "random")]
pub mod random;

pub use dynamics::{
    closed_equilibrium_predict, dominant_eigenpair, kron_equilibrium, layer_decomposition,
    open_equilibrium, simulate, spectral_radius, step, EquilibriumMethod, EquilibriumResult,
    LayerContribution, SimulationOptions, SimulationTrace,
};
pub use economy::{
    build_lifted, hawkins_simon, regularize_pagerank, validate, EconomyNetwork, Edge, LiftedSystem,
    ModelClass, ValidationReport,
};
pub use error::{Error, Result};
pub use graph::{
    graph_from_matrix, is_aperiodic, is_primitive_graph, root_report, scc, Digraph, RootReport,
    SccDecomposition,
};
pub use matrix::{
    classify_columns, is_positive_power, leading_principal_minors, power_iteration, solve_linear,
    wielandt_bound, Matrix, SpectralResult, StochasticClass, StochasticTag, Vector,
};
