//! Age-of-information analysis and simulation for multihop multicast trees
//! with earliest-k stopping and shifted-exponential link delays.
//!
//! A source pushes updates down an L-level tree in which every node has `n`
//! children; each hop forwards an update to the earliest `k` of its `n`
//! children and abandons the rest. The crate provides, for the age of
//! information at the end nodes:
//!
//! - order-statistic service moments and exact renewal-reward age formulas
//!   ([`distributions`], [`analytic`]),
//! - large-n closed forms in the stopping ratios `k/n` ([`asymptotic`]),
//! - threshold optimizers over ratios and integer thresholds
//!   ([`optimizer`]),
//! - discrete-event simulators for the full tree and a tagged path
//!   ([`simulator`]).

pub mod analytic;
pub mod asymptotic;
pub mod distributions;
pub mod error;
pub mod optimizer;
pub mod simulator;
pub mod stats;

pub use analytic::{
    age_building_block, age_building_block_poisson, age_multi_hop_exact, age_multi_hop_upper,
    age_two_hop_exact, age_two_hop_upper, AgeBreakdown, HopConfig, InterarrivalMoments,
    NetworkConfig,
};
pub use asymptotic::{
    age_building_block_approx, age_multi_hop_approx, age_single_hop_limit, age_two_hop_approx,
    AlphaVector,
};
pub use distributions::{
    harmonic, mean_earliest_k_service, order_stat_moments, sample_order_stat_prefix,
    OrderStatMoments, OrderStatTable, ShiftedExp,
};
pub use error::{Error, Result};
pub use optimizer::{
    optimize_alpha, optimize_k_exact, optimize_k_two_hop_exhaustive, AlphaObjective, HopTemplate,
    KObjective, OptResult, SearchStatus,
};
pub use simulator::{
    simulate, simulate_building_block, simulate_full_tree, simulate_tagged_path, ArrivalModel,
    HopStats, RunConfig, SimConfig, SimMode, SimResult, TREE_NODE_LIMIT,
};
pub use stats::{batch_ci_halfwidth, t_quantile_975, MomentSummary, Welford};
