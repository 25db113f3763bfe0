//! Discrete-event simulators for the multicast tree.
//!
//! Two engines estimate the same end-node age process:
//!
//! - [`simulate_full_tree`] drives every node of the L-level tree through
//!   a time-ordered event heap; each transmitter forwards an accepted
//!   update to the earliest k of its n children (by sampled delay) and
//!   drops arrivals while busy. Ages are averaged over all end nodes.
//! - [`simulate_tagged_path`] follows one root-to-leaf chain, sampling at
//!   each hop the tagged child's delay jointly with the order statistics
//!   of its siblings. By symmetry the tagged node's age law equals any
//!   end node's, at a cost independent of n.
//!
//! Both share the measurement protocol: the window opens at the
//! generation instant of source cycle `warmup_cycles` and closes at cycle
//! `cycles`; it is split into `batches` equal-cycle batches whose means
//! give a Student-t confidence interval. All randomness is keyed by
//! `(seed, node, update)`, making every estimate a pure function of its
//! configuration.

mod age;
mod full_tree;
mod rng;
mod tagged;

use serde::Serialize;

use crate::analytic::{HopConfig, InterarrivalMoments, NetworkConfig};
use crate::error::{Error, Result};
use crate::stats::{batch_ci_halfwidth, MomentSummary};

/// Largest full tree the event engine will instantiate.
pub const TREE_NODE_LIMIT: u64 = 1_000_000;

/// Run-control parameters shared by all simulators.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RunConfig {
    cycles: u64,
    warmup_cycles: u64,
    batches: u32,
    seed: u64,
}

impl RunConfig {
    pub fn new(cycles: u64, warmup_cycles: u64, batches: u32, seed: u64) -> Result<Self> {
        if batches < 10 {
            return Err(Error::SimConfig(format!(
                "at least 10 batches are required for a usable confidence interval, got {batches}"
            )));
        }
        if cycles <= warmup_cycles {
            return Err(Error::SimConfig(format!(
                "cycles ({cycles}) must exceed warmup_cycles ({warmup_cycles})"
            )));
        }
        if cycles - warmup_cycles < batches as u64 {
            return Err(Error::SimConfig(format!(
                "need at least one cycle per batch: {} measured cycles over {batches} batches",
                cycles - warmup_cycles
            )));
        }
        Ok(Self {
            cycles,
            warmup_cycles,
            batches,
            seed,
        })
    }

    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    pub fn warmup_cycles(&self) -> u64 {
        self.warmup_cycles
    }

    pub fn batches(&self) -> u32 {
        self.batches
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Source-cycle indices of the batch boundaries (first = window open,
    /// last = window close), strictly increasing.
    fn boundary_ids(&self) -> Vec<u64> {
        let span = self.cycles - self.warmup_cycles;
        (0..=self.batches as u64)
            .map(|b| self.warmup_cycles + b * span / self.batches as u64)
            .collect()
    }
}

/// How updates enter the source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ArrivalModel {
    /// A fresh update is created the instant the previous one completes.
    GenerateAtWill,
    /// Poisson arrivals with the given rate; arrivals during service drop.
    Poisson { rate: f64 },
    /// Fixed-period arrivals; arrivals during service drop.
    Deterministic { period: f64 },
}

impl ArrivalModel {
    fn validate(&self) -> Result<()> {
        let (name, v) = match self {
            Self::GenerateAtWill => return Ok(()),
            Self::Poisson { rate } => ("arrival rate", *rate),
            Self::Deterministic { period } => ("arrival period", *period),
        };
        if !v.is_finite() || v <= 0.0 {
            return Err(Error::Param {
                name,
                constraint: "positive and finite",
                value: v,
            });
        }
        Ok(())
    }
}

/// Which engine to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SimMode {
    FullTree,
    TaggedPath,
}

/// A complete simulation experiment.
#[derive(Debug, Clone)]
pub struct SimConfig {
    network: NetworkConfig,
    arrival: ArrivalModel,
    mode: SimMode,
    run: RunConfig,
}

impl SimConfig {
    pub fn new(
        network: NetworkConfig,
        arrival: ArrivalModel,
        mode: SimMode,
        run: RunConfig,
    ) -> Result<Self> {
        arrival.validate()?;
        if mode == SimMode::FullTree {
            check_tree_size(&network)?;
        }
        Ok(Self {
            network,
            arrival,
            mode,
            run,
        })
    }

    pub fn network(&self) -> &NetworkConfig {
        &self.network
    }

    pub fn arrival(&self) -> ArrivalModel {
        self.arrival
    }

    pub fn mode(&self) -> SimMode {
        self.mode
    }

    pub fn run(&self) -> &RunConfig {
        &self.run
    }
}

fn check_tree_size(net: &NetworkConfig) -> Result<()> {
    let mut level = 1u64;
    let mut total = 1u64;
    for hop in net.hops() {
        level = level.saturating_mul(hop.n() as u64);
        total = total.saturating_add(level);
        if total > TREE_NODE_LIMIT {
            return Err(Error::TreeTooLarge {
                nodes: total,
                limit: TREE_NODE_LIMIT,
            });
        }
    }
    Ok(())
}

/// Measured moments at one hop's transmitters.
#[derive(Debug, Clone, Serialize)]
pub struct HopStats {
    /// Idle wait between completing one update and accepting the next.
    pub interarrival: MomentSummary,
    /// Service duration of accepted updates (time to the k-th delivery).
    pub service: MomentSummary,
    /// Full cycle = idle wait + service, per accepted update.
    pub cycle: MomentSummary,
    /// Transmission cycles per delivery to a fixed child (tagged-path
    /// runs only; empty for full-tree runs, which have no tagged child).
    pub attempts: MomentSummary,
}

/// Outcome of a simulation run.
#[derive(Debug, Clone, Serialize)]
pub struct SimResult {
    /// Time-average age over the measurement window and measured nodes.
    pub avg_age: f64,
    /// Half-width of the 95% batch-means confidence interval.
    pub ci_halfwidth: f64,
    /// Number of end nodes the average runs over.
    pub end_nodes_measured: u64,
    /// Per-hop transmitter statistics, source hop first.
    pub hop_stats: Vec<HopStats>,
    /// Updates (tagged mode) or copies (full-tree mode) that reached an
    /// end node, counted over the measured cycles.
    pub successful_updates: u64,
    /// Arrivals discarded at a busy transmitter over the measured cycles.
    pub dropped_updates: u64,
    /// Updates abandoned by the earliest-k cutoff before reaching an end
    /// node (tagged mode) / child copies never sent (full-tree mode).
    pub preempted_updates: u64,
    /// Gaps between successive deliveries at one fixed end node.
    pub success_gap: MomentSummary,
    /// Per-batch time-average ages.
    pub batch_means: Vec<f64>,
    /// Measurement window (open, close) in simulation time.
    pub window: (f64, f64),
}

impl SimResult {
    /// Standard error implied by the batch-means confidence interval.
    pub fn std_error(&self) -> f64 {
        self.ci_halfwidth / crate::stats::t_quantile_975(self.batch_means.len() as u64 - 1)
    }

    /// Measured residual-wait moments of hop `hop_idx`'s transmitters, in
    /// the form the exact age formulas take: mean idle wait and variance
    /// of the full cycle.
    pub fn measured_wait(&self, hop_idx: usize) -> Result<InterarrivalMoments> {
        let h = self.hop_stats.get(hop_idx).ok_or(Error::HopCountMismatch {
            left: hop_idx + 1,
            left_what: "requested hop index + 1",
            right: 0,
            right_what: "measured hops",
        })?;
        InterarrivalMoments::new(h.interarrival.mean, h.cycle.variance)
    }
}

/// Run the experiment described by `cfg`.
pub fn simulate(cfg: &SimConfig) -> Result<SimResult> {
    match cfg.mode {
        SimMode::FullTree => full_tree::run(&cfg.network, cfg.arrival, &cfg.run),
        SimMode::TaggedPath => tagged::run(&cfg.network, cfg.arrival, &cfg.run),
    }
}

/// Simulate every node of the tree and average ages over all end nodes.
pub fn simulate_full_tree(
    net: &NetworkConfig,
    arrival: ArrivalModel,
    run: &RunConfig,
) -> Result<SimResult> {
    arrival.validate()?;
    check_tree_size(net)?;
    full_tree::run(net, arrival, run)
}

/// Simulate one root-to-leaf path; cost independent of fan-out.
pub fn simulate_tagged_path(
    net: &NetworkConfig,
    arrival: ArrivalModel,
    run: &RunConfig,
) -> Result<SimResult> {
    arrival.validate()?;
    tagged::run(net, arrival, run)
}

/// Single transmitter with exogenous arrivals observed at one child: the
/// recursive unit of the multihop analysis.
pub fn simulate_building_block(
    hop: &HopConfig,
    arrival: ArrivalModel,
    run: &RunConfig,
) -> Result<SimResult> {
    let net = NetworkConfig::new(vec![*hop])?;
    simulate_tagged_path(&net, arrival, run)
}

/// Shared result assembly: turns raw accumulators into a [`SimResult`].
struct Tally {
    age: age::AgeAccumulator,
    hop_stats: Vec<HopStats>,
    successful: u64,
    dropped: u64,
    preempted: u64,
    success_gap: MomentSummary,
    end_nodes: u64,
}

impl Tally {
    fn into_result(self) -> SimResult {
        let batch_means = self.age.batch_means(self.end_nodes);
        SimResult {
            avg_age: self.age.time_average(self.end_nodes),
            ci_halfwidth: batch_ci_halfwidth(&batch_means),
            end_nodes_measured: self.end_nodes,
            hop_stats: self.hop_stats,
            successful_updates: self.successful,
            dropped_updates: self.dropped,
            preempted_updates: self.preempted,
            success_gap: self.success_gap,
            batch_means,
            window: self.age.window(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::ShiftedExp;

    fn hop(n: u32, k: u32) -> HopConfig {
        HopConfig::new(n, k, ShiftedExp::new(1.0, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn run_config_validation() {
        assert!(RunConfig::new(1000, 100, 10, 1).is_ok());
        assert!(RunConfig::new(1000, 100, 9, 1).is_err());
        assert!(RunConfig::new(100, 100, 10, 1).is_err());
        assert!(RunConfig::new(100, 99, 10, 1).is_err());
        assert!(RunConfig::new(105, 100, 10, 1).is_err()); // 5 cycles, 10 batches
    }

    #[test]
    fn boundary_ids_are_even_and_cover_the_window() {
        let run = RunConfig::new(1000, 100, 10, 1).unwrap();
        let ids = run.boundary_ids();
        assert_eq!(ids.len(), 11);
        assert_eq!(ids[0], 100);
        assert_eq!(*ids.last().unwrap(), 1000);
        for w in ids.windows(2) {
            assert_eq!(w[1] - w[0], 90);
        }
    }

    #[test]
    fn arrival_model_validation() {
        assert!(ArrivalModel::GenerateAtWill.validate().is_ok());
        assert!(ArrivalModel::Poisson { rate: 0.5 }.validate().is_ok());
        assert!(ArrivalModel::Poisson { rate: 0.0 }.validate().is_err());
        assert!(ArrivalModel::Deterministic { period: -1.0 }
            .validate()
            .is_err());
        assert!(ArrivalModel::Deterministic { period: f64::NAN }
            .validate()
            .is_err());
    }

    #[test]
    fn tree_size_guard() {
        // 1000^2 end nodes blow the full-tree budget; the tagged path
        // takes the same network without complaint.
        let net = NetworkConfig::new(vec![hop(1000, 600), hop(1000, 900)]).unwrap();
        let run = RunConfig::new(200, 100, 10, 1).unwrap();
        let err = SimConfig::new(
            net.clone(),
            ArrivalModel::GenerateAtWill,
            SimMode::FullTree,
            run,
        );
        assert!(matches!(err, Err(Error::TreeTooLarge { .. })));
        assert!(
            SimConfig::new(net, ArrivalModel::GenerateAtWill, SimMode::TaggedPath, run).is_ok()
        );
    }
}
