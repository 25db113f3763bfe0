//! Chain simulation of one end node's ancestor path.
//!
//! Only the transmitters above a single tagged end node are simulated, so
//! the cost per update is O(L) instead of O(n^L). The joint law at each hop
//! is preserved exactly: the tagged child's delay `x_t` and the sibling
//! order statistics `s_1 <= ... <= s_{n-1}` are independent, the copy is
//! forwarded iff `x_t` lands among the k smallest of all n delays
//! (`x_t < s_k`), and the transmitter stays busy for the k-th smallest
//! overall, which is `max(x_t, s_{k-1})` on success and `s_k` otherwise
//! (with `s_0 = 0` and the k = n case always succeeding after
//! `max(x_t, s_{n-1})`).
//!
//! Updates are processed in acceptance order rather than in global time
//! order, so a delivery can land beyond batch boundaries whose timestamps
//! have not been discovered yet. Age segments are therefore buffered and
//! integrated once the measurement window is fully known; the resulting
//! sums are identical to the online ones because segments are replayed in
//! chronological order.

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use super::age::AgeAccumulator;
use super::rng::{stream_rng, ARRIVAL_NODE};
use super::{ArrivalModel, HopStats, RunConfig, Tally};
use crate::analytic::{HopConfig, NetworkConfig};
use crate::distributions::push_spacings_prefix;
use crate::error::Result;
use crate::simulator::SimResult;
use crate::stats::Welford;

struct Chain<'a> {
    net: &'a NetworkConfig,
    run: &'a RunConfig,
    arrival: ArrivalModel,
    busy_until: Vec<f64>,
    last_completion: Vec<f64>,
    /// Transmissions at each hop since the last delivery to the tagged child.
    attempts_open: Vec<u64>,
    z: Vec<Welford>,
    service: Vec<Welford>,
    cycle: Vec<Welford>,
    attempts: Vec<Welford>,
    arrival_index: u64,
    next_arrival: f64,
    successful: u64,
    dropped: u64,
    preempted: u64,
    leaf_gen: f64,
    leaf_time: f64,
    /// Delivery times at the tagged end node, in order.
    deliveries: Vec<f64>,
    /// Buffered (start, generation, end) age segments.
    segments: Vec<(f64, f64, f64)>,
    age: AgeAccumulator,
    boundary_ids: Vec<u64>,
    next_boundary: usize,
    spacings: Vec<f64>,
}

pub(super) fn run(
    net: &NetworkConfig,
    arrival: ArrivalModel,
    run: &RunConfig,
) -> Result<SimResult> {
    let hops = net.len();
    let mut sim = Chain {
        net,
        run,
        arrival,
        busy_until: vec![f64::NEG_INFINITY; hops],
        last_completion: vec![f64::NAN; hops],
        attempts_open: vec![0; hops],
        z: vec![Welford::new(); hops],
        service: vec![Welford::new(); hops],
        cycle: vec![Welford::new(); hops],
        attempts: vec![Welford::new(); hops],
        arrival_index: 0,
        next_arrival: 0.0,
        successful: 0,
        dropped: 0,
        preempted: 0,
        leaf_gen: f64::NAN,
        leaf_time: f64::NAN,
        deliveries: Vec::new(),
        segments: Vec::new(),
        age: AgeAccumulator::new(run.batches()),
        boundary_ids: run.boundary_ids(),
        next_boundary: 0,
        spacings: Vec::new(),
    };
    if let ArrivalModel::Poisson { rate } = arrival {
        let e: f64 = Exp1.sample(&mut sim.next_gap_rng());
        sim.next_arrival = e / rate;
    }

    for id in 0..=run.cycles() {
        let t = sim.acceptance_time(id);
        if sim.next_boundary < sim.boundary_ids.len() && id == sim.boundary_ids[sim.next_boundary] {
            sim.age.push_boundary(t);
            sim.next_boundary += 1;
        }
        if id == run.cycles() {
            break; // this update only timestamps the window end
        }
        sim.cascade(id, t);
    }
    Ok(sim.finish().into_result())
}

impl Chain<'_> {
    /// Same gap streams as the full-tree engine: the exogenous process is a
    /// pure function of the seed and a running arrival counter.
    fn next_gap_rng(&mut self) -> ChaCha8Rng {
        let rng = stream_rng(self.run.seed(), ARRIVAL_NODE, self.arrival_index);
        self.arrival_index += 1;
        rng
    }

    fn in_window(&self, update: u64) -> bool {
        update >= self.run.warmup_cycles() && update < self.run.cycles()
    }

    /// Time at which the source accepts update `id`, consuming (and
    /// counting) any exogenous arrivals discarded while it was busy.
    fn acceptance_time(&mut self, id: u64) -> f64 {
        match self.arrival {
            ArrivalModel::GenerateAtWill => {
                if id == 0 {
                    0.0
                } else {
                    self.busy_until[0]
                }
            }
            _ => loop {
                let t = self.next_arrival;
                match self.arrival {
                    ArrivalModel::GenerateAtWill => unreachable!(),
                    ArrivalModel::Poisson { rate } => {
                        let e: f64 = Exp1.sample(&mut self.next_gap_rng());
                        self.next_arrival = t + e / rate;
                    }
                    ArrivalModel::Deterministic { period } => {
                        self.next_arrival = t + period;
                    }
                }
                if t >= self.busy_until[0] {
                    return t;
                }
                // Discarded at the busy source; attributed to the update in
                // service, which is id - 1.
                if id > self.run.warmup_cycles() && id <= self.run.cycles() {
                    self.dropped += 1;
                }
            },
        }
    }

    /// Follow update `id` down the tagged path, starting from its source
    /// acceptance at `accept_time`.
    fn cascade(&mut self, id: u64, accept_time: f64) {
        let gen = accept_time;
        let mut t = accept_time;
        for level in 0..self.net.len() {
            if level > 0 && t < self.busy_until[level] {
                if self.in_window(id) {
                    self.dropped += 1;
                }
                return;
            }
            let hop = self.net.hops()[level];
            let mut rng = stream_rng(self.run.seed(), level as u32, id);
            let (delivered, x_t, duration) = self.sample_hop(&hop, &mut rng);
            let prev = self.last_completion[level];
            self.busy_until[level] = t + duration;
            self.last_completion[level] = t + duration;
            self.attempts_open[level] += 1;
            if self.in_window(id) {
                self.service[level].push(duration);
                if prev.is_finite() {
                    let wait = t - prev;
                    self.z[level].push(wait);
                    self.cycle[level].push(wait + duration);
                }
            }
            if !delivered {
                if self.in_window(id) {
                    self.preempted += 1;
                }
                return;
            }
            if self.in_window(id) {
                self.attempts[level].push(self.attempts_open[level] as f64);
            }
            self.attempts_open[level] = 0;
            t += x_t;
        }

        // Update `id` reached the tagged end node at time t.
        if self.in_window(id) {
            self.successful += 1;
        }
        self.deliveries.push(t);
        if self.leaf_time.is_finite() {
            self.segments.push((self.leaf_time, self.leaf_gen, t));
        }
        self.leaf_gen = gen;
        self.leaf_time = t;
    }

    /// Joint draw of the tagged child's delay and the transmitter's busy
    /// duration for one transmission; `delivered` says whether the copy is
    /// among the k earliest. Draw order (tagged delay first, then sibling
    /// spacings) is part of the stream contract.
    fn sample_hop(&mut self, hop: &HopConfig, rng: &mut ChaCha8Rng) -> (bool, f64, f64) {
        let d = hop.delay();
        let x_t = d.sample(rng);
        let (n, k) = (hop.n(), hop.k());
        if n == 1 {
            return (true, x_t, x_t);
        }
        let siblings = n - 1;
        self.spacings.clear();
        if k == n {
            push_spacings_prefix(d, siblings, siblings, rng, &mut self.spacings);
            let s_max = self.spacings[siblings as usize - 1];
            return (true, x_t, x_t.max(s_max));
        }
        push_spacings_prefix(d, k, siblings, rng, &mut self.spacings);
        let s_k = self.spacings[k as usize - 1];
        if x_t < s_k {
            let s_prev = if k >= 2 {
                self.spacings[k as usize - 2]
            } else {
                0.0
            };
            (true, x_t, x_t.max(s_prev))
        } else {
            (false, x_t, s_k)
        }
    }

    fn finish(mut self) -> Tally {
        let (w0, w1) = self.age.window();
        if self.leaf_time.is_finite() && self.leaf_time < w1 {
            self.segments.push((self.leaf_time, self.leaf_gen, w1));
        }
        for (t0, g, t1) in std::mem::take(&mut self.segments) {
            self.age.add_segment(t0, g, t1);
        }
        // Half-open on the left: the window opens at the acceptance that
        // stamps w0, so a delivery coinciding with it still belongs to the
        // warmup side (the full-tree engine resolves the tie the same way).
        let mut gap = Welford::new();
        let mut prev = f64::NAN;
        for &t in &self.deliveries {
            if prev.is_finite() && t > w0 && t <= w1 {
                gap.push(t - prev);
            }
            prev = t;
        }
        let hop_stats = (0..self.net.len())
            .map(|l| HopStats {
                interarrival: self.z[l].summary(),
                service: self.service[l].summary(),
                cycle: self.cycle[l].summary(),
                attempts: self.attempts[l].summary(),
            })
            .collect();
        Tally {
            age: self.age,
            hop_stats,
            successful: self.successful,
            dropped: self.dropped,
            preempted: self.preempted,
            success_gap: gap.summary(),
            end_nodes: 1,
        }
    }
}
