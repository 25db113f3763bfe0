//! Event-driven simulation of every node in the multicast tree.
//!
//! Nodes are laid out level by level (source = node 0, end nodes last).
//! A transmitter that accepts an update samples all n child delays from
//! the stream keyed by `(seed, node, update)`, forwards to the k earliest
//! children, is busy until the k-th delivery, and counts the other n-k
//! copies as preempted. Deliveries pop off a time-ordered binary heap;
//! ties break on (node, push sequence) so runs replay identically.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand_distr::{Distribution, Exp1};

use super::age::AgeAccumulator;
use super::rng::{stream_rng, ARRIVAL_NODE};
use super::{ArrivalModel, HopStats, RunConfig, Tally};
use crate::analytic::NetworkConfig;
use crate::error::Result;
use crate::simulator::SimResult;
use crate::stats::Welford;

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    node: u32,
    seq: u64,
    update: u64,
    gen: f64,
    arrival: bool,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}
impl Eq for Event {}
impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Event {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.time
            .total_cmp(&other.time)
            .then_with(|| self.node.cmp(&other.node))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

struct Sim<'a> {
    net: &'a NetworkConfig,
    run: &'a RunConfig,
    arrival: ArrivalModel,
    /// Node id where each level starts; last entry = total node count.
    start: Vec<u32>,
    heap: BinaryHeap<Reverse<Event>>,
    seq: u64,
    busy_until: Vec<f64>,
    last_completion: Vec<f64>,
    leaf_gen: Vec<f64>,
    leaf_time: Vec<f64>,
    z: Vec<Welford>,
    service: Vec<Welford>,
    cycle: Vec<Welford>,
    age: AgeAccumulator,
    boundary_ids: Vec<u64>,
    next_boundary: usize,
    accepted: u64,
    successful: u64,
    dropped: u64,
    preempted: u64,
    gap: Welford,
    last_first_leaf_delivery: f64,
    arrival_index: u64,
    delays: Vec<f64>,
    order: Vec<u32>,
}

pub(super) fn run(
    net: &NetworkConfig,
    arrival: ArrivalModel,
    run: &RunConfig,
) -> Result<SimResult> {
    super::check_tree_size(net)?;
    let hops = net.len();
    let mut start = Vec::with_capacity(hops + 2);
    start.push(0u32);
    let mut level = 1u64;
    let mut total = 1u64;
    for hop in net.hops() {
        start.push(total as u32);
        level *= hop.n() as u64;
        total += level;
    }
    start.push(total as u32); // one past the leaf level
                              // start[l] is where level l begins; leaves live at start[hops].

    let leaves = (total as u32 - start[hops]) as usize;
    let mut sim = Sim {
        net,
        run,
        arrival,
        start,
        heap: BinaryHeap::new(),
        seq: 0,
        busy_until: vec![f64::NEG_INFINITY; total as usize],
        last_completion: vec![f64::NAN; total as usize],
        leaf_gen: vec![f64::NAN; leaves],
        leaf_time: vec![f64::NAN; leaves],
        z: vec![Welford::new(); hops],
        service: vec![Welford::new(); hops],
        cycle: vec![Welford::new(); hops],
        age: AgeAccumulator::new(run.batches()),
        boundary_ids: run.boundary_ids(),
        next_boundary: 0,
        accepted: 0,
        successful: 0,
        dropped: 0,
        preempted: 0,
        gap: Welford::new(),
        last_first_leaf_delivery: f64::NAN,
        arrival_index: 0,
        delays: Vec::new(),
        order: Vec::new(),
    };
    sim.schedule_first_arrival();
    while let Some(Reverse(ev)) = sim.heap.pop() {
        if ev.arrival {
            sim.on_arrival(ev);
        } else {
            sim.on_delivery(ev);
        }
    }
    Ok(sim.finish().into_result())
}

impl Sim<'_> {
    fn push_event(&mut self, mut ev: Event) {
        ev.seq = self.seq;
        self.seq += 1;
        self.heap.push(Reverse(ev));
    }

    fn push_arrival(&mut self, time: f64) {
        self.push_event(Event {
            time,
            node: ARRIVAL_NODE,
            seq: 0,
            update: 0,
            gen: time,
            arrival: true,
        });
    }

    fn schedule_first_arrival(&mut self) {
        match self.arrival {
            ArrivalModel::GenerateAtWill | ArrivalModel::Deterministic { .. } => {
                self.push_arrival(0.0);
            }
            ArrivalModel::Poisson { rate } => {
                let e: f64 = Exp1.sample(&mut self.next_gap_rng());
                self.push_arrival(e / rate);
            }
        }
    }

    /// Each interarrival gap draws from its own stream keyed by a running
    /// arrival counter, so the exogenous process is identical for every
    /// engine run with the same seed.
    fn next_gap_rng(&mut self) -> rand_chacha::ChaCha8Rng {
        let rng = stream_rng(self.run.seed(), ARRIVAL_NODE, self.arrival_index);
        self.arrival_index += 1;
        rng
    }

    fn next_exogenous_arrival(&mut self, now: f64) {
        match self.arrival {
            ArrivalModel::GenerateAtWill => unreachable!("scheduled at completions"),
            ArrivalModel::Poisson { rate } => {
                let e: f64 = Exp1.sample(&mut self.next_gap_rng());
                self.push_arrival(now + e / rate);
            }
            ArrivalModel::Deterministic { period } => {
                self.push_arrival(now + period);
            }
        }
    }

    fn on_arrival(&mut self, ev: Event) {
        match self.arrival {
            ArrivalModel::GenerateAtWill => self.accept_at_source(ev.time),
            _ => {
                if ev.time < self.busy_until[0] {
                    // Discarded at the busy source; attributed to the
                    // update currently in service.
                    if self.accepted > self.run.warmup_cycles()
                        && self.accepted <= self.run.cycles()
                    {
                        self.dropped += 1;
                    }
                } else {
                    self.accept_at_source(ev.time);
                }
                if self.accepted <= self.run.cycles() {
                    self.next_exogenous_arrival(ev.time);
                }
            }
        }
    }

    fn accept_at_source(&mut self, t: f64) {
        let id = self.accepted;
        self.accepted += 1;
        if self.next_boundary < self.boundary_ids.len()
            && id == self.boundary_ids[self.next_boundary]
        {
            self.age.push_boundary(t);
            self.next_boundary += 1;
        }
        if id == self.run.cycles() {
            return; // window closed; this update only timestamps it
        }
        self.transmit(0, t, t, id);
        if self.arrival == ArrivalModel::GenerateAtWill {
            self.push_arrival(self.busy_until[0]);
        }
    }

    fn level_of(&self, node: u32) -> usize {
        // L+1 levels at most; a linear scan is cheaper than it looks.
        let mut level = 0;
        while self.start[level + 1] <= node {
            level += 1;
        }
        level
    }

    fn in_window(&self, update: u64) -> bool {
        update >= self.run.warmup_cycles() && update < self.run.cycles()
    }

    fn transmit(&mut self, node: u32, t: f64, gen: f64, update: u64) {
        let level = self.level_of(node);
        let hop = self.net.hops()[level];
        let (n, k) = (hop.n() as usize, hop.k() as usize);

        let mut rng = stream_rng(self.run.seed(), node, update);
        self.delays.clear();
        for _ in 0..n {
            self.delays.push(hop.delay().sample(&mut rng));
        }
        self.order.clear();
        self.order.extend(0..n as u32);
        let delays = &self.delays;
        self.order
            .sort_unstable_by(|&a, &b| delays[a as usize].total_cmp(&delays[b as usize]));

        let duration = self.delays[self.order[k - 1] as usize];
        let completion = t + duration;
        let prev_completion = self.last_completion[node as usize];
        self.busy_until[node as usize] = completion;
        self.last_completion[node as usize] = completion;

        if self.in_window(update) {
            self.service[level].push(duration);
            if prev_completion.is_finite() {
                let wait = t - prev_completion;
                self.z[level].push(wait);
                self.cycle[level].push(wait + duration);
            }
            self.preempted += (n - k) as u64;
        }

        let child_base = self.start[level + 1] + (node - self.start[level]) * n as u32;
        for i in 0..k {
            let slot = self.order[i];
            self.push_event(Event {
                time: t + self.delays[slot as usize],
                node: child_base + slot,
                seq: 0,
                update,
                gen,
                arrival: false,
            });
        }
    }

    fn on_delivery(&mut self, ev: Event) {
        let leaf_start = self.start[self.net.len()];
        if ev.node < leaf_start {
            // Relay: accept if idle, otherwise the copy is lost.
            if ev.time < self.busy_until[ev.node as usize] {
                if self.in_window(ev.update) {
                    self.dropped += 1;
                }
            } else {
                self.transmit(ev.node, ev.time, ev.gen, ev.update);
            }
            return;
        }

        // End node.
        if self.in_window(ev.update) {
            self.successful += 1;
        }
        if ev.node == leaf_start {
            if self.last_first_leaf_delivery.is_finite()
                && self.age.window_start().is_some_and(|w0| ev.time >= w0)
                && !(self.age.is_closed() && ev.time > self.age.window().1)
            {
                self.gap.push(ev.time - self.last_first_leaf_delivery);
            }
            self.last_first_leaf_delivery = ev.time;
        }
        let li = (ev.node - leaf_start) as usize;
        if self.leaf_time[li].is_finite() {
            if ev.gen <= self.leaf_gen[li] {
                return; // stale copy; cannot happen along a single path
            }
            let (t0, g0) = (self.leaf_time[li], self.leaf_gen[li]);
            self.age.add_segment(t0, g0, ev.time);
        }
        self.leaf_gen[li] = ev.gen;
        self.leaf_time[li] = ev.time;
    }

    fn finish(mut self) -> Tally {
        let (_, w1) = self.age.window();
        for li in 0..self.leaf_time.len() {
            if self.leaf_time[li].is_finite() && self.leaf_time[li] < w1 {
                self.age
                    .add_segment(self.leaf_time[li], self.leaf_gen[li], w1);
            }
        }
        let hop_stats = (0..self.net.len())
            .map(|l| HopStats {
                interarrival: self.z[l].summary(),
                service: self.service[l].summary(),
                cycle: self.cycle[l].summary(),
                attempts: Welford::new().summary(),
            })
            .collect();
        Tally {
            age: self.age,
            hop_stats,
            successful: self.successful,
            dropped: self.dropped,
            preempted: self.preempted,
            success_gap: self.gap.summary(),
            end_nodes: self.leaf_time.len() as u64,
        }
    }
}
