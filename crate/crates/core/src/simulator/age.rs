//! Time-average age accumulation over a batched measurement window.
//!
//! The age of a node is the sawtooth `t - g` where `g` is the generation
//! time of its freshest update. Simulators feed the accumulator linear
//! segments (one per inter-delivery interval and node); it clips them to
//! the measurement window, splits them across batch boundaries, and
//! integrates exactly, so the time average and per-batch means carry no
//! discretization error.
//!
//! Batch boundaries are the generation instants of evenly spaced source
//! cycles; they are pushed in increasing time order as the simulation
//! discovers them, always before any segment reaching past them (events
//! are processed in time order).

#[derive(Debug)]
pub(crate) struct AgeAccumulator {
    bounds: Vec<f64>,
    bins: Vec<f64>,
    expected_bounds: usize,
}

impl AgeAccumulator {
    /// `batches` bins; expects `batches + 1` boundary pushes.
    pub fn new(batches: u32) -> Self {
        Self {
            bounds: Vec::with_capacity(batches as usize + 1),
            bins: vec![0.0; batches as usize],
            expected_bounds: batches as usize + 1,
        }
    }

    pub fn push_boundary(&mut self, t: f64) {
        debug_assert!(
            self.bounds.len() < self.expected_bounds,
            "too many boundaries"
        );
        debug_assert!(
            self.bounds.last().is_none_or(|&p| t > p),
            "boundaries must increase"
        );
        self.bounds.push(t);
    }

    pub fn window_start(&self) -> Option<f64> {
        self.bounds.first().copied()
    }

    pub fn is_closed(&self) -> bool {
        self.bounds.len() == self.expected_bounds
    }

    pub fn window(&self) -> (f64, f64) {
        debug_assert!(self.is_closed());
        (self.bounds[0], *self.bounds.last().unwrap())
    }

    /// Integrate the segment `age(t) = t - gen` over `[t0, t1]`, clipped
    /// to the known window and split across batch boundaries.
    pub fn add_segment(&mut self, t0: f64, gen: f64, t1: f64) {
        let Some(&w0) = self.bounds.first() else {
            return; // window not open yet
        };
        let cap = if self.is_closed() {
            *self.bounds.last().unwrap()
        } else {
            // Everything so far happens before the next, still unknown
            // boundary, so nothing needs clipping on the right.
            f64::INFINITY
        };
        let mut lo = t0.max(w0);
        let hi = t1.min(cap);
        if hi <= lo {
            return;
        }
        // Bin holding `lo`: last boundary <= lo.
        let mut idx = self.bounds.partition_point(|&b| b <= lo) - 1;
        while lo < hi {
            let edge = match self.bounds.get(idx + 1) {
                Some(&b) => b.min(hi),
                None => hi,
            };
            // integral of (t - gen) over [lo, edge]
            let bin = idx.min(self.bins.len() - 1);
            self.bins[bin] += (edge - lo) * (0.5 * (lo + edge) - gen);
            lo = edge;
            idx += 1;
        }
    }

    /// Total integral divided by window length and `nodes`.
    pub fn time_average(&self, nodes: u64) -> f64 {
        let (w0, w1) = self.window();
        self.bins.iter().sum::<f64>() / ((w1 - w0) * nodes as f64)
    }

    /// Per-batch time averages (each batch spans its own boundary pair).
    pub fn batch_means(&self, nodes: u64) -> Vec<f64> {
        self.bins
            .iter()
            .zip(self.bounds.windows(2))
            .map(|(b, w)| b / ((w[1] - w[0]) * nodes as f64))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn integrates_exactly_with_clipping_and_splitting() {
        let mut acc = AgeAccumulator::new(2);
        acc.push_boundary(10.0);
        // Segment entirely before the window: ignored.
        acc.add_segment(0.0, 0.0, 8.0);
        // Straddles the opening: only [10, 12] counts; gen = 4.
        acc.add_segment(6.0, 4.0, 12.0);
        acc.push_boundary(20.0);
        // Straddles the middle boundary: [12, 20] in bin 0... split below.
        acc.add_segment(12.0, 11.0, 24.0);
        acc.push_boundary(30.0);
        // Past the close: clipped at 30; gen = 24.
        acc.add_segment(24.0, 24.0, 40.0);

        // Bin 0 ([10, 20]): [10,12] with gen 4 -> 2*(11-4) = 14;
        //                   [12,20] with gen 11 -> 8*(16-11) = 40.
        // Bin 1 ([20, 30]): [20,24] gen 11 -> 4*(22-11) = 44;
        //                   [24,30] gen 24 -> 6*(27-24) = 18.
        assert!(close(acc.bins[0], 54.0));
        assert!(close(acc.bins[1], 62.0));
        assert!(close(acc.time_average(1), (54.0 + 62.0) / 20.0));
        let means = acc.batch_means(1);
        assert!(close(means[0], 5.4) && close(means[1], 6.2));
        assert_eq!(acc.window(), (10.0, 30.0));
    }

    #[test]
    fn averages_divide_by_node_count() {
        let mut acc = AgeAccumulator::new(2);
        acc.push_boundary(0.0);
        acc.push_boundary(1.0);
        acc.push_boundary(2.0);
        acc.add_segment(0.0, 0.0, 2.0); // node A: integral 2
        acc.add_segment(0.0, 0.0, 2.0); // node B: same
        assert!(close(acc.time_average(2), 1.0));
        assert!(close(acc.batch_means(2)[0], 0.5));
    }

    #[test]
    fn sawtooth_of_periodic_process_matches_closed_form() {
        // Deliveries every d with zero transit: age sweeps 0..d, average d/2.
        let d = 0.25;
        let mut acc = AgeAccumulator::new(10);
        let mut t = 0.0;
        for b in 0..=10 {
            acc.push_boundary(b as f64);
        }
        while t < 11.0 {
            acc.add_segment(t, t, t + d);
            t += d;
        }
        assert!(close(acc.time_average(1), d / 2.0));
        for m in acc.batch_means(1) {
            assert!(close(m, d / 2.0));
        }
    }
}
