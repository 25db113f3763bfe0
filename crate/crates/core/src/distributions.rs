//! Shifted-exponential link delays and their order statistics.
//!
//! Every closed form downstream reduces to harmonic sums. For `n` i.i.d.
//! draws from `c + Exp(lambda)` the k-th smallest has
//!
//! ```text
//! E[X_(k:n)]   = c + (H_n - H_(n-k)) / lambda
//! Var[X_(k:n)] = (G_n - G_(n-k)) / lambda^2
//! ```
//!
//! where `H_n = sum 1/j` and `G_n = sum 1/j^2` (`G_n -> pi^2/6`). Sums are
//! accumulated with Neumaier compensation so values stay within a few ulps
//! of exact over the supported range (`n <= 10^6` is the design target).
//!
//! Sampling the `k` smallest of `n` draws uses the exponential-spacings
//! representation: the gap between consecutive order statistics of `Exp(l)`
//! is `Exp(l * (n - i + 1))`, which costs O(k) instead of O(n log n). A
//! sort-based sampler is kept alongside it as a cross-check oracle.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::Serialize;

use crate::error::{Error, Result};

// ======================== link-delay distribution ========================

/// Link delay `shift + Exp(rate)`: minimum latency `shift`, exponential tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftedExp {
    rate: f64,
    shift: f64,
}

impl ShiftedExp {
    /// Requires `rate > 0` and `shift >= 0`, both finite.
    pub fn new(rate: f64, shift: f64) -> Result<Self> {
        if !rate.is_finite() || rate <= 0.0 {
            return Err(Error::Param {
                name: "rate",
                constraint: "positive and finite",
                value: rate,
            });
        }
        if !shift.is_finite() || shift < 0.0 {
            return Err(Error::Param {
                name: "shift",
                constraint: "nonnegative and finite",
                value: shift,
            });
        }
        Ok(Self { rate, shift })
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// `E[X] = shift + 1/rate`.
    pub fn mean(&self) -> f64 {
        self.shift + 1.0 / self.rate
    }

    /// `Var[X] = 1/rate^2`.
    pub fn variance(&self) -> f64 {
        1.0 / (self.rate * self.rate)
    }

    /// Draws one delay.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let e: f64 = Exp1.sample(rng);
        self.shift + e / self.rate
    }
}

// ============================ harmonic sums ==============================

/// Neumaier (improved Kahan) compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Harmonic number `H_n = sum_{j=1..n} 1/j` by exact compensated summation.
///
/// Monotone nondecreasing in `n`. Rejects `n = 0`.
pub fn harmonic(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroHarmonicIndex);
    }
    let mut acc = Neumaier::default();
    // Smallest terms first so the compensation has the least work to do.
    for j in (1..=n).rev() {
        acc.add(1.0 / j as f64);
    }
    Ok(acc.value())
}

/// Generalized harmonic number `G_n = sum_{j=1..n} 1/j^2` (`G_0 = 0`).
///
/// Converges to `pi^2/6`; used for order-statistic variances.
pub fn gen_harmonic2(n: u64) -> f64 {
    let mut acc = Neumaier::default();
    for j in (1..=n).rev() {
        let x = j as f64;
        acc.add(1.0 / (x * x));
    }
    acc.value()
}

/// `H_n - H_(n-k)` computed directly as the tail `sum_{j=n-k+1..n} 1/j`,
/// avoiding cancellation between two large sums.
fn harmonic_tail(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    let mut acc = Neumaier::default();
    for j in (n - k + 1)..=n {
        acc.add(1.0 / j as f64);
    }
    acc.value()
}

/// `G_n - G_(n-k)` as the tail `sum_{j=n-k+1..n} 1/j^2`.
fn gen_harmonic2_tail(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    let mut acc = Neumaier::default();
    for j in (n - k + 1)..=n {
        let x = j as f64;
        acc.add(1.0 / (x * x));
    }
    acc.value()
}

// ========================= order-statistic moments =======================

/// First and second moments of `X_(k:n)` for shifted-exponential draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderStatMoments {
    pub mean: f64,
    pub variance: f64,
    pub second_moment: f64,
}

fn check_threshold(k: u32, n: u32) -> Result<()> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::Threshold { k, n });
    }
    Ok(())
}

/// Moments of the k-th smallest of `n` i.i.d. draws from `d`.
///
/// `mean = c + (H_n - H_(n-k))/l`, `variance = (G_n - G_(n-k))/l^2`, and
/// the second moment follows from `Var + mean^2` expanded so each term is
/// evaluated directly from the harmonic tails.
pub fn order_stat_moments(d: &ShiftedExp, k: u32, n: u32) -> Result<OrderStatMoments> {
    check_threshold(k, n)?;
    let hd = harmonic_tail(n as u64, k as u64);
    let gd = gen_harmonic2_tail(n as u64, k as u64);
    let l = d.rate;
    let c = d.shift;
    let mean = c + hd / l;
    let variance = gd / (l * l);
    let second_moment = c * c + 2.0 * c * hd / l + (hd * hd + gd) / (l * l);
    Ok(OrderStatMoments {
        mean,
        variance,
        second_moment,
    })
}

/// Mean delay of an update copy that is among the earliest `k` of `n`:
/// `(1/k) * sum_{i=1..k} E[X_(i:n)] = c + 1/l - ((n-k)/(k l)) (H_n - H_(n-k))`.
///
/// Equals `E[X_(1:n)]` at `k = 1` and the plain mean `c + 1/l` at `k = n`.
pub fn mean_earliest_k_service(d: &ShiftedExp, k: u32, n: u32) -> Result<f64> {
    check_threshold(k, n)?;
    let hd = harmonic_tail(n as u64, k as u64);
    let l = d.rate;
    Ok(d.shift + 1.0 / l - (n - k) as f64 / (k as f64 * l) * hd)
}

// ============================== sampling =================================

/// Samples the `k` smallest of `n` i.i.d. draws from `d`, sorted ascending,
/// in O(k) via exponential spacings.
pub fn sample_order_stat_prefix<R: Rng + ?Sized>(
    d: &ShiftedExp,
    k: u32,
    n: u32,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_threshold(k, n)?;
    let mut out = Vec::with_capacity(k as usize);
    push_spacings_prefix(d, k, n, rng, &mut out);
    Ok(out)
}

/// Spacings core shared with the simulators: appends the `k` smallest of
/// `n` draws to `out`. Caller guarantees `1 <= k <= n`.
pub(crate) fn push_spacings_prefix<R: Rng + ?Sized>(
    d: &ShiftedExp,
    k: u32,
    n: u32,
    rng: &mut R,
    out: &mut Vec<f64>,
) {
    let mut acc = 0.0_f64;
    for i in 0..k {
        let e: f64 = Exp1.sample(rng);
        acc += e / (d.rate * (n - i) as f64);
        out.push(d.shift + acc);
    }
}

/// Sort-based reference sampler: draws all `n` delays, sorts, returns the
/// first `k`. O(n log n); retained as an oracle for the spacings route.
pub fn sample_order_stat_prefix_sorted<R: Rng + ?Sized>(
    d: &ShiftedExp,
    k: u32,
    n: u32,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_threshold(k, n)?;
    let mut all: Vec<f64> = (0..n).map(|_| d.sample(rng)).collect();
    all.sort_unstable_by(|a, b| a.total_cmp(b));
    all.truncate(k as usize);
    Ok(all)
}

// ========================== precomputed tables ===========================

/// Prefix tables of `H_j`, `G_j` and `sum_{i<=j} H_i` for a fixed `n`.
///
/// The optimizers evaluate order-statistic moments thousands of times per
/// search; this turns each evaluation into O(1) lookups. Tail sums
/// `H_n - H_j` and `G_n - G_j` are stored directly (accumulated from the
/// small end) rather than as differences of prefix rows, because for
/// `k << n` the difference of two near-equal prefix values would cancel
/// most of its significant digits. The cumulative tail row gives a
/// second, independent route to the earliest-k service mean (summing the
/// per-order-statistic means), which the tests compare against the closed
/// form in [`mean_earliest_k_service`].
#[derive(Debug, Clone)]
pub struct OrderStatTable {
    n: u32,
    h: Vec<f64>,      // H_j
    h_cum: Vec<f64>,  // sum_{i=1..j} H_i
    h_tail: Vec<f64>, // H_n - H_j
    g_tail: Vec<f64>, // G_n - G_j
    d_tail: Vec<f64>, // sum_{m=j..n-1} (H_n - H_m)
}

impl OrderStatTable {
    pub fn new(n: u32) -> Self {
        let len = n as usize + 1;
        let mut h = Vec::with_capacity(len);
        let mut h_cum = Vec::with_capacity(len);
        let mut ah = Neumaier::default();
        let mut ac = Neumaier::default();
        h.push(0.0);
        h_cum.push(0.0);
        for j in 1..=n as u64 {
            ah.add(1.0 / j as f64);
            h.push(ah.value());
            ac.add(ah.value());
            h_cum.push(ac.value());
        }
        let mut h_tail = vec![0.0; len];
        let mut g_tail = vec![0.0; len];
        let mut d_tail = vec![0.0; len];
        let mut th = Neumaier::default();
        let mut tg = Neumaier::default();
        let mut td = Neumaier::default();
        for j in (0..n as usize).rev() {
            let x = (j + 1) as f64;
            th.add(1.0 / x);
            tg.add(1.0 / (x * x));
            h_tail[j] = th.value();
            g_tail[j] = tg.value();
            td.add(h_tail[j]);
            d_tail[j] = td.value();
        }
        Self {
            n,
            h,
            h_cum,
            h_tail,
            g_tail,
            d_tail,
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn harmonic(&self, j: u32) -> f64 {
        self.h[j as usize]
    }

    /// `sum_{i=1..j} H_i`.
    pub fn harmonic_cum(&self, j: u32) -> f64 {
        self.h_cum[j as usize]
    }

    fn h_diff(&self, k: u32) -> f64 {
        self.h_tail[(self.n - k) as usize]
    }

    fn g_diff(&self, k: u32) -> f64 {
        self.g_tail[(self.n - k) as usize]
    }

    /// `E[X_(k:n)]`.
    pub fn mean(&self, d: &ShiftedExp, k: u32) -> f64 {
        d.shift() + self.h_diff(k) / d.rate()
    }

    /// `Var[X_(k:n)]`.
    pub fn variance(&self, d: &ShiftedExp, k: u32) -> f64 {
        self.g_diff(k) / (d.rate() * d.rate())
    }

    /// `(1/k) sum_{i=1..k} E[X_(i:n)]` via the cumulative tail row:
    /// `sum_{i=1..k} (H_n - H_(n-i)) = sum_{m=n-k..n-1} (H_n - H_m)`.
    pub fn mean_earliest(&self, d: &ShiftedExp, k: u32) -> f64 {
        let tail = self.d_tail[(self.n - k) as usize];
        d.shift() + tail / (k as f64 * d.rate())
    }
}

// ================================ tests ==================================
