//! Exact time-average age formulas for earliest-k multicast trees.
//!
//! Model: a source multicasts updates through `L` hops of relays, each
//! transmitter forwarding to `n` children and moving on once the earliest
//! `k` acknowledge; the remaining transmissions are terminated and busy
//! relays discard arrivals. With generate-at-will sources the age process
//! at an end node is a renewal reward: if `Y` is the interval between
//! consecutive service starts at the last-hop transmitter and `M` counts
//! attempts until the tagged node is reached (geometric, `p = k/n`), then
//!
//! ```text
//! age = E[Xbar] + (E[M^2] / 2 E[M]) * E[Y] + Var[Y] / (2 E[Y])
//! ```
//!
//! where `E[Xbar]` is the mean delivery delay of copies that make the
//! earliest-k cut. `E[M^2]/(2 E[M])` collapses to `(2n - k)/(2k)`.
//!
//! The "exact" entry points take the residual-wait moments of the last
//! hop's interarrival process as an input ([`InterarrivalMoments`]); the
//! "upper" entry points bound them by an exponential interarrival with the
//! same mean, which is what makes multihop pipelines tractable.

use serde::Serialize;

use crate::distributions::{
    mean_earliest_k_service, order_stat_moments, OrderStatMoments, ShiftedExp,
};
use crate::error::{Error, Result};

// ============================ configuration ==============================

/// One hop of the tree: every transmitter at this depth forwards to `n`
/// children and stops after the earliest `k` deliveries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HopConfig {
    n: u32,
    k: u32,
    delay: ShiftedExp,
}

impl HopConfig {
    /// Requires `1 <= k <= n`.
    pub fn new(n: u32, k: u32, delay: ShiftedExp) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(Error::Threshold { k, n });
        }
        Ok(Self { n, k, delay })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn delay(&self) -> &ShiftedExp {
        &self.delay
    }

    /// Per-attempt delivery probability of a fixed child, `k/n`.
    pub fn success_probability(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Moments of this hop's service time `X_(k:n)`. Infallible because the
    /// constructor already validated the threshold.
    pub fn service_moments(&self) -> OrderStatMoments {
        order_stat_moments(&self.delay, self.k, self.n).expect("validated hop")
    }

    /// Mean delay of copies delivered within the earliest-k cut.
    pub fn mean_earliest(&self) -> f64 {
        mean_earliest_k_service(&self.delay, self.k, self.n).expect("validated hop")
    }

    /// Mean attempts per delivery to a fixed child, `E[M] = n/k`.
    pub fn mean_attempts(&self) -> f64 {
        self.n as f64 / self.k as f64
    }
}

/// Hop parameters from the source (first entry) to the end nodes (last).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkConfig {
    hops: Vec<HopConfig>,
}

impl NetworkConfig {
    pub fn new(hops: Vec<HopConfig>) -> Result<Self> {
        if hops.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        Ok(Self { hops })
    }

    pub fn hops(&self) -> &[HopConfig] {
        &self.hops
    }

    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty hop lists
    }
}

/// Moments of the last-hop transmitter's cycle that the exact formulas
/// need from the caller: `mean_residual = E[Z]` is the idle wait between
/// completing a service and accepting the next update, and `var_cycle =
/// Var[X_(k:n) + Z]` is the variance of the full inter-service interval
/// (the joint variance, so dependence between service and wait is the
/// caller's to supply — simulator estimates plug in directly).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterarrivalMoments {
    pub mean_residual: f64,
    pub var_cycle: f64,
}

impl InterarrivalMoments {
    pub fn new(mean_residual: f64, var_cycle: f64) -> Result<Self> {
        if !mean_residual.is_finite() || mean_residual < 0.0 {
            return Err(Error::Param {
                name: "mean_residual",
                constraint: "nonnegative and finite",
                value: mean_residual,
            });
        }
        if !var_cycle.is_finite() || var_cycle < 0.0 {
            return Err(Error::Param {
                name: "var_cycle",
                constraint: "nonnegative and finite",
                value: var_cycle,
            });
        }
        Ok(Self {
            mean_residual,
            var_cycle,
        })
    }

    /// Generate-at-will cycle: zero wait, cycle variance is the service
    /// variance alone.
    pub fn generate_at_will(hop: &HopConfig) -> Self {
        Self {
            mean_residual: 0.0,
            var_cycle: hop.service_moments().variance,
        }
    }

    /// Exponential interarrival with mean `mean`: the wait has the full
    /// interarrival distribution (memoryless), so `E[Z] = mean` and
    /// `Var[Z] = mean^2` on top of the service variance.
    pub fn exponential(hop: &HopConfig, mean: f64) -> Self {
        Self {
            mean_residual: mean,
            var_cycle: hop.service_moments().variance + mean * mean,
        }
    }
}

// ============================ age breakdown ==============================

/// Additive decomposition of a time-average age value.
///
/// `total` always equals `service_term + cycle_term + variance_term +
/// sum(extra_terms)`; the extras carry formula-specific residual pieces so
/// each published expression stays visible term by term. `service_per_hop`
/// is diagnostic only (it sums to `service_term`, not into `total` again).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgeBreakdown {
    pub total: f64,
    pub service_term: f64,
    pub cycle_term: f64,
    pub variance_term: f64,
    pub extra_terms: Vec<(String, f64)>,
    pub service_per_hop: Vec<f64>,
}

impl AgeBreakdown {
    fn assemble(
        service_per_hop: Vec<f64>,
        cycle_term: f64,
        variance_term: f64,
        extra_terms: Vec<(String, f64)>,
    ) -> Self {
        let service_term = sum_ascending(&service_per_hop);
        let mut terms: Vec<f64> = vec![service_term, cycle_term, variance_term];
        terms.extend(extra_terms.iter().map(|(_, v)| *v));
        let total = sum_ascending(&terms);
        Self {
            total,
            service_term,
            cycle_term,
            variance_term,
            extra_terms,
            service_per_hop,
        }
    }

    /// All additive components in order: the three named terms then extras.
    pub fn components(&self) -> Vec<(String, f64)> {
        let mut out = vec![
            ("service".to_string(), self.service_term),
            ("cycle".to_string(), self.cycle_term),
            ("variance".to_string(), self.variance_term),
        ];
        out.extend(self.extra_terms.iter().cloned());
        out
    }
}

/// Sums smallest-magnitude first so the total is reproducible and tight.
fn sum_ascending(terms: &[f64]) -> f64 {
    let mut v = terms.to_vec();
    v.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    v.iter().sum()
}

// ========================== building blocks =============================

/// Moments of the geometric attempt count with success probability `p`:
/// returns `(E[M], E[M^2]) = (1/p, (2 - p)/p^2)`.
pub fn geometric_moments(p: f64) -> Result<(f64, f64)> {
    if !p.is_finite() || p <= 0.0 || p > 1.0 {
        return Err(Error::Param {
            name: "success probability",
            constraint: "in (0, 1]",
            value: p,
        });
    }
    Ok((1.0 / p, (2.0 - p) / (p * p)))
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::Param {
            name,
            constraint: "positive and finite",
            value,
        });
    }
    Ok(())
}

/// `(2n - k) / (2k)`, the geometric cycle weight `E[M^2] / (2 E[M])`.
fn cycle_weight(hop: &HopConfig) -> f64 {
    (2.0 * hop.n as f64 - hop.k as f64) / (2.0 * hop.k as f64)
}

/// Single-relay exact age: service mean of delivered copies plus the
/// geometric-weighted cycle `Y = X_(k:n) + Z` and its variance penalty,
///
/// ```text
/// age = (1/k) sum E[X_(i:n)] + ((2n-k)/(2k)) (E[X_(k:n)] + E[Z])
///       + Var[X_(k:n) + Z] / (2 (E[X_(k:n)] + E[Z]))
/// ```
pub fn age_building_block(hop: &HopConfig, z: &InterarrivalMoments) -> Result<AgeBreakdown> {
    let z = InterarrivalMoments::new(z.mean_residual, z.var_cycle)?;
    let m = hop.service_moments();
    let e_y = m.mean + z.mean_residual;
    if e_y <= 0.0 {
        return Err(Error::Param {
            name: "mean cycle length",
            constraint: "positive",
            value: e_y,
        });
    }
    Ok(AgeBreakdown::assemble(
        vec![hop.mean_earliest()],
        cycle_weight(hop) * e_y,
        z.var_cycle / (2.0 * e_y),
        vec![],
    ))
}

/// Single relay fed by exogenous Poisson(`mu`) arrivals (busy relay drops
/// them). Exact because the wait after a completion is memoryless:
/// `E[Z] = 1/mu`, `Var[Z] = 1/mu^2`, independent of the service. The
/// four-term shape keeps the wait-variance residual separate:
///
/// ```text
/// age = (1/k) sum E[X_(i:n)] + ((2n-k)/(2k mu)) (mu E + 1)
///       + mu Var[X_(k:n)] / (2 (mu E + 1)) + 1 / (2 (mu^2 E + mu))
/// ```
pub fn age_building_block_poisson(hop: &HopConfig, mu: f64) -> Result<AgeBreakdown> {
    check_positive("mu", mu)?;
    let m = hop.service_moments();
    let denom = mu * m.mean + 1.0;
    Ok(AgeBreakdown::assemble(
        vec![hop.mean_earliest()],
        cycle_weight(hop) * denom / mu,
        mu * m.variance / (2.0 * denom),
        vec![(
            "variance_residual".to_string(),
            1.0 / (2.0 * (mu * mu * m.mean + mu)),
        )],
    ))
}

/// Exact multihop age given the last hop's residual-wait moments: earlier
/// hops only contribute their delivered-copy service means, the cycle and
/// variance terms belong to the last hop alone.
pub fn age_multi_hop_exact(
    net: &NetworkConfig,
    z_last: &InterarrivalMoments,
) -> Result<AgeBreakdown> {
    let z = InterarrivalMoments::new(z_last.mean_residual, z_last.var_cycle)?;
    let last = *net.hops().last().expect("non-empty network");
    let services: Vec<f64> = net.hops().iter().map(HopConfig::mean_earliest).collect();
    let m = last.service_moments();
    let e_y = m.mean + z.mean_residual;
    Ok(AgeBreakdown::assemble(
        services,
        cycle_weight(&last) * e_y,
        z.var_cycle / (2.0 * e_y),
        vec![],
    ))
}

/// Two-hop exact age; `z2` describes the middle relays' idle wait and
/// cycle variance (in simulation hybrids these come from measured runs).
pub fn age_two_hop_exact(
    h1: &HopConfig,
    h2: &HopConfig,
    z2: &InterarrivalMoments,
) -> Result<AgeBreakdown> {
    let net = NetworkConfig::new(vec![*h1, *h2])?;
    age_multi_hop_exact(&net, z2)
}

/// Two-hop upper bound: middle-relay interarrival replaced by an
/// exponential with mean `E[M_1] E[X_(k1:n)]`, written out term by term,
///
/// ```text
/// age' = sum of both hops' service means
///        + ((2n-k2)/(2k2)) E[Xt_(k2:n)]          (cycle, own service)
///        + ((2n-k2)/(2k2)) (n/k1) E[X_(k1:n)]    (cycle, interarrival)
///        + Var[Xt_(k2:n)] / (2 E[Y])             (variance, own service)
///        + ((n/k1) E[X_(k1:n)])^2 / (2 E[Y])     (variance, interarrival)
/// ```
///
/// with `E[Y] = E[Xt_(k2:n)] + (n/k1) E[X_(k1:n)]`. Kept as a direct
/// transcription; the tests assert it coincides with the general recursion
/// in [`age_multi_hop_upper`] at `L = 2`.
pub fn age_two_hop_upper(h1: &HopConfig, h2: &HopConfig) -> Result<AgeBreakdown> {
    let m1 = h1.service_moments();
    let m2 = h2.service_moments();
    let e_z = h1.mean_attempts() * m1.mean;
    let e_y = m2.mean + e_z;
    let w = cycle_weight(h2);
    Ok(AgeBreakdown::assemble(
        vec![h1.mean_earliest(), h2.mean_earliest()],
        w * m2.mean,
        m2.variance / (2.0 * e_y),
        vec![
            ("cycle_residual".to_string(), w * e_z),
            ("variance_residual".to_string(), e_z * e_z / (2.0 * e_y)),
        ],
    ))
}

/// Multihop upper bound: each relay stage's interarrival is bounded by an
/// exponential whose mean follows the pipeline recursion
///
/// ```text
/// E[S_0] = 0,    E[S_l] = E[M_l] (E[X_(kl:n)] + E[S_(l-1)])
/// ```
///
/// so the last hop sees `E[Z_L] = E[S_(L-1)]` and `Var[Z_L] = E[S_(L-1)]^2`.
/// At `L = 1` this is the exact generate-at-will single-hop age.
pub fn age_multi_hop_upper(net: &NetworkConfig) -> Result<AgeBreakdown> {
    let hops = net.hops();
    let last = *hops.last().expect("non-empty network");
    let services: Vec<f64> = hops.iter().map(HopConfig::mean_earliest).collect();

    let mut e_s = 0.0; // E[S_l] for the stages feeding the next hop
    for hop in &hops[..hops.len() - 1] {
        e_s = hop.mean_attempts() * (hop.service_moments().mean + e_s);
    }

    let m = last.service_moments();
    let e_y = m.mean + e_s;
    let w = cycle_weight(&last);
    Ok(AgeBreakdown::assemble(
        services,
        w * m.mean,
        m.variance / (2.0 * e_y),
        vec![
            ("cycle_residual".to_string(), w * e_s),
            ("variance_residual".to_string(), e_s * e_s / (2.0 * e_y)),
        ],
    ))
}

// ================================ tests ==================================

#[cfg(test)]
mod tests {
    use super::*;

    fn hop(n: u32, k: u32, rate: f64, shift: f64) -> HopConfig {
        HopConfig::new(n, k, ShiftedExp::new(rate, shift).unwrap()).unwrap()
    }

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn geometric_moment_values() {
        let (m, m2) = geometric_moments(0.5).unwrap();
        assert_eq!(m, 2.0);
        assert_eq!(m2, 6.0);
        let (m, m2) = geometric_moments(1.0).unwrap();
        assert_eq!(m, 1.0);
        assert_eq!(m2, 1.0);
        assert!(geometric_moments(0.0).is_err());
        assert!(geometric_moments(1.5).is_err());
        assert!(geometric_moments(f64::NAN).is_err());
    }

    #[test]
    fn single_link_generate_at_will() {
        // n = k = 1, unit rate and shift: E[X] = 2, Var = 1, so the renewal
        // form gives 2 + 1 + 1/4 = 3.25.
        let h = hop(1, 1, 1.0, 1.0);
        let z = InterarrivalMoments::generate_at_will(&h);
        let b = age_building_block(&h, &z).unwrap();
        assert!(rel_close(b.total, 3.25, 1e-14));
        assert!(rel_close(b.service_term, 2.0, 1e-14));
        assert!(rel_close(b.cycle_term, 1.0, 1e-14));
        assert!(rel_close(b.variance_term, 0.25, 1e-14));
    }

    #[test]
    fn single_link_poisson_unit_rate() {
        // Same link with Poisson(1) arrivals: 2 + 3/2 + 1/6 + 1/6 = 23/6.
        let h = hop(1, 1, 1.0, 1.0);
        let b = age_building_block_poisson(&h, 1.0).unwrap();
        assert!(rel_close(b.total, 23.0 / 6.0, 1e-14));
        assert_eq!(b.extra_terms.len(), 1);
    }

    #[test]
    fn poisson_form_matches_general_form() {
        // Feeding the memoryless-wait moments through the general entry
        // point must reproduce the specialized expression.
        for (n, k, rate, shift, mu) in [
            (10u32, 5u32, 1.0, 1.0, 1.0),
            (10, 9, 2.0, 0.5, 0.25),
            (40, 13, 0.7, 0.0, 4.0),
            (7, 7, 1.3, 2.0, 10.0),
        ] {
            let h = hop(n, k, rate, shift);
            let z = InterarrivalMoments::exponential(&h, 1.0 / mu);
            let a = age_building_block(&h, &z).unwrap();
            let b = age_building_block_poisson(&h, mu).unwrap();
            assert!(rel_close(a.total, b.total, 1e-12), "n={n} k={k} mu={mu}");
        }
    }

    #[test]
    fn breakdown_total_is_sum_of_components() {
        let h = hop(10, 6, 1.0, 1.0);
        let b = age_building_block_poisson(&h, 0.8).unwrap();
        let sum: f64 = b.components().iter().map(|(_, v)| v).sum();
        assert!(rel_close(b.total, sum, 1e-10));
        assert!(b.total > 0.0);
        let per_hop: f64 = b.service_per_hop.iter().sum();
        assert!(rel_close(per_hop, b.service_term, 1e-12));
    }

    #[test]
    fn poisson_converges_to_generate_at_will() {
        // As mu grows the exogenous-arrival age approaches the
        // generate-at-will age from above.
        let h = hop(10, 6, 1.0, 1.0);
        let gaw = age_building_block(&h, &InterarrivalMoments::generate_at_will(&h))
            .unwrap()
            .total;
        let mut prev = f64::INFINITY;
        for mu in [0.5, 1.0, 10.0, 100.0, 1e4, 1e6] {
            let v = age_building_block_poisson(&h, mu).unwrap().total;
            assert!(v < prev);
            assert!(v > gaw);
            prev = v;
        }
        assert!(rel_close(prev, gaw, 1e-4));
    }

    #[test]
    fn two_hop_upper_matches_multi_hop_at_l2() {
        for (n, k1, k2) in [(10u32, 6u32, 9u32), (500, 308, 461), (20, 1, 20), (5, 5, 5)] {
            let h1 = hop(n, k1, 1.0, 1.0);
            let h2 = hop(n, k2, 2.0, 0.3);
            let a = age_two_hop_upper(&h1, &h2).unwrap();
            let net = NetworkConfig::new(vec![h1, h2]).unwrap();
            let b = age_multi_hop_upper(&net).unwrap();
            assert!(rel_close(a.total, b.total, 1e-12), "n={n} k=({k1},{k2})");
        }
    }

    #[test]
    fn two_hop_upper_is_exact_form_with_exponential_wait() {
        let h1 = hop(10, 6, 1.0, 1.0);
        let h2 = hop(10, 9, 1.0, 1.0);
        let e_z = h1.mean_attempts() * h1.service_moments().mean;
        let z2 = InterarrivalMoments::exponential(&h2, e_z);
        let exact = age_two_hop_exact(&h1, &h2, &z2).unwrap();
        let upper = age_two_hop_upper(&h1, &h2).unwrap();
        assert!(rel_close(exact.total, upper.total, 1e-12));
    }

    #[test]
    fn multi_hop_upper_reduces_to_single_hop() {
        let h = hop(10, 6, 1.0, 1.0);
        let net = NetworkConfig::new(vec![h]).unwrap();
        let a = age_multi_hop_upper(&net).unwrap();
        let b = age_building_block(&h, &InterarrivalMoments::generate_at_will(&h)).unwrap();
        assert!(rel_close(a.total, b.total, 1e-14));
        // Residual extras are identically zero with no upstream stage.
        for (_, v) in &a.extra_terms {
            assert_eq!(*v, 0.0);
        }
    }

    #[test]
    fn two_hop_with_near_deterministic_first_hop() {
        // First hop k = n with a nearly deterministic delay (huge rate):
        // relays are never blocked, updates arrive exactly at completion,
        // so the result collapses to the second hop's generate-at-will age
        // plus the first-hop constant in the service term.
        let h1 = hop(10, 10, 1e12, 1.0);
        let h2 = hop(10, 9, 1.0, 1.0);
        let z2 = InterarrivalMoments::new(0.0, h2.service_moments().variance).unwrap();
        let two = age_two_hop_exact(&h1, &h2, &z2).unwrap();
        let single = age_building_block(&h2, &InterarrivalMoments::generate_at_will(&h2)).unwrap();
        assert!(rel_close(two.total, single.total + 1.0, 1e-9));
    }

    #[test]
    fn renewal_identity_geometric_route() {
        // age = E[Xbar] + (E[M^2]/2E[M]) E[Y] + Var[Y]/(2 E[Y]) must agree
        // with the packaged form, with moments taken through the geometric
        // helper instead of the (2n-k)/(2k) collapse.
        let cases = [
            (10u32, 6u32, 1.0, 1.0, 0.7, 2.3),
            (33, 12, 0.4, 0.0, 0.0, 1.1),
            (100, 84, 2.0, 0.9, 1.9, 0.4),
        ];
        for (n, k, rate, shift, zm, zv) in cases {
            let h = hop(n, k, rate, shift);
            let z = InterarrivalMoments::new(zm, zv).unwrap();
            let b = age_building_block(&h, &z).unwrap();
            let (em, em2) = geometric_moments(h.success_probability()).unwrap();
            let m = h.service_moments();
            let e_y = m.mean + zm;
            let direct = h.mean_earliest() + em2 / (2.0 * em) * e_y + zv / (2.0 * e_y);
            assert!(rel_close(b.total, direct, 1e-10));
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let h = hop(10, 6, 1.0, 1.0);
        assert!(age_building_block_poisson(&h, 0.0).is_err());
        assert!(age_building_block_poisson(&h, -2.0).is_err());
        assert!(InterarrivalMoments::new(-1.0, 0.0).is_err());
        assert!(InterarrivalMoments::new(0.0, -1.0).is_err());
        assert!(InterarrivalMoments::new(f64::NAN, 0.0).is_err());
        assert!(NetworkConfig::new(vec![]).is_err());
        assert!(HopConfig::new(5, 6, ShiftedExp::new(1.0, 0.0).unwrap()).is_err());
        assert!(HopConfig::new(0, 0, ShiftedExp::new(1.0, 0.0).unwrap()).is_err());
    }
}
