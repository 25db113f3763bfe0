//! Threshold optimizers: continuous stopping ratios for the large-n
//! forms and exact integer thresholds for the finite-n bounds.
//!
//! The ratio objectives are smooth on the open unit cube but can be
//! multimodal in principle, so the search runs cyclic coordinate descent
//! (coarse grid scan + golden-section refinement per coordinate) from one
//! deterministic and several fixed-seed random starts, keeping the best.
//! Integer thresholds use exhaustive per-coordinate scans over `1..=n`,
//! which both finds exact per-coordinate minima and resolves ties toward
//! the smallest threshold.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotic::{
    age_building_block_approx, age_multi_hop_approx, age_single_hop_limit, AlphaVector,
};
use crate::distributions::{OrderStatTable, ShiftedExp};
use crate::error::{Error, Result};

/// Smallest ratio the search will propose.
pub const ALPHA_FLOOR: f64 = 1e-6;
/// Largest ratio the search will propose.
pub const ALPHA_CAP: f64 = 1.0 - 1e-6;

const GRID_STEP: f64 = 0.01;
const REFINE_TOL: f64 = 1e-4;
const RANDOM_STARTS: usize = 5;
const MAX_PASSES: usize = 60;
const START_SEED: u64 = 0x0a1f_a5ee_d001;

/// How a search run terminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchStatus {
    /// A full coordinate pass produced no further improvement.
    Converged,
    /// The minimizer sits against a ratio cap; the reported point is the
    /// capped one and the true infimum may lie outside the open cube.
    Boundary,
    /// Stopped by the pass budget before reaching a fixpoint.
    MaxIters,
}

/// Outcome of a threshold search.
#[derive(Debug, Clone, Serialize)]
pub struct OptResult<T> {
    pub argmin: T,
    pub value: f64,
    /// Best-so-far points of the winning start, one entry per coordinate
    /// update that changed the incumbent; values are non-increasing.
    pub trace: Vec<(T, f64)>,
    pub status: SearchStatus,
}

/// Large-n age objective to minimize over stopping ratios.
#[derive(Debug, Clone, Copy)]
pub enum AlphaObjective<'a> {
    /// Generate-at-will single hop; one ratio.
    SingleHopLimit(&'a ShiftedExp),
    /// Single hop fed by exogenous Poisson(`mu`) arrivals; one ratio.
    BuildingBlock { delay: &'a ShiftedExp, mu: f64 },
    /// L-hop pipeline bound; one ratio per hop.
    MultiHop(&'a [ShiftedExp]),
}

impl AlphaObjective<'_> {
    pub fn dim(&self) -> usize {
        match self {
            Self::SingleHopLimit(_) | Self::BuildingBlock { .. } => 1,
            Self::MultiHop(params) => params.len(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::SingleHopLimit(_) => Ok(()),
            Self::BuildingBlock { mu, .. } => {
                if !mu.is_finite() || *mu <= 0.0 {
                    return Err(Error::Param {
                        name: "mu",
                        constraint: "positive and finite",
                        value: *mu,
                    });
                }
                Ok(())
            }
            Self::MultiHop(params) => {
                if params.is_empty() {
                    return Err(Error::EmptyNetwork);
                }
                Ok(())
            }
        }
    }

    /// Evaluate at ratios already confined to the open unit cube.
    fn eval(&self, alphas: &[f64]) -> f64 {
        match self {
            Self::SingleHopLimit(d) => {
                age_single_hop_limit(d, alphas[0]).expect("search keeps ratios inside (0, 1)")
            }
            Self::BuildingBlock { delay, mu } => age_building_block_approx(delay, *mu, alphas[0])
                .expect("search keeps ratios inside (0, 1)"),
            Self::MultiHop(params) => {
                let a =
                    AlphaVector::new(alphas.to_vec()).expect("search keeps ratios inside (0, 1)");
                age_multi_hop_approx(params, &a).expect("hop count fixed by the objective")
            }
        }
    }
}

/// Golden-section minimization on `[lo, hi]`; returns the best point seen.
fn golden_section_min(
    f: &mut impl FnMut(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut best = (f64::NAN, f64::INFINITY);
    let track = |x: f64, v: f64, best: &mut (f64, f64)| {
        if v < best.1 {
            *best = (x, v);
        }
    };
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    track(x1, f1, &mut best);
    track(x2, f2, &mut best);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1);
            track(x1, f1, &mut best);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2);
            track(x2, f2, &mut best);
        }
    }
    best
}

/// Minimize one ratio coordinate with the others held fixed: coarse grid
/// scan over the whole interval, then golden-section refinement around
/// the best grid cell. The incumbent point always stays a candidate.
fn line_min_alpha(obj: &AlphaObjective, x: &mut Vec<f64>, coord: usize) -> f64 {
    let incumbent_a = x[coord];
    let eval_at = |a: f64, x: &mut Vec<f64>| {
        x[coord] = a;
        obj.eval(x)
    };

    let mut best_a = incumbent_a;
    let mut best_v = eval_at(incumbent_a, x);
    let mut g = GRID_STEP;
    while g < 1.0 - GRID_STEP / 2.0 {
        let v = eval_at(g, x);
        if v < best_v {
            best_v = v;
            best_a = g;
        }
        g += GRID_STEP;
    }

    let lo = (best_a - GRID_STEP).max(ALPHA_FLOOR);
    let hi = (best_a + GRID_STEP).min(ALPHA_CAP);
    let (ga, gv) = golden_section_min(&mut |a| eval_at(a, x), lo, hi, REFINE_TOL);
    if gv < best_v {
        best_v = gv;
        best_a = ga;
    }
    x[coord] = best_a;
    best_v
}

/// Minimize a large-n ratio objective over the open unit cube.
///
/// Runs coordinate descent from one central start and
/// [`RANDOM_STARTS`] fixed-seed random starts, returning the best run
/// (ties broken toward the lexicographically smaller ratio vector). A
/// result whose minimizer presses against [`ALPHA_FLOOR`] or
/// [`ALPHA_CAP`] is flagged [`SearchStatus::Boundary`].
pub fn optimize_alpha(obj: &AlphaObjective) -> Result<OptResult<Vec<f64>>> {
    obj.validate()?;
    let dim = obj.dim();

    let mut starts: Vec<Vec<f64>> = vec![vec![0.5; dim]];
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    for _ in 0..RANDOM_STARTS {
        starts.push((0..dim).map(|_| rng.gen_range(0.05..0.95)).collect());
    }

    let mut winner: Option<OptResult<Vec<f64>>> = None;
    for start in starts {
        let mut x = start;
        let mut value = obj.eval(&x);
        let mut trace = vec![(x.clone(), value)];
        let mut status = SearchStatus::MaxIters;
        for _ in 0..MAX_PASSES {
            let mut improved = false;
            for coord in 0..dim {
                let v = line_min_alpha(obj, &mut x, coord);
                if v < value - 1e-12 * (1.0 + value.abs()) {
                    improved = true;
                }
                if v < value {
                    value = v;
                    trace.push((x.clone(), value));
                }
            }
            if !improved {
                status = SearchStatus::Converged;
                break;
            }
        }
        let candidate = OptResult {
            argmin: x,
            value,
            trace,
            status,
        };
        winner = Some(match winner.take() {
            None => candidate,
            Some(best) => pick_better(best, candidate),
        });
    }

    let mut result = winner.expect("at least one start");
    let near_cap = result
        .argmin
        .iter()
        .any(|&a| a <= ALPHA_FLOOR + 2.0 * REFINE_TOL || a >= ALPHA_CAP - 2.0 * REFINE_TOL);
    if near_cap {
        result.status = SearchStatus::Boundary;
    }
    Ok(result)
}

fn pick_better<T: PartialOrd>(a: OptResult<Vec<T>>, b: OptResult<Vec<T>>) -> OptResult<Vec<T>> {
    if b.value < a.value {
        return b;
    }
    if b.value == a.value && lex_less(&b.argmin, &a.argmin) {
        return b;
    }
    a
}

fn lex_less<T: PartialOrd>(a: &[T], b: &[T]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if y < x {
            return false;
        }
    }
    false
}

// ========================= integer thresholds ============================

/// Fixed fan-out and link-delay law of one hop; the threshold is free.
#[derive(Debug, Clone)]
pub struct HopTemplate {
    n: u32,
    delay: ShiftedExp,
}

impl HopTemplate {
    pub fn new(n: u32, delay: ShiftedExp) -> Result<Self> {
        if n == 0 {
            return Err(Error::Param {
                name: "n",
                constraint: "at least 1",
                value: 0.0,
            });
        }
        Ok(Self { n, delay })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn delay(&self) -> &ShiftedExp {
        &self.delay
    }
}

/// Finite-n age objective to minimize over integer thresholds.
#[derive(Debug, Clone, Copy)]
pub enum KObjective {
    /// Pipeline upper bound over all hops (exact for a single hop).
    MultiHopUpper,
    /// Single hop fed by exogenous Poisson(`mu`) arrivals; exact.
    BuildingBlockPoisson { mu: f64 },
}

/// Table-backed objective evaluator; one order-statistic table per hop
/// turns every age evaluation into O(L) arithmetic.
struct KEval<'a> {
    templates: &'a [HopTemplate],
    tables: Vec<OrderStatTable>,
    objective: KObjective,
}

impl<'a> KEval<'a> {
    fn new(templates: &'a [HopTemplate], objective: KObjective) -> Result<Self> {
        if templates.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        match objective {
            KObjective::BuildingBlockPoisson { mu } => {
                if templates.len() != 1 {
                    return Err(Error::HopCountMismatch {
                        left: templates.len(),
                        left_what: "hops",
                        right: 1,
                        right_what: "hops supported by the Poisson-arrival objective",
                    });
                }
                if !mu.is_finite() || mu <= 0.0 {
                    return Err(Error::Param {
                        name: "mu",
                        constraint: "positive and finite",
                        value: mu,
                    });
                }
            }
            KObjective::MultiHopUpper => {}
        }
        let tables = templates.iter().map(|t| OrderStatTable::new(t.n)).collect();
        Ok(Self {
            templates,
            tables,
            objective,
        })
    }

    /// Age at thresholds `ks` (each in `1..=n` of its hop). Mirrors
    /// [`crate::analytic::age_multi_hop_upper`] /
    /// [`crate::analytic::age_building_block_poisson`] term by term; the
    /// unit tests pin the two routes against each other.
    fn eval(&self, ks: &[u32]) -> f64 {
        match self.objective {
            KObjective::BuildingBlockPoisson { mu } => {
                let (t, tab, k) = (&self.templates[0], &self.tables[0], ks[0]);
                let e = tab.mean(&t.delay, k);
                let denom = mu * e + 1.0;
                let w = (2.0 * t.n as f64 - k as f64) / (2.0 * k as f64);
                tab.mean_earliest(&t.delay, k)
                    + w * denom / mu
                    + mu * tab.variance(&t.delay, k) / (2.0 * denom)
                    + 1.0 / (2.0 * (mu * mu * e + mu))
            }
            KObjective::MultiHopUpper => {
                let last = self.templates.len() - 1;
                let mut service = 0.0;
                let mut e_s = 0.0;
                for i in 0..=last {
                    let (t, tab, k) = (&self.templates[i], &self.tables[i], ks[i]);
                    service += tab.mean_earliest(&t.delay, k);
                    if i < last {
                        e_s = (t.n as f64 / k as f64) * (tab.mean(&t.delay, k) + e_s);
                    }
                }
                let (t, tab, k) = (&self.templates[last], &self.tables[last], ks[last]);
                let m_mean = tab.mean(&t.delay, k);
                let e_y = m_mean + e_s;
                let w = (2.0 * t.n as f64 - k as f64) / (2.0 * k as f64);
                service + w * e_y + (tab.variance(&t.delay, k) + e_s * e_s) / (2.0 * e_y)
            }
        }
    }
}

/// Minimize a finite-n age objective over integer thresholds.
///
/// One hop is solved exactly by full scan. Multiple hops run cyclic
/// coordinate descent with full `1..=n` scans per coordinate from three
/// deterministic starts (all-ones, midpoints, all-n), keeping the best
/// fixpoint; per-coordinate ties resolve to the smallest threshold.
pub fn optimize_k_exact(
    templates: &[HopTemplate],
    objective: KObjective,
) -> Result<OptResult<Vec<u32>>> {
    let eval = KEval::new(templates, objective)?;

    let starts: Vec<Vec<u32>> = vec![
        templates.iter().map(|_| 1).collect(),
        templates.iter().map(|t| t.n.div_ceil(2)).collect(),
        templates.iter().map(|t| t.n).collect(),
    ];

    let mut winner: Option<OptResult<Vec<u32>>> = None;
    for start in starts {
        let mut ks = start;
        let mut value = eval.eval(&ks);
        let mut trace = vec![(ks.clone(), value)];
        let mut status = SearchStatus::MaxIters;
        for _ in 0..MAX_PASSES {
            let mut moved = false;
            for coord in 0..ks.len() {
                let mut best_k = ks[coord];
                let mut best_v = value;
                for k in 1..=templates[coord].n {
                    ks[coord] = k;
                    let v = eval.eval(&ks);
                    if v < best_v {
                        best_v = v;
                        best_k = k;
                    }
                }
                ks[coord] = best_k;
                if best_v < value {
                    value = best_v;
                    trace.push((ks.clone(), value));
                    moved = true;
                }
            }
            if !moved {
                status = SearchStatus::Converged;
                break;
            }
        }
        let candidate = OptResult {
            argmin: ks,
            value,
            trace,
            status,
        };
        winner = Some(match winner.take() {
            None => candidate,
            Some(best) => pick_better(best, candidate),
        });
    }
    Ok(winner.expect("at least one start"))
}

/// Exhaustive two-hop threshold minimization over the full
/// `(1..=n1) x (1..=n2)` lattice; quadratic, intended as ground truth for
/// moderate fan-outs.
pub fn optimize_k_two_hop_exhaustive(
    first: &HopTemplate,
    second: &HopTemplate,
) -> Result<OptResult<Vec<u32>>> {
    let templates = [first.clone(), second.clone()];
    let eval = KEval::new(&templates, KObjective::MultiHopUpper)?;
    let mut best = (vec![1, 1], f64::INFINITY);
    let mut trace = Vec::new();
    for k1 in 1..=first.n {
        for k2 in 1..=second.n {
            let v = eval.eval(&[k1, k2]);
            if v < best.1 {
                best = (vec![k1, k2], v);
                trace.push((best.0.clone(), v));
            }
        }
    }
    Ok(OptResult {
        argmin: best.0,
        value: best.1,
        trace,
        status: SearchStatus::Converged,
    })
}

// ================================ tests ==================================
