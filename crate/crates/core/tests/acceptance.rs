//! Acceptance gate: eight numbered end-to-end checks over the analysis,
//! the optimizers and both simulation engines. Each check prints exactly
//! one pass/fail line; the suite asserts once at the end so that every
//! line is visible in the failure output.
//!
//! Three checks encode reference targets verbatim that the mathematics
//! they describe provably does not meet; they are kept as stated and
//! allowed to fail with their diagnostics printed, rather than loosened
//! until green:
//!
//! - Check 1: the four-hop reference row's last ratio (0.935) does not
//!   minimize the pipeline objective the other rows minimize — an
//!   independent dense grid scan and a large-n integer-threshold search
//!   both land at 0.981 with a strictly smaller objective value. The line
//!   prints both points and both objective values.
//! - Check 4: the two-hop formula treats successive relay cycles as
//!   i.i.d. and the delivered first-hop delay as independent of finding
//!   the relay idle. The resulting understatement (~+0.5% here) is stable
//!   under 2e6-cycle runs while single-hop configurations match their
//!   exact forms within CI, so at the mandated 1e5 cycles the confidence
//!   interval (~6x tighter than the gap) cannot cover the hybrid value.
//! - Check 6: the large-n closed form is the limit of the pipeline upper
//!   bound (the finite-n bound at n=1000 sits within 0.03% of it), not of
//!   the age itself; the simulated age is flat in n as claimed but stays
//!   ~13% below that value because the bound's exponential-interarrival
//!   relaxation is conservative at these ratios.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aoi_core::{
    age_building_block_poisson, age_multi_hop_approx, age_multi_hop_upper, age_two_hop_approx,
    age_two_hop_exact, age_two_hop_upper, mean_earliest_k_service, optimize_alpha,
    optimize_k_exact, order_stat_moments, sample_order_stat_prefix, simulate_building_block,
    simulate_full_tree, simulate_tagged_path, AlphaObjective, AlphaVector, ArrivalModel, HopConfig,
    HopTemplate, KObjective, NetworkConfig, RunConfig, ShiftedExp, Welford,
};

struct Outcome {
    idx: usize,
    pass: bool,
}

fn check(out: &mut Vec<Outcome>, idx: usize, pass: bool, detail: String) {
    println!(
        "[{}] criterion {idx}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    out.push(Outcome { idx, pass });
}

fn se(rate: f64, shift: f64) -> ShiftedExp {
    ShiftedExp::new(rate, shift).unwrap()
}

fn fmt(xs: &[f64]) -> String {
    let inner: Vec<String> = xs.iter().map(|v| format!("{v:.3}")).collect();
    format!("({})", inner.join(", "))
}

fn ok(flag: bool) -> &'static str {
    if flag {
        " ok"
    } else {
        " MISSED"
    }
}

/// Reference optimal stopping ratios for 1..=4 identical (1,1) hops,
/// every coordinate within +-0.005.
fn criterion_1(out: &mut Vec<Outcome>) {
    let reference: [&[f64]; 4] = [
        &[0.732],
        &[0.615, 0.921],
        &[0.626, 0.832, 0.965],
        &[0.635, 0.837, 0.901, 0.935],
    ];
    let mut pass = true;
    let mut notes = Vec::new();
    for want in reference {
        let delays = vec![se(1.0, 1.0); want.len()];
        let got = optimize_alpha(&AlphaObjective::MultiHop(&delays)).unwrap();
        let off: Vec<usize> = (0..want.len())
            .filter(|&i| (got.argmin[i] - want[i]).abs() > 0.005)
            .collect();
        if off.is_empty() {
            notes.push(format!("L={} {} ok", want.len(), fmt(&got.argmin)));
        } else {
            pass = false;
            let stated =
                age_multi_hop_approx(&delays, &AlphaVector::new(want.to_vec()).unwrap()).unwrap();
            notes.push(format!(
                "L={}: minimizer {} (objective {:.4}) vs reference {} (objective there {:.4}); \
                 coordinate(s) {off:?} off by more than 0.005",
                want.len(),
                fmt(&got.argmin),
                got.value,
                fmt(want),
                stated,
            ));
        }
    }
    check(out, 1, pass, notes.join("; "));
}

/// Arrival-limited single-hop optimum: 0.837 +- 0.005, above the
/// generate-at-will optimum 0.732.
fn criterion_2(out: &mut Vec<Outcome>) {
    let d = se(1.0, 1.0);
    let r = optimize_alpha(&AlphaObjective::BuildingBlock { delay: &d, mu: 1.0 }).unwrap();
    let a = r.argmin[0];
    let pass = (a - 0.837).abs() <= 0.005 && a > 0.732;
    check(
        out,
        2,
        pass,
        format!("unit-rate-arrival optimum {a:.4} (want 0.837 +- 0.005 and above 0.732)"),
    );
}

/// Zero-shift (pure exponential) first-hop delays make waiting for more
/// than the fastest child pointless: k1* = 1 across rates. Scarce Poisson
/// arrivals push the single-hop threshold up instead.
fn criterion_3(out: &mut Vec<Outcome>) {
    let mut pass = true;
    let mut k1s = Vec::new();
    for lambda in [0.5, 1.0, 2.0, 5.0] {
        let ts = [
            HopTemplate::new(100, se(lambda, 0.0)).unwrap(),
            HopTemplate::new(100, se(1.0, 1.0)).unwrap(),
        ];
        let r = optimize_k_exact(&ts, KObjective::MultiHopUpper).unwrap();
        k1s.push(r.argmin[0]);
        pass &= r.argmin[0] == 1;
    }
    let scarce = optimize_k_exact(
        &[HopTemplate::new(100, se(1.0, 0.0)).unwrap()],
        KObjective::BuildingBlockPoisson { mu: 0.5 },
    )
    .unwrap();
    pass &= scarce.argmin[0] > 1;
    check(
        out,
        3,
        pass,
        format!(
            "two-hop k1* = {k1s:?} across first-hop rates 0.5/1/2/5 (want all 1); \
             single hop at sparse arrivals k* = {} (want > 1)",
            scarce.argmin[0]
        ),
    );
}

/// Full-tree run vs the exact two-hop formula fed with the run's own
/// measured relay-wait moments, and vs the a priori pipeline bound.
fn criterion_4(out: &mut Vec<Outcome>) {
    let h1 = HopConfig::new(10, 6, se(1.0, 1.0)).unwrap();
    let h2 = HopConfig::new(10, 9, se(1.0, 1.0)).unwrap();
    let net = NetworkConfig::new(vec![h1, h2]).unwrap();
    let run = RunConfig::new(110_000, 10_000, 10, 4001).unwrap();
    let sim = simulate_full_tree(&net, ArrivalModel::GenerateAtWill, &run).unwrap();
    let hybrid = age_two_hop_exact(&h1, &h2, &sim.measured_wait(1).unwrap())
        .unwrap()
        .total;
    let bound = age_multi_hop_upper(&net).unwrap().total;
    let covers = (sim.avg_age - hybrid).abs() <= sim.ci_halfwidth;
    let below = sim.avg_age <= bound + 3.0 * sim.std_error();
    check(
        out,
        4,
        covers && below,
        format!(
            "full tree {:.4} +- {:.4} over 1e5 measured cycles; hybrid exact {hybrid:.4}{}; \
             bound {bound:.4}{}",
            sim.avg_age,
            sim.ci_halfwidth,
            ok(covers),
            ok(below),
        ),
    );
}

/// Single transmitter under Poisson arrivals vs the exact closed form,
/// plus the geometric attempt count E[M] = n/k.
fn criterion_5(out: &mut Vec<Outcome>) {
    let h = HopConfig::new(10, 5, se(1.0, 1.0)).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (i, mu) in [0.5, 1.0, 10.0].into_iter().enumerate() {
        let pred = age_building_block_poisson(&h, mu).unwrap().total;
        let run = RunConfig::new(120_000, 5_000, 10, 5001 + i as u64).unwrap();
        let sim = simulate_building_block(&h, ArrivalModel::Poisson { rate: mu }, &run).unwrap();
        let age_ok = (sim.avg_age - pred).abs() <= sim.ci_halfwidth;
        let m = &sim.hop_stats[0].attempts;
        let m_se = (m.variance / m.count as f64).sqrt();
        let m_ok = (m.mean - 2.0).abs() <= 3.0 * m_se;
        pass &= age_ok && m_ok;
        parts.push(format!(
            "mu={mu}: {:.4} +- {:.4} vs exact {pred:.4}{}, E[M] {:.3}{}",
            sim.avg_age,
            sim.ci_halfwidth,
            ok(age_ok),
            m.mean,
            ok(m_ok),
        ));
    }
    check(out, 5, pass, parts.join("; "));
}

/// Scalability: with the stopping ratios held at the two-hop reference
/// optimum, the tagged-path age is flat in n (< 5% spread) and lands near
/// the large-n closed form (within the same 5%).
fn criterion_6(out: &mut Vec<Outcome>) {
    let d = se(1.0, 1.0);
    let alphas = [0.615, 0.921];
    let limit = age_multi_hop_approx(&[d, d], &AlphaVector::new(alphas.to_vec()).unwrap()).unwrap();
    let mut ages = Vec::new();
    for (i, n) in [100u32, 500, 1000].into_iter().enumerate() {
        let hops = vec![
            HopConfig::new(n, (alphas[0] * n as f64).round() as u32, d).unwrap(),
            HopConfig::new(n, (alphas[1] * n as f64).round() as u32, d).unwrap(),
        ];
        let net = NetworkConfig::new(hops).unwrap();
        let run = RunConfig::new(100_000, 10_000, 10, 6001 + i as u64).unwrap();
        let sim = simulate_tagged_path(&net, ArrivalModel::GenerateAtWill, &run).unwrap();
        ages.push(sim.avg_age);
    }
    let lo = ages.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ages.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = (hi - lo) / lo;
    let gap = (ages[ages.len() - 1] - limit).abs() / limit;
    let pass = spread < 0.05 && gap < 0.05;
    check(
        out,
        6,
        pass,
        format!(
            "fixed-ratio ages at n=100/500/1000: {}; spread {:.2}%{}; \
             n=1000 within {:.2}% of large-n value {limit:.4}{}",
            fmt(&ages),
            100.0 * spread,
            ok(spread < 0.05),
            100.0 * gap,
            ok(gap < 0.05),
        ),
    );
}

/// Cross-engine agreement on randomized two-hop configurations.
fn criterion_7(out: &mut Vec<Outcome>) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7007);
    let mut pass = true;
    let mut misses = Vec::new();
    for i in 0..10u64 {
        let n1: u32 = rng.gen_range(2..=20);
        let k1 = rng.gen_range(1..=n1);
        let n2: u32 = rng.gen_range(2..=20);
        let k2 = rng.gen_range(1..=n2);
        let d1 = se(rng.gen_range(0.5..2.0), rng.gen_range(0.2..1.5));
        let d2 = se(rng.gen_range(0.5..2.0), rng.gen_range(0.2..1.5));
        let net = NetworkConfig::new(vec![
            HopConfig::new(n1, k1, d1).unwrap(),
            HopConfig::new(n2, k2, d2).unwrap(),
        ])
        .unwrap();
        let full = simulate_full_tree(
            &net,
            ArrivalModel::GenerateAtWill,
            &RunConfig::new(30_000, 3_000, 10, 7100 + i).unwrap(),
        )
        .unwrap();
        let tag = simulate_tagged_path(
            &net,
            ArrivalModel::GenerateAtWill,
            &RunConfig::new(120_000, 12_000, 10, 7200 + i).unwrap(),
        )
        .unwrap();
        if (full.avg_age - tag.avg_age).abs() > full.ci_halfwidth + tag.ci_halfwidth {
            pass = false;
            misses.push(format!(
                "config {i} (n=({n1},{n2}), k=({k1},{k2})): full {:.4} +- {:.4} vs tagged {:.4} +- {:.4}",
                full.avg_age, full.ci_halfwidth, tag.avg_age, tag.ci_halfwidth
            ));
        }
    }
    let detail = if pass {
        "full-tree and tagged-path confidence intervals overlap on all 10 random two-hop configs"
            .to_string()
    } else {
        format!("non-overlapping intervals: {}", misses.join("; "))
    };
    check(out, 7, pass, detail);
}

/// Property suites: Monte Carlo vs order-statistic moments, the
/// mean-earliest-k identity, the two sets of two-hop/multi-hop
/// equivalences, and bit-identical reruns.
fn criterion_8(out: &mut Vec<Outcome>) {
    // Order-statistic mean and variance vs 1e7-sample Monte Carlo, 3 sigma.
    let d = se(1.3, 0.7);
    let mut mc_ok = true;
    for (n, k) in [(3u32, 2u32), (10, 1), (10, 5), (10, 10)] {
        let m = order_stat_moments(&d, k, n).unwrap();
        let mut xs = Welford::new();
        let mut sq = Welford::new(); // squared deviation from the exact mean
        let mut rng = ChaCha8Rng::seed_from_u64(8000 + (n * 100 + k) as u64);
        for _ in 0..10_000_000u32 {
            let x = *sample_order_stat_prefix(&d, k, n, &mut rng)
                .unwrap()
                .last()
                .unwrap();
            xs.push(x);
            sq.push((x - m.mean) * (x - m.mean));
        }
        let se_mean = (xs.variance() / xs.count() as f64).sqrt();
        let se_var = (sq.variance() / sq.count() as f64).sqrt();
        mc_ok &= (xs.mean() - m.mean).abs() <= 3.0 * se_mean;
        mc_ok &= (sq.mean() - m.variance).abs() <= 3.0 * se_var;
    }

    // Mean of the k earliest: closed form vs averaged order-stat means.
    let mut rng = ChaCha8Rng::seed_from_u64(8100);
    let mut id_ok = true;
    for _ in 0..100 {
        let n: u32 = rng.gen_range(1..=300);
        let k = rng.gen_range(1..=n);
        let d = se(rng.gen_range(0.1..10.0), rng.gen_range(0.0..5.0));
        let closed = mean_earliest_k_service(&d, k, n).unwrap();
        let avg = (1..=k)
            .map(|i| order_stat_moments(&d, i, n).unwrap().mean)
            .sum::<f64>()
            / k as f64;
        id_ok &= (closed - avg).abs() <= 1e-10 * closed.abs().max(1.0);
    }

    // Dedicated two-hop forms vs the general L-hop forms at L = 2.
    let mut rng = ChaCha8Rng::seed_from_u64(8200);
    let mut eq_ok = true;
    for _ in 0..50 {
        let d1 = se(rng.gen_range(0.2..4.0), rng.gen_range(0.05..3.0));
        let d2 = se(rng.gen_range(0.2..4.0), rng.gen_range(0.05..3.0));
        let a =
            AlphaVector::new(vec![rng.gen_range(0.02..0.98), rng.gen_range(0.02..0.98)]).unwrap();
        let two = age_two_hop_approx(&d1, &d2, &a).unwrap();
        let multi = age_multi_hop_approx(&[d1, d2], &a).unwrap();
        eq_ok &= ((two - multi) / two).abs() <= 1e-9;

        let n1: u32 = rng.gen_range(1..=400);
        let n2: u32 = rng.gen_range(1..=400);
        let h1 = HopConfig::new(n1, rng.gen_range(1..=n1), d1).unwrap();
        let h2 = HopConfig::new(n2, rng.gen_range(1..=n2), d2).unwrap();
        let upper2 = age_two_hop_upper(&h1, &h2).unwrap().total;
        let upperm = age_multi_hop_upper(&NetworkConfig::new(vec![h1, h2]).unwrap())
            .unwrap()
            .total;
        eq_ok &= ((upper2 - upperm) / upper2).abs() <= 1e-9;
    }

    // Determinism: reruns are bit-identical on both engines.
    let net = NetworkConfig::new(vec![
        HopConfig::new(3, 2, se(1.0, 1.0)).unwrap(),
        HopConfig::new(4, 3, se(1.0, 1.0)).unwrap(),
    ])
    .unwrap();
    let run = RunConfig::new(5_000, 500, 10, 8300).unwrap();
    let f1 = simulate_full_tree(&net, ArrivalModel::GenerateAtWill, &run).unwrap();
    let f2 = simulate_full_tree(&net, ArrivalModel::GenerateAtWill, &run).unwrap();
    let t1 = simulate_tagged_path(&net, ArrivalModel::GenerateAtWill, &run).unwrap();
    let t2 = simulate_tagged_path(&net, ArrivalModel::GenerateAtWill, &run).unwrap();
    let det_ok = f1.avg_age.to_bits() == f2.avg_age.to_bits()
        && f1.batch_means == f2.batch_means
        && t1.avg_age.to_bits() == t2.avg_age.to_bits()
        && t1.batch_means == t2.batch_means;

    check(
        out,
        8,
        mc_ok && id_ok && eq_ok && det_ok,
        format!(
            "order-stat moments vs 1e7 Monte Carlo{}; mean-earliest identity on 100 configs{}; \
             two-hop == multi-hop forms at 1e-9{}; bit-identical reruns{}",
            ok(mc_ok),
            ok(id_ok),
            ok(eq_ok),
            ok(det_ok),
        ),
    );
}

#[test]
fn acceptance() {
    let mut outcomes = Vec::new();
    criterion_1(&mut outcomes);
    criterion_2(&mut outcomes);
    criterion_3(&mut outcomes);
    criterion_4(&mut outcomes);
    criterion_5(&mut outcomes);
    criterion_6(&mut outcomes);
    criterion_7(&mut outcomes);
    criterion_8(&mut outcomes);
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.pass)
        .map(|o| o.idx.to_string())
        .collect();
    assert!(
        failed.is_empty(),
        "{} of {} acceptance criteria failed: [{}] — see the per-criterion lines above",
        failed.len(),
        outcomes.len(),
        failed.join(", ")
    );
}
