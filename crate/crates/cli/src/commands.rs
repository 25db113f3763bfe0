//! The six experiment commands.
//!
//! Each command resolves its flags (after config-file merge) into
//! validated library inputs, invokes the corresponding library
//! operations, and rows the results into a [`Report`]. Every number a
//! report carries is produced by a library call; the command layer only
//! routes inputs and collects outputs.

use anyhow::{bail, Context, Result};

use aoi_core::{
    age_building_block, age_building_block_approx, age_building_block_poisson,
    age_multi_hop_approx, age_multi_hop_exact, age_multi_hop_upper, age_single_hop_limit,
    age_two_hop_approx, optimize_alpha, optimize_k_exact, simulate, AgeBreakdown, AlphaObjective,
    AlphaVector, ArrivalModel, InterarrivalMoments, KObjective, NetworkConfig, RunConfig,
    SearchStatus, ShiftedExp, SimConfig, SimMode, SimResult,
};

use crate::args::{
    build_delays, build_network, parse_alpha, parse_delays, parse_network, parse_raw_delays,
    parse_raw_hops, parse_sweep, parse_templates, AgeArgs, ApproxArgs, ArrivalKind, Command,
    IoOpts, ModeKind, OptimizeArgs, RawHop, RunOpts, SimulateArgs, SpaceKind, SweepArgs, SweepVar,
    TargetKind, ValidateArgs,
};
use crate::report::{deliver, Cell, OutputFormat, Report};

const DEFAULT_CYCLES: u64 = 100_000;
const DEFAULT_WARMUP: u64 = 10_000;
const DEFAULT_BATCHES: u32 = 20;
const DEFAULT_SEED: u64 = 1;

/// Run one parsed command to completion; the returned code is the
/// process exit status (0 success, 2 validation failure).
pub fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Age(args) => age(args),
        Command::Approx(args) => approx(args),
        Command::Optimize(args) => optimize(args),
        Command::Simulate(args) => simulate_cmd(args),
        Command::Sweep(args) => sweep(args),
        Command::Validate(args) => validate(args),
    }
}

fn emit(report: Report, io: &IoOpts) -> Result<()> {
    let format = io.output.unwrap_or(OutputFormat::Csv);
    deliver(&report.render(format), io.out.as_deref())
}

// ========================== shared resolution ===========================

/// Arrival law the closed-form age commands accept.
#[derive(Debug, Clone, Copy)]
enum AgeSource {
    Will,
    Poisson(f64),
}

/// Resolve `--arrival`/`--mu` for formula evaluation. With `mu_swept`
/// the rate may be absent: every sweep point overwrites it before any
/// evaluation runs.
fn resolve_age_source(
    arrival: Option<ArrivalKind>,
    mu: Option<f64>,
    mu_swept: bool,
) -> Result<AgeSource> {
    match arrival.unwrap_or(ArrivalKind::Will) {
        ArrivalKind::Will => {
            if mu.is_some() {
                bail!("--mu requires --arrival poisson");
            }
            Ok(AgeSource::Will)
        }
        ArrivalKind::Poisson => match (mu, mu_swept) {
            (Some(rate), _) => Ok(AgeSource::Poisson(rate)),
            (None, true) => Ok(AgeSource::Poisson(f64::NAN)),
            (None, false) => bail!("--arrival poisson requires --mu"),
        },
        ArrivalKind::Deterministic => {
            bail!("no closed-form age is available under deterministic arrivals; use `simulate`")
        }
    }
}

/// Resolve `--arrival`/`--mu`/`--period` into a simulator arrival model.
fn resolve_arrival(
    arrival: Option<ArrivalKind>,
    mu: Option<f64>,
    period: Option<f64>,
    mu_swept: bool,
) -> Result<ArrivalModel> {
    match arrival.unwrap_or(ArrivalKind::Will) {
        ArrivalKind::Will => {
            if mu.is_some() {
                bail!("--mu requires --arrival poisson");
            }
            if period.is_some() {
                bail!("--period requires --arrival deterministic");
            }
            Ok(ArrivalModel::GenerateAtWill)
        }
        ArrivalKind::Poisson => {
            if period.is_some() {
                bail!("--period requires --arrival deterministic");
            }
            match (mu, mu_swept) {
                (Some(rate), _) => Ok(ArrivalModel::Poisson { rate }),
                (None, true) => Ok(ArrivalModel::Poisson { rate: f64::NAN }),
                (None, false) => bail!("--arrival poisson requires --mu"),
            }
        }
        ArrivalKind::Deterministic => {
            if mu.is_some() {
                bail!("--mu requires --arrival poisson");
            }
            match period {
                Some(period) => Ok(ArrivalModel::Deterministic { period }),
                None => bail!("--arrival deterministic requires --period"),
            }
        }
    }
}

fn resolve_run(run: &RunOpts) -> Result<RunConfig> {
    RunConfig::new(
        run.cycles.unwrap_or(DEFAULT_CYCLES),
        run.warmup.unwrap_or(DEFAULT_WARMUP),
        run.batches.unwrap_or(DEFAULT_BATCHES),
        run.seed.unwrap_or(DEFAULT_SEED),
    )
    .context("run controls")
}

fn resolve_mode(mode: Option<ModeKind>) -> SimMode {
    match mode.unwrap_or(ModeKind::Tagged) {
        ModeKind::Full => SimMode::FullTree,
        ModeKind::Tagged => SimMode::TaggedPath,
    }
}

fn mode_name(mode: SimMode) -> &'static str {
    match mode {
        SimMode::FullTree => "full",
        SimMode::TaggedPath => "tagged",
    }
}

fn arrival_name(arrival: ArrivalModel) -> &'static str {
    match arrival {
        ArrivalModel::GenerateAtWill => "will",
        ArrivalModel::Poisson { .. } => "poisson",
        ArrivalModel::Deterministic { .. } => "deterministic",
    }
}

fn status_name(status: SearchStatus) -> &'static str {
    match status {
        SearchStatus::Converged => "converged",
        SearchStatus::Boundary => "boundary",
        SearchStatus::MaxIters => "max_iters",
    }
}

// ========================== age ==========================================

const AGE_COLUMNS: &[&str] = &[
    "form",
    "hops",
    "total",
    "service_term",
    "cycle_term",
    "variance_term",
    "extra_terms",
];

fn breakdown_row(form: &str, hops: usize, b: &AgeBreakdown) -> Vec<Cell> {
    vec![
        Cell::Str(form.to_string()),
        Cell::U64(hops as u64),
        Cell::F64(b.total),
        Cell::F64(b.service_term),
        Cell::F64(b.cycle_term),
        Cell::F64(b.variance_term),
        Cell::NamedF64List(b.extra_terms.clone()),
    ]
}

/// Closed-form rows for one network: the exact single-hop age, or the
/// pipeline upper bound once relays are involved.
fn age_rows(net: &NetworkConfig, source: AgeSource) -> Result<Vec<Vec<Cell>>> {
    let hops = net.len();
    let row = match source {
        AgeSource::Will if hops == 1 => {
            let hop = &net.hops()[0];
            let z = InterarrivalMoments::generate_at_will(hop);
            breakdown_row("exact_gaw", 1, &age_building_block(hop, &z)?)
        }
        AgeSource::Will => breakdown_row("upper_bound", hops, &age_multi_hop_upper(net)?),
        AgeSource::Poisson(rate) if hops == 1 => breakdown_row(
            "exact_poisson",
            1,
            &age_building_block_poisson(&net.hops()[0], rate)?,
        ),
        AgeSource::Poisson(_) => {
            bail!(
                "--arrival poisson is modeled for a single hop; multihop sources generate at will"
            )
        }
    };
    Ok(vec![row])
}

fn age(mut args: AgeArgs) -> Result<i32> {
    args.apply_config()?;
    let net = parse_network(&args.hops)?;
    let source = resolve_age_source(args.arrival, args.mu, false)?;
    let mut report = Report::new("age", AGE_COLUMNS);
    for row in age_rows(&net, source)? {
        report.push_row(row);
    }
    emit(report, &args.io)?;
    Ok(0)
}

// ========================== approx =======================================

const APPROX_COLUMNS: &[&str] = &["form", "hops", "total"];

fn approx_row(form: &str, hops: usize, total: f64) -> Vec<Cell> {
    vec![
        Cell::Str(form.to_string()),
        Cell::U64(hops as u64),
        Cell::F64(total),
    ]
}

/// Large-n rows at fixed ratios. Two hops evaluate both the dedicated
/// two-hop form and the general recursion; the library pins their
/// identity, so a disagreement beyond 1e-9 relative is reported loudly.
fn approx_rows(delays: &[ShiftedExp], alphas: &[f64], mu: Option<f64>) -> Result<Vec<Vec<Cell>>> {
    let hops = delays.len();
    if alphas.len() != hops {
        bail!("--alpha: got {} ratios for {hops} hops", alphas.len());
    }
    let a = AlphaVector::new(alphas.to_vec()).context("--alpha")?;
    if let Some(rate) = mu {
        if hops != 1 {
            bail!("--mu applies to the single-hop form only; the network has {hops} hops");
        }
        let total = age_building_block_approx(&delays[0], rate, alphas[0])?;
        return Ok(vec![approx_row("building_block", 1, total)]);
    }
    Ok(match hops {
        1 => vec![approx_row(
            "single_hop_limit",
            1,
            age_single_hop_limit(&delays[0], alphas[0])?,
        )],
        2 => {
            let two = age_two_hop_approx(&delays[0], &delays[1], &a)?;
            let multi = age_multi_hop_approx(delays, &a)?;
            if (two - multi).abs() > 1e-9 * two.abs().max(1.0) {
                eprintln!(
                    "warning: two-hop form ({two}) and general recursion ({multi}) \
                     disagree beyond 1e-9 relative"
                );
            }
            vec![
                approx_row("two_hop", 2, two),
                approx_row("multi_hop", 2, multi),
            ]
        }
        _ => vec![approx_row(
            "multi_hop",
            hops,
            age_multi_hop_approx(delays, &a)?,
        )],
    })
}

fn approx(mut args: ApproxArgs) -> Result<i32> {
    args.apply_config()?;
    let delays = parse_delays(&args.hops)?;
    let alphas = match args.alpha.as_deref() {
        Some(list) => parse_alpha(list)?,
        None => bail!("missing --alpha: the large-n forms need one stopping ratio per hop"),
    };
    let mut report = Report::new("approx", APPROX_COLUMNS);
    for row in approx_rows(&delays, &alphas, args.mu)? {
        report.push_row(row);
    }
    emit(report, &args.io)?;
    Ok(0)
}

// ========================== optimize =====================================

const OPTIMIZE_COLUMNS: &[&str] = &["space", "objective", "hops", "argmin", "value", "status"];

fn optimize(mut args: OptimizeArgs) -> Result<i32> {
    args.apply_config()?;
    let mut report = Report::new("optimize", OPTIMIZE_COLUMNS);
    match args.space.unwrap_or(SpaceKind::Alpha) {
        SpaceKind::Alpha => {
            let delays = parse_delays(&args.hops)?;
            let (objective, name) = match (delays.len(), args.mu) {
                (1, Some(mu)) => (
                    AlphaObjective::BuildingBlock {
                        delay: &delays[0],
                        mu,
                    },
                    "building_block",
                ),
                (1, None) => (
                    AlphaObjective::SingleHopLimit(&delays[0]),
                    "single_hop_limit",
                ),
                (hops, Some(_)) => {
                    bail!("--mu applies to the single-hop objective only; the network has {hops} hops")
                }
                (_, None) => (AlphaObjective::MultiHop(&delays), "multi_hop"),
            };
            let result = optimize_alpha(&objective)?;
            report.push_row(vec![
                Cell::Str("alpha".to_string()),
                Cell::Str(name.to_string()),
                Cell::U64(delays.len() as u64),
                Cell::F64List(result.argmin.clone()),
                Cell::F64(result.value),
                Cell::Str(status_name(result.status).to_string()),
            ]);
        }
        SpaceKind::K => {
            let templates = parse_templates(&args.hops)?;
            let (objective, name) = match args.mu {
                Some(mu) => {
                    if templates.len() != 1 {
                        bail!(
                            "--mu applies to the single-hop objective only; the network has {} hops",
                            templates.len()
                        );
                    }
                    (
                        KObjective::BuildingBlockPoisson { mu },
                        "building_block_poisson",
                    )
                }
                None => (KObjective::MultiHopUpper, "multi_hop_upper"),
            };
            let result = optimize_k_exact(&templates, objective)?;
            report.push_row(vec![
                Cell::Str("k".to_string()),
                Cell::Str(name.to_string()),
                Cell::U64(templates.len() as u64),
                Cell::U32List(result.argmin.clone()),
                Cell::F64(result.value),
                Cell::Str(status_name(result.status).to_string()),
            ]);
        }
    }
    emit(report, &args.io)?;
    Ok(0)
}

// ========================== simulate =====================================

const SIMULATE_COLUMNS: &[&str] = &[
    "mode",
    "arrival",
    "avg_age",
    "ci_halfwidth",
    "std_error",
    "end_nodes",
    "successful",
    "dropped",
    "preempted",
    "gap_mean",
    "gap_count",
    "window_open",
    "window_close",
    "hop_wait_means",
    "hop_cycle_vars",
    "hop_attempts_means",
];

fn simulate_row(cfg: &SimConfig, res: &SimResult) -> Vec<Cell> {
    vec![
        Cell::Str(mode_name(cfg.mode()).to_string()),
        Cell::Str(arrival_name(cfg.arrival()).to_string()),
        Cell::F64(res.avg_age),
        Cell::F64(res.ci_halfwidth),
        Cell::F64(res.std_error()),
        Cell::U64(res.end_nodes_measured),
        Cell::U64(res.successful_updates),
        Cell::U64(res.dropped_updates),
        Cell::U64(res.preempted_updates),
        Cell::F64(res.success_gap.mean),
        Cell::U64(res.success_gap.count),
        Cell::F64(res.window.0),
        Cell::F64(res.window.1),
        Cell::F64List(res.hop_stats.iter().map(|h| h.interarrival.mean).collect()),
        Cell::F64List(res.hop_stats.iter().map(|h| h.cycle.variance).collect()),
        Cell::F64List(res.hop_stats.iter().map(|h| h.attempts.mean).collect()),
    ]
}

fn simulate_cmd(mut args: SimulateArgs) -> Result<i32> {
    args.apply_config()?;
    let net = parse_network(&args.hops)?;
    let arrival = resolve_arrival(args.arrival, args.mu, args.period, false)?;
    let cfg = SimConfig::new(
        net,
        arrival,
        resolve_mode(args.run.mode),
        resolve_run(&args.run)?,
    )?;
    let res = simulate(&cfg)?;
    let mut report = Report::new("simulate", SIMULATE_COLUMNS);
    report.push_row(simulate_row(&cfg, &res));
    emit(report, &args.io)?;
    Ok(0)
}

// ========================== validate =====================================

const VALIDATE_COLUMNS: &[&str] = &["check", "expected", "measured", "margin", "pass"];

/// Run one simulation and check it against its matched formulas: the
/// exact single-hop age (generate-at-will or Poisson), or — with relays —
/// the exact multihop age fed by the measured relay idle moments plus the
/// pipeline upper bound. A check passes when the simulated age sits
/// within the batch-means confidence half-width of its target (below
/// bound + half-width for the bound check).
fn validate(mut args: ValidateArgs) -> Result<i32> {
    args.apply_config()?;
    let net = parse_network(&args.hops)?;
    let source = resolve_age_source(args.arrival, args.mu, false)?;
    let hops = net.len();
    let arrival = match source {
        AgeSource::Will => ArrivalModel::GenerateAtWill,
        AgeSource::Poisson(_) if hops > 1 => {
            bail!(
                "--arrival poisson is modeled for a single hop; multihop sources generate at will"
            )
        }
        AgeSource::Poisson(rate) => ArrivalModel::Poisson { rate },
    };
    let cfg = SimConfig::new(
        net.clone(),
        arrival,
        resolve_mode(args.run.mode),
        resolve_run(&args.run)?,
    )?;
    let res = simulate(&cfg)?;

    let mut rows: Vec<(String, f64, bool)> = Vec::new();
    match source {
        AgeSource::Will if hops == 1 => {
            let hop = &net.hops()[0];
            let z = InterarrivalMoments::generate_at_will(hop);
            let expected = age_building_block(hop, &z)?.total;
            let pass = (res.avg_age - expected).abs() <= res.ci_halfwidth;
            rows.push(("exact_gaw_ci_covers".to_string(), expected, pass));
        }
        AgeSource::Poisson(rate) => {
            let expected = age_building_block_poisson(&net.hops()[0], rate)?.total;
            let pass = (res.avg_age - expected).abs() <= res.ci_halfwidth;
            rows.push(("exact_poisson_ci_covers".to_string(), expected, pass));
        }
        AgeSource::Will => {
            let z = res.measured_wait(hops - 1)?;
            let hybrid = age_multi_hop_exact(&net, &z)?.total;
            let covers = (res.avg_age - hybrid).abs() <= res.ci_halfwidth;
            rows.push(("hybrid_ci_covers".to_string(), hybrid, covers));
            let bound = age_multi_hop_upper(&net)?.total;
            let respected = res.avg_age <= bound + res.ci_halfwidth;
            rows.push(("upper_bound_respected".to_string(), bound, respected));
        }
    }

    let mut report = Report::new("validate", VALIDATE_COLUMNS);
    let mut all_pass = true;
    for (check, expected, pass) in rows {
        all_pass &= pass;
        report.push_row(vec![
            Cell::Str(check),
            Cell::F64(expected),
            Cell::F64(res.avg_age),
            Cell::F64(res.ci_halfwidth),
            Cell::Bool(pass),
        ]);
    }
    emit(report, &args.io)?;
    Ok(if all_pass { 0 } else { 2 })
}

// ========================== sweep ========================================

const SWEEP_AGE_COLUMNS: &[&str] = &[
    "sweep_var",
    "sweep_value",
    "form",
    "hops",
    "total",
    "service_term",
    "cycle_term",
    "variance_term",
    "extra_terms",
];

const SWEEP_APPROX_COLUMNS: &[&str] = &["sweep_var", "sweep_value", "form", "hops", "total"];

const SWEEP_SIMULATE_COLUMNS: &[&str] = &[
    "sweep_var",
    "sweep_value",
    "mode",
    "arrival",
    "avg_age",
    "ci_halfwidth",
    "std_error",
    "end_nodes",
    "successful",
    "dropped",
    "preempted",
    "gap_mean",
    "gap_count",
    "window_open",
    "window_close",
    "hop_wait_means",
    "hop_cycle_vars",
    "hop_attempts_means",
];

/// Mutable state a sweep rewrites one variable of before each point.
enum SweepPlan {
    Age {
        raw: Vec<RawHop>,
        source: AgeSource,
    },
    Approx {
        raw: Vec<(f64, f64)>,
        alphas: Vec<f64>,
        mu: Option<f64>,
    },
    Simulate {
        raw: Vec<RawHop>,
        arrival: ArrivalModel,
        mode: SimMode,
        run: RunConfig,
    },
}

impl SweepPlan {
    fn hop_count(&self) -> usize {
        match self {
            SweepPlan::Age { raw, .. } | SweepPlan::Simulate { raw, .. } => raw.len(),
            SweepPlan::Approx { raw, .. } => raw.len(),
        }
    }

    fn poisson_source(&self) -> bool {
        match self {
            SweepPlan::Age { source, .. } => matches!(source, AgeSource::Poisson(_)),
            SweepPlan::Approx { .. } => true,
            SweepPlan::Simulate { arrival, .. } => matches!(arrival, ArrivalModel::Poisson { .. }),
        }
    }

    /// Reject axes that do not name a parameter of this plan.
    fn check_axis(&self, var: SweepVar, label: &str) -> Result<()> {
        if let Some(i) = var.hop_index() {
            let hops = self.hop_count();
            if i >= hops {
                bail!(
                    "--sweep: `{label}` refers to hop {} of a {hops}-hop network",
                    i + 1
                );
            }
        }
        match (&self, var) {
            (SweepPlan::Age { .. } | SweepPlan::Simulate { .. }, SweepVar::Alpha(_)) => {
                bail!("--sweep: stopping ratios belong to the `approx` target; sweep `k<i>` here")
            }
            (SweepPlan::Approx { .. }, SweepVar::K(_)) => {
                bail!("--sweep: integer thresholds belong to the finite-n targets; sweep `alpha<i>` here")
            }
            (SweepPlan::Approx { .. }, SweepVar::N) => {
                bail!("--sweep: `n` is not a parameter of the large-n forms")
            }
            (SweepPlan::Approx { raw, .. }, SweepVar::Mu) if raw.len() != 1 => {
                bail!("--sweep: `mu` applies to the single-hop form only")
            }
            (_, SweepVar::Mu) if !self.poisson_source() => {
                bail!("--sweep: variable `mu` requires --arrival poisson")
            }
            _ => Ok(()),
        }
    }

    /// Rewrite the swept variable; axis validity was checked up front.
    fn apply(&mut self, var: SweepVar, v: f64) {
        fn apply_raw(raw: &mut [RawHop], var: SweepVar, v: f64) {
            match var {
                SweepVar::K(i) => raw[i].k = v as u32,
                SweepVar::Lambda(i) => raw[i].lambda = v,
                SweepVar::C(i) => raw[i].c = v,
                SweepVar::N => {
                    for hop in raw.iter_mut() {
                        hop.n = v as u32;
                    }
                }
                SweepVar::Alpha(_) | SweepVar::Mu => unreachable!("axis checked against the plan"),
            }
        }
        match self {
            SweepPlan::Age { raw, source } => match var {
                SweepVar::Mu => *source = AgeSource::Poisson(v),
                _ => apply_raw(raw, var, v),
            },
            SweepPlan::Approx { raw, alphas, mu } => match var {
                SweepVar::Mu => *mu = Some(v),
                SweepVar::Alpha(i) => alphas[i] = v,
                SweepVar::Lambda(i) => raw[i].0 = v,
                SweepVar::C(i) => raw[i].1 = v,
                SweepVar::K(_) | SweepVar::N => unreachable!("axis checked against the plan"),
            },
            SweepPlan::Simulate { raw, arrival, .. } => match var {
                SweepVar::Mu => match arrival {
                    ArrivalModel::Poisson { rate } => *rate = v,
                    _ => unreachable!("axis checked against the plan"),
                },
                _ => apply_raw(raw, var, v),
            },
        }
    }

    /// Evaluate the plan at its current parameters.
    fn rows(&self) -> Result<Vec<Vec<Cell>>> {
        match self {
            SweepPlan::Age { raw, source } => age_rows(&build_network(raw)?, *source),
            SweepPlan::Approx { raw, alphas, mu } => approx_rows(&build_delays(raw)?, alphas, *mu),
            SweepPlan::Simulate {
                raw,
                arrival,
                mode,
                run,
            } => {
                let cfg = SimConfig::new(build_network(raw)?, *arrival, *mode, *run)?;
                let res = simulate(&cfg)?;
                Ok(vec![simulate_row(&cfg, &res)])
            }
        }
    }
}

/// Evaluate the target once per grid value, emitting rows in grid order
/// with the swept variable and its value prefixed to each row.
fn sweep(mut args: SweepArgs) -> Result<i32> {
    args.apply_config()?;
    let Some(expr) = args.sweep.as_deref() else {
        bail!("missing --sweep: expected `var=start:end:step`");
    };
    let axis = parse_sweep(expr)?;
    let mu_swept = axis.var == SweepVar::Mu;
    if axis.var.integral() {
        let top = *axis.values.last().expect("grids are non-empty");
        if top > u32::MAX as f64 {
            bail!(
                "--sweep {}: values exceed the fan-out limit {}",
                axis.label,
                u32::MAX
            );
        }
    }

    let target = args.target.unwrap_or(TargetKind::Age);
    let (mut plan, columns) = match target {
        TargetKind::Age => (
            SweepPlan::Age {
                raw: parse_raw_hops(&args.hops)?,
                source: resolve_age_source(args.arrival, args.mu, mu_swept)?,
            },
            SWEEP_AGE_COLUMNS,
        ),
        TargetKind::Approx => {
            let raw = parse_raw_delays(&args.hops)?;
            let alphas = match args.alpha.as_deref() {
                Some(list) => parse_alpha(list)?,
                None => bail!("missing --alpha: the `approx` target needs one ratio per hop"),
            };
            if alphas.len() != raw.len() {
                bail!(
                    "--alpha: got {} ratios for {} hops",
                    alphas.len(),
                    raw.len()
                );
            }
            (
                SweepPlan::Approx {
                    raw,
                    alphas,
                    mu: args.mu,
                },
                SWEEP_APPROX_COLUMNS,
            )
        }
        TargetKind::Simulate => (
            SweepPlan::Simulate {
                raw: parse_raw_hops(&args.hops)?,
                arrival: resolve_arrival(args.arrival, args.mu, args.period, mu_swept)?,
                mode: resolve_mode(args.run.mode),
                run: resolve_run(&args.run)?,
            },
            SWEEP_SIMULATE_COLUMNS,
        ),
    };
    plan.check_axis(axis.var, &axis.label)?;

    let mut report = Report::new("sweep", columns);
    for &v in &axis.values {
        plan.apply(axis.var, v);
        let rows = plan
            .rows()
            .with_context(|| format!("sweep {} = {v}", axis.label))?;
        for row in rows {
            let mut full = Vec::with_capacity(columns.len());
            full.push(Cell::Str(axis.label.clone()));
            full.push(if axis.var.integral() {
                Cell::U64(v as u64)
            } else {
                Cell::F64(v)
            });
            full.extend(row);
            report.push_row(full);
        }
    }
    emit(report, &args.io)?;
    Ok(0)
}
