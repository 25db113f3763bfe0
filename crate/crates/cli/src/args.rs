//! Command-line surface: flag definitions, the `key = value` experiment
//! file, and parsers for compound flag values (hop tuples, ratio lists,
//! sweep axes).
//!
//! Every flag can instead appear as a config-file key of the same name;
//! explicit flags win over file entries. Hop tuples come in three
//! arities, by what the command consumes: `n,k,lambda,c` for finite-n
//! evaluation and simulation, `n,lambda,c` for integer-threshold
//! optimization, and `lambda,c` for the large-n forms.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use aoi_core::{HopConfig, HopTemplate, NetworkConfig, ShiftedExp};

use crate::report::OutputFormat;

#[derive(Debug, Parser)]
#[command(
    name = "aoi",
    version,
    about = "Age-of-information analysis for multicast trees with earliest-k stopping",
    subcommand_required = true,
    arg_required_else_help = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the finite-n age formulas for a configured tree.
    Age(AgeArgs),
    /// Evaluate the large-n closed forms at given stopping ratios.
    Approx(ApproxArgs),
    /// Minimize an age objective over ratios or integer thresholds.
    Optimize(OptimizeArgs),
    /// Run a discrete-event simulation and report the measured age.
    Simulate(SimulateArgs),
    /// Re-evaluate a command while one parameter walks a grid.
    Sweep(SweepArgs),
    /// Run matched analytic/simulation pairs and report pass or fail.
    Validate(ValidateArgs),
}

/// Source arrival model named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArrivalKind {
    /// A fresh update is generated the instant the previous one completes.
    Will,
    /// Poisson arrivals at rate `--mu`; arrivals during service drop.
    Poisson,
    /// Fixed-period arrivals every `--period`; arrivals during service drop.
    Deterministic,
}

/// Which simulation engine to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeKind {
    /// Every node of the tree, event by event.
    Full,
    /// One root-to-leaf chain with sibling order statistics.
    Tagged,
}

/// Search space for `optimize`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceKind {
    /// Stopping ratios in the open unit cube (large-n objectives).
    Alpha,
    /// Integer thresholds `1..=n` per hop (finite-n objectives).
    K,
}

/// What `sweep` evaluates at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetKind {
    Age,
    Approx,
    Simulate,
}

impl FromStr for ArrivalKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

impl FromStr for ModeKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

impl FromStr for SpaceKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

impl FromStr for TargetKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

/// Flags shared by every command: config file and report destination.
#[derive(Debug, Args)]
pub struct IoOpts {
    /// Experiment file of `key = value` lines; explicit flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, value_name = "FMT")]
    pub output: Option<OutputFormat>,
    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

impl IoOpts {
    fn absorb(&mut self, key: &str, value: &str) -> Result<bool> {
        match key {
            "output" => set_parsed(&mut self.output, key, value)?,
            "out" => {
                if self.out.is_none() {
                    self.out = Some(PathBuf::from(value));
                }
            }
            "config" => bail!("config key `config` cannot appear inside a config file"),
            _ => return Ok(false),
        }
        Ok(true)
    }
}

/// Simulation run-control flags.
#[derive(Debug, Args)]
pub struct RunOpts {
    /// Source cycles to simulate, including warmup.
    #[arg(long, value_name = "N")]
    pub cycles: Option<u64>,
    /// Source cycles to discard before measurement starts.
    #[arg(long, value_name = "N")]
    pub warmup: Option<u64>,
    /// Batch count for the batch-means confidence interval.
    #[arg(long, value_name = "N")]
    pub batches: Option<u32>,
    /// RNG seed; every result is a pure function of flags and seed.
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
    /// Simulation engine.
    #[arg(long, value_enum, value_name = "ENGINE")]
    pub mode: Option<ModeKind>,
}

impl RunOpts {
    fn absorb(&mut self, key: &str, value: &str) -> Result<bool> {
        match key {
            "cycles" => set_parsed(&mut self.cycles, key, value)?,
            "warmup" => set_parsed(&mut self.warmup, key, value)?,
            "batches" => set_parsed(&mut self.batches, key, value)?,
            "seed" => set_parsed(&mut self.seed, key, value)?,
            "mode" => set_parsed(&mut self.mode, key, value)?,
            _ => return Ok(false),
        }
        Ok(true)
    }
}

#[derive(Debug, Args)]
pub struct AgeArgs {
    /// Per-hop `n,k,lambda,c` tuples, source hop first.
    #[arg(long, value_name = "N,K,LAMBDA,C", num_args = 1..)]
    pub hops: Vec<String>,
    /// Source arrival model (`poisson` is modeled for a single hop).
    #[arg(long, value_enum, value_name = "MODEL")]
    pub arrival: Option<ArrivalKind>,
    /// Poisson arrival rate.
    #[arg(long, value_name = "RATE")]
    pub mu: Option<f64>,
    #[command(flatten)]
    pub io: IoOpts,
}

impl AgeArgs {
    pub fn apply_config(&mut self) -> Result<()> {
        for (key, value) in load_config(self.io.config.as_deref())? {
            if self.io.absorb(&key, &value)? {
                continue;
            }
            match key.as_str() {
                "hops" => fill_hops(&mut self.hops, &value),
                "arrival" => set_parsed(&mut self.arrival, &key, &value)?,
                "mu" => set_parsed(&mut self.mu, &key, &value)?,
                _ => bail!("config key `{key}` is not a parameter of `age`"),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    /// Per-hop `lambda,c` delay tuples, source hop first.
    #[arg(long, value_name = "LAMBDA,C", num_args = 1..)]
    pub hops: Vec<String>,
    /// Stopping ratios `a1,a2,...` in (0,1), one per hop.
    #[arg(long, value_name = "A1,A2,...")]
    pub alpha: Option<String>,
    /// Poisson arrival rate (single hop only).
    #[arg(long, value_name = "RATE")]
    pub mu: Option<f64>,
    #[command(flatten)]
    pub io: IoOpts,
}

impl ApproxArgs {
    pub fn apply_config(&mut self) -> Result<()> {
        for (key, value) in load_config(self.io.config.as_deref())? {
            if self.io.absorb(&key, &value)? {
                continue;
            }
            match key.as_str() {
                "hops" => fill_hops(&mut self.hops, &value),
                "alpha" => set_string(&mut self.alpha, &value),
                "mu" => set_parsed(&mut self.mu, &key, &value)?,
                _ => bail!("config key `{key}` is not a parameter of `approx`"),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Search space: `alpha` takes `lambda,c` hop tuples, `k` takes
    /// `n,lambda,c`.
    #[arg(long, value_enum, value_name = "SPACE")]
    pub space: Option<SpaceKind>,
    /// Per-hop delay tuples, source hop first (arity depends on --space).
    #[arg(long, value_name = "TUPLE", num_args = 1..)]
    pub hops: Vec<String>,
    /// Poisson arrival rate (single hop only; changes the objective).
    #[arg(long, value_name = "RATE")]
    pub mu: Option<f64>,
    #[command(flatten)]
    pub io: IoOpts,
}

impl OptimizeArgs {
    pub fn apply_config(&mut self) -> Result<()> {
        for (key, value) in load_config(self.io.config.as_deref())? {
            if self.io.absorb(&key, &value)? {
                continue;
            }
            match key.as_str() {
                "hops" => fill_hops(&mut self.hops, &value),
                "space" => set_parsed(&mut self.space, &key, &value)?,
                "mu" => set_parsed(&mut self.mu, &key, &value)?,
                _ => bail!("config key `{key}` is not a parameter of `optimize`"),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Per-hop `n,k,lambda,c` tuples, source hop first.
    #[arg(long, value_name = "N,K,LAMBDA,C", num_args = 1..)]
    pub hops: Vec<String>,
    /// Source arrival model.
    #[arg(long, value_enum, value_name = "MODEL")]
    pub arrival: Option<ArrivalKind>,
    /// Poisson arrival rate.
    #[arg(long, value_name = "RATE")]
    pub mu: Option<f64>,
    /// Deterministic arrival period.
    #[arg(long, value_name = "T")]
    pub period: Option<f64>,
    #[command(flatten)]
    pub run: RunOpts,
    #[command(flatten)]
    pub io: IoOpts,
}

impl SimulateArgs {
    pub fn apply_config(&mut self) -> Result<()> {
        for (key, value) in load_config(self.io.config.as_deref())? {
            if self.io.absorb(&key, &value)? || self.run.absorb(&key, &value)? {
                continue;
            }
            match key.as_str() {
                "hops" => fill_hops(&mut self.hops, &value),
                "arrival" => set_parsed(&mut self.arrival, &key, &value)?,
                "mu" => set_parsed(&mut self.mu, &key, &value)?,
                "period" => set_parsed(&mut self.period, &key, &value)?,
                _ => bail!("config key `{key}` is not a parameter of `simulate`"),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// What to evaluate at each grid point.
    #[arg(long, value_enum, value_name = "CMD")]
    pub target: Option<TargetKind>,
    /// Swept parameter and grid: `var=start:end:step` with var one of
    /// `k<i>`, `alpha<i>`, `lambda<i>`, `c<i>`, `mu`, `n`.
    #[arg(long, value_name = "VAR=START:END:STEP")]
    pub sweep: Option<String>,
    /// Per-hop tuples for the target command, source hop first.
    #[arg(long, value_name = "TUPLE", num_args = 1..)]
    pub hops: Vec<String>,
    /// Stopping ratios for the `approx` target.
    #[arg(long, value_name = "A1,A2,...")]
    pub alpha: Option<String>,
    /// Source arrival model (`age` and `simulate` targets).
    #[arg(long, value_enum, value_name = "MODEL")]
    pub arrival: Option<ArrivalKind>,
    /// Poisson arrival rate.
    #[arg(long, value_name = "RATE")]
    pub mu: Option<f64>,
    /// Deterministic arrival period (`simulate` target).
    #[arg(long, value_name = "T")]
    pub period: Option<f64>,
    #[command(flatten)]
    pub run: RunOpts,
    #[command(flatten)]
    pub io: IoOpts,
}

impl SweepArgs {
    pub fn apply_config(&mut self) -> Result<()> {
        for (key, value) in load_config(self.io.config.as_deref())? {
            if self.io.absorb(&key, &value)? || self.run.absorb(&key, &value)? {
                continue;
            }
            match key.as_str() {
                "target" => set_parsed(&mut self.target, &key, &value)?,
                "sweep" => set_string(&mut self.sweep, &value),
                "hops" => fill_hops(&mut self.hops, &value),
                "alpha" => set_string(&mut self.alpha, &value),
                "arrival" => set_parsed(&mut self.arrival, &key, &value)?,
                "mu" => set_parsed(&mut self.mu, &key, &value)?,
                "period" => set_parsed(&mut self.period, &key, &value)?,
                _ => bail!("config key `{key}` is not a parameter of `sweep`"),
            }
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Per-hop `n,k,lambda,c` tuples, source hop first.
    #[arg(long, value_name = "N,K,LAMBDA,C", num_args = 1..)]
    pub hops: Vec<String>,
    /// Source arrival model (`will` or `poisson`).
    #[arg(long, value_enum, value_name = "MODEL")]
    pub arrival: Option<ArrivalKind>,
    /// Poisson arrival rate.
    #[arg(long, value_name = "RATE")]
    pub mu: Option<f64>,
    #[command(flatten)]
    pub run: RunOpts,
    #[command(flatten)]
    pub io: IoOpts,
}

impl ValidateArgs {
    pub fn apply_config(&mut self) -> Result<()> {
        for (key, value) in load_config(self.io.config.as_deref())? {
            if self.io.absorb(&key, &value)? || self.run.absorb(&key, &value)? {
                continue;
            }
            match key.as_str() {
                "hops" => fill_hops(&mut self.hops, &value),
                "arrival" => set_parsed(&mut self.arrival, &key, &value)?,
                "mu" => set_parsed(&mut self.mu, &key, &value)?,
                _ => bail!("config key `{key}` is not a parameter of `validate`"),
            }
        }
        Ok(())
    }
}

// ========================== config file =================================

/// Read a `key = value` config document, preserving file order. Lines
/// that are blank or start with `#` are skipped.
fn load_config(path: Option<&Path>) -> Result<Vec<(String, String)>> {
    let Some(path) = path else {
        return Ok(Vec::new());
    };
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read --config file `{}`", path.display()))?;
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(
                "config file `{}` line {}: expected `key = value`, got `{line}`",
                path.display(),
                i + 1
            );
        };
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        if value.is_empty() {
            bail!(
                "config file `{}` line {}: key `{key}` has an empty value",
                path.display(),
                i + 1
            );
        }
        entries.push((key, value));
    }
    Ok(entries)
}

/// Fill `slot` from a config value unless the flag was given explicitly.
fn set_parsed<T: FromStr>(slot: &mut Option<T>, key: &str, value: &str) -> Result<()>
where
    T::Err: std::fmt::Display,
{
    if slot.is_none() {
        *slot = Some(
            value
                .parse()
                .map_err(|e| anyhow!("config key `{key}`: {e} (value `{value}`)"))?,
        );
    }
    Ok(())
}

fn set_string(slot: &mut Option<String>, value: &str) {
    if slot.is_none() {
        *slot = Some(value.to_string());
    }
}

fn fill_hops(slot: &mut Vec<String>, value: &str) {
    if slot.is_empty() {
        slot.extend(value.split_whitespace().map(String::from));
    }
}

// ========================== value parsers ===============================

fn split_fields(tuple: &str) -> Vec<&str> {
    tuple.split(',').map(str::trim).collect()
}

fn parse_num<T: FromStr>(raw: &str, tuple_idx: usize, field: &str) -> Result<T> {
    raw.parse().map_err(|_| {
        anyhow!(
            "--hops tuple {} field `{field}`: `{raw}` is not a valid number",
            tuple_idx + 1
        )
    })
}

fn require_hops(tuples: &[String], arity: &str) -> Result<()> {
    if tuples.is_empty() {
        bail!("missing --hops: provide one `{arity}` tuple per hop, source hop first");
    }
    Ok(())
}

/// Unchecked per-hop parameters, kept mutable so sweeps can rewrite one
/// field and re-validate through [`build_network`].
#[derive(Debug, Clone, Copy)]
pub struct RawHop {
    pub n: u32,
    pub k: u32,
    pub lambda: f64,
    pub c: f64,
}

/// Parse 4-field `n,k,lambda,c` tuples without domain validation.
pub fn parse_raw_hops(tuples: &[String]) -> Result<Vec<RawHop>> {
    require_hops(tuples, "n,k,lambda,c")?;
    let mut raw = Vec::with_capacity(tuples.len());
    for (i, tuple) in tuples.iter().enumerate() {
        let fields = split_fields(tuple);
        let [n, k, lambda, c] = fields.as_slice() else {
            bail!(
                "--hops tuple {}: expected 4 fields `n,k,lambda,c`, got {} in `{tuple}`",
                i + 1,
                fields.len()
            );
        };
        raw.push(RawHop {
            n: parse_num(n, i, "n")?,
            k: parse_num(k, i, "k")?,
            lambda: parse_num(lambda, i, "lambda")?,
            c: parse_num(c, i, "c")?,
        });
    }
    Ok(raw)
}

/// Validate raw hop parameters into a network, naming the failing hop.
pub fn build_network(raw: &[RawHop]) -> Result<NetworkConfig> {
    let mut hops = Vec::with_capacity(raw.len());
    for (i, r) in raw.iter().enumerate() {
        let delay = ShiftedExp::new(r.lambda, r.c).with_context(|| format!("hop {}", i + 1))?;
        hops.push(HopConfig::new(r.n, r.k, delay).with_context(|| format!("hop {}", i + 1))?);
    }
    NetworkConfig::new(hops).context("--hops")
}

/// Parse 4-field `n,k,lambda,c` tuples into a validated network.
pub fn parse_network(tuples: &[String]) -> Result<NetworkConfig> {
    build_network(&parse_raw_hops(tuples)?)
}

/// Parse 3-field `n,lambda,c` tuples into threshold-search templates.
pub fn parse_templates(tuples: &[String]) -> Result<Vec<HopTemplate>> {
    require_hops(tuples, "n,lambda,c")?;
    let mut templates = Vec::with_capacity(tuples.len());
    for (i, tuple) in tuples.iter().enumerate() {
        let fields = split_fields(tuple);
        let [n, lambda, c] = fields.as_slice() else {
            bail!(
                "--hops tuple {}: expected 3 fields `n,lambda,c`, got {} in `{tuple}`",
                i + 1,
                fields.len()
            );
        };
        let n: u32 = parse_num(n, i, "n")?;
        let lambda: f64 = parse_num(lambda, i, "lambda")?;
        let c: f64 = parse_num(c, i, "c")?;
        let delay =
            ShiftedExp::new(lambda, c).with_context(|| format!("--hops tuple {}", i + 1))?;
        templates
            .push(HopTemplate::new(n, delay).with_context(|| format!("--hops tuple {}", i + 1))?);
    }
    Ok(templates)
}

/// Parse 2-field `lambda,c` tuples without domain validation.
pub fn parse_raw_delays(tuples: &[String]) -> Result<Vec<(f64, f64)>> {
    require_hops(tuples, "lambda,c")?;
    let mut raw = Vec::with_capacity(tuples.len());
    for (i, tuple) in tuples.iter().enumerate() {
        let fields = split_fields(tuple);
        let [lambda, c] = fields.as_slice() else {
            bail!(
                "--hops tuple {}: expected 2 fields `lambda,c`, got {} in `{tuple}`",
                i + 1,
                fields.len()
            );
        };
        raw.push((parse_num(lambda, i, "lambda")?, parse_num(c, i, "c")?));
    }
    Ok(raw)
}

/// Validate raw `(lambda, c)` pairs into delay laws, naming the failing hop.
pub fn build_delays(raw: &[(f64, f64)]) -> Result<Vec<ShiftedExp>> {
    raw.iter()
        .enumerate()
        .map(|(i, (lambda, c))| {
            ShiftedExp::new(*lambda, *c).with_context(|| format!("hop {}", i + 1))
        })
        .collect()
}

/// Parse 2-field `lambda,c` tuples into per-hop delay laws.
pub fn parse_delays(tuples: &[String]) -> Result<Vec<ShiftedExp>> {
    build_delays(&parse_raw_delays(tuples)?)
}

/// Parse a `a1,a2,...` ratio list.
pub fn parse_alpha(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .map_err(|_| anyhow!("--alpha: `{s}` is not a valid number"))
        })
        .collect()
}

// ========================== sweep axes ==================================

/// A parameter a sweep can walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVar {
    /// Threshold of hop `i` (0-based).
    K(usize),
    /// Stopping ratio of hop `i`.
    Alpha(usize),
    /// Delay rate of hop `i`.
    Lambda(usize),
    /// Delay shift of hop `i`.
    C(usize),
    /// Exogenous Poisson arrival rate.
    Mu,
    /// Fan-out of every hop.
    N,
}

impl SweepVar {
    /// 0-based hop index the variable refers to, if any.
    pub fn hop_index(&self) -> Option<usize> {
        match self {
            SweepVar::K(i) | SweepVar::Alpha(i) | SweepVar::Lambda(i) | SweepVar::C(i) => Some(*i),
            SweepVar::Mu | SweepVar::N => None,
        }
    }

    /// Whether the variable only takes integer values.
    pub fn integral(&self) -> bool {
        matches!(self, SweepVar::K(_) | SweepVar::N)
    }
}

/// A parsed `--sweep var=start:end:step` axis: the variable, its display
/// label, and the inclusive value grid in sweep order.
#[derive(Debug, Clone)]
pub struct SweepAxis {
    pub var: SweepVar,
    pub label: String,
    pub values: Vec<f64>,
}

pub fn parse_sweep(expr: &str) -> Result<SweepAxis> {
    let Some((name, range)) = expr.split_once('=') else {
        bail!("--sweep: expected `var=start:end:step`, got `{expr}`");
    };
    let name = name.trim();
    let var = parse_sweep_var(name)?;
    let parts: Vec<&str> = range.split(':').map(str::trim).collect();
    let [start, end, step] = parts.as_slice() else {
        bail!("--sweep {name}: expected `start:end:step`, got `{range}`");
    };
    let parse = |what: &str, raw: &str| -> Result<f64> {
        let v: f64 = raw
            .parse()
            .map_err(|_| anyhow!("--sweep {name}: {what} `{raw}` is not a valid number"))?;
        if !v.is_finite() {
            bail!("--sweep {name}: {what} must be finite, got {v}");
        }
        Ok(v)
    };
    let (start, end, step) = (
        parse("start", start)?,
        parse("end", end)?,
        parse("step", step)?,
    );
    if step <= 0.0 {
        bail!("--sweep {name}: step must be positive, got {step}");
    }
    if end < start {
        bail!("--sweep {name}: end {end} is below start {start}");
    }
    if var.integral() {
        for (what, v) in [("start", start), ("end", end), ("step", step)] {
            if v.fract() != 0.0 || v < 0.0 {
                bail!(
                    "--sweep {name}: integer variable needs a non-negative integer {what}, got {v}"
                );
            }
        }
    }
    let values = if var.integral() {
        let (s, e, d) = (start as u64, end as u64, step as u64);
        (0..=(e - s) / d).map(|i| (s + i * d) as f64).collect()
    } else {
        let count = ((end - start) / step + 1e-9).floor() as u64 + 1;
        (0..count).map(|i| start + i as f64 * step).collect()
    };
    Ok(SweepAxis {
        var,
        label: name.to_string(),
        values,
    })
}

fn parse_sweep_var(name: &str) -> Result<SweepVar> {
    if name == "mu" {
        return Ok(SweepVar::Mu);
    }
    if name == "n" {
        return Ok(SweepVar::N);
    }
    for (prefix, make) in [
        ("alpha", SweepVar::Alpha as fn(usize) -> SweepVar),
        ("lambda", SweepVar::Lambda),
        ("k", SweepVar::K),
        ("c", SweepVar::C),
    ] {
        if let Some(digits) = name.strip_prefix(prefix) {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let idx: usize = digits
                    .parse()
                    .map_err(|_| anyhow!("--sweep: hop index `{digits}` is out of range"))?;
                if idx == 0 {
                    bail!("--sweep: hop indices are 1-based, got `{name}`");
                }
                return Ok(make(idx - 1));
            }
        }
    }
    bail!(
        "--sweep: `{name}` is not a sweepable parameter; expected one of \
         k<i>, alpha<i>, lambda<i>, c<i>, mu, n"
    );
}
