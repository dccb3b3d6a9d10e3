use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, ValueEnum};
use netextremes::extremal::{self, DEFAULT_PLATEAU_WINDOW};
use netextremes::graph::{DegreeSequence, Ordering};
use netextremes::hitting::{self, FhtModel};
use netextremes::samplers::{
    self, ContinuousMetropolis, GraphWalk, GraphWalker, IidValues, ProposalSpec, ProposalTail,
    Start, TargetSpec, WalkConfig,
};
use netextremes::tail::{self, DoubleBootstrap, SortedSample, TailMethod};
use netextremes::{Magnitude, SortedSample64};
use serde::Serialize;
use serde_json::json;

use crate::input::{self, InputFormat, OrderingArg};
use crate::output::{OutputDir, SCHEMA_VERSION};
use crate::UsageError;

#[derive(Debug, Args)]
pub struct InputArgs {
    /// SNAP edge list or one-degree-per-line file (`.gz` accepted).
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: InputFormat,
    /// Node order used to form the degree sequence.
    #[arg(long, value_enum, default_value = "first-appearance")]
    pub ordering: OrderingArg,
}

impl InputArgs {
    fn load(&self) -> Result<input::Loaded> {
        input::load(&self.input, self.format, self.ordering.into())
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Seed from the flag, or fresh entropy outside test mode.
fn resolve_seed(seed: Option<u64>) -> Result<u64> {
    match seed {
        Some(s) => Ok(s),
        None if std::env::var_os("NETEXTREMES_TEST_MODE").is_some_and(|v| v != "0") => {
            Err(usage("--seed is required in test mode"))
        }
        None => Ok(rand::random()),
    }
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

// ---------------------------------------------------------------- degrees

#[derive(Debug, Args)]
pub struct DegreesArgs {
    #[command(flatten)]
    pub input: InputArgs,
}

pub fn degrees(args: &DegreesArgs, out: &Path) -> Result<()> {
    let loaded = args.input.load()?;
    let d = &loaded.degrees;
    let mut dir = OutputDir::new(out, "degrees", Some(&args.input.input))?;
    dir.param("format", format!("{:?}", loaded.format).to_lowercase());
    dir.param("ordering", ordering_name(d.ordering()));
    dir.lines("degrees.txt", d.values())?;
    let mut summary = json!({
        "schema_version": SCHEMA_VERSION,
        "n": d.len(),
        "max_degree": d.max(),
        "mean_degree": d.mean(),
        "ordering": d.ordering(),
    });
    if let Some((g, stats)) = &loaded.graph {
        summary["edge_count"] = json!(g.edge_count());
        summary["parse"] = json!(stats);
    }
    dir.json("degrees.summary.json", &summary)?;
    dir.finish()?;
    emit(&summary)
}

fn ordering_name(o: Ordering) -> &'static str {
    match o {
        Ordering::FirstAppearance => "first-appearance",
        Ordering::SortedAscending => "sorted-ascending",
        Ordering::WalkOrder => "walk-order",
    }
}

// ---------------------------------------------------------------- tail

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    All,
    Hill,
    Ratio,
    Moment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Averaging {
    /// Bootstrap only selects k; estimates use the full sample.
    Selection,
    /// Estimates are averaged over the bootstrap resamples at the selected k.
    ResampleMean,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Number of upper order statistics.
    #[arg(long, conflicts_with = "bootstrap")]
    pub k: Option<usize>,
    /// Select k by double bootstrap with this many resamples.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// First bootstrap subsample size (default floor(n^0.9)).
    #[arg(long)]
    pub n1: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "all")]
    pub method: MethodArg,
    /// Ratio-estimator threshold; defaults to X_(n-k).
    #[arg(long)]
    pub ratio_threshold: Option<f64>,
    #[arg(long, value_enum, default_value = "selection")]
    pub averaging: Averaging,
}

#[derive(Serialize)]
struct EstimateRecord {
    method: TailMethod,
    k_or_threshold: f64,
    k: Option<usize>,
    threshold: f64,
    gamma: f64,
    alpha: Option<f64>,
    n: usize,
    exceedances: Option<usize>,
    seed: Option<u64>,
    #[serde(rename = "B")]
    b: Option<usize>,
}

pub fn tail(args: &TailArgs, out: &Path) -> Result<()> {
    if args.k == Some(0) {
        return Err(usage("--k must be at least 1"));
    }
    if args.k.is_none() && args.bootstrap.is_none() {
        return Err(usage("one of --k or --bootstrap is required"));
    }
    if args.bootstrap == Some(0) {
        return Err(usage("--bootstrap must be at least 1"));
    }
    if args.averaging == Averaging::ResampleMean && args.bootstrap.is_none() {
        return Err(usage("--averaging resample-mean needs --bootstrap"));
    }
    let loaded = args.input.load()?;
    let values: Vec<f64> = loaded.degrees.to_scalars();
    let sample = SortedSample::new(&values)?;
    let mut dir = OutputDir::new(out, "tail", Some(&args.input.input))?;

    let (k, selection, seed) = match (args.k, args.bootstrap) {
        (Some(k), _) => (k, None, None),
        (None, Some(b)) => {
            let seed = resolve_seed(args.seed)?;
            let settings = DoubleBootstrap {
                resamples: b,
                n1: args.n1,
                seed,
            };
            let sel = tail::double_bootstrap_k(&sample, &settings)?;
            (sel.k, Some(sel), Some(seed))
        }
        (None, None) => unreachable!(),
    };
    if let Some(s) = seed {
        dir.seed(s);
    }
    dir.param("k", k);
    dir.param("method", format!("{:?}", args.method).to_lowercase());
    dir.param("averaging", format!("{:?}", args.averaging).to_lowercase());
    if let Some(b) = args.bootstrap {
        dir.param("bootstrap", b);
    }
    if let Some(n1) = args.n1 {
        dir.param("n1", n1);
    }

    let methods: Vec<TailMethod> = match args.method {
        MethodArg::All => vec![TailMethod::Hill, TailMethod::Ratio, TailMethod::Moment],
        MethodArg::Hill => vec![TailMethod::Hill],
        MethodArg::Ratio => vec![TailMethod::Ratio],
        MethodArg::Moment => vec![TailMethod::Moment],
    };

    let mut records = Vec::new();
    for method in methods {
        let record = match args.averaging {
            Averaging::Selection => {
                let est = match method {
                    TailMethod::Hill => tail::hill(&sample, k)?,
                    TailMethod::Moment => tail::moment(&sample, k)?,
                    TailMethod::Ratio => {
                        let x_n = match args.ratio_threshold {
                            Some(x) => x,
                            None => tail::hill(&sample, k)?.threshold,
                        };
                        tail::ratio(sample.as_slice(), x_n)?
                    }
                };
                EstimateRecord {
                    method,
                    k_or_threshold: match est.k {
                        Some(k) => k as f64,
                        None => est.threshold,
                    },
                    k: est.k,
                    threshold: est.threshold,
                    gamma: est.gamma,
                    alpha: est.alpha,
                    n: est.n,
                    exceedances: Some(est.exceedances),
                    seed,
                    b: args.bootstrap,
                }
            }
            Averaging::ResampleMean => {
                let b = args.bootstrap.unwrap();
                let avg = tail::bootstrap_average(&sample, method, k, b, seed.unwrap())?;
                EstimateRecord {
                    method,
                    k_or_threshold: k as f64,
                    k: Some(k),
                    threshold: sample.order_stat(sample.len() - k),
                    gamma: avg.gamma,
                    alpha: avg.alpha,
                    n: sample.len(),
                    exceedances: None,
                    seed,
                    b: Some(avg.resamples_used),
                }
            }
        };
        records.push(record);
    }

    let curve: Vec<(usize, f64, Option<f64>)> = tail::hill_curve(&sample, 1..sample.len())
        .into_iter()
        .map(|e| (e.k.unwrap(), e.gamma, e.alpha))
        .collect();
    dir.csv("tail_curve.csv", &["k", "gamma", "alpha"], &curve)?;

    let power_law = tail::fit_power_law(&sample, k).ok();
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "n": sample.len(),
        "n_positive": sample.positive().len(),
        "k": k,
        "k_selection": match &selection {
            Some(s) => json!({"mode": "double-bootstrap", "detail": s}),
            None => json!({"mode": "manual"}),
        },
        "averaging": args.averaging,
        "ratio_threshold_source": if args.ratio_threshold.is_some() { "user" } else { "X_(n-k)" },
        "estimates": records,
        "power_law": power_law,
    });
    dir.json("tail.json", &report)?;
    dir.finish()?;
    emit(&report)
}

// ---------------------------------------------------------------- mex

#[derive(Debug, Args)]
pub struct MexArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// `default` (distinct order statistics below the top five) or a
    /// comma-separated list of thresholds.
    #[arg(long, default_value = "default")]
    pub grid: String,
}

pub fn mex(args: &MexArgs, out: &Path) -> Result<()> {
    let loaded = args.input.load()?;
    let values: Vec<f64> = loaded.degrees.to_scalars();
    let grid = match input::parse_grid(&args.grid)? {
        Some(g) => g,
        None => tail::default_mean_excess_grid(&SortedSample::new(&values)?),
    };
    let curve = tail::mean_excess_curve(&values, &grid)?;
    let mut dir = OutputDir::new(out, "mex", Some(&args.input.input))?;
    dir.param("grid", &args.grid);
    let rows: Vec<(f64, f64, usize)> = curve.points.iter().map(|p| (p.u, p.e, p.count)).collect();
    dir.csv("mean_excess.csv", &["u", "e", "count"], &rows)?;
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "points": curve.points.len(),
        "omitted_thresholds": curve.omitted,
        "slope": tail::least_squares_slope(&curve.points),
    });
    dir.json("mean_excess.json", &summary)?;
    dir.finish()?;
    emit(&summary)
}

// ---------------------------------------------------------------- theta

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// `default` (quantiles 80%..99.5% by 0.5%) or a comma-separated list.
    #[arg(long, default_value = "default")]
    pub grid: String,
    /// Plateau window length in grid points.
    #[arg(long, default_value_t = DEFAULT_PLATEAU_WINDOW)]
    pub window: usize,
}

struct ThetaRun {
    curve: netextremes::ThetaCurve64,
    selection: netextremes::PlateauSelection64,
}

fn run_theta(degrees: &DegreeSequence, grid: &str, window: usize) -> Result<ThetaRun> {
    let seq: Vec<f64> = degrees.to_scalars();
    let grid = match input::parse_grid(grid)? {
        Some(g) => g,
        None => extremal::default_theta_grid(&seq)?,
    };
    let curve = extremal::theta_curve(&seq, &grid)?;
    let selection = extremal::select_theta_plateau(&curve.points, window)?;
    Ok(ThetaRun { curve, selection })
}

pub fn theta(args: &ThetaArgs, out: &Path) -> Result<()> {
    let loaded = args.input.load()?;
    let run = run_theta(&loaded.degrees, &args.grid, args.window)?;
    let mut dir = OutputDir::new(out, "theta", Some(&args.input.input))?;
    dir.param("grid", &args.grid);
    dir.param("window", args.window);
    dir.param("ordering", ordering_name(loaded.degrees.ordering()));
    let rows: Vec<_> = run
        .curve
        .points
        .iter()
        .map(|p| (p.u, p.theta, p.raw, p.branch, p.n_exceed))
        .collect();
    dir.csv("theta_curve.csv", &["u", "theta", "raw", "branch", "N"], &rows)?;
    let sel = &run.selection;
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "theta": sel.theta,
        "u_low": sel.u_low,
        "u_high": sel.u_high,
        "window_w": sel.window_w,
        "coefficient_of_variation": sel.coefficient_of_variation,
        "mean_cluster_size": extremal::mean_cluster_size(sel.theta)?,
        "ordering": loaded.degrees.ordering(),
        "curve_points": run.curve.points.len(),
        "infeasible_thresholds": run.curve.infeasible,
    });
    dir.json("theta_selection.json", &report)?;
    dir.finish()?;
    emit(&report)
}

// ---------------------------------------------------------------- fht

#[derive(Debug, Args)]
pub struct FhtArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 0.05)]
    pub rho: f64,
    /// `auto` (plateau-selected intervals estimate) or a value in (0, 1].
    #[arg(long, default_value = "auto")]
    pub theta: String,
    #[arg(long, default_value_t = DEFAULT_PLATEAU_WINDOW)]
    pub window: usize,
    /// Stop the pmf table once the remaining mass falls below this.
    #[arg(long, default_value_t = 1e-6)]
    pub pmf_cutoff: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_rows: usize,
}

pub fn fht(args: &FhtArgs, out: &Path) -> Result<()> {
    let loaded = args.input.load()?;
    let (theta, source) = if args.theta == "auto" {
        let run = run_theta(&loaded.degrees, "default", args.window)?;
        (run.selection.theta, "auto")
    } else {
        let t: f64 = args
            .theta
            .parse()
            .map_err(|_| usage(format!("--theta must be `auto` or a number, got {:?}", args.theta)))?;
        (t, "user")
    };
    let sorted: SortedSample64 = SortedSample::new(&loaded.degrees.sorted_scalars::<f64>())?;
    let thr = hitting::quantile_threshold(&sorted, args.rho)?;
    if thr.rho_effective <= 0.0 {
        return Err(netextremes::Error::Degenerate(format!(
            "no degree exceeds the {} quantile {}; raise rho",
            1.0 - args.rho,
            thr.x_rho
        ))
        .into());
    }
    let model = FhtModel::new(thr.rho_effective, theta)?;
    let (rows, capped) = model.pmf_table(args.pmf_cutoff, args.max_rows);

    let mut dir = OutputDir::new(out, "fht", Some(&args.input.input))?;
    dir.param("rho", args.rho);
    dir.param("theta", &args.theta);
    dir.param("window", args.window);
    dir.param("pmf_cutoff", args.pmf_cutoff);
    let pmf: Vec<_> = rows.iter().map(|r| (r.j, r.normalized, r.raw)).collect();
    dir.csv("fht_pmf.csv", &["j", "normalized", "raw"], &pmf)?;

    let mut curve = Vec::new();
    for step in 0..=39 {
        let level = 0.80 + 0.005 * step as f64;
        let t = hitting::quantile_threshold(&sorted, 1.0 - level)?;
        if t.rho_effective > 0.0 {
            if let Magnitude::Finite(m) = hitting::mean_fht_scaled(t.rho_effective, theta)? {
                curve.push((level, t.x_rho, t.rho_effective, m));
            }
        }
    }
    dir.csv(
        "fht_mean_curve.csv",
        &["level", "x_rho", "rho_effective", "mean_scaled"],
        &curve,
    )?;

    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "rho_nominal": thr.rho_nominal,
        "rho_effective": thr.rho_effective,
        "x_rho": thr.x_rho,
        "theta": theta,
        "theta_source": source,
        "mean_scaled": hitting::mean_fht_scaled(thr.rho_effective, theta)?,
        "mean_fraction": hitting::mean_fht_fraction(theta)?,
        "geometric_p": model.p,
        "pmf_rows": rows.len(),
        "pmf_truncated_by_row_cap": capped,
        "pmf_tail_mass": model.tail_mass(rows.len()),
    });
    dir.json("fht_model.json", &report)?;
    dir.finish()?;
    emit(&report)
}

// ---------------------------------------------------------------- walk

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WalkerArg {
    Srw,
    Mhrw,
    /// Independent uniform node sampling (reference generator).
    Iid,
    /// Continuous random-walk Metropolis chain; no input file.
    Metropolis,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Graph input (not used by the metropolis walker).
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    pub format: InputFormat,
    #[arg(long, value_enum)]
    pub walker: WalkerArg,
    /// `uniform` or a node identifier from the input file.
    #[arg(long, default_value = "uniform")]
    pub start: String,
    /// Threshold at the (1 - rho) quantile.
    #[arg(long, conflicts_with = "threshold")]
    pub threshold_rho: Option<f64>,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub runs: usize,
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the run-0 trace here, one value per line.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Metropolis target: `power:R[:XMIN]` or `exp:LAMBDA`.
    #[arg(long, default_value = "power:0.337")]
    pub target: String,
    /// Metropolis proposal: `heavy:ETA[:SCALE]` or `gauss:SIGMA`.
    #[arg(long, default_value = "gauss:1")]
    pub proposal: String,
    /// Metropolis start state (default: target median).
    #[arg(long)]
    pub x0: Option<f64>,
}

fn parse_num(s: &str, what: &str) -> Result<f64> {
    s.parse()
        .map_err(|_| usage(format!("bad number {s:?} in {what}")))
}

fn parse_target(spec: &str) -> Result<TargetSpec> {
    let parts: Vec<&str> = spec.split(':').collect();
    let t = match parts.as_slice() {
        ["power", r] => TargetSpec::PowerLaw {
            r: parse_num(r, "--target")?,
            x_min: 1.0,
        },
        ["power", r, x] => TargetSpec::PowerLaw {
            r: parse_num(r, "--target")?,
            x_min: parse_num(x, "--target")?,
        },
        ["exp", l] => TargetSpec::ExponentialType {
            lambda: parse_num(l, "--target")?,
        },
        _ => return Err(usage(format!("unknown target {spec:?}"))),
    };
    t.validate()?;
    Ok(t)
}

fn parse_proposal(spec: &str) -> Result<ProposalSpec> {
    let parts: Vec<&str> = spec.split(':').collect();
    let p = match parts.as_slice() {
        ["heavy", e] => ProposalSpec::SymmetricHeavy {
            eta: parse_num(e, "--proposal")?,
            scale: 1.0,
        },
        ["heavy", e, s] => ProposalSpec::SymmetricHeavy {
            eta: parse_num(e, "--proposal")?,
            scale: parse_num(s, "--proposal")?,
        },
        ["gauss", s] => ProposalSpec::GaussianLike {
            sigma: parse_num(s, "--proposal")?,
        },
        _ => return Err(usage(format!("unknown proposal {spec:?}"))),
    };
    p.validate()?;
    Ok(p)
}

pub fn walk(args: &WalkArgs, out: &Path) -> Result<()> {
    if args.threshold.is_none() && args.threshold_rho.is_none() {
        return Err(usage("one of --threshold-rho or --threshold is required"));
    }
    if let Some(rho) = args.threshold_rho {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(usage("--threshold-rho must lie in (0, 1)"));
        }
    }
    let seed = resolve_seed(args.seed)?;
    let mut dir = OutputDir::new(out, "walk", args.input.as_deref())?;
    dir.seed(seed);
    dir.param("walker", format!("{:?}", args.walker).to_lowercase());
    dir.param("runs", args.runs);
    dir.param("max_steps", args.max_steps);
    if let Some(r) = args.threshold_rho {
        dir.param("threshold_rho", r);
    }
    if let Some(u) = args.threshold {
        dir.param("threshold", u);
    }

    let (runs, threshold, rho_effective, trace) = if args.walker == WalkerArg::Metropolis {
        let target = parse_target(&args.target)?;
        let proposal = parse_proposal(&args.proposal)?;
        let x0 = args.x0.unwrap_or_else(|| target.quantile(0.5));
        dir.param("target", &args.target);
        dir.param("proposal", &args.proposal);
        dir.param("x0", x0);
        let (u, rho_eff) = match (args.threshold, args.threshold_rho) {
            (Some(u), _) => (u, survival(&target, u)),
            (None, Some(rho)) => (target.quantile(1.0 - rho), rho),
            _ => unreachable!(),
        };
        let runs = samplers::empirical_fht(
            || ContinuousMetropolis::new(target, proposal, x0),
            u,
            args.runs,
            args.max_steps,
            seed,
        )?;
        let trace = match &args.trace {
            Some(_) => Some(
                samplers::metropolis_continuous(&samplers::MetropolisConfig {
                    target,
                    proposal,
                    x0,
                    max_steps: args.max_steps,
                    seed,
                    threshold: Some(u),
                })?
                .values,
            ),
            None => None,
        };
        (runs, u, rho_eff, trace)
    } else {
        let path = args
            .input
            .as_ref()
            .ok_or_else(|| usage("this walker needs an input file"))?;
        let loaded = input::load(path, args.format, Ordering::FirstAppearance)?;
        let values: Vec<f64> = loaded.degrees.to_scalars();
        let sorted = SortedSample::new(&values)?;
        let (u, rho_eff) = match (args.threshold, args.threshold_rho) {
            (Some(u), _) => {
                let above = values.iter().filter(|&&v| v > u).count();
                (u, above as f64 / values.len() as f64)
            }
            (None, Some(rho)) => {
                let t = hitting::quantile_threshold(&sorted, rho)?;
                (t.x_rho, t.rho_effective)
            }
            _ => unreachable!(),
        };
        if args.walker == WalkerArg::Iid {
            let runs = samplers::empirical_fht(
                || IidValues::new(&values),
                u,
                args.runs,
                args.max_steps,
                seed,
            )?;
            let trace = args.trace.as_ref().map(|_| {
                let mut rng = netextremes::rng::task_rng(seed, 0);
                let mut src = IidValues::new(&values).expect("non-empty");
                samplers::generate(&mut src, args.max_steps, &mut rng)
            });
            (runs, u, rho_eff, trace)
        } else {
            let (graph, _) = loaded
                .graph
                .as_ref()
                .ok_or_else(|| usage("graph walkers need an edge-list input"))?;
            let start = match args.start.as_str() {
                "uniform" => Start::Uniform,
                id => {
                    let id: u64 = id
                        .parse()
                        .map_err(|_| usage(format!("--start must be `uniform` or a node id, got {id:?}")))?;
                    Start::Node(
                        graph
                            .node_index(id)
                            .ok_or_else(|| usage(format!("node {id} not in the graph")))?,
                    )
                }
            };
            dir.param("start", &args.start);
            let kind = match args.walker {
                WalkerArg::Srw => GraphWalk::Srw,
                _ => GraphWalk::MhrwUniform,
            };
            let runs = samplers::empirical_fht(
                || GraphWalker::new(graph, kind, start),
                u,
                args.runs,
                args.max_steps,
                seed,
            )?;
            let trace = match &args.trace {
                Some(_) => {
                    let mut cfg = WalkConfig::new(start, args.max_steps, seed);
                    cfg.threshold = Some(u);
                    let w = match kind {
                        GraphWalk::Srw => samplers::srw_walk(graph, &cfg)?,
                        GraphWalk::MhrwUniform => samplers::mhrw_walk(graph, &cfg)?,
                    };
                    Some(w.values)
                }
                None => None,
            };
            (runs, u, rho_eff, trace)
        }
    };

    let rows: Vec<(usize, Option<usize>, bool)> = runs
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| (i, *s, s.is_none()))
        .collect();
    dir.csv("fht_runs.csv", &["run", "hitting_step", "censored"], &rows)?;
    if let (Some(path), Some(values)) = (&args.trace, trace) {
        write_trace(path, &values)?;
    }
    let s = &runs.summary;
    let summary = json!({
        "schema_version": SCHEMA_VERSION,
        "walker": format!("{:?}", args.walker).to_lowercase(),
        "threshold": threshold,
        "rho_nominal": args.threshold_rho,
        "rho_effective": rho_effective,
        "independent_mean": if rho_effective > 0.0 { Some(1.0 / rho_effective) } else { None },
        "runs": s.runs,
        "max_steps": args.max_steps,
        "seed": seed,
        "mean": s.mean,
        "median": s.median,
        "censored_count": s.censored_count,
        "all_censored": s.all_censored,
        "acceptance_rate": s.acceptance_rate,
    });
    dir.json("walk_summary.json", &summary)?;
    dir.finish()?;
    emit(&summary)
}

fn survival(target: &TargetSpec, u: f64) -> f64 {
    match *target {
        TargetSpec::PowerLaw { r, x_min } => {
            if u < x_min {
                1.0
            } else {
                (u / x_min).powf(-r)
            }
        }
        TargetSpec::ExponentialType { lambda } => (-lambda * u.max(0.0)).exp(),
    }
}

fn write_trace(path: &Path, values: &[f64]) -> Result<()> {
    use std::io::Write;
    let mut w = std::io::BufWriter::new(
        std::fs::File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
    );
    for v in values {
        writeln!(w, "{v}")?;
    }
    w.flush()?;
    Ok(())
}

// ---------------------------------------------------------------- rate

#[derive(Debug, Args)]
pub struct RateArgs {
    /// Density exponent r in pi(x) ~ x^(-1-r).
    #[arg(long, conflicts_with = "alpha")]
    pub r: Option<f64>,
    /// Tail index alpha; converted as r = alpha - 1.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// `heavy:ETA` or `finite`.
    #[arg(long)]
    pub proposal: String,
}

pub fn rate(args: &RateArgs, out: &Path) -> Result<()> {
    let r = match (args.r, args.alpha) {
        (Some(r), _) => r,
        (None, Some(a)) => a - 1.0,
        (None, None) => return Err(usage("one of --r or --alpha is required")),
    };
    let proposal = match args.proposal.split(':').collect::<Vec<_>>().as_slice() {
        ["finite"] => ProposalTail::FiniteVariance,
        ["heavy", eta] => ProposalTail::Heavy {
            eta: parse_num(eta, "--proposal")?,
        },
        _ => return Err(usage(format!("unknown proposal {:?}", args.proposal))),
    };
    let c = samplers::polynomial_rate(r, proposal)?;
    let mut dir = OutputDir::new(out, "rate", None)?;
    if let Some(a) = args.alpha {
        dir.param("alpha", a);
    }
    dir.param("r", r);
    dir.param("proposal", &args.proposal);
    let report = json!({
        "schema_version": SCHEMA_VERSION,
        "alpha": args.alpha,
        "r": c.r,
        "proposal": proposal,
        "regime": c.regime,
        "eta_criterion": c.eta_criterion,
        "v": c.v,
        "theta_zero": c.theta_zero,
    });
    dir.json("rate.json", &report)?;
    dir.finish()?;
    emit(&report)
}
