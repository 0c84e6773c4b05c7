//! Command implementations behind the `satcache` binary: scenario assembly
//! from JSON configs, CSV emission, and a thread-chunked simulation driver.

pub mod config;

use std::fmt::Write as _;
use std::thread;

use satcache_core::gf::Field;
use satcache_core::placement::optimize_bound;
use satcache_core::popularity::PopularityDist;
use satcache_core::rate::{self, Placement, RateReport};
use satcache_core::sim::{simulate_range, Scenario, SimResult};
use satcache_core::topology::{ConnectivityDist, GridGeometry};
use satcache_core::{lrfc, Error as CoreError};

use config::{degree_of, supported_field_order, Config, SweepVariable};

/// CLI-level failures, split by exit code: config errors exit 1,
/// infeasible scenarios exit 2.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Infeasible(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Infeasible(msg) => write!(f, "infeasible scenario: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Infeasible(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InfeasibleBudget { .. } => CliError::Infeasible(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

/// Fixed column set shared by the rate and sweep outputs.
pub const SWEEP_HEADER: &str = "sweep_var,value,scheme,e_t,t_hat,e_delta,sim_mean,sim_stderr";

/// Connectivity distribution from a config, conditioned on h >= 1.
/// Returns the probability mass dropped at h = 0 (zero for explicit gamma,
/// possibly positive for grid geometries with small radii).
pub fn connectivity_from_config(cfg: &Config) -> Result<(ConnectivityDist, f64), CliError> {
    match (&cfg.gamma, &cfg.geometry) {
        (Some(gamma), None) => {
            let pairs: Vec<(u32, f64)> = gamma
                .iter()
                .enumerate()
                .map(|(i, &g)| (i as u32 + 1, g))
                .collect();
            Ok((ConnectivityDist::explicit(&pairs)?, 0.0))
        }
        (None, Some(geo)) => {
            let geom = GridGeometry::new(geo.r, geo.d, geo.resolution)?;
            let dist = ConnectivityDist::from_grid(&geom);
            let (conditioned, dropped) = dist.condition_on_connected()?;
            Ok((conditioned, dropped))
        }
        _ => Err(CliError::Config("one of gamma or geometry is required".into())),
    }
}

fn fmt_value(v: f64) -> String {
    // integers print without a trailing ".0"
    format!("{v}")
}

/// Table of average overhead E[Delta] and its bound delta_u per field order.
pub fn cmd_overhead_table(q_list: &[u32], k: u32, tail_tol: f64) -> Result<String, CliError> {
    if k == 0 {
        return Err(CliError::Config("k must be >= 1".into()));
    }
    if !(tail_tol > 0.0) {
        return Err(CliError::Config("tail-tol must be > 0".into()));
    }
    let mut out = String::from("q,e_delta,delta_u\n");
    for &q in q_list {
        if !supported_field_order(q) {
            return Err(CliError::Config(format!("unsupported field order q = {q}")));
        }
        let e_delta = lrfc::avg_overhead(k as usize, q, tail_tol);
        let delta_u = lrfc::avg_overhead_bound(q);
        writeln!(out, "{q},{e_delta:.4},{delta_u:.4}").unwrap();
    }
    Ok(out)
}

/// Emit the (conditioned) connectivity distribution of a config.
pub fn cmd_connectivity(cfg: &Config) -> Result<String, CliError> {
    let (conn, dropped) = connectivity_from_config(cfg)?;
    if dropped > 0.0 {
        eprintln!("note: conditioned on h >= 1, dropped gamma_0 = {dropped:.6}");
    }
    let mut out = String::from("h,gamma\n");
    for &(h, g) in conn.gamma() {
        writeln!(out, "{h},{g:.10}").unwrap();
    }
    Ok(out)
}

struct Inputs {
    pop: PopularityDist,
    conn: ConnectivityDist,
    placement: Placement,
}

fn build_inputs(cfg: &Config) -> Result<Inputs, CliError> {
    let pop = PopularityDist::zipf(cfg.n, cfg.alpha)?;
    let (conn, dropped) = connectivity_from_config(cfg)?;
    if dropped > 0.0 {
        eprintln!("note: conditioned on h >= 1, dropped gamma_0 = {dropped:.6}");
    }
    let placement = optimize_bound(&pop, &conn, cfg.k, cfg.m, cfg.q)?;
    Ok(Inputs { pop, conn, placement })
}

/// Optimized placement for a config: one row per file.
pub fn cmd_optimize(cfg: &Config) -> Result<String, CliError> {
    let inputs = build_inputs(cfg)?;
    let mut out = String::from("file,x\n");
    for (j, &xj) in inputs.placement.x().iter().enumerate() {
        writeln!(out, "{},{}", j + 1, xj).unwrap();
    }
    Ok(out)
}

fn report_rows(out: &mut String, sweep_var: &str, value: &str, r: &RateReport) {
    writeln!(
        out,
        "{sweep_var},{value},lrfc_exact,{:.6},{:.6},{:.6},,",
        r.e_t_exact, r.t_hat_exact, r.e_delta
    )
    .unwrap();
    writeln!(
        out,
        "{sweep_var},{value},lrfc_bound,{:.6},{:.6},{:.6},,",
        r.e_t_bound, r.t_hat_bound, r.e_delta
    )
    .unwrap();
    writeln!(out, "{sweep_var},{value},mds,{:.6},{:.6},,,", r.e_t_mds, r.t_hat_mds).unwrap();
}

/// Analytical rate report for a single scenario.
pub fn cmd_rate(cfg: &Config) -> Result<String, CliError> {
    let inputs = build_inputs(cfg)?;
    let report = rate::report(&inputs.placement, &inputs.pop, &inputs.conn, cfg.q)?;
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    report_rows(&mut out, "", "", &report);
    Ok(out)
}

/// Chunk trials across available threads; counter-based per-trial streams
/// make the merged result identical to a sequential run.
pub fn parallel_simulate(scenario: &Scenario, trials: u64, seed: u64) -> SimResult {
    let workers = thread::available_parallelism().map(|n| n.get() as u64).unwrap_or(1);
    let workers = workers.min(trials.max(1));
    if workers <= 1 {
        return simulate_range(scenario, 0, trials, seed);
    }
    let chunk = trials / workers;
    let extra = trials % workers;
    let mut merged = SimResult::default();
    thread::scope(|scope| {
        let mut handles = Vec::new();
        let mut start = 0;
        for w in 0..workers {
            let count = chunk + u64::from(w < extra);
            let s = &*scenario;
            handles.push(scope.spawn(move || simulate_range(s, start, count, seed)));
            start += count;
        }
        for h in handles {
            merged.merge(&h.join().expect("simulation worker panicked"));
        }
    });
    merged
}

/// Monte-Carlo delivery simulation with the analytical reference values and
/// a 3-standard-error agreement check alongside.
pub fn cmd_simulate(cfg: &Config, trials: Option<u64>, seed: Option<u64>) -> Result<String, CliError> {
    let trials = trials
        .or(cfg.sim.map(|s| s.trials))
        .ok_or_else(|| CliError::Config("trials required (config sim.trials or --trials)".into()))?;
    if trials == 0 {
        return Err(CliError::Config("trials must be >= 1".into()));
    }
    let seed = seed.or(cfg.sim.map(|s| s.seed)).unwrap_or(0);

    let inputs = build_inputs(cfg)?;
    let report = rate::report(&inputs.placement, &inputs.pop, &inputs.conn, cfg.q)?;
    let field = Field::new(degree_of(cfg.q))?;
    let scenario = Scenario::new(field, inputs.pop, inputs.conn, inputs.placement)?;
    let result = parallel_simulate(&scenario, trials, seed);

    let mean = result.mean_t();
    let se = result.std_err();
    let check = if (mean - report.e_t_exact).abs() <= 3.0 * se { "PASS" } else { "FAIL" };
    let histogram: Vec<String> = result
        .histogram()
        .iter()
        .map(|(t, c)| format!("{t}:{c}"))
        .collect();

    let mut out =
        String::from("trials,seed,sim_mean,sim_stderr,e_t_exact,t_hat_exact,e_delta,check,histogram\n");
    writeln!(
        out,
        "{trials},{seed},{mean:.6},{se:.6},{:.6},{:.6},{:.6},{check},{}",
        report.e_t_exact,
        report.t_hat_exact,
        report.e_delta,
        histogram.join("|")
    )
    .unwrap();
    Ok(out)
}

fn scenario_config(cfg: &Config, var: SweepVariable, value: f64) -> Result<Config, CliError> {
    let mut point = cfg.clone();
    match var {
        SweepVariable::Memory => {
            if value < 0.0 || value.fract() != 0.0 {
                return Err(CliError::Config(format!("sweep value M = {value} is not an integer")));
            }
            point.m = value as u32;
        }
        SweepVariable::Alpha => point.alpha = value,
        SweepVariable::LibrarySize => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(CliError::Config(format!("sweep value n = {value} is not an integer")));
            }
            point.n = value as usize;
        }
        SweepVariable::Radius => {
            let geo = point.geometry.as_mut().expect("validated: radius sweep has geometry");
            geo.r = value;
        }
    }
    point.validate()?;
    Ok(point)
}

/// Sweep one variable (M, alpha, n or r) over the configured values,
/// re-optimizing the placement at every point. Rows are sorted by
/// (value, scheme); the simulation columns are filled for the lrfc_exact
/// rows when the config has a sim section.
pub fn cmd_sweep(cfg: &Config, trials: Option<u64>, seed: Option<u64>) -> Result<String, CliError> {
    let sweep = cfg
        .sweep
        .clone()
        .ok_or_else(|| CliError::Config("sweep section required".into()))?;
    let trials = trials.or(cfg.sim.map(|s| s.trials));
    let seed = seed.or(cfg.sim.map(|s| s.seed)).unwrap_or(0);

    let mut values = sweep.values.clone();
    values.sort_by(f64::total_cmp);

    let mut rows: Vec<(f64, String)> = Vec::new();
    for &value in &values {
        let point = scenario_config(cfg, sweep.variable, value)?;
        let inputs = build_inputs(&point)?;
        let report = rate::report(&inputs.placement, &inputs.pop, &inputs.conn, point.q)?;

        let (sim_mean, sim_stderr) = match trials {
            Some(trials) if trials > 0 => {
                let field = Field::new(degree_of(point.q))?;
                let scenario =
                    Scenario::new(field, inputs.pop.clone(), inputs.conn.clone(), inputs.placement.clone())?;
                let result = parallel_simulate(&scenario, trials, seed);
                (format!("{:.6}", result.mean_t()), format!("{:.6}", result.std_err()))
            }
            _ => (String::new(), String::new()),
        };

        let var = sweep.variable.name();
        let val = fmt_value(value);
        rows.push((
            value,
            format!(
                "{var},{val},lrfc_bound,{:.6},{:.6},{:.6},,",
                report.e_t_bound, report.t_hat_bound, report.e_delta
            ),
        ));
        rows.push((
            value,
            format!(
                "{var},{val},lrfc_exact,{:.6},{:.6},{:.6},{sim_mean},{sim_stderr}",
                report.e_t_exact, report.t_hat_exact, report.e_delta
            ),
        ));
        rows.push((
            value,
            format!("{var},{val},mds,{:.6},{:.6},,,", report.e_t_mds, report.t_hat_mds),
        ));
    }

    // rows per value are already emitted in scheme order (lrfc_bound,
    // lrfc_exact, mds); values are ascending
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for (_, row) in rows {
        out.push_str(&row);
        out.push('\n');
    }
    Ok(out)
}
