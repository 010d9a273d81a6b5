//! `atomic-arb` command line.
//!
//! Exit codes: 0 success, 2 invalid scenario/arguments or no arbitrage
//! opportunity, 1 internal error (e.g. the output cannot be written).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cpmm::{build_trade_plan, spot_price, SizingRule, TradePlan};
use crate::engine::{enumerate_expected_diff, expected_profit_diff, outcome_terms, OutcomeTerm};
use crate::error::ModelError;
use crate::monte_carlo::{simulate_profit_diff, McConfig, McEstimate};
use crate::scenario::Scenario;
use crate::stable::{
    bundle_legs, expected_net_diff_stable, stable_outcome_terms, BundleLegs, StableOutcomeTerm,
};
use crate::sweep::{run_sweep, write_csv, write_csv_to, GridAxis, Sign, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "atomic-arb",
    version,
    about = "Cross-rollup CPMM arbitrage: atomic vs independent sequencing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scenario JSON file.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Emit JSON instead of a text report.
    #[arg(long)]
    pub json: bool,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Size the optimal two-pool trade.
    Plan(CommonArgs),
    /// Analytic expected profit difference and its four-outcome breakdown.
    Expect(CommonArgs),
    /// Monte Carlo estimate of the expected profit difference.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sweep (f_a, f_b) grids for one or more external prices; writes CSV.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated external prices (default: the scenario's p_ext).
        #[arg(long, value_delimiter = ',')]
        p_ext: Option<Vec<f64>>,
        /// Points per probability axis.
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
    /// Stable-asset bundle model (needs the scenario's "stable" section).
    Stable(CommonArgs),
}

#[derive(Debug)]
pub enum CliError {
    Invalid(ModelError),
    NoOpportunity(ModelError),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) | CliError::NoOpportunity(_) => EXIT_INVALID,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(e) => write!(f, "{e}"),
            CliError::NoOpportunity(e) => write!(f, "{e}"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::NoOpportunity { .. } => CliError::NoOpportunity(e),
            _ => CliError::Invalid(e),
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match run(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Plan(common) => {
            let scenario = Scenario::load(&common.scenario)?;
            let report = plan_report(&scenario)?;
            emit(common, &report, || report.to_text())
        }
        Command::Expect(common) => {
            let scenario = Scenario::load(&common.scenario)?;
            let report = expect_report(&scenario)?;
            emit(common, &report, || report.to_text())
        }
        Command::Simulate {
            common,
            samples,
            seed,
        } => {
            let scenario = Scenario::load(&common.scenario)?;
            let report = simulate_report(&scenario, *samples, *seed)?;
            emit(common, &report, || report.to_text())
        }
        Command::Sweep {
            common,
            p_ext,
            grid,
        } => {
            let scenario = Scenario::load(&common.scenario)?;
            sweep_command(&scenario, common, p_ext.clone(), *grid)
        }
        Command::Stable(common) => {
            let scenario = Scenario::load(&common.scenario)?;
            let report = stable_report(&scenario)?;
            emit(common, &report, || report.to_text())
        }
    }
}

fn emit<R: Serialize>(
    common: &CommonArgs,
    report: &R,
    text: impl FnOnce() -> String,
) -> Result<(), CliError> {
    let body = if common.json {
        let mut s =
            serde_json::to_string_pretty(report).map_err(|e| CliError::Internal(e.to_string()))?;
        s.push('\n');
        s
    } else {
        text()
    };
    write_output(common.out.as_deref(), body.as_bytes())
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Internal(format!("cannot write stdout: {e}"))),
    }
}

#[derive(Debug, Serialize)]
pub struct PlanReport {
    pub sizing_rule: SizingRule,
    pub fee: f64,
    pub p_a: f64,
    pub p_b: f64,
    #[serde(flatten)]
    pub plan: TradePlan,
    pub no_failure_profit: f64,
}

impl PlanReport {
    fn to_text(&self) -> String {
        let p = &self.plan;
        let mut s = String::new();
        let _ = writeln!(s, "sizing rule        {:?}", self.sizing_rule);
        let _ = writeln!(s, "fee                {}", self.fee);
        let _ = writeln!(s, "delta_y_b (Y in B) {}", p.delta_y_b);
        let _ = writeln!(s, "delta_x   (X B->A) {}", p.delta_x);
        let _ = writeln!(s, "delta_y_a (Y out A) {}", p.delta_y_a);
        let _ = writeln!(
            s,
            "prices    P_B {}  P*_B {}  P*_A {}  P_A {}",
            self.p_b, p.price_star_b, p.price_star_a, self.p_a
        );
        let _ = writeln!(
            s,
            "end prices P_A^end {}  P_B^end {}",
            p.end_price_a, p.end_price_b
        );
        let _ = writeln!(s, "no-failure profit (Y) {}", self.no_failure_profit);
        s
    }
}

pub fn plan_report(scenario: &Scenario) -> Result<PlanReport, CliError> {
    let opp = scenario.opportunity()?;
    let plan = build_trade_plan(&opp, scenario.sizing_rule)?;
    Ok(PlanReport {
        sizing_rule: scenario.sizing_rule,
        fee: opp.fee(),
        p_a: spot_price(opp.pool_a()),
        p_b: spot_price(opp.pool_b()),
        no_failure_profit: plan.no_failure_profit(),
        plan,
    })
}

#[derive(Debug, Serialize)]
pub struct OutcomeRow {
    pub a_failed: bool,
    pub b_failed: bool,
    pub probability: f64,
    pub profit_diff: f64,
    pub contribution: f64,
}

impl From<OutcomeTerm> for OutcomeRow {
    fn from(t: OutcomeTerm) -> Self {
        Self {
            a_failed: t.outcome.a_failed,
            b_failed: t.outcome.b_failed,
            probability: t.probability,
            profit_diff: t.profit_diff,
            contribution: t.contribution(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ExpectReport {
    pub f_a: f64,
    pub f_b: f64,
    pub p_ext: f64,
    pub expected_diff: f64,
    pub enumerated_diff: f64,
    pub outcomes: Vec<OutcomeRow>,
}

impl ExpectReport {
    fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "f_a {}  f_b {}  P_ext {}",
            self.f_a, self.f_b, self.p_ext
        );
        let _ = writeln!(
            s,
            "{:>8} {:>8} {:>14} {:>22} {:>22}",
            "S_A", "S_B", "probability", "profit diff", "contribution"
        );
        for o in &self.outcomes {
            let tag = |failed: bool| if failed { "fail" } else { "ok" };
            let _ = writeln!(
                s,
                "{:>8} {:>8} {:>14.6} {:>22} {:>22}",
                tag(o.a_failed),
                tag(o.b_failed),
                o.probability,
                o.profit_diff,
                o.contribution
            );
        }
        let _ = writeln!(
            s,
            "E[atomic - non-atomic] (closed form) {}",
            self.expected_diff
        );
        let _ = writeln!(
            s,
            "E[atomic - non-atomic] (enumerated)  {}",
            self.enumerated_diff
        );
        s
    }
}

pub fn expect_report(scenario: &Scenario) -> Result<ExpectReport, CliError> {
    let plan = build_trade_plan(&scenario.opportunity()?, scenario.sizing_rule)?;
    let fm = scenario.failure_model()?;
    let p = scenario.external_price()?;
    Ok(ExpectReport {
        f_a: fm.f_a(),
        f_b: fm.f_b(),
        p_ext: p.value(),
        expected_diff: expected_profit_diff(&plan, fm, p),
        enumerated_diff: enumerate_expected_diff(&plan, fm, p),
        outcomes: outcome_terms(&plan, fm, p)
            .into_iter()
            .map(OutcomeRow::from)
            .collect(),
    })
}

#[derive(Debug, Serialize)]
pub struct SimulateReport {
    #[serde(flatten)]
    pub estimate: McEstimate,
    pub analytic: f64,
}

impl SimulateReport {
    fn to_text(&self) -> String {
        let e = &self.estimate;
        let mut s = String::new();
        let _ = writeln!(s, "generator  {}", e.generator);
        let _ = writeln!(s, "seed       {}", e.seed);
        let _ = writeln!(s, "samples    {}", e.samples);
        let _ = writeln!(s, "mean       {}", e.mean);
        let _ = writeln!(s, "std_error  {}", e.std_error);
        let _ = writeln!(s, "analytic   {}", self.analytic);
        s
    }
}

pub const DEFAULT_SAMPLES: u64 = 1_000_000;

pub fn simulate_report(
    scenario: &Scenario,
    samples: Option<u64>,
    seed: Option<u64>,
) -> Result<SimulateReport, CliError> {
    let plan = build_trade_plan(&scenario.opportunity()?, scenario.sizing_rule)?;
    let fm = scenario.failure_model()?;
    let p = scenario.external_price()?;
    let mc = scenario.monte_carlo;
    let cfg = McConfig::new(
        samples.or(mc.map(|m| m.samples)).unwrap_or(DEFAULT_SAMPLES),
        seed.or(mc.map(|m| m.seed)).unwrap_or(0),
    )?;
    Ok(SimulateReport {
        estimate: simulate_profit_diff(&plan, fm, p, cfg),
        analytic: expected_profit_diff(&plan, fm, p),
    })
}

fn sweep_command(
    scenario: &Scenario,
    common: &CommonArgs,
    p_ext: Option<Vec<f64>>,
    grid: usize,
) -> Result<(), CliError> {
    let axis = GridAxis::unit(grid)?;
    let cfg = SweepConfig::new(
        scenario.opportunity()?,
        scenario.sizing_rule,
        p_ext.unwrap_or_else(|| vec![scenario.p_ext]),
    )
    .with_grid(axis, axis);
    let cells = run_sweep(&cfg)?;
    match &common.out {
        Some(path) => {
            write_csv(&cells, path).map_err(|e| CliError::Internal(e.to_string()))?;
            let count = |s: Sign| cells.iter().filter(|c| c.sign == s).count();
            eprintln!(
                "wrote {} cells to {} (pos {}, neg {}, zero {})",
                cells.len(),
                path.display(),
                count(Sign::Positive),
                count(Sign::Negative),
                count(Sign::Zero)
            );
            Ok(())
        }
        None => write_csv_to(&cells, std::io::stdout().lock())
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

#[derive(Debug, Serialize)]
pub struct StableReport {
    pub legs: BundleLegs,
    pub outcomes: Vec<StableOutcomeTerm>,
    pub expected_net_diff: f64,
}

impl StableReport {
    fn to_text(&self) -> String {
        let l = &self.legs;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "bundle B: pay {} stable, receive {}",
            l.s_b_out, l.s_b_in
        );
        let _ = writeln!(
            s,
            "bundle A: pay {} stable, receive {}",
            l.s_a_out, l.s_a_in
        );
        let _ = writeln!(
            s,
            "{:>8} {:>8} {:>14} {:>22} {:>22} {:>22}",
            "S_A", "S_B", "probability", "profit diff", "cost diff", "net diff"
        );
        for t in &self.outcomes {
            let tag = |failed: bool| if failed { "fail" } else { "ok" };
            let _ = writeln!(
                s,
                "{:>8} {:>8} {:>14.6} {:>22} {:>22} {:>22}",
                tag(t.outcome.a_failed),
                tag(t.outcome.b_failed),
                t.probability,
                t.profit_diff,
                t.cost_diff,
                t.net_diff
            );
        }
        let _ = writeln!(
            s,
            "E[net atomic - net non-atomic] (stable) {}",
            self.expected_net_diff
        );
        s
    }
}

pub fn stable_report(scenario: &Scenario) -> Result<StableReport, CliError> {
    let opp = scenario.opportunity()?;
    let plan = build_trade_plan(&opp, scenario.sizing_rule)?;
    let legs = bundle_legs(&plan, &opp, &scenario.stable_params()?);
    let gas = scenario.gas_costs()?;
    let fm = scenario.failure_model()?;
    Ok(StableReport {
        legs,
        outcomes: stable_outcome_terms(&legs, &gas, fm).to_vec(),
        expected_net_diff: expected_net_diff_stable(&legs, &gas, fm),
    })
}
