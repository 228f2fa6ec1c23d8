//! Single binary exposing the verification suites with machine-readable
//! JSON reports.
//!
//! Exit codes: 0 every check passed, 1 at least one check failed, 2
//! configuration error.

mod config;
mod suites;

use clap::{Parser, Subcommand};
use config::{RunConfig, ThetaSpec};
use g2kummer_core::{CheckStatus, Report};
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "g2kummer", version, about = "verification suites for the flat orbifold, its monodromy families, and the quotient constructions")]
struct Cli {
    #[command(subcommand)]
    suite: Suite,
    /// θ samples: radians or `exact:k/n` for ζ_n^k (repeatable).
    #[arg(long = "theta", global = true)]
    thetas: Vec<String>,
    /// Flat-family parameter.
    #[arg(long = "f", global = true)]
    family_parameter: Option<f64>,
    /// Spectral mode truncation radius.
    #[arg(long, global = true)]
    modes: Option<i64>,
    /// Tube grid scale κ.
    #[arg(long, global = true)]
    grid: Option<f64>,
    /// Override tolerance for reporting purposes (echoed only).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// RNG seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON config file with the same keys; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Suite {
    /// Presentation, quotient enumeration, normal forms, singular strata.
    Group,
    /// Model forms, Hodge pair, stabiliser, and the quadratic term.
    Forms,
    /// Monodromy family: descent, invariants, constants, commutant, lifts.
    Rep,
    /// Flat connection family: charts, curvature, tangency, periodicity.
    Family,
    /// Anticomplex star identities and the block operator.
    Dolbeault,
    /// Twisted-mode kernel/cokernel oracle.
    Spectral,
    /// Moment-map quotient scaffolding.
    Quiver,
    /// Parametrized contraction fixed points.
    Contraction,
    /// Everything.
    All,
}

fn build_config(cli: &Cli) -> Result<RunConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
            serde_json::from_str::<RunConfig>(&text)
                .map_err(|e| format!("cannot parse config {}: {e}", path.display()))?
        }
        None => RunConfig::default(),
    };
    if !cli.thetas.is_empty() {
        cfg.thetas = cli
            .thetas
            .iter()
            .map(|s| ThetaSpec::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
    }
    if let Some(f) = cli.family_parameter {
        cfg.family_parameter = f;
    }
    if let Some(m) = cli.modes {
        if m < 0 {
            return Err("mode radius must be nonnegative".into());
        }
        cfg.modes = m;
    }
    if let Some(g) = cli.grid {
        if g <= 0.0 {
            return Err("grid scale must be positive".into());
        }
        cfg.kappa = g;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run_suite(suite: Suite, cfg: &RunConfig) -> Report {
    let sections: Vec<fn(&RunConfig) -> Vec<g2kummer_core::Check>> = match suite {
        Suite::Group => vec![suites::group_suite],
        Suite::Forms => vec![suites::forms_suite],
        Suite::Rep => vec![suites::rep_suite, suites::constants_checks],
        Suite::Family => vec![suites::family_suite, suites::poincare_checks],
        Suite::Dolbeault => vec![suites::dolbeault_suite],
        Suite::Spectral => vec![suites::spectral_suite],
        Suite::Quiver => vec![suites::quiver_suite],
        Suite::Contraction => vec![suites::contraction_suite],
        Suite::All => vec![
            suites::group_suite,
            suites::forms_suite,
            suites::rep_suite,
            suites::constants_checks,
            suites::family_suite,
            suites::poincare_checks,
            suites::dolbeault_suite,
            suites::spectral_suite,
            suites::quiver_suite,
            suites::contraction_suite,
        ],
    };
    // suites are pure; dispatch to the worker pool and reassemble in order
    let mut results: Vec<(usize, Vec<g2kummer_core::Check>)> = sections
        .par_iter()
        .enumerate()
        .map(|(i, f)| (i, f(cfg)))
        .collect();
    results.sort_by_key(|(i, _)| *i);
    let checks: Vec<g2kummer_core::Check> =
        results.into_iter().flat_map(|(_, c)| c).collect();
    Report::new(cfg.seed, serde_json::to_value(cfg).unwrap_or_default(), checks)
}

fn main() {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("configuration error: {e}");
            std::process::exit(2);
        }
    };
    let report = run_suite(cli.suite, &cfg);
    for check in &report.checks {
        let mark = match check.status {
            CheckStatus::Pass => "PASS",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Indeterminate => "????",
        };
        println!("[{mark}] {}: {}", check.id, check.anchor);
    }
    println!(
        "summary: {} passed, {} failed, {} indeterminate",
        report.summary.pass, report.summary.fail, report.summary.indeterminate
    );
    if let Some(path) = &cli.json {
        let mut value = serde_json::to_value(&report).expect("report serializes");
        if let serde_json::Value::Object(map) = &mut value {
            map.insert(
                "timestamp".to_string(),
                serde_json::Value::String(format!(
                    "{}",
                    std::time::SystemTime::now()
                        .duration_since(std::time::UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0)
                )),
            );
        }
        if let Err(e) = std::fs::write(path, serde_json::to_string_pretty(&value).unwrap()) {
            eprintln!("cannot write report: {e}");
            std::process::exit(2);
        }
    }
    std::process::exit(if report.all_pass() { 0 } else { 1 });
}
