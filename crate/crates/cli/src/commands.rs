use std::fmt;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use augucb::bounds::{BoundInputs, TheoreticalBounds};
use augucb::complexity::ComplexityReport;
use augucb::experiments::{run_batch, ExperimentSpec, RosterEntry};
use augucb::policy::PolicyKind;
use augucb::Error;

use crate::output::{file_name, render_series};
use crate::{BoundsArgs, ComplexityArgs, Format, RunArgs};

#[derive(Debug)]
pub enum CliError {
    User(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::User(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::User(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExhausted(_)
            | Error::EmptyActiveSet
            | Error::NonPositiveLogArgument(_) => CliError::Internal(e.to_string()),
            _ => CliError::User(e.to_string()),
        }
    }
}

const MIDPOINT_NOTE: &str = "uniform variance components evaluated at their interval midpoint";

#[derive(Serialize)]
struct ComplexityOutput {
    experiment: u32,
    note: &'static str,
    #[serde(flatten)]
    report: ComplexityReport,
}

#[derive(Serialize)]
struct BoundsOutput {
    experiment: u32,
    budget: u64,
    rho: f64,
    b: f64,
    note: &'static str,
    theoretical_bounds: TheoreticalBounds,
}

#[derive(Serialize)]
struct Manifest {
    experiment: u32,
    budget: u64,
    iterations: usize,
    base_seed: u64,
    seeds: String,
    parallelism: usize,
    subsample: u64,
    format: Format,
    rho: f64,
    b: f64,
    roster: Vec<RosterEntry>,
    complexity: ComplexityReport,
    complexity_note: &'static str,
    theoretical_bounds: TheoreticalBounds,
    duration_secs: f64,
    outputs: Vec<String>,
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn spec_for(experiment: u32, budget: u64) -> Result<ExperimentSpec, CliError> {
    Ok(ExperimentSpec::new(experiment)?.with_budget(budget))
}

fn evaluate_bounds(
    spec: &ExperimentSpec,
    b: Option<f64>,
    rho: f64,
) -> Result<(ComplexityReport, TheoreticalBounds), CliError> {
    let report = ComplexityReport::from_instance(&spec.midpoint_instance());
    let mut inputs = BoundInputs::new(spec.budget, report.clone());
    inputs.b = b;
    inputs.rho = rho;
    let bounds = TheoreticalBounds::evaluate(&inputs)?;
    Ok((report, bounds))
}

pub fn complexity(args: &ComplexityArgs) -> Result<(), CliError> {
    let spec = ExperimentSpec::new(args.experiment)?;
    print_json(&ComplexityOutput {
        experiment: spec.id,
        note: MIDPOINT_NOTE,
        report: ComplexityReport::from_instance(&spec.midpoint_instance()),
    })
}

pub fn bounds(args: &BoundsArgs) -> Result<(), CliError> {
    let spec = spec_for(args.experiment, args.budget)?;
    let (_, bounds) = evaluate_bounds(&spec, args.b, args.rho)?;
    print_json(&BoundsOutput {
        experiment: spec.id,
        budget: spec.budget,
        rho: args.rho,
        b: bounds.augucb_regret.b,
        note: MIDPOINT_NOTE,
        theoretical_bounds: bounds,
    })
}

/// Resolves `--algorithms` against the scenario roster; names that are not
/// roster labels are parsed as policy kinds with default parameters.
pub fn resolve_roster(
    spec: &ExperimentSpec,
    names: Option<&[String]>,
    rho: f64,
) -> Result<Vec<RosterEntry>, CliError> {
    let default = spec.roster();
    let mut roster = match names {
        None => default,
        Some(names) => {
            let mut roster = Vec::new();
            for name in names {
                let name = name.trim();
                let entry = match default.iter().find(|e| e.label == name) {
                    Some(e) => e.clone(),
                    None => RosterEntry::new(name.parse::<PolicyKind>()?),
                };
                if roster.iter().any(|e: &RosterEntry| e.label == entry.label) {
                    return Err(CliError::User(format!("algorithm '{name}' listed twice")));
                }
                roster.push(entry);
            }
            if roster.is_empty() {
                return Err(CliError::User("--algorithms is empty".into()));
            }
            roster
        }
    };
    for entry in &mut roster {
        entry.params.rho = rho;
        entry.params.validate()?;
    }
    Ok(roster)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::User(format!("cannot write {}: {e}", path.display())))
}

pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let spec = spec_for(args.experiment, args.budget)?;
    let roster = resolve_roster(&spec, args.algorithms.as_deref(), args.rho)?;
    if args.parallelism == 0 {
        return Err(CliError::User("--parallelism must be at least 1".into()));
    }
    let (report, bounds) = evaluate_bounds(&spec, args.b, args.rho)?;
    fs::create_dir_all(&args.out)
        .map_err(|e| CliError::User(format!("cannot create {}: {e}", args.out.display())))?;

    let curves = run_batch(&spec, &roster, args.iterations, args.seed, args.parallelism)?;

    let mut outputs = Vec::new();
    for curve in &curves {
        let path = args.out.join(file_name(spec.id, &curve.label, args.format));
        write_file(
            &path,
            &render_series(&curve.error_pct, args.subsample, args.format),
        )?;
        outputs.push(path.display().to_string());
    }
    let manifest_path = args.out.join("manifest.json");
    outputs.push(manifest_path.display().to_string());

    let last_seed = args.seed.wrapping_add(args.iterations as u64 - 1);
    let manifest = Manifest {
        experiment: spec.id,
        budget: spec.budget,
        iterations: args.iterations,
        base_seed: args.seed,
        seeds: format!("{}..={last_seed}", args.seed),
        parallelism: args.parallelism,
        subsample: args.subsample,
        format: args.format,
        rho: args.rho,
        b: bounds.augucb_regret.b,
        roster,
        complexity: report,
        complexity_note: MIDPOINT_NOTE,
        theoretical_bounds: bounds,
        duration_secs: started.elapsed().as_secs_f64(),
        outputs,
    };
    let text =
        serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Internal(e.to_string()))?;
    write_file(&manifest_path, &(text + "\n"))?;
    for curve in &curves {
        println!(
            "{:<14} final error {:6.2}%",
            curve.label,
            curve.final_error_pct()
        );
    }
    Ok(())
}
