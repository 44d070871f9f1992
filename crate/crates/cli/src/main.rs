//! Command-line front end: arc widths, run-count planning, protocol
//! synthesis, simulation, property verification, the generalized-Pauli
//! demo, and elimination tournaments, all over JSON files.
//!
//! Exit codes: 0 success, 2 unreadable/unparsable input, 3 matrix failed
//! unitarity certification, 4 operators equal up to global phase,
//! 5 orthogonality certification failure, 6 dimension or index mismatch,
//! 7 property violation (counterexample written to a file).

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use seqdisc_core::error::Error as CoreError;
use seqdisc_core::exec::stream_rng;
use seqdisc_core::haar::haar_unitary_where;
use seqdisc_core::json::{
    CriterionReportJson, MatrixJson, OptimalityReportJson, PlanJson, ProtocolJson,
    ShotReportJson, SubadditivityReportJson,
};
use seqdisc_core::simulator::sample_measurement;
use seqdisc_core::spectral::spectral_decompose;
use seqdisc_core::verify::{
    criterion_adversarial_pair, criterion_sweep, criterion_trial_pair, optimality_search,
    qubit_one_run_criterion, subadditivity_sweep, subadditivity_trial_pair, SearchConfig,
};
use seqdisc_core::{
    eliminate_tournament, min_runs, pauli_one_run_impossible, pauli_two_run_protocol,
    plan_mixed, resource_report, run_protocol, synthesize_protocol, theta, validate_plan,
    UnitaryOperator,
};

#[derive(Parser)]
#[command(
    name = "seqdisc",
    version,
    about = "Sequential discrimination of unitary operations"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Unitarity certification tolerance for loaded matrices.
    #[arg(long = "tol-unitary", global = true, default_value_t = 1e-9)]
    tol_unitary: f64,

    /// Accepted branch-overlap modulus for synthesized protocols.
    #[arg(long = "tol-orth", global = true, default_value_t = 1e-7)]
    tol_orth: f64,

    /// Where to write the produced JSON file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Only print the essential result lines.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the spectral arc width and eigenphases of a unitary.
    Theta { matrix: PathBuf },
    /// Print the minimal run count for a pair, optionally with a mixed
    /// m-circuit partition and its resource report.
    Plan {
        u: PathBuf,
        v: PathBuf,
        #[arg(long)]
        copies: Option<usize>,
    },
    /// Synthesize the discrimination protocol for a pair (requires --out).
    Synthesize { u: PathBuf, v: PathBuf },
    /// Run a protocol file against a truth circuit and sample outcomes.
    Simulate {
        protocol: PathBuf,
        truth: PathBuf,
        #[arg(long, default_value_t = 100)]
        shots: u64,
    },
    /// Numerical property sweeps; nonzero exit on any violation.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Two-run identification of the d² generalized Pauli operators.
    Pauli {
        #[arg(long)]
        d: usize,
        /// Indices (m, n) of the hidden operator to simulate.
        #[arg(long, num_args = 2, value_names = ["M", "N"])]
        truth: Option<Vec<usize>>,
        #[arg(long, default_value_t = 1000)]
        shots: u64,
    },
    /// Elimination tournament over candidate matrix files in a directory
    /// (lexicographic filename order fixes candidate indices).
    Eliminate {
        dir: PathBuf,
        #[arg(long)]
        truth_index: usize,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Arc subadditivity sweep over hypothesis-satisfying random pairs.
    Subadd {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Chain-bound search with k runs below the minimal count.
    Optimality {
        /// Operator file; the pair defaults to (U, I) when --v is absent.
        #[arg(long)]
        u: Option<PathBuf>,
        #[arg(long)]
        v: Option<PathBuf>,
        /// Runs granted to the adversary; defaults to min_runs − 1.
        #[arg(long)]
        k: Option<usize>,
        /// Random instances to draw when no --u is given.
        #[arg(long, default_value_t = 5)]
        instances: usize,
        #[arg(long, default_value_t = 50)]
        restarts: usize,
        #[arg(long, default_value_t = 40)]
        iterations: usize,
        /// States sampled per restart when probing branch overlaps.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Qubit one-run criterion equivalence sweep.
    Criterion {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 100)]
        adversarial: usize,
    },
}

enum CliError {
    /// Unreadable or unparsable input.
    Parse(String),
    Core(CoreError),
    /// A verified property failed; the message names the counterexample.
    Violation(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn exit_code(err: &CliError) -> u8 {
    match err {
        CliError::Parse(_) => 2,
        CliError::Core(CoreError::NotUnitary { .. }) => 3,
        CliError::Core(CoreError::NotDifferent { .. }) => 4,
        CliError::Core(CoreError::OrthogonalityFailure { .. }) => 5,
        CliError::Core(
            CoreError::DimensionMismatch { .. } | CoreError::IndexOutOfRange { .. },
        ) => 6,
        CliError::Core(_) => 1,
        CliError::Violation(_) => 7,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match &err {
                CliError::Parse(m) => eprintln!("parse error: {m}"),
                CliError::Core(e) => eprintln!("error: {e}"),
                CliError::Violation(m) => eprintln!("property violation: {m}"),
            }
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Theta { matrix } => cmd_theta(cli, matrix),
        Command::Plan { u, v, copies } => cmd_plan(cli, u, v, *copies),
        Command::Synthesize { u, v } => cmd_synthesize(cli, u, v),
        Command::Simulate {
            protocol,
            truth,
            shots,
        } => cmd_simulate(cli, protocol, truth, *shots),
        Command::Verify { check } => match check {
            VerifyCommand::Subadd { trials, d } => cmd_verify_subadd(cli, *trials, *d),
            VerifyCommand::Optimality {
                u,
                v,
                k,
                instances,
                restarts,
                iterations,
                samples,
                d,
            } => {
                let cfg = SearchConfig {
                    restarts: *restarts,
                    iterations: *iterations,
                    seed: cli.seed,
                    overlap_samples: *samples,
                    ..SearchConfig::default()
                };
                cmd_verify_optimality(cli, u.as_deref(), v.as_deref(), *k, *instances, *d, &cfg)
            }
            VerifyCommand::Criterion {
                trials,
                adversarial,
            } => cmd_verify_criterion(cli, *trials, *adversarial),
        },
        Command::Pauli { d, truth, shots } => cmd_pauli(cli, *d, truth.as_deref(), *shots),
        Command::Eliminate { dir, truth_index } => cmd_eliminate(cli, dir, *truth_index),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_unitary(path: &Path, tol: f64) -> CliResult<UnitaryOperator> {
    let json: MatrixJson = read_json(path)?;
    Ok(json.to_unitary(tol)?)
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Parse(format!("serialize: {e}")))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Writes a counterexample for a failed property and returns its path.
fn dump_counterexample(cli: &Cli, value: &serde_json::Value) -> CliResult<PathBuf> {
    let path = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from("counterexample.json"));
    write_json(&path, value)?;
    Ok(path)
}

fn cmd_theta(cli: &Cli, matrix: &Path) -> CliResult<()> {
    let u = load_unitary(matrix, cli.tol_unitary)?;
    let dec = spectral_decompose(&u)?;
    let width = theta(&u)?;
    println!("theta = {width:.9}");
    if !cli.quiet {
        let phases: Vec<String> = dec.phases().iter().map(|p| format!("{p:.9}")).collect();
        println!("eigenphases = [{}]", phases.join(", "));
    }
    Ok(())
}

fn cmd_plan(cli: &Cli, u_path: &Path, v_path: &Path, copies: Option<usize>) -> CliResult<()> {
    let u = load_unitary(u_path, cli.tol_unitary)?;
    let v = load_unitary(v_path, cli.tol_unitary)?;
    let n = min_runs(&u, &v)?;
    println!("N = {n}");
    if let Some(m) = copies {
        let plan = plan_mixed(n, m)?;
        let report = resource_report(n, m)?;
        let w = u.adjoint().compose(&v)?;
        let valid = validate_plan(&w, &plan)?;
        let parts: Vec<String> = plan.parts().iter().map(|k| k.to_string()).collect();
        println!("parts = ({})", parts.join(", "));
        println!("length = {}", plan.length());
        println!("steps = {}", report.steps);
        println!("circuits = {}", report.circuits);
        println!("entangled_width = {}", report.entangled_width);
        println!("valid = {valid}");
        if let Some(out) = &cli.out {
            write_json(out, &PlanJson::new(&plan, valid))?;
        }
    }
    Ok(())
}

fn cmd_synthesize(cli: &Cli, u_path: &Path, v_path: &Path) -> CliResult<()> {
    let out = cli
        .out
        .as_ref()
        .ok_or_else(|| CliError::Parse("synthesize requires --out".into()))?;
    let u = load_unitary(u_path, cli.tol_unitary)?;
    let v = load_unitary(v_path, cli.tol_unitary)?;
    let protocol = synthesize_protocol(&u, &v)?;
    if protocol.orth_defect() > cli.tol_orth {
        return Err(CoreError::OrthogonalityFailure {
            overlap: protocol.orth_defect(),
            tol: cli.tol_orth,
        }
        .into());
    }
    write_json(out, &ProtocolJson::from(&protocol))?;
    println!("N = {}", protocol.num_runs());
    println!("orth_defect = {:.3e}", protocol.orth_defect());
    if !cli.quiet {
        println!("bumped = {}", protocol.bumped());
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn cmd_simulate(cli: &Cli, protocol_path: &Path, truth_path: &Path, shots: u64) -> CliResult<()> {
    let protocol_json: ProtocolJson = read_json(protocol_path)?;
    let protocol = protocol_json.to_protocol(cli.tol_unitary.max(1e-8))?;
    let truth = load_unitary(truth_path, cli.tol_unitary)?;
    let records = run_protocol(&protocol, &truth, shots, cli.seed)?;
    if !cli.quiet {
        println!("{:<8} {:>14} {:>10}", "label", "probability", "counts");
    }
    for r in &records {
        println!("{:<8} {:>14.9} {:>10}", r.label, r.probability, r.counts);
    }
    if let Some(out) = &cli.out {
        write_json(out, &ShotReportJson::new(&records, cli.seed, shots))?;
    }
    Ok(())
}

fn cmd_verify_subadd(cli: &Cli, trials: usize, d: usize) -> CliResult<()> {
    let outcome = subadditivity_sweep(d, trials, cli.seed)?;
    println!(
        "subadditivity: d={d} trials={trials} violations={} max_excess={:.3e} -> {}",
        outcome.violations,
        outcome.max_excess,
        if outcome.pass() { "PASS" } else { "FAIL" }
    );
    if let Some(out) = &cli.out {
        write_json(out, &SubadditivityReportJson::new(d, &outcome))?;
    }
    if let Some(trial) = outcome.first_violation {
        let (u, v) = subadditivity_trial_pair(d, cli.seed, trial)?;
        let path = dump_counterexample(
            cli,
            &json!({
                "check": "subadditivity",
                "d": d,
                "seed": cli.seed,
                "trial": trial,
                "u": MatrixJson::from(&u),
                "v": MatrixJson::from(&v),
            }),
        )?;
        return Err(CliError::Violation(format!(
            "subadditivity violated at trial {trial}; counterexample in {}",
            path.display()
        )));
    }
    Ok(())
}

fn cmd_verify_optimality(
    cli: &Cli,
    u_path: Option<&Path>,
    v_path: Option<&Path>,
    k: Option<usize>,
    instances: usize,
    d: usize,
    cfg: &SearchConfig,
) -> CliResult<()> {
    let pairs: Vec<(UnitaryOperator, UnitaryOperator)> = match u_path {
        Some(u_path) => {
            let u = load_unitary(u_path, cli.tol_unitary)?;
            let v = match v_path {
                Some(p) => load_unitary(p, cli.tol_unitary)?,
                None => UnitaryOperator::identity(u.dim()),
            };
            vec![(u, v)]
        }
        None => (0..instances)
            .map(|i| {
                // arc width in [π/6, π/2) keeps the run count in 3..=6
                let u =
                    haar_unitary_where(d, &mut stream_rng(cli.seed, i as u64), 100_000, |u| {
                        theta(u)
                            .map(|t| (PI / 6.0..PI / 2.0).contains(&t))
                            .unwrap_or(false)
                    })?;
                Ok((u, UnitaryOperator::identity(d)))
            })
            .collect::<Result<_, CoreError>>()?,
    };
    let mut reports = Vec::with_capacity(pairs.len());
    let mut all_pass = true;
    for (i, (u, v)) in pairs.iter().enumerate() {
        let n = min_runs(u, v)?;
        let k_used = k.unwrap_or(n - 1);
        let report = optimality_search(u, v, k_used, cfg)?;
        println!(
            "instance {i}: N={n} k={k_used} chain_bound={:.6} best_chain_theta={:.6} \
             best_gap={:.6} floor={:.6} -> {}",
            report.chain_bound,
            report.best_chain_theta,
            report.best_orthogonality_gap,
            report.overlap_floor(),
            if report.pass { "PASS" } else { "FAIL" }
        );
        all_pass &= report.pass;
        reports.push(OptimalityReportJson::from(&report));
    }
    if let Some(out) = &cli.out {
        write_json(out, &reports)?;
    }
    if !all_pass {
        let path =
            dump_counterexample(cli, &json!({"check": "optimality", "reports": reports}))?;
        return Err(CliError::Violation(format!(
            "chain bound breached; reports in {}",
            path.display()
        )));
    }
    Ok(())
}

fn cmd_verify_criterion(cli: &Cli, trials: usize, adversarial: usize) -> CliResult<()> {
    let outcome = criterion_sweep(trials, adversarial, cli.seed)?;
    println!(
        "criterion: trials={trials} adversarial={adversarial} disagreements={} -> {}",
        outcome.disagreements,
        if outcome.pass() { "PASS" } else { "FAIL" }
    );
    if let Some(out) = &cli.out {
        write_json(out, &CriterionReportJson::from(&outcome))?;
    }
    if let Some((was_adversarial, index)) = outcome.first_disagreement {
        let (u, v) = if was_adversarial {
            criterion_adversarial_pair(cli.seed, index, adversarial)?
        } else {
            criterion_trial_pair(cli.seed, index)
        };
        let c = qubit_one_run_criterion(&u, &v)?;
        let path = dump_counterexample(
            cli,
            &json!({
                "check": "criterion",
                "adversarial": was_adversarial,
                "index": index,
                "u": MatrixJson::from(&u),
                "v": MatrixJson::from(&v),
                "trace_zero": c.trace_zero,
                "theta_pi": c.theta_pi,
                "entangled_check": c.entangled_check,
            }),
        )?;
        return Err(CliError::Violation(format!(
            "criterion disagreement at index {index}; counterexample in {}",
            path.display()
        )));
    }
    Ok(())
}

fn cmd_pauli(cli: &Cli, d: usize, truth: Option<&[usize]>, shots: u64) -> CliResult<()> {
    let protocol = pauli_two_run_protocol(d)?;
    match truth {
        Some(indices) => {
            let (m, n) = (indices[0], indices[1]);
            let output = protocol.output_for(m, n)?;
            let (rm, rn) = protocol.readout(m, n)?;
            println!("readout = ({rm}, {rn})");
            let records = sample_measurement(protocol.measurement(), &output, shots, cli.seed)?;
            if !cli.quiet {
                for r in records.iter().filter(|r| r.counts > 0) {
                    println!("outcome {:<6} counts {:>8}", r.label, r.counts);
                }
            }
            if let Some(out) = &cli.out {
                write_json(out, &ShotReportJson::new(&records, cli.seed, shots))?;
            }
            if (rm, rn) != (m, n) {
                let path = dump_counterexample(
                    cli,
                    &json!({
                        "check": "pauli-readout",
                        "d": d,
                        "truth": [m, n],
                        "readout": [rm, rn],
                    }),
                )?;
                return Err(CliError::Violation(format!(
                    "readout mismatch; details in {}",
                    path.display()
                )));
            }
        }
        None => {
            let mut correct = 0;
            for m in 0..d {
                for n in 0..d {
                    if protocol.readout(m, n)? == (m, n) {
                        correct += 1;
                    }
                }
            }
            let impossible = pauli_one_run_impossible(d, 100, cli.seed)?;
            println!("identified = {correct}/{} (2 runs each)", d * d);
            println!("one_run_impossible = {impossible}");
            if let Some(out) = &cli.out {
                write_json(
                    out,
                    &json!({
                        "d": d,
                        "candidates": d * d,
                        "identified": correct,
                        "runs_per_candidate": 2,
                        "one_run_impossible": impossible,
                    }),
                )?;
            }
            if correct != d * d || !impossible {
                let path = dump_counterexample(
                    cli,
                    &json!({
                        "check": "pauli",
                        "d": d,
                        "identified": correct,
                        "one_run_impossible": impossible,
                    }),
                )?;
                return Err(CliError::Violation(format!(
                    "pauli identification failed; details in {}",
                    path.display()
                )));
            }
        }
    }
    Ok(())
}

fn cmd_eliminate(cli: &Cli, dir: &Path, truth_index: usize) -> CliResult<()> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::Parse(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();
    if paths.len() < 2 {
        return Err(CliError::Parse(format!(
            "{}: need at least two candidate .json files",
            dir.display()
        )));
    }
    let candidates: Vec<UnitaryOperator> = paths
        .iter()
        .map(|p| load_unitary(p, cli.tol_unitary))
        .collect::<CliResult<_>>()?;
    let transcript = eliminate_tournament(&candidates, truth_index, cli.seed)?;
    let n_max = {
        let mut best = 0;
        for i in 0..candidates.len() {
            for j in (i + 1)..candidates.len() {
                best = best.max(min_runs(&candidates[i], &candidates[j])?);
            }
        }
        best
    };
    println!("survivor = {}", transcript.survivor);
    println!(
        "total_runs = {} (bound {})",
        transcript.total_runs,
        (candidates.len() - 1) * n_max
    );
    if !cli.quiet {
        for (i, path) in paths.iter().enumerate() {
            println!("candidate {i}: {}", path.display());
        }
    }
    if let Some(out) = &cli.out {
        write_json(out, &transcript)?;
    }
    Ok(())
}
