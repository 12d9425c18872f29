//! Command-line front end: stabilize almost-actions, solve standalone
//! cone problems, repair Schreier-graph almost-automorphisms, and run
//! seeded benchmark sweeps.

use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use permstab::cone::{integer_kernel_point_with_budget, DEFAULT_BUDGET};
use permstab::correct::stabilize_with_budget;
use permstab::harness::{run_trials, TrialConfig, CSV_HEADER};
use permstab::io::{
    load_gog, read_json, write_json, AlmostActionFile, AutomorphismFile, ConeProblemFile,
    ConeSolutionFile, CorrectionReportFile, RepairReportFile, SchreierGraphFile,
};
use permstab::ratio::{format_rat, rat_int};
use permstab::schreier::repair_with_budget;

#[derive(Parser)]
#[command(
    name = "permstab",
    version,
    about = "Measure, correct, and rebuild almost-actions of fundamental groups \
             of finite graphs of finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rebuild an exact action near an almost-action of a graph of groups.
    Stabilize {
        /// Graph-of-groups JSON file.
        #[arg(long)]
        gog: PathBuf,
        /// Almost-action JSON file.
        #[arg(long)]
        action: PathBuf,
        /// Where to write the corrected action (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Where to write the correction report.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Node budget for the integer cone search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Recorded in the summary for provenance; the computation itself
        /// is deterministic and ignores it.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Solve one positive-cone kernel-nearest-point problem.
    Cone {
        /// Problem JSON file: matrix, optional weights, and the vector.
        #[arg(long)]
        problem: PathBuf,
        /// Where to write the solution (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Node budget for the branch-and-bound search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Repair an almost-automorphism of a labelled Schreier graph.
    Repair {
        /// Schreier-graph JSON file.
        #[arg(long)]
        graph: PathBuf,
        /// Automorphism JSON file: vertex map and intended order.
        #[arg(long)]
        automorphism: PathBuf,
        /// Where to write the repaired graph.
        #[arg(long)]
        out_graph: Option<PathBuf>,
        /// Where to write the repaired automorphism.
        #[arg(long)]
        out_automorphism: Option<PathBuf>,
        /// Where to write the diff report.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Node budget for the integer cone search.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Run seeded perturb-and-stabilize trials and emit CSV.
    Bench {
        /// Trial configuration JSON: one config object or an array.
        #[arg(long)]
        config: PathBuf,
        /// Where to write the CSV (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// A bench file holds one sweep or a list of sweeps.
#[derive(Deserialize)]
#[serde(untagged)]
enum BenchFile {
    One(TrialConfig),
    Many(Vec<TrialConfig>),
}

fn emit<T: Serialize>(target: Option<&PathBuf>, value: &T) -> Result<(), Box<dyn Error>> {
    match target {
        Some(path) => write_json(path, value)?,
        None => println!("{}", serde_json::to_string_pretty(value)?),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn Error>> {
    match cli.command {
        Command::Stabilize { gog, action, output, report, budget, seed } => {
            let gog = load_gog(&gog)?;
            let file: AlmostActionFile = read_json(&action)?;
            let rho = file.to_almost_action(&gog)?;
            let result = stabilize_with_budget(&rho, budget);
            emit(output.as_ref(), &AlmostActionFile::from_almost_action(&result.output))?;
            if let Some(path) = report {
                write_json(&path, &CorrectionReportFile::from_report(&result))?;
            }
            let seed_note = seed.map(|s| format!(" (seed {s})")).unwrap_or_default();
            eprintln!(
                "defect {} -> {}; distance {}{}",
                format_rat(&result.input_defect),
                format_rat(&result.output_defect),
                format_rat(&result.distance),
                seed_note
            );
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            if result.output_defect == rat_int(0) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
        Command::Cone { problem, output, budget } => {
            let file: ConeProblemFile = read_json(&problem)?;
            let problem = file.to_problem()?;
            let solution = integer_kernel_point_with_budget(&problem, budget);
            emit(output.as_ref(), &ConeSolutionFile::from_solution(&solution))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Repair { graph, automorphism, out_graph, out_automorphism, report, budget } => {
            let gfile: SchreierGraphFile = read_json(&graph)?;
            let graph = gfile.to_graph()?;
            let afile: AutomorphismFile = read_json(&automorphism)?;
            let am = afile.to_automorphism(&graph)?;
            let outcome = repair_with_budget(&graph, &am, budget)?;
            let report_file = RepairReportFile::from_outcome(&outcome);
            if out_graph.is_none() && out_automorphism.is_none() && report.is_none() {
                // no destinations: bundle everything on stdout
                let bundle = serde_json::json!({
                    "graph": SchreierGraphFile::from_graph(&outcome.graph),
                    "automorphism": AutomorphismFile::from_automorphism(&outcome.automorphism),
                    "report": report_file,
                });
                println!("{}", serde_json::to_string_pretty(&bundle)?);
            } else {
                if let Some(path) = out_graph {
                    write_json(&path, &SchreierGraphFile::from_graph(&outcome.graph))?;
                }
                if let Some(path) = out_automorphism {
                    write_json(
                        &path,
                        &AutomorphismFile::from_automorphism(&outcome.automorphism),
                    )?;
                }
                if let Some(path) = report {
                    write_json(&path, &report_file)?;
                }
            }
            eprintln!(
                "edge diff {}, vertex diff {}, order {}",
                outcome.edge_diff, outcome.vertex_diff, outcome.alpha_order
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { config, output } => {
            let file: BenchFile = read_json(&config)?;
            let configs = match file {
                BenchFile::One(c) => vec![c],
                BenchFile::Many(cs) => cs,
            };
            let mut csv = String::from(CSV_HEADER);
            csv.push('\n');
            for config in &configs {
                for record in run_trials(config)? {
                    csv.push_str(&record.csv_row());
                    csv.push('\n');
                }
            }
            match output {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
