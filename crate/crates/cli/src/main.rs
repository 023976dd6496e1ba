//! `hbsep`: separate open convex sets from subspaces, from the command line.

mod commands;
mod exit;
mod problem;
mod render;
mod report;
mod repro;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hb_core::GammaRule;

use crate::commands::Flags;
use crate::exit::Failure;
use crate::report::ResultDocument;

#[derive(Debug, Parser)]
#[command(
    name = "hbsep",
    version,
    about = "Hyperplanes separating open convex sets from subspaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Problem file (JSON, version 1).
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Point as comma-separated coordinates.
    #[arg(long, global = true, value_name = "CSV", allow_hyphen_values = true)]
    point: Option<String>,
    #[arg(long, global = true, value_name = "upper|lower|midpoint")]
    gamma_rule: Option<GammaRule>,
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, global = true, value_name = "X")]
    tol: Option<f64>,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_name = "FILE")]
    svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the seminorm (or the gauge of D) at --point.
    Gauge,
    /// Test --point against the conic hull of A.
    Conic,
    /// Extend f to the whole space under the seminorm.
    Extend,
    /// Separate A from S.
    Separate,
    /// Extend f by way of a separation and compare with the direct extension.
    Roundtrip,
    /// Check the hyperplane given by `normal` in the problem file.
    Verify,
    /// Re-run the bundled fixtures against pinned goldens.
    Repro,
    /// Draw a 2-D instance as SVG.
    Render,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gauge => "gauge",
            Command::Conic => "conic",
            Command::Extend => "extend",
            Command::Separate => "separate",
            Command::Roundtrip => "roundtrip",
            Command::Verify => "verify",
            Command::Repro => "repro",
            Command::Render => "render",
        }
    }
}

fn emit(doc: &ResultDocument, output: Option<&PathBuf>) -> Result<(), Failure> {
    let text = doc.to_json();
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::missing(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_repro(flags: &Flags, output: Option<&PathBuf>) -> Result<(), Failure> {
    let start = std::time::Instant::now();
    let outcomes = repro::run(flags.seed.unwrap_or(0))?;
    let mut failed = 0;
    for o in &outcomes {
        match &o.divergence {
            None => println!("PASS {}", o.name),
            Some(d) => {
                failed += 1;
                println!("FAIL {}: {d}", o.name);
            }
        }
    }
    if let Some(path) = output {
        let mut doc = ResultDocument::new("repro");
        let actual: std::collections::BTreeMap<_, _> =
            outcomes.iter().map(|o| (o.name, &o.actual)).collect();
        doc.value = Some(serde_json::to_value(actual).expect("serializable"));
        doc.certificate.valid = failed == 0;
        doc.timings_ms
            .insert("total".into(), start.elapsed().as_secs_f64() * 1e3);
        emit(&doc, Some(path))?;
    }
    if failed > 0 {
        return Err(Failure {
            code: exit::SOLVER,
            kind: "repro_mismatch",
            message: format!("{failed} fixture(s) diverge from the goldens"),
        });
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::SCHEMA
            } else {
                exit::OK
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let g = cli.global;
    let flags = Flags {
        input: g.input,
        point: g.point,
        gamma_rule: g.gamma_rule,
        seed: g.seed,
        tol: g.tol,
        svg: g.svg,
    };
    let name = cli.command.name();
    let result = if let Command::Repro = cli.command {
        run_repro(&flags, g.output.as_ref())
    } else {
        let mut doc = ResultDocument::new(name);
        let r = commands::run(name, &flags, &mut doc);
        if let Err(f) = &r {
            doc.fail(f);
        }
        emit(&doc, g.output.as_ref()).and(r)
    };
    match result {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(f) => {
            eprintln!("hbsep {name}: {} ({})", f.message, f.kind);
            ExitCode::from(f.code as u8)
        }
    }
}
