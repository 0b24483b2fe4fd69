//! The command-line interface: frame files in, reports out.
//!
//! Exit codes are fixed for scripting: 0 on success, 1 when the input cannot
//! be read or parsed, 2 when an enumeration cap is exceeded.

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, ParseError, Result};
use crate::frame::KripkeFrame;
use crate::ideal;
use crate::report::{analyze, AnalyzeOptions};
use crate::semantics::Valuation;
use crate::Caps;

#[derive(Debug, Parser)]
#[command(
    name = "kripke-toric",
    about = "Analyze the necessity operator of a finite Kripke frame",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full report: classification, kernel basis, binomials, range, tameness.
    Analyze(CommonArgs),
    /// The range of the necessity operator, one valuation per line.
    Range(CommonArgs),
    /// Generators of the binomial description of the range.
    Generators(CommonArgs),
    /// Whether the toric constraints alone already cut out the range.
    Tame(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Frame file, either JSON or the plain edge-list format.
    pub path: PathBuf,

    /// Transpose the frame before analysis.
    #[arg(long)]
    pub reverse: bool,

    /// Emit machine-readable JSON instead of text.
    #[arg(long)]
    pub json: bool,

    /// Cap, in worlds, for the 2^K point enumerations (default 20).
    #[arg(long, value_name = "N")]
    pub cap_points: Option<usize>,

    /// Cap, in worlds, for the square-free exponent enumeration and the
    /// tameness feasibility queries (defaults 14 and 12).
    #[arg(long, value_name = "N")]
    pub cap_squarefree: Option<usize>,
}

impl CommonArgs {
    fn caps(&self) -> Caps {
        let defaults = Caps::default();
        let mut caps = defaults;
        if let Some(points) = self.cap_points {
            caps.points = points;
            if points > defaults.points {
                eprintln!(
                    "warning: point cap raised to {points}; 2^{points} enumeration may be slow"
                );
            }
        }
        if let Some(squarefree) = self.cap_squarefree {
            caps.squarefree = squarefree;
            caps.feasibility = squarefree;
            if squarefree > defaults.squarefree {
                eprintln!(
                    "warning: square-free cap raised to {squarefree}; \
                     enumeration may be slow"
                );
            }
        }
        caps
    }
}

/// Loads a frame file, accepting both supported formats.
pub fn load_frame(path: &Path) -> Result<KripkeFrame> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(ParseError::other(format!("{}: {e}", path.display()))))?;
    if text.trim_start().starts_with('{') {
        KripkeFrame::from_json_str(&text)
    } else {
        KripkeFrame::from_edge_list_str(&text)
    }
}

#[derive(Serialize)]
struct RangeOutput {
    size: usize,
    points: crate::semantics::RangeSet,
}

#[derive(Serialize)]
struct TameOutput {
    tame: bool,
    range_size: usize,
    toric_point_count: usize,
    witness: Option<Valuation>,
}

fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Analyze(args) => {
            let frame = load_frame(&args.path)?;
            let options = AnalyzeOptions {
                reverse: args.reverse,
                caps: args.caps(),
            };
            let report = analyze(&frame, &options)?;
            Ok(if args.json {
                report.to_json()
            } else {
                report.render_text()
            })
        }
        Command::Range(args) => {
            let frame = prepared_frame(args)?;
            let points = frame.necessity_range_with(&args.caps())?;
            if args.json {
                let out = RangeOutput {
                    size: points.len(),
                    points,
                };
                Ok(pretty(&out))
            } else {
                let mut text = String::new();
                for p in points.iter() {
                    text.push_str(&p.to_string());
                    text.push('\n');
                }
                Ok(text)
            }
        }
        Command::Generators(args) => {
            let frame = prepared_frame(args)?;
            let generators = ideal::ideal_generators_with(&frame, &args.caps())?;
            if args.json {
                Ok(pretty(&generators))
            } else {
                let mut text = String::new();
                text.push_str(&format!(
                    "boolean relations: {} implicit z_w^2 - z_w\n",
                    generators.boolean_count
                ));
                text.push_str(&format!(
                    "toric basis ({}):\n",
                    generators.toric_basis.len()
                ));
                for b in &generators.toric_basis {
                    text.push_str(&format!("  {b}\n"));
                }
                text.push_str(&format!(
                    "class binomials ({}):\n",
                    generators.class_part.len()
                ));
                for b in &generators.class_part {
                    text.push_str(&format!("  {b}\n"));
                }
                Ok(text)
            }
        }
        Command::Tame(args) => {
            let frame = prepared_frame(args)?;
            let verdict = ideal::is_tame_with(&frame, &args.caps())?;
            if args.json {
                let out = TameOutput {
                    tame: verdict.is_tame,
                    range_size: verdict.range_points.len(),
                    toric_point_count: verdict.j_points.len(),
                    witness: verdict.witness,
                };
                Ok(pretty(&out))
            } else {
                let witness = match &verdict.witness {
                    Some(w) => format!(" (witness {w})"),
                    None => String::new(),
                };
                Ok(format!("tame: {}{witness}\n", verdict.is_tame))
            }
        }
    }
}

fn prepared_frame(args: &CommonArgs) -> Result<KripkeFrame> {
    let frame = load_frame(&args.path)?;
    Ok(if args.reverse { frame.reverse() } else { frame })
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("output serializes");
    out.push('\n');
    out
}

/// Runs a parsed invocation and maps errors to the documented exit codes.
pub fn run(cli: &Cli) -> ExitCode {
    match execute(&cli.command) {
        Ok(output) => {
            let mut stdout = io::stdout().lock();
            let written = stdout
                .write_all(output.as_bytes())
                .and_then(|()| stdout.flush());
            match written {
                Ok(()) => ExitCode::SUCCESS,
                // A closed pipe (e.g. `| head`) is not an error.
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::CapExceeded { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
