use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};
use twistcert::format::{self, ParseOptions};
use twistcert::report::{self, AnalysisOptions, CertificateReport};

#[derive(Parser)]
#[command(
    name = "twistcert",
    version,
    about = "Certify geometry of knots from twist regions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Augment each diagram and report its certificates.
    Analyze(AnalyzeArgs),
}

#[derive(clap::Args)]
struct AnalyzeArgs {
    /// Diagram files (JSON).
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Print reports as JSON.
    #[arg(long)]
    json: bool,
    /// Take the augmentation to be hyperbolic.
    #[arg(long)]
    attest_hyperbolic: bool,
    /// Write each augmented link's PD code into this directory.
    #[arg(long, value_name = "DIR")]
    export_augmented: Option<PathBuf>,
    /// Reject unknown keys instead of warning.
    #[arg(long)]
    strict: bool,
}

struct Outcome {
    warnings: Vec<String>,
    result: Result<CertificateReport, String>,
}

fn export_path(dir: &Path, input: &Path) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "diagram".to_owned());
    dir.join(format!("{stem}.augmented.json"))
}

fn run_one(path: &Path, args: &AnalyzeArgs) -> Outcome {
    let mut warnings = Vec::new();
    let result = (|| {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read: {e}"))?;
        let options = ParseOptions {
            strict: args.strict,
            require_connected: true,
        };
        let parsed = format::parse_input(&text, &options).map_err(|e| e.to_string())?;
        warnings.extend(parsed.warnings.iter().cloned());
        let analysis = report::analyze(
            &parsed,
            &AnalysisOptions {
                attest_hyperbolic: args.attest_hyperbolic,
            },
        )
        .map_err(|e| e.to_string())?;
        if let Some(dir) = &args.export_augmented {
            let out = export_path(dir, path);
            let text = format::to_json(analysis.augmented.diagram(), &[]);
            fs::write(&out, text).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
        }
        Ok(analysis.report)
    })();
    Outcome { warnings, result }
}

fn analyze(args: AnalyzeArgs) -> ExitCode {
    if let Some(dir) = &args.export_augmented {
        if let Err(e) = fs::create_dir_all(dir) {
            eprintln!("error: cannot create {}: {e}", dir.display());
            return ExitCode::from(2);
        }
    }
    let outcomes: Vec<Outcome> = args.inputs.par_iter().map(|p| run_one(p, &args)).collect();
    let mut failed = false;
    let mut entries: Vec<Value> = Vec::new();
    for (path, outcome) in args.inputs.iter().zip(outcomes) {
        let file = path.display().to_string();
        for w in &outcome.warnings {
            eprintln!("warning: {file}: {w}");
        }
        match outcome.result {
            Ok(r) => {
                if args.json {
                    entries.push(json!({ "file": file, "report": r }));
                } else {
                    print!("{}: {}", file, report::render_text(&r));
                }
            }
            Err(e) => {
                failed = true;
                eprintln!("error: {file}: {e}");
                if args.json {
                    entries.push(json!({ "file": file, "error": e }));
                }
            }
        }
    }
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&Value::Array(entries)).expect("reports serialize")
        );
    }
    if failed {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze(args) => analyze(args),
    }
}
