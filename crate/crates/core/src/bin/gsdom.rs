//! Command-line front end: read a problem file, run the dominance pipeline,
//! emit the JSON report and optional DOT Hasse diagrams.

use std::path::PathBuf;
use std::process::ExitCode;

use gsdom::report::{DeltaSpec, ProblemFile, RunOptions};
use gsdom::Tolerances;

const USAGE: &str = "\
Usage: gsdom <problem.json> [options]

Options:
  --delta <list|auto>   Comma-separated granularity levels in [0, 1), or
                        \"auto\" for {0, delta_max/2, delta_max}. Overrides
                        the problem file.
  --report <path>       Write the JSON report to <path> instead of stdout.
  --dot <dir>           Write one hasse_delta_<value>.dot file per level.
  --epsilon-opt <real>  Optimality-sign tolerance (default 1e-8).
  --oracle <samples>    Cross-check verdicts with the sampling oracle and
                        append agreement statistics.
  --seed <int>          Seed for the sampling oracle (default 0).
  -h, --help            Show this message.

Exit codes: 0 success, 1 validation error, 2 infeasibility/inconsistency.
";

struct CliArgs {
    problem: PathBuf,
    report_path: Option<PathBuf>,
    dot_dir: Option<PathBuf>,
    options: RunOptions,
}

fn parse_args(argv: &[String]) -> Result<CliArgs, String> {
    let mut problem = None;
    let mut report_path = None;
    let mut dot_dir = None;
    let mut options = RunOptions::default();

    let mut it = argv.iter();
    while let Some(arg) = it.next() {
        let mut value_for = |flag: &str| {
            it.next()
                .cloned()
                .ok_or_else(|| format!("{flag} expects a value"))
        };
        match arg.as_str() {
            "-h" | "--help" => return Err(String::new()),
            "--delta" => {
                let v = value_for("--delta")?;
                options.deltas = Some(if v == "auto" {
                    DeltaSpec::Token("auto".into())
                } else {
                    let list = v
                        .split(',')
                        .map(|s| {
                            s.trim()
                                .parse::<f64>()
                                .map_err(|_| format!("invalid delta value {s:?}"))
                        })
                        .collect::<Result<Vec<f64>, String>>()?;
                    DeltaSpec::List(list)
                });
            }
            "--report" => report_path = Some(PathBuf::from(value_for("--report")?)),
            "--dot" => dot_dir = Some(PathBuf::from(value_for("--dot")?)),
            "--epsilon-opt" => {
                let v = value_for("--epsilon-opt")?;
                let eps: f64 = v
                    .parse()
                    .map_err(|_| format!("invalid tolerance {v:?}"))?;
                if !eps.is_finite() || eps < 0.0 {
                    return Err(format!("tolerance must be a nonnegative real, got {v}"));
                }
                options.tolerances = Tolerances::with_opt(eps);
            }
            "--oracle" => {
                let v = value_for("--oracle")?;
                let n: usize = v
                    .parse()
                    .map_err(|_| format!("invalid sample count {v:?}"))?;
                options.oracle_samples = Some(n);
            }
            "--seed" => {
                let v = value_for("--seed")?;
                options.seed = v.parse().map_err(|_| format!("invalid seed {v:?}"))?;
            }
            other if other.starts_with('-') => return Err(format!("unknown flag {other}")),
            other => {
                if problem.replace(PathBuf::from(other)).is_some() {
                    return Err("multiple problem files given".into());
                }
            }
        }
    }
    let problem = problem.ok_or_else(|| "no problem file given".to_string())?;
    Ok(CliArgs {
        problem,
        report_path,
        dot_dir,
        options,
    })
}

fn run(args: CliArgs) -> Result<(), (i32, String)> {
    let text = std::fs::read_to_string(&args.problem)
        .map_err(|e| (1, format!("cannot read {}: {e}", args.problem.display())))?;
    let file = ProblemFile::from_json(&text).map_err(|e| (e.exit_code(), e.to_string()))?;
    let report = gsdom::report::run(&file, &args.options)
        .map_err(|e| (e.exit_code(), e.to_string()))?;

    if let Some(dir) = &args.dot_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| (1, format!("cannot create {}: {e}", dir.display())))?;
        for dr in &report.per_delta {
            let path = dir.join(format!("hasse_delta_{}.dot", dr.delta));
            std::fs::write(&path, &dr.dot)
                .map_err(|e| (1, format!("cannot write {}: {e}", path.display())))?;
        }
    }

    let json = report.to_json();
    match &args.report_path {
        Some(path) => std::fs::write(path, &json)
            .map_err(|e| (1, format!("cannot write {}: {e}", path.display())))?,
        None => print!("{json}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let args = match parse_args(&argv) {
        Ok(args) => args,
        Err(msg) => {
            if msg.is_empty() {
                print!("{USAGE}");
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {msg}");
            eprint!("{USAGE}");
            return ExitCode::from(1);
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code as u8)
        }
    }
}
