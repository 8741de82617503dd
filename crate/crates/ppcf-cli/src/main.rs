//! Command-line front end: type checking, sampling, exact distributions,
//! denotations, adequacy reports, and the FPC checker. Output is
//! deterministic for fixed inputs and flags; JSON object keys are sorted.
//!
//! Exit codes: 0 success/pass, 1 semantic failure, 2 IO or usage.

use clap::{Parser, Subcommand, ValueEnum};
use ppcf::adequacy::{check_adequacy, AdequacyReport};
use ppcf::denotational::{denote_traced, DenoteConfig, SemEnv};
use ppcf::fpc::{
    normalize, parse_fpc, pretty_fterm, pretty_ftype, typecheck_fpc, FTerm, FType, Normalized,
    TermCtx, TypeCtx,
};
use ppcf::operational::{distribution, run_sample, RunResult};
use ppcf::prob::{parse_rat, pow2_neg, rat, show_rat, Rat};
use ppcf::subdist::SubDist;
use ppcf::syntax::{parse, pretty, pretty_type, typecheck, PTerm, PType, TypingCtx};
use serde_json::json;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "ppcf", about = "Workbench for probabilistic PCF with an FPC front end")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Type-check a .ppcf or .fpc file and print its type.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sample one trajectory of a program and print the reached form.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "op-depth", alias = "depth", default_value_t = 200)]
        op_depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact outcome distribution of a nat program after at most K steps.
    Dist {
        file: PathBuf,
        #[arg(long = "op-depth", alias = "depth", default_value_t = 200)]
        op_depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Denotation of a nat program as a sub-distribution.
    Denote {
        file: PathBuf,
        #[arg(long = "fix-iters", default_value_t = 60)]
        fix_iters: usize,
        #[arg(long = "support-cap", default_value_t = 64)]
        support_cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Compare both lower bounds at a numeral; exit 0 iff the gap is
    /// within tolerance.
    Adequacy {
        file: PathBuf,
        #[arg(long)]
        numeral: u64,
        #[arg(long = "op-depth", alias = "depth", default_value_t = 200)]
        op_depth: usize,
        #[arg(long = "fix-iters", default_value_t = 60)]
        fix_iters: usize,
        #[arg(long = "support-cap", default_value_t = 64)]
        support_cap: u64,
        /// Gap tolerance as p/q in [0, 1]; defaults to 2^-40.
        #[arg(long)]
        tol: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Type-check an FPC file.
    FpcCheck {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Normalize an FPC program, spending one fuel unit per step.
    FpcRun {
        file: PathBuf,
        #[arg(long = "op-depth", alias = "depth", default_value_t = 200)]
        op_depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

enum Failure {
    Semantic(String),
    Usage(String),
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(Failure::Semantic(message)) => {
            eprintln!("{message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("{message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Check { file, format } => cmd_check(&file, format),
        Command::Run { file, seed, op_depth, format } => cmd_run(&file, seed, op_depth, format),
        Command::Dist { file, op_depth, format } => cmd_dist(&file, op_depth, format),
        Command::Denote { file, fix_iters, support_cap, format } => {
            cmd_denote(&file, DenoteConfig { fix_iters, support_cap }, format)
        }
        Command::Adequacy { file, numeral, op_depth, fix_iters, support_cap, tol, format } => {
            let tol = parse_tol(tol.as_deref())?;
            let cfg = DenoteConfig { fix_iters, support_cap };
            cmd_adequacy(&file, numeral, op_depth, &cfg, &tol, format)
        }
        Command::FpcCheck { file, format } => cmd_fpc_check(&file, format),
        Command::FpcRun { file, op_depth, format } => cmd_fpc_run(&file, op_depth, format),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn typed_ppcf(path: &Path) -> Result<(PTerm, PType), Failure> {
    let text = read_input(path)?;
    let term = parse(&text).map_err(|e| Failure::Semantic(format!("{}: {e}", path.display())))?;
    let ty = typecheck(&TypingCtx::empty(), &term)
        .map_err(|e| Failure::Semantic(e.to_string()))?;
    Ok((term, ty))
}

fn ground_ppcf(path: &Path) -> Result<PTerm, Failure> {
    let (term, ty) = typed_ppcf(path)?;
    if ty != PType::Nat {
        return Err(Failure::Semantic(format!(
            "expected a program of type nat, found {}",
            pretty_type(&ty)
        )));
    }
    Ok(term)
}

fn typed_fpc(path: &Path) -> Result<(FTerm, FType), Failure> {
    let text = read_input(path)?;
    let term =
        parse_fpc(&text).map_err(|e| Failure::Semantic(format!("{}: {e}", path.display())))?;
    let ty = typecheck_fpc(&TypeCtx::empty(), &TermCtx::empty(), &term)
        .map_err(|e| Failure::Semantic(e.to_string()))?;
    Ok((term, ty))
}

fn parse_tol(flag: Option<&str>) -> Result<Rat, Failure> {
    let Some(text) = flag else {
        return Ok(pow2_neg(40));
    };
    let tol = parse_rat(text).map_err(|e| Failure::Usage(e.to_string()))?;
    if tol < rat(0, 1) || tol > rat(1, 1) {
        return Err(Failure::Usage(format!("tolerance {} outside [0, 1]", show_rat(&tol))));
    }
    Ok(tol)
}

fn cmd_check(path: &Path, format: Format) -> Result<ExitCode, Failure> {
    let rendered = match path.extension().and_then(|e| e.to_str()) {
        Some("ppcf") => pretty_type(&typed_ppcf(path)?.1),
        Some("fpc") => pretty_ftype(&typed_fpc(path)?.1),
        _ => {
            return Err(Failure::Usage(format!(
                "{}: expected a .ppcf or .fpc file",
                path.display()
            )))
        }
    };
    match format {
        Format::Text => println!("{rendered}"),
        Format::Json => println!("{}", json!({ "type": rendered })),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_run(path: &Path, seed: u64, op_depth: usize, format: Format) -> Result<ExitCode, Failure> {
    let (term, _) = typed_ppcf(path)?;
    let result = run_sample(&term, seed, op_depth).map_err(|e| Failure::Semantic(e.to_string()))?;
    let (outcome, reached, code) = match &result {
        RunResult::Value(v) => ("value", pretty(v), ExitCode::SUCCESS),
        RunResult::Timeout(t) => ("timeout", pretty(t), ExitCode::from(1)),
    };
    match format {
        Format::Text => match result {
            RunResult::Value(_) => println!("{reached}"),
            RunResult::Timeout(_) => println!("no weak normal form within {op_depth} steps"),
        },
        Format::Json => println!("{}", json!({ "outcome": outcome, "term": reached })),
    }
    Ok(code)
}

fn cmd_dist(path: &Path, op_depth: usize, format: Format) -> Result<ExitCode, Failure> {
    let term = ground_ppcf(path)?;
    let dist =
        distribution(&term, op_depth).map_err(|e| Failure::Semantic(e.to_string()))?;
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string(&dist).expect("distribution serializes"))
        }
        Format::Text => {
            let mut rows: Vec<(String, String)> =
                dist.outcomes().map(|(t, w)| (pretty(t), show_rat(w))).collect();
            rows.sort();
            for (outcome, weight) in rows {
                println!("{outcome}: {weight}");
            }
            println!("residual: {}", show_rat(dist.residual()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_denote(path: &Path, cfg: DenoteConfig, format: Format) -> Result<ExitCode, Failure> {
    let term = ground_ppcf(path)?;
    let (value, discarded) = denote_traced(&SemEnv::empty(), &term, &cfg)
        .map_err(|e| Failure::Semantic(e.to_string()))?;
    let dist: &SubDist = value.as_nat().map_err(|e| Failure::Semantic(e.to_string()))?;
    match format {
        Format::Json => {
            let mut body = serde_json::to_value(dist).expect("sub-distribution serializes");
            body.as_object_mut()
                .expect("sub-distribution is a JSON object")
                .insert("discardedMass".to_string(), json!(show_rat(&discarded)));
            println!("{}", serde_json::to_string(&body).expect("object serializes"));
        }
        Format::Text => {
            for (n, w) in dist.iter() {
                println!("{n}: {}", show_rat(w));
            }
            println!("mass: {}", show_rat(&dist.mass()));
            println!("discardedMass: {}", show_rat(&discarded));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_adequacy(
    path: &Path,
    numeral: u64,
    op_depth: usize,
    cfg: &DenoteConfig,
    tol: &Rat,
    format: Format,
) -> Result<ExitCode, Failure> {
    let term = ground_ppcf(path)?;
    let report: AdequacyReport = check_adequacy(&term, numeral, op_depth, cfg, tol)
        .map_err(|e| Failure::Semantic(e.to_string()))?;
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string(&report).expect("report serializes"))
        }
        Format::Text => {
            println!("term: {}", pretty(&report.term));
            println!("n: {}", report.n);
            println!("opLower: {}", show_rat(&report.op_lower));
            println!("denLower: {}", show_rat(&report.den_lower));
            println!("gap: {}", show_rat(&report.gap));
            println!("pass: {}", report.pass);
        }
    }
    Ok(if report.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_fpc_check(path: &Path, format: Format) -> Result<ExitCode, Failure> {
    let (_, ty) = typed_fpc(path)?;
    match format {
        Format::Text => println!("{}", pretty_ftype(&ty)),
        Format::Json => println!("{}", json!({ "type": pretty_ftype(&ty) })),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_fpc_run(path: &Path, op_depth: usize, format: Format) -> Result<ExitCode, Failure> {
    let (term, _) = typed_fpc(path)?;
    match normalize(&term, op_depth) {
        Normalized::Normal(v) => {
            match format {
                Format::Text => println!("{}", pretty_fterm(&v)),
                Format::Json => {
                    println!("{}", json!({ "outcome": "normal", "term": pretty_fterm(&v) }))
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Normalized::OutOfFuel(t) => {
            match format {
                Format::Text => println!("no normal form within {op_depth} steps"),
                Format::Json => {
                    println!("{}", json!({ "outcome": "outOfFuel", "term": pretty_fterm(&t) }))
                }
            }
            Ok(ExitCode::from(1))
        }
    }
}
