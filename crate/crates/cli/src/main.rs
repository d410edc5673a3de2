//! `spectradiag`: JSON in, JSON or CSV out.
//!
//! Exit status is 0 on success, 2 when the answer is "infeasible" or "not a
//! member", and 1 on any error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use spectradiag::{
    construct_matrix, decide_diagonal, decouple, f_value, membership_report, minimal_set, move_toward_endpoints,
    split_extremes, truncate_to_finite, Band, DiagonalSequence, RealVector, Scalar, SpectrumSpec,
};

#[derive(Parser)]
#[command(name = "spectradiag", version, about = "Exact diagonal feasibility checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    output: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Truncate,
    Split,
    Move,
    Decouple,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a sequence is a diagonal for an eigenvalue-multiplicity list.
    Check {
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long)]
        spectrum: PathBuf,
    },
    /// Minimal elements of the N-point interior eigenvalue sets.
    Minimal {
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long = "N")]
        n: usize,
    },
    /// Whether an eigenvalue list belongs to the interior eigenvalue set.
    Membership {
        #[arg(long)]
        sequence: PathBuf,
        /// JSON array of rationals, e.g. '["2/3","1/3"]'.
        #[arg(long)]
        lambda: String,
    },
    /// Real symmetric matrix realising a finite diagonal.
    Witness {
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long)]
        spectrum: PathBuf,
    },
    /// Trace-gap function on the grid alpha = i/(grid+1).
    Fplot {
        #[arg(long)]
        sequence: PathBuf,
        #[arg(long)]
        grid: usize,
    },
    /// Apply a mass-moving transform and print the result with its receipt.
    Transform {
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long)]
        sequence: PathBuf,
        /// truncate: margin in (0, 1/2].
        #[arg(long)]
        epsilon: Option<String>,
        /// split: top endpoint (default 1); move: upper target.
        #[arg(long)]
        b: Option<String>,
        /// move: lower target (default 0).
        #[arg(long)]
        a: Option<String>,
        /// move: JSON array of entries drained toward a.
        #[arg(long)]
        i0: Option<String>,
        /// move: JSON array of entries filled toward b.
        #[arg(long)]
        i1: Option<String>,
        /// move: mass to shift.
        #[arg(long)]
        eta0: Option<String>,
        /// decouple: band [-gamma, delta] and mass eta.
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        eta: Option<String>,
    },
}

enum Answer {
    Yes,
    No,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_json(&text).with_context(|| format!("in {}", path.display()))
}

fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        anyhow!("at `{path}`: {}", e.into_inner())
    })
}

fn scalar(flag: &str, value: &Option<String>) -> Result<Scalar> {
    let v = value.as_deref().ok_or_else(|| anyhow!("--{flag} is required"))?;
    v.parse().map_err(|e| anyhow!("--{flag}: {e}"))
}

fn scalar_or(flag: &str, value: &Option<String>, default: Scalar) -> Result<Scalar> {
    match value {
        None => Ok(default),
        Some(_) => scalar(flag, value),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<Answer> {
    let format = cli.output;
    match cli.command {
        Command::Check { sequence, spectrum } => {
            let seq: DiagonalSequence = read_json(&sequence)?;
            let spec: SpectrumSpec = read_json(&spectrum)?;
            let verdict = decide_diagonal(&seq, &spec)?;
            log::info!("branch {:?}, feasible {}", verdict.branch, verdict.feasible);
            match format.unwrap_or(Format::Json) {
                Format::Json => print_json(&verdict)?,
                Format::Csv => {
                    println!("condition,slack");
                    for (id, slack) in &verdict.slacks {
                        println!("{id},{slack}");
                    }
                }
            }
            Ok(if verdict.feasible { Answer::Yes } else { Answer::No })
        }
        Command::Minimal { sequence, n } => {
            let seq: DiagonalSequence = read_json(&sequence)?;
            let report = minimal_set(&seq, n)?;
            match format.unwrap_or(Format::Json) {
                Format::Json => print_json(&report)?,
                Format::Csv => {
                    let header: Vec<String> = (1..=n).map(|i| format!("mu_{i}")).collect();
                    println!("k,case,{}", header.join(","));
                    for e in &report.entries {
                        let case = serde_json::to_value(e.case)?;
                        let mu: Vec<String> = e.mu.iter().map(|x| x.to_string()).collect();
                        println!("{},{},{}", e.k, case.as_str().unwrap_or_default(), mu.join(","));
                    }
                }
            }
            Ok(Answer::Yes)
        }
        Command::Membership { sequence, lambda } => {
            let seq: DiagonalSequence = read_json(&sequence)?;
            let lambda: RealVector = parse_json(&lambda).context("in --lambda")?;
            let report = membership_report(&seq, &lambda)?;
            match format.unwrap_or(Format::Json) {
                Format::Json => print_json(&report)?,
                Format::Csv => {
                    println!("member,failed_condition");
                    println!("{},{}", report.member, report.failed_condition.clone().unwrap_or_default());
                }
            }
            Ok(if report.member { Answer::Yes } else { Answer::No })
        }
        Command::Witness { sequence, spectrum } => witness(&sequence, &spectrum, format.unwrap_or(Format::Csv)),
        Command::Fplot { sequence, grid } => {
            let seq: DiagonalSequence = read_json(&sequence)?;
            let denom = i64::try_from(grid + 1).context("grid too large")?;
            let rows = (1..denom)
                .map(|i| {
                    let alpha = Scalar::ratio(i, denom);
                    let f = f_value(&seq, &alpha)?;
                    Ok((alpha, f))
                })
                .collect::<Result<Vec<_>>>()?;
            match format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    println!("alpha,f");
                    for (a, f) in &rows {
                        println!("{a},{f}");
                    }
                }
                Format::Json => {
                    let doc: Vec<_> = rows.iter().map(|(a, f)| serde_json::json!({ "alpha": a, "f": f })).collect();
                    print_json(&doc)?;
                }
            }
            Ok(Answer::Yes)
        }
        Command::Transform { op, sequence, epsilon, b, a, i0, i1, eta0, gamma, delta, eta } => {
            if format == Some(Format::Csv) {
                bail!("transform output is JSON only");
            }
            let seq: DiagonalSequence = read_json(&sequence)?;
            match op {
                Op::Truncate => {
                    let (out, receipt) = truncate_to_finite(&seq, &scalar("epsilon", &epsilon)?)?;
                    print_json(&serde_json::json!({ "sequence": out, "receipt": receipt }))?;
                }
                Op::Split => {
                    let top = scalar_or("b", &b, Scalar::one())?;
                    let (zeros, interior, tops) = split_extremes(&seq, &top)?;
                    print_json(&serde_json::json!({ "zeros": zeros, "sequence": interior, "tops": tops }))?;
                }
                Op::Move => {
                    let i0: Vec<Scalar> = parse_json(i0.as_deref().unwrap_or("[]")).context("in --i0")?;
                    let i1: Vec<Scalar> = parse_json(i1.as_deref().unwrap_or("[]")).context("in --i1")?;
                    let (out, receipt) = move_toward_endpoints(
                        &seq,
                        &i0,
                        &i1,
                        &scalar("eta0", &eta0)?,
                        &scalar_or("a", &a, Scalar::zero())?,
                        &scalar_or("b", &b, Scalar::one())?,
                    )?;
                    print_json(&serde_json::json!({ "sequence": out, "receipt": receipt }))?;
                }
                Op::Decouple => {
                    let (out, receipt) =
                        decouple(&seq, &scalar("gamma", &gamma)?, &scalar("delta", &delta)?, &scalar("eta", &eta)?)?;
                    print_json(&serde_json::json!({ "sequence": out, "receipt": receipt }))?;
                }
            }
            Ok(Answer::Yes)
        }
    }
}

fn witness(sequence: &Path, spectrum: &Path, format: Format) -> Result<Answer> {
    let seq: DiagonalSequence = read_json(sequence)?;
    let spec: SpectrumSpec = read_json(spectrum)?;
    let lambda = spec.expanded().ok_or_else(|| anyhow!("witness needs finite multiplicities"))?;
    let d = seq.values_in(&Band::all()).ok_or_else(|| anyhow!("witness needs a finite sequence"))?;
    if d.len() != lambda.len() {
        bail!("sequence has {} entries but the spectrum has {}", d.len(), lambda.len());
    }
    let lambda = RealVector(lambda);
    let d = RealVector(d);
    if !spectradiag::schur_horn_check(&lambda, &d)? {
        print_json(&decide_diagonal(&seq, &spec)?)?;
        return Ok(Answer::No);
    }
    let w = construct_matrix(&lambda, &d)?;
    let err = w.validate(&lambda)?;
    match format {
        Format::Csv => {
            print!("{}", w.to_csv());
            eprintln!("max |eigenvalue - target| = {err:e}");
        }
        Format::Json => {
            let rows: Vec<Vec<f64>> = (0..w.dimension()).map(|i| (0..w.dimension()).map(|j| w.entry(i, j)).collect()).collect();
            print_json(&serde_json::json!({
                "dimension": w.dimension(),
                "diagonal": d,
                "matrix": rows,
                "max_eigenvalue_error": err,
            }))?;
        }
    }
    Ok(Answer::Yes)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SPECTRADIAG_LOG")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Answer::Yes) => ExitCode::SUCCESS,
        Ok(Answer::No) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
