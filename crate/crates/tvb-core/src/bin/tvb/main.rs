//! `tvb`: chessboard-complex homology, rainbow Tverberg guarantee reports,
//! and randomized verification campaigns on exact rational configurations.
//!
//! Every command prints a JSON report to stdout (with the run manifest
//! embedded) and a human summary to stderr unless `--json-only` is given.
//! Exit codes are a stable contract: 0 success, 1 mathematical negative,
//! 2 usage or parse error, 3 resource budget exceeded.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{ArgAction, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use tvb_core::complex::{ComplexError, SimplicialComplex, DEFAULT_FACE_BUDGET};
use tvb_core::criterion::{guarantee_criterion, CriterionInput, CriterionReport};
use tvb_core::geometry::{format_rational, ColoredConfiguration};
use tvb_core::homology::{
    self, default_coefficients_with_budget, homological_connectivity, Coefficients,
    ConnectivityEstimate, Hconn,
};
use tvb_core::search::{
    find_colored_tverberg_with, hunt_counterexample, verify_theorem_instance, CampaignOptions,
    RainbowPartition, SearchOptions, SearchOutcome, TheoremFamily, VerificationReport,
};

const EXIT_OK: i32 = 0;
const EXIT_NEGATIVE: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(
    name = "tvb",
    version,
    about = "Rainbow Tverberg toolkit: chessboard homology, guarantee criterion, exact search"
)]
struct Cli {
    /// Suppress the human-readable summary; print only the JSON report.
    #[arg(long, global = true)]
    json_only: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the m x n chessboard complex and report f-vector, Betti
    /// numbers, homological connectivity and the formula comparison.
    Chessboard {
        m: u32,
        n: u32,
        /// Coefficient systems (Q, Z, Z2, Z3, ...); repeatable or
        /// comma-separated. Default: Z when small enough, else Q,Z2,Z3.
        #[arg(long = "coeff", value_delimiter = ',', action = ArgAction::Append)]
        coeff: Vec<String>,
    },
    /// Evaluate the guarantee criterion for (d, r, cards).
    Criterion {
        #[arg(short, long)]
        d: u64,
        #[arg(short, long)]
        r: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        cards: Vec<u64>,
    },
    /// Run a randomized verification campaign for a theorem family.
    Verify {
        #[arg(long)]
        theorem: String,
        #[arg(short, long)]
        d: u64,
        #[arg(short, long)]
        r: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        cards: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Base seed; trial i uses seed + i. Required: reproducibility is
        /// the product, there is no wall-clock default.
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Exploratory campaign below any theorem threshold; failures are
    /// recorded with full configurations, never asserted.
    Hunt {
        #[arg(short, long)]
        d: u64,
        #[arg(short, long)]
        r: u64,
        #[arg(long, value_delimiter = ',', required = true)]
        cards: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Search one configuration file for r pairwise disjoint rainbow faces
    /// with a common hull point.
    Find {
        /// JSON file with fields dimension, points (arrays of "p/q"
        /// strings), colors (arrays of zero-based point indices).
        config: PathBuf,
        #[arg(short, long)]
        r: u64,
        /// Ignore the coloring and treat every point as its own class.
        #[arg(long)]
        uncolored: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    version: String,
    parameters: serde_json::Value,
    input_digests: BTreeMap<String, String>,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    manifest: RunManifest,
    report: T,
    elapsed_ms: u128,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn budget(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_BUDGET,
            message: message.into(),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let started = Instant::now();
    let result = match &cli.command {
        Command::Chessboard { m, n, coeff } => cmd_chessboard(*m, *n, coeff),
        Command::Criterion { d, r, cards } => cmd_criterion(*d, *r, cards),
        Command::Verify {
            theorem,
            d,
            r,
            cards,
            trials,
            seed,
            workers,
        } => cmd_verify(theorem, *d, *r, cards, *trials, *seed, *workers),
        Command::Hunt {
            d,
            r,
            cards,
            trials,
            seed,
            workers,
        } => cmd_hunt(*d, *r, cards, *trials, *seed, *workers),
        Command::Find {
            config,
            r,
            uncolored,
            workers,
        } => cmd_find(config, *r, *uncolored, *workers),
    };
    match result {
        Ok(outcome) => {
            let envelope = Envelope {
                manifest: outcome.manifest,
                report: outcome.report,
                elapsed_ms: started.elapsed().as_millis(),
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&envelope).expect("reports serialize")
            );
            if !cli.json_only {
                eprintln!("{}", outcome.summary);
            }
            std::process::exit(outcome.code);
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            std::process::exit(failure.code);
        }
    }
}

struct Outcome {
    manifest: RunManifest,
    report: serde_json::Value,
    summary: String,
    code: i32,
}

fn manifest(
    command: &str,
    parameters: serde_json::Value,
    input_digests: BTreeMap<String, String>,
) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        parameters,
        input_digests,
    }
}

fn face_budget() -> Result<u64, Failure> {
    match std::env::var("TVB_FACE_BUDGET") {
        Ok(text) => text
            .parse()
            .map_err(|_| Failure::usage(format!("TVB_FACE_BUDGET={text:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_FACE_BUDGET),
    }
}

fn time_budget() -> Result<Duration, Failure> {
    match std::env::var("TVB_TIME_BUDGET_SECS") {
        Ok(text) => text.parse().map(Duration::from_secs).map_err(|_| {
            Failure::usage(format!("TVB_TIME_BUDGET_SECS={text:?} is not an integer"))
        }),
        Err(_) => Ok(Duration::from_secs(60)),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
enum Agreement {
    Agree,
    Disagree,
    Degenerate,
}

impl Agreement {
    fn name(&self) -> &'static str {
        match self {
            Agreement::Agree => "agree",
            Agreement::Disagree => "disagree",
            Agreement::Degenerate => "degenerate",
        }
    }
}

#[derive(Serialize)]
struct ChessboardReport {
    m: u32,
    n: u32,
    dim: i64,
    f_vector: Vec<u64>,
    euler_characteristic: i64,
    connectivity: ConnectivityEstimate,
    formula: i64,
    agreement: Agreement,
}

fn cmd_chessboard(m: u32, n: u32, coeff: &[String]) -> Result<Outcome, Failure> {
    if m == 0 || n == 0 {
        return Err(Failure::usage(format!(
            "chessboard sides must be positive, got {m} x {n}"
        )));
    }
    let budget = face_budget()?;
    let complex = SimplicialComplex::chessboard_with_budget(m, n, budget).map_err(|e| match e {
        ComplexError::FaceBudgetExceeded { .. } => Failure::budget(e.to_string()),
        ComplexError::EmptyChessboardSide { .. } => Failure::usage(e.to_string()),
    })?;
    let systems: Vec<Coefficients> = if coeff.is_empty() {
        default_coefficients_with_budget(&complex, homology::DEFAULT_SNF_COLUMN_BUDGET)
    } else {
        coeff
            .iter()
            .map(|t| homology::parse_coefficients(t).map_err(Failure::usage))
            .collect::<Result<_, _>>()?
    };
    let connectivity =
        homological_connectivity(&complex, &systems).map_err(|e| Failure::usage(e.to_string()))?;
    let formula = tvb_core::criterion::chessboard_connectivity_formula(u64::from(m), u64::from(n));
    let agreement = match connectivity.hconn {
        Hconn::AllVanishing => Agreement::Degenerate,
        Hconn::Value(h) if h == formula => Agreement::Agree,
        Hconn::Value(_) => Agreement::Disagree,
    };
    let code = match agreement {
        Agreement::Disagree => EXIT_NEGATIVE,
        _ => EXIT_OK,
    };
    let hconn_text = match connectivity.hconn {
        Hconn::Value(h) => h.to_string(),
        Hconn::AllVanishing => "all-vanishing".to_string(),
    };
    let report = ChessboardReport {
        m,
        n,
        dim: complex.dim(),
        f_vector: complex.f_vector(),
        euler_characteristic: homology::euler_characteristic(&complex),
        connectivity,
        formula,
        agreement,
    };
    let summary = format!(
        "chessboard {m}x{n}: dim {}, f-vector {:?}; hconn {}; formula {}; agreement {}",
        report.dim,
        report.f_vector,
        hconn_text,
        formula,
        report.agreement.name(),
    );
    Ok(Outcome {
        manifest: manifest(
            "chessboard",
            serde_json::json!({
                "m": m,
                "n": n,
                "coefficients": report.connectivity.coefficients_tried,
                "face_budget": budget,
            }),
            BTreeMap::new(),
        ),
        report: serde_json::to_value(&report).expect("report serializes"),
        summary,
        code,
    })
}

fn cmd_criterion(d: u64, r: u64, cards: &[u64]) -> Result<Outcome, Failure> {
    let input =
        CriterionInput::new(d, r, cards.to_vec()).map_err(|e| Failure::usage(e.to_string()))?;
    let report: CriterionReport =
        guarantee_criterion(&input).map_err(|e| Failure::usage(e.to_string()))?;
    let code = if report.guaranteed {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    let summary = format!(
        "criterion d={d} r={r} cards {:?}: {} (tag {}); join bound {} vs required {}; sphere index {}",
        cards,
        if report.guaranteed { "guaranteed" } else { "not guaranteed" },
        report.theorem_tag,
        report.join_conn_lower,
        report.required_bound,
        report.sphere_index,
    );
    Ok(Outcome {
        manifest: manifest(
            "criterion",
            serde_json::json!({ "d": d, "r": r, "cards": cards }),
            BTreeMap::new(),
        ),
        report: serde_json::to_value(&report).expect("report serializes"),
        summary,
        code,
    })
}

fn campaign_exit(report: &VerificationReport) -> i32 {
    if !report.failures.is_empty() {
        EXIT_NEGATIVE
    } else if !report.timeouts.is_empty() {
        EXIT_BUDGET
    } else {
        EXIT_OK
    }
}

fn cmd_verify(
    theorem: &str,
    d: u64,
    r: u64,
    cards: &[usize],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Outcome, Failure> {
    let family = TheoremFamily::parse(theorem).ok_or_else(|| {
        Failure::usage(format!(
            "unknown theorem {theorem:?}; expected zv, zv-relaxed, zv-flex, optimal, bl or tverberg"
        ))
    })?;
    let options = CampaignOptions {
        workers,
        trial_timeout: time_budget()?,
    };
    let report = verify_theorem_instance(family, d, r, cards, trials, seed, &options)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let code = campaign_exit(&report);
    let summary = format!(
        "verify {} d={d} r={r} cards {:?}: found {}/{} (failures {}, timeouts {}) in {} ms",
        family.name(),
        cards,
        report.found,
        report.instances,
        report.failures.len(),
        report.timeouts.len(),
        report.elapsed_ms,
    );
    Ok(Outcome {
        manifest: manifest(
            "verify",
            serde_json::json!({
                "theorem": family.name(),
                "d": d,
                "r": r,
                "cards": cards,
                "trials": trials,
                "seed": seed,
                "workers": workers,
                "time_budget_secs": options.trial_timeout.as_secs(),
            }),
            BTreeMap::new(),
        ),
        report: serde_json::to_value(&report).expect("report serializes"),
        summary,
        code,
    })
}

fn cmd_hunt(
    d: u64,
    r: u64,
    cards: &[usize],
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<Outcome, Failure> {
    let options = CampaignOptions {
        workers,
        trial_timeout: time_budget()?,
    };
    let report = hunt_counterexample(d, r, cards, trials, seed, &options)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let summary = format!(
        "hunt d={d} r={r} cards {:?}: found {}/{} (failure configurations recorded: {}, timeouts {})",
        cards,
        report.found,
        report.instances,
        report.failures.len(),
        report.timeouts.len(),
    );
    Ok(Outcome {
        manifest: manifest(
            "hunt",
            serde_json::json!({
                "d": d,
                "r": r,
                "cards": cards,
                "trials": trials,
                "seed": seed,
                "workers": workers,
                "time_budget_secs": options.trial_timeout.as_secs(),
            }),
            BTreeMap::new(),
        ),
        report: serde_json::to_value(&report).expect("report serializes"),
        summary,
        code: EXIT_OK,
    })
}

#[derive(Serialize)]
struct FindReport {
    found: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    partition: Option<RainbowPartition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<tvb_core::geometry::TverbergWitness>,
    timed_out: bool,
}

fn cmd_find(path: &PathBuf, r: u64, uncolored: bool, workers: usize) -> Result<Outcome, Failure> {
    let mut text = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let digest: String = Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    let config: ColoredConfiguration = serde_json::from_str(&text).map_err(|e| {
        Failure::usage(format!(
            "{}:{}:{}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    let config = if uncolored {
        let singletons = (0..config.num_points()).map(|i| vec![i]).collect();
        ColoredConfiguration::new(config.dimension(), config.points().to_vec(), singletons)
            .expect("singleton classes always partition")
    } else {
        config
    };
    let options = SearchOptions {
        workers,
        deadline: Some(Instant::now() + time_budget()?),
    };
    let outcome = find_colored_tverberg_with(&config, r, &options)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let (report, summary, code) = match outcome {
        SearchOutcome::Found(partition, witness) => {
            let faces: Vec<Vec<usize>> = partition
                .faces
                .iter()
                .map(|f| f.vertex_indices.clone())
                .collect();
            let common: Vec<String> = witness
                .common_point
                .coords()
                .iter()
                .map(format_rational)
                .collect();
            let summary = format!(
                "find: partition {faces:?} with common point [{}]",
                common.join(", ")
            );
            (
                FindReport {
                    found: true,
                    partition: Some(partition),
                    witness: Some(witness),
                    timed_out: false,
                },
                summary,
                EXIT_OK,
            )
        }
        SearchOutcome::Exhausted => (
            FindReport {
                found: false,
                partition: None,
                witness: None,
                timed_out: false,
            },
            "find: none".to_string(),
            EXIT_NEGATIVE,
        ),
        SearchOutcome::TimedOut => (
            FindReport {
                found: false,
                partition: None,
                witness: None,
                timed_out: true,
            },
            "find: timed out".to_string(),
            EXIT_BUDGET,
        ),
    };
    let mut digests = BTreeMap::new();
    digests.insert(path.display().to_string(), digest);
    Ok(Outcome {
        manifest: manifest(
            "find",
            serde_json::json!({
                "config": path.display().to_string(),
                "r": r,
                "uncolored": uncolored,
                "workers": workers,
            }),
            digests,
        ),
        report: serde_json::to_value(&report).expect("report serializes"),
        summary,
        code,
    })
}
