use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use pw_lab::braid::{Partition, Variant};
use pw_lab::jacobian::{singular_type_from_orders, SingularType};
use pw_lab::report;

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Conn,
    Disc,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Conn => Variant::Conn,
            VariantArg::Disc => Variant::Disc,
        }
    }
}

/// Exact-arithmetic checks for the cohomology ring of rank-2 twisted Higgs
/// moduli: filtration comparison, hard Lefschetz, Jacobian strata and braid
/// monodromy invariants.
#[derive(Parser)]
#[command(name = "pw-lab", version)]
struct Cli {
    /// Output format for the report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the bigraded ring and print its dimension table.
    Ring {
        #[arg(long)]
        g: usize,
        #[arg(long = "degD")]
        deg_d: usize,
        /// Also print the rank-preserving extension dims.
        #[arg(long)]
        gl2: bool,
    },
    /// Bijectivity of cup-with-α powers between opposite weight stacks.
    Lefschetz {
        #[arg(long)]
        g: usize,
        #[arg(long = "degD")]
        deg_d: usize,
    },
    /// Full weight-vs-perverse filtration comparison suite.
    PwCheck {
        #[arg(long)]
        g: usize,
        #[arg(long = "degD")]
        deg_d: usize,
    },
    /// Betti numbers of a compactified Jacobian from singularity data.
    Jacobian {
        /// Geometric genus of the normalization.
        #[arg(long)]
        gtilde: Option<usize>,
        /// Comma-separated δ-invariants of the two-branch points.
        #[arg(long, value_delimiter = ',')]
        odd: Vec<usize>,
        /// Comma-separated δ-invariants of the unibranch points.
        #[arg(long, value_delimiter = ',')]
        even: Vec<usize>,
        /// Base-curve genus, used together with --orders.
        #[arg(long)]
        g: Option<usize>,
        /// Comma-separated local ramification orders a_i over the base.
        #[arg(long, value_delimiter = ',')]
        orders: Vec<usize>,
        /// Also print the truncated reading of the even Poincaré factor.
        #[arg(long)]
        printed_truncation: bool,
    },
    /// Monodromy-invariant exterior classes for one partition.
    Braid {
        #[arg(long)]
        g: usize,
        /// Comma-separated parts of the partition.
        #[arg(long, value_delimiter = ',')]
        partition: Vec<usize>,
        #[arg(long, value_enum, default_value_t = VariantArg::Conn)]
        variant: VariantArg,
    },
    /// Variant-part E-polynomial, dimension table and consistency verdicts.
    Sl2 {
        #[arg(long)]
        g: usize,
    },
    /// Run every verification family within the given bounds.
    VerifyAll {
        #[arg(long = "max-g")]
        max_g: usize,
        #[arg(long = "max-degD")]
        max_deg_d: usize,
        #[arg(long = "max-d")]
        max_d: usize,
    },
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var("PW_LAB_THREADS") {
        if let Ok(n) = raw.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn emit(format: Format, kind: &str, payload: Value) {
    let wrapped = report::envelope(kind, payload);
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&wrapped).expect("report serializes"))
        }
        Format::Csv => print!("{}", report::csv_from_value(&wrapped)),
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let (kind, payload, pass) = match cli.command {
        Cmd::Ring { g, deg_d, gl2 } => {
            let (payload, pass) = report::ring_payload(g, deg_d, gl2).map_err(|e| e.to_string())?;
            ("ring", payload, pass)
        }
        Cmd::Lefschetz { g, deg_d } => {
            let (payload, pass) = report::lefschetz_payload(g, deg_d).map_err(|e| e.to_string())?;
            ("lefschetz", payload, pass)
        }
        Cmd::PwCheck { g, deg_d } => {
            let (payload, pass) = report::pw_payload(g, deg_d).map_err(|e| e.to_string())?;
            ("pw-check", payload, pass)
        }
        Cmd::Jacobian { gtilde, odd, even, g, orders, printed_truncation } => {
            let st = match (gtilde, g) {
                (Some(gt), None) if orders.is_empty() => {
                    SingularType::new(odd, even, gt).map_err(|e| e.to_string())?
                }
                (None, Some(g)) if odd.is_empty() && even.is_empty() && !orders.is_empty() => {
                    singular_type_from_orders(g, &orders).map_err(|e| e.to_string())?
                }
                _ => {
                    return Err(
                        "pass either --gtilde with --odd/--even or --g with --orders".into()
                    )
                }
            };
            let (payload, pass) =
                report::jacobian_payload(&st, printed_truncation).map_err(|e| e.to_string())?;
            ("jacobian", payload, pass)
        }
        Cmd::Braid { g, partition, variant } => {
            let p = Partition::new(&partition).map_err(|e| e.to_string())?;
            let (payload, pass) =
                report::braid_payload(g, &p, variant.into()).map_err(|e| e.to_string())?;
            ("braid", payload, pass)
        }
        Cmd::Sl2 { g } => {
            let (payload, pass) = report::sl2_payload(g).map_err(|e| e.to_string())?;
            ("sl2", payload, pass)
        }
        Cmd::VerifyAll { max_g, max_deg_d, max_d } => {
            let summary = report::verify_all(max_g, max_deg_d, max_d);
            let (payload, pass) = report::summary_payload(&summary);
            ("verify-all", payload, pass)
        }
    };
    emit(cli.format, kind, payload);
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_thread_pool();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
