//! `unitforge`: every computation as a named scenario printing JSON.
//!
//! Exit status is 0 when every embedded verification passes, 1 when one
//! fails or the computation errors, and 2 for usage errors.

mod commands;
mod reproduce;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand};

use scenario::{CliError, Scenario};

#[derive(Parser, Debug)]
#[command(name = "unitforge", version, about = "Totally positive units, square classes, lattices and heights")]
struct Cli {
    /// Seed for randomized scenarios.
    #[arg(long, global = true, default_value_t = 20)]
    seed: u64,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FieldForm {
    /// `Q`, `Q(sqrt(d))` or `Q(sqrt(d1), sqrt(d2))`.
    #[arg(long, default_value = "Q")]
    field: String,
    /// `I<n>`, `diag(a, b, ...)` or a quadratic polynomial in x1, x2, ...
    #[arg(long)]
    form: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fundamental unit of Q(sqrt(D)).
    FundUnit {
        #[arg(long = "D")]
        d: i128,
    },
    /// Squarefree integer generating the rational square class of the unit.
    Delta {
        #[arg(long = "D")]
        d: i128,
    },
    /// The equivalent conditions on units of Q(sqrt(D)), computed separately.
    PellReport {
        #[arg(long = "D")]
        d: i128,
    },
    /// GF(2) rank of the sign map on units.
    SigRank {
        #[arg(long = "D")]
        d: i128,
    },
    /// `e * (conj(e) + 1)^2 = Tr(e + 1)` for a norm-one unit (default: the fundamental unit).
    Lemma51 {
        #[arg(long = "D")]
        d: i128,
        #[arg(long)]
        elem: Option<String>,
    },
    /// Square root in a biquadratic field.
    BiquadSqrt {
        #[arg(long)]
        field: String,
        #[arg(long)]
        elem: String,
    },
    /// Whether a totally positive unit lies in K^2 Q^x.
    Cor63 {
        #[arg(long)]
        field: String,
        #[arg(long)]
        elem: String,
    },
    /// The unit mu of the family indexed by n = 1 mod 12.
    Prop65 {
        #[arg(long)]
        n: i64,
    },
    /// Whether a rational is a square in a multiquadratic field.
    Kummer {
        #[arg(long)]
        target: String,
        /// Comma-separated radicands.
        #[arg(long, conflicts_with = "all_squarefree", required_unless_present = "all_squarefree")]
        gens: Option<String>,
        /// Use the compositum of all real quadratic fields.
        #[arg(long)]
        all_squarefree: bool,
    },
    /// Units 2n + sqrt(4n^2 - 1) with pairwise distinct square classes.
    Family53 {
        #[arg(long)]
        m: usize,
        /// Also emit and re-verify a certificate.
        #[arg(long)]
        certificate: bool,
    },
    /// Fields Q(sqrt(p q)) for consecutive primes 3 mod 4.
    Family54 {
        /// Comma-separated primes.
        #[arg(long, conflicts_with = "count", required_unless_present = "count")]
        primes: Option<String>,
        /// Number of fields, using the first 2*count primes 3 mod 4.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Greedy linearly disjoint selection from the mu family.
    GreedySelect {
        #[arg(long)]
        m: usize,
        /// Number of admissible n to draw candidates from.
        #[arg(long, default_value_t = 0)]
        candidates: usize,
        /// Subfield index (1, 2 or 3) with non-square relative norm.
        #[arg(long, default_value_t = 2)]
        subfield: usize,
    },
    /// Certificate of m distinct totally positive unit classes over all real quadratic fields.
    Thm72Cert {
        #[arg(long, required_unless_present = "verify")]
        m: Option<usize>,
        /// Verify a certificate file instead of producing one.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Value of a form at a vector.
    LatticeEval {
        #[command(flatten)]
        lattice: FieldForm,
        #[arg(long)]
        vector: String,
    },
    /// Split off a vector whose value is a unit.
    LatticeSplit {
        #[command(flatten)]
        lattice: FieldForm,
        #[arg(long)]
        vector: String,
    },
    /// Represent and split off units one after another.
    RankBound {
        #[command(flatten)]
        lattice: FieldForm,
        /// Comma-separated totally positive units.
        #[arg(long)]
        units: String,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// The diagonal lattice of subset products of units over Q(sqrt(D)).
    #[command(name = "universal-2n")]
    Universal2n {
        #[arg(long = "D")]
        d: i128,
        /// Comma-separated units (default: the fundamental unit, n times).
        #[arg(long)]
        units: Option<String>,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Search for a representation by a diagonal form.
    Represent {
        #[command(flatten)]
        lattice: FieldForm,
        #[arg(long)]
        target: String,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// House and Weil height.
    Heights {
        #[arg(long, default_value = "Q")]
        field: String,
        /// Comma-separated algebraic integers.
        #[arg(long, default_value = "")]
        elems: String,
        /// Also check this many random integers of a quadratic field.
        #[arg(long, default_value_t = 0)]
        random: usize,
    },
    /// Totally positive integers of Q(sqrt(D)) with house below r.
    Enumerate {
        #[arg(long = "D")]
        d: i128,
        #[arg(long)]
        r: String,
    },
    /// Counts of totally positive integers with house below r across fields.
    Profile {
        /// Comma-separated radicands.
        #[arg(long)]
        ds: String,
        #[arg(long)]
        r: String,
        /// Also write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Shift-and-represent descent for a diagonal form.
    Descent {
        #[command(flatten)]
        lattice: FieldForm,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 20)]
        max_iter: usize,
    },
    /// Run every reference example and compare exactly.
    ReproducePaper,
}

fn run(cli: &Cli) -> Result<Scenario, CliError> {
    use commands::*;
    match &cli.command {
        Command::FundUnit { d } => fund_unit(*d),
        Command::Delta { d } => delta(*d),
        Command::PellReport { d } => pell(*d),
        Command::SigRank { d } => sig_rank(*d),
        Command::Lemma51 { d, elem } => lemma51(*d, elem.as_deref()),
        Command::BiquadSqrt { field, elem } => biquad_sqrt(field, elem),
        Command::Cor63 { field, elem } => cor63(field, elem),
        Command::Prop65 { n } => prop65(*n),
        Command::Kummer {
            target,
            gens,
            all_squarefree,
        } => kummer(target, gens.as_deref(), *all_squarefree),
        Command::Family53 { m, certificate } => family53(*m, *certificate),
        Command::Family54 { primes, count } => family54(primes.as_deref(), *count),
        Command::GreedySelect { m, candidates, subfield } => greedy_select(*m, *candidates, *subfield),
        Command::Thm72Cert { m, verify } => thm72_cert(*m, verify.as_deref()),
        Command::LatticeEval { lattice, vector } => lattice_eval(&lattice.field, &lattice.form, vector),
        Command::LatticeSplit { lattice, vector } => lattice_split(&lattice.field, &lattice.form, vector),
        Command::RankBound { lattice, units, budget } => rank_bound(&lattice.field, &lattice.form, units, *budget),
        Command::Universal2n { d, units, n } => universal_2n(*d, units.as_deref(), *n),
        Command::Represent { lattice, target, budget } => represent(&lattice.field, &lattice.form, target, *budget),
        Command::Heights { field, elems, random } => heights(field, elems, *random, cli.seed),
        Command::Enumerate { d, r } => enumerate(*d, r),
        Command::Profile { ds, r, csv } => profile(ds, r, csv.as_deref()),
        Command::Descent {
            lattice,
            alpha,
            max_iter,
        } => descent(&lattice.field, &lattice.form, alpha, *max_iter),
        Command::ReproducePaper => reproduce::reproduce_paper(),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let name = matches.subcommand_name().unwrap_or_default().to_string();
    let start = Instant::now();
    let scenario = match run(&cli) {
        Ok(s) => s,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(e) => Scenario::failed(&e.to_string()),
    };
    let result = scenario.finish(&name, cli.seed, start.elapsed());
    let passed = result["all_checks_passed"].as_bool().unwrap_or(false);
    let text = serde_json::to_string_pretty(&result).expect("JSON values serialize");
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    scenario::summarize(&result);
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
