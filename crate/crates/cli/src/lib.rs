//! Command-line front end: argument definitions and the dispatcher used by
//! the `hardimer` binary.

pub mod number;
pub mod output;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;

use hardimer::asymptotics::{
    count_chdc, growth_curve, lyapunov_estimate, xi_spectrum, DEFAULT_SEED,
};
use hardimer::chdc::{census, census_entries};
use hardimer::recog::{builtin_rep_sb, builtin_rep_sr, builtin_rep_sum, LinRep};
use hardimer::series::{solve_rational, solve_recursive, TruncatedSeries};
use hardimer::transfer::{
    z_partial, Field, Method, TransferParams, ZnOptions, ZnReport, DEFAULT_MAX_LEVEL,
};
use hardimer::verify::run_suite;
use hardimer::{EvalPoint, Word};

pub use number::Number;
pub use output::{csv_string, emit_csv, fmt_f64};

/// Longest truncation accepted by `series`.
pub const MAX_SERIES_LEN: usize = 16;

#[derive(Debug, Parser)]
#[command(name = "hardimer", version, about = "Coloured hard-dimer enumeration")]
pub struct Cli {
    /// Write results to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Worker threads (results do not depend on it).
    #[arg(long, global = true, env = "HARDIMER_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_word(s: &str) -> Result<Word, String> {
    s.parse::<Word>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepChoice {
    Sb,
    Sr,
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesMode {
    Recursive,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Representation,
    BruteForce,
}

#[derive(Debug, clap::Args)]
pub struct PointArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub u: Number,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Number,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Number,
    /// Exact rational arithmetic instead of floating point.
    #[arg(long)]
    pub exact: bool,
    /// Skip words whose denominator vanishes instead of failing.
    #[arg(long)]
    pub skip_singular: bool,
    #[arg(long, value_enum, default_value = "representation")]
    pub method: MethodChoice,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Number of CHDCs on a word.
    Count {
        #[arg(value_parser = parse_word)]
        word: Word,
    },
    /// Census polynomial of a word, by enumeration.
    Census {
        #[arg(value_parser = parse_word)]
        word: Word,
        #[arg(long)]
        json: bool,
    },
    /// Coefficient of a word in a built-in representation, or the
    /// representation itself.
    Coeff {
        #[arg(value_parser = parse_word, required_unless_present = "dump_rep")]
        word: Option<Word>,
        #[arg(long, value_enum, default_value = "sum")]
        rep: RepChoice,
        /// Print the representation as JSON.
        #[arg(long)]
        dump_rep: bool,
    },
    /// Truncated tree series as JSON.
    Series {
        #[arg(long, value_enum)]
        mode: SeriesMode,
        #[arg(long)]
        len: usize,
        #[arg(long, value_enum, default_value = "sum")]
        which: RepChoice,
    },
    /// Level sums Z_1..Z_n as a JSON report.
    Zn {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        point: PointArgs,
        /// Damping exponent used for the partial sums.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: usize,
    },
    /// Damped partial sums as CSV (n, Z_n, partial_sum).
    Zpartial {
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        nmax: usize,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: usize,
    },
    /// Monte Carlo estimate of the almost-sure growth rate.
    Lyapunov {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Segments per trial for batch-means error bars.
        #[arg(long)]
        batches: Option<usize>,
    },
    /// Dominant eigenvalue and modulus gap of Xi.
    Spectrum {
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// (n, mean growth) as CSV.
    Growthcurve {
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 1)]
        step: usize,
    },
    /// Cross-checks every engine on all words up to a length.
    Verify {
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
}

/// Text to emit and whether the command succeeded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            success: true,
        }
    }
}

pub fn to_json<T: Serialize>(x: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(x)? + "\n")
}

pub fn rep_for(choice: RepChoice) -> LinRep {
    match choice {
        RepChoice::Sb => builtin_rep_sb(),
        RepChoice::Sr => builtin_rep_sr(),
        RepChoice::Sum => builtin_rep_sum(),
    }
}

pub fn series_for(mode: SeriesMode, len: usize, which: RepChoice) -> TruncatedSeries {
    let pair = match mode {
        SeriesMode::Recursive => solve_recursive(len),
        SeriesMode::Rational => solve_rational(len),
    };
    match which {
        RepChoice::Sb => pair.s_b,
        RepChoice::Sr => pair.s_r,
        RepChoice::Sum => pair.total(),
    }
}

/// Runs [`z_partial`] with the point read exactly or as floats.
pub fn transfer_report(
    point: &PointArgs,
    gamma: f64,
    n_max: usize,
    max_level: usize,
) -> anyhow::Result<ZnReport> {
    let opts = ZnOptions {
        method: match point.method {
            MethodChoice::Representation => Method::Representation,
            MethodChoice::BruteForce => Method::BruteForce,
        },
        skip_singular: point.skip_singular,
        max_level,
    };
    fn go<T: Field>(
        at: EvalPoint<T>,
        gamma: f64,
        n_max: usize,
        opts: &ZnOptions,
    ) -> anyhow::Result<ZnReport> {
        Ok(z_partial(
            &TransferParams {
                at,
                gamma_damp: gamma,
                n_max,
            },
            opts,
        )?)
    }
    if point.exact {
        let at: EvalPoint<BigRational> = EvalPoint::new(
            point.u.exact.clone(),
            point.v.exact.clone(),
            point.w.exact.clone(),
        );
        go(at, gamma, n_max, &opts)
    } else {
        go(
            EvalPoint::new(point.u.approx, point.v.approx, point.w.approx),
            gamma,
            n_max,
            &opts,
        )
    }
}

/// Executes one parsed command.
pub fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let text = match &cli.command {
        Command::Count { word } => format!("{}\n", count_chdc(word)?),
        Command::Census { word, json } => {
            let p = census(word)?;
            if *json {
                to_json(&census_entries(&p))?
            } else {
                format!("{p}\n")
            }
        }
        Command::Coeff {
            word,
            rep,
            dump_rep,
        } => {
            let r = rep_for(*rep);
            if *dump_rep {
                to_json(&r)?
            } else {
                let word = word.as_ref().expect("required unless dumping");
                format!("{}\n", r.coefficient(word)?)
            }
        }
        Command::Series { mode, len, which } => {
            if *len > MAX_SERIES_LEN {
                anyhow::bail!("--len {len} exceeds the limit {MAX_SERIES_LEN}");
            }
            to_json(&series_for(*mode, *len, *which))?
        }
        Command::Zn {
            n,
            point,
            gamma,
            max_level,
        } => to_json(&transfer_report(point, *gamma, *n, *max_level)?)?,
        Command::Zpartial {
            gamma,
            nmax,
            point,
            max_level,
        } => {
            let report = transfer_report(point, *gamma, *nmax, *max_level)?;
            let rows: Vec<Vec<String>> = report
                .levels
                .iter()
                .map(|l| vec![l.n.to_string(), fmt_f64(l.z_n), fmt_f64(l.partial_sum)])
                .collect();
            csv_string(&["n", "Z_n", "partial_sum"], &rows)?
        }
        Command::Lyapunov {
            n,
            trials,
            seed,
            batches,
        } => to_json(&lyapunov_estimate(*n, *trials, *seed, *batches)?)?,
        Command::Spectrum { tol } => to_json(&xi_spectrum(*tol)?)?,
        Command::Growthcurve { nmax, step } => {
            let rows: Vec<Vec<String>> = growth_curve(*nmax, *step)?
                .into_iter()
                .map(|(n, g)| vec![n.to_string(), fmt_f64(g)])
                .collect();
            csv_string(&["n", "mean_growth"], &rows)?
        }
        Command::Verify { max_len } => {
            if *max_len == 0 || *max_len > 16 {
                anyhow::bail!("--max-len must lie in 1..=16");
            }
            let checks = run_suite(*max_len)?;
            let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            let mut text = String::new();
            for c in &checks {
                text += &format!(
                    "{:<width$}  {:>8}  {}  {}\n",
                    c.name,
                    c.cases,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.detail
                );
            }
            return Ok(Outcome {
                text,
                success: checks.iter().all(|c| c.passed),
            });
        }
    };
    Ok(Outcome::ok(text))
}
