//! Command-line driver for the BDD census: exact counts and size
//! distributions, unranking and ranking, reproducible uniform sampling,
//! exhaustive enumeration, and the brute-force oracle cross-check.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 budget
//! exceeded. All counts and ranks are printed as exact decimals.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use bdd_census::counting::{decimal_proportion, Distribution};
use bdd_census::{dot, oracle, text, unranking, Bdd, Counter, Error};

#[derive(Parser)]
#[command(
    name = "bdd-census",
    version,
    about = "Count, rank, unrank, uniformly sample and exhaustively enumerate \
             ROBDDs of a given number of variables and size"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    /// The line-oriented BDD text format.
    #[default]
    Text,
    /// Graphviz, with the spine classification colored.
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Print N(n,k), or the whole size distribution for k variables.
    #[command(group(ArgGroup::new("selector").required(true).args(["size", "all_sizes"])))]
    Count {
        /// Number of variables k (the root index).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        vars: u32,
        /// BDD size n (decision nodes plus the two sinks).
        #[arg(long)]
        size: Option<u32>,
        /// Emit the full distribution as CSV (`size,count`).
        #[arg(long)]
        all_sizes: bool,
        /// Emit a JSON summary instead of CSV (with `--all-sizes`).
        #[arg(long, requires = "all_sizes")]
        json: bool,
    },
    /// Build the BDD at a given rank under the canonical order.
    Unrank {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        vars: u32,
        #[arg(long)]
        size: u32,
        /// Rank in [0, N(n,k)), decimal, arbitrary length.
        #[arg(long, value_parser = parse_biguint)]
        rank: BigUint,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Write to a file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the rank of a BDD read from a text-format file.
    Rank {
        /// Input file, or `-` for standard input.
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Draw BDDs uniformly at random, reproducibly for a fixed seed.
    Sample {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        vars: u32,
        #[arg(long)]
        size: u32,
        /// RNG seed; equal seeds give byte-identical output.
        #[arg(long)]
        seed: u64,
        /// Number of draws.
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Directory for one `sample-<i>` file per draw (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stream every BDD of the class in canonical order.
    Enumerate {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        vars: u32,
        #[arg(long)]
        size: u32,
        /// Refuse to stream classes larger than this.
        #[arg(long, default_value_t = unranking::DEFAULT_STREAM_GUARD)]
        guard: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Exhaustive brute-force census (k ≤ 4); with `--check`, diff it
    /// against the counting recursion.
    Oracle {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        vars: u32,
        #[arg(long)]
        check: bool,
    },
}

fn parse_biguint(value: &str) -> Result<BigUint, String> {
    BigUint::from_str(value).map_err(|_| format!("`{value}` is not a decimal integer"))
}

enum CliError {
    Census(Error),
    Io(std::io::Error),
    CheckFailed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError::Census(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Census(e)) => {
            eprintln!("error: {e}");
            if e.is_budget() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::CheckFailed(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

/// The counting recursion is only exposed up to the distribution budget;
/// anything larger is a budget violation, not a hang.
fn check_budget(counter: &Counter, vars: u32) -> Result<(), Error> {
    if vars > counter.max_vars() {
        return Err(Error::VarsOutOfRange {
            vars,
            limit: counter.max_vars(),
        });
    }
    Ok(())
}

fn render(b: &Bdd, format: Format) -> String {
    match format {
        Format::Text => text::emit(b),
        Format::Dot => dot::to_dot(b),
    }
}

fn extension(format: Format) -> &'static str {
    match format {
        Format::Text => "bdd",
        Format::Dot => "dot",
    }
}

fn distribution_csv(rows: &[(u32, BigUint)]) -> String {
    let mut out = String::from("size,count\n");
    for (size, count) in rows {
        out.push_str(&format!("{size},{count}\n"));
    }
    out
}

fn distribution_json(distribution: &Distribution) -> serde_json::Value {
    let total = distribution.total();
    let sizes: Vec<serde_json::Value> = distribution
        .rows()
        .iter()
        .map(|(size, count)| {
            serde_json::json!({
                "size": size,
                "count": count.to_string(),
                "proportion": decimal_proportion(count, &total, 12),
            })
        })
        .collect();
    serde_json::json!({
        "vars": distribution.vars(),
        "total": total.to_string(),
        "min_size": distribution.min_size(),
        "max_size": distribution.max_size(),
        "mode": distribution.mode(),
        "sizes": sizes,
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    let counter = Counter::new();
    match cli.command {
        Command::Count {
            vars,
            size,
            all_sizes: _,
            json,
        } => {
            check_budget(&counter, vars)?;
            match size {
                Some(size) => println!("{}", counter.num_bdds(size, vars)?),
                None => {
                    let distribution = counter.size_distribution(vars)?;
                    if json {
                        println!("{}", distribution_json(&distribution));
                    } else {
                        print!("{}", distribution_csv(distribution.rows()));
                    }
                }
            }
        }
        Command::Unrank {
            vars,
            size,
            rank,
            format,
            out,
        } => {
            check_budget(&counter, vars)?;
            let b = unranking::unrank(&counter, size, vars, &rank)?;
            let rendered = render(&b, format);
            match out {
                Some(path) => fs::write(path, rendered)?,
                None => print!("{rendered}"),
            }
        }
        Command::Rank { input } => {
            let mut contents = String::new();
            if input.as_os_str() == "-" {
                std::io::stdin().read_to_string(&mut contents)?;
            } else {
                contents = fs::read_to_string(&input)?;
            }
            let b = text::parse(&contents)?;
            check_budget(&counter, b.vars().max(1))?;
            println!("{}", unranking::rank(&counter, &b)?);
        }
        Command::Sample {
            vars,
            size,
            seed,
            count,
            format,
            out,
        } => {
            check_budget(&counter, vars)?;
            let mut sampler = unranking::Sampler::new(&counter, seed);
            if let Some(dir) = &out {
                fs::create_dir_all(dir)?;
            }
            let stdout = std::io::stdout();
            for i in 0..count {
                let b = sampler.sample(size, vars)?;
                let rendered = render(&b, format);
                match &out {
                    Some(dir) => {
                        fs::write(dir.join(format!("sample-{i}.{}", extension(format))), rendered)?
                    }
                    None => stdout.lock().write_all(rendered.as_bytes())?,
                }
            }
        }
        Command::Enumerate {
            vars,
            size,
            guard,
            format,
        } => {
            check_budget(&counter, vars)?;
            let stdout = std::io::stdout();
            let mut handle = stdout.lock();
            for b in unranking::enumerate_all(&counter, size, vars, guard)? {
                handle.write_all(render(&b, format).as_bytes())?;
            }
        }
        Command::Oracle { vars, check } => {
            let swept = oracle::oracle_distribution(vars)?;
            if check {
                check_budget(&counter, vars)?;
                let counted = counter.size_distribution(vars)?;
                if counted.rows() != &swept[..] {
                    let mut message =
                        String::from("counting and oracle distributions differ:\n");
                    message.push_str(&format!(
                        "  counter: {}\n  oracle:  {}",
                        distribution_csv(counted.rows()).replace('\n', " "),
                        distribution_csv(&swept).replace('\n', " ")
                    ));
                    return Err(CliError::CheckFailed(message));
                }
                let total: BigUint = swept.iter().map(|(_, c)| c).sum();
                println!("{total} functions, all sizes match");
            } else {
                print!("{}", distribution_csv(&swept));
            }
        }
    }
    Ok(())
}
