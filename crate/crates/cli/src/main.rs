use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qxot_core::reports::format::{write_rows, Format, Meta};
use qxot_core::reports::frequency::{simulate, Protocol, Scenario, Simulation};
use qxot_core::reports::sweep::{sweep, Plane};
use qxot_core::reports::tradeoff::{tradeoff_rows, tradeoff_summary};
use qxot_core::reports::verify::{all_passed, run_verify, VerifyOptions};
use qxot_core::Error;

#[derive(Parser, Debug)]
#[command(name = "qxot", version, about = "Symmetric-state XOR oblivious transfer: cheating analysis and simulation")]
struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every invariant check and report residuals.
    Verify {
        /// Replace the elimination operator weight (fault injection).
        #[arg(long, hide = true)]
        tamper_elimination_weight: Option<f64>,
    },
    /// Evaluate the cheating formulas on a grid.
    Sweep {
        #[arg(long, value_enum, default_value_t = PlaneArg::ReFG)]
        plane: PlaneArg,
        /// Points per axis; 201 for planes and 51 for the cube by default.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Monte Carlo frequency table against exact Born probabilities.
    Simulate {
        #[arg(long, value_enum, default_value_t = ProtocolArg::Direct)]
        protocol: ProtocolArg,
        #[arg(long, value_enum, default_value_t = PartyArg::Honest)]
        alice: PartyArg,
        #[arg(long, value_enum, default_value_t = PartyArg::Honest)]
        bob: PartyArg,
        #[arg(long, default_value_t = 600_000)]
        rounds: u64,
        /// Fraction of positions the receiver tests; enables the testing
        /// subprotocol and the entangled sender strategy.
        #[arg(long)]
        test_fraction: Option<f64>,
    },
    /// Classical cheating tradeoff line and the quantum point.
    Tradeoff {
        #[arg(long, default_value_t = 11)]
        s_points: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlaneArg {
    #[value(name = "reF-g")]
    ReFG,
    #[value(name = "imF-g")]
    ImFG,
    #[value(name = "3d")]
    ThreeD,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProtocolArg {
    Direct,
    Reversed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PartyArg {
    Honest,
    Cheat,
}

/// Exit codes.
const OK: u8 = 0;
const VERIFY_FAILED: u8 = 1;
const USAGE: u8 = 2;

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfRange(_) | Error::InvalidStrategy { .. } | Error::Parse(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
    }
}

fn finish(mut out: Box<dyn Write>) -> Result<(), Failure> {
    out.flush().map_err(|e| Failure::Runtime(format!("write failed: {e}")))
}

fn print_simulation_summary(sim: &Simulation) {
    let s = &sim.summary;
    let h = &s.headline;
    eprintln!(
        "{} {}: alice {}, bob {}, seed {}",
        s.protocol, s.rounds, s.alice, s.bob, s.seed
    );
    eprintln!(
        "{} success ({}): {}/{} = {:.6}, expected {:.6}, deviation {:.2} sigma",
        h.party, h.quantity, h.successes, h.trials, h.frequency, h.expected, h.deviation_sigmas
    );
    eprintln!(
        "table: max deviation {:.2} sigma, all within 5 sigma: {}",
        s.max_deviation_sigmas, s.table_within_limit
    );
    if let Some(t) = &s.testing {
        eprintln!(
            "testing: fraction {}, {} tested, {} mismatches, aborted {}",
            t.test_fraction, t.tested, t.mismatches, t.aborted
        );
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let format = match cli.format {
        OutFormat::Csv => Format::Csv,
        OutFormat::Json => Format::Json,
    };
    match cli.command {
        Command::Verify { tamper_elimination_weight } => {
            let mut opts = VerifyOptions {
                seed: cli.seed,
                ..VerifyOptions::default()
            };
            if let Some(w) = tamper_elimination_weight {
                opts.elimination_weight = w;
            }
            let checks = run_verify(&opts);
            let passed = all_passed(&checks);
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            let summary = serde_json::json!({
                "checks": checks.len(),
                "passed": checks.len() - failed.len(),
                "failed": failed,
            });
            let mut out = open_output(&cli.out)?;
            write_rows(&mut out, format, &Meta::new("verify", cli.seed), &checks, Some(&summary))?;
            finish(out)?;
            for name in &failed {
                eprintln!("FAILED: {name}");
            }
            eprintln!("{}/{} checks passed", checks.len() - failed.len(), checks.len());
            Ok(if passed { OK } else { VERIFY_FAILED })
        }
        Command::Sweep { plane, grid } => {
            let plane = match plane {
                PlaneArg::ReFG => Plane::ReFG,
                PlaneArg::ImFG => Plane::ImFG,
                PlaneArg::ThreeD => Plane::ThreeD,
            };
            let rows = sweep(plane, grid.unwrap_or_else(|| plane.default_grid()))?;
            let mut out = open_output(&cli.out)?;
            write_rows(&mut out, format, &Meta::new("sweep", cli.seed), &rows, None)?;
            finish(out)?;
            Ok(OK)
        }
        Command::Simulate {
            protocol,
            alice,
            bob,
            rounds,
            test_fraction,
        } => {
            let protocol = match protocol {
                ProtocolArg::Direct => Protocol::Direct,
                ProtocolArg::Reversed => Protocol::Reversed,
            };
            let scenario = Scenario::new(
                protocol,
                alice == PartyArg::Cheat,
                bob == PartyArg::Cheat,
                test_fraction,
            )?;
            let sim = simulate(&scenario, rounds, cli.seed)?;
            let summary = serde_json::to_value(&sim.summary).map_err(Error::from)?;
            let mut out = open_output(&cli.out)?;
            write_rows(
                &mut out,
                format,
                &Meta::new("simulate", cli.seed),
                &sim.table.flat(),
                Some(&summary),
            )?;
            finish(out)?;
            if format == Format::Csv {
                print_simulation_summary(&sim);
            }
            Ok(OK)
        }
        Command::Tradeoff { s_points } => {
            let rows = tradeoff_rows(s_points)?;
            let summary = serde_json::to_value(tradeoff_summary()).map_err(Error::from)?;
            let mut out = open_output(&cli.out)?;
            write_rows(&mut out, format, &Meta::new("tradeoff", cli.seed), &rows, Some(&summary))?;
            finish(out)?;
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(VERIFY_FAILED)
        }
    }
}
