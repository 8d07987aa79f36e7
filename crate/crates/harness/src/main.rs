use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relayopt_core::{Allocation, Method};
use relayopt_harness::{
    compare, convergence, landscape, load_scenario, run_method, verify, Execution, HarnessError,
    LandscapeSpec, Result, Scenario, SweepParam, SweepSpec, Table,
};

/// Place a UAV relay and split its blocklength budget between the two hops.
#[derive(Parser)]
#[command(name = "relayopt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario file; the bundled reference scenario when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Base RNG seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the CSV here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver and print its solution.
    Solve {
        #[arg(long, default_value = "joint", value_parser = parse_method)]
        method: Method,
        /// Record wall time.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Grid search over every split and hover position.
    Exhaustive {
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate g, g' and g'' along the hover axis for a fixed split.
    Landscape {
        /// Defaults to floor(M / 2).
        #[arg(long)]
        m1: Option<u32>,
        /// Defaults to M - m1.
        #[arg(long)]
        m2: Option<u32>,
        #[arg(long, default_value_t = 0.0)]
        x_min: f64,
        /// Defaults to D.
        #[arg(long)]
        x_max: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Objective per iteration of the joint solver at several altitudes.
    Convergence {
        #[arg(long, value_delimiter = ',', default_values_t = [100.0, 120.0, 140.0])]
        heights: Vec<f64>,
        #[arg(long)]
        serial: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run several methods over a parameter sweep.
    Compare {
        /// One of H, M, L, P1, P2, D.
        #[arg(long, default_value = "M")]
        param: String,
        /// Strictly increasing; defaults to 60,70,...,140 for M.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[arg(long, value_delimiter = ',', value_parser = parse_method)]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 1)]
        repetitions: u32,
        /// Record wall time (makes the output run-dependent).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        serial: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Check derivatives, convexity and Q-function identities.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse()
}

fn scenario(common: &Common) -> Result<Scenario> {
    match &common.config {
        Some(path) => load_scenario(path),
        None => Ok(Scenario::reference()),
    }
}

fn emit(table: &Table, common: &Common) -> Result<()> {
    match &common.out {
        Some(path) => table.write(path),
        None => print_stdout(&table.to_csv()),
    }
}

/// Write to stdout, treating a closed pipe (`relayopt ... | head`) as success.
fn print_stdout(text: &str) -> Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(HarnessError::Io {
            path: "<stdout>".into(),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn execution(serial: bool) -> Execution {
    if serial {
        Execution::Serial
    } else {
        Execution::Parallel
    }
}

fn solve_and_report(method: Method, timing: bool, common: &Common) -> Result<()> {
    let record = run_method(&scenario(common)?, method, common.seed, timing)?;
    print_stdout(&record.summary())?;
    if let Some(path) = &common.out {
        record.table().write(path)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            method,
            timing,
            common,
        } => solve_and_report(method, timing, &common),
        Command::Exhaustive { timing, common } => {
            solve_and_report(Method::Exhaustive, timing, &common)
        }
        Command::Landscape {
            m1,
            m2,
            x_min,
            x_max,
            step,
            common,
        } => {
            let scn = scenario(&common)?;
            let mut spec = LandscapeSpec::default_for(&scn);
            let total = scn.params.total_blocklength;
            let m1 = m1.unwrap_or(spec.allocation.m1);
            let m2 = m2.unwrap_or(total.saturating_sub(m1));
            spec.allocation = Allocation { m1, m2 };
            spec.x_min = x_min;
            spec.x_max = x_max.unwrap_or(spec.x_max);
            spec.step = step;
            emit(&landscape(&scn, &spec)?, &common)
        }
        Command::Convergence {
            heights,
            serial,
            common,
        } => {
            let table = convergence(
                &scenario(&common)?,
                &heights,
                common.seed,
                execution(serial),
            )?;
            emit(&table, &common)
        }
        Command::Compare {
            param,
            values,
            methods,
            repetitions,
            timing,
            serial,
            common,
        } => {
            let defaults = SweepSpec::default();
            let param: SweepParam = param.parse()?;
            if values.is_empty() && param != SweepParam::M {
                return Err(HarnessError::Usage(format!(
                    "--values is required when sweeping {param}"
                )));
            }
            let sweep = SweepSpec {
                param,
                values: if values.is_empty() {
                    defaults.values
                } else {
                    values
                },
                methods: if methods.is_empty() {
                    defaults.methods
                } else {
                    methods
                },
                repetitions,
            };
            let table = compare(
                &scenario(&common)?,
                &sweep,
                common.seed,
                execution(serial),
                timing,
            )?;
            emit(&table, &common)
        }
        Command::Verify { common } => {
            let report = verify(&scenario(&common)?)?;
            if !report.passed() {
                return Err(HarnessError::Verify(report));
            }
            print_stdout(&report.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
