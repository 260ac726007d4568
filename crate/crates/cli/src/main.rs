//! memsim: trace-driven STT-RAM / DRAM memory subsystem simulator.
//!
//! Exit codes: 0 success, 1 usage error, 2 input validation error,
//! 3 internal assertion.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use memsim_core::controller::{AddrMapPolicy, AddressMap, SchedulerPolicy};
use memsim_core::device::DeviceParams;
use memsim_core::report::{self, RunConfig, TraceSource};
use memsim_core::trace::{generate, serialize_trace, SyntheticSpec, TracePattern};
use memsim_core::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "memsim",
    about = "Trace-driven STT-RAM / DRAM memory subsystem simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: CliCommand,
}

#[derive(Subcommand)]
enum CliCommand {
    /// Simulate one device over a trace and write its statistics report.
    Run(RunArgs),
    /// Run two devices on the identical trace and report the deltas.
    Compare(CompareArgs),
    /// Generate a synthetic trace file.
    GenTrace(GenTraceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SchedulerArg {
    Frfcfs,
    Fcfs,
}

impl From<SchedulerArg> for SchedulerPolicy {
    fn from(arg: SchedulerArg) -> Self {
        match arg {
            SchedulerArg::Frfcfs => SchedulerPolicy::FrFcfs,
            SchedulerArg::Fcfs => SchedulerPolicy::Fcfs,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AddrMapArg {
    Rorabaco,
    Robaraco,
}

impl From<AddrMapArg> for AddrMapPolicy {
    fn from(arg: AddrMapArg) -> Self {
        match arg {
            AddrMapArg::Rorabaco => AddrMapPolicy::RoRaBaCo,
            AddrMapArg::Robaraco => AddrMapPolicy::RoBaRaCo,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct RunArgs {
    /// Device config file.
    #[arg(long)]
    device: PathBuf,
    /// Trace file to replay.
    #[arg(long)]
    trace: PathBuf,
    #[arg(long, value_enum, default_value = "frfcfs")]
    scheduler: SchedulerArg,
    #[arg(long = "addr-map", value_enum, default_value = "rorabaco")]
    addr_map: AddrMapArg,
    /// Emit an energy snapshot every N cycles.
    #[arg(long = "snapshot-cycles")]
    snapshot_cycles: Option<u64>,
    /// Output file.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long = "device-a")]
    device_a: PathBuf,
    #[arg(long = "device-b")]
    device_b: PathBuf,
    /// Trace file replayed on both devices.
    #[arg(long)]
    trace: PathBuf,
    #[arg(long, value_enum, default_value = "frfcfs")]
    scheduler: SchedulerArg,
    #[arg(long = "addr-map", value_enum, default_value = "rorabaco")]
    addr_map: AddrMapArg,
    /// Output file (JSON).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenTraceArgs {
    #[arg(long, value_parser = parse_pattern)]
    pattern: TracePattern,
    /// Number of records.
    #[arg(long)]
    count: u64,
    /// Fraction of writes, in [0, 1].
    #[arg(long = "write-frac", default_value_t = 0.0)]
    write_frac: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Nanoseconds between records.
    #[arg(long = "inter-arrival-ns", default_value_t = 100)]
    inter_arrival_ns: u64,
    /// Device config providing the geometry; defaults to the shipped
    /// STT geometry (1 rank, 8 banks, 8192 rows, 16-byte bursts).
    #[arg(long)]
    device: Option<PathBuf>,
    #[arg(long = "addr-map", value_enum, default_value = "rorabaco")]
    addr_map: AddrMapArg,
    /// Output trace file.
    #[arg(long)]
    out: PathBuf,
}

fn parse_pattern(text: &str) -> Result<TracePattern, String> {
    TracePattern::from_name(text).ok_or_else(|| {
        format!("unknown pattern `{text}` (same-row, row-alternate, sequential, uniform-random)")
    })
}

// geometry used by gen-trace when no device config is given
const DEFAULT_GEOMETRY: &str = "\
[meta]
name = default_geometry
kind = STT
tck_ns = 1.5
burst_length = 8
device_width_bits = 16
[geometry]
ranks = 1
banks_per_rank = 8
rows_per_bank = 8192
columns_per_row = 1024
bytes_per_column = 2
[timing_ns]
tST = 380
tRCD = 15
tCL = 15
tCWL = 12
tRAS = 36
tRP = 15
tBURST = 6
tWR = 15
[current_ma]
IDD0 = 437
IDD2N = 32
IDD3N = 45
IDD4R = 150
IDD4W = 160
[voltage]
vdd = 1.2
";

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MEMSIM_LOG", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders its own message (including --help / --version)
            let _ = err.print();
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };

    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("memsim: {err}");
            if err.is_internal() {
                ExitCode::from(EXIT_INTERNAL)
            } else {
                ExitCode::from(EXIT_INPUT)
            }
        }
    }
}

fn dispatch(command: CliCommand) -> Result<(), Error> {
    match command {
        CliCommand::Run(args) => run(args),
        CliCommand::Compare(args) => compare(args),
        CliCommand::GenTrace(args) => gen_trace(args),
    }
}

fn run(args: RunArgs) -> Result<(), Error> {
    let cfg = RunConfig {
        device_config: args.device,
        trace: TraceSource::File(args.trace),
        scheduler: args.scheduler.into(),
        addr_map: args.addr_map.into(),
        snapshot_cycles: args.snapshot_cycles,
    };
    let report = report::run(&cfg)?;
    report.validate()?;
    let text = match args.format {
        FormatArg::Json => report.to_json(),
        FormatArg::Csv => report.to_csv(),
    };
    std::fs::write(&args.out, text)?;
    log::info!("report written to {}", args.out.display());
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), Error> {
    let base = RunConfig {
        device_config: args.device_a,
        trace: TraceSource::File(args.trace),
        scheduler: args.scheduler.into(),
        addr_map: args.addr_map.into(),
        snapshot_cycles: None,
    };
    let cfg_b = RunConfig {
        device_config: args.device_b,
        ..base.clone()
    };
    let comparison = report::compare(&base, &cfg_b)?;
    comparison.device_a.validate()?;
    comparison.device_b.validate()?;
    std::fs::write(&args.out, comparison.to_json())?;
    log::info!("comparison written to {}", args.out.display());
    Ok(())
}

fn gen_trace(args: GenTraceArgs) -> Result<(), Error> {
    let dev = match &args.device {
        Some(path) => DeviceParams::from_config_file(path)?,
        None => DeviceParams::from_config_text(DEFAULT_GEOMETRY)?,
    };
    let spec = SyntheticSpec {
        pattern: args.pattern,
        count: args.count,
        write_fraction: args.write_frac,
        inter_arrival_ns: args.inter_arrival_ns,
        seed: args.seed,
    };
    let map = AddressMap::new(&dev, args.addr_map.into());
    let records = generate(&spec, &map)?;
    std::fs::write(&args.out, serialize_trace(&records))?;
    log::info!(
        "{} records written to {}",
        records.len(),
        args.out.display()
    );
    Ok(())
}
