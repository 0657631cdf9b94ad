//! Command-line front end: run one experiment, verify the sequence table,
//! synthesize sequences, export refocusing schedules, classify every
//! promise function.
//!
//! Exit codes: 0 success, 1 verification or classification failure,
//! 2 usage error.

mod config;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::{load_system, RunConfig, SimulationSettings};
use dj_nmr::experiment::{classify_all, is_correct, run_experiment, ExperimentConfig};
use dj_nmr::functions::{BinaryFunction, FunctionClass};
use dj_nmr::quantum::equal_up_to_global_phase;
use dj_nmr::refocusing::{schedule_generator, simulate_schedule};
use dj_nmr::sequence::{classify_type, synthesize, verify_table, Angle, Generator, GeneratorKind, Pair};
use dj_nmr::spectroscopy::{Realization, StateKind};

#[derive(Parser)]
#[command(name = "dj-nmr", version, about = "Three-qubit Deutsch-Jozsa on a simulated NMR spin system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the experiment for one function and classify its spectrum
    Run(RunArgs),
    /// Check every embedded sequence against its oracle
    VerifyTable {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Search for a shortest generator sequence for a balanced function
    Synthesize {
        #[arg(long)]
        function: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Export the refocusing schedule of one generator
    Schedule(ScheduleArgs),
    /// Run all 72 constant and balanced functions end to end
    ClassifyAll(ClassifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StateArg {
    Thermal,
    Pure,
}

impl From<StateArg> for StateKind {
    fn from(s: StateArg) -> Self {
        match s {
            StateArg::Thermal => StateKind::Thermal,
            StateArg::Pure => StateKind::Pure,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RealizationArg {
    Ideal,
    Compiled,
    Exact,
}

impl From<RealizationArg> for Realization {
    fn from(r: RealizationArg) -> Self {
        match r {
            RealizationArg::Ideal => Realization::Ideal,
            RealizationArg::Compiled => Realization::Compiled,
            RealizationArg::Exact => Realization::Exact,
        }
    }
}

#[derive(Args, Clone, Debug, Default)]
struct SimArgs {
    /// Spin system JSON; the alanine preset when absent
    #[arg(long, env = "DJ_NMR_SYSTEM")]
    system: Option<PathBuf>,
    #[arg(long)]
    dwell_us: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    zero_fill: Option<usize>,
    #[arg(long)]
    linewidth_hz: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    /// Function index, `0xNN` or decimal
    #[arg(long)]
    function: Option<String>,
    #[arg(long, value_enum)]
    state: Option<StateArg>,
    #[arg(long, value_enum)]
    realization: Option<RealizationArg>,
    #[command(flatten)]
    sim: SimArgs,
    /// Directory for spectrum.csv, lines.csv and verdict.json
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stdout format when no output directory is given
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// JSON run configuration; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ScheduleArgs {
    /// z1, z2, z3, j12, j23 or j13
    #[arg(long)]
    op: String,
    /// Rotation angle as a multiple of pi, e.g. 1, 1/2, -0.5
    #[arg(long, allow_hyphen_values = true)]
    angle: String,
    #[arg(long, env = "DJ_NMR_SYSTEM")]
    system: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    flip_error: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, value_enum, default_value = "thermal")]
    state: StateArg,
    #[arg(long, value_enum, default_value = "ideal")]
    realization: RealizationArg,
    #[command(flatten)]
    sim: SimArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Self {
            code: 2,
            message: message.to_string(),
        }
    }

    fn verification(message: impl ToString) -> Self {
        Self {
            code: 1,
            message: message.to_string(),
        }
    }
}

impl From<dj_nmr::Error> for Failure {
    fn from(e: dj_nmr::Error) -> Self {
        use dj_nmr::Error as E;
        match e {
            E::NotHermitian | E::NotDiagonal | E::ZeroReference | E::SynthesisFailed(_) | E::DimensionMismatch { .. } => {
                Failure::verification(e)
            }
            other => Failure::usage(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::verification(e)
    }
}

type CmdResult = Result<(), Failure>;

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(mut w: impl Write, value: &T) -> CmdResult {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn settings(sim: &SimArgs) -> SimulationSettings {
    SimulationSettings {
        system: sim.system.clone(),
        dwell_us: sim.dwell_us,
        points: sim.points,
        zero_fill: sim.zero_fill,
        linewidth_hz: sim.linewidth_hz,
    }
}

fn cmd_run(args: RunArgs) -> CmdResult {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::from_path(p).map_err(Failure::usage)?,
        None => RunConfig::default(),
    };
    cfg.function = args.function.or(cfg.function);
    cfg.state = args.state.map(Into::into).or(cfg.state);
    cfg.realization = args.realization.map(Into::into).or(cfg.realization);
    cfg.system = args.sim.system.clone().or(cfg.system);
    cfg.dwell_us = args.sim.dwell_us.or(cfg.dwell_us);
    cfg.points = args.sim.points.or(cfg.points);
    cfg.zero_fill = args.sim.zero_fill.or(cfg.zero_fill);
    cfg.linewidth_hz = args.sim.linewidth_hz.or(cfg.linewidth_hz);
    cfg.out = args.out.or(cfg.out);

    let f = cfg.function().map_err(Failure::usage)?;
    let sim = SimulationSettings {
        system: cfg.system.clone(),
        dwell_us: cfg.dwell_us,
        points: cfg.points,
        zero_fill: cfg.zero_fill,
        linewidth_hz: cfg.linewidth_hz,
    };
    let exp = ExperimentConfig {
        system: sim.system()?,
        state: cfg.state.unwrap_or(StateKind::Thermal),
        realization: cfg.realization.unwrap_or(Realization::Ideal),
        acquisition: sim.acquisition()?,
    };
    let result = run_experiment(f, &exp)?;
    let record = result.verdict_record();

    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            result
                .spectrum
                .write_csv(BufWriter::new(File::create(dir.join("spectrum.csv"))?))?;
            result
                .lines
                .write_csv(BufWriter::new(File::create(dir.join("lines.csv"))?))?;
            write_json(BufWriter::new(File::create(dir.join("verdict.json"))?), &record)?;
            println!("{f} {}", result.verdict);
        }
        None => match args.format {
            Format::Json | Format::Text => write_json(io::stdout().lock(), &record)?,
            Format::Csv => result.lines.write_csv(io::stdout().lock())?,
        },
    }

    let expected = f.classify();
    if expected != FunctionClass::Neither && !is_correct(expected, result.verdict) {
        return Err(Failure::verification(format!(
            "{f} is {expected} but the spectrum reads {}",
            result.verdict
        )));
    }
    Ok(())
}

fn cmd_verify_table(format: Format) -> CmdResult {
    let report = verify_table();
    let mut out = output(None)?;
    match format {
        Format::Json => write_json(&mut out, &report)?,
        Format::Text | Format::Csv => {
            for e in &report.entries {
                writeln!(
                    out,
                    "0x{:02X} {:<3} {} {} phase={:.6} deviation={:.1e}",
                    e.hex_index,
                    e.function_type.to_string(),
                    e.sequence,
                    if e.passed { "OK" } else { "FAIL" },
                    e.phase,
                    e.deviation
                )?;
            }
            writeln!(
                out,
                "{}/{} {}",
                report.passed(),
                report.entries.len(),
                if report.all_passed() { "OK" } else { "FAIL" }
            )?;
            out.flush()?;
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::verification("table verification failed"))
    }
}

#[derive(Serialize)]
struct SynthesisRecord {
    hex_index: u8,
    function_type: String,
    sequence: String,
    generators: Vec<Generator>,
}

fn cmd_synthesize(function: &str, format: Format) -> CmdResult {
    let f: BinaryFunction = function.parse()?;
    let seq = synthesize(f)?;
    let ok = equal_up_to_global_phase(&seq.to_unitary(), &f.u_f(), 1e-10)?.equal;
    let mut out = output(None)?;
    match format {
        Format::Json => write_json(
            &mut out,
            &SynthesisRecord {
                hex_index: f.hex_index(),
                function_type: classify_type(&seq).to_string(),
                sequence: seq.to_string(),
                generators: seq.generators().to_vec(),
            },
        )?,
        Format::Text | Format::Csv => {
            writeln!(out, "{seq}")?;
            out.flush()?;
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::verification(format!("synthesized sequence does not realize {f}")))
    }
}

fn parse_op(op: &str) -> Result<GeneratorKind, Failure> {
    let op = op.trim().to_ascii_lowercase();
    if let Some(s) = op.strip_prefix('z') {
        return match s.parse::<usize>() {
            Ok(i @ 1..=3) => Ok(GeneratorKind::ZRot(i)),
            _ => Err(Failure::usage(format!("unknown op '{op}'"))),
        };
    }
    if let Some(p) = op.strip_prefix('j') {
        let digits: Vec<usize> = p.chars().filter_map(|c| c.to_digit(10).map(|d| d as usize)).collect();
        if let [i, j] = digits[..] {
            return Pair::from_spins(i, j).map(GeneratorKind::Coupling).map_err(Failure::from);
        }
    }
    Err(Failure::usage(format!("unknown op '{op}' (expected z1..z3, j12, j23, j13)")))
}

#[derive(Serialize)]
struct ScheduleRecord<'a> {
    schedule: &'a dj_nmr::refocusing::PulseSchedule,
    deviation: f64,
}

fn cmd_schedule(args: ScheduleArgs) -> CmdResult {
    let kind = parse_op(&args.op)?;
    let angle = Angle::parse_over_pi(&args.angle)?;
    let g = Generator::new(kind, angle).ok_or_else(|| Failure::usage("angle must be nonzero"))?;
    if !args.flip_error.is_finite() {
        return Err(Failure::usage("flip error must be finite"));
    }
    let sys = load_system(args.system.as_deref())?;
    let sched = schedule_generator(g, &sys)?.with_flip_error(args.flip_error);
    let u = simulate_schedule(&sched, &sys)?;
    let m = equal_up_to_global_phase(&u, &g.unitary(), 1e-9)?;
    let mut out = output(args.out.as_deref())?;
    match args.format {
        Format::Json => write_json(
            &mut out,
            &ScheduleRecord {
                schedule: &sched,
                deviation: m.deviation,
            },
        )?,
        Format::Text | Format::Csv => {
            write!(out, "{}", sched.to_text())?;
            writeln!(out, "# deviation={:.3e}", m.deviation)?;
            out.flush()?;
        }
    }
    if args.flip_error == 0.0 && !m.equal {
        return Err(Failure::verification(format!(
            "schedule deviates from {g} by {:.3e}",
            m.deviation
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct ClassificationReport {
    total: usize,
    correct: usize,
    rows: Vec<dj_nmr::experiment::ClassificationRow>,
}

fn cmd_classify_all(args: ClassifyArgs) -> CmdResult {
    let sim = settings(&args.sim);
    let cfg = ExperimentConfig {
        system: sim.system()?,
        state: args.state.into(),
        realization: args.realization.into(),
        acquisition: sim.acquisition()?,
    };
    let rows = classify_all(&cfg)?;
    let report = ClassificationReport {
        total: rows.len(),
        correct: rows.iter().filter(|r| r.correct).count(),
        rows,
    };
    write_json(output(args.out.as_deref())?, &report)?;
    if report.correct == report.total {
        Ok(())
    } else {
        Err(Failure::verification(format!(
            "{}/{} verdicts correct",
            report.correct, report.total
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::VerifyTable { format } => cmd_verify_table(format),
        Command::Synthesize { function, format } => cmd_synthesize(&function, format),
        Command::Schedule(args) => cmd_schedule(args),
        Command::ClassifyAll(args) => cmd_classify_all(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("dj-nmr: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
