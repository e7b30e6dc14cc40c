use std::fs;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use quadloco::model::RobotParams;
use quadloco::scenario::{run_scenario, write_trace, RunOptions, Scenario, Summary, TraceRow};

/// Runs a command scenario through the closed loop and writes a CSV trace.
#[derive(Parser, Debug)]
#[command(name = "quadloco", version)]
struct Args {
    /// Robot parameter file.
    #[arg(long)]
    robot: PathBuf,
    /// Scenario file.
    #[arg(long)]
    scenario: PathBuf,
    /// Output trace (CSV).
    #[arg(long)]
    out: PathBuf,
    /// Override the scenario duration (s).
    #[arg(long)]
    duration: Option<f64>,
    /// Override the control rate (Hz).
    #[arg(long)]
    rate: Option<f64>,
    /// Record per-tick wall-clock time (makes the trace non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Also write the summary as JSON.
    #[arg(long)]
    summary_json: Option<PathBuf>,
}

enum Fault {
    Usage(String),
    Parse(String),
    Runtime(String),
    Io(anyhow::Error),
}

impl Fault {
    fn report(&self) -> (u8, String) {
        match self {
            Fault::Usage(m) => (2, format!("error[usage]: {m}")),
            Fault::Parse(m) => (3, format!("error[parse]: {m}")),
            Fault::Runtime(m) => (4, format!("error[runtime]: {m}")),
            Fault::Io(e) => (5, format!("error[io]: {e:#}")),
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Fault> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Fault::Io)
}

fn save_trace(path: &PathBuf, rows: &[TraceRow], timing: bool) -> Result<(), Fault> {
    let file = fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))
        .map_err(Fault::Io)?;
    let mut w = BufWriter::new(file);
    write_trace(&mut w, rows, timing)
        .and_then(|_| w.flush())
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Fault::Io)
}

fn print_summary(s: &Summary) {
    const NAMES: [&str; 6] = ["x", "y", "z", "roll", "pitch", "yaw"];
    println!("ticks: {}", s.ticks);
    for (i, name) in NAMES.iter().enumerate() {
        println!(
            "{name:>6}: max {:.6}  mean {:.6}",
            s.errors.max_abs[i], s.errors.mean_abs[i]
        );
    }
    println!(
        "clamped reference xy: max {:.6} {:.6}",
        s.safe_errors.max_abs[0], s.safe_errors.max_abs[1]
    );
    for (k, seg) in s.segments.iter().enumerate() {
        println!(
            "segment {k:>2}: ticks {:>5}  max xy {:.4} {:.4}  z {:.4}  rpy {:.4} {:.4} {:.4}",
            seg.ticks,
            seg.max_abs[0],
            seg.max_abs[1],
            seg.max_abs[2],
            seg.max_abs[3],
            seg.max_abs[4],
            seg.max_abs[5]
        );
    }
    println!("contacts: {}..={}", s.min_contacts, s.max_contacts);
    for b in &s.buckets {
        let timing = match (b.p50_ns, b.p90_ns, b.p99_ns, b.max_ns) {
            (Some(a), Some(b), Some(c), Some(d)) => format!("  ns p50 {a} p90 {b} p99 {c} max {d}"),
            _ => String::new(),
        };
        println!(
            "N={} r={} ticks {:>6}  iterations {}{}{}",
            b.contacts,
            b.rank,
            b.ticks,
            b.iterations_min,
            if b.iterations_constant {
                String::new()
            } else {
                format!("..{}", b.iterations_max)
            },
            timing
        );
    }
    println!(
        "checks: swing boundary {:.3e}  zmp outside {}  zmp round trip {:.3e}  residual {:.3e}  lambda {:.3e}",
        s.swing_boundary_max, s.zmp_outside_ticks, s.zmp_round_trip_max, s.residual_max, s.lambda_full_rank_max
    );
}

fn run(args: &Args) -> Result<(), Fault> {
    if let Some(r) = args.rate {
        if !(r.is_finite() && r > 0.0) {
            return Err(Fault::Usage(format!("--rate must be positive, got {r}")));
        }
    }
    if let Some(d) = args.duration {
        if !(d.is_finite() && d > 0.0) {
            return Err(Fault::Usage(format!(
                "--duration must be positive, got {d}"
            )));
        }
    }
    let params = RobotParams::parse(&read(&args.robot)?)
        .map_err(|e| Fault::Parse(format!("{}: {e}", args.robot.display())))?;
    let scenario = Scenario::parse(&read(&args.scenario)?)
        .map_err(|e| Fault::Parse(format!("{}: {e}", args.scenario.display())))?;
    let opts = RunOptions {
        duration: args.duration,
        rate: args.rate,
        timing: args.timing,
    };
    let out = match run_scenario(&params, &scenario, &opts) {
        Ok(out) => out,
        Err(failure) => {
            // Keep the ticks leading up to the fault for inspection.
            save_trace(&args.out, &failure.rows, args.timing)?;
            return Err(Fault::Runtime(failure.to_string()));
        }
    };
    save_trace(&args.out, &out.rows, args.timing)?;
    if let Some(path) = &args.summary_json {
        let json = serde_json::to_string_pretty(&out.summary).map_err(|e| Fault::Io(e.into()))?;
        fs::write(path, json)
            .with_context(|| format!("writing {}", path.display()))
            .map_err(Fault::Io)?;
    }
    print_summary(&out.summary);
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, line) = f.report();
            eprintln!("{line}");
            ExitCode::from(code)
        }
    }
}
