use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use adsharvest::check::{run_check, CheckOptions};
use adsharvest::config::{parse_config, parse_kind, Point};
use adsharvest::sweep::{evaluate, run_sweep, scenario, write_csv};
use adsharvest::{Result, DEFAULT_PINS};
use adsharvest_core::elements::{l_local_geodesic, l_local_static, Detector};
use adsharvest_core::quantify::clamp_negativity;
use adsharvest_core::{BoundaryCondition, ScenarioKind, Truncation};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "adsharvest", version, about = "Entanglement harvesting in AdS4")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local transition probability L_II of one detector.
    Rate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value = "a")]
        detector: Which,
        /// Sweep the gap instead: MIN MAX COUNT.
        #[arg(long, num_args = 3, allow_negative_numbers = true, value_names = ["MIN", "MAX", "COUNT"])]
        gap_range: Option<Vec<f64>>,
    },
    /// Every matrix element and quantifier at one point.
    Elements {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Grid sweep from a config file, written as CSV.
    Sweep {
        config: PathBuf,
        /// Overrides `[sweep] workers`.
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides `[output] path`; `-` writes to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the release gates; exits nonzero if any fails.
    Check {
        /// Recompute the pinned oracle values before checking.
        #[arg(long)]
        regen_pins: bool,
        #[arg(long, default_value = DEFAULT_PINS)]
        pins: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    A,
    B,
}

#[derive(Args)]
struct ScenarioArgs {
    /// `geodesic` or `static`.
    #[arg(long, default_value = "geodesic")]
    kind: String,
    /// Boundary condition: -1 Dirichlet, 0 transparent, 1 Neumann.
    #[arg(long, allow_negative_numbers = true, default_value_t = -1)]
    epsilon: i32,
    /// AdS length in switching widths.
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    /// Proper gap in inverse switching widths.
    #[arg(long, allow_negative_numbers = true, default_value_t = 2.0)]
    gap: f64,
    /// Proper separation of detector B from the centre.
    #[arg(long, default_value_t = 0.0)]
    separation: f64,
    /// Delay between the switchings.
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    delay: f64,
    #[arg(long, default_value_t = 0.01)]
    coupling: f64,
}

impl ScenarioArgs {
    fn parts(&self) -> Result<(ScenarioKind, BoundaryCondition, Point)> {
        let point = Point {
            length: self.length,
            gap: self.gap,
            separation: self.separation,
            delay: self.delay,
        };
        Ok((parse_kind(&self.kind)?, BoundaryCondition::from_epsilon(self.epsilon)?, point))
    }
}

fn rate(args: &ScenarioArgs, which: Which, gap_range: Option<&[f64]>) -> Result<()> {
    let (kind, bc, base) = args.parts()?;
    let trunc = Truncation::default();
    let gaps: Vec<f64> = match gap_range {
        Some(&[lo, hi, n]) if n >= 2.0 => {
            let n = n as usize;
            (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
        }
        Some(_) => {
            return Err(adsharvest::Error::Invalid {
                field: "gap-range".into(),
                reason: "COUNT must be at least 2".into(),
            })
        }
        None => vec![base.gap],
    };
    println!("gap,L_II");
    for gap in gaps {
        let s = scenario(kind, bc, &Point { gap, ..base }, args.coupling)?;
        let det = match which {
            Which::A => Detector::A,
            Which::B => Detector::B,
        };
        let v = match kind {
            ScenarioKind::Geodesic => l_local_geodesic(&s, &trunc)?,
            ScenarioKind::Static => l_local_static(&s, &trunc, det)?,
        };
        println!("{gap:e},{v:e}");
    }
    Ok(())
}

fn elements(args: &ScenarioArgs) -> Result<()> {
    let (kind, bc, p) = args.parts()?;
    let s = scenario(kind, bc, &p, args.coupling)?;
    let sample = evaluate(kind, bc, p, args.coupling, &Truncation::default());
    println!("scenario: {}", adsharvest_core::oracle::fingerprint(&s));
    println!("coupling: {} (elements in units of coupling^2)", args.coupling);
    if let Some(e) = sample.elements {
        println!("L_AA = {:e}", e.l_aa);
        println!("L_BB = {:e}", e.l_bb);
        println!("L_AB = {:e}", e.l_ab);
        println!("M+   = {:e}", e.m_plus);
        println!("M-   = {:e}", e.m_minus);
        println!("M    = {:e}", e.m);
        println!("C_AB = {:e}", e.c_ab);
        println!("C_BA = {:e}", e.c_ba);
    }
    println!("N2 = {:e}", sample.n2);
    println!("negativity = {:e}", clamp_negativity(sample.n2));
    println!("mutual_info = {:e}", sample.mutual_info);
    println!("flags: {}", sample.flag_text());
    Ok(())
}

fn sweep(config: &PathBuf, workers: Option<usize>, output: Option<PathBuf>) -> Result<()> {
    let spec = parse_config(&std::fs::read_to_string(config)?)?;
    let workers = workers
        .or(spec.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let samples = run_sweep(&spec, workers)?;
    match output.or_else(|| spec.output.clone()) {
        Some(path) if path.as_os_str() != "-" => {
            let mut f = BufWriter::new(File::create(&path)?);
            write_csv(&spec, &samples, &mut f)?;
            f.flush()?;
        }
        _ => write_csv(&spec, &samples, io::stdout().lock())?,
    }
    Ok(())
}

fn check(regen_pins: bool, pins: PathBuf) -> Result<bool> {
    let opts = CheckOptions {
        regen_pins,
        ..CheckOptions::new(pins)
    };
    let report = run_check(&opts)?;
    if report.pins_regenerated {
        println!("pins regenerated at {}", opts.pins_path.display());
    }
    for g in &report.gates {
        println!("{g}");
    }
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Rate { scenario, detector, gap_range } => {
            rate(&scenario, detector, gap_range.as_deref()).map(|_| true)
        }
        Command::Elements { scenario } => elements(&scenario).map(|_| true),
        Command::Sweep { config, workers, output } => sweep(&config, workers, output).map(|_| true),
        Command::Check { regen_pins, pins } => check(regen_pins, pins),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
