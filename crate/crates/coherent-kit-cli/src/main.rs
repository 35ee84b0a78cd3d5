//! Command-line surface: construct states, evolve them, map phase space,
//! expand in the number basis, and run the verification suite, emitting
//! deterministic CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
//! failure. `COHERENT_KIT_THREADS` caps internal parallelism (0 = auto).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;

use coherent_kit::dynamics::{evolution_trace, TraceRow};
use coherent_kit::export::{self, JsonValue};
use coherent_kit::grid::{moments, Grid, WaveFunction};
use coherent_kit::phase_space::{husimi, HusimiMap, PhaseSpaceLattice};
use coherent_kit::states::{
    coherent_closed_form, number_coefficients, number_state, CoherentLabel,
};
use coherent_kit::verify::{run_verification, VerifyConfig};
use coherent_kit::{KitError, PhysicalConstants};

#[derive(Parser)]
#[command(
    name = "coherent-kit",
    version,
    about = "Free-particle coherent states: construction, evolution, phase space, verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GridArgs {
    /// Number of grid points (power of two, at least 8)
    #[arg(long, default_value_t = 1024)]
    n_points: usize,
    #[arg(long, default_value_t = -20.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 20.0, allow_hyphen_values = true)]
    x_max: f64,
}

#[derive(Args)]
struct ConstArgs {
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Length scale; the coherent position width is lambda/sqrt(2)
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
}

#[derive(Args)]
struct LabelArgs {
    /// Position center (conflicts with --alpha-re/--alpha-im)
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<f64>,
    /// Momentum center (conflicts with --alpha-re/--alpha-im)
    #[arg(long, allow_hyphen_values = true)]
    p0: Option<f64>,
    /// Real part of the coherent label alpha
    #[arg(long, allow_hyphen_values = true)]
    alpha_re: Option<f64>,
    /// Imaginary part of the coherent label alpha
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct OutArgs {
    /// Output path stem; suffixes .csv/.json/.moments.json/... are appended
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a coherent state; emits wave function and moment report
    Coherent {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        constants: ConstArgs,
        #[command(flatten)]
        label: LabelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Construct a number state; emits wave function and moment report
    Number {
        /// State index
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        constants: ConstArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evolve a coherent state freely; emits a moment/residual time series
    Evolve {
        /// Final time; the trace samples eleven equally spaced times
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        constants: ConstArgs,
        #[command(flatten)]
        label: LabelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Husimi phase-space map of a coherent or number state
    Husimi {
        /// Map a number state instead of a coherent one
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        constants: ConstArgs,
        #[command(flatten)]
        label: LabelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Number-basis expansion coefficients of a coherent state
    Expand {
        /// Number of coefficients to emit
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        constants: ConstArgs,
        #[command(flatten)]
        label: LabelArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run every identity check and emit a verification report
    Verify {
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        constants: ConstArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

enum CliError {
    Usage(String),
    Kit(KitError),
}

impl From<KitError> for CliError {
    fn from(e: KitError) -> Self {
        CliError::Kit(e)
    }
}

fn main() -> ExitCode {
    if let Some(cap) = std::env::var_os("COHERENT_KIT_THREADS") {
        match cap.to_string_lossy().parse::<usize>() {
            Ok(n) => coherent_kit::parallel::install_thread_cap(n),
            Err(_) => {
                eprintln!("COHERENT_KIT_THREADS must be a nonnegative integer (0 = auto)");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Kit(KitError::Io(e))) => {
            eprintln!("i/o error: {e}");
            ExitCode::from(3)
        }
        Err(CliError::Kit(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn build_constants(args: &ConstArgs) -> Result<PhysicalConstants, CliError> {
    Ok(PhysicalConstants::new(args.hbar, args.mass, args.lambda)?)
}

fn build_grid(args: &GridArgs) -> Result<std::sync::Arc<Grid>, CliError> {
    Ok(Grid::new(args.n_points, args.x_min, args.x_max)?)
}

fn build_label(args: &LabelArgs, c: &PhysicalConstants) -> Result<CoherentLabel, CliError> {
    let alpha_given = args.alpha_re.is_some() || args.alpha_im.is_some();
    let center_given = args.x0.is_some() || args.p0.is_some();
    if alpha_given && center_given {
        return Err(CliError::Usage(
            "give either --x0/--p0 or --alpha-re/--alpha-im, not both".into(),
        ));
    }
    if alpha_given {
        let alpha = C64::new(args.alpha_re.unwrap_or(0.0), args.alpha_im.unwrap_or(0.0));
        Ok(CoherentLabel::from_alpha(alpha, c)?)
    } else {
        Ok(CoherentLabel::from_center(
            args.x0.unwrap_or(0.0),
            args.p0.unwrap_or(0.0),
            c,
        )?)
    }
}

fn out_stem(out: &OutArgs, default: &str) -> PathBuf {
    out.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.to_path_buf().into_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_file<F>(path: &PathBuf, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> coherent_kit::Result<()>,
{
    let file = File::create(path).map_err(KitError::Io)?;
    let mut w = BufWriter::new(file);
    write(&mut w)?;
    w.flush().map_err(KitError::Io)?;
    Ok(())
}

fn emit_state(
    state: &WaveFunction,
    constants: &PhysicalConstants,
    out: &OutArgs,
    default_stem: &str,
) -> Result<(), CliError> {
    let stem = out_stem(out, default_stem);
    match out.format {
        Format::Csv => {
            let path = with_suffix(&stem, ".csv");
            write_file(&path, |w| export::write_wavefunction_csv(w, state))?;
            println!("wrote {}", path.display());
        }
        Format::Json => {
            let path = with_suffix(&stem, ".json");
            let json = export::wavefunction_json(state);
            write_file(&path, |w| export::write_json(w, &json))?;
            println!("wrote {}", path.display());
        }
    }
    let report = moments(state, constants)?;
    let path = with_suffix(&stem, ".moments.json");
    let json = export::moments_json(&report, state.grid());
    write_file(&path, |w| export::write_json(w, &json))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn trace_json(rows: &[TraceRow]) -> JsonValue {
    let col = |f: fn(&TraceRow) -> f64| {
        JsonValue::Array(rows.iter().map(|r| JsonValue::Float(f(r))).collect())
    };
    JsonValue::object(vec![
        ("t", col(|r| r.t)),
        ("mean_x", col(|r| r.mean_x)),
        ("mean_p", col(|r| r.mean_p)),
        ("delta_x", col(|r| r.delta_x)),
        ("delta_p", col(|r| r.delta_p)),
        ("eigen_residual", col(|r| r.eigen_residual)),
    ])
}

fn husimi_json(map: &HusimiMap) -> JsonValue {
    let lat = map.lattice();
    JsonValue::object(vec![
        (
            "x_axis",
            JsonValue::Array(lat.x_axis().iter().map(|&v| JsonValue::Float(v)).collect()),
        ),
        (
            "p_axis",
            JsonValue::Array(lat.p_axis().iter().map(|&v| JsonValue::Float(v)).collect()),
        ),
        (
            "values",
            JsonValue::Array(map.values().iter().map(|&v| JsonValue::Float(v)).collect()),
        ),
    ])
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Coherent {
            grid,
            constants,
            label,
            out,
        } => {
            let c = build_constants(&constants)?;
            let grid = build_grid(&grid)?;
            let label = build_label(&label, &c)?;
            let state = coherent_closed_form(&grid, &label, &c)?;
            emit_state(&state, &c, &out, "coherent")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Number {
            n,
            grid,
            constants,
            out,
        } => {
            let c = build_constants(&constants)?;
            let grid = build_grid(&grid)?;
            let state = number_state(&grid, n, &c)?;
            emit_state(&state, &c, &out, "number")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Evolve {
            t,
            grid,
            constants,
            label,
            out,
        } => {
            if !t.is_finite() {
                return Err(CliError::Usage("--t must be finite".into()));
            }
            let c = build_constants(&constants)?;
            let grid = build_grid(&grid)?;
            let label = build_label(&label, &c)?;
            let times: Vec<f64> = if t == 0.0 {
                vec![0.0]
            } else {
                (0..=10).map(|k| k as f64 * t / 10.0).collect()
            };
            let rows = evolution_trace(&label, &times, &c, &grid)?;
            let stem = out_stem(&out, "evolve");
            match out.format {
                Format::Csv => {
                    let path = with_suffix(&stem, ".csv");
                    write_file(&path, |w| export::write_trace_csv(w, &rows))?;
                    println!("wrote {}", path.display());
                }
                Format::Json => {
                    let path = with_suffix(&stem, ".json");
                    let json = trace_json(&rows);
                    write_file(&path, |w| export::write_json(w, &json))?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Husimi {
            n,
            grid,
            constants,
            label,
            out,
        } => {
            let c = build_constants(&constants)?;
            let grid = build_grid(&grid)?;
            let state = match n {
                Some(n) => number_state(&grid, n, &c)?,
                None => {
                    let label = build_label(&label, &c)?;
                    coherent_closed_form(&grid, &label, &c)?
                }
            };
            let report = moments(&state, &c)?;
            let lattice = PhaseSpaceLattice::around(&report, &c, 128, 128)?;
            let map = husimi(&state, &lattice)?;
            let stem = out_stem(&out, "husimi");
            match out.format {
                Format::Csv => {
                    let path = with_suffix(&stem, ".csv");
                    write_file(&path, |w| export::write_husimi_csv(w, &map))?;
                    println!("wrote {}", path.display());
                }
                Format::Json => {
                    let path = with_suffix(&stem, ".json");
                    let json = husimi_json(&map);
                    write_file(&path, |w| export::write_json(w, &json))?;
                    println!("wrote {}", path.display());
                }
            }
            let meta = with_suffix(&stem, ".meta.json");
            let json = export::husimi_sidecar_json(&map);
            write_file(&meta, |w| export::write_json(w, &json))?;
            println!("wrote {}", meta.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Expand {
            n,
            grid,
            constants,
            label,
            out,
        } => {
            if n == 0 {
                return Err(CliError::Usage("--n must be at least 1 coefficient".into()));
            }
            let c = build_constants(&constants)?;
            let grid = build_grid(&grid)?;
            let label = build_label(&label, &c)?;
            let state = coherent_closed_form(&grid, &label, &c)?;
            let coeffs = number_coefficients(&state, n - 1, &c)?;
            let stem = out_stem(&out, "expand");
            match out.format {
                Format::Csv => {
                    let path = with_suffix(&stem, ".csv");
                    write_file(&path, |w| export::write_fock_csv(w, &coeffs))?;
                    println!("wrote {}", path.display());
                }
                Format::Json => {
                    let path = with_suffix(&stem, ".json");
                    let json = JsonValue::object(vec![
                        (
                            "n",
                            JsonValue::Array(
                                (0..coeffs.len())
                                    .map(|k| JsonValue::Int(k as i64))
                                    .collect(),
                            ),
                        ),
                        (
                            "re",
                            JsonValue::Array(
                                coeffs.iter().map(|z| JsonValue::Float(z.re)).collect(),
                            ),
                        ),
                        (
                            "im",
                            JsonValue::Array(
                                coeffs.iter().map(|z| JsonValue::Float(z.im)).collect(),
                            ),
                        ),
                    ]);
                    write_file(&path, |w| export::write_json(w, &json))?;
                    println!("wrote {}", path.display());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            grid,
            constants,
            out,
        } => {
            let c = build_constants(&constants)?;
            let cfg = VerifyConfig {
                n_points: grid.n_points,
                x_min: grid.x_min,
                x_max: grid.x_max,
                constants: c,
                ..VerifyConfig::default()
            };
            let report = run_verification(&cfg)?;
            for check in &report.checks {
                println!(
                    "[{}] {:<28} residual {:>12.3e}  tol {:>8.1e}  {}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.id,
                    check.residual,
                    check.tolerance,
                    check.identity
                );
            }
            println!(
                "{} checks, {} passed, {} failed",
                report.checks.len(),
                report.passed(),
                report.failed()
            );
            let stem = out_stem(&out, "verify");
            let path = with_suffix(&stem, ".report.json");
            let json = export::report_json(&report);
            write_file(&path, |w| export::write_json(w, &json))?;
            println!("wrote {}", path.display());
            Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
