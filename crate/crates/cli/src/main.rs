//! `ffa`: command-line front end for the focus-focus addition library.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage,
//! configuration or input errors.

mod config;
mod figure;
mod points;
mod report;

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use focus_addition::graph::{locate, GraphPoint};
use focus_addition::group::{add, inverse, recover_partials};
use focus_addition::model::{wrap_angle, ComplexValue, PointC2};
use focus_addition::neighborhood::{normalize, CanonicalPoint};
use focus_addition::verify::{run_check, run_suite, sampling, CheckId};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use config::RunConfig;
use figure::FigureKind;
use points::{fmt_coords, fmt_point, fmt_real, parse_point, parse_reals};
use report::{summary_line, SuiteReport};

/// Bound on recovered invariant partials.
const RECOVER_TOL: f64 = 1e-6;

/// Any error that ends the run with exit code 2.
#[derive(Debug)]
pub struct CliError(String);

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        CliError(format!("config: {}", msg.into()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<focus_addition::Error> for CliError {
    fn from(e: focus_addition::Error) -> Self {
        CliError(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ffa",
    version,
    about = "Addition law on focus-focus model neighborhoods"
)]
struct Cli {
    /// JSON configuration; defaults to S = 0, epsilon = 0.1, delta = 0.3.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the verification suite and write a JSON report.
    Verify {
        /// Run only the named check; repeatable.
        #[arg(long = "check")]
        checks: Vec<String>,
    },
    /// Add two points on a common fiber, written "re,im;re,im".
    Add {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Inverse of a point.
    Inverse {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Chart coordinates of a graph point (x, y, x + y).
    Locate {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Random canonical points as CSV; consecutive row pairs share a fiber.
    Sample {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Curves of the (|p|, |q|) projection as CSV.
    Figure {
        #[arg(long, value_enum)]
        kind: FigureKind,
        /// Fiber levels |b|, comma separated.
        #[arg(long)]
        fibers: Option<String>,
        /// Also render the curves as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Recover the invariant partials from the period on a polar fiber grid.
    RecoverS {
        #[arg(long, default_value_t = 10)]
        grid: usize,
    },
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::usage(format!("stdout: {e}")))
        }
    }
}

fn canonical(s: &str, cfg: &RunConfig) -> Result<CanonicalPoint, CliError> {
    Ok(normalize(&parse_point(s)?, &cfg.params)?)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let cfg = RunConfig::load(cli.config.as_deref(), cli.seed)?;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Verify { checks } => verify(&cfg, &checks, out),
        Command::Add { x, y } => {
            let sum = add(&canonical(&x, &cfg)?, &canonical(&y, &cfg)?, &cfg.params)?;
            emit(out, &format!("{}\n", fmt_point(sum.point())))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Inverse { x } => {
            let inv = inverse(&canonical(&x, &cfg)?, &cfg.params)?;
            emit(out, &format!("{}\n", fmt_point(inv.point())))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Locate { x, y, z } => {
            let gp = GraphPoint::new(
                canonical(&x, &cfg)?,
                canonical(&y, &cfg)?,
                canonical(&z, &cfg)?,
                &cfg.params,
            )?;
            let text: String = locate(&gp, &cfg.params)?
                .iter()
                .map(|f| format!("{} {}\n", f.chart, fmt_coords(&f.coords)))
                .collect();
            emit(out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample { count } => {
            emit(out, &sample(&cfg, count)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Figure { kind, fibers, svg } => {
            let levels = match fibers {
                Some(s) => parse_reals(&s)?,
                None => vec![0.3 * cfg.params.epsilon(), 0.6 * cfg.params.epsilon()],
            };
            let curves = figure::build(kind, &cfg.params, &levels)?;
            emit(out, &figure::to_csv(&curves))?;
            if let Some(path) = svg {
                emit(Some(&path), &figure::to_svg(&curves))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::RecoverS { grid } => recover(&cfg, grid, out),
    }
}

fn verify(cfg: &RunConfig, names: &[String], out: Option<&Path>) -> Result<ExitCode, CliError> {
    let reports = if names.is_empty() {
        run_suite(&cfg.params, &cfg.tol)
    } else {
        let ids = names
            .iter()
            .map(|n| n.parse::<CheckId>())
            .collect::<Result<Vec<_>, _>>()?;
        ids.into_iter()
            .map(|id| run_check(id, &cfg.params, &cfg.tol))
            .collect()
    };
    for r in &reports {
        eprintln!("{}", summary_line(r));
    }
    let report = SuiteReport::new(&reports);
    emit(out, &format!("{}\n", report.to_json()))?;
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn sample(cfg: &RunConfig, count: usize) -> Result<String, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.tol.seed);
    let mut text = String::from("fiber_re,fiber_im,p_re,p_im,q_re,q_im\n");
    let mut b = ComplexValue::new(0.0, 0.0);
    for k in 0..count {
        if k % 2 == 0 {
            b = sampling::fiber(&mut rng, &cfg.params);
        }
        let x = sampling::point_on_fiber(&mut rng, b, &cfg.params)?;
        let PointC2 { p, q } = *x.point();
        let row = [b.re, b.im, p.re, p.im, q.re, q.im].map(fmt_real).join(",");
        text.push_str(&row);
        text.push('\n');
    }
    Ok(text)
}

fn recover(cfg: &RunConfig, grid: usize, out: Option<&Path>) -> Result<ExitCode, CliError> {
    if grid == 0 {
        return Err(CliError::usage("grid must be positive"));
    }
    let eps = cfg.params.epsilon();
    let mut text = String::from("b_re,b_im,s1,s2,s1_expected,s2_expected\n");
    let mut worst: f64 = 0.0;
    for i in 0..grid {
        for j in 0..grid {
            let r = eps * (0.05 + 0.85 * (i as f64 + 0.5) / grid as f64);
            let theta = -PI + 2.0 * PI * (j as f64 + 0.5) / grid as f64;
            let b = ComplexValue::from_polar(r, theta);
            let (s1, s2) = recover_partials(b, &cfg.params)?;
            let v = cfg.params.invariant().eval(b);
            worst = worst
                .max((s1 - v.s1).abs())
                .max(wrap_angle(s2 - v.s2).abs());
            let row = [b.re, b.im, s1, s2, v.s1, v.s2].map(fmt_real).join(",");
            text.push_str(&row);
            text.push('\n');
        }
    }
    emit(out, &text)?;
    let pass = worst <= RECOVER_TOL;
    eprintln!(
        "recover-s {}  max error {worst:.3e} (threshold {RECOVER_TOL:.0e})",
        if pass { "pass" } else { "FAIL" }
    );
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // help and version exit 0, usage errors exit 2
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
