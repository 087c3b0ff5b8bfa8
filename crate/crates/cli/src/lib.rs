//! Command-line front end for the curve geometry library.
//!
//! Every subcommand prints a JSON summary on stdout and writes its tables and
//! reports under `--out`. Exit codes: 0 success, 1 usage, IO or parse error,
//! 2 validation failure, 3 tolerance or precondition breach.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::{ConstructArgs, Kind, Outcome, Theorem};
use config::{Format, Overrides, RunConfig};
use error::{CliError, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "bk", version, about = "Frames, curvatures and Bertrand constructions for curves in Minkowski space")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Sample points per grid
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Quadrature panels for reparametrization
    #[arg(long, global = true)]
    panels: Option<usize>,
    /// Frame, residual and speed tolerance
    #[arg(long, global = true)]
    tol_frame: Option<f64>,
    /// Causal-character and degeneracy tolerance
    #[arg(long, global = true)]
    tol_causal: Option<f64>,
    /// Bertrand fit residual tolerance
    #[arg(long, global = true)]
    tol_fit: Option<f64>,
    /// Output directory for artifacts
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Table format for sample artifacts
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// JSON file with defaults for the options above
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a curve file's declared causal character and surface
    Validate { curve: String },
    /// Spacelike frame, κ_g, τ_g and frame-equation residuals
    Frame {
        curve: String,
        /// Reparametrize by arclength first
        #[arg(long)]
        reparam: bool,
    },
    /// Cartan frame and curvatures of a null curve
    Cartan {
        curve: String,
        /// Reparametrize by pseudo-arc first
        #[arg(long)]
        reparam: bool,
    },
    /// Constant-k₂ and fixed-point tests for a pseudo-spherical null curve
    SphereTest {
        curve: String,
        /// Reparametrize by pseudo-arc first
        #[arg(long)]
        reparam: bool,
    },
    /// Tabulate the arclength or pseudo-arc parameter
    Reparam {
        curve: String,
        #[arg(long, value_enum, default_value = "arclength")]
        kind: Kind,
    },
    /// Build a Bertrand curve from a helix
    #[command(allow_negative_numbers = true)]
    Construct {
        curve: String,
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        a: f64,
        #[arg(long)]
        theta: f64,
        /// Translation vector, four comma-separated numbers
        #[arg(long, value_delimiter = ',', default_value = "0,0,0,0")]
        c: Vec<f64>,
    },
    /// Fit the Bertrand relation to a sampled curve CSV (t,x1,x2,x3,x4)
    Verify {
        csv: PathBuf,
        /// Degree of the local interpolant
        #[arg(long, default_value_t = 7)]
        degree: usize,
    },
    /// Run both constructions on the bundled helices
    Demo,
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    let o = cli.opts;
    let file = o.config.as_deref().map(Overrides::from_file).transpose()?;
    let flags = Overrides {
        frame_tol: o.tol_frame,
        causal_tol: o.tol_causal,
        fit_tol: o.tol_fit,
        samples: o.samples,
        panels: o.panels,
        out: o.out,
        format: o.format,
    };
    let cfg = RunConfig::resolve(file, flags)?;
    match cli.command {
        Command::Validate { curve } => commands::validate(&curve, &cfg),
        Command::Frame { curve, reparam } => commands::frame(&curve, reparam, &cfg),
        Command::Cartan { curve, reparam } => commands::cartan(&curve, reparam, &cfg),
        Command::SphereTest { curve, reparam } => commands::sphere_test(&curve, reparam, &cfg),
        Command::Reparam { curve, kind } => commands::reparam(&curve, kind, &cfg),
        Command::Construct {
            curve,
            theorem,
            a,
            theta,
            c,
        } => {
            let c: [f64; 4] = c.try_into().map_err(|_| CliError::usage("--c needs four numbers"))?;
            commands::construct(&curve, &ConstructArgs { theorem, a, theta, c }, &cfg)
        }
        Command::Verify { csv, degree } => commands::verify(&csv, degree, &cfg),
        Command::Demo => commands::demo(&cfg),
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let _ = write!(stderr, "{e}");
            let err = CliError::usage(e.kind().to_string());
            let _ = writeln!(stdout, "{}", err.to_json());
            return EXIT_USAGE;
        }
    };
    match dispatch(cli) {
        Ok(outcome) => {
            let _ = write!(stdout, "{}", output::to_json_text(&outcome.summary));
            outcome.exit
        }
        Err(err) => {
            let _ = writeln!(stderr, "bk: {err}");
            let _ = writeln!(stdout, "{}", err.to_json());
            err.exit
        }
    }
}
