use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use polylike::builder::Variant;
use polylike::error::{Error, Result};
use polylike::reports::{self, Format, Outputs, RunConfig};

/// Bounds, classification and polynomial-like constructions for z^l + c1.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Tables of K*_l(y), its limit and A_*(K).
    Bounds,
    /// Classify a parameter and measure space ratios level by level.
    Analyze,
    /// Build the complex domains and check containment per level.
    Construct,
    /// Intersection points, root reports and the spiral overlay.
    Geometry,
    /// Locate a parameter from --param-query and re-check it.
    Search,
}

#[derive(clap::Args)]
struct Flags {
    /// TOML file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    degree: Option<u32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    c1: Option<f64>,
    /// superstable:P, cascade:D or fibonacci:D
    #[arg(long, global = true)]
    param_query: Option<String>,
    #[arg(long, global = true)]
    variant: Option<Variant>,
    /// Comma-separated angles, tried in order.
    #[arg(long, global = true, value_delimiter = ',')]
    theta: Vec<f64>,
    #[arg(long, global = true)]
    levels: Option<usize>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Defaults to $POLYLIKE_OUT_DIR, then ./polylike-out.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Repeatable; all formats when absent.
    #[arg(long, global = true, value_enum)]
    format: Vec<Format>,
}

impl Flags {
    fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(d) = self.degree {
            cfg.degree = d;
        }
        if self.c1.is_some() {
            cfg.c1 = self.c1;
        }
        if self.param_query.is_some() {
            cfg.param_query = self.param_query.clone();
        }
        if self.variant.is_some() {
            cfg.variant = self.variant;
        }
        if !self.theta.is_empty() {
            cfg.theta = self.theta.clone();
        }
        if let Some(l) = self.levels {
            cfg.levels = l;
        }
        if let Some(s) = self.samples {
            cfg.samples = s;
        }
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        if self.out_dir.is_some() {
            cfg.out_dir = self.out_dir.clone();
        }
        if !self.format.is_empty() {
            cfg.format = self.format.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> Result<Outputs> {
    let cfg = cli.flags.config()?;
    let out = match cli.command {
        Command::Bounds => reports::cmd_bounds(&cfg),
        Command::Analyze => reports::cmd_analyze(&cfg),
        Command::Construct => reports::cmd_construct(&cfg),
        Command::Geometry => reports::cmd_geometry(&cfg),
        Command::Search => reports::cmd_search(&cfg),
    }?;
    for p in out.write(&cfg.output_dir())? {
        eprintln!("wrote {}", p.display());
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            for c in out.report.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {}: {}", c.name, c.detail);
            }
            ExitCode::from(out.report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Config(_) = e {
                eprintln!("see --help");
            }
            ExitCode::from(1)
        }
    }
}
