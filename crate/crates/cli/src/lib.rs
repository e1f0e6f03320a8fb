//! Command-line front end: argument parsing, configuration and the report
//! envelope printed on stdout.

pub mod commands;
pub mod config;
pub mod error;
pub mod export;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::commands::Report;
use crate::config::{Overrides, RunConfig};
use crate::error::{CliError, EXIT_CERTIFICATION, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(name = "solitons", version, about = "Link metrics and rotationally symmetric Ricci solitons")]
pub struct Cli {
    /// JSON config file; flags below override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub quadrature_tol: Option<f64>,
    #[arg(long, global = true)]
    pub ode_rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub shooting_tol: Option<f64>,
    #[arg(long, global = true)]
    pub grid_size: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Collapsing link metrics on spheres.
    #[command(subcommand)]
    Link(LinkCommand),
    /// Steady and expanding soliton profiles.
    #[command(subcommand)]
    Soliton(SolitonCommand),
    /// Rescaled expanders against the Bryant soliton.
    Blowup(BlowupArgs),
    /// Validation of doubly warped boundary data.
    #[command(subcommand)]
    Boundary(BoundaryCommand),
}

#[derive(Debug, Subcommand)]
pub enum LinkCommand {
    Build {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        t: f64,
    },
    Family {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: u32,
        /// Comma-separated values of t.
        #[arg(long, value_delimiter = ',', required = true)]
        t_grid: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolitonCommand {
    Steady {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        kappa: f64,
        #[arg(long, default_value_t = 10.0)]
        r_max: f64,
    },
    Expanding {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        cone_angle: f64,
    },
}

#[derive(Debug, Args)]
pub struct BlowupArgs {
    #[arg(long)]
    pub n: u32,
    /// Comma-separated, strictly decreasing cone angles.
    #[arg(long, value_delimiter = ',', required = true)]
    pub c_list: Vec<f64>,
}

#[derive(Debug, Subcommand)]
pub enum BoundaryCommand {
    Check {
        #[arg(long)]
        input: PathBuf,
    },
}

impl Cli {
    fn overrides(&self) -> Overrides {
        Overrides {
            quadrature_tol: self.quadrature_tol,
            ode_rel_tol: self.ode_rel_tol,
            shooting_tol: self.shooting_tol,
            grid_size: self.grid_size,
            output_dir: self.output_dir.clone(),
        }
    }
}

fn dispatch(cfg: &RunConfig, command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Link(LinkCommand::Build { p, q, t }) => commands::link_build(cfg, *p, *q, *t),
        Command::Link(LinkCommand::Family { p, q, m, t_grid }) => commands::link_family(cfg, *p, *q, *m, t_grid),
        Command::Soliton(SolitonCommand::Steady { n, kappa, r_max }) => commands::soliton_steady(cfg, *n, *kappa, *r_max),
        Command::Soliton(SolitonCommand::Expanding { n, cone_angle }) => commands::soliton_expanding(cfg, *n, *cone_angle),
        Command::Blowup(a) => commands::blowup(cfg, a.n, &a.c_list),
        Command::Boundary(BoundaryCommand::Check { input }) => commands::boundary_check(cfg, input),
    }
}

/// Runs a parsed command line. Returns the exit code and the envelope.
pub fn run(cli: &Cli, argv: &[String]) -> (i32, Value) {
    let start = Instant::now();
    let cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides());
    let (code, cfg_echo, body) = match cfg {
        Err(e) => (e.exit_code(), Value::Null, json!({ "error": e.to_string() })),
        Ok(cfg) => {
            let echo = serde_json::to_value(&cfg).unwrap_or(Value::Null);
            match dispatch(&cfg, &cli.command) {
                Ok(rep) => {
                    let code = if rep.passed() { EXIT_OK } else { EXIT_CERTIFICATION };
                    let body = json!({
                        "checks": rep.checks,
                        "worst_residual": rep.worst_residual,
                        "artifacts": rep.artifacts,
                    });
                    (code, echo, body)
                }
                Err(e) => (e.exit_code(), echo, json!({ "error": e.to_string() })),
            }
        }
    };
    let mut env = json!({
        "command": argv,
        "config": cfg_echo,
        "exit_code": code,
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    if let (Value::Object(env), Value::Object(body)) = (&mut env, body) {
        env.extend(body);
    }
    (code, export::sort_keys(env))
}

/// Parses `argv` and runs it; clap errors map to the usage exit code.
pub fn main_with_args(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (code, env) = run(&cli, &argv);
    println!("{}", serde_json::to_string_pretty(&env).unwrap_or_default());
    code
}
