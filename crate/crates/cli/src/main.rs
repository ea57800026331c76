//! `arbor`: batch experiments on self-similar groups, tree colorings and
//! Bratteli diagrams.

mod bratteli_cmd;
mod coloring_cmd;
mod cosofic;
mod group;
mod report;
mod selftest;
mod subject;

use std::path::PathBuf;
use std::process::ExitCode;

use arbor::ErrorClass;
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "arbor", version, about = "Exact experiments on self-similar groups, tree colorings and Bratteli diagrams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for independent sweep instances (0 uses every core)
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Write the report to this file instead of standard output
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Run the oracle checks of the subcommand's module instead of a report
    #[arg(long, global = true)]
    selftest: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Self-similar group tables, level quotients, nuclei and activity
    #[command(subcommand)]
    Group(group::GroupCmd),
    /// Red/green/blue coloring of a closed boundary set
    Coloring(coloring_cmd::ColoringArgs),
    /// Bad-blue-vertex accounting for the approximating subgroups K_i(H)
    CosoficSim(cosofic::CosoficArgs),
    /// Path counts and orbit averages on Bratteli diagrams
    #[command(subcommand)]
    Bratteli(bratteli_cmd::BratteliCmd),
    /// Run every module's oracle checks
    Selftest,
}

/// A failed internal consistency check.
#[derive(Debug)]
pub struct CheckFailed(pub String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "consistency check failed: {}", self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn classify(err: &anyhow::Error) -> ErrorClass {
    for cause in err.chain() {
        if cause.downcast_ref::<CheckFailed>().is_some() {
            return ErrorClass::Invariant;
        }
        if let Some(e) = cause.downcast_ref::<arbor::selfsim::SelfSimError>() {
            return e.class();
        }
        if let Some(e) = cause.downcast_ref::<arbor::permgrp::PermGroupError>() {
            return e.class();
        }
        if let Some(e) = cause.downcast_ref::<arbor::coloring::ColoringError>() {
            return e.class();
        }
        if let Some(e) = cause.downcast_ref::<arbor::bratteli::BratteliError>() {
            return e.class();
        }
        if let Some(e) = cause.downcast_ref::<arbor::treecore::TreeError>() {
            return e.class();
        }
    }
    ErrorClass::Config
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Config => 2,
        ErrorClass::CapExceeded => 3,
        ErrorClass::Invariant => 4,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global()?;
    let out = cli.output.as_deref();
    let module = match &cli.command {
        Command::Group(_) => Some(selftest::Module::Group),
        Command::Coloring(_) => Some(selftest::Module::Coloring),
        Command::CosoficSim(_) => Some(selftest::Module::Cosofic),
        Command::Bratteli(_) => Some(selftest::Module::Bratteli),
        Command::Selftest => None,
    };
    if cli.selftest || module.is_none() {
        return selftest::run(module, out);
    }
    match cli.command {
        Command::Group(cmd) => group::run(cmd, out),
        Command::Coloring(args) => coloring_cmd::run(args, out),
        Command::CosoficSim(args) => cosofic::run(args, out),
        Command::Bratteli(cmd) => bratteli_cmd::run(cmd, out),
        Command::Selftest => unreachable!("handled above"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let class = classify(&err);
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(class))
        }
    }
}
