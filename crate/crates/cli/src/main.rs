//! Command-line front end: `simulate`, `verify` and `norms validate`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anisoflow::io::{emit_outputs, parse_config, run_suite, simulate, RunConfigFile, RunError, Suite};
use anisoflow::kernel::{validate_spec, NormSpec};
use anisoflow::schemes::{SchemeError, StopReason};
use clap::{Parser, Subcommand, ValueEnum};

/// Overrides `output_dir` of the config file.
const OUTPUT_ENV: &str = "ANISOFLOW_OUTPUT";
const NORM_SAMPLES: usize = 1000;

const CHECK_FAILED: u8 = 1;
const CONFIG_ERROR: u8 = 2;
const RUNTIME_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "anisoflow", version, about = "Anisotropic mean curvature flow in Minkowski spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the flow and write diagnostics.csv, snapshots.ndjson and run_meta.json.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run theorem checks on the configured flow and print the results as JSON.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        config: PathBuf,
    },
    /// Norm utilities.
    Norms {
        #[command(subcommand)]
        command: NormsCommand,
    },
}

#[derive(Subcommand)]
enum NormsCommand {
    /// Check the norm axioms and tensor identities of a norm spec.
    Validate { spec: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Wulff,
    Area,
    Hmin,
    Convexity,
    Comparison,
    Evolution,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Wulff => Suite::Wulff,
            SuiteArg::Area => Suite::Area,
            SuiteArg::Hmin => Suite::Hmin,
            SuiteArg::Convexity => Suite::Convexity,
            SuiteArg::Comparison => Suite::Comparison,
            SuiteArg::Evolution => Suite::Evolution,
            SuiteArg::All => Suite::All,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate { config } => cmd_simulate(&config),
        Command::Verify { suite, config } => cmd_verify(&config, suite.into()),
        Command::Norms { command: NormsCommand::Validate { spec } } => cmd_validate(&spec),
    };
    ExitCode::from(code)
}

fn fail(code: u8, err: impl std::fmt::Display) -> u8 {
    eprintln!("error: {err}");
    code
}

fn exit_code(err: &RunError) -> u8 {
    match err {
        RunError::Config(_) | RunError::Initial(_) => CONFIG_ERROR,
        RunError::Scheme(SchemeError::InvalidConfig(_) | SchemeError::WrongRepresentation) => CONFIG_ERROR,
        _ => RUNTIME_ERROR,
    }
}

fn load(path: &Path) -> Result<RunConfigFile, u8> {
    let mut cfg = parse_config(path).map_err(|e| fail(CONFIG_ERROR, e))?;
    if let Some(dir) = std::env::var_os(OUTPUT_ENV) {
        cfg.output_dir = dir.into();
    }
    Ok(cfg)
}

fn cmd_simulate(path: &Path) -> u8 {
    let cfg = match load(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let (rec, wall) = match simulate(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(exit_code(&e), e),
    };
    if let Err(e) = emit_outputs(&rec, &cfg, &cfg.output_dir, wall) {
        return fail(RUNTIME_ERROR, e);
    }
    let summary = serde_json::json!({
        "output_dir": cfg.output_dir,
        "halt_reason": rec.halt,
        "steps": rec.steps(),
        "final_time": rec.halt_time(),
    });
    println!("{summary}");
    match rec.halt {
        StopReason::SchemeError(msg) => fail(RUNTIME_ERROR, msg),
        _ => 0,
    }
}

fn cmd_verify(path: &Path, suite: Suite) -> u8 {
    let cfg = match load(path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let outcomes = match run_suite(&cfg, suite) {
        Ok(o) => o,
        Err(e) => return fail(exit_code(&e), e),
    };
    println!("{}", serde_json::to_string_pretty(&outcomes).expect("check results serialize"));
    if outcomes.iter().all(|o| o.pass()) {
        0
    } else {
        CHECK_FAILED
    }
}

fn cmd_validate(path: &Path) -> u8 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(CONFIG_ERROR, format!("{}: {e}", path.display())),
    };
    let spec: NormSpec = match serde_json::from_str(&text) {
        Ok(s) => s,
        Err(e) => return fail(CONFIG_ERROR, format!("{}: {e}", path.display())),
    };
    let report = validate_spec(&spec, NORM_SAMPLES);
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.params_error.is_some() {
        CONFIG_ERROR
    } else if report.pass {
        0
    } else {
        CHECK_FAILED
    }
}
