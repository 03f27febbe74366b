mod cli;
mod commands;
mod run;

use std::process::ExitCode;

use clap::Parser;
use sumlab::Error;

use crate::cli::{Cli, Command};

const EXIT_PASS: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Invariant(_) => EXIT_VIOLATION,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS });
        }
    };
    if cli.common.workers > 0 {
        // only fails if a pool already exists, which cannot happen this early
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.common.workers).build_global();
    }
    let common = &cli.common;
    let outcome = match &cli.command {
        Command::Enumerate(a) => commands::enumerate_config(common, a)
            .and_then(|cfg| run::execute("enumerate", common, cfg, || commands::enumerate(common, a))),
        Command::Verify(a) => {
            let stem = format!("verify-{}", serde_json::to_value(a.suite).unwrap().as_str().unwrap());
            commands::verify_config(common, a).and_then(|cfg| run::execute(&stem, common, cfg, || commands::verify(a)))
        }
        Command::Construct(a) => {
            let stem = format!("construct-{}", serde_json::to_value(a.name).unwrap().as_str().unwrap());
            commands::construct_config(common, a)
                .and_then(|cfg| run::execute(&stem, common, cfg, || commands::construct(common, a)))
        }
    };
    match outcome {
        Ok(o) => {
            for line in &o.output.summary {
                println!("{line}");
            }
            println!("wrote {}", o.artifact.display());
            ExitCode::from(if o.output.passed { EXIT_PASS } else { EXIT_VIOLATION })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
