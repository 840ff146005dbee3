mod args;
mod commands;
mod grid;
mod output;

use clap::error::ErrorKind;
use clap::Parser;

use kneser_topo::{Caps, Result};

use args::{Cli, Command, GlobalArgs};
use output::{exit_code_for, Output};

fn caps_from(g: &GlobalArgs) -> Result<Caps> {
    let mut caps = match &g.caps_env {
        Some(spec) => Caps::default().with_overrides(spec)?,
        None => Caps::default(),
    };
    if let Some(v) = g.max_elements {
        caps.max_elements = v;
    }
    if let Some(v) = g.max_simplices {
        caps.max_simplices = v;
    }
    if let Some(v) = g.vertex_budget {
        caps.vertex_budget = v;
    }
    caps.validate()?;
    Ok(caps)
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let caps = caps_from(&cli.global)?;
    match &cli.command {
        Command::Enumerate(i) => commands::enumerate(i),
        Command::Graph(i) => commands::graph(i),
        Command::Ncomplex(i) => commands::ncomplex(i, &caps),
        Command::PairPoset(i) => commands::pair_poset(i, &caps),
        Command::Homology { instance, target, unreduced } => commands::homology(instance, *target, *unreduced, &caps),
        Command::VerifyTheorem2(i) => commands::verify_theorem2(i, &caps),
        Command::VerifyTheorem3(i) => commands::verify_theorem3(i, &caps),
        Command::VerifyProofs { instance, s_star, rules } => {
            commands::verify_proofs(instance, s_star.as_deref(), *rules, &caps)
        }
        Command::Corollary10 { n, k } => commands::corollary10(*n, *k, &caps),
        Command::Grid(args) => grid::grid(args, &caps, cli.global.jobs),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match dispatch(&cli) {
        Ok(out) => match output::write(&out, cli.global.format, cli.global.out.as_deref()) {
            Ok(()) => out.exit_code,
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                1
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}
