use std::process::ExitCode;

use clap::{Parser, Subcommand};
use starmetric_cli::commands::{self, BallGridArgs, CheckLawsArgs, CompareArgs, QueryArgs, ResiduumArgs, TopologyArgs};
use starmetric_cli::{Verdict, USAGE_EXIT};

#[derive(Parser, Debug)]
#[command(name = "starmetric", version, about = "Star-metric spaces: law checks, residuums, VP-tree queries and ball grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the t-definer laws and the star-metric axioms on a point set.
    CheckLaws(CheckLawsArgs),
    /// Evaluate a -o b.
    Residuum(ResiduumArgs),
    /// k-NN or range queries through a VP-tree.
    Query(QueryArgs),
    /// Write a ball membership grid of a 2D space.
    BallGrid(BallGridArgs),
    /// Separation radii, normal separation and product ball inclusion.
    TopologyCheck(TopologyArgs),
    /// Pointwise order between t-definers on seeded samples.
    CompareTdefiners(CompareArgs),
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    match &cli.command {
        Command::CheckLaws(a) => commands::check_laws(a),
        Command::Residuum(a) => commands::residuum(a),
        Command::Query(a) => commands::query(a),
        Command::BallGrid(a) => commands::ball_grid(a),
        Command::TopologyCheck(a) => commands::topology_check(a),
        Command::CompareTdefiners(a) => commands::compare_tdefiners(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(v) => ExitCode::from(v.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}
