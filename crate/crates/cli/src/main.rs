use clap::error::ErrorKind;
use clap::Parser;

use efas_cli::args::{Cli, Command};
use efas_cli::commands;
use efas_cli::config::RunConfig;
use efas_cli::exit_code_for;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            std::process::exit(0);
        }
        Err(e) => {
            eprint!("{e}");
            std::process::exit(1);
        }
    };
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    let cfg = match RunConfig::resolve(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let outcome = match cli.command {
        Command::FigOutage => commands::fig_outage::run(&cfg).map(|p| vec![p]),
        Command::FigCapacity => commands::fig_capacity::run(&cfg).map(|p| vec![p]),
        Command::FigZfDist => commands::fig_zf_dist::run(&cfg).map(|p| vec![p]),
        Command::FigSumrate { vary } => commands::fig_sumrate::run(&cfg, vary).map(|p| vec![p]),
        Command::PhysicalOmega => commands::physical::run(&cfg).map(|p| vec![p]),
        Command::Validate => {
            return match commands::validate::run(&cfg) {
                Ok(outcome) => {
                    print!("{}", outcome.text);
                    println!("report: {}", outcome.report_path.display());
                    println!("summary: {}", outcome.summary_path.display());
                    if outcome.all_pass {
                        0
                    } else {
                        3
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code_for(&e)
                }
            };
        }
    };
    match outcome {
        Ok(paths) => {
            for path in paths {
                println!("wrote {}", path.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
