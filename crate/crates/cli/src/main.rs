use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use flipkit::tilings::Handedness;
use flipkit::tol::{env_scale, Tolerances};
use flipkit::Result;
use flipkit_cli::commands::{
    check_report, cmd_dual, cmd_flip, cmd_project, cmd_reconstruct, cmd_render, cmd_solve, exit_code,
};
use flipkit_cli::io::{read_text, to_json, write_text};
use flipkit_cli::render::Projection;

#[derive(Parser)]
#[command(name = "flipkit", version, about = "Flippable tilings and convex polyhedral surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProjectionArg {
    Stereographic,
    Poincare,
}

#[derive(clap::Args)]
struct Files {
    /// Input JSON file.
    #[arg(short, long)]
    input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Left or right projection of a polyhedron to a tiling.
    Project {
        #[command(flatten)]
        files: Files,
        #[arg(long, value_enum, default_value = "left")]
        side: SideArg,
    },
    /// Flip a tiling.
    Flip {
        #[command(flatten)]
        files: Files,
    },
    /// Polar dual of a polyhedron.
    Dual {
        #[command(flatten)]
        files: Files,
    },
    /// Polyhedron whose projection is the given tiling.
    Reconstruct {
        #[command(flatten)]
        files: Files,
    },
    /// Solve for heights with prescribed curvatures, or evaluate given heights.
    Solve {
        #[command(flatten)]
        files: Files,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Extra solves from random feasible starts.
        #[arg(long, default_value_t = 0)]
        restarts: usize,
    },
    /// SVG picture of a tiling.
    Render {
        #[command(flatten)]
        files: Files,
        #[arg(long, value_enum, default_value = "stereographic")]
        projection: ProjectionArg,
    },
    /// Validate artifacts; several inputs are checked concurrently.
    Check {
        /// Input JSON files.
        #[arg(short, long, num_args = 1.., required = true)]
        input: Vec<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance scale; overrides FLIPKIT_TOL.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn transform(files: &Files, f: impl Fn(&str) -> Result<String>) -> Result<bool> {
    let out = f(&read_text(&files.input)?)?;
    write_text(files.output.as_deref(), &out)?;
    Ok(true)
}

fn check(inputs: &[PathBuf], output: Option<&Path>, seed: u64, tol: &Tolerances) -> Result<bool> {
    let reports = std::thread::scope(|scope| {
        let handles: Vec<_> = inputs
            .iter()
            .map(|p| scope.spawn(move || read_text(p).and_then(|text| check_report(&text, seed, tol))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect::<Result<Vec<_>>>()
    })?;
    let passed = reports.iter().all(|r| r.passed);
    let text = if reports.len() == 1 { to_json(&reports[0])? } else { to_json(&reports)? };
    write_text(output, &text)?;
    Ok(passed)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Project { files, side } => {
            let side = match side {
                SideArg::Left => Handedness::Left,
                SideArg::Right => Handedness::Right,
            };
            transform(&files, |t| cmd_project(t, side))
        }
        Command::Flip { files } => transform(&files, cmd_flip),
        Command::Dual { files } => transform(&files, cmd_dual),
        Command::Reconstruct { files } => transform(&files, cmd_reconstruct),
        Command::Solve { files, seed, restarts } => transform(&files, |t| cmd_solve(t, seed, restarts)),
        Command::Render { files, projection } => {
            let projection = match projection {
                ProjectionArg::Stereographic => Projection::Stereographic,
                ProjectionArg::Poincare => Projection::Poincare,
            };
            transform(&files, |t| cmd_render(t, projection))
        }
        Command::Check { input, output, seed, tol } => {
            let tol = Tolerances::default().scaled(tol.unwrap_or_else(env_scale));
            check(&input, output.as_deref(), seed, &tol)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("flipkit: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
