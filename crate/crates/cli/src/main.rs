//! `vee`: command-line front end for vee-core. Every command prints one JSON
//! report on stdout and exits 0 (pass), 1 (fail) or 2 (input error).

mod commands;
mod corpus;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vee_core::Result;

use commands::Input;
use report::{Outcome, Report};

#[derive(Parser)]
#[command(name = "vee", version, about = "Exact checks for ∨-systems and their arrangements")]
struct Cli {
    /// Worker threads for corpus runs.
    #[arg(long, env = "VEE_THREADS", global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plane-wise ∨-conditions.
    Check { file: PathBuf },
    /// Canonical form G_A.
    Canonical { file: PathBuf },
    /// ∨-duals G_A⁻¹α.
    Dual { file: PathBuf },
    /// Holonomy (Kohno) relations.
    Holonomy { file: PathBuf },
    /// Decomposition into irreducible components.
    Components { file: PathBuf },
    /// Flat sections of degree κ.
    Flat {
        #[arg(long)]
        kappa: u32,
        file: PathBuf,
    },
    /// Harmonicity search with a freeness certificate.
    Harmonic { file: PathBuf },
    /// Dimension of quasi-invariants of a given degree.
    Quasi {
        #[arg(long)]
        degree: u32,
        file: PathBuf,
    },
    /// Closed-form potentials: an, bn, f4, zaslavsky, dihedral-b2.
    Potentials {
        family: String,
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Arrangement computations.
    Arr {
        #[command(subcommand)]
        command: ArrCommand,
    },
    /// Instantiate a named family.
    Family {
        name: String,
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Run the bundled corpus against its expectations.
    Corpus {
        #[arg(long)]
        only: Option<String>,
        /// Corpus directory (defaults to the bundled one).
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Include checks marked slow.
        #[arg(long)]
        slow: bool,
    },
}

#[derive(Subcommand)]
enum ArrCommand {
    Lattice {
        file: PathBuf,
    },
    Poincare {
        file: PathBuf,
    },
    Factor {
        file: PathBuf,
    },
    Restrict {
        #[arg(long)]
        hyperplane: usize,
        file: PathBuf,
    },
    Saito {
        #[arg(long)]
        fields: PathBuf,
        file: PathBuf,
    },
}

/// Runs a command over a system file.
fn on_file(
    command: &str,
    anchor: &'static str,
    file: &Path,
    extra: &str,
    run: impl FnOnce(&Input) -> Result<Outcome>,
) -> Report {
    match commands::load_system(file) {
        Ok(input) => {
            let canonical = format!("{}{extra}", input.canonical);
            match run(&input) {
                Ok(outcome) => Report::new(command, &canonical, anchor, outcome),
                Err(e) => Report::error(command, &canonical, anchor, &e),
            }
        }
        Err(e) => Report::error(command, &file.display().to_string(), anchor, &e),
    }
}

fn dispatch(cli: Cli) -> Report {
    match cli.command {
        Command::Check { file } => on_file("check", "vee-conditions", &file, "", commands::check),
        Command::Canonical { file } => on_file("canonical", "canonical-form", &file, "", commands::canonical),
        Command::Dual { file } => on_file("dual", "vee-duals", &file, "", commands::dual),
        Command::Holonomy { file } => on_file("holonomy", "holonomy-equivalence", &file, "", commands::holonomy),
        Command::Components { file } => {
            on_file("components", "irreducible-decomposition", &file, "", commands::components)
        }
        Command::Flat { kappa, file } => {
            on_file("flat", "flat-sections-epd", &file, &format!(" kappa={kappa}"), |i| commands::flat(i, kappa))
        }
        Command::Harmonic { file } => on_file("harmonic", "harmonic-freeness", &file, "", commands::harmonic),
        Command::Quasi { degree, file } => {
            on_file("quasi", "quasi-invariants", &file, &format!(" degree={degree}"), |i| commands::quasi(i, degree))
        }
        Command::Potentials { family, params } => {
            let canonical = format!("{family} {params}");
            match commands::potentials(&family, &params) {
                Ok(o) => Report::new("potentials", &canonical, "potential-formulas", o),
                Err(e) => Report::error("potentials", &canonical, "potential-formulas", &e),
            }
        }
        Command::Family { name, params } => match commands::family(&name, &params) {
            Ok((o, label)) => Report::new("family", &label, "family-definitions", o),
            Err(e) => Report::error("family", &format!("{name} {params}"), "family-definitions", &e),
        },
        Command::Arr { command } => match command {
            ArrCommand::Lattice { file } => {
                on_file("arr lattice", "intersection-lattice", &file, "", commands::arr_lattice)
            }
            ArrCommand::Poincare { file } => {
                on_file("arr poincare", "poincare-polynomial", &file, "", commands::arr_poincare)
            }
            ArrCommand::Factor { file } => {
                on_file("arr factor", "terao-factorization", &file, "", commands::arr_factor)
            }
            ArrCommand::Restrict { hyperplane, file } => {
                on_file("arr restrict", "arrangement-restriction", &file, &format!(" hyperplane={hyperplane}"), |i| {
                    commands::arr_restrict(i, hyperplane)
                })
            }
            ArrCommand::Saito { fields, file } => match commands::load_fields(&fields) {
                Ok((fields, canonical_fields)) => {
                    on_file("arr saito", "saito-criterion", &file, &format!(" fields={canonical_fields}"), |i| {
                        commands::arr_saito(i, &fields)
                    })
                }
                Err(e) => Report::error("arr saito", &fields.display().to_string(), "saito-criterion", &e),
            },
        },
        Command::Corpus { only, dir, slow } => {
            let dir = dir.unwrap_or_else(corpus::default_dir);
            corpus::run(&dir, only.as_deref(), slow, cli.threads)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = dispatch(cli);
    if let Some(err) = report.payload.get("error").and_then(|e| e.as_str()) {
        eprintln!("vee {}: {err}", report.command);
    }
    print!("{}", report.render());
    ExitCode::from(report.verdict.exit_code() as u8)
}
