//! Command-line interface: congruence checks, invariant computations,
//! chord-diagram listings, diagram generation, and the batch harness.
//!
//! Exit codes: 0 success (and all verdicts pass), 1 congruence failure,
//! 2 parse or validation error.

mod format;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use trilink::chord;
use trilink::congruence::{self, CongruenceReport};
use trilink::doodle::{mu_invariant, Perm3};
use trilink::fixtures::{self, GenParams};
use trilink::link;
use trilink::magnus::{self, CyclicTriple, MagnusOptions, Residue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Machine,
}

#[derive(Parser)]
#[command(
    name = "trilink",
    version,
    about = "Doodle mu-invariants, chord-diagram pairings, and Milnor's triple linking number on exact planar diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the main congruence on a link diagram file
    Check {
        path: PathBuf,
        /// Base-gap index for the chord diagram on L1
        #[arg(long)]
        gap_k1: Option<usize>,
        /// Base-gap index for the chord diagram on L2
        #[arg(long)]
        gap_k2: Option<usize>,
        /// Base-gap index for the chord diagram on L3
        #[arg(long)]
        gap_k3: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Print the mu-invariant for all six component orderings
    Mu {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Chord diagram of one component: skeleton, chord sets, pairing
    Chords {
        path: PathBuf,
        /// Skeleton component (1-3)
        #[arg(short = 'k', long)]
        component: usize,
        /// Base-gap index
        #[arg(long)]
        gap: Option<usize>,
        /// Write realization coordinates (JSON) to this path
        #[arg(long)]
        export: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Linking matrix, delta, and the mu_bar residue of a link file
    Milnor {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Build the cyclic-height link L(D) of a doodle file
    Ld { doodle: PathBuf, out: PathBuf },
    /// Generate a diagram file
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 8)]
        min_vertices: usize,
        #[arg(long, default_value_t = 14)]
        max_vertices: usize,
        #[arg(long, default_value_t = 24)]
        grid: i64,
    },
    /// Batch congruence verdicts over a seeded random corpus
    Harness {
        #[arg(long, default_value_t = 200)]
        count: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    /// Venn-position doodle (three circles, Borromean projection)
    Venn,
    /// L(D) of the Venn doodle: a Borromean rings diagram
    VennLink,
    RandomDoodle,
    RandomLink,
    /// Forbidden-move fixture, strand above the central crossing
    ForbiddenA,
    /// Forbidden-move fixture, strand below the central crossing
    ForbiddenB,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Format(#[from] format::FormatError),
    #[error(transparent)]
    Congruence(#[from] congruence::CongruenceError),
    #[error(transparent)]
    Doodle(#[from] trilink::doodle::DoodleError),
    #[error(transparent)]
    Link(#[from] link::LinkError),
    #[error(transparent)]
    Magnus(#[from] magnus::MagnusError),
    #[error(transparent)]
    Chord(#[from] chord::ChordError),
    #[error(transparent)]
    Fixture(#[from] fixtures::FixtureError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Check {
            path,
            gap_k1,
            gap_k2,
            gap_k3,
            format,
        } => {
            let l = format::load_link(&path)?;
            let report = congruence::check_congruence_with(
                &l,
                [gap_k1, gap_k2, gap_k3],
                MagnusOptions::default(),
            )?;
            match format {
                Format::Text => print!("{}", render::congruence_text(&report)),
                Format::Machine => {
                    println!("{}", serde_json::to_string(&render::congruence_json(&report))?)
                }
            }
            Ok(if report.verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Command::Mu { path, format } => {
            let d = load_any_as_doodle(&path)?;
            let mut values = Vec::new();
            for sigma in Perm3::all() {
                values.push((sigma, mu_invariant(&d, sigma)?));
            }
            match format {
                Format::Text => {
                    for (sigma, v) in &values {
                        println!("mu{sigma} = {v}");
                    }
                }
                Format::Machine => {
                    let entries: Vec<_> = values
                        .iter()
                        .map(|(sigma, v)| {
                            let s = sigma.indices();
                            json!({ "order": [s[0] + 1, s[1] + 1, s[2] + 1], "mu": v })
                        })
                        .collect();
                    println!("{}", serde_json::to_string(&entries)?);
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Chords {
            path,
            component,
            gap,
            export,
            format,
        } => {
            if !(1..=3).contains(&component) {
                eprintln!("error: component must be 1, 2 or 3");
                return Ok(ExitCode::from(2));
            }
            let l = format::load_link(&path)?;
            let g = chord::build_chord_diagram(&l, component - 1, gap);
            let pairing = chord::pairing_combinatorial(&g)?;
            let realization = chord::realize_geometric(&g)?;
            let coords = render::realization_json(&realization);
            match format {
                Format::Text => print!("{}", render::chords_text(&g, pairing)),
                Format::Machine => {
                    println!(
                        "{}",
                        serde_json::to_string(&json!({
                            "component": component,
                            "gap": g.gap,
                            "pairing": pairing,
                            "realization": coords,
                        }))?
                    );
                }
            }
            if let Some(out) = export {
                std::fs::write(&out, serde_json::to_string_pretty(&coords)? + "\n")?;
                if format == Format::Text {
                    println!("realization written to {}", out.display());
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Milnor { path, format } => {
            let l = format::load_link(&path)?;
            let lk = link::linking_matrix(&l)?;
            let delta = link::delta_from_lk(lk);
            let mu_bar = magnus::mu_bar_oracle(&l, CyclicTriple::standard())?;
            // Degree-1 longitude coefficients, printed beside the half-sum
            // values as an independent route.
            let mut lk_magnus = [0i64; 3];
            let pairs = [(0usize, 1usize), (1, 2), (2, 0)];
            for (slot, (i, k)) in pairs.iter().enumerate() {
                let series = magnus::longitude_expansion(&l, *k, MagnusOptions::default())?;
                lk_magnus[slot] = series.coeff_lin(*i);
            }
            match format {
                Format::Text => {
                    println!(
                        "lk (half-sums)   lk12 = {}, lk23 = {}, lk31 = {}",
                        lk[0], lk[1], lk[2]
                    );
                    println!(
                        "lk (magnus)      lk12 = {}, lk23 = {}, lk31 = {}",
                        lk_magnus[0], lk_magnus[1], lk_magnus[2]
                    );
                    println!("delta            {delta}");
                    println!("mu_bar(123)      {mu_bar}");
                }
                Format::Machine => {
                    println!(
                        "{}",
                        serde_json::to_string(&json!({
                            "lk": lk,
                            "lk_magnus": lk_magnus,
                            "delta": delta,
                            "mu_bar": render::residue_json(&mu_bar),
                        }))?
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Ld { doodle, out } => {
            let d = format::load_doodle(&doodle)?;
            let l = link::construct_l_of_d(&d)?;
            format::save(&out, &format::link_to_file(&l))?;
            let report = congruence::verify_ld_theorem(&d)?;
            print!("{}", render::ld_text(&report));
            println!("written to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Gen {
            kind,
            seed,
            out,
            min_vertices,
            max_vertices,
            grid,
        } => {
            let params = GenParams {
                seed,
                min_vertices,
                max_vertices,
                grid,
                ..GenParams::default()
            };
            let file = match kind {
                GenKind::Venn => format::doodle_to_file(&fixtures::venn_doodle()),
                GenKind::VennLink => {
                    let l = link::construct_l_of_d(&fixtures::venn_doodle())?;
                    format::link_to_file(&l)
                }
                GenKind::RandomDoodle => format::doodle_to_file(&fixtures::random_doodle(&params)?),
                GenKind::RandomLink => format::link_to_file(&fixtures::random_link(&params)?),
                GenKind::ForbiddenA => format::doodle_to_file(&fixtures::forbidden_move_fixture().0),
                GenKind::ForbiddenB => format::doodle_to_file(&fixtures::forbidden_move_fixture().1),
            };
            format::save(&out, &file)?;
            println!("written to {}", out.display());
            Ok(ExitCode::SUCCESS)
        }

        Command::Harness {
            count,
            seed,
            format,
        } => run_harness(count, seed, format),
    }
}

/// A doodle file loads directly; a link file is projected.
fn load_any_as_doodle(path: &PathBuf) -> Result<trilink::doodle::Doodle, CliError> {
    let file = format::read_file(path)?;
    if file.crossings.is_some() {
        let l = format::load_link(path)?;
        Ok(link::project_to_doodle(&l))
    } else {
        Ok(format::load_doodle(path)?)
    }
}

fn run_harness(count: u32, seed: u64, format: Format) -> Result<ExitCode, CliError> {
    let mut failures: Vec<(u64, CongruenceReport)> = Vec::new();
    let mut summaries = Vec::new();
    let mut gap_stable = 0u32;
    let mut gap_sampled = 0u32;

    for c in 0..count {
        let diagram_seed = seed.wrapping_add(c as u64);
        let l = fixtures::random_link(&GenParams::seeded(diagram_seed))?;
        let report = congruence::check_congruence(&l)?;

        // Sampled re-basing stability: the RHS residue mod delta must not
        // depend on the base-gap choices.
        if c % 4 == 0 {
            gap_sampled += 1;
            let mut stable = true;
            let reference = Residue::new(report.rhs, report.delta);
            for k in 0..3 {
                for gap in 1..3usize {
                    let mut gaps = [None; 3];
                    gaps[k] = Some(gap);
                    let parts = congruence::rhs_theorem(&l, gaps)?;
                    if Residue::new(parts.rhs, report.delta) != reference {
                        stable = false;
                    }
                }
            }
            if stable {
                gap_stable += 1;
            }
        }

        if format == Format::Machine {
            summaries.push(json!({
                "seed": diagram_seed,
                "delta": report.delta,
                "verdict": report.verdict,
                "mu": report.mu,
                "mu_bar": render::residue_json(&report.lhs),
            }));
        }
        if !report.verdict {
            failures.push((diagram_seed, report));
        }
    }

    let passed = count as usize - failures.len();
    match format {
        Format::Text => {
            println!("harness: {passed}/{count} diagrams pass the congruence");
            println!("re-basing: RHS residue stable on {gap_stable}/{gap_sampled} sampled diagrams");
            for (s, report) in &failures {
                println!("--- FAILURE seed {s} ---");
                print!("{}", render::congruence_text(report));
            }
        }
        Format::Machine => {
            println!(
                "{}",
                serde_json::to_string(&json!({
                    "count": count,
                    "passed": passed,
                    "rebasing_stable": gap_stable,
                    "rebasing_sampled": gap_sampled,
                    "diagrams": summaries,
                }))?
            );
        }
    }
    Ok(if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
