use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use fourlines_core::closed_forms::{
    effective_lower_bound_log10, t_enumerate_minimal, t_surface, t_surface_chains, weighted_hypersurface_k2,
};
use fourlines_core::format::{parse, serialize};
use fourlines_core::invisible::{search_orthogonal, support};
use fourlines_core::search::{search, Mode, SearchConfig};
use fourlines_core::singularity::solve_discrepancies;
use fourlines_core::{certify, format_rational, parse_rational, Rational, Status, WeightSystem};

const EXIT_NOT_CERTIFIED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "fourlines",
    version,
    about = "Log terminal surfaces from blowups of four lines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Generic,
    Cy,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a graph file and print its report.
    Verify {
        file: PathBuf,
        /// Override the weights of the file, as w0,w1,w2,w3.
        #[arg(long, allow_hyphen_values = true)]
        weights: Option<String>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Search for certified graphs of smallest volume.
    Search {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        /// Make corner 0 the boundary curve.
        #[arg(long)]
        boundary: bool,
        #[arg(long, default_value_t = 20)]
        max_blowups: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Cy)]
        mode: ModeArg,
        /// Keep only surfaces of this Picard rank.
        #[arg(long)]
        rho: Option<i64>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Number of best graphs to keep.
        #[arg(long, default_value_t = 16)]
        keep: usize,
        /// Directory for the .graph and .json files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariants of T(a1, a2, a3, a4), or the minimal ample list.
    Tsurf {
        a: Vec<i64>,
        /// List the minimal quadruples with A > 0 up to rotation.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value_t = 12)]
        cap: i64,
    },
    /// K² of a weighted hypersurface of degree d.
    Hypersurface { d: i64, w: Vec<i64> },
    /// log10 of the effective lower bound on volumes.
    Bound {
        #[arg(long)]
        delta: String,
    },
    /// Lattice classes orthogonal to the pulled-back canonical class.
    Invisible {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        d_max: i64,
    },
}

fn parse_weights(s: &str) -> anyhow::Result<[Rational; 4]> {
    let ws: Vec<Rational> = s.split(',').map(parse_rational).collect::<Result<_, _>>()?;
    match <[Rational; 4]>::try_from(ws) {
        Ok(w) => Ok(w),
        Err(v) => bail!("expected 4 weights, got {}", v.len()),
    }
}

fn read_graph(path: &PathBuf) -> anyhow::Result<fourlines_core::VisibleGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Verify { file, weights, json } => {
            let g = read_graph(&file)?;
            let ws = match weights {
                Some(s) => WeightSystem::new(parse_weights(&s)?),
                None => WeightSystem::of(&g),
            };
            let report = certify(&g, &ws);
            if json {
                println!("{}", serde_json::to_string_pretty(&report.to_json())?);
            } else {
                print!("{report}");
            }
            if report.status >= Status::BigNef {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_NOT_CERTIFIED))
            }
        }
        Command::Search {
            weights,
            boundary,
            max_blowups,
            mode,
            rho,
            jobs,
            keep,
            out,
        } => {
            let mode = match mode {
                ModeArg::Generic => Mode::Generic,
                ModeArg::Cy => Mode::CyStepUp,
            };
            let mut config = SearchConfig::new(parse_weights(&weights)?, boundary, max_blowups, mode);
            config.rho_filter = rho;
            config.jobs = jobs;
            config.keep = keep;
            let result = search(&config);
            println!(
                "assemblies: {} certified: {}",
                result.stats.assemblies, result.stats.certified
            );
            let Some(min) = result.min_volume() else {
                println!("no certified graph within {max_blowups} blowups");
                return Ok(ExitCode::from(EXIT_NOT_CERTIFIED));
            };
            println!("minimum volume: {}", format_rational(min));
            if let Some(dir) = &out {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            for (i, f) in result.best.iter().enumerate() {
                println!(
                    "{:3} volume {} rho {} blowups {} {}",
                    i,
                    format_rational(f.volume()),
                    f.report.rho,
                    f.report.blowups,
                    f.canonical
                );
                if let Some(dir) = &out {
                    let stem = format!("best_{i:03}");
                    let header = format!("# volume {}\n# {}\n", format_rational(f.volume()), f.canonical);
                    fs::write(dir.join(format!("{stem}.graph")), header + &serialize(&f.graph))?;
                    fs::write(
                        dir.join(format!("{stem}.json")),
                        serde_json::to_string_pretty(&f.report.to_json())? + "\n",
                    )?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tsurf { a, enumerate, cap } => {
            if enumerate {
                let list = t_enumerate_minimal(cap);
                for q in &list {
                    let t = t_surface(*q)?;
                    println!("{q:?} A={} K2={}", t.big_a, format_rational(&t.k2));
                }
                if let Some(best) = list.iter().map(|q| t_surface(*q).expect("valid").k2).min() {
                    println!("minimum K2={}", format_rational(&best));
                }
                return Ok(ExitCode::SUCCESS);
            }
            let Ok(a) = <[i64; 4]>::try_from(a) else {
                bail!("tsurf takes exactly four integers");
            };
            let t = t_surface(a)?;
            println!(
                "A={} B1={} B2={} K2={} {}",
                t.big_a,
                t.b1,
                t.b2,
                format_rational(&t.k2),
                if t.ample { "ample" } else { "not ample" }
            );
            let [c1, c2] = t_surface_chains(a)?;
            println!("chains {c1:?} {c2:?}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Hypersurface { d, w } => {
            println!("{}", format_rational(&weighted_hypersurface_k2(d, &w)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { delta } => {
            let delta = parse_rational(&delta)?;
            println!("{:.6e}", effective_lower_bound_log10(&delta)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Invisible { file, d_max } => {
            let g = read_graph(&file)?;
            let b = solve_discrepancies(&g)?;
            let names: Vec<&str> = support(&g, &b)?.into_iter().map(|v| g.name(v)).collect();
            println!("support: {}", names.join(" "));
            let found = search_orthogonal(&g, &b, d_max)?;
            println!("{} lattice candidate(s) with d <= {d_max}, m_i <= 2d", found.len());
            for c in &found {
                let mut coords = vec![c.d];
                coords.extend(c.m.iter().map(|x| -x));
                let meets: Vec<String> = c
                    .intersections
                    .iter()
                    .map(|(v, x)| format!("{}:{x}", g.name(*v)))
                    .collect();
                println!("{coords:?} D^2={} DK={} meets {}", c.self_int, c.k_int, meets.join(" "));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
