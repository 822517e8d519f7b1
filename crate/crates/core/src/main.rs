//! Command-line front end: diagrams, invariant construction, randomized
//! verification, canonicalization and orbit dimensions.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pinv::canonical::{make_y_point, t_reduce};
use pinv::diagram::{render_diagram, DiagramFormat};
use pinv::error::Error;
use pinv::jsonio::{
    diagram_json, invariants_json, point_from_json, point_to_json, transcript_to_json, PointJson,
};
use pinv::rat::Rat;
use pinv::roots::Root;
use pinv::verify::{run_independence_checks, run_invariance_checks, Structure};

#[derive(Parser)]
#[command(name = "pinv", version, about = "Borel invariants on parabolic nilradicals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Comma-separated diagonal block sizes, e.g. 2,1,3,2
    #[arg(long, value_parser = parse_blocks)]
    blocks: Option<std::vec::Vec<u32>>,
    /// Batch file with one block list per line (where supported)
    #[arg(long, value_name = "PATH")]
    input_file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the marked diagram of a block structure
    Diagram {
        #[command(flatten)]
        common: CommonArgs,
        /// ascii, unicode or json
        #[arg(long, default_value = "ascii")]
        format: String,
    },
    /// Emit the invariant families as JSON
    Invariants {
        #[command(flatten)]
        common: CommonArgs,
        /// base, extended, A, B or all
        #[arg(long, default_value = "all")]
        which: String,
    },
    /// Randomized exact invariance and independence verification
    Check {
        #[command(flatten)]
        common: CommonArgs,
        /// Conjugation trials per family
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Seed for the deterministic generator
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Reduce a Y-slice point (JSON file) to its canonical representative
    Canonicalize {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Dimension of an orbit in general position
    OrbitDim {
        #[command(flatten)]
        common: CommonArgs,
        /// text or json
        #[arg(long, default_value = "text")]
        format: String,
    },
}

fn parse_blocks(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad block size {part:?}"))
        })
        .collect()
}

/// Block lists for batch-capable commands: --blocks, or one list per line
/// of --input-file.
fn block_lists(common: &CommonArgs) -> Result<Vec<Vec<u32>>, Error> {
    match (&common.blocks, &common.input_file) {
        (Some(blocks), _) => Ok(vec![blocks.clone()]),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let mut lists = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                lists.push(parse_blocks(line).map_err(Error::InvalidInput)?);
            }
            if lists.is_empty() {
                return Err(Error::InvalidInput("no block lists in file".into()));
            }
            Ok(lists)
        }
        (None, None) => Err(Error::InvalidInput(
            "--blocks (or --input-file with block lists) required".into(),
        )),
    }
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Diagram { common, format } => {
            for sizes in block_lists(&common)? {
                let st = Structure::new(&sizes)?;
                match format.as_str() {
                    "json" => {
                        let j = diagram_json(&st.bs, &st.ext, &st.psi);
                        println!("{}", serde_json::to_string_pretty(&j)?);
                    }
                    other => {
                        let fmt: DiagramFormat = other.parse()?;
                        print!("{}", render_diagram(&st.bs, &st.ext, &st.psi, fmt));
                    }
                }
            }
            Ok(true)
        }
        Command::Invariants { common, which } => {
            for sizes in block_lists(&common)? {
                let st = Structure::new(&sizes)?;
                let list = invariants_json(&st.family, &st.ext, &st.psi, &which)?;
                println!("{}", serde_json::to_string_pretty(&list)?);
            }
            Ok(true)
        }
        Command::Check {
            common,
            trials,
            seed,
        } => {
            if trials == 0 {
                return Err(Error::InvalidInput("--trials must be at least 1".into()));
            }
            let mut all_passed = true;
            for sizes in block_lists(&common)? {
                let st = Structure::new(&sizes)?;
                let report = run_invariance_checks(&st, trials, seed)?;
                let independent = run_independence_checks(&st, seed);
                match (&independent, report.passed()) {
                    (Ok(()), true) => println!("{:?}: {}", sizes, report.summary()),
                    (Err(e), true) => {
                        all_passed = false;
                        println!("{:?}: {}", sizes, e);
                    }
                    _ => {
                        all_passed = false;
                        println!("{:?}: {}", sizes, report.summary());
                    }
                }
            }
            Ok(all_passed)
        }
        Command::Canonicalize { common } => {
            let blocks = common
                .blocks
                .clone()
                .ok_or_else(|| Error::InvalidInput("--blocks required".into()))?;
            let path = common
                .input_file
                .ok_or_else(|| Error::InvalidInput("--input-file with a point required".into()))?;
            let st = Structure::new(&blocks)?;
            let json: PointJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
            let point = point_from_json(&json, &st.sets)?;
            let coeffs: BTreeMap<Root, Rat> = point
                .support()
                .map(|(root, v)| (root, v.clone()))
                .collect();
            let y = make_y_point(&st.bs, &st.sets, &st.ext, &coeffs)?;
            let (x, transcript) = t_reduce(&y, &st.bs, &st.sets, &st.ext, &st.psi)?;
            let out = serde_json::json!({
                "point": point_to_json(&x.point),
                "transcript": transcript_to_json(&transcript),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(true)
        }
        Command::OrbitDim { common, format } => {
            for sizes in block_lists(&common)? {
                let st = Structure::new(&sizes)?;
                let dim_m = st.sets.dim_m();
                let psi = st.psi.len();
                match format.as_str() {
                    "json" => println!(
                        "{}",
                        serde_json::json!({
                            "blocks": sizes,
                            "dim_m": dim_m,
                            "psi": psi,
                            "orbit_dim": dim_m - psi,
                        })
                    ),
                    "text" => println!(
                        "blocks {:?}: dim m = {}, |Psi| = {}, generic orbit dimension = {}",
                        sizes,
                        dim_m,
                        psi,
                        dim_m - psi
                    ),
                    other => return Err(Error::UnsupportedFormat(other.to_string())),
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
