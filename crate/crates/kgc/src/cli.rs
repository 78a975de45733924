//! The `kgc` command-line interface.
//!
//! Exit codes follow the verdict tri-state: 0 affirmative/success,
//! 1 negative (invalid, not isomorphic, not realizable, not an
//! imprimitivity bimodule, empty enumeration), 2 unknown, 3 usage or
//! input error. Output is deterministic given inputs and seed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::correspondences::tensor;
use crate::formats;
use crate::graphs::SquareEnumerator;
use crate::imprimitivity;
use crate::product_systems::{
    hexagon_check, omega, realizability, skeleton_from_kgraph, IsoSearchOptions, IsoStatus,
    Realizability, RealizabilityOptions,
};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "kgc",
    version,
    about = "Finite k-graphs and product-system skeletons",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check that a k-graph presentation is valid (bijective
    /// range/source-preserving squares; cube condition for k >= 3).
    Validate {
        /// kgc-2graph/kgc-kgraph file
        file: PathBuf,
    },
    /// Extract the skeleton (Y, T) of a valid k-graph presentation.
    Skeleton {
        /// kgc-2graph/kgc-kgraph file
        file: PathBuf,
        /// Write the kgc-skeleton document here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify the hexagonal equations of a skeleton (vacuous for
    /// k <= 2).
    Hexagon {
        /// kgc-skeleton file
        file: PathBuf,
        /// Max-entry residual tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Compute the omega invariant of a rank-2 single-vertex skeleton
    /// with 1-dimensional fibers.
    Omega {
        /// kgc-skeleton file
        file: PathBuf,
    },
    /// Decide whether two skeletons are isomorphic (exact criteria
    /// first, then a seeded unitary search).
    Iso {
        /// first kgc-skeleton file
        a: PathBuf,
        /// second kgc-skeleton file
        b: PathBuf,
        /// Witness residual tolerance
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Random restarts of the unitary search
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decide whether a skeleton is isomorphic to a k-graph
    /// correspondence.
    Realize {
        /// kgc-skeleton file
        file: PathBuf,
        /// Candidate presentation cap
        #[arg(long, default_value_t = 1_000_000)]
        max_candidates: usize,
        /// Witness residual tolerance for candidate matching
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Random restarts per candidate
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the witness presentation here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Enumerate the range/source-preserving bijections
    /// (E*F)^1 -> (F*E)^1 for two graphs.
    Enumerate {
        /// first kgc-graph file
        a: PathBuf,
        /// second kgc-graph file
        b: PathBuf,
        /// Stop after this many squares
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Detect an imprimitivity bimodule and its Rieffel permutation.
    Imprimitivity {
        /// kgc-corr file
        file: PathBuf,
    },
    /// Balanced tensor product of two correspondences.
    Tensor {
        /// first kgc-corr file
        a: PathBuf,
        /// second kgc-corr file
        b: PathBuf,
        /// Write the kgc-corr document here instead of stdout
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Runs the CLI on the given arguments and returns the process exit
/// code. Output goes to stdout, diagnostics to stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version as "errors" with exit 0
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::from(EXIT_OK);
        }
    };
    match dispatch(cli.cmd) {
        Ok(Outcome { report, exit }) => {
            print!("{report}");
            ExitCode::from(exit)
        }
        Err(message) => {
            eprintln!("kgc: {message}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

struct Outcome {
    report: String,
    exit: u8,
}

fn ok(report: String) -> Result<Outcome, String> {
    Ok(Outcome {
        report,
        exit: EXIT_OK,
    })
}

fn verdict(report: String, affirmative: bool) -> Result<Outcome, String> {
    Ok(Outcome {
        report,
        exit: if affirmative { EXIT_OK } else { EXIT_NEGATIVE },
    })
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load<T>(
    path: &Path,
    parse: impl Fn(&str) -> Result<T, formats::ParseError>,
) -> Result<T, String> {
    parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

/// Emits a document to `-o <file>` or, absent that, into the report.
fn emit(doc: String, output: Option<&Path>, report: &mut String) -> Result<(), String> {
    match output {
        Some(path) => {
            std::fs::write(path, doc).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            report.push_str(&doc);
            Ok(())
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<Outcome, String> {
    match cmd {
        Cmd::Validate { file } => {
            let p = load(&file, formats::parse_kgraph)?;
            let v = p.validate();
            if v.is_valid() {
                verdict("VALID\n".into(), true)
            } else {
                let mut report = String::from("INVALID\n");
                for violation in &v.violations {
                    let _ = writeln!(report, "  {violation}");
                }
                verdict(report, false)
            }
        }
        Cmd::Skeleton { file, output } => {
            let p = load(&file, formats::parse_kgraph)?;
            let s = skeleton_from_kgraph(&p).map_err(|e| e.to_string())?;
            let mut report = String::new();
            emit(formats::serialize_skeleton(&s), output.as_deref(), &mut report)?;
            ok(report)
        }
        Cmd::Hexagon { file, tol } => {
            let s = load(&file, formats::parse_skeleton)?;
            let r = hexagon_check(&s, tol).map_err(|e| e.to_string())?;
            let mut report = String::new();
            let _ = writeln!(
                report,
                "{} max residual {:e}",
                if r.pass { "HEXAGON_PASS" } else { "HEXAGON_FAIL" },
                r.max_residual
            );
            for ((i, j, l), res) in &r.residuals {
                let _ = writeln!(report, "  triple {} {} {}: {res:e}", i + 1, j + 1, l + 1);
            }
            verdict(report, r.pass)
        }
        Cmd::Omega { file } => {
            let s = load(&file, formats::parse_skeleton)?;
            let w = omega(&s).map_err(|e| e.to_string())?;
            ok(format!("omega = {}\n", formats::format_complex(w.value)))
        }
        Cmd::Iso {
            a,
            b,
            tol,
            restarts,
            seed,
        } => {
            let s = load(&a, formats::parse_skeleton)?;
            let t = load(&b, formats::parse_skeleton)?;
            let opts = IsoSearchOptions {
                restarts,
                tol,
                seed,
                ..IsoSearchOptions::default()
            };
            let v = crate::product_systems::skeleton_iso_search(&s, &t, opts)
                .map_err(|e| e.to_string())?;
            let mut report = String::new();
            let label = match v.status {
                IsoStatus::Isomorphic => "ISOMORPHIC",
                IsoStatus::NotIsomorphic => "NOT_ISOMORPHIC",
                IsoStatus::Unknown => "UNKNOWN",
            };
            let _ = writeln!(report, "{label}: {}", v.reason);
            if let Some(res) = v.residual {
                let _ = writeln!(report, "residual = {res:e}");
            }
            Ok(Outcome {
                report,
                exit: match v.status {
                    IsoStatus::Isomorphic => EXIT_OK,
                    IsoStatus::NotIsomorphic => EXIT_NEGATIVE,
                    IsoStatus::Unknown => EXIT_UNKNOWN,
                },
            })
        }
        Cmd::Realize {
            file,
            max_candidates,
            tol,
            restarts,
            seed,
            output,
        } => {
            let s = load(&file, formats::parse_skeleton)?;
            let opts = RealizabilityOptions {
                max_candidates,
                iso: IsoSearchOptions {
                    restarts,
                    tol,
                    seed,
                    ..IsoSearchOptions::default()
                },
            };
            match realizability(&s, opts).map_err(|e| e.to_string())? {
                Realizability::Realizable(witness) => {
                    let mut report = String::from("REALIZABLE\n");
                    emit(formats::serialize_kgraph(&witness), output.as_deref(), &mut report)?;
                    ok(report)
                }
                Realizability::NotRealizable(reason) => {
                    verdict(format!("NOT_REALIZABLE: {reason}\n"), false)
                }
                Realizability::Unknown(reason) => Ok(Outcome {
                    report: format!("UNKNOWN: {reason}\n"),
                    exit: EXIT_UNKNOWN,
                }),
            }
        }
        Cmd::Enumerate { a, b, limit } => {
            let e = load(&a, formats::parse_graph)?;
            let f = load(&b, formats::parse_graph)?;
            let stream = SquareEnumerator::new(&e, &f).map_err(|err| err.to_string())?;
            let forward = crate::graphs::fibred_product(&e, &f).map_err(|err| err.to_string())?;
            let backward = crate::graphs::fibred_product(&f, &e).map_err(|err| err.to_string())?;
            let (squares, truncated) = stream.collect_limited(limit.unwrap_or(usize::MAX));
            let mut report = String::new();
            for (idx, sq) in squares.iter().enumerate() {
                let _ = writeln!(report, "square {}", idx + 1);
                for (src, &dst) in sq.iter().enumerate() {
                    let (ei, fi) = forward.pair(src);
                    let (ft, et) = backward.pair(dst);
                    let _ = writeln!(
                        report,
                        "  {} {} -> {} {}",
                        e.edges()[ei].label,
                        f.edges()[fi].label,
                        f.edges()[ft].label,
                        e.edges()[et].label
                    );
                }
            }
            let _ = writeln!(
                report,
                "count {}{}",
                squares.len(),
                if truncated { " (truncated)" } else { "" }
            );
            verdict(report, !squares.is_empty())
        }
        Cmd::Imprimitivity { file } => {
            let x = load(&file, formats::parse_correspondence)?;
            let r = imprimitivity::analyze(&x);
            let mut report = String::new();
            if r.is_imprimitivity {
                let _ = writeln!(report, "IMPRIMITIVITY: {}", r.reason);
                let _ = writeln!(
                    report,
                    "symmetric: {}",
                    if r.is_symmetric { "yes" } else { "no" }
                );
                let h = r.rieffel_permutation.unwrap();
                let cells: Vec<String> = h.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(report, "rieffel h = [{}]", cells.join(" "));
                let (graph, _) = imprimitivity::realize_as_graph(&x).map_err(|e| e.to_string())?;
                report.push_str(&formats::serialize_graph(&graph));
                verdict(report, true)
            } else {
                let _ = writeln!(report, "NOT_IMPRIMITIVITY: {}", r.reason);
                verdict(report, false)
            }
        }
        Cmd::Tensor { a, b, output } => {
            let x = load(&a, formats::parse_correspondence)?;
            let y = load(&b, formats::parse_correspondence)?;
            let (xy, _) = tensor(&x, &y).map_err(|e| e.to_string())?;
            let mut report = String::new();
            emit(formats::serialize_correspondence(&xy), output.as_deref(), &mut report)?;
            ok(report)
        }
    }
}
