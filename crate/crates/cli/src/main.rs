//! `glw` — exact evaluation of the universal gl_N weight system.
//!
//! Subcommands map onto the library layers: `perm` and `chord` evaluate the
//! weight of a single permutation or chord diagram, `kn` targets the
//! maximally crossing diagrams K_n, `series` prints their primitive
//! projections in the formal K-symbol algebra, `oracle` normal-orders the
//! same element inside U(gl_n) from first principles, and `verify-paper`
//! recomputes the golden result tables shipped with the binary.
//!
//! Exit codes: 0 on success, 1 when a requested verification fails, 2 for
//! usage and input errors, 3 when a resource limit is hit.

mod verify;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use glw::diagrams::{parse_chords, parse_permutation, ChordDiagram};
use glw::engine::{explain_once, wgl, MemoCache};
use glw::hc::to_p_basis;
use glw::hopf::{kn_primitive_series, wbar};
use glw::oracle::{expand_polynomial, w_direct};
use glw::poly::{Generator, Polynomial};
use glw::Error;

/// Environment variable naming the directory for memo-cache files.
const CACHE_DIR_VAR: &str = "GLW_CACHE_DIR";

#[derive(Parser)]
#[command(name = "glw", version, about = "Exact gl_N weight-system computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weight of a permutation given in cycle or one-line notation.
    Perm {
        /// Permutation, e.g. "(1 3 2)", "(1 3)(2 4)" or "[3,1,2]".
        input: String,
        /// Print the reduction trace before the result.
        #[arg(long)]
        explain: bool,
        #[command(flatten)]
        opts: WeightOpts,
    },
    /// Weight of a chord diagram given by its endpoint pairing.
    Chord {
        /// Pairing of {1..2n}, e.g. "1-3,2-4", or "K<n>" for the maximally
        /// crossing diagram.
        input: String,
        /// Project onto Hopf primitives first (computes the reduced weight).
        #[arg(long)]
        primitive: bool,
        #[command(flatten)]
        opts: WeightOpts,
    },
    /// Weight of the maximally crossing diagram K_n.
    Kn {
        /// Number of chords.
        n: u32,
        /// Project onto Hopf primitives first (computes the reduced weight).
        #[arg(long)]
        primitive: bool,
        #[command(flatten)]
        opts: WeightOpts,
    },
    /// Primitive projections pi(K_1) .. pi(K_n) in the K-symbol algebra.
    Series {
        /// Largest diagram size to expand.
        n: u32,
        /// Output format.
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Normal-ordered form of the weight element of U(gl_n), expanded
    /// directly from matrix units.
    Oracle {
        /// Permutation in cycle or one-line notation.
        input: String,
        /// Rank n of gl_n.
        #[arg(long)]
        gl: u8,
        /// Also reduce symbolically and compare the two expansions.
        #[arg(long)]
        check: bool,
        /// Abort once the normal-ordering table holds this many words.
        #[arg(long)]
        max_words: Option<usize>,
    },
    /// Recompute the golden result tables and print one pass/fail line each.
    #[command(name = "verify-paper", visible_alias = "verify")]
    VerifyPaper,
}

/// Flags shared by the weight-producing subcommands.
#[derive(Args)]
struct WeightOpts {
    /// Output basis: Casimir generators (c) or shifted power sums (p).
    #[arg(long, value_enum, default_value_t = Basis::C)]
    basis: Basis,
    /// Specialize to sl_N by setting C1 = 0.
    #[arg(long)]
    sl: bool,
    /// Output format.
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Memo-cache file to load before computing and save back after.
    /// Relative paths resolve under $GLW_CACHE_DIR when that is set;
    /// without this flag, $GLW_CACHE_DIR/cache.jsonl is used when the
    /// variable is set and no cache is persisted otherwise.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Abort if the resulting polynomial has more terms than this.
    #[arg(long)]
    max_terms: Option<usize>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Basis {
    /// Casimir generators C_k.
    C,
    /// Shifted power sums p_k (image under the Harish-Chandra projection).
    P,
}

#[derive(Copy, Clone, Default, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

/// A failed run: the message goes to stderr, the code becomes the exit
/// status (1 verification, 2 usage, 3 resource limit).
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn verification(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::ResourceLimit { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Perm {
            input,
            explain,
            opts,
        } => {
            let p = parse_permutation(&input)?;
            if explain {
                print!("{}", explain_once(&p));
            }
            let w = with_cache(&opts, |cache| wgl(&p, cache))?;
            emit_weight(w, &opts)
        }
        Command::Chord {
            input,
            primitive,
            opts,
        } => {
            let d = parse_chords(&input)?;
            let w = with_cache(&opts, |cache| diagram_weight(&d, primitive, cache))?;
            emit_weight(w, &opts)
        }
        Command::Kn { n, primitive, opts } => {
            let d = ChordDiagram::kn(n);
            let w = with_cache(&opts, |cache| diagram_weight(&d, primitive, cache))?;
            emit_weight(w, &opts)
        }
        Command::Series { n, format } => {
            let series = kn_primitive_series(n);
            for (j, value) in series.iter().enumerate().skip(1) {
                match format {
                    Format::Text => println!("pi(K{j}) = {value}"),
                    Format::Latex => println!("\\pi(K_{{{j}}}) = {}", value.to_latex()),
                    Format::Json => {
                        println!("{}", serde_json::json!({ "n": j, "value": value.to_json() }))
                    }
                }
            }
            Ok(())
        }
        Command::Oracle {
            input,
            gl,
            check,
            max_words,
        } => run_oracle(&input, gl, check, max_words),
        Command::VerifyPaper => verify::run(),
    }
}

/// w(D), or the reduced weight w̄(D) when `primitive` is set.
fn diagram_weight(d: &ChordDiagram, primitive: bool, cache: &mut MemoCache) -> Polynomial {
    if primitive {
        wbar(d, cache)
    } else {
        wgl(&d.to_permutation(), cache)
    }
}

/// Applies the sl substitution and basis change, enforces the term limit,
/// and prints the result in the requested format.
fn emit_weight(mut w: Polynomial, opts: &WeightOpts) -> Result<(), Failure> {
    if opts.sl {
        let mut map = BTreeMap::new();
        map.insert(Generator::C(1), Polynomial::zero());
        w = w.substitute(&map);
    }
    if let Basis::P = opts.basis {
        w = to_p_basis(&w)?;
    }
    if let Some(limit) = opts.max_terms {
        if w.num_terms() > limit {
            return Err(Error::ResourceLimit { limit }.into());
        }
    }
    let rendered = match opts.format {
        Format::Text => w.to_string(),
        Format::Json => w.to_json().to_string(),
        Format::Latex => w.to_latex(),
    };
    println!("{rendered}");
    Ok(())
}

/// Runs `f` against the cache selected by `--cache`/$GLW_CACHE_DIR and
/// persists the grown cache afterwards (when a location is selected).
fn with_cache<T>(
    opts: &WeightOpts,
    f: impl FnOnce(&mut MemoCache) -> T,
) -> Result<T, Failure> {
    let location = cache_location(opts.cache.as_deref());
    let mut cache = match &location {
        Some(path) if path.exists() => MemoCache::load(path)?,
        _ => MemoCache::new(),
    };
    let out = f(&mut cache);
    if let Some(path) = &location {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir).map_err(Error::from)?;
            }
        }
        cache.save(path)?;
    }
    Ok(out)
}

/// Resolves the cache file: an explicit flag wins (relative flags resolve
/// under $GLW_CACHE_DIR), the variable alone selects a default file inside
/// that directory, and with neither the cache stays in memory only.
fn cache_location(flag: Option<&Path>) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_DIR_VAR).map(PathBuf::from);
    match (flag, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join("cache.jsonl")),
        (None, None) => None,
    }
}

fn run_oracle(input: &str, gl: u8, check: bool, max_words: Option<usize>) -> Result<(), Failure> {
    if gl == 0 {
        return Err(Failure::usage("--gl must be at least 1"));
    }
    let p = parse_permutation(input)?;
    let direct = w_direct(&p, gl, max_words)?;
    println!("{direct}");
    if check {
        let mut cache = MemoCache::new();
        let symbolic = wgl(&p, &mut cache);
        let expanded = expand_polynomial(&symbolic, gl, max_words)?;
        if expanded == direct {
            println!("check: symbolic reduction agrees with the direct expansion");
        } else {
            return Err(Failure::verification(format!(
                "symbolic reduction disagrees with the direct expansion in gl_{gl}"
            )));
        }
    }
    Ok(())
}
