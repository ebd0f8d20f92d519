//! Command-line front end. Every subcommand prints one JSON document on
//! stdout; domain errors print `{"error": kind, "message": ...}` on stderr.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::inequality::{equivalent, BellInequality, Catalog};
use crate::limits::Limits;
use crate::polytope::{enumerate_vertices, PolytopeKind, Scenario};
use crate::quantum::{seesaw_maximize, zb_scan, SeesawConfig, ZbConfig};
use crate::tightness::{is_tight, Side};
use crate::transforms::{dehomogenize_with, homogenize, NEW_SETTING};
use crate::{fixtures, inequality};

/// Catalog argument selecting the built-in catalog instead of a file.
pub const BUILTIN: &str = "@builtin";

const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "bellforge", version, about = "Two-outcome Bell inequality toolkit")]
pub struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true, env = "BELLFORGE_THREADS")]
    pub threads: Option<usize>,
    /// Refuse brute-force scans over more than this many settings in total.
    #[arg(long, global = true, default_value_t = Limits::default().max_total_settings)]
    pub max_total_settings: usize,
    /// Refuse symmetry searches over orbits larger than this.
    #[arg(long, global = true, default_value_t = Limits::default().max_orbit)]
    pub max_orbit: u128,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Select {
    /// Catalog JSON file, or `@builtin`.
    pub catalog: String,
    /// Inequality name within the catalog.
    #[arg(long)]
    pub name: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count (and optionally list) local polytope vertices.
    Vertices {
        /// Settings per party, e.g. `2,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        settings: Vec<usize>,
        #[arg(long, default_value = "full", value_parser = parse_kind)]
        kind: PolytopeKind,
        /// Include every vertex and the coordinate labels.
        #[arg(long)]
        list: bool,
    },
    /// Exact local minimum and maximum by brute force.
    Bounds(Select),
    /// Homogenize a CH-type inequality.
    Homogenize {
        #[command(flatten)]
        select: Select,
        /// Also write the result as a one-entry catalog.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Rescale to integer coefficients.
        #[arg(long)]
        integer: bool,
    },
    /// Fix one setting per party to a constant outcome.
    Dehomogenize {
        #[command(flatten)]
        select: Select,
        /// One sign per party, e.g. `+,-,+`.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true, value_parser = parse_sign)]
        signs: Vec<i8>,
        /// Setting index that is fixed.
        #[arg(long, default_value_t = NEW_SETTING)]
        setting: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Facet test of one bound.
    Tight {
        #[command(flatten)]
        select: Select,
        #[arg(long, value_parser = parse_side)]
        side: Side,
        /// Omit the list of saturating vertices.
        #[arg(long)]
        brief: bool,
    },
    /// Seesaw search for the largest quantum violation factor.
    Violate {
        #[command(flatten)]
        select: Select,
        #[arg(long, default_value_t = SeesawConfig::default().restarts)]
        restarts: usize,
        #[arg(long, default_value_t = SeesawConfig::default().seed)]
        seed: u64,
    },
    /// Equivalence up to relabelings, outcome flips and rescaling.
    Equiv {
        catalog: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Look `--right` up in this catalog instead.
        #[arg(long)]
        right_catalog: Option<String>,
    },
    /// Largest value of the quadratic correlation condition over random
    /// three-qubit states, optimized over local frames.
    ZbCheck {
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Frame-optimization starts per state.
        #[arg(long, default_value_t = ZbConfig::default().starts)]
        starts: usize,
    },
}

fn parse_kind(s: &str) -> std::result::Result<PolytopeKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_side(s: &str) -> std::result::Result<Side, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_sign(s: &str) -> std::result::Result<i8, String> {
    match s.trim() {
        "+" | "+1" | "1" => Ok(1),
        "-" | "-1" => Ok(-1),
        other => Err(format!("expected `+` or `-`, got `{other}`")),
    }
}

impl Cli {
    pub fn limits(&self) -> Limits {
        Limits {
            max_total_settings: self.max_total_settings,
            max_orbit: self.max_orbit,
        }
    }
}

fn load_catalog(arg: &str) -> Result<Catalog> {
    if arg == BUILTIN {
        Ok(fixtures::builtin_catalog())
    } else {
        Catalog::load(arg)
    }
}

fn select(sel: &Select) -> Result<BellInequality> {
    Ok(load_catalog(&sel.catalog)?.get(&sel.name)?.clone())
}

fn write_catalog(path: &Path, ineq: &BellInequality) -> Result<()> {
    let mut text = inequality::serialize_catalog(std::slice::from_ref(ineq));
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize to JSON")
}

/// Executes one parsed command, returning the JSON document to print.
pub fn execute(cli: &Cli) -> Result<Value> {
    let limits = cli.limits();
    match &cli.command {
        Command::Vertices { settings, kind, list } => {
            let scenario = Scenario::new(settings.clone())?;
            let vertices = enumerate_vertices(&scenario, *kind, &limits)?;
            let mut out = json!({
                "settings": scenario.settings(),
                "kind": kind,
                "count": vertices.len(),
                "dimension": scenario.dimension(*kind),
            });
            if *list {
                out["coordinates"] = to_value(&scenario.coordinate_tuples(*kind));
                out["vertices"] = to_value(&vertices.iter().map(|v| &v.coords).collect::<Vec<_>>());
            }
            Ok(out)
        }
        Command::Bounds(sel) => {
            let ineq = select(sel)?;
            let mut out = to_value(&ineq.local_bounds(&limits)?);
            out["name"] = json!(ineq.name);
            Ok(out)
        }
        Command::Homogenize { select: sel, output, integer } => {
            let mut h = homogenize(&select(sel)?, &limits)?;
            if *integer {
                h = h.normalized_to_integers();
            }
            if let Some(path) = output {
                write_catalog(path, &h.inequality)?;
            }
            Ok(to_value(&h))
        }
        Command::Dehomogenize { select: sel, signs, setting, output } => {
            let d = dehomogenize_with(&select(sel)?, signs, &vec![*setting; signs.len()])?;
            if let Some(path) = output {
                write_catalog(path, &d)?;
            }
            Ok(to_value(&d))
        }
        Command::Tight { select: sel, side, brief } => {
            let mut report = is_tight(&select(sel)?, *side, &limits)?;
            if *brief {
                report.saturating_vertices.clear();
            }
            Ok(to_value(&report))
        }
        Command::Violate { select: sel, restarts, seed } => {
            let config = SeesawConfig {
                restarts: *restarts,
                seed: *seed,
                limits,
                ..SeesawConfig::default()
            };
            Ok(to_value(&seesaw_maximize(&select(sel)?, &config)?))
        }
        Command::Equiv { catalog, left, right, right_catalog } => {
            let left_cat = load_catalog(catalog)?;
            let a = left_cat.get(left)?;
            let right_cat = match right_catalog {
                Some(path) => load_catalog(path)?,
                None => left_cat.clone(),
            };
            let b = right_cat.get(right)?;
            let witness = equivalent(a, b, &limits)?;
            Ok(json!({
                "left": a.name,
                "right": b.name,
                "equivalent": witness.is_some(),
                "relabeling": witness,
            }))
        }
        Command::ZbCheck { samples, seed, starts } => {
            let config = ZbConfig {
                starts: *starts,
                ..ZbConfig::default()
            };
            let scan = zb_scan(*samples, *seed, &config)?;
            let mut out = to_value(&scan);
            out["satisfied"] = json!(scan.max_value <= 1.0 + 1e-6);
            Ok(out)
        }
    }
}

/// Rounds every float in `v` to 12 significant digits.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                let r: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
                    .parse()
                    .expect("formatted float parses");
                if let Some(m) = serde_json::Number::from_f64(r) {
                    *n = m;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

fn configure_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config("--threads must be positive".into()));
        }
        // A second initialization in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Full entry point: parses `args`, runs, prints, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = configure_threads(cli.threads).and_then(|_| execute(&cli));
    match result {
        Ok(mut value) => {
            round_floats(&mut value);
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            0
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.kind(), "message": e.to_string() }));
            1
        }
    }
}
