use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;
use serde_json::Value;

use untouchable::constructions::{self, census, construct, union_sets, CensusEntry, Family, Params};
use untouchable::json::{parse_point_set, ConstructionFile, PointSetFile};
use untouchable::search::{
    exhaustive_exists, min_untouchable_size, Budget, BudgetLimit, MinSize, SearchOptions, SearchStatus,
};
use untouchable::verify::{is_even_type, spectrum, tangent_witness, SpectrumReport};
use untouchable::{Elem, Field, Pencil, Plane, PointSet};

const EXIT_EXPECTATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_EXISTS: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "untouchable", version, about = "Untouchable sets in PG(2,q): construct, verify, search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a set from one of the conic families and print it as JSON.
    Construct(ConstructArgs),
    /// Check a point-set file: spectrum, untouchability, even type.
    Verify(VerifyArgs),
    /// Print the line-intersection spectrum of a point-set file.
    Spectrum(InputArgs),
    /// Exhaustive search for an untouchable set of a given size.
    Search(SearchArgs),
    /// Run every applicable family over all admissible parameters.
    Census(FieldArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Plane order (a prime power).
    #[arg(long, conflicts_with_all = ["p", "k"], required_unless_present = "p")]
    q: Option<u64>,
    /// Characteristic, with --k.
    #[arg(long, requires = "k")]
    p: Option<u32>,
    /// Extension degree, with --p.
    #[arg(long, requires = "p")]
    k: Option<u32>,
}

impl FieldArgs {
    fn plane(&self) -> Result<Plane, Failure> {
        let plane = match (self.q, self.p, self.k) {
            (Some(q), _, _) => Plane::of_order(q).map_err(Failure::usage)?,
            (None, Some(p), Some(k)) => Plane::new(Field::new(p, k).map_err(Failure::usage)?),
            _ => return Err(Failure::usage("give --q or both --p and --k")),
        };
        info!("PG(2,{}): {} points", plane.order(), plane.num_points());
        Ok(plane)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "even-2q-1")]
    Even2qMinus1,
    #[value(name = "even-2q-2")]
    Even2qMinus2,
    #[value(name = "even-2q+1")]
    Even2qPlus1,
    #[value(name = "odd-2q+1")]
    Odd2qPlus1,
    Hyperconic,
    Union,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Even2qMinus1 => Family::Even2qMinus1,
            FamilyArg::Even2qMinus2 => Family::Even2qMinus2,
            FamilyArg::Even2qPlus1 => Family::Even2qPlus1,
            FamilyArg::Odd2qPlus1 => Family::Odd2qPlus1,
            FamilyArg::Hyperconic => Family::Hyperconic,
            FamilyArg::Union => Family::Union,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PencilArg {
    P1,
    P2,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Field element encoding for parameter a.
    #[arg(long)]
    a: Option<u32>,
    /// Field element encoding for parameter b.
    #[arg(long)]
    b: Option<u32>,
    /// Pencil for --family hyperconic.
    #[arg(long, value_enum)]
    pencil: Option<PencilArg>,
    /// Input point-set files for --family union.
    #[arg(long = "in")]
    inputs: Vec<PathBuf>,
    /// Write the JSON here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Exit 1 unless the set is untouchable.
    #[arg(long)]
    expect_untouchable: bool,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Target size.
    #[arg(long, required_unless_present = "upper", conflicts_with = "upper")]
    size: Option<usize>,
    /// Find the smallest nonempty untouchable set of at most this size.
    #[arg(long)]
    upper: Option<usize>,
    #[arg(long, default_value_t = Budget::default().max_nodes)]
    max_nodes: u64,
    #[arg(long, default_value_t = Budget::default().max_time.as_secs())]
    max_seconds: u64,
    /// Write a found witness as point-set JSON.
    #[arg(long)]
    emit_witness: Option<PathBuf>,
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl ToString) -> Failure {
        Failure { code: EXIT_USAGE, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

/// Indented JSON with arrays of scalars kept on one line.
fn render(v: &Value, indent: usize, out: &mut String) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                render(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                render(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = String::new();
    render(&serde_json::to_value(value).expect("serializable"), 0, &mut text);
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_set(path: &Path) -> Result<(Plane, PointSet), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    let file = parse_point_set(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    file.load().map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn run_construct(args: &ConstructArgs) -> Outcome {
    let plane = args.field.plane()?;
    let family = Family::from(args.family);
    let result = if family == Family::Union {
        if args.inputs.is_empty() {
            return Err(Failure::usage("union needs at least one --in FILE"));
        }
        let mut sets = Vec::new();
        for path in &args.inputs {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            let file = parse_point_set(&text).map_err(Failure::usage)?;
            sets.push(file.to_set(&plane).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?);
        }
        union_sets(&plane, &sets)
    } else {
        let params = Params {
            pencil: args.pencil.map(|p| match p {
                PencilArg::P1 => Pencil::P1,
                PencilArg::P2 => Pencil::P2,
            }),
            a: args.a.map(Elem),
            b: args.b.map(Elem),
            ..Default::default()
        };
        if params.a.is_none() && params.b.is_none() {
            constructions::construct_default(&plane, family)
        } else {
            construct(&plane, family, &params)
        }
    }
    .map_err(Failure::usage)?;
    info!("{} with {:?}: {} points", result.family, result.params, result.set.len());
    emit(&ConstructionFile::from_result(&plane, &result), args.out.as_deref())?;
    Ok(0)
}

#[derive(Serialize)]
struct WitnessJson {
    line: [u32; 3],
    points: Vec<[u32; 3]>,
}

#[derive(Serialize)]
struct VerifyJson {
    size: usize,
    spectrum: SpectrumReport,
    untouchable: bool,
    even_type: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<WitnessJson>,
}

fn run_verify(args: &VerifyArgs) -> Outcome {
    let (plane, set) = read_set(&args.input.input)?;
    let witness = tangent_witness(&plane, &set).map(|w| WitnessJson {
        line: [w.line.u.enc(), w.line.v.enc(), w.line.w.enc()],
        points: w.points.iter().map(|p| [p.x.enc(), p.y.enc(), p.z.enc()]).collect(),
    });
    let report = VerifyJson {
        size: set.len(),
        spectrum: spectrum(&plane, &set),
        untouchable: witness.is_none(),
        even_type: is_even_type(&plane, &set),
        witness,
    };
    emit(&report, None)?;
    if args.expect_untouchable && !report.untouchable {
        log::error!("set is not untouchable");
        return Ok(EXIT_EXPECTATION);
    }
    Ok(0)
}

fn run_spectrum(args: &InputArgs) -> Outcome {
    let (plane, set) = read_set(&args.input)?;
    emit(&spectrum(&plane, &set), None)?;
    Ok(0)
}

#[derive(Serialize)]
struct SearchJson {
    q: u32,
    size: usize,
    status: SearchStatus,
    exists: Option<bool>,
    nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<BudgetLimit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<PointSetFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_contains_conic: Option<bool>,
}

#[derive(Serialize)]
struct MinSizeJson {
    q: u32,
    upper: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_size: Option<usize>,
    /// Every size below this was searched to completion without a witness.
    proven_absent_below: usize,
    status: SearchStatus,
    nodes_explored: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<PointSetFile>,
}

fn run_search(args: &SearchArgs) -> Outcome {
    let plane = args.field.plane()?;
    let options = SearchOptions {
        budget: Budget { max_nodes: args.max_nodes, max_time: Duration::from_secs(args.max_seconds) },
        parallel: !args.sequential,
    };
    let write_witness = |w: &PointSet| -> Result<Option<PointSetFile>, Failure> {
        let file = PointSetFile::from_set(&plane, w);
        if let Some(path) = &args.emit_witness {
            emit(&file, Some(path))?;
        }
        Ok(Some(file))
    };
    if let Some(upper) = args.upper {
        let o = min_untouchable_size(&plane, upper, &options).map_err(Failure::usage)?;
        info!("min-size search: {} nodes in {:.3}s", o.nodes_explored, o.wall_time.as_secs_f64());
        let (min_size, proven, status, witness, code) = match &o.result {
            MinSize::Found { size, witness } => {
                (Some(*size), *size, SearchStatus::Found, write_witness(witness)?, 0)
            }
            MinSize::NoneUpTo(u) => (None, u + 1, SearchStatus::Exhausted, None, EXIT_NOT_EXISTS),
            MinSize::Inconclusive { proven_absent_below } => {
                (None, *proven_absent_below, SearchStatus::Inconclusive, None, EXIT_INCONCLUSIVE)
            }
        };
        let report = MinSizeJson {
            q: plane.order(),
            upper,
            min_size,
            proven_absent_below: proven,
            status,
            nodes_explored: o.nodes_explored,
            witness,
        };
        emit(&report, None)?;
        return Ok(code);
    }
    let size = args.size.expect("clap requires --size or --upper");
    let o = exhaustive_exists(&plane, size, &options).map_err(Failure::usage)?;
    info!("search: {:?} after {} nodes in {:.3}s", o.status, o.nodes_explored, o.wall_time.as_secs_f64());
    let witness = match &o.witness {
        Some(w) => write_witness(w)?,
        None => None,
    };
    let report = SearchJson {
        q: plane.order(),
        size,
        status: o.status,
        exists: o.exists(),
        nodes_explored: o.nodes_explored,
        limit: o.limit,
        witness,
        witness_contains_conic: o.witness_contains_conic,
    };
    emit(&report, None)?;
    Ok(match o.status {
        SearchStatus::Found => 0,
        SearchStatus::Exhausted => EXIT_NOT_EXISTS,
        SearchStatus::Inconclusive => EXIT_INCONCLUSIVE,
    })
}

#[derive(Serialize)]
struct CensusJson {
    q: u32,
    families: BTreeMap<String, usize>,
    entries: Vec<CensusEntry>,
    all_pass: bool,
}

fn run_census(args: &FieldArgs) -> Outcome {
    let plane = args.plane()?;
    let entries = census(&plane);
    let mut families = BTreeMap::new();
    for e in &entries {
        *families.entry(e.family.to_string()).or_insert(0) += 1;
    }
    let all_pass = entries.iter().all(|e| e.pass);
    emit(&CensusJson { q: plane.order(), families, entries, all_pass }, None)?;
    Ok(if all_pass { 0 } else { EXIT_EXPECTATION })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Construct(a) => run_construct(a),
        Command::Verify(a) => run_verify(a),
        Command::Spectrum(a) => run_spectrum(a),
        Command::Search(a) => run_search(a),
        Command::Census(a) => run_census(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
