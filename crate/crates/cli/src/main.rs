use std::io::{self, Read, Write};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use fishlab::io::{self as fio, Format, Kind, Object};
use fishlab::matrices::{self, TriMatrix};
use fishlab::oracle;
use fishlab::permutations::{self, Permutation};
use fishlab::posets::{self, FactorialPoset};
use fishlab::sequences::{self, DSequence};
use fishlab::verify::{self, Suite};
use fishlab::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "fishlab",
    version,
    about = "Enumerate, map and verify difference ascent structures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List every object of a class and size.
    Enumerate {
        #[arg(long, value_enum)]
        class: EnumClass,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        d: u32,
        #[arg(long, value_enum, default_value_t = OutFormat::Lines)]
        format: OutFormat,
        /// Add cover relations to JSON posets.
        #[arg(long)]
        with_covers: bool,
    },
    /// Apply a bijection to objects read from stdin.
    Map {
        #[arg(long, value_enum)]
        bijection: Bijection,
        #[arg(long, default_value_t = 0)]
        d: u32,
        #[arg(long, value_enum, default_value_t = OutFormat::Lines)]
        format: OutFormat,
    },
    /// Print the statistics of objects read from stdin as JSON records.
    Stats {
        #[arg(long, value_enum)]
        class: StatsClass,
        #[arg(long, default_value_t = 0)]
        d: u32,
    },
    /// Run the exhaustive cross-checks.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        max_d: u32,
    },
    /// Tabulate class sizes from the enumerators and the brute-force filters.
    Count {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        max_d: u32,
        /// Write the table as CSV to this file.
        #[arg(long)]
        csv: Option<std::path::PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EnumClass {
    Seq,
    Perm,
    Poset,
    Fishburn,
    Colres,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatsClass {
    Seq,
    Perm,
    Poset,
    Matrix,
}

#[derive(Clone, Copy, ValueEnum)]
enum Bijection {
    Phi,
    PhiInv,
    Psi,
    PsiInv,
    Theta,
    ThetaInv,
    ThetaBar,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Perm,
    Poset,
    Matrix,
    Counts,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Lines,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Lines => Format::Lines,
        }
    }
}

const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Library errors that mean "bad request" rather than "bad object".
fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Resource { .. } | Error::Input(_)) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var("FISHLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .with_context(|| format!("FISHLAB_THREADS must be a positive integer, got `{raw}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring the worker pool")
}

fn run(command: Command) -> anyhow::Result<u8> {
    match command {
        Command::Enumerate {
            class,
            n,
            d,
            format,
            with_covers,
        } => {
            let objects: Vec<Object> = match class {
                EnumClass::Seq => wrap(
                    sequences::enumerate_d_ascent_sequences(n, d)?,
                    Object::Sequence,
                ),
                EnumClass::Perm => wrap(
                    permutations::enumerate_difference_permutations(n, d)?,
                    Object::Permutation,
                ),
                EnumClass::Poset => wrap(posets::enumerate_difference_posets(n, d)?, Object::Poset),
                EnumClass::Fishburn => wrap(matrices::enumerate_fishburn(n)?, Object::Matrix),
                EnumClass::Colres => {
                    wrap(matrices::enumerate_column_restricted(n)?, Object::Matrix)
                }
            };
            emit(&fio::render(&objects, format.into(), d, with_covers))?;
            Ok(0)
        }
        Command::Map {
            bijection,
            d,
            format,
        } => map(bijection, d, format.into()),
        Command::Stats { class, d } => stats(class, d),
        Command::Verify {
            suite,
            max_n,
            max_d,
        } => {
            let suite = match suite {
                SuiteArg::Perm => Suite::Perm,
                SuiteArg::Poset => Suite::Poset,
                SuiteArg::Matrix => Suite::Matrix,
                SuiteArg::Counts => Suite::Counts,
                SuiteArg::All => Suite::All,
            };
            let report = verify::run(suite, &verify::Config::new(max_n, max_d))?;
            emit(&format!("{report}\n"))?;
            Ok(if report.all_passed() { 0 } else { EXIT_FAILURE })
        }
        Command::Count { max_n, max_d, csv } => {
            let table = oracle::build_count_table(max_n, max_d)?;
            match csv {
                Some(path) => {
                    std::fs::write(&path, table.to_csv())
                        .with_context(|| format!("writing {}", path.display()))?;
                    emit(&table.to_markdown())?;
                }
                None => emit(&table.to_csv())?,
            }
            let mut ok = true;
            for (class, n, d, e) in table.oracle_mismatches() {
                eprintln!(
                    "mismatch: {class}(n={n}, d={d}) fast {} oracle {}",
                    e.count, e.oracle
                );
                ok = false;
            }
            for m in table.cross_class_mismatches() {
                eprintln!("mismatch: {m}");
                ok = false;
            }
            Ok(if ok { 0 } else { EXIT_FAILURE })
        }
    }
}

fn wrap<T>(items: Vec<T>, f: fn(T) -> Object) -> Vec<Object> {
    items.into_iter().map(f).collect()
}

fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn read_stdin() -> anyhow::Result<String> {
    let mut s = String::new();
    io::stdin()
        .read_to_string(&mut s)
        .context("reading stdin")?;
    Ok(s)
}

/// Applies `f` to every input item, reporting failures by line number.
/// Returns the successes and whether anything failed.
fn process<T>(
    kind: Kind,
    f: impl Fn(Object) -> fishlab::Result<T>,
) -> anyhow::Result<(Vec<T>, bool)> {
    let input = read_stdin()?;
    let mut out = Vec::new();
    let mut failed = false;
    for item in fio::read_items(&input, kind) {
        match item.object.and_then(&f) {
            Ok(v) => out.push(v),
            Err(e) => {
                eprintln!("line {}: {e}", item.line);
                failed = true;
            }
        }
    }
    Ok((out, failed))
}

fn map(bijection: Bijection, d: u32, format: Format) -> anyhow::Result<u8> {
    use Bijection::*;
    let kind = match bijection {
        Phi => Kind::Permutation,
        Psi => Kind::Poset,
        PhiInv | PsiInv => Kind::Sequence,
        Theta | ThetaInv | ThetaBar => Kind::Matrix,
    };
    let (objects, failed) = process(kind, |obj| {
        Ok(match (bijection, obj) {
            (Phi, Object::Permutation(p)) => Object::Sequence(permutations::phi(&p, d)?),
            (PhiInv, Object::Sequence(x)) => Object::Permutation(permutations::phi_inv(&x, d)?),
            (Psi, Object::Poset(p)) => Object::Sequence(posets::psi(&p, d)?),
            (PsiInv, Object::Sequence(x)) => Object::Poset(posets::psi_inv(&x, d)?),
            (Theta, Object::Matrix(a)) => Object::Matrix(matrices::theta(&a)?),
            (ThetaInv, Object::Matrix(a)) => Object::Matrix(matrices::theta_inv(&a)?),
            (ThetaBar, Object::Matrix(a)) => Object::Matrix(matrices::theta_bar(&a)?),
            _ => unreachable!("reader returns the requested kind"),
        })
    })?;
    emit(&fio::render(&objects, format, d, false))?;
    Ok(if failed { EXIT_FAILURE } else { 0 })
}

fn stats(class: StatsClass, d: u32) -> anyhow::Result<u8> {
    let kind = match class {
        StatsClass::Seq => Kind::Sequence,
        StatsClass::Perm => Kind::Permutation,
        StatsClass::Poset => Kind::Poset,
        StatsClass::Matrix => Kind::Matrix,
    };
    let (records, failed) = process(kind, |obj| {
        Ok(match obj {
            Object::Sequence(x) => sequence_stats(&x, d),
            Object::Permutation(p) => permutation_stats(&p, d),
            Object::Poset(p) => poset_stats(&p, d),
            Object::Matrix(a) => matrix_stats(&a),
        })
    })?;
    emit(&fio::render_json(records))?;
    Ok(if failed { EXIT_FAILURE } else { 0 })
}

fn sequence_stats(x: &DSequence, d: u32) -> Value {
    json!({
        "values": x.values(),
        "d": d,
        "valid": x.is_valid(d),
        "dAsc": x.d_ascents(d),
        "dasc": x.dasc(d),
    })
}

fn permutation_stats(p: &Permutation, d: u32) -> Value {
    let act = permutations::active_elements(p, d);
    json!({
        "values": p.values(),
        "d": d,
        "difference": permutations::is_difference_permutation(p, d),
        "Act": act,
        "act": act.len(),
        "Ascbot": permutations::ascent_bottoms(p),
    })
}

fn poset_stats(p: &FactorialPoset, d: u32) -> Value {
    let act = posets::active_elements(p, d);
    json!({
        "n": p.len(),
        "omega": p.omega(),
        "d": d,
        "difference": posets::is_difference_poset(p, d),
        "A": posets::nonzero_labels(p),
        "Act": act,
        "act": act.len(),
    })
}

fn matrix_stats(a: &TriMatrix) -> Value {
    let m = a.dim();
    let class = matrices::classify(a);
    json!({
        "dim": m,
        "weight": a.weight(),
        "rows": a.rows(),
        "fishburn": class.fishburn,
        "column_restricted": class.column_restricted,
        "rmax": (1..=m).map(|j| a.rmax(j)).collect::<Vec<_>>(),
        "rmin": (1..=m).map(|j| a.rmin(j)).collect::<Vec<_>>(),
        "index": (1..=m).find(|&i| (1..m).all(|j| a.get(i, j) == 0)),
    })
}
