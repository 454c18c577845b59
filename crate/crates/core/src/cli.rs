//! Command-line front end.
//!
//! Data goes to standard output and diagnostics to standard error. Exit
//! codes: 0 success or true, 1 a well-formed "no" (not covering, not
//! equivalent, does not exist, reproduction mismatch), 2 usage or input
//! error, 3 internal error or exhausted budget.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::array::CoveringArray;
use crate::bounds::{applicable_bounds, improved_lower_3, known_can_table, roux_lower, BoundKind, BoundResult};
use crate::classify::{
    classify, classify_with, guided_uniqueness_24x12, nonexistence_14x16, nonexistence_48x13, ClassificationResult,
    RunOptions, SearchConstraints,
};
use crate::constructions::{
    fixed_matrix_by_name, hadamard_3ca_12x11, johnson_entringer, standard_maximal_2ca, witness_24x12, FixedMatrix,
};
use crate::coverage::{first_missing, is_covering};
use crate::equivalence::{apply_ops, are_equivalent, canonical_form, ops_from_text, ops_to_text};
use crate::error::Error;
use crate::normalization::{lift_except, lift_min_weight, lift_to_target};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "covarray", version, about = "Binary covering arrays: verify, construct, canonize, classify")]
struct Cli {
    /// Emit structured JSON records instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Reserved; every algorithm here is deterministic.
    #[arg(long, global = true, hide = true)]
    seed: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check strength-t coverage of a `.ca` file.
    Verify {
        #[arg(long, short = 't')]
        strength: usize,
        /// Input file, `-` for standard input.
        #[arg(default_value = "-")]
        file: String,
    },
    /// Print a named construction in `.ca` format.
    Construct {
        #[arg(value_enum)]
        name: Construction,
        /// Size for `standard-maximal`.
        #[arg(long)]
        m: Option<usize>,
        /// Degree for `johnson-entringer`.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Print the canonical form of an array.
    Canon {
        #[arg(default_value = "-")]
        file: String,
        /// Also write the operations mapping the input to its canonical form.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Decide whether two arrays are equivalent.
    Equiv { first: String, second: String },
    /// Raise column weights by Hall-matching lifts.
    Normalize {
        #[arg(default_value = "-")]
        file: String,
        /// Lift until every column has at least this weight.
        #[arg(long, conflicts_with = "except")]
        target: Option<usize>,
        /// Lift every column but this one (1-based) to floor(m/2).
        #[arg(long)]
        except: Option<usize>,
    },
    /// All applicable bounds on CAN(t, n, q).
    Bounds {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
    /// Dump the table of known covering array numbers.
    Table,
    /// Enumerate equivalence classes of binary arrays.
    Classify(ClassifyArgs),
    /// Run a proof-shaped search.
    Prove {
        #[arg(value_enum)]
        name: Proof,
    },
    /// Recompute a stored result and compare.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
    },
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
struct ClassifyArgs {
    #[command(subcommand)]
    prove: Option<ClassifySub>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    count_only: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Node budget; exceeding it exits with code 3.
    #[arg(long)]
    budget: Option<u64>,
    /// Directory receiving one `.ca` file per class plus `summary.txt`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ClassifySub {
    /// Run a proof-shaped search.
    Prove {
        #[arg(value_enum)]
        name: Proof,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Construction {
    StandardMaximal,
    JohnsonEntringer,
    Hadamard12x11,
    Witness24x12,
    A,
    B1,
    B2,
    D,
    E,
    #[value(name = "ca5x4")]
    Ca5x4,
    #[value(name = "ca10x5")]
    Ca10x5,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Proof {
    #[value(name = "24x12-unique")]
    Unique24x12,
    #[value(name = "48x13-nonexistent")]
    Nonexistent48x13,
    #[value(name = "14x16-nonexistent")]
    Nonexistent14x16,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Target {
    /// Class counts of 6-row strength-2 arrays, degrees 6..10.
    #[value(name = "table1")]
    SixRowClasses,
    /// Class counts of 12-row strength-3 arrays, degrees 6..11.
    #[value(name = "table3")]
    TwelveRowClasses,
    /// The 10x5 strength-3 array is unique.
    #[value(name = "thm54")]
    Unique10x5,
    /// The 12x11 strength-3 array is unique.
    #[value(name = "thm56")]
    Unique12x11,
    /// The 24x12 strength-4 array is unique.
    #[value(name = "thm58")]
    Unique24x12,
    /// No 48x13 strength-5 array.
    #[value(name = "thm59")]
    No48x13,
    /// No 14x16 strength-3 array.
    #[value(name = "lemma45")]
    No14x16,
    /// The strength-3 bound at degree 15.
    #[value(name = "lemma46")]
    Degree15,
    /// Johnson-Entringer sizes for n = 4..10.
    #[value(name = "cor52-range")]
    JohnsonEntringerRange,
}

/// What a command produced: text for standard output, an optional JSON
/// record, and the exit code.
struct Outcome {
    text: String,
    record: serde_json::Value,
    code: i32,
}

impl Outcome {
    fn ok(text: String, record: serde_json::Value) -> Self {
        Outcome { text, record, code: EXIT_OK }
    }

    fn verdict(ok: bool, text: String, record: serde_json::Value) -> Self {
        Outcome {
            text,
            record,
            code: if ok { EXIT_OK } else { EXIT_FALSE },
        }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::InternalInconsistency(_) | Error::Checkpoint(_) => EXIT_INTERNAL,
        _ => EXIT_USAGE,
    }
}

/// Runs the CLI on an argument vector, writing to the given streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return e.exit_code();
        }
    };
    if cli.seed.is_some() {
        let _ = writeln!(err, "error: --seed is not supported: every algorithm is deterministic");
        return EXIT_USAGE;
    }
    let json = cli.json;
    match dispatch(cli.command, err) {
        Ok(o) => {
            let _ = if json {
                writeln!(out, "{}", o.record)
            } else {
                write!(out, "{}", o.text)
            };
            o.code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::BudgetExceeded {
                checkpoint: Some(p), ..
            } = &e
            {
                let _ = writeln!(err, "resume with --checkpoint {}", p.display());
            }
            exit_code(&e)
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn read_array(path: &str) -> Res<CoveringArray> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?
    };
    CoveringArray::parse_ca(&text).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn dispatch(cmd: Command, err: &mut dyn Write) -> Res<Outcome> {
    match cmd {
        Command::Verify { strength, file } => verify(&read_array(&file)?, strength),
        Command::Construct { name, m, n } => construct(name, m, n),
        Command::Canon { file, certificate } => canon(&read_array(&file)?, certificate.as_deref()),
        Command::Equiv { first, second } => {
            let (a, b) = (read_array(&first)?, read_array(&second)?);
            let eq = are_equivalent(&a, &b)?;
            Ok(Outcome::verdict(
                eq,
                format!("{}\n", if eq { "equivalent" } else { "not equivalent" }),
                json!({ "equivalent": eq }),
            ))
        }
        Command::Normalize { file, target, except } => {
            let a = read_array(&file)?;
            let b = match (target, except) {
                (Some(s), _) => lift_to_target(&a, s)?,
                (None, Some(j)) => lift_except(&a, j)?,
                (None, None) => lift_min_weight(&a)?,
            };
            Ok(array_outcome(&b))
        }
        Command::Bounds { t, n, q } => bounds(t, n, q),
        Command::Table => table(),
        Command::Classify(args) => match args.prove {
            Some(ClassifySub::Prove { name }) => prove(name),
            None => classify_cmd(&args, err),
        },
        Command::Prove { name } => prove(name),
        Command::Reproduce { target } => reproduce(target, err),
    }
}

fn array_outcome(a: &CoveringArray) -> Outcome {
    Outcome::ok(
        a.to_ca_string(),
        json!({ "m": a.m(), "n": a.n(), "q": a.q(), "ca": a.to_ca_string() }),
    )
}

fn verify(a: &CoveringArray, t: usize) -> Res<Outcome> {
    match first_missing(a, t)? {
        None => Ok(Outcome::ok(
            format!("covering strength={t} m={} n={}\n", a.m(), a.n()),
            json!({ "covering": true, "strength": t }),
        )),
        Some(w) => {
            let cols: Vec<String> = w.columns.iter().map(usize::to_string).collect();
            let pat: String = w.pattern.iter().map(|d| char::from(b'0' + d)).collect();
            Ok(Outcome::verdict(
                false,
                format!("not covering strength={t} columns={} pattern={pat}\n", cols.join(",")),
                json!({ "covering": false, "strength": t, "missing": w }),
            ))
        }
    }
}

fn construct(name: Construction, m: Option<usize>, n: Option<usize>) -> Res<Outcome> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("this construction needs --{flag}")));
    let a = match name {
        Construction::StandardMaximal => standard_maximal_2ca(need(m, "m")?)?,
        Construction::JohnsonEntringer => johnson_entringer(need(n, "n")?)?,
        Construction::Hadamard12x11 => hadamard_3ca_12x11(),
        Construction::Witness24x12 => witness_24x12(),
        other => {
            let fixed = match other {
                Construction::A => FixedMatrix::A,
                Construction::B1 => FixedMatrix::B1,
                Construction::B2 => FixedMatrix::B2,
                Construction::D => FixedMatrix::D,
                Construction::E => FixedMatrix::E,
                Construction::Ca5x4 => FixedMatrix::Ca5x4,
                _ => FixedMatrix::Ca10x5,
            };
            fixed_matrix_by_name(fixed.name())?
        }
    };
    Ok(array_outcome(&a))
}

fn canon(a: &CoveringArray, certificate: Option<&Path>) -> Res<Outcome> {
    let c = canonical_form(a)?;
    if let Some(path) = certificate {
        fs::write(path, ops_to_text(&c.ops)).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    Ok(array_outcome(&c.canonical))
}

fn kind_name(k: BoundKind) -> &'static str {
    match k {
        BoundKind::Exact => "exact",
        BoundKind::Lower => "lower",
        BoundKind::Upper => "upper",
    }
}

fn bound_line(b: &BoundResult) -> String {
    format!("{:<6} {:>8}  {}\n", kind_name(b.kind), b.value, b.provenance)
}

fn bounds(t: u32, n: u64, q: u32) -> Res<Outcome> {
    let all = applicable_bounds(t, n, q);
    if all.is_empty() {
        return Err(Failure::Usage(format!("no bound applies to CAN({t},{n},{q})")));
    }
    let text: String = all.iter().map(bound_line).collect();
    Ok(Outcome::ok(text, json!({ "t": t, "n": n, "q": q, "bounds": all })))
}

fn table() -> Res<Outcome> {
    let tab = known_can_table();
    let mut text = format!("{:>3} {:>4} {:>3} {:>8} {:<6} {:<16} {}\n", "t", "n", "q", "value", "kind", "source", "witness");
    for e in &tab.entries {
        let _ = writeln!(
            text,
            "{:>3} {:>4} {:>3} {:>8} {:<6} {:<16} {}",
            e.t,
            e.n,
            e.q,
            e.value,
            kind_name(e.kind),
            e.source.to_string(),
            e.witness.unwrap_or("-")
        );
    }
    Ok(Outcome::ok(text, serde_json::to_value(&tab).expect("serializable")))
}

fn classify_cmd(args: &ClassifyArgs, err: &mut dyn Write) -> Res<Outcome> {
    let (Some(m), Some(t), Some(n)) = (args.m, args.t, args.n) else {
        return Err(Failure::Usage("classify needs --m, --t and --n (or a `prove` target)".into()));
    };
    if t < 2 || n < t {
        return Err(Failure::Usage(format!("need 2 <= t <= n, got t={t} n={n}")));
    }
    let opts = RunOptions {
        jobs: args.jobs.max(1),
        budget: args.budget,
        checkpoint: args.checkpoint.clone(),
        count_only: args.count_only && args.out.is_none(),
        split_depth: None,
    };
    let res = classify_with(m, t, n, &SearchConstraints::for_params(m, t, n), &opts)?;
    let _ = writeln!(err, "elapsed {} ms", res.stats.elapsed_ms);
    let summary = res.summary_line();
    if let Some(dir) = &args.out {
        write_classes(dir, &res, &summary)?;
    }
    let mut text = format!("{summary}\n");
    if !args.count_only && args.out.is_none() {
        for (i, r) in res.representatives.iter().enumerate() {
            let _ = write!(text, "# class {}\n{}", i + 1, r.to_ca_string());
        }
    }
    let reps: Vec<String> = if args.count_only {
        Vec::new()
    } else {
        res.representatives.iter().map(CoveringArray::to_ca_string).collect()
    };
    Ok(Outcome::ok(
        text,
        json!({ "m": m, "t": t, "n": n, "q": 2, "count": res.count, "stats": res.stats, "representatives": reps }),
    ))
}

fn write_classes(dir: &Path, res: &ClassificationResult, summary: &str) -> Res<()> {
    let io_err = |e: io::Error| Failure::Lib(Error::Io(format!("{}: {e}", dir.display())));
    fs::create_dir_all(dir).map_err(io_err)?;
    let width = res.representatives.len().to_string().len().max(3);
    for (i, r) in res.representatives.iter().enumerate() {
        fs::write(dir.join(format!("class-{:0width$}.ca", i + 1)), r.to_ca_string()).map_err(io_err)?;
    }
    fs::write(dir.join("summary.txt"), format!("{summary}\n")).map_err(io_err)
}

fn prove(name: Proof) -> Res<Outcome> {
    match name {
        Proof::Unique24x12 => {
            let g = guided_uniqueness_24x12()?;
            let mut text = String::new();
            for b in &g.branches {
                let _ = writeln!(text, "branch {}: nodes={} completions={}", b.label, b.nodes, b.completions);
            }
            let col: String = g.rejected_column.iter().map(|d| char::from(b'0' + d)).collect();
            let _ = writeln!(
                text,
                "dead branch: {} columns keep c7 4-covering over E; column {col} gives d(c3,c7)={}",
                g.forced_candidates, g.rejected_distance
            );
            let _ = writeln!(text, "classes={}", g.result.count);
            text.push_str(&g.result.representatives[0].to_ca_string());
            let record = json!({
                "classes": g.result.count,
                "branches": g.branches,
                "forced_candidates": g.forced_candidates,
                "rejected_column": g.rejected_column,
                "rejected_distance": g.rejected_distance,
                "representative": g.result.representatives[0].to_ca_string(),
            });
            Ok(Outcome::verdict(g.result.count == 1, text, record))
        }
        Proof::Nonexistent48x13 => {
            let r = nonexistence_48x13()?;
            let mut text = String::new();
            for b in &r.branches {
                let _ = writeln!(text, "branch {}: nodes={} completions={}", b.label, b.nodes, b.completions);
            }
            let _ = writeln!(
                text,
                "exists=false roux_lower={} implied CAN(5,13,2) >= {}",
                r.roux_lower, r.implied_lower
            );
            Ok(Outcome::ok(text, serde_json::to_value(&r).expect("serializable")))
        }
        Proof::Nonexistent14x16 => {
            let r = nonexistence_14x16()?;
            let text = format!(
                "weight={} distances={:?} ones_per_row={} zeros_per_row={}\nsum={} required={} exists={}\n",
                r.weight, r.distances, r.ones_per_row, r.zeros_per_row, r.sum, r.required, r.exists
            );
            Ok(Outcome::ok(text, serde_json::to_value(&r).expect("serializable")))
        }
    }
}

/// A named quantity, its stored value and the recomputed one.
#[derive(Serialize)]
struct Check {
    name: String,
    expected: String,
    got: String,
}

impl Check {
    fn new(name: impl Into<String>, expected: impl ToString, got: impl ToString) -> Self {
        Check {
            name: name.into(),
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }

    fn ok(&self) -> bool {
        self.expected == self.got
    }
}

fn counts(m: usize, t: usize, ns: impl IntoIterator<Item = usize>) -> Res<Vec<usize>> {
    ns.into_iter()
        .map(|n| Ok(classify(m, t, n, &SearchConstraints::for_params(m, t, n))?.count))
        .collect()
}

fn reproduce(target: Target, err: &mut dyn Write) -> Res<Outcome> {
    let name = target.to_possible_value().expect("not skipped").get_name().to_string();
    let checks = match target {
        Target::SixRowClasses => vec![Check::new("classes of CA(6;2,n,2), n=6..10", "[4, 3, 1, 1, 1]", format!("{:?}", counts(6, 2, 6..=10)?))],
        Target::TwelveRowClasses => vec![Check::new(
            "classes of CA(12;3,n,2), n=6..11",
            "[9, 2, 2, 1, 1, 1]",
            format!("{:?}", counts(12, 3, 6..=11)?),
        )],
        Target::Unique10x5 => {
            let r = classify(10, 3, 5, &SearchConstraints::for_params(10, 3, 5))?;
            let same = match r.representatives.first() {
                Some(rep) => are_equivalent(rep, &fixed_matrix_by_name("CA10x5")?)?,
                None => false,
            };
            vec![
                Check::new("classes of CA(10;3,5,2)", 1, r.count),
                Check::new("class equals the stored 10x5 array", true, same),
            ]
        }
        Target::Unique12x11 => {
            let r = classify(12, 3, 11, &SearchConstraints::for_params(12, 3, 11))?;
            let same = match r.representatives.first() {
                Some(rep) => are_equivalent(rep, &hadamard_3ca_12x11())?,
                None => false,
            };
            let a = fixed_matrix_by_name("A")?;
            let join = |b: &str| -> Res<CoveringArray> {
                let one = CoveringArray::from_binary_rows(&["1"; 6])?;
                let zero = CoveringArray::from_binary_rows(&["0"; 6])?;
                Ok(one.hstack(&a)?.vstack(&zero.hstack(&fixed_matrix_by_name(b)?)?)?)
            };
            let (c1, c2) = (join("B1")?, join("B2")?);
            let ops = ops_from_text("row 8 9\nrow 10 11\ncol 4 5\nrow 5 6\ncol 7 8\ncol 9 10\n", 12, 11, 2)?;
            vec![
                Check::new("classes of CA(12;3,11,2)", 1, r.count),
                Check::new("class equals the Hadamard construction", true, same),
                Check::new("swap sequence maps [1|A;0|B1] to [1|A;0|B2]", true, apply_ops(&c1, &ops)? == c2),
            ]
        }
        Target::Unique24x12 => {
            let g = guided_uniqueness_24x12()?;
            vec![
                Check::new("classes of CA(24;4,12,2)", 1, g.result.count),
                Check::new("B1 branch completions", 0, g.branches[0].completions),
                Check::new("d(c3,c7) for the named column", 14, g.rejected_distance),
                Check::new("witness is 4-covering", true, is_covering(&witness_24x12(), 4)?),
            ]
        }
        Target::No48x13 => {
            let r = nonexistence_48x13()?;
            vec![
                Check::new("48x13 strength-5 array exists", false, r.exists),
                Check::new("doubling bound CAN(5,13,2) >=", 48, r.roux_lower),
                Check::new("implied CAN(5,13,2) >=", 49, r.implied_lower),
            ]
        }
        Target::No14x16 => {
            let r = nonexistence_14x16()?;
            vec![
                Check::new("distance sum", 600, r.sum),
                Check::new("required sum", 630, r.required),
                Check::new("CAN(3,16,2) >=", 15, improved_lower_3(16)?.value),
            ]
        }
        Target::Degree15 => vec![
            Check::new("CAN(3,15,2) >=", 15, improved_lower_3(15)?.value),
            Check::new("doubling bound CAN(3,15,2) >=", 14, roux_lower(3, 15, 2)?.value),
        ],
        Target::JohnsonEntringerRange => {
            let mut v = Vec::new();
            for n in 4..=10usize {
                let a = johnson_entringer(n)?;
                v.push(Check::new(format!("n={n} rows"), (1u64 << n) / 3, a.m()));
                v.push(Check::new(format!("n={n} strength {}", n - 2), true, is_covering(&a, n - 2)?));
                v.push(Check::new(
                    format!("n={n} table value"),
                    (1u64 << n) / 3,
                    known_can_table().exact(n as u32 - 2, n as u64, 2).unwrap_or(0),
                ));
            }
            v
        }
    };
    let mut text = String::new();
    let mut all_ok = true;
    for c in &checks {
        if c.ok() {
            let _ = writeln!(text, "ok       {}: {}", c.name, c.got);
        } else {
            all_ok = false;
            let _ = writeln!(text, "MISMATCH {}: expected {}, got {}", c.name, c.expected, c.got);
            let _ = writeln!(err, "{name}: {} differs", c.name);
        }
    }
    let _ = writeln!(text, "{name}: {}", if all_ok { "reproduced" } else { "FAILED" });
    Ok(Outcome::verdict(all_ok, text, json!({ "target": name, "ok": all_ok, "checks": checks })))
}
