//! `symidem`: construct idempotent families, run the verification suite and
//! print expected counts.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symidem::algebra::{AlgebraKind, FieldTag, MulTable, OCTONION_TABLE};
use symidem::error::Error;
use symidem::idempotents::{self as idem, m_range, IdempotentSet};
use symidem::verify::{self, CheckResult, Profile, Status, SuiteOptions, Summary};

const EXIT_USAGE: u8 = 2;
const EXIT_FAIL: u8 = 3;

#[derive(Parser)]
#[command(name = "symidem", version, about = "Primitive idempotents in symmetric tensor powers of ℍ and 𝕆")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a complete family of primitive idempotents and emit it as JSON.
    Construct(ConstructArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Print closed-form counts next to realized counts.
    Dims(DimsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algebra {
    H,
    O,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    Rational,
    Gaussian,
}

impl From<Field> for FieldTag {
    fn from(f: Field) -> Self {
        match f {
            Field::Rational => FieldTag::RationalReal,
            Field::Gaussian => FieldTag::GaussianComplex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Quick,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Largest dense dimension the oracles may expand.
    #[arg(long, env = "SYMIDEM_DENSE_BOUND", default_value_t = symidem::symtensor::DEFAULT_DENSE_BOUND)]
    dense_bound: usize,
    /// Write the JSON document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    algebra: Algebra,
    #[arg(long, value_enum, default_value = "rational")]
    field: Field,
    #[arg(long)]
    n: usize,
    /// Quaternion component index.
    #[arg(long)]
    ell: Option<usize>,
    /// Octonion component index.
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "quick")]
    profile: ProfileArg,
    #[arg(long, default_value = "0xC0FFEE", value_parser = parse_seed)]
    seed: u64,
    /// Check a set fixture written by `construct` instead of running the suite.
    #[arg(long)]
    fixture: Option<PathBuf>,
    /// Include per-check elapsed times in the report.
    #[arg(long)]
    timings: bool,
    /// Negate the octonion product e_I·e_J before verifying.
    #[arg(long, hide = true, value_parser = parse_pair)]
    flip_sign: Option<(usize, usize)>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DimsArgs {
    #[arg(long, value_enum)]
    algebra: Algebra,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    common: Common,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("seed must be a 64-bit integer: {e}"))
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected I,J")?;
    let i: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let j: usize = b.trim().parse().map_err(|e| format!("{e}"))?;
    if i > 7 || j > 7 {
        return Err("basis indices must lie in [0, 7]".into());
    }
    Ok((i, j))
}

/// Failure carrying the exit code it maps to.
struct Exit {
    code: u8,
    message: String,
}

impl Exit {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        match e {
            Error::Argument(m) => Exit::usage(m),
            Error::Resource { .. } => Exit { code: EXIT_FAIL, message: e.to_string() },
            other => Exit { code: EXIT_FAIL, message: other.to_string() },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Construct(a) => construct(&a),
        Command::Verify(a) => verify_cmd(&a),
        Command::Dims(a) => dims(&a),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn emit(common: &Common, json: &serde_json::Value, text: impl FnOnce() -> String) -> Result<(), Exit> {
    let mut doc = serde_json::to_string_pretty(json).expect("JSON value serializes");
    doc.push('\n');
    match (&common.out, common.format) {
        (Some(path), fmt) => {
            std::fs::write(path, &doc).map_err(|e| Exit { code: EXIT_FAIL, message: format!("{}: {e}", path.display()) })?;
            if fmt == Format::Text {
                print!("{}", text());
            }
        }
        (None, Format::Json) => print!("{doc}"),
        (None, Format::Text) => print!("{}", text()),
    }
    Ok(())
}

fn build_set(a: &ConstructArgs) -> Result<IdempotentSet, Exit> {
    if a.n == 0 {
        return Err(Exit::usage("n must be at least 1"));
    }
    let range = m_range(a.n);
    let in_range = |name: &str, v: usize| {
        if range.contains(&v) {
            Ok(())
        } else {
            Err(Exit::usage(format!(
                "{name} must lie in [⌈n/2⌉, n] = [{}, {}], got {name}={v} for n={}",
                range.start(),
                range.end(),
                a.n
            )))
        }
    };
    let field = a.field.into();
    let set = match (a.algebra, a.ell, a.m) {
        (Algebra::H, _, Some(_)) => return Err(Exit::usage("--m selects an octonion component; use --ell with --algebra h")),
        (Algebra::O, Some(_), _) => return Err(Exit::usage("--ell selects a quaternion component; use --m with --algebra o")),
        (Algebra::H, Some(ell), None) => {
            in_range("ℓ", ell)?;
            idem::theorem1_set(a.n, ell, field)?
        }
        (Algebra::H, None, None) => idem::corollary2_set(a.n, field)?,
        (Algebra::O, None, Some(m)) => {
            in_range("m", m)?;
            idem::theorem3_set(a.n, m, field)?
        }
        (Algebra::O, None, None) => idem::corollary4_set(a.n, field)?,
    };
    Ok(set)
}

fn construct(a: &ConstructArgs) -> Result<u8, Exit> {
    let set = build_set(a)?;
    let json = serde_json::to_value(&set).expect("set serializes");
    emit(&a.common, &json, || {
        let mut s = String::new();
        writeln!(s, "{}", set.description).unwrap();
        writeln!(s, "{} idempotents (expected {})", set.len(), set.expected_count).unwrap();
        for (label, t) in set.iter() {
            writeln!(s, "  {label}  {} terms", t.len()).unwrap();
        }
        s
    })?;
    Ok(0)
}

fn verify_cmd(a: &VerifyArgs) -> Result<u8, Exit> {
    let table: MulTable = match a.flip_sign {
        Some((i, j)) => OCTONION_TABLE.with_flipped_sign(i, j),
        None => OCTONION_TABLE,
    };
    let profile = match a.profile {
        ProfileArg::Quick => Profile::Quick,
        ProfileArg::Full => Profile::Full,
    };
    let results = match &a.fixture {
        Some(path) => {
            let raw = std::fs::read_to_string(path).map_err(|e| Exit::usage(format!("{}: {e}", path.display())))?;
            let set: IdempotentSet =
                serde_json::from_str(&raw).map_err(|e| Exit::usage(format!("{}: {e}", path.display())))?;
            vec![verify::check_set_with(&set, &table)]
        }
        None => {
            let mut opts = SuiteOptions::new(profile);
            opts.dense_bound = a.common.dense_bound;
            opts.seed = a.seed;
            opts.table = table;
            verify::run_suite(&opts)
        }
    };
    let summary = Summary::of(&results);
    let json = verify::report_json(profile, &results, a.timings);
    emit(&a.common, &json, || report_text(&results, &summary))?;
    if a.common.out.is_some() && a.common.format == Format::Json {
        println!("{}", summary_line(&summary));
    }
    let failed: Vec<&str> = results.iter().filter(|r| r.status == Status::Fail).map(|r| r.check_id.as_str()).collect();
    let skipped: Vec<&str> = results.iter().filter(|r| r.skipped()).map(|r| r.check_id.as_str()).collect();
    if !failed.is_empty() {
        eprintln!("failing checks: {}", failed.join(", "));
        return Ok(EXIT_FAIL);
    }
    if !skipped.is_empty() {
        eprintln!("skipped checks: {}", skipped.join(", "));
        if profile == Profile::Quick {
            eprintln!("every quick-profile check is mandatory; raise --dense-bound");
            return Ok(EXIT_FAIL);
        }
    }
    Ok(0)
}

fn summary_line(s: &Summary) -> String {
    format!("{} passed, {} failed, {} skipped", s.passed, s.failed, s.skipped)
}

fn report_text(results: &[CheckResult], summary: &Summary) -> String {
    let mut s = String::new();
    for r in results {
        let tag = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        writeln!(s, "{tag} {}  {}", r.check_id, r.detail).unwrap();
        for w in &r.witnesses {
            writeln!(s, "     witness: {}", w.note()).unwrap();
        }
    }
    writeln!(s, "{}", summary_line(summary)).unwrap();
    s
}

struct DimsRow {
    field: FieldTag,
    scope: String,
    formula: &'static str,
    closed_form: usize,
    realized: Option<usize>,
}

fn closed_formula(total: bool, n: usize, field: FieldTag, algebra: Algebra) -> &'static str {
    let real_odd = n % 2 == 1 && field == FieldTag::RationalReal;
    match (algebra, total, n % 2 == 0, real_odd) {
        (Algebra::H, false, _, false) => "2ℓ−n+1",
        (Algebra::H, false, _, true) => "(2ℓ−n+1)/2",
        (Algebra::O, false, true, _) => "(j+2)²/4, j=2m−n",
        (Algebra::O, false, false, false) => "(j+1)(j+3)/4, j=2m−n",
        (Algebra::O, false, false, true) => "(j+1)(j+3)/8, j=2m−n",
        (Algebra::H, true, true, _) => "(n+2)²/4",
        (Algebra::H, true, false, false) => "(n+1)(n+3)/4",
        (Algebra::H, true, false, true) => "(n+1)(n+3)/8",
        (Algebra::O, true, true, _) => "(n+2)(n+3)(n+4)/24",
        (Algebra::O, true, false, false) => "(n+1)(n+3)(n+5)/24",
        (Algebra::O, true, false, true) => "(n+1)(n+3)(n+5)/48",
    }
}

fn dims(a: &DimsArgs) -> Result<u8, Exit> {
    let n = a.n;
    if n == 0 {
        return Err(Exit::usage("n must be at least 1"));
    }
    let kind = match a.algebra {
        Algebra::H => AlgebraKind::Quaternion,
        Algebra::O => AlgebraKind::Octonion,
    };
    // realize only when the full tensor power fits under the dense bound
    let realizable = (kind.dim() as u128).checked_pow(n as u32).is_some_and(|d| d <= a.common.dense_bound as u128);
    let mut rows = Vec::new();
    for field in [FieldTag::GaussianComplex, FieldTag::RationalReal] {
        for c in m_range(n) {
            let (scope, closed, built) = match a.algebra {
                Algebra::H => (format!("ℓ={c}"), idem::theorem1_count(n, c, field), realizable.then(|| idem::theorem1_set(n, c, field))),
                Algebra::O => (format!("m={c}"), idem::theorem3_count(n, c, field), realizable.then(|| idem::theorem3_set(n, c, field))),
            };
            let realized = built.transpose()?.map(|s| s.len());
            rows.push(DimsRow { field, scope, formula: closed_formula(false, n, field, a.algebra), closed_form: closed, realized });
        }
        let (closed, built) = match a.algebra {
            Algebra::H => (idem::corollary2_count(n, field), realizable.then(|| idem::corollary2_set(n, field))),
            Algebra::O => (idem::corollary4_count(n, field), realizable.then(|| idem::corollary4_set(n, field))),
        };
        let realized = built.transpose()?.map(|s| s.len());
        rows.push(DimsRow {
            field,
            scope: "total".into(),
            formula: closed_formula(true, n, field, a.algebra),
            closed_form: closed,
            realized,
        });
    }
    let mismatch = rows.iter().any(|r| r.realized.is_some_and(|x| x != r.closed_form));
    let json = serde_json::json!({
        "algebra": kind,
        "n": n,
        "rows": rows.iter().map(|r| serde_json::json!({
            "field": r.field,
            "scope": r.scope,
            "formula": r.formula,
            "closed_form": r.closed_form,
            "realized": r.realized,
            "agrees": r.realized.map(|x| x == r.closed_form),
        })).collect::<Vec<_>>(),
    });
    emit(&a.common, &json, || {
        let mut s = String::new();
        writeln!(s, "Sym^{n} {kind}").unwrap();
        writeln!(s, "{:<16} {:<8} {:>8} {:>9}  formula", "field", "scope", "closed", "realized").unwrap();
        for r in &rows {
            let realized = r.realized.map_or("-".to_string(), |x| x.to_string());
            let flag = if r.realized.is_some_and(|x| x != r.closed_form) { "  MISMATCH" } else { "" };
            writeln!(s, "{:<16} {:<8} {:>8} {:>9}  {}{flag}", r.field.to_string(), r.scope, r.closed_form, realized, r.formula).unwrap();
        }
        s
    })?;
    Ok(if mismatch { EXIT_FAIL } else { 0 })
}
