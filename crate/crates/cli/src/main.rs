//! `stackwords` command-line front end.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use stackwords::asymptotics::{
    closed_form_x_star, convergence_table, maximize_g_with, AsymptoticsResult, Method,
};
use stackwords::enumerate::{
    brute_force_wt, catalan, lemma_bound, trivial_bound, w2, CountCache, FactorialTable,
};
use stackwords::machine::{iterate_sort, min_sorting_passes, trace_series_machine};
use stackwords::verify::{run_suite, Level};
use stackwords::words::{
    count_factor, decode, forbidden_factor_violations, is_genuine_stack_word, project_v,
    validate_word,
};
use stackwords::{parse_permutation, Error};

/// Hard cap on `--limit`.
const MAX_ENUMERATION_LIMIT: usize = 12;
const CONVERGENCE_NS: [u64; 5] = [10, 50, 200, 1000, 2000];

#[derive(Parser, Debug)]
#[command(name = "stackwords", version, about = "Stack sorting, stack words and t-stack sortable counts")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Largest n allowed for brute-force enumeration (at most 12).
    #[arg(long, global = true, default_value_t = stackwords::DEFAULT_ENUMERATION_LIMIT)]
    limit: usize,

    /// CSV file caching brute-force counts as n,t,count.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,

    /// Tolerance for the growth-rate maximizer.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Direction {
    Encode,
    Decode,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CountMode {
    Formula,
    Brute,
    Both,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyLevel {
    Quick,
    Full,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Apply the stack-sorting map t times.
    Sort {
        permutation: String,
        #[arg(short, long, default_value_t = 1)]
        t: usize,
    },
    /// Encode a permutation as a stack word, or decode a word.
    Word {
        #[arg(value_enum)]
        direction: Direction,
        input: String,
        #[arg(short, long, default_value_t = 3)]
        t: usize,
        /// Print the projection v(w) (3-stack words only).
        #[arg(long)]
        project: bool,
        /// Include every machine step (encode only).
        #[arg(long)]
        trace: bool,
    },
    /// Count t-stack sortable permutations of length n.
    Count {
        n: usize,
        #[arg(short, long, default_value_t = 2)]
        t: usize,
        #[arg(long, value_enum, default_value_t = CountMode::Both)]
        mode: CountMode,
    },
    /// The upper bound on 3-stack sortable permutations, summand by summand.
    Bound { n: u64 },
    /// Maximize the growth rate of the bound and tabulate convergence.
    Asymptote,
    /// Run the exhaustive property suite.
    Verify {
        #[arg(value_enum, default_value_t = VerifyLevel::Quick)]
        level: VerifyLevel,
    },
}

/// A rendered command result.
struct Rendered {
    json: Value,
    text: String,
    csv: String,
    exit: u8,
}

impl Rendered {
    fn ok(json: Value, text: String, csv: String) -> Self {
        Self { json, text, csv, exit: 0 }
    }
}

#[derive(Debug)]
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Text => print!("{}", r.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("json")),
                Format::Csv => print!("{}", r.csv),
            }
            ExitCode::from(r.exit)
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Rendered, UsageError> {
    if cli.limit == 0 || cli.limit > MAX_ENUMERATION_LIMIT {
        return Err(UsageError(format!(
            "--limit must be in 1..={MAX_ENUMERATION_LIMIT}, got {}",
            cli.limit
        )));
    }
    if cli.tolerance.is_nan() || cli.tolerance <= 0.0 {
        return Err(Error::BadTolerance(cli.tolerance).into());
    }
    match &cli.command {
        Command::Sort { permutation, t } => cmd_sort(permutation, *t),
        Command::Word { direction: Direction::Encode, input, t, project, trace } => {
            cmd_encode(input, *t, *project, *trace)
        }
        Command::Word { direction: Direction::Decode, input, t, .. } => cmd_decode(input, *t),
        Command::Count { n, t, mode } => cmd_count(cli, *n, *t, *mode),
        Command::Bound { n } => cmd_bound(*n),
        Command::Asymptote => cmd_asymptote(cli.tolerance),
        Command::Verify { level } => Ok(cmd_verify(*level)),
    }
}

fn kv_csv(rows: &[(&str, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn cmd_sort(text: &str, t: usize) -> Result<Rendered, UsageError> {
    let p = parse_permutation(text)?;
    let image = iterate_sort(&p, t);
    let sortable = image.is_identity();
    let min_t = min_sorting_passes(&p);
    let json = json!({
        "permutation": p.to_compact_string(),
        "t": t,
        "image": image.to_compact_string(),
        "sortable": sortable,
        "min_t": min_t,
    });
    let text = format!(
        "s^{t}({}) = {}\nsortable with {t} pass(es): {sortable}\nminimal t: {min_t}\n",
        p.to_compact_string(),
        image.to_compact_string()
    );
    let csv = kv_csv(&[
        ("permutation", p.to_compact_string()),
        ("t", t.to_string()),
        ("image", image.to_compact_string()),
        ("sortable", sortable.to_string()),
        ("min_t", min_t.to_string()),
    ]);
    Ok(Rendered::ok(json, text, csv))
}

fn cmd_encode(text: &str, t: usize, project: bool, trace: bool) -> Result<Rendered, UsageError> {
    let p = parse_permutation(text)?;
    let (run, steps) = trace_series_machine(&p, t)?;
    let word = run.word;
    let aa = count_factor(&word, "AA");
    let mut json = json!({
        "permutation": p.to_compact_string(),
        "t": t,
        "word": word.to_string(),
        "output": run.output.to_compact_string(),
        "AA": aa,
    });
    let mut text = format!("word: {word}\nAA factors: {aa}\n");
    let mut rows = vec![("word", word.to_string()), ("AA", aa.to_string())];

    if t == 3 {
        let v = project_v(&word)?;
        let bb = count_factor(&v, "BB");
        let violations = forbidden_factor_violations(&word)?;
        json["v"] = json!(v.to_string());
        json["BB"] = json!(bb);
        json["violations"] = serde_json::to_value(&violations).expect("json");
        text.push_str(&format!("v: {v}\nBB factors in v: {bb}\n"));
        let rendered: Vec<String> = violations
            .iter()
            .map(|x| format!("{}@{}", x.rule.name(), x.index))
            .collect();
        text.push_str(&format!("violations: [{}]\n", rendered.join(", ")));
        rows.push(("v", v.to_string()));
        rows.push(("BB", bb.to_string()));
        rows.push(("violations", violations.len().to_string()));
    } else if project {
        eprintln!("warning: --project needs t = 3; ignored");
    }
    if trace {
        json["trace"] = serde_json::to_value(&steps).expect("json");
        for s in &steps {
            text.push_str(&format!(
                "{:>3} {} {} stacks={:?} output={:?}\n",
                s.step, s.letter, s.value, s.stacks, s.output
            ));
        }
    }
    Ok(Rendered::ok(json, text, kv_csv(&rows)))
}

fn cmd_decode(text: &str, t: usize) -> Result<Rendered, UsageError> {
    let word = validate_word(text.trim(), t)?;
    let q = decode(&word);
    let roundtrip = is_genuine_stack_word(&word);
    let json = json!({
        "word": word.to_string(),
        "t": t,
        "permutation": q.to_compact_string(),
        "roundtrip": roundtrip,
    });
    let text = format!("permutation: {}\nroundtrip: {roundtrip}\n", q.to_compact_string());
    let csv = kv_csv(&[
        ("word", word.to_string()),
        ("permutation", q.to_compact_string()),
        ("roundtrip", roundtrip.to_string()),
    ]);
    Ok(Rendered::ok(json, text, csv))
}

/// Closed formula for `t <= 2`, otherwise a labelled upper bound.
fn formula_value(n: u64, t: usize) -> (BigUint, &'static str) {
    match t {
        1 => (catalan(n), "count"),
        2 => (w2(n), "count"),
        3 => (lemma_bound(n), "upper bound (Lemma)"),
        _ => (trivial_bound(n, t as u64), "upper bound (trivial)"),
    }
}

fn cmd_count(cli: &Cli, n: usize, t: usize, mode: CountMode) -> Result<Rendered, UsageError> {
    if n == 0 || t == 0 {
        return Err(UsageError("n and t must be positive".into()));
    }
    let mut json = json!({ "n": n, "t": t });
    let mut text = String::new();
    let mut rows: Vec<(&str, String)> = vec![("n", n.to_string()), ("t", t.to_string())];

    let formula = matches!(mode, CountMode::Formula | CountMode::Both).then(|| formula_value(n as u64, t));
    if let Some((value, label)) = &formula {
        if *label != "count" {
            eprintln!("warning: no closed formula is known for t = {t}; reporting an upper bound");
        }
        let key = if *label == "count" { "formula" } else { "bound" };
        json[key] = json!(value.to_string());
        json["formula_kind"] = json!(label);
        text.push_str(&format!("{key} ({label}): {value}\n"));
        rows.push((key, value.to_string()));
    }

    let brute = if matches!(mode, CountMode::Brute | CountMode::Both) {
        let value = match &cli.cache {
            Some(path) => {
                let mut cache = CountCache::open(path)?;
                let v = cache.brute_force_wt(n, t, cli.limit)?;
                cache.save()?;
                v
            }
            None => brute_force_wt(n, t, cli.limit)?,
        };
        json["brute"] = json!(value.to_string());
        text.push_str(&format!("brute: {value}\n"));
        rows.push(("brute", value.to_string()));
        Some(value)
    } else {
        None
    };

    if let (Some((f, label)), Some(b)) = (&formula, &brute) {
        let verdict = if *label == "count" {
            if f == b { "AGREE" } else { "DISAGREE" }
        } else if b <= f {
            "consistent"
        } else {
            "inconsistent"
        };
        json["verdict"] = json!(verdict);
        text.push_str(&format!("verdict: {verdict}\n"));
        rows.push(("verdict", verdict.to_string()));
    }
    Ok(Rendered::ok(json, text, kv_csv(&rows)))
}

fn cmd_bound(n: u64) -> Result<Rendered, UsageError> {
    if n == 0 {
        return Err(UsageError("n must be positive".into()));
    }
    let table = FactorialTable::new(2 * n);
    let summands: Vec<(u64, BigUint)> = (1..=n.div_ceil(2)).map(|k| (k, table.lemma_summand(n, k))).collect();
    let bound: BigUint = summands.iter().map(|(_, s)| s).sum();
    let trivial = trivial_bound(n, 3);
    let json = json!({
        "n": n,
        "kind": "upper bound (Lemma)",
        "bound": bound.to_string(),
        "trivial_bound": trivial.to_string(),
        "summands": summands
            .iter()
            .map(|(k, s)| json!({ "k": k, "descents": k - 1, "summand": s.to_string() }))
            .collect::<Vec<_>>(),
    });
    let mut text = format!("upper bound (Lemma) on W_3({n}): {bound}\ntrivial bound 4^(2n): {trivial}\n");
    let mut csv = String::from("k,summand\n");
    for (k, s) in &summands {
        text.push_str(&format!("  k={k}: {s}\n"));
        csv.push_str(&format!("{k},{s}\n"));
    }
    Ok(Rendered::ok(json, text, csv))
}

/// Rounds to 7 significant digits.
fn sig7(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let decimals = (6 - v.abs().log10().floor() as i32).max(0) as usize;
    format!("{v:.decimals$}")
}

#[derive(Serialize)]
struct AsymptoteReport {
    #[serde(flatten)]
    golden: AsymptoticsResult,
    closed_form_x_star: f64,
    derivative_bisection: AsymptoticsResult,
    convergence: Vec<ConvergenceRow>,
}

#[derive(Serialize)]
struct ConvergenceRow {
    n: u64,
    bound_nth_root: f64,
}

fn cmd_asymptote(tolerance: f64) -> Result<Rendered, UsageError> {
    let golden = maximize_g_with(tolerance, Method::GoldenSection)?;
    let bisect = maximize_g_with(tolerance, Method::DerivativeBisection)?;
    let closed = closed_form_x_star();
    let convergence: Vec<ConvergenceRow> = convergence_table(&CONVERGENCE_NS)
        .into_iter()
        .map(|(n, bound_nth_root)| ConvergenceRow { n, bound_nth_root })
        .collect();

    let mut text = format!(
        "x_star (golden section): {}\nx_star (slope bisection): {}\nx_star (closed form): {}\ng_star: {}\n\
         golden-section iterations: {}\n|golden - closed form| = {:.3e}\n\nn, n-th root of the bound\n",
        sig7(golden.x_star),
        sig7(bisect.x_star),
        sig7(closed),
        sig7(golden.g_star),
        golden.iterations,
        (golden.x_star - closed).abs(),
    );
    let mut csv = String::from("n,bound_nth_root\n");
    for row in &convergence {
        text.push_str(&format!("{:>5}, {}\n", row.n, sig7(row.bound_nth_root)));
        csv.push_str(&format!("{},{}\n", row.n, row.bound_nth_root));
    }
    let report = AsymptoteReport {
        golden,
        closed_form_x_star: closed,
        derivative_bisection: bisect,
        convergence,
    };
    Ok(Rendered::ok(serde_json::to_value(&report).expect("json"), text, csv))
}

fn cmd_verify(level: VerifyLevel) -> Rendered {
    let level = match level {
        VerifyLevel::Quick => Level::Quick,
        VerifyLevel::Full => Level::Full,
    };
    let report = run_suite(level);
    let mut text = String::new();
    let mut csv = String::from("property,passed,checked,witness\n");
    for o in &report.properties {
        let status = if o.passed { "PASS" } else { "FAIL" };
        text.push_str(&format!("[{status}] {} ({} checks, {} ms)\n", o.name, o.checked, o.millis));
        if let Some(w) = &o.witness {
            text.push_str(&format!("       witness: {w}\n"));
        }
        csv.push_str(&format!(
            "\"{}\",{},{},\"{}\"\n",
            o.name,
            o.passed,
            o.checked,
            o.witness.as_deref().unwrap_or("")
        ));
    }
    let failed = report.properties.iter().filter(|o| !o.passed).count();
    text.push_str(&format!(
        "{} properties, {} failed\n",
        report.properties.len(),
        failed
    ));
    Rendered {
        json: serde_json::to_value(&report).expect("json"),
        text,
        csv,
        exit: if report.passed { 0 } else { 1 },
    }
}
