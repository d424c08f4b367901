//! `jennings`: Lie dimension indices, group-algebra cross-checks and the
//! `t^L = 10p − 8` classification, from the command line.
//!
//! Exit status: 0 on success, 1 when an inconsistency is found, 2 on bad
//! input (usage, parse errors, caps exceeded).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use jennings::algebra_oracle::{t_lower_direct, t_upper_direct, ORACLE_CAP};
use jennings::catalog::{
    build_from_spec, builtin_catalog, default_data_dir, import_presentation, load_data_catalog,
    verify_table_row, CatalogEntry, Source,
};
use jennings::classifier::{
    condition_records, table_defects, Classifier, ConditionSet, DefectKind, FingerprintIndex,
    TheoremReport, Verdict,
};
use jennings::dvector_analysis::{enumerate_admissible, PRIMES_OF_INTEREST};
use jennings::lie_dimension::{jennings_index, LieDimensionChain};
use jennings::structure::DEFAULT_CAP;

#[derive(Parser)]
#[command(name = "jennings", version, about)]
struct Cli {
    /// Largest subgroup the structure computations may enumerate.
    #[arg(long, global = true, env = "JENNINGS_CAP", default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Largest group order handed to the group-algebra oracle.
    #[arg(long, global = true, env = "JENNINGS_ORACLE_CAP", default_value_t = ORACLE_CAP)]
    oracle_cap: usize,
    /// Emit JSON with sorted keys instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Match against the corrected readings of the flagged items.
    #[arg(long, global = true)]
    corrected_conditions: bool,
    /// Directory of imported presentations.
    #[arg(long, global = true, env = "JENNINGS_DATA")]
    data_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GroupArg {
    /// A presentation file, or a builder spec such as `dihedral:8`.
    input: Option<String>,
    /// Builder spec, e.g. `heisenberg:5`, `free_class2:2,5`, `paper_item:66,3`.
    #[arg(long, conflicts_with = "input")]
    builder: Option<String>,
    /// The prime; defaults to the group's own.
    #[arg(short)]
    p: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Lie dimension chain, d-sequence and Jennings index.
    Index(GroupArg),
    /// `t^L` and `t_L` computed in the group algebra, against the formula.
    Oracle(GroupArg),
    /// Match one group against the condition list.
    Classify(GroupArg),
    /// d-sequences of a given weight that satisfy both constraints.
    EnumerateD {
        #[arg(short)]
        p: Option<u32>,
        #[arg(long, default_value_t = 10)]
        weight: u64,
        /// Every prime in 2..=13.
        #[arg(long)]
        all_p: bool,
    },
    /// Check the table columns of every imported presentation in a directory.
    VerifyTables { dir: PathBuf },
    /// The condition list, with statically detected defects.
    Conditions,
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Built-in and imported groups.
    List,
    /// Print the presentation a builder spec produces.
    Build { spec: String },
    /// Classify every catalog group.
    Sweep,
}

/// Failure modes, mapped to exit codes by `main`.
enum Fail {
    Input(String),
    Inconsistent,
}

impl From<jennings::Error> for Fail {
    fn from(e: jennings::Error) -> Self {
        Fail::Input(e.to_string())
    }
}

type Outcome = Result<(), Fail>;

fn main() -> ExitCode {
    // Die quietly when piped into `head` instead of panicking in println!.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Inconsistent) => ExitCode::from(1),
        Err(Fail::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Index(g) => index(cli, g),
        Command::Oracle(g) => oracle(cli, g),
        Command::Classify(g) => classify(cli, g),
        Command::EnumerateD { p, weight, all_p } => enumerate(cli, *p, *weight, *all_p),
        Command::VerifyTables { dir } => verify_tables(cli, dir),
        Command::Conditions => conditions(cli),
        Command::Catalog(CatalogCommand::List) => catalog_list(cli),
        Command::Catalog(CatalogCommand::Build { spec }) => catalog_build(cli, spec),
        Command::Catalog(CatalogCommand::Sweep) => catalog_sweep(cli),
    }
}

fn print_json(v: &Value) {
    // serde_json's default map is ordered, so keys come out sorted.
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("plain JSON values")
    );
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

impl Cli {
    fn data_dir(&self) -> PathBuf {
        self.data_dir.clone().unwrap_or_else(default_data_dir)
    }

    fn set(&self) -> ConditionSet {
        if self.corrected_conditions {
            ConditionSet::Corrected
        } else {
            ConditionSet::Literal
        }
    }

    /// The fingerprint index over the data directory; empty if it is absent.
    fn index(&self) -> Result<FingerprintIndex, Fail> {
        let dir = self.data_dir();
        if dir.is_dir() {
            Ok(FingerprintIndex::load(&dir)?)
        } else {
            Ok(FingerprintIndex::empty())
        }
    }

    fn classifier<'a>(&self, index: &'a FingerprintIndex) -> Classifier<'a> {
        let mut c = Classifier::new(index).with_set(self.set());
        c.cap = self.cap;
        c.oracle_cap = self.oracle_cap;
        c
    }
}

fn load_group(g: &GroupArg) -> Result<(CatalogEntry, u32), Fail> {
    let entry = match (&g.builder, &g.input) {
        (Some(spec), _) => build_from_spec(spec)?,
        (None, Some(s)) if Path::new(s).exists() => import_presentation(Path::new(s))?,
        (None, Some(s)) if s.contains(':') => build_from_spec(s)?,
        (None, Some(s)) => return Err(Fail::Input(format!("{s}: no such file"))),
        (None, None) => return Err(Fail::Input("give a presentation file or --builder".into())),
    };
    let p = g.p.unwrap_or(entry.p());
    if p != entry.p() {
        return Err(Fail::Input(format!(
            "{} is a {}-group, not a {p}-group",
            entry.name,
            entry.p()
        )));
    }
    Ok((entry, p))
}

fn header(e: &CatalogEntry) -> String {
    format!("{}  order {}  p = {}", e.name, e.order(), e.p())
}

fn index(cli: &Cli, g: &GroupArg) -> Outcome {
    let (e, p) = load_group(g)?;
    let chain = LieDimensionChain::compute(&e.presentation, p, cli.cap)?;
    let d = chain.d_sequence()?;
    let t = jennings_index(&d);
    if cli.json {
        let orders: Vec<u64> = chain.chain.iter().map(|s| s.order() as u64).collect();
        print_json(&json!({
            "group": e.name,
            "order": e.order() as u64,
            "p": p,
            "chain_orders": orders,
            "d_sequence": to_json(&d),
            "t_upper": t,
        }));
    } else {
        println!("{}", header(&e));
        for (k, s) in chain.chain.iter().enumerate() {
            println!("D_({})  order {}", k + 2, s.order());
        }
        let parts: Vec<String> = d
            .support()
            .iter()
            .map(|(m, v)| format!("d_({m})={v}"))
            .collect();
        println!(
            "{}",
            if parts.is_empty() {
                "d = 0".into()
            } else {
                parts.join(" ")
            }
        );
        println!("t^L = {t}");
    }
    Ok(())
}

fn oracle(cli: &Cli, g: &GroupArg) -> Outcome {
    let (e, p) = load_group(g)?;
    if e.order() > cli.oracle_cap as u128 {
        return Err(Fail::Input(format!(
            "order {} exceeds the oracle cap {}",
            e.order(),
            cli.oracle_cap
        )));
    }
    let upper = t_upper_direct(&e.presentation, p, cli.oracle_cap)?;
    let lower = t_lower_direct(&e.presentation, p, cli.oracle_cap)?;
    let formula = jennings_index(&jennings::lie_dimension::d_sequence(
        &e.presentation,
        p,
        cli.cap,
    )?);
    let agree = upper == formula;
    if cli.json {
        print_json(&json!({
            "group": e.name,
            "order": e.order() as u64,
            "p": p,
            "t_upper": upper,
            "t_lower": lower,
            "t_upper_formula": formula,
            "agree": agree,
        }));
    } else {
        println!("{}", header(&e));
        println!("t^L = {upper} (group algebra), {formula} (d-sequence)");
        println!("t_L = {lower}");
        println!("{}", if agree { "AGREE" } else { "DISAGREE" });
    }
    if agree {
        Ok(())
    } else {
        Err(Fail::Inconsistent)
    }
}

fn report_text(name: &str, r: &TheoremReport) -> String {
    let mut out = format!(
        "{name}  order {}  p = {}  conditions {:?}\nd = {}  t^L = {}",
        r.group_order, r.p, r.conditions, r.d_sequence, r.t_upper
    );
    if let Some(o) = r.oracle_t_upper {
        out += &format!(" (group algebra {o})");
    }
    out += &format!("  target {}\n", r.target);
    for m in &r.matches {
        out += &format!(
            "match [{}] branch {}: {}  ({})\n",
            m.item, m.branch, m.condition, m.derived_by
        );
    }
    for u in &r.undetermined {
        out += &format!("undetermined [{}]: {}\n", u.item, u.reason);
    }
    out += &format!("{}: {}", r.verdict, r.explanation);
    out
}

fn classify(cli: &Cli, g: &GroupArg) -> Outcome {
    let (e, p) = load_group(g)?;
    let index = cli.index()?;
    let r = cli.classifier(&index).verify_theorem(&e.presentation, p)?;
    if cli.json {
        let mut v = to_json(&r);
        v["group"] = json!(e.name);
        print_json(&v);
    } else {
        println!("{}", report_text(&e.name, &r));
    }
    match r.verdict {
        Verdict::Inconsistent => Err(Fail::Inconsistent),
        Verdict::Consistent | Verdict::Undetermined => Ok(()),
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

fn enumerate(cli: &Cli, p: Option<u32>, weight: u64, all_p: bool) -> Outcome {
    let primes: Vec<u32> = match (p, all_p) {
        (_, true) => PRIMES_OF_INTEREST.to_vec(),
        (Some(p), false) => vec![p],
        (None, false) => return Err(Fail::Input("give -p or --all-p".into())),
    };
    let mut results = Vec::new();
    for &q in &primes {
        if !is_prime(q) {
            return Err(Fail::Input(format!("{q} is not a prime")));
        }
        results.push((q, enumerate_admissible(q, weight)));
    }
    if cli.json {
        let map: serde_json::Map<String, Value> = results
            .iter()
            .map(|(q, v)| {
                (
                    q.to_string(),
                    Value::Array(v.iter().map(|d| json!(d.to_string())).collect()),
                )
            })
            .collect();
        print_json(&json!({ "weight": weight, "survivors": map }));
    } else {
        for (q, v) in &results {
            println!("p = {q}: {} survivors of weight {weight}", v.len());
            for d in v {
                println!("  {d}  t^L = {}", jennings_index(d));
            }
        }
    }
    Ok(())
}

fn verify_tables(cli: &Cli, dir: &Path) -> Outcome {
    let entries = load_data_catalog(dir)?;
    let mut rows = entries
        .par_iter()
        .filter(|e| !e.expected.is_empty())
        .map(|e| verify_table_row(e, cli.cap))
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by(|a, b| a.name.cmp(&b.name));
    let failed = rows.iter().filter(|r| !r.pass).count();
    if cli.json {
        print_json(&json!({ "rows": to_json(&rows), "failed": failed }));
    } else {
        for r in &rows {
            println!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.name);
            for c in r.columns.iter().filter(|c| !c.pass) {
                println!(
                    "  {}: expected {}, computed {}",
                    c.key, c.expected, c.computed
                );
            }
        }
        println!("{} rows, {failed} failed", rows.len());
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Fail::Inconsistent)
    }
}

fn conditions(cli: &Cli) -> Outcome {
    let set = cli.set();
    let defects = table_defects(set);
    if cli.json {
        let items: Vec<Value> = condition_records()
            .iter()
            .map(|r| {
                json!({
                    "item": r.item,
                    "condition": r.condition(set).to_string(),
                    "corrected": r.corrected.is_some(),
                    "note": r.note,
                })
            })
            .collect();
        print_json(&json!({ "conditions": items, "defects": to_json(&defects) }));
    } else {
        for r in condition_records() {
            let flag = if r.corrected.is_some() { " *" } else { "" };
            println!("[{}]{flag} {}", r.item, r.condition(set));
        }
        println!("\n{} statically detected defects:", defects.len());
        for d in &defects {
            let what = match &d.kind {
                DefectKind::Unsatisfiable { reason } => format!("unsatisfiable, {reason}"),
                DefectKind::ForcedWeight { weight, t_upper } => {
                    format!("forces weight {weight}, so t^L = {t_upper}")
                }
            };
            println!(
                "  [{}] branch {} at p = {}: {what}",
                d.item, d.branch, d.prime
            );
        }
    }
    Ok(())
}

fn all_entries(cli: &Cli) -> Result<Vec<CatalogEntry>, Fail> {
    let mut entries = builtin_catalog()?;
    let dir = cli.data_dir();
    if dir.is_dir() {
        entries.extend(load_data_catalog(&dir)?);
    }
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(entries)
}

fn source_text(s: &Source) -> String {
    match s {
        Source::Builder(b) => b.clone(),
        Source::PaperItem(i) => format!("item {i}"),
        Source::Imported(path) => path.display().to_string(),
    }
}

fn catalog_list(cli: &Cli) -> Outcome {
    let entries = all_entries(cli)?;
    if cli.json {
        let v: Vec<Value> = entries
            .iter()
            .map(|e| {
                json!({
                    "name": e.name,
                    "order": e.order() as u64,
                    "p": e.p(),
                    "source": to_json(&e.source),
                    "small_group_id": e.small_group_id,
                    "role": to_json(&e.role),
                    "table_columns": e.expected.len(),
                })
            })
            .collect();
        print_json(&Value::Array(v));
    } else {
        for e in &entries {
            let id = e
                .small_group_id
                .map(|(o, n)| format!("  S({o},{n})"))
                .unwrap_or_default();
            println!(
                "{:<28} order {:<8} {}{id}",
                e.name,
                e.order(),
                source_text(&e.source)
            );
        }
        println!("{} groups", entries.len());
    }
    Ok(())
}

fn catalog_build(cli: &Cli, spec: &str) -> Outcome {
    let e = build_from_spec(spec)?;
    if cli.json {
        print_json(&json!({
            "name": e.name,
            "order": e.order() as u64,
            "p": e.p(),
            "presentation": e.presentation.to_text(),
        }));
    } else {
        print!("{}", e.presentation.to_text());
    }
    Ok(())
}

fn catalog_sweep(cli: &Cli) -> Outcome {
    let entries = all_entries(cli)?;
    let index = cli.index()?;
    let classifier = cli.classifier(&index);
    let reports = entries
        .par_iter()
        .map(|e| {
            classifier
                .verify_theorem(&e.presentation, e.p())
                .map(|r| (e.name.clone(), r))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let count = |v: Verdict| reports.iter().filter(|(_, r)| r.verdict == v).count();
    let inconsistent = count(Verdict::Inconsistent);
    if cli.json {
        let rows: serde_json::Map<String, Value> = reports
            .iter()
            .map(|(n, r)| (n.clone(), to_json(r)))
            .collect();
        print_json(&json!({ "groups": rows, "inconsistent": inconsistent }));
    } else {
        for (name, r) in &reports {
            println!(
                "{:<12} {:<28} d = {:<22} t^L = {}",
                r.verdict.to_string(),
                name,
                r.d_sequence.to_string(),
                r.t_upper
            );
        }
        println!(
            "{} groups: {} consistent, {inconsistent} inconsistent, {} undetermined",
            reports.len(),
            count(Verdict::Consistent),
            count(Verdict::Undetermined)
        );
    }
    if inconsistent == 0 {
        Ok(())
    } else {
        Err(Fail::Inconsistent)
    }
}
