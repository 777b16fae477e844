//! `fibercalc`: exact invariants of singular fibers from the command line.

use std::fs;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fibercalc::catalog::{self, CatalogEntry};
use fibercalc::fiber::{emit_fiber_json, parse_fiber_builder};
use fibercalc::rational::{fmt_decimal, fmt_exact};
use fibercalc::search::{enumerate_fibers, verify_theorem13, SearchBounds};
use fibercalc::{
    branch_beta, chi_pair, classify_fiber, compute_invariants, dedekind_sum, dual_fiber, duality_check, emit_fiber,
    hj_expand, inequality_report, parse_fiber, validate, FiberError, FiberGraph, Predicate, Rational,
};
use rayon::prelude::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "fibercalc", version, about = "Exact local invariants of singular fibers")]
struct Cli {
    /// Structured JSON output instead of key = value lines.
    #[arg(long, global = true)]
    json: bool,
    /// Render rationals as decimals with this many places (rounded).
    #[arg(long, global = true, value_name = "DIGITS")]
    decimal: Option<usize>,
    /// Worker threads for search and catalog verify; 0 = all cores.
    #[arg(long, global = true, env = "FIBERCALC_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Structural and numerical checks of a fiber file.
    Validate { file: PathBuf },
    /// Full invariant bundle.
    Invariants { file: PathBuf },
    /// Dual fiber under the base change of degree n (default lcm of multiplicities minus 1).
    Dual {
        file: PathBuf,
        #[arg(long)]
        n: Option<i64>,
        /// Write the fiber here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// χ + χ* = N_bar, N_bar* = N_bar and g* = g.
    Duality {
        file: PathBuf,
        #[arg(long)]
        n: Option<i64>,
    },
    /// Every applicable inequality; exits 1 if one is violated.
    Check { file: PathBuf },
    /// Match against the classification lists.
    Classify { file: PathBuf },
    /// Shipped fibers.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
    /// Enumerate numerical fibers on rational trees.
    Search {
        /// A genus or an inclusive range `a..b`.
        #[arg(long, default_value = "2")]
        genus: String,
        #[arg(long, default_value_t = 7)]
        max_vertices: usize,
        #[arg(long, default_value_t = 8)]
        max_mult: i64,
        /// Predicate over invariant names, e.g. "c1sq_min > 4*g - 11/2".
        #[arg(long = "where")]
        predicate: Option<String>,
        /// Write each emitted fiber to this directory.
        #[arg(long)]
        emit_dir: Option<PathBuf>,
        /// Use the c1^2 > 4g - 11/2 predicate and diff against the catalog.
        #[arg(long)]
        verify_theorem13: bool,
    },
    /// Dedekind sum s(p, q) and the node term chi(p, q).
    Dedekind { p: i64, q: i64 },
    /// Hirzebruch-Jung expansion of n/q.
    Hj { n: i64, q: i64 },
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// Keys with their expected values.
    List,
    /// Write the fiber file of a key.
    Emit {
        key: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recompute every expectation; exits 1 on any mismatch.
    Verify,
}

/// A failure with the exit code it maps to.
enum Failure {
    /// Domain error: message printed with `error:`.
    Error(String),
    /// Checks ran and something did not hold; details already printed.
    Violated,
}

impl From<FiberError> for Failure {
    fn from(e: FiberError) -> Self {
        Failure::Error(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Error(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Out {
    json: bool,
    decimal: Option<usize>,
}

impl Out {
    fn q(&self, q: &Rational) -> String {
        match self.decimal {
            Some(d) => fmt_decimal(q, d),
            None => fmt_exact(q),
        }
    }

    fn q_json(&self, q: &Rational) -> Value {
        if self.decimal.is_none() && q.is_integer() {
            if let Ok(i) = q.to_integer().to_string().parse::<i64>() {
                return json!(i);
            }
        }
        json!(self.q(q))
    }

    fn print_json(&self, v: &Value) {
        println!("{}", serde_json::to_string_pretty(v).expect("json serializes"));
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<FiberGraph, Failure> {
    let text = read_input(path)?;
    parse_fiber(&text).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Error(format!("{}: {e}", p.display()))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_validate(out: &Out, file: &Path) -> Outcome {
    let text = read_input(file)?;
    let graph = parse_fiber_builder(&text)
        .and_then(|b| b.build_unchecked())
        .map_err(|e| Failure::Error(format!("{}: {e}", file.display())))?;
    let rep = validate(&graph);
    for i in &rep.issues {
        eprintln!("violation: {}", i);
    }
    if out.json {
        out.print_json(&json!({
            "valid": rep.is_valid(),
            "issues": rep.issues,
            "radical": rep.radical,
            "notes": rep.notes,
        }));
    } else {
        println!("valid = {}", rep.is_valid());
        if let Some(r) = &rep.radical {
            let r: Vec<String> = r.iter().map(i64::to_string).collect();
            println!("radical = {}", r.join(" "));
        }
        for i in &rep.issues {
            println!("issue = {i}");
        }
        for n in &rep.notes {
            println!("note = {n}");
        }
    }
    if rep.is_valid() {
        Ok(())
    } else {
        Err(Failure::Violated)
    }
}

fn cmd_invariants(out: &Out, file: &Path) -> Outcome {
    let f = load(file)?;
    let b = compute_invariants(&f)?;
    let record = serde_json::to_value(b.record).expect("enum serializes");
    if out.json {
        let mut m = serde_json::Map::new();
        for (k, v) in b.entries() {
            m.insert(k.into(), out.q_json(&v));
        }
        m.insert("record".into(), record);
        out.print_json(&Value::Object(m));
    } else {
        for (k, v) in b.entries() {
            println!("{k} = {}", out.q(&v));
        }
        println!("record = {}", record.as_str().unwrap_or_default());
    }
    Ok(())
}

fn cmd_dual(out: &Out, file: &Path, n: Option<i64>, output: Option<&Path>) -> Outcome {
    let f = load(file)?;
    let d = dual_fiber(&f, n)?;
    let text = if out.json { emit_fiber_json(&d) + "\n" } else { emit_fiber(&d) };
    write_output(output, &text)
}

fn cmd_duality(out: &Out, file: &Path, n: Option<i64>) -> Outcome {
    let f = load(file)?;
    let c = duality_check(&f, n)?;
    if out.json {
        out.print_json(&json!({
            "chi": out.q_json(&c.chi),
            "chi_dual": out.q_json(&c.chi_dual),
            "N_bar": c.n_bar,
            "N_bar_dual": c.n_bar_dual,
            "g": c.genus,
            "g_dual": c.genus_dual,
            "n": c.n,
            "ok": c.ok,
        }));
    } else {
        println!(
            "chi = {}, chi_dual = {}, N_bar = {}, ok = {}",
            out.q(&c.chi),
            out.q(&c.chi_dual),
            c.n_bar,
            c.ok
        );
        println!("N_bar_dual = {}, g = {}, g_dual = {}, n = {}", c.n_bar_dual, c.genus, c.genus_dual, c.n);
    }
    if c.ok {
        Ok(())
    } else {
        eprintln!("violation: duality fails at n = {}", c.n);
        Err(Failure::Violated)
    }
}

fn cmd_check(out: &Out, file: &Path) -> Outcome {
    let f = load(file)?;
    let rep = inequality_report(&f)?;
    for r in rep.failures() {
        eprintln!(
            "violation: {}: {} {} {}",
            r.name,
            fmt_exact(&r.left),
            r.relation,
            fmt_exact(&r.right)
        );
    }
    if out.json {
        out.print_json(&rep.to_json());
    } else {
        print!("{rep}");
    }
    if rep.all_pass() {
        Ok(())
    } else {
        Err(Failure::Violated)
    }
}

fn cmd_classify(out: &Out, file: &Path) -> Outcome {
    let f = load(file)?;
    let c = classify_fiber(&f)?;
    for v in &c.violations {
        eprintln!("violation: {v}");
    }
    if out.json {
        let mut v = serde_json::to_value(&c).expect("classification serializes");
        v["label"] = json!(c.label());
        out.print_json(&v);
    } else {
        print!("{c}");
    }
    if c.violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violated)
    }
}

fn expected_json(out: &Out, e: &CatalogEntry) -> Value {
    let mut m = serde_json::Map::new();
    for (k, v) in &e.expected.0 {
        m.insert(k.to_string(), out.q_json(v));
    }
    Value::Object(m)
}

fn cmd_catalog(out: &Out, cmd: &CatalogCmd) -> Outcome {
    match cmd {
        CatalogCmd::List => {
            let all = catalog::all();
            if out.json {
                let items: Vec<Value> = all
                    .iter()
                    .map(|e| {
                        json!({
                            "key": e.key,
                            "vertices": e.graph.len(),
                            "expected": expected_json(out, e),
                            "provenance": e.provenance,
                        })
                    })
                    .collect();
                out.print_json(&Value::Array(items));
            } else {
                for e in &all {
                    let exp: Vec<String> = e.expected.0.iter().map(|(k, v)| format!("{k} = {}", out.q(v))).collect();
                    println!("{}\t{}", e.key, exp.join(", "));
                }
            }
            Ok(())
        }
        CatalogCmd::Emit { key, output } => {
            let e = catalog::lookup(key)?;
            let text = if out.json {
                emit_fiber_json(&e.graph) + "\n"
            } else {
                emit_fiber(&e.graph)
            };
            write_output(output.as_deref(), &text)
        }
        CatalogCmd::Verify => {
            let all = catalog::all();
            let results: Vec<(String, Result<Vec<catalog::Mismatch>, String>)> = all
                .par_iter()
                .map(|e| {
                    let r = compute_invariants(&e.graph)
                        .map(|b| e.expected.mismatches(&b))
                        .map_err(|err| err.to_string());
                    (e.key.clone(), r)
                })
                .collect();
            let mut ok = true;
            let mut items = Vec::new();
            for (key, r) in &results {
                match r {
                    Ok(m) if m.is_empty() => {
                        if !out.json {
                            println!("ok {key}");
                        }
                        items.push(json!({ "key": key, "ok": true }));
                    }
                    Ok(m) => {
                        ok = false;
                        for x in m {
                            eprintln!(
                                "violation: {key}: {} expected {} computed {}",
                                x.field, x.expected, x.computed
                            );
                        }
                        if !out.json {
                            println!("FAIL {key}");
                        }
                        items.push(json!({ "key": key, "ok": false, "mismatches": m }));
                    }
                    Err(err) => {
                        ok = false;
                        eprintln!("violation: {key}: {err}");
                        if !out.json {
                            println!("FAIL {key}");
                        }
                        items.push(json!({ "key": key, "ok": false, "error": err }));
                    }
                }
            }
            if out.json {
                out.print_json(&json!({ "entries": items, "ok": ok }));
            } else {
                println!("{} entries, {}", results.len(), if ok { "all match" } else { "MISMATCH" });
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Violated)
            }
        }
    }
}

fn parse_genus(s: &str) -> Result<RangeInclusive<i64>, Failure> {
    let bad = || Failure::Error(format!("bad genus `{s}`: expected `g` or `a..b`"));
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|_| bad());
    match s.split_once("..") {
        Some((a, b)) => Ok(parse(a)?..=parse(b.trim_start_matches('='))?),
        None => {
            let g = parse(s)?;
            Ok(g..=g)
        }
    }
}

struct SearchArgs<'a> {
    genus: &'a str,
    max_vertices: usize,
    max_mult: i64,
    predicate: Option<&'a str>,
    emit_dir: Option<&'a Path>,
    verify: bool,
}

fn cmd_search(out: &Out, a: SearchArgs<'_>) -> Outcome {
    let genus = parse_genus(a.genus)?;
    if a.verify {
        let r = verify_theorem13(genus, a.max_vertices, a.max_mult)?;
        eprintln!(
            "stats: shapes = {}, numerical = {}, pruned = {}, distinct = {}",
            r.stats.shapes, r.stats.numerical, r.stats.pruned, r.stats.distinct
        );
        if out.json {
            out.print_json(&serde_json::to_value(&r).expect("report serializes"));
        } else {
            print!("{r}");
        }
        if !r.empty_diff() {
            eprintln!("violation: search and catalog disagree");
            return Err(Failure::Violated);
        }
        return Ok(());
    }
    let mut bounds = SearchBounds::new(genus, a.max_vertices, a.max_mult);
    if let Some(p) = a.predicate {
        bounds = bounds.with_predicate(Predicate::parse(p)?);
    }
    let res = enumerate_fibers(&bounds)?;
    let s = &res.stats;
    eprintln!(
        "stats: shapes = {}, numerical = {}, pruned = {}, distinct = {}, emitted = {}",
        s.shapes, s.numerical, s.pruned, s.distinct, s.emitted
    );
    if let Some(dir) = a.emit_dir {
        fs::create_dir_all(dir).map_err(|e| Failure::Error(format!("{}: {e}", dir.display())))?;
        for (i, f) in res.fibers.iter().enumerate() {
            let g = f.graph.clone().with_name(format!("search/{i:04}"));
            let path = dir.join(format!("fiber_{i:04}.fib"));
            fs::write(&path, emit_fiber(&g)).map_err(|e| Failure::Error(format!("{}: {e}", path.display())))?;
        }
    }
    if out.json {
        let fibers: Vec<Value> = res
            .fibers
            .iter()
            .map(|f| {
                let (c1, c2, chi) = f.invariants.chern();
                json!({
                    "label": f.label,
                    "g": f.invariants.g,
                    "scale": f.scale,
                    "base_label": f.base_label,
                    "blowups": f.graph.blowups(),
                    "c1sq_min": out.q_json(&c1),
                    "c2_min": out.q_json(&c2),
                    "chi": out.q_json(&chi),
                })
            })
            .collect();
        out.print_json(&json!({
            "predicate": bounds.predicate.as_ref().map(|p| p.source().to_string()),
            "stats": res.stats,
            "per_genus": res.per_genus(),
            "fibers": fibers,
        }));
    } else {
        for f in &res.fibers {
            let (c1, c2, chi) = f.invariants.chern();
            let scale = if f.scale > 1 { format!(" scale = {}", f.scale) } else { String::new() };
            println!(
                "g = {} c1sq_min = {} c2_min = {} chi = {}{scale} | {}",
                f.invariants.g,
                out.q(&c1),
                out.q(&c2),
                out.q(&chi),
                f.label
            );
        }
        for (g, n) in res.per_genus() {
            println!("count g = {g}: {n}");
        }
        println!("total = {}", res.fibers.len());
    }
    Ok(())
}

fn cmd_dedekind(out: &Out, p: i64, q: i64) -> Outcome {
    let s = dedekind_sum(p, q)?;
    let c = chi_pair(p, q)?;
    if out.json {
        out.print_json(&json!({ "p": p, "q": q, "dedekind_sum": out.q_json(&s), "chi_pair": out.q_json(&c) }));
    } else {
        println!("dedekind_sum = {}", out.q(&s));
        println!("chi_pair = {}", out.q(&c));
    }
    Ok(())
}

fn cmd_hj(out: &Out, n: i64, q: i64) -> Outcome {
    let ch = hj_expand(n, q)?;
    let beta = branch_beta(&ch);
    if out.json {
        out.print_json(&json!({
            "n": ch.n,
            "q": ch.q,
            "es": ch.es,
            "mus": ch.mus,
            "q_prime": ch.q_prime(),
            "beta": out.q_json(&beta),
        }));
    } else {
        let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
        println!("es = {}", join(&ch.es));
        println!("mus = {}", join(&ch.mus));
        println!("q_prime = {}", ch.q_prime());
        println!("beta = {}", out.q(&beta));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let out = Out {
        json: cli.json,
        decimal: cli.decimal,
    };
    if let Some(d) = cli.decimal {
        eprintln!("warning: decimal output is rounded to {d} places");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| Failure::Error(e.to_string()))?;
    match &cli.cmd {
        Cmd::Validate { file } => cmd_validate(&out, file),
        Cmd::Invariants { file } => cmd_invariants(&out, file),
        Cmd::Dual { file, n, output } => cmd_dual(&out, file, *n, output.as_deref()),
        Cmd::Duality { file, n } => cmd_duality(&out, file, *n),
        Cmd::Check { file } => cmd_check(&out, file),
        Cmd::Classify { file } => cmd_classify(&out, file),
        Cmd::Catalog { cmd } => cmd_catalog(&out, cmd),
        Cmd::Search {
            genus,
            max_vertices,
            max_mult,
            predicate,
            emit_dir,
            verify_theorem13,
        } => cmd_search(
            &out,
            SearchArgs {
                genus,
                max_vertices: *max_vertices,
                max_mult: *max_mult,
                predicate: predicate.as_deref(),
                emit_dir: emit_dir.as_deref(),
                verify: *verify_theorem13,
            },
        ),
        Cmd::Dedekind { p, q } => cmd_dedekind(&out, *p, *q),
        Cmd::Hj { n, q } => cmd_hj(&out, *n, *q),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violated) => ExitCode::from(1),
        Err(Failure::Error(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
