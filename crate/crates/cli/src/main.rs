use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use pos1324::avoiders::{ClassCountTable, CountCache, CountOracle};
use pos1324::domino::{enumerate_dominoes, from_domino, to_domino};
use pos1324::genfun::{self, IdentityReport};
use pos1324::primitive::factorize;
use pos1324::verify::{run_suite, Suite, VerifyConfig};
use pos1324::{BiSeries, Permutation, Series};

#[derive(Debug, Parser)]
#[command(name = "pos1324", version, about = "Positional statistics of 1324-avoiding permutations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Output format; plain text when omitted.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Directory for cached count tables. Without it every run enumerates in memory.
    #[arg(long, global = true, value_name = "PATH")]
    cache_dir: Option<PathBuf>,
    /// Worker threads for enumeration, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Cross-check results against enumeration and exit 1 on any mismatch.
    #[arg(long, global = true)]
    strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count 1324-avoiders of size n, optionally restricted to one class.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Factor a permutation with 1 left of its maximum into primitives.
    Factor {
        #[arg(value_name = "PERM", conflicts_with = "perm_flag")]
        perm: Option<Permutation>,
        #[arg(long = "perm", value_name = "PERM")]
        perm_flag: Option<Permutation>,
    },
    /// Dominoes: list or count those with a given number of points, or map a primitive.
    Domino {
        #[arg(long, conflicts_with = "perm")]
        points: Option<usize>,
        #[arg(long, requires = "points")]
        count: bool,
        #[arg(long)]
        perm: Option<Permutation>,
    },
    /// Print a generating function truncated at the given order.
    Series {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 11)]
        order: usize,
        /// Truncation order in t for the bivariate functions.
        #[arg(long, default_value_t = 9)]
        max_k: usize,
    },
    /// Run verification suites; exit 0 when every check passes, 1 otherwise.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 11)]
        max_n: usize,
        /// Restrict the conjecture suite to one value of a.
        #[arg(long)]
        a: Option<usize>,
        #[arg(long, default_value_t = 6)]
        max_k: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    F,
    T,
    G1,
    G2,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}

enum Failure {
    Usage(String),
    Check(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Output {
    text: String,
    ok: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let oracle = match &cli.global.cache_dir {
        Some(dir) => CountOracle::with_cache(CountCache::new(dir)),
        None => CountOracle::in_memory(),
    };
    match run(&cli, &oracle) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli, oracle: &CountOracle) -> Result<Output, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Count { n, a, k } => cmd_count(g, oracle, *n, *a, *k),
        Command::Factor { perm, perm_flag } => {
            let p = perm
                .as_ref()
                .or(perm_flag.as_ref())
                .ok_or_else(|| Failure::Usage("a permutation is required".into()))?;
            cmd_factor(g, p)
        }
        Command::Domino { points, count, perm } => cmd_domino(g, *points, *count, perm.as_ref()),
        Command::Series {
            which,
            a,
            k,
            order,
            max_k,
        } => cmd_series(g, oracle, *which, *a, *k, *order, *max_k),
        Command::Verify { suite, max_n, a, max_k } => {
            let cfg = VerifyConfig {
                max_n: *max_n,
                max_k: *max_k,
                conjecture_a: *a,
                ..VerifyConfig::default()
            };
            cmd_verify(g, oracle, *suite, &cfg)
        }
    }
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

fn json_out(v: Value) -> String {
    line(v)
}

fn cmd_count(
    g: &Global,
    oracle: &CountOracle,
    n: usize,
    a: Option<usize>,
    k: Option<usize>,
) -> Result<Output, Failure> {
    if n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    if a == Some(0) {
        return Err(Failure::Usage("--a must be at least 1".into()));
    }
    if k.is_some() && a.is_none() {
        return Err(Failure::Usage("--k needs --a".into()));
    }
    let table = oracle.table(n)?;
    if g.strict {
        strict_count_check(oracle, &table)?;
    }
    let rows: Vec<(usize, usize, BigUint)> = table
        .counts
        .iter()
        .filter(|(c, _)| a.is_none_or(|a| c.a == a) && k.is_none_or(|k| c.k == k))
        .map(|(c, v)| (c.a, c.k, v.clone()))
        .collect();
    let text = match (g.format, a, k) {
        (Some(Format::Csv), _, _) => {
            let mut s = line("n,a,k,count");
            for (a, k, v) in &rows {
                s += &line(format!("{n},{a},{k},{v}"));
            }
            s
        }
        (Some(Format::Json), Some(a), Some(k)) => {
            json_out(json!({"n": n, "a": a, "k": k, "count": table.count(a, k).to_string()}))
        }
        (Some(Format::Json), _, _) => json_out(json!({
            "n": n,
            "total": table.total.to_string(),
            "counts": rows
                .iter()
                .map(|(a, k, v)| json!({"a": a, "k": k, "count": v.to_string()}))
                .collect::<Vec<_>>(),
        })),
        (None, Some(a), Some(k)) => line(table.count(a, k)),
        (None, Some(a), None) => line(table.count_a(a)),
        (None, None, _) => line(&table.total),
    };
    Ok(Output::ok(text))
}

fn strict_count_check(oracle: &CountOracle, table: &ClassCountTable) -> Result<(), Failure> {
    let n = table.n;
    if n >= 2 {
        let prev = oracle.table(n - 1)?;
        if table.total != &prev.total + table.class_sum() {
            return Err(Failure::Check(format!("size {n}: total does not split into classes")));
        }
    }
    for (c, v) in &table.counts {
        let predicted = match c.a {
            1 => genfun::t1k_series(c.k, n),
            2 => genfun::t2k_series(c.k, n),
            _ => continue,
        };
        if *predicted.coeff(n) != pos1324::Rational::from_integer((*v).clone().into()) {
            return Err(Failure::Check(format!("size {n}: class a={} k={} disagrees with its series", c.a, c.k)));
        }
    }
    Ok(())
}

fn cmd_factor(g: &Global, p: &Permutation) -> Result<Output, Failure> {
    let d = factorize(p)?;
    if g.strict && d.recompose() != *p {
        return Err(Failure::Check(format!("{} does not recompose", p.compact())));
    }
    let text = match g.format {
        Some(Format::Json) => json_out(json!({
            "perm": p.compact(),
            "k": d.k(),
            "factors": d.factors().iter().map(Permutation::compact).collect::<Vec<_>>(),
        })),
        Some(Format::Csv) => {
            let mut s = line("index,factor");
            for (i, f) in d.factors().iter().enumerate() {
                s += &line(format!("{},{}", i + 1, f.compact()));
            }
            s
        }
        None => line(&d),
    };
    Ok(Output::ok(text))
}

fn cmd_domino(g: &Global, points: Option<usize>, count: bool, perm: Option<&Permutation>) -> Result<Output, Failure> {
    if let Some(p) = perm {
        let d = to_domino(p)?;
        if g.strict && from_domino(&d)? != *p {
            return Err(Failure::Check(format!("{} does not round-trip", p.compact())));
        }
        let text = match g.format {
            Some(Format::Json) => json_out(json!({"perm": p.compact(), "domino": d.to_string()})),
            Some(Format::Csv) => line("perm,domino") + &line(format!("{},{d}", p.compact())),
            None => line(&d),
        };
        return Ok(Output::ok(text));
    }
    let points = points.ok_or_else(|| Failure::Usage("either --points or --perm is required".into()))?;
    let dominoes = enumerate_dominoes(points);
    let text = match (g.format, count) {
        (Some(Format::Json), true) => json_out(json!({"points": points, "count": dominoes.len()})),
        (Some(Format::Json), false) => json_out(json!({
            "points": points,
            "dominoes": dominoes.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })),
        (Some(Format::Csv), true) => line("points,count") + &line(format!("{points},{}", dominoes.len())),
        (Some(Format::Csv), false) => {
            let mut s = line("domino");
            for d in &dominoes {
                s += &line(d);
            }
            s
        }
        (None, true) => line(dominoes.len()),
        (None, false) => dominoes.iter().map(line).collect(),
    };
    Ok(Output::ok(text))
}

fn series_output(g: &Global, name: &str, s: &Series) -> String {
    match g.format {
        Some(Format::Json) => json_out(json!({
            "series": name,
            "order": s.order(),
            "coefficients": s.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
        })),
        Some(Format::Csv) => {
            let mut out = line("n,coefficient");
            for (n, c) in s.coeffs().iter().enumerate() {
                out += &line(format!("{n},{c}"));
            }
            out
        }
        None => line(s),
    }
}

fn bivariate_output(g: &Global, name: &str, b: &BiSeries) -> String {
    match g.format {
        Some(Format::Json) => json_out(json!({
            "series": name,
            "x_order": b.x_order(),
            "t_order": b.t_order(),
            "coefficients": (0..=b.x_order())
                .map(|n| (0..=b.t_order()).map(|k| b.coeff(n, k).to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })),
        _ => b.to_csv(),
    }
}

fn cmd_series(
    g: &Global,
    oracle: &CountOracle,
    which: Which,
    a: Option<usize>,
    k: Option<usize>,
    order: usize,
    max_k: usize,
) -> Result<Output, Failure> {
    if order == 0 {
        return Err(Failure::Usage("--order must be at least 1".into()));
    }
    match which {
        Which::F => Ok(Output::ok(series_output(g, "f", &genfun::f_series(order)))),
        Which::T => {
            let (a, k) = a
                .zip(k)
                .ok_or_else(|| Failure::Usage("--which T needs --a and --k".into()))?;
            if a == 0 {
                return Err(Failure::Usage("--a must be at least 1".into()));
            }
            let s = match a {
                1 if k == 0 => genfun::t_ak_bruteforce(1, 0, order, oracle)?,
                1 => genfun::t1k_series(k, order),
                2 => genfun::t2k_series(k, order),
                _ => genfun::t_ak_bruteforce(a, k, order, oracle)?,
            };
            if g.strict && a <= 2 && s != genfun::t_ak_bruteforce(a, k, order, oracle)? {
                return Err(Failure::Check(format!("T_{a},{k} disagrees with enumeration")));
            }
            Ok(Output::ok(series_output(g, &format!("T_{a},{k}"), &s)))
        }
        Which::G1 => {
            let b = genfun::g1_series(order, max_k);
            Ok(Output::ok(bivariate_output(g, "g1", &b)))
        }
        Which::G2 => {
            let b = genfun::g2_series(order, max_k)?;
            Ok(Output::ok(bivariate_output(g, "g2", &b)))
        }
    }
}

fn cmd_verify(g: &Global, oracle: &CountOracle, suite: Suite, cfg: &VerifyConfig) -> Result<Output, Failure> {
    let reports = run_suite(suite, cfg, oracle)?;
    let ok = reports.iter().all(|r| r.pass);
    let text = match g.format {
        Some(Format::Json) => json_out(json!({
            "suite": suite.to_string(),
            "pass": ok,
            "reports": reports.iter().map(IdentityReport::to_json).collect::<Vec<_>>(),
        })),
        Some(Format::Csv) => {
            let mut s = line("identity,params,pass,nonzero_residuals,millis");
            for r in &reports {
                let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                s += &line(format!(
                    "{},{},{},{},{}",
                    r.identity,
                    params.join(" "),
                    r.pass,
                    r.failures().count(),
                    r.millis
                ));
            }
            s
        }
        None => {
            let mut s: String = reports.iter().map(line).collect();
            let passed = reports.iter().filter(|r| r.pass).count();
            s += &line(format!(
                "{} {passed}/{} checks passed",
                if ok { "PASS" } else { "FAIL" },
                reports.len()
            ));
            s
        }
    };
    Ok(Output { text, ok })
}
