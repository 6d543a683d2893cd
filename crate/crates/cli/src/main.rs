use std::fs;
use std::io::{self, BufRead, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lbc_core::bounds::{distinguishing_bounds, lemma1_bounds, rate_report, BoundsReport};
use lbc_core::classify::{build_classifier, Strategy};
use lbc_core::constructions::{
    combine_v_wprime, construct_v, construct_w, construct_wprime, even_weight_basis, greedy_avoiding, zero_pad,
    WprimeMethod,
};
use lbc_core::io::{parse_basis, parse_matrix, write_basis, write_matrix};
use lbc_core::solver::{build_table, check_relations, TableRecord, SOLVER_MAX_N};
use lbc_core::{
    verify_avoiding, BitVector, ClassPair, EchelonBasis, Error, SearchConfig, SearchResult, SearchStatus, Solver,
    SymmetricClass, WeightSet,
};
use serde::Serialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "lbc", version, about = "Annulus-avoiding subspaces and linear classification over GF(2)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Parallel search workers.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Search node budget; past it results are flagged as lower bounds.
    #[arg(long, global = true, env = "LBC_NODE_BUDGET", default_value_t = 1_000_000_000)]
    node_budget: u64,
    /// Wall-clock limit per search, in seconds.
    #[arg(long, global = true)]
    time_limit: Option<f64>,
    /// Largest span dimension that may be enumerated.
    #[arg(long, global = true, default_value_t = lbc_core::DEFAULT_ENUMERATION_CAP)]
    enumeration_cap: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Exact m*(a,b,n) with a verified witness.
    Mstar {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        n: usize,
        /// Write the witness basis here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Sweep of m* over ranges such as `1..9`.
    Table {
        #[arg(long, value_parser = parse_range)]
        n: RangeInclusive<usize>,
        /// Defaults to 1..max(n).
        #[arg(long, value_parser = parse_range)]
        a: Option<RangeInclusive<usize>>,
        /// Defaults to 1..max(n).
        #[arg(long, value_parser = parse_range)]
        b: Option<RangeInclusive<usize>>,
        /// Run the relation checks and report them on stderr.
        #[arg(long)]
        check: bool,
        /// Directory for one witness file per entry.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Build one of the explicit families.
    Construct {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Forbidden weights for `greedy`, e.g. `1..3,7`.
        #[arg(long)]
        forbidden: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a kernel or span avoids a weight set.
    Verify {
        #[arg(long, conflicts_with = "basis", required_unless_present = "basis")]
        matrix: Option<PathBuf>,
        #[arg(long)]
        basis: Option<PathBuf>,
        #[arg(long)]
        forbidden: String,
    },
    /// Build a separating matrix for two symmetric classes.
    Classify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        class1: String,
        #[arg(long)]
        class2: String,
        #[arg(long, default_value = "exact")]
        strategy: Strategy,
        #[arg(long)]
        emit_matrix: Option<PathBuf>,
        /// Classify newline-separated points from this file (`-` for stdin).
        #[arg(long)]
        batch: Option<PathBuf>,
    },
    /// Counting bounds and rate evaluators.
    Bounds {
        #[arg(long, requires = "n")]
        class: Option<String>,
        #[arg(long, requires = "n", conflicts_with = "class")]
        forbidden: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, requires = "beta")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        beta: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// V + W' construction and the bound it implies, next to exact values.
    Counterexample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Greedy,
    Zeropad,
    Parity,
    #[value(name = "V")]
    V,
    #[value(name = "W")]
    W,
    #[value(name = "Wprime")]
    Wprime,
    Combined,
}

enum Failure {
    Domain(String),
    Exhausted(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Exhausted(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = std::result::Result<Status, Failure>;

/// Success, or partial output from a search that ran out of budget.
#[derive(PartialEq, Eq)]
enum Status {
    Done,
    Partial,
}

impl Status {
    fn of(status: SearchStatus) -> Self {
        match status {
            SearchStatus::Optimal => Status::Done,
            SearchStatus::LowerBoundOnly => Status::Partial,
        }
    }

    fn and(self, other: Status) -> Status {
        if self == Status::Partial || other == Status::Partial {
            Status::Partial
        } else {
            Status::Done
        }
    }
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad range {s:?}"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok(num(lo)?..=num(hi)?),
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

impl Global {
    fn config(&self) -> SearchConfig {
        let mut cfg = SearchConfig::default().with_workers(self.workers).with_node_budget(self.node_budget);
        cfg.time_limit = self.time_limit.map(Duration::from_secs_f64);
        cfg.enumeration_cap = self.enumeration_cap;
        cfg
    }
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string(value).map_err(|e| Failure::Domain(e.to_string()))?;
    println!("{text}");
    Ok(Status::Done)
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn witness_rows(basis: &EchelonBasis) -> Vec<String> {
    basis.rows().iter().map(|r| r.to_string()).collect()
}

fn search_json(res: &SearchResult) -> serde_json::Value {
    let mut v = serde_json::to_value(res).expect("serializable");
    v["witness"] = json!(witness_rows(&res.witness));
    v
}

fn mstar(g: &Global, a: usize, b: usize, n: usize, witness: Option<&Path>) -> Outcome {
    let res = lbc_core::m_star(a, b, n, &g.config())?;
    if let Some(path) = witness {
        fs::write(path, write_basis(&res.witness))?;
    }
    match g.format.unwrap_or(Format::Json) {
        Format::Json => {
            print_json(&search_json(&res))?;
        }
        Format::Tsv => {
            println!("{}", TableRecord::tsv_header());
            println!("{}", TableRecord::from_result(a, b, &res).to_tsv());
        }
        Format::Text => println!("m*={} k={} status={}", res.m_star, res.k, status_name(res.status)),
    };
    if !res.is_optimal() {
        eprintln!("warning: node budget or time limit reached; m* is an upper bound");
    }
    Ok(Status::of(res.status))
}

fn status_name(s: SearchStatus) -> &'static str {
    match s {
        SearchStatus::Optimal => "optimal",
        SearchStatus::LowerBoundOnly => "lower_bound_only",
    }
}

fn table(
    g: &Global,
    n: RangeInclusive<usize>,
    a: Option<RangeInclusive<usize>>,
    b: Option<RangeInclusive<usize>>,
    check: bool,
    witness_dir: Option<&Path>,
) -> Outcome {
    let top = *n.end();
    let solver = Solver::new(g.config());
    let mut records = build_table(a.unwrap_or(1..=top), b.unwrap_or(1..=top), n, &solver)?;
    if let Some(dir) = witness_dir {
        fs::create_dir_all(dir)?;
        for r in &mut records {
            let name = format!("m_{}_{}_{}.txt", r.a, r.b, r.n);
            fs::write(dir.join(&name), write_basis(&r.witness))?;
            r.witness_file = Some(name);
        }
    }
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let format = g.format.unwrap_or(Format::Json);
    if format == Format::Tsv {
        writeln!(out, "{}", TableRecord::tsv_header())?;
    }
    for r in &records {
        match format {
            Format::Tsv => writeln!(out, "{}", r.to_tsv())?,
            Format::Text => writeln!(out, "m*({},{},{}) = {} [{}]", r.a, r.b, r.n, r.m_star, status_name(r.status))?,
            Format::Json => writeln!(out, "{}", serde_json::to_string(r).expect("serializable"))?,
        }
    }
    let mut status = Status::Done;
    for r in records.iter().filter(|r| r.status != SearchStatus::Optimal) {
        eprintln!("warning: m*({},{},{}) is only an upper bound", r.a, r.b, r.n);
        status = Status::Partial;
    }
    if check {
        let report = check_relations(&records)?;
        eprintln!("{}", serde_json::to_string(&report).expect("serializable"));
        if !report.is_clean() {
            return Err(Failure::Domain(format!("{} relation violations", report.violations.len())));
        }
    }
    Ok(status)
}

#[allow(clippy::too_many_arguments)]
fn construct(
    g: &Global,
    family: Family,
    n: usize,
    a: Option<usize>,
    b: Option<usize>,
    d: Option<usize>,
    forbidden: Option<&str>,
    out: Option<&Path>,
) -> Outcome {
    let cfg = g.config();
    let need = |v: Option<usize>, name: &str| v.ok_or_else(|| Failure::Domain(format!("--{name} is required")));
    let mut status = Status::Done;
    let mut method = None;
    let (basis, target) = match family {
        Family::Greedy => {
            let f = WeightSet::parse(forbidden.ok_or_else(|| Failure::Domain("--forbidden is required".into()))?, n)?;
            (greedy_avoiding(&f, n)?, Some(f))
        }
        Family::Zeropad => {
            let (a, b) = (need(a, "a")?, need(b, "b")?);
            if a == 0 || a > b || b > n {
                return Err(Error::RadiusOutOfRange { a, b, n }.into());
            }
            let inner = Solver::new(cfg).m_star(1, b, n - a + 1)?;
            status = Status::of(inner.status);
            (zero_pad(a, b, n, &inner.witness)?, Some(WeightSet::interval(a, b, n)?))
        }
        Family::Parity => (even_weight_basis(n)?, None),
        Family::V => (construct_v(n, need(d, "d")?)?, None),
        Family::W => (construct_w(n, need(d, "d")?)?, None),
        Family::Wprime => {
            let b = need(b, "b")?;
            let (wp, m) = construct_wprime(n, need(d, "d")?, b, &cfg)?;
            method = Some(m);
            if m == WprimeMethod::BudgetLimited {
                status = Status::Partial;
            }
            let target = if b == 0 { None } else { Some(WeightSet::interval(1, b, n)?) };
            (wp, target)
        }
        Family::Combined => {
            let (a, b) = (need(a, "a")?, need(b, "b")?);
            let parts = combine_v_wprime(n, need(d, "d")?, b, a, &cfg)?;
            method = Some(parts.wprime_method);
            if parts.wprime_method == WprimeMethod::BudgetLimited {
                status = Status::Partial;
            }
            (parts.combined, Some(WeightSet::interval(a, b, n)?))
        }
    };
    let verified = match &target {
        Some(f) => Some(verify_avoiding(&basis, f, g.enumeration_cap)?),
        None => None,
    };
    if let Some(path) = out {
        fs::write(path, write_basis(&basis))?;
    }
    match g.format.unwrap_or(Format::Text) {
        Format::Json => {
            print_json(&json!({
                "n": n,
                "dim": basis.dim(),
                "forbidden": target,
                "verified": verified,
                "wprime_method": method,
                "rows": witness_rows(&basis),
            }))?;
        }
        _ if out.is_none() => print!("{}", write_basis(&basis)),
        _ => {}
    }
    Ok(status)
}

fn verify(g: &Global, matrix: Option<&Path>, basis: Option<&Path>, forbidden: &str) -> Outcome {
    let (space, source) = match (matrix, basis) {
        (Some(p), _) => (parse_matrix(&read(p)?)?.kernel_basis(), "kernel"),
        (None, Some(p)) => (parse_basis(&read(p)?)?, "span"),
        (None, None) => return Err(Failure::Domain("one of --matrix or --basis is required".into())),
    };
    let f = WeightSet::parse(forbidden, space.n())?;
    let avoids = verify_avoiding(&space, &f, g.enumeration_cap)?;
    match g.format.unwrap_or(Format::Json) {
        Format::Text => println!("{source} dim {} {}", space.dim(), if avoids { "avoids" } else { "meets" }),
        _ => {
            print_json(
                &json!({ "n": space.n(), "source": source, "dim": space.dim(), "forbidden": f, "avoids": avoids }),
            )?;
        }
    }
    Ok(Status::Done)
}

fn classify(
    g: &Global,
    n: usize,
    class1: &str,
    class2: &str,
    strategy: Strategy,
    emit: Option<&Path>,
    batch: Option<&Path>,
) -> Outcome {
    let pair = ClassPair::new(
        SymmetricClass::new(WeightSet::parse(class1, n)?),
        SymmetricClass::new(WeightSet::parse(class2, n)?),
    )?;
    let c = build_classifier(&pair, strategy, &g.config())?;
    if let Some(path) = emit {
        fs::write(path, write_matrix(&c.matrix))?;
    }
    let valid = c.validate(g.enumeration_cap)?;
    let Some(batch) = batch else {
        print_json(&json!({
            "n": n,
            "strategy": strategy,
            "rank": c.rank,
            "class1": pair.first().weights(),
            "class2": pair.second().weights(),
            "sumset": c.sumset.weights(),
            "valid": valid,
        }))?;
        return Ok(Status::Done);
    };
    let input: Box<dyn BufRead> = if batch.as_os_str() == "-" {
        Box::new(io::stdin().lock())
    } else {
        Box::new(io::BufReader::new(fs::File::open(batch)?))
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        let x = BitVector::parse_bits(text).map_err(|e| Failure::Domain(format!("line {}: {e}", i + 1)))?;
        if x.len() != n {
            return Err(Failure::Domain(format!("line {}: expected {n} bits, found {}", i + 1, x.len())));
        }
        let verdict = if c.rank == 0 {
            // nothing is measured; at most one class is nonempty
            if pair.first().contains(&x) || pair.second().weights().is_empty() {
                lbc_core::classify::Verdict::Class1
            } else {
                lbc_core::classify::Verdict::Class2
            }
        } else {
            c.classify_point(&c.measure(&x)?, g.enumeration_cap)?
        };
        match g.format.unwrap_or(Format::Text) {
            Format::Json => writeln!(out, "{}", json!({ "point": text, "verdict": verdict }))?,
            _ => writeln!(out, "{text}\t{}", serde_json::to_value(verdict).expect("serializable").as_str().unwrap())?,
        }
    }
    Ok(Status::Done)
}

fn bounds(
    class: Option<&str>,
    forbidden: Option<&str>,
    n: Option<usize>,
    alpha: Option<f64>,
    beta: Option<f64>,
    delta: Option<f64>,
) -> Outcome {
    let mut report: Option<BoundsReport> = match (class, forbidden, n) {
        (Some(c), _, Some(n)) => Some(lemma1_bounds(&SymmetricClass::new(WeightSet::parse(c, n)?))?),
        (_, Some(f), Some(n)) => Some(distinguishing_bounds(&WeightSet::parse(f, n)?)),
        _ => None,
    };
    let alpha_beta = alpha.zip(beta);
    let rates = if delta.is_some() || alpha_beta.is_some() { Some(rate_report(delta, alpha_beta)?) } else { None };
    match report.as_mut() {
        Some(r) => {
            r.rates = rates;
            print_json(r)
        }
        None => match rates {
            Some(rates) => print_json(&json!({ "rates": rates })),
            None => {
                Err(Failure::Domain("nothing to bound: give --class, --forbidden, --delta or --alpha/--beta".into()))
            }
        },
    }
}

fn counterexample(g: &Global, n: usize, d: usize, a: usize, b: usize) -> Outcome {
    let cfg = g.config();
    let parts = combine_v_wprime(n, d, b, a, &cfg)?;
    let mut status = if parts.wprime_method == WprimeMethod::BudgetLimited { Status::Partial } else { Status::Done };
    let solver = Solver::new(cfg);
    let mut exact = serde_json::Value::Null;
    if n <= SOLVER_MAX_N {
        let r = solver.m_star(a, b, n)?;
        status = status.and(Status::of(r.status));
        exact = json!({ "m_star": r.m_star, "status": r.status });
    }
    let mut halved = serde_json::Value::Null;
    if d == 2 {
        let r = solver.m_star(1, b, n.div_ceil(2))?;
        status = status.and(Status::of(r.status));
        halved = json!({ "bound": 1 + r.m_star, "inner_m_star": r.m_star, "inner_status": r.status });
    }
    let mut v = serde_json::to_value(&parts).expect("serializable");
    v["combined_rows"] = json!(witness_rows(&parts.combined));
    v["exact"] = exact;
    v["halved_bound"] = halved;
    print_json(&v)?;
    Ok(status)
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    match cli.command {
        Command::Mstar { a, b, n, witness } => mstar(g, a, b, n, witness.as_deref()),
        Command::Table { n, a, b, check, witness_dir } => table(g, n, a, b, check, witness_dir.as_deref()),
        Command::Construct { family, n, a, b, d, forbidden, out } => {
            construct(g, family, n, a, b, d, forbidden.as_deref(), out.as_deref())
        }
        Command::Verify { matrix, basis, forbidden } => verify(g, matrix.as_deref(), basis.as_deref(), &forbidden),
        Command::Classify { n, class1, class2, strategy, emit_matrix, batch } => {
            classify(g, n, &class1, &class2, strategy, emit_matrix.as_deref(), batch.as_deref())
        }
        Command::Bounds { class, forbidden, n, alpha, beta, delta } => {
            bounds(class.as_deref(), forbidden.as_deref(), n, alpha, beta, delta)
        }
        Command::Counterexample { n, d, a, b } => counterexample(g, n, d, a, b),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::Partial) => ExitCode::from(2),
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Exhausted(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
