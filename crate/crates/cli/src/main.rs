use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quota_trees::graph::format_weight;
use quota_trees::io::{parse_dfa, parse_graph, write_dfa, GraphFile};
use quota_trees::oracle::{count_by_enumeration, enumerate_forests_unchecked, ENUMERATION_BOUND};
use quota_trees::{
    count_forests_at_most, count_forests_exact, dfa_equivalent, expand_dfa, feasibility_report, in_arrows,
    inventory_to_forest, k_lightest_paths, min_quota_inventory, minimize_dfa, quota_search, Discipline, Error,
    Mode, QuotaSpec, RecurrenceEvaluator, SearchConfig, SearchError,
};

#[derive(Parser)]
#[command(name = "quota", version, about = "Quota trees and forests over directed multigraphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Input document (graph or DFA JSON); standard input if omitted.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Quota, overriding the document's (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    quota: Option<Vec<usize>>,
    /// Start portfolio, overriding the document's (comma separated).
    #[arg(long, global = true, value_delimiter = ',')]
    portfolio: Option<Vec<usize>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    #[value(alias = "at-most")]
    Atmost,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Atmost => Mode::AtMost,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Det,
    Rec,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum DisciplineArg {
    Fifo,
    Lifo,
    MinEdge,
    MinPath,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Connectivity, enough-arrows and achievability report.
    Check {
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
    },
    /// Number of quota forests.
    Count {
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "det")]
        method: Method,
        /// Allow the oracle beyond its size guard.
        #[arg(long)]
        force: bool,
    },
    /// Uniformly random exact forests, one JSON line each.
    Sample {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        seed: u64,
        /// Where to write the forests (defaults to --output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run quota search.
    Search {
        #[arg(long, value_enum, default_value = "fifo")]
        discipline: DisciplineArg,
        /// Required by the random discipline.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Keep only the q(v) best path weights per vertex (min-path only).
        #[arg(long)]
        relax: bool,
    },
    /// The k lightest paths from the portfolio to every vertex.
    Klp {
        #[arg(long)]
        k: usize,
    },
    /// Minimum-weight exact forest inventory.
    Mqf {
        /// Also print a forest realising the inventory.
        #[arg(long)]
        forest: bool,
    },
    /// Every forest, one JSON line each.
    Enumerate {
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        /// Allow total quota above the guard.
        #[arg(long)]
        force: bool,
    },
    /// Random connected DFA with the given class sizes.
    DfaExpand {
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long)]
        seed: u64,
    },
    /// Minimal DFA of the reachable part.
    DfaMin,
    /// Whether two DFAs accept the same language.
    DfaEq {
        #[arg(long)]
        other: PathBuf,
    },
}

/// Failure with its exit status: 1 for a negative answer, 2 for bad input.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unachievable(_) | Error::InfeasibleSizes(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Outcome = Result<(String, u8), Failure>;

fn read_text(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| usage(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn load_graph(global: &Global) -> Result<GraphFile, Failure> {
    let text = read_text(global.input.as_ref())?;
    let mut file = parse_graph(&text).map_err(|e| usage(input_error(global, e)))?;
    if global.quota.is_some() {
        file.quota = global.quota.clone();
    }
    if global.portfolio.is_some() {
        file.portfolio = global.portfolio.clone();
    }
    Ok(file)
}

fn input_error(global: &Global, e: Error) -> String {
    let name = global
        .input
        .as_ref()
        .map_or("<stdin>".to_string(), |p| p.display().to_string());
    format!("{name}: {e}")
}

fn list(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn forest_value(f: &quota_trees::ImmersedForest) -> Value {
    serde_json::to_value(f.canonical()).expect("forest serializes")
}

fn check(global: &Global, mode: Mode) -> Outcome {
    let file = load_graph(global)?;
    let spec = file.spec()?;
    let r = feasibility_report(&file.graph, &spec)?;
    let ok = match mode {
        Mode::Exact => r.achievable_exact,
        Mode::AtMost => r.achievable_at_most,
    };
    let text = if global.json {
        serde_json::to_string_pretty(&r).expect("report serializes")
    } else {
        let mut s = String::new();
        s += &format!("connected: {}", yes_no(r.connected));
        if !r.connected {
            s += &format!(" (unreachable: {})", list(&r.unreachable));
        }
        s += &format!("\nenough arrows: {}", yes_no(r.enough_arrows));
        if !r.enough_arrows {
            s += &format!(" (violated at vertex {})", list(&r.enough_arrows_violations));
        }
        s += &format!("\narrivals: {}", list(&r.arrivals));
        s += &format!("\nquota: {}", list(&spec.q));
        if !r.portfolio_excess.is_empty() {
            s += &format!("\nportfolio exceeds quota at: {}", list(&r.portfolio_excess));
        }
        s += &format!("\nachievable (exact): {}", yes_no(r.achievable_exact));
        s += &format!("\nachievable (at-most): {}", yes_no(r.achievable_at_most));
        s
    };
    Ok((text, if ok { 0 } else { 1 }))
}

fn count(global: &Global, mode: Mode, method: Method, force: bool) -> Outcome {
    let file = load_graph(global)?;
    let g = &file.graph;
    let spec = file.spec()?;
    let value = match method {
        Method::Det => match mode {
            Mode::Exact => count_forests_exact(g, &spec)?,
            Mode::AtMost => count_forests_at_most(g, &spec)?,
        },
        Method::Rec => {
            let q_m = in_arrows(g, &spec.q)?;
            let (a, b): (Vec<usize>, Vec<usize>) = match mode {
                Mode::Exact => {
                    if spec.q.iter().zip(&spec.s).any(|(q, s)| q < s) {
                        return Ok((render_count(global, mode, 0u32.into()), 0));
                    }
                    (q_m, spec.q.iter().zip(&spec.s).map(|(q, s)| q - s).collect())
                }
                Mode::AtMost => (q_m.iter().zip(&spec.s).map(|(x, s)| x + s).collect(), spec.q.clone()),
            };
            RecurrenceEvaluator::new(g).eval(&a, &b)?
        }
        Method::Oracle => {
            guard(&spec, force)?;
            count_by_enumeration(g, &spec, mode)?.into()
        }
    };
    Ok((render_count(global, mode, value), 0))
}

fn render_count(global: &Global, mode: Mode, value: num_bigint::BigUint) -> String {
    if global.json {
        json!({"mode": mode.label(), "count": value.to_string()}).to_string()
    } else {
        value.to_string()
    }
}

fn guard(spec: &QuotaSpec, force: bool) -> Result<(), Failure> {
    if !force && spec.total_quota() > ENUMERATION_BOUND {
        return Err(Error::EnumerationBound {
            total: spec.total_quota(),
            bound: ENUMERATION_BOUND,
        }
        .into());
    }
    Ok(())
}

fn sample(global: &Global, n: usize, seed: u64) -> Outcome {
    let file = load_graph(global)?;
    let spec = file.spec()?;
    let forests = quota_trees::sample_batch(&file.graph, &spec, n, seed)?;
    let lines: Vec<String> = forests.iter().map(|f| f.to_json_line()).collect();
    Ok((lines.join("\n"), 0))
}

fn search(global: &Global, discipline: DisciplineArg, seed: Option<u64>, mode: Mode, relax: bool) -> Outcome {
    let file = load_graph(global)?;
    let spec = file.spec()?;
    let discipline = match discipline {
        DisciplineArg::Fifo => Discipline::Fifo,
        DisciplineArg::Lifo => Discipline::Lifo,
        DisciplineArg::MinEdge => Discipline::MinWeightEdge,
        DisciplineArg::MinPath => Discipline::MinPathWeight,
        DisciplineArg::Random => Discipline::Random(seed.ok_or_else(|| usage("--discipline random needs --seed"))?),
    };
    let weights = file.weights_or_unit();
    let cfg = SearchConfig::new(discipline, mode).with_relaxation(relax);
    match quota_search(&file.graph, &spec, cfg, Some(&weights)) {
        Ok(f) => {
            let text = if global.json {
                json!({"ok": true, "forest": forest_value(&f)}).to_string()
            } else {
                f.to_json_line()
            };
            Ok((text, 0))
        }
        Err(SearchError::Input(e)) => Err(e.into()),
        Err(SearchError::Incomplete { residual, partial }) => {
            let text = if global.json {
                json!({"ok": false, "residual": residual, "partial": forest_value(&partial)}).to_string()
            } else {
                format!("search failed: residual quota {}", list(&residual))
            };
            Ok((text, 1))
        }
    }
}

fn klp(global: &Global, k: usize) -> Outcome {
    let file = load_graph(global)?;
    let g = &file.graph;
    let sources = file
        .portfolio
        .clone()
        .ok_or_else(|| usage("klp needs a portfolio of sources"))?;
    let weights = file.weights_or_unit();
    let r = k_lightest_paths(g, &sources, k, &weights)?;
    let text = if global.json {
        let rows: Vec<Value> = (0..g.vertex_count())
            .map(|v| {
                let paths: Vec<Value> = (0..r.per_vertex[v].len())
                    .map(|i| json!({"weight": format_weight(&r.per_vertex[v][i].0), "edges": r.path(v, i)}))
                    .collect();
                json!({"vertex": v, "paths": paths})
            })
            .collect();
        serde_json::to_string_pretty(&json!({ "k": k, "vertices": rows })).expect("serializes")
    } else {
        (0..g.vertex_count())
            .map(|v| {
                let ws: Vec<String> = r.weights(v).iter().map(format_weight).collect();
                format!("{v}: {}", ws.join(" ")).trim_end().to_string()
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    Ok((text, 0))
}

fn mqf(global: &Global, with_forest: bool) -> Outcome {
    let file = load_graph(global)?;
    let spec = file.spec()?;
    let weights = file.weights_or_unit();
    let sol = min_quota_inventory(&file.graph, &spec, &weights)?;
    let forest = if with_forest {
        Some(inventory_to_forest(&file.graph, &spec, &sol.inventory)?)
    } else {
        None
    };
    let text = if global.json {
        let mut v = json!({"weight": format_weight(&sol.weight), "inventory": sol.inventory.x});
        if let Some(f) = &forest {
            v["forest"] = forest_value(f);
        }
        serde_json::to_string_pretty(&v).expect("serializes")
    } else {
        let mut s = format!("weight: {}\ninventory: {}", format_weight(&sol.weight), list(&sol.inventory.x));
        if let Some(f) = &forest {
            s += &format!("\nforest: {}", f.to_json_line());
        }
        s
    };
    Ok((text, 0))
}

fn enumerate(global: &Global, mode: Mode, force: bool) -> Outcome {
    let file = load_graph(global)?;
    let spec = file.spec()?;
    guard(&spec, force)?;
    let all = enumerate_forests_unchecked(&file.graph, &spec, mode)?;
    Ok((all.iter().map(|f| f.to_json_line()).collect::<Vec<_>>().join("\n"), 0))
}

fn load_dfa(path: Option<&PathBuf>) -> Result<quota_trees::Dfa, Failure> {
    let text = read_text(path)?;
    parse_dfa(&text).map_err(|e| {
        let name = path.map_or("<stdin>".to_string(), |p| p.display().to_string());
        usage(format!("{name}: {e}"))
    })
}

fn dfa_expand(global: &Global, sizes: &[usize], seed: u64) -> Outcome {
    let d = load_dfa(global.input.as_ref())?;
    let e = expand_dfa(&d, sizes, seed)?;
    Ok((write_dfa(&e.dfa), 0))
}

fn dfa_min(global: &Global) -> Outcome {
    let d = load_dfa(global.input.as_ref())?;
    Ok((write_dfa(&minimize_dfa(&d)), 0))
}

fn dfa_eq(global: &Global, other: &PathBuf) -> Outcome {
    let a = load_dfa(global.input.as_ref())?;
    let b = load_dfa(Some(other))?;
    let same = dfa_equivalent(&a, &b)?;
    let text = if global.json {
        json!({ "equivalent": same }).to_string()
    } else if same {
        "equivalent".to_string()
    } else {
        "not equivalent".to_string()
    };
    Ok((text, if same { 0 } else { 1 }))
}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    let mut body = text.to_string();
    if !body.is_empty() {
        body.push('\n');
    }
    match path {
        Some(p) => fs::write(p, body).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| usage(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = &cli.global;
    let mut target = g.output.as_ref();
    let result = match &cli.command {
        Command::Check { mode } => check(g, (*mode).into()),
        Command::Count { mode, method, force } => count(g, (*mode).into(), *method, *force),
        Command::Sample { n, seed, out } => {
            if out.is_some() {
                target = out.as_ref();
            }
            sample(g, *n, *seed)
        }
        Command::Search {
            discipline,
            seed,
            mode,
            relax,
        } => search(g, *discipline, *seed, (*mode).into(), *relax),
        Command::Klp { k } => klp(g, *k),
        Command::Mqf { forest } => mqf(g, *forest),
        Command::Enumerate { mode, force } => enumerate(g, (*mode).into(), *force),
        Command::DfaExpand { sizes, seed } => dfa_expand(g, sizes, *seed),
        Command::DfaMin => dfa_min(g),
        Command::DfaEq { other } => dfa_eq(g, other),
    };
    let outcome = result.and_then(|(text, code)| write_out(target, &text).map(|()| code));
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
