use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use cwq::dot::{colored_graph_dot, graph_dot, tree_dot};
use cwq::generators::uniform_clique_counts;
use cwq::io::{cover_json, parse_colored_graph, parse_cover, parse_graph, parse_qi_map, real_from_json, GraphJson};
use cwq::{
    brute_treewidth, build_minor_model, check_partqi_tight, check_qi, decompose, gen_path, gen_spider,
    gen_subdivided_clique, generate_corpus, has_minor, parse, projection_map, pullback_cover, quotient,
    verify_result, ControlDilation, CorpusConfig, CwExpr, DecompositionResult, Exact, OracleCaps, QiMap,
};

#[derive(Parser)]
#[command(name = "cwq", version, about = "Clique-width expressions, dominated partitions and quotient decompositions")]
struct Cli {
    /// Human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a .cwx expression to a coloured graph.
    Eval {
        file: PathBuf,
        /// Also write the graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Build the dominated partition and quotient decomposition, then verify it.
    Decompose {
        file: PathBuf,
        /// Write the decomposition here; the report still goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Normalize the expression first.
        #[arg(long)]
        normalize: bool,
        /// Also compute the exact treewidth of the quotient.
        #[arg(long)]
        oracle: bool,
    },
    /// Write a generated expression.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        /// Output file (stdout if omitted).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
    /// Write a directory of random strict expressions and verify each one.
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_k: u32,
        #[arg(long, default_value_t = 40)]
        max_leaves: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Check a map between two graphs for the quasi-isometry inequalities.
    QiCheck {
        #[command(flatten)]
        map: MapArgs,
        /// Require only the distance inequalities, not density.
        #[arg(long)]
        embedding: bool,
    },
    /// Build a minor model of a pattern from a quasi-isometric embedding of its subdivision.
    MinorModel {
        #[arg(long)]
        pattern: PathBuf,
        #[command(flatten)]
        map: MapArgs,
    },
    /// Pull a cover of the target back along a map.
    CoverPullback {
        #[command(flatten)]
        map: MapArgs,
        /// Cover of the target graph.
        #[arg(long)]
        cover: PathBuf,
        /// Slope of the target cover's dilation.
        #[arg(long)]
        slope: String,
        /// Scale of the cover to produce.
        #[arg(long)]
        r: String,
    },
    /// Exact treewidth of a graph, within the oracle size caps.
    Treewidth {
        graph: PathBuf,
        /// Also test for this pattern as a minor.
        #[arg(long)]
        minor: Option<PathBuf>,
    },
    /// Graphviz output for an expression, a graph or a decomposition.
    ExportDot {
        /// A .cwx file, a graph JSON file or a decomposition JSON file.
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Path from `x` to `y` with end colours i, j and interior colour k.
    Path {
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 3)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        i: u32,
        #[arg(long, default_value_t = 2)]
        j: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value = "x")]
        x: String,
        #[arg(long, default_value = "y")]
        y: String,
    },
    /// Spider with the given leg lengths.
    Spider {
        /// Comma-separated leg lengths, at least three.
        #[arg(long, value_delimiter = ',', required = true)]
        legs: Vec<usize>,
    },
    /// Subdivision of the complete graph on n vertices.
    SubdividedClique {
        #[arg(long)]
        n: u32,
        /// Subdivision count for every edge.
        #[arg(long)]
        times: usize,
        /// Per-edge overrides such as `1-2=0`.
        #[arg(long = "edge", value_parser = parse_edge_count)]
        edges: Vec<((u32, u32), usize)>,
    },
}

#[derive(Args)]
struct MapArgs {
    /// Graph JSON of the domain.
    #[arg(long)]
    source: PathBuf,
    /// Graph JSON of the codomain.
    #[arg(long)]
    target: PathBuf,
    /// Map JSON: {"f": {source: target}, "c": real}.
    #[arg(long)]
    map: PathBuf,
}

fn parse_edge_count(s: &str) -> Result<((u32, u32), usize), String> {
    let bad = || format!("expected `i-j=count`, got `{s}`");
    let (edge, count) = s.split_once('=').ok_or_else(bad)?;
    let (i, j) = edge.split_once('-').ok_or_else(bad)?;
    let i: u32 = i.trim().parse().map_err(|_| bad())?;
    let j: u32 = j.trim().parse().map_err(|_| bad())?;
    let count = count.trim().parse().map_err(|_| bad())?;
    Ok(((i.min(j), i.max(j)), count))
}

/// Why a run did not pass; each maps to one exit code.
enum Failure {
    Core(cwq::Error),
    Io(PathBuf, std::io::Error),
    /// A check ran and failed; its report has already been written.
    Checks,
}

impl From<cwq::Error> for Failure {
    fn from(e: cwq::Error) -> Failure {
        Failure::Core(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(cwq::Error::Parse { .. }) => 2,
            Failure::Core(cwq::Error::CapExceeded { .. }) => 4,
            Failure::Core(_) | Failure::Io(..) | Failure::Checks => 3,
        }
    }
}

type Run = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn write(path: &Path, text: &str) -> Run {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_owned(), e))
}

struct Out {
    pretty: bool,
}

impl Out {
    /// Prints `value` as JSON, or `summary` under --pretty.
    fn emit<T: Serialize>(&self, value: &T, summary: impl FnOnce() -> String) {
        if self.pretty {
            println!("{}", summary());
        } else {
            println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
        }
    }
}

fn load_expr(path: &Path) -> Result<CwExpr, Failure> {
    Ok(parse(&read(path)?)?)
}

fn load_map(args: &MapArgs) -> Result<QiMap<Exact>, Failure> {
    let source = parse_graph(&read(&args.source)?)?;
    let target = parse_graph(&read(&args.target)?)?;
    Ok(parse_qi_map(source, target, &read(&args.map)?)?)
}

fn caps() -> Result<OracleCaps, Failure> {
    Ok(OracleCaps::from_env()?)
}

fn cmd_eval(out: &Out, file: &Path, dot: Option<&Path>) -> Run {
    let e = load_expr(file)?;
    let report = e.validate_strict();
    if let Some(v) = report.first() {
        eprintln!(
            "warning: not strict ({} violation(s)); first: {} at {}: {}",
            report.violations.len(),
            v.rule.id(),
            v.path,
            v.message
        );
    }
    let cg = e.evaluate()?;
    if let Some(path) = dot {
        write(path, &colored_graph_dot(&cg))?;
    }
    out.emit(&GraphJson::from_colored(&cg), || {
        format!(
            "{} vertices, {} edges, palette {}, strict: {}",
            cg.graph().num_vertices(),
            cg.graph().num_edges(),
            cg.palette(),
            report.strict_valid
        )
    });
    Ok(())
}

fn cmd_decompose(out: &Out, file: &Path, out_file: Option<&Path>, normalize: bool, oracle: bool) -> Run {
    let mut e = load_expr(file)?;
    if normalize {
        e = e.normalize()?;
    }
    let cg = e.evaluate()?;
    let result = decompose(&e)?;
    let verify = verify_result(&cg, &result);
    let quotient_treewidth = if oracle {
        let q = quotient(cg.graph(), &result.partition)?;
        Some(brute_treewidth(&q.graph, &caps()?)?)
    } else {
        None
    };
    let width = result.tree.width().unwrap_or(0);
    let report = json!({
        "palette": e.palette(),
        "parts": result.partition.len(),
        "width": width,
        "quotient_treewidth": quotient_treewidth,
        "verify": verify,
    });
    match out_file {
        Some(path) => {
            write(path, &serde_json::to_string_pretty(&result).expect("result serializes"))?;
            out.emit(&report, || decompose_summary(&e, &result, &verify, quotient_treewidth));
        }
        None => out.emit(&json!({ "result": result, "report": report }), || {
            decompose_summary(&e, &result, &verify, quotient_treewidth)
        }),
    }
    if verify.all_passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn decompose_summary(
    e: &CwExpr,
    r: &DecompositionResult,
    verify: &cwq::VerifyReport,
    tw: Option<usize>,
) -> String {
    let mut s = format!(
        "{} parts, {} tree nodes, width {} (palette {})",
        r.partition.len(),
        r.tree.bags.len(),
        r.tree.width().unwrap_or(0),
        e.palette()
    );
    if let Some(tw) = tw {
        s += &format!(", quotient treewidth {tw}");
    }
    for c in &verify.checks {
        s += &format!("\n  {:<15} {}", c.name, if c.passed { "ok" } else { "FAILED" });
        if let Some(w) = &c.witness {
            s += &format!(": {w}");
        }
    }
    s
}

fn cmd_generate(kind: &GenerateKind, output: Option<&Path>) -> Run {
    let e = match kind {
        GenerateKind::Path { length, n, i, j, k, x, y } => gen_path(x, y, *length, *n, *i, *j, *k)?,
        GenerateKind::Spider { legs } => gen_spider(legs.len(), legs)?,
        GenerateKind::SubdividedClique { n, times, edges } => {
            let mut counts = uniform_clique_counts(*n, *times);
            for (edge, count) in edges {
                if counts.insert(*edge, *count).is_none() {
                    return Err(cwq::Error::Input(format!("edge {}-{} is not in K{n}", edge.0, edge.1)).into());
                }
            }
            gen_subdivided_clique(*n, &counts)?
        }
    };
    let text = format!("{e}\n");
    match output {
        Some(path) => write(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct InstanceSummary {
    file: String,
    palette: u32,
    vertices: usize,
    edges: usize,
    parts: usize,
    width: usize,
    passed: bool,
    failures: Vec<String>,
}

/// Every property the corpus run checks for one expression.
fn check_instance(e: &CwExpr) -> Result<(usize, usize, usize, usize, Vec<String>), cwq::Error> {
    let cg = e.evaluate()?;
    let g = cg.graph();
    let r = decompose(e)?;
    let mut failures: Vec<String> = verify_result(&cg, &r).failures().map(|c| c.name.to_owned()).collect();
    if !check_partqi_tight(g, &r.partition)?.passed() {
        failures.push("partqi".into());
    }
    let m: QiMap<Exact> = projection_map(g, &r.partition)?.with_constant(Exact::from_integer(3))?;
    if !check_qi(&m).passed() {
        failures.push("qi3".into());
    }
    Ok((g.num_vertices(), g.num_edges(), r.partition.len(), r.tree.width().unwrap_or(0), failures))
}

fn cmd_corpus(out: &Out, cfg: CorpusConfig, dir: &Path) -> Run {
    let exprs = generate_corpus(&cfg)?;
    fs::create_dir_all(dir).map_err(|e| Failure::Io(dir.to_owned(), e))?;
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(exprs.len().max(1));
    let chunk = exprs.len().div_ceil(threads).max(1);
    let checked: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = exprs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(check_instance).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut instances = Vec::with_capacity(exprs.len());
    for (idx, (e, outcome)) in exprs.iter().zip(checked).enumerate() {
        let file = format!("expr_{idx:04}.cwx");
        write(&dir.join(&file), &format!("{e}\n"))?;
        let (vertices, edges, parts, width, failures) = outcome?;
        instances.push(InstanceSummary {
            file,
            palette: e.palette(),
            vertices,
            edges,
            parts,
            width,
            passed: failures.is_empty(),
            failures,
        });
    }
    let passed = instances.iter().filter(|i| i.passed).count();
    let summary = json!({ "config": cfg, "passed": passed, "total": instances.len(), "instances": instances });
    write(&dir.join("summary.json"), &serde_json::to_string_pretty(&summary).expect("summary serializes"))?;
    out.emit(&json!({ "passed": passed, "total": instances.len() }), || {
        format!("{passed}/{} instances passed; wrote {}", instances.len(), dir.display())
    });
    if passed == instances.len() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_qi_check(out: &Out, args: &MapArgs, embedding: bool) -> Run {
    let m = load_map(args)?;
    let report = check_qi(&m);
    let ok = if embedding { report.qi1 } else { report.passed() };
    out.emit(&report, || {
        format!(
            "c = {}: distances {}, density {}; lower slack {:?}, upper slack {:?}",
            m.c,
            if report.qi1 { "ok" } else { "FAILED" },
            if report.qi2 { "ok" } else { "FAILED" },
            report.lower_slack.map(|s| s.to_string()),
            report.upper_slack.map(|s| s.to_string()),
        )
    });
    if ok {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_minor_model(out: &Out, pattern: &Path, args: &MapArgs) -> Run {
    let h = parse_graph(&read(pattern)?)?;
    let m = load_map(args)?;
    let built = build_minor_model(&h, &m)?;
    built.model.check(&m.target, &h)?;
    out.emit(&json!({ "model": built.model, "facts": built.facts }), || {
        format!(
            "minor model with {} branch sets; gaps: branch {}, path {}, path-branch {}",
            built.model.branch_sets.len(),
            built.facts.branch_gap,
            built.facts.path_gap,
            built.facts.path_branch_gap
        )
    });
    Ok(())
}

fn real_arg(text: &str, name: &str) -> Result<Exact, Failure> {
    Ok(real_from_json(&Value::String(text.to_owned()), name)?)
}

fn cmd_cover_pullback(out: &Out, args: &MapArgs, cover: &Path, slope: &str, r: &str) -> Run {
    let m = load_map(args)?;
    let cf = parse_cover::<Exact>(&read(cover)?)?;
    let d_prime = ControlDilation::new(real_arg(slope, "slope")?)?;
    let pulled = pullback_cover(&m, &cf, &d_prime, real_arg(r, "r")?)?;
    out.emit(&cover_json(&pulled), || {
        format!(
            "{} collections, {} sets, scale {}, bound {}",
            pulled.collections.len(),
            pulled.collections.iter().map(Vec::len).sum::<usize>(),
            pulled.r,
            pulled.bound
        )
    });
    Ok(())
}

fn cmd_treewidth(out: &Out, graph: &Path, minor: Option<&Path>) -> Run {
    let g = parse_graph(&read(graph)?)?;
    let caps = caps()?;
    let tw = brute_treewidth(&g, &caps)?;
    let minor = match minor {
        Some(p) => Some(has_minor(&g, &parse_graph(&read(p)?)?, &caps)?),
        None => None,
    };
    let mut report = BTreeMap::from([("treewidth", json!(tw))]);
    if let Some(found) = minor {
        report.insert("has_minor", json!(found));
    }
    out.emit(&report, || match minor {
        Some(found) => format!("treewidth {tw}; minor {}", if found { "found" } else { "absent" }),
        None => format!("treewidth {tw}"),
    });
    Ok(())
}

fn cmd_export_dot(input: &Path, output: Option<&Path>) -> Run {
    let text = read(input)?;
    let dot = if input.extension().is_some_and(|x| x == "cwx") {
        colored_graph_dot(&parse(&text)?.evaluate()?)
    } else {
        let value: Value = serde_json::from_str(&text).map_err(|e| cwq::Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if value.get("tree").is_some() {
            let r: DecompositionResult = serde_json::from_value(value)
                .map_err(|e| cwq::Error::Input(format!("decomposition JSON: {e}")))?;
            tree_dot(&r.tree, Some(r.rainbow_node))
        } else if value.get("colors").is_some() {
            colored_graph_dot(&parse_colored_graph(&text)?)
        } else {
            graph_dot(&parse_graph(&text)?)
        }
    };
    match output {
        Some(path) => write(path, &dot),
        None => {
            print!("{dot}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Run {
    let out = Out { pretty: cli.pretty };
    match cli.command {
        Command::Eval { file, dot } => cmd_eval(&out, &file, dot.as_deref()),
        Command::Decompose {
            file,
            out: out_file,
            normalize,
            oracle,
        } => cmd_decompose(&out, &file, out_file.as_deref(), normalize, oracle),
        Command::Generate { kind, output } => cmd_generate(&kind, output.as_deref()),
        Command::Corpus {
            seed,
            count,
            max_k,
            max_leaves,
            out_dir,
        } => cmd_corpus(
            &out,
            CorpusConfig {
                seed,
                count,
                max_k,
                max_leaves,
            },
            &out_dir,
        ),
        Command::QiCheck { map, embedding } => cmd_qi_check(&out, &map, embedding),
        Command::MinorModel { pattern, map } => cmd_minor_model(&out, &pattern, &map),
        Command::CoverPullback { map, cover, slope, r } => cmd_cover_pullback(&out, &map, &cover, &slope, &r),
        Command::Treewidth { graph, minor } => cmd_treewidth(&out, &graph, minor.as_deref()),
        Command::ExportDot { input, output } => cmd_export_dot(&input, output.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Io(path, e) => eprintln!("error: {}: {e}", path.display()),
                Failure::Checks => eprintln!("error: checks failed"),
            }
            ExitCode::from(failure.exit_code())
        }
    }
}
