//! Command-line surface. Exit codes: 0 pass, 1 check failure, 2 usage or
//! parse error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::catalogue::{Catalogue, CatalogueSpec};
use crate::connectivity::{lambda, three_connectivity_violation, vertical_3_partitions};
use crate::constructions::{
    complete, fig1_graph, graphic, k5_minus_e_graph, theta_double, theta_with_seed, uniform, wheel, Graph,
};
use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::minors::{GenericOracle, GraphOracle, MinorOracle, GENERIC_CAP};
use crate::props::{Budget, Sections};
use crate::set::ElementSet;
use crate::structures::{cosegments, fans, seg_coseg_pairs, segments, spores, triads, triangles};
use crate::sweep::{default_targets, sweep, SweepOptions};
use crate::theorem::{duality_mismatch, thm1_bridge, Classifier, Mode};
use crate::verify::{self, Suite, VerifyOptions};
use crate::witness::labels_of;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "matroid-lab", version, about = "Connectivity, structure and minor checks on small matroids")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for Θ_r realizations and randomized property trials
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Ground-set cap for the generic minor search
    #[arg(long, global = true, default_value_t = GENERIC_CAP)]
    pub cap: usize,

    /// Worker threads for sweeps and property suites
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a named matroid and print it as JSON (or a graph file for graphic builds)
    Build(BuildArgs),
    /// Rank, 3-connectivity, circuits, cocircuits and structures of a matroid
    Inspect(InspectArgs),
    /// List one kind of structure
    Detect(DetectArgs),
    /// Classify an instance (M, N, C*, x0)
    Classify(ClassifyArgs),
    /// Run the catalogue sweep
    Sweep(SweepArgs),
    /// Run the worked-example and property suites
    VerifyPaper(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// uniform:R,N | wheel:K | complete:N | k5e | fig1 | theta:R | theta-double:R
    pub name: String,
    /// Emit the dual
    #[arg(long)]
    pub dual: bool,
    /// Emit the graph file instead of matroid JSON (graphic builds only)
    #[arg(long)]
    pub graph: bool,
    /// Write to a file instead of stdout
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InspectArgs {
    /// Matroid JSON, graph file, or a build name
    pub input: String,
    /// Largest circuit/cocircuit size listed
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Triangles,
    Triads,
    Fans,
    Segments,
    Cosegments,
    Pairs,
    Spores,
    Vertical,
}

#[derive(Args, Debug)]
pub struct DetectArgs {
    /// Matroid JSON, graph file, or a build name
    pub input: String,
    /// Structure to list
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Apex label for `vertical`
    #[arg(long)]
    pub x: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Form {
    /// The four outcomes of the main theorem
    Main,
    /// The cocircuit corollary
    Thm1,
    /// The circuit form
    Dual,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// Host matroid: JSON, graph file, or a build name
    pub input: String,
    /// Target N: U2,4 | M(K4) | K<n> | W<k> | a build name | a file
    #[arg(long, default_value = "M(K4)")]
    pub target: String,
    /// Comma-separated labels of C* (or C for --form dual)
    #[arg(long, conflicts_with = "star")]
    pub set: Option<String>,
    /// Use the star of this vertex (graph inputs)
    #[arg(long)]
    pub star: Option<usize>,
    /// Label of x0; defaults to the first qualifying element
    #[arg(long)]
    pub x0: Option<String>,
    #[arg(long, value_enum, default_value_t = Form::Main)]
    pub form: Form,
    /// Stop at the first outcome found
    #[arg(long)]
    pub first: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Also run the property suites over the extended catalogue
    #[arg(long)]
    pub properties: bool,
    /// Stop at the first outcome per instance
    #[arg(long)]
    pub first: bool,
    /// Write the JSON report to a file
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated suites: fig2, theta, fig1, sweep, props, oracle
    #[arg(long)]
    pub only: Option<String>,
    /// Graph file replacing the bundled 24-edge graph
    #[arg(long)]
    pub fig1: Option<PathBuf>,
}

/// A loaded host, with its graph when it came from one.
struct Input {
    matroid: Matroid,
    graph: Option<Graph>,
}

/// Parses `args` and runs the command, writing reports to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_)
        | Error::Validation(_)
        | Error::BadParams(_)
        | Error::DuplicateLabel(_)
        | Error::UnknownLabel(_)
        | Error::HypothesisViolated(_)
        | Error::SeedInvalid(_)
        | Error::TooLarge { .. }
        | Error::TooManyEdges { .. }
        | Error::EmptyGroundSet => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Build(a) => cmd_build(cli, a, out),
        Command::Inspect(a) => cmd_inspect(cli, a, out),
        Command::Detect(a) => cmd_detect(cli, a, out),
        Command::Classify(a) => cmd_classify(cli, a, out),
        Command::Sweep(a) => cmd_sweep(cli, a, out),
        Command::VerifyPaper(a) => cmd_verify_paper(cli, a, out),
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Parse(format!("i/o: {e}"))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(io)
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::Parse(e.to_string()))?;
    emit(out, &(text + "\n"))
}

/// `{a,b,c}` without spaces.
fn fmt_set(m: &Matroid, s: ElementSet) -> String {
    format!("{{{}}}", labels_of(m, s).join(","))
}

fn split_param(name: &str) -> (&str, Vec<usize>) {
    match name.split_once(':') {
        Some((k, rest)) => (k, rest.split(',').filter_map(|p| p.trim().parse().ok()).collect()),
        None => (name, Vec::new()),
    }
}

/// Named constructions; graphic ones keep their graph.
fn build_named(name: &str, seed: u64) -> Result<Option<Input>> {
    let (kind, params) = split_param(name);
    let arg = |i: usize| {
        params.get(i).copied().ok_or_else(|| Error::BadParams(format!("{kind} needs {} numeric parameter(s)", i + 1)))
    };
    let graphic_input = |g: Graph| -> Result<Option<Input>> { Ok(Some(Input { matroid: graphic(&g)?, graph: Some(g) })) };
    match kind {
        "uniform" => Ok(Some(Input { matroid: uniform(arg(0)?, arg(1)?)?, graph: None })),
        "wheel" => {
            let k = arg(0)?;
            wheel(k)?;
            graphic_input(Graph::wheel(k))
        }
        "complete" => graphic_input(Graph::complete(arg(0)?)),
        "k5e" => graphic_input(k5_minus_e_graph()),
        "fig1" => graphic_input(fig1_graph()),
        "theta" => Ok(Some(Input { matroid: theta_with_seed(arg(0)?, seed)?.0, graph: None })),
        "theta-double" => Ok(Some(Input { matroid: theta_double(arg(0)?)?, graph: None })),
        _ => Ok(None),
    }
}

fn load_input(spec: &str, seed: u64) -> Result<Input> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        if text.trim_start().starts_with('{') {
            return Ok(Input { matroid: Matroid::parse_json(&text)?, graph: None });
        }
        let g = Graph::parse(&text)?;
        return Ok(Input { matroid: graphic(&g)?, graph: Some(g) });
    }
    build_named(spec, seed)?
        .ok_or_else(|| Error::Parse(format!("{spec:?} is neither a file nor a known construction")))
}

/// Target names: `U2,4`, `M(K4)`/`K4`, `W4`, build names, or files.
fn load_target(spec: &str, seed: u64) -> Result<Input> {
    let s = spec.trim();
    let inner = s.strip_prefix("M(").and_then(|x| x.strip_suffix(')')).unwrap_or(s);
    if let Some(rest) = inner.strip_prefix('U') {
        if let Some((r, n)) = rest.split_once(',') {
            if let (Ok(r), Ok(n)) = (r.parse(), n.parse()) {
                return Ok(Input { matroid: uniform(r, n)?, graph: None });
            }
        }
    }
    if let Some(Ok(n)) = inner.strip_prefix('K').map(str::parse::<usize>) {
        let g = Graph::complete(n);
        return Ok(Input { matroid: complete(n)?, graph: Some(g) });
    }
    if let Some(Ok(k)) = inner.strip_prefix('W').map(str::parse::<usize>) {
        let m = wheel(k)?;
        return Ok(Input { matroid: m, graph: Some(Graph::wheel(k)) });
    }
    load_input(s, seed)
}

fn parse_labels(m: &Matroid, list: &str) -> Result<ElementSet> {
    let labels: Vec<&str> = list.split(',').map(str::trim).filter(|l| !l.is_empty()).collect();
    m.set_of(&labels)
}

fn cmd_build(cli: &Cli, a: &BuildArgs, out: &mut dyn Write) -> Result<i32> {
    let input = build_named(&a.name, cli.seed)?.ok_or_else(|| Error::BadParams(format!("unknown construction {:?}", a.name)))?;
    let text = if a.graph {
        let g = input.graph.ok_or_else(|| Error::BadParams(format!("{} is not graphic", a.name)))?;
        if a.dual {
            return Err(Error::BadParams("--graph and --dual cannot be combined".into()));
        }
        g.to_text()
    } else {
        let m = if a.dual { input.matroid.dual() } else { input.matroid };
        serde_json::to_string_pretty(&m.to_json()).map_err(|e| Error::Parse(e.to_string()))? + "\n"
    };
    match &a.out {
        Some(p) => std::fs::write(p, text).map_err(io)?,
        None => emit(out, &text)?,
    }
    Ok(EXIT_PASS)
}

fn cmd_inspect(cli: &Cli, a: &InspectArgs, out: &mut dyn Write) -> Result<i32> {
    let m = load_input(&a.input, cli.seed)?.matroid;
    let violation = three_connectivity_violation(&m);
    let small = |family: Vec<ElementSet>| -> Vec<ElementSet> { family.into_iter().filter(|c| c.len() <= a.max_size).collect() };
    let circuits = small(m.circuits());
    let cocircuits = small(m.cocircuits());
    let segs = segments(&m, false);
    let cosegs = cosegments(&m, false);
    let fan_list = fans(&m);
    let pairs = seg_coseg_pairs(&m);
    let spore_list = spores(&m);
    match cli.format {
        Format::Json => emit_json(
            out,
            &json!({
                "n": m.n(),
                "rank": m.rank(),
                "labels": m.labels(),
                "three_connected": violation.is_none(),
                "separation": violation.map(|s| json!({ "k": s.k, "x": labels_of(&m, s.x), "lambda": lambda(&m, s.x) })),
                "max_size": a.max_size,
                "circuits": circuits.iter().map(|c| labels_of(&m, *c)).collect::<Vec<_>>(),
                "cocircuits": cocircuits.iter().map(|c| labels_of(&m, *c)).collect::<Vec<_>>(),
                "segments": segs.iter().map(|s| labels_of(&m, *s)).collect::<Vec<_>>(),
                "cosegments": cosegs.iter().map(|s| labels_of(&m, *s)).collect::<Vec<_>>(),
                "fans": fan_list.iter().map(|f| f.elements().iter().map(|&e| m.label(e)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "seg_coseg_pairs": pairs.iter().map(|p| p.to_json(&m)).collect::<Vec<_>>(),
                "spores": spore_list.iter().map(|s| json!({ "P": labels_of(&m, s.p), "s": m.label(s.s) })).collect::<Vec<_>>(),
            }),
        )?,
        Format::Text => {
            let join = |v: &[ElementSet]| v.iter().map(|s| fmt_set(&m, *s)).collect::<Vec<_>>().join(" ");
            let mut s = format!("elements: {}\nrank: {}\n", m.n(), m.rank());
            match violation {
                None => s.push_str("3-connected: yes\n"),
                Some(sep) => s.push_str(&format!(
                    "3-connected: no; {}-separation {} with λ = {}\n",
                    sep.k,
                    fmt_set(&m, sep.x),
                    lambda(&m, sep.x)
                )),
            }
            s.push_str(&format!("circuits (size <= {}): {}\n", a.max_size, join(&circuits)));
            s.push_str(&format!("cocircuits (size <= {}): {}\n", a.max_size, join(&cocircuits)));
            s.push_str(&format!("segments: {}\n", join(&segs)));
            s.push_str(&format!("cosegments: {}\n", join(&cosegs)));
            s.push_str(&format!("fans: {}\n", fan_list.iter().map(|f| f.display(&m)).collect::<Vec<_>>().join(" ")));
            s.push_str(&format!(
                "segment-cosegment pairs: {}\n",
                pairs.iter().map(|p| format!("({}, {})", fmt_set(&m, p.l), fmt_set(&m, p.lstar))).collect::<Vec<_>>().join(" ")
            ));
            s.push_str(&format!("spores: {}\n", spore_list.iter().map(|p| p.display(&m)).collect::<Vec<_>>().join(" ")));
            emit(out, &s)?;
        }
    }
    Ok(EXIT_PASS)
}

fn cmd_detect(cli: &Cli, a: &DetectArgs, out: &mut dyn Write) -> Result<i32> {
    let m = load_input(&a.input, cli.seed)?.matroid;
    let sets = |v: Vec<ElementSet>| -> Vec<Value> { v.iter().map(|s| json!(labels_of(&m, *s))).collect() };
    let items: Vec<Value> = match a.kind {
        Kind::Triangles => sets(triangles(&m)),
        Kind::Triads => sets(triads(&m)),
        Kind::Segments => sets(segments(&m, true)),
        Kind::Cosegments => sets(cosegments(&m, true)),
        Kind::Fans => fans(&m).iter().map(|f| json!(f.elements().iter().map(|&e| m.label(e)).collect::<Vec<_>>())).collect(),
        Kind::Pairs => seg_coseg_pairs(&m).iter().map(|p| p.to_json(&m)).collect(),
        Kind::Spores => spores(&m).iter().map(|s| json!({ "P": labels_of(&m, s.p), "s": m.label(s.s) })).collect(),
        Kind::Vertical => {
            let label = a.x.as_deref().ok_or_else(|| Error::BadParams("--kind vertical needs --x".into()))?;
            let x = m.index_of(label)?;
            vertical_3_partitions(&m, x)?
                .iter()
                .map(|p| json!({ "X1": labels_of(&m, p.x1), "X2": labels_of(&m, p.x2), "x": m.label(p.x) }))
                .collect()
        }
    };
    match cli.format {
        Format::Json => emit_json(out, &json!({ "kind": format!("{:?}", a.kind).to_lowercase(), "items": items }))?,
        Format::Text => {
            let mut s = format!("{} found: {}\n", format!("{:?}", a.kind).to_lowercase(), items.len());
            for it in &items {
                s.push_str(&format!("  {it}\n"));
            }
            emit(out, &s)?;
        }
    }
    Ok(EXIT_PASS)
}

fn cmd_classify(cli: &Cli, a: &ClassifyArgs, out: &mut dyn Write) -> Result<i32> {
    let host = load_input(&a.input, cli.seed)?;
    let target = load_target(&a.target, cli.seed)?;
    let m = host.matroid.clone();
    let set = match (&a.set, a.star) {
        (Some(list), _) => parse_labels(&m, list)?,
        (None, Some(v)) => {
            let g = host.graph.as_ref().ok_or_else(|| Error::BadParams("--star needs a graph input".into()))?;
            if v >= g.vertex_count() {
                return Err(Error::BadParams(format!("vertex {v} out of range")));
            }
            ElementSet::from_indices(m.n(), g.star(v))
        }
        (None, None) => return Err(Error::BadParams("give --set or --star".into())),
    };
    let dual = a.form == Form::Dual;
    let use_graph = !dual
        && host.graph.is_some()
        && target.graph.as_ref().is_some_and(Graph::is_simple_3_connected)
        && m.n() > cli.cap;
    let mut oracle: Box<dyn MinorOracle> = if use_graph {
        Box::new(GraphOracle::new(host.graph.clone().expect("checked"), target.graph.clone().expect("checked"))?)
    } else {
        if m.n() > cli.cap {
            return Err(Error::CapExceeded { what: "host ground set", size: m.n(), cap: cli.cap });
        }
        Box::new(GenericOracle::with_cap(m.clone(), target.matroid.clone(), cli.cap))
    };
    let n = oracle.target().clone();
    let mut cls = Classifier::new(oracle.as_mut());
    let x0 = match &a.x0 {
        Some(l) => m.index_of(l)?,
        None => {
            let mut found = None;
            for x in set.iter() {
                if cls.minor_after(x, dual)?.is_some() {
                    found = Some(x);
                    break;
                }
            }
            found.ok_or_else(|| {
                let op = if dual { "deleting" } else { "contracting" };
                Error::HypothesisViolated(format!("no element of the set keeps an N-minor after {op} it"))
            })?
        }
    };
    let (holds, report, text) = match a.form {
        Form::Main => {
            let mode = if a.first { Mode::FirstBranch } else { Mode::All };
            let v = cls.main(set, x0, mode)?;
            let replay = v.replay(&m, &n);
            let mut extra = Vec::new();
            if mode == Mode::All {
                let t = cls.thm1(set, x0)?;
                extra = thm1_bridge(&m, &v, &t);
            }
            let mut text = format!(
                "C* = {}, x0 = {}\noutcomes: {}\nreplay: {}\n",
                fmt_set(&m, set),
                m.label(x0),
                v.tags().iter().map(|t| format!("({t})")).collect::<Vec<_>>().join(" "),
                if replay { "ok" } else { "FAILED" }
            );
            for b in &v.branches {
                text.push_str(&format!("  ({}) {}\n", b.tag(), b.to_json(&m, &n)));
            }
            for d in &v.diagnostics {
                text.push_str(&format!("  note: {d}\n"));
            }
            for f in &v.flags {
                text.push_str(&format!("  flag: {f}\n"));
            }
            for b in &extra {
                text.push_str(&format!("  bridge failure: {b}\n"));
            }
            let mut j = v.to_json(&m, &n);
            j["replay"] = json!(replay);
            j["bridge_failures"] = json!(extra);
            (v.holds() && replay && extra.is_empty(), j, text)
        }
        Form::Thm1 | Form::Dual => {
            let v = if dual { cls.dual(set, x0)? } else { cls.thm1(set, x0)? };
            let mut mismatch = None;
            if dual {
                let md = m.dual();
                if md.n() <= cli.cap {
                    let mut o = GenericOracle::with_cap(md, n.dual(), cli.cap);
                    let t = Classifier::new(&mut o).thm1(set, x0)?;
                    mismatch = duality_mismatch(&v, &t);
                }
            }
            let name = if dual { "C" } else { "C*" };
            let mut text = format!(
                "{name} = {}, x0 = {}\nstatements: {}\n",
                fmt_set(&m, set),
                m.label(x0),
                v.statements().iter().map(|t| format!("({t})")).collect::<Vec<_>>().join(" ")
            );
            text.push_str(&format!("  (i) at {}\n  (ii) at {}\n", fmt_set(&m, v.i_elements()), fmt_set(&m, v.ii_elements())));
            for (f, _) in &v.stmt_iii {
                text.push_str(&format!("  (iii) fan {}\n", f.display(&m)));
            }
            if let Some(d) = &mismatch {
                text.push_str(&format!("  duality mismatch: {d}\n"));
            }
            let mut j = v.to_json(&m, &n);
            j["duality_mismatch"] = json!(mismatch);
            (v.holds() && mismatch.is_none(), j, text)
        }
    };
    match cli.format {
        Format::Json => emit_json(out, &report)?,
        Format::Text => emit(out, &text)?,
    }
    Ok(if holds { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_sweep(cli: &Cli, a: &SweepArgs, out: &mut dyn Write) -> Result<i32> {
    let spec = if a.properties { CatalogueSpec::extended() } else { CatalogueSpec::default() };
    let cat = Catalogue::build(&spec)?;
    let opts = SweepOptions {
        targets: default_targets(),
        mode: if a.first { Mode::FirstBranch } else { Mode::All },
        properties: a.properties.then_some(Sections::ALL),
        budget: Budget::default(),
        seed: cli.seed,
        cap: cli.cap,
        jobs: cli.jobs,
    };
    let rep = sweep(&cat, &opts)?;
    let mut j = rep.to_json();
    j["catalogue"] = json!({
        "entries": cat.entries.iter().map(|e| &e.name).collect::<Vec<_>>(),
        "skipped": cat.skipped,
    });
    if let Some(p) = &a.out {
        let text = serde_json::to_string_pretty(&j).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(p, text).map_err(io)?;
    }
    match cli.format {
        Format::Json => emit_json(out, &j)?,
        Format::Text => emit(out, &format!("catalogue: {} entries\n{}", cat.len(), rep.summary()))?,
    }
    Ok(rep.exit_code())
}

fn cmd_verify_paper(cli: &Cli, a: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let only = match &a.only {
        Some(list) => list.split(',').map(|s| s.trim().parse::<Suite>()).collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let fig1 = a.fig1.as_deref().map(Graph::load).transpose()?;
    let opts = VerifyOptions { only, fig1, seed: cli.seed, cap: cli.cap, jobs: cli.jobs, ..VerifyOptions::default() };
    let rep = verify::run(&opts);
    match cli.format {
        Format::Json => emit_json(out, &rep.to_json())?,
        Format::Text => emit(out, &rep.text())?,
    }
    Ok(if rep.passed() { EXIT_PASS } else { EXIT_FAIL })
}
