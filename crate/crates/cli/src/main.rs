use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use ruledsurf::dsl::{self, Document, DslError, Resolved};
use ruledsurf::emit;
use ruledsurf::surgery::write_transcript;
use ruledsurf::{
    classify_chain, config_space_dim, configuration_invariant, confluence_oracle,
    decide_equivalence, is_standard_graph, mother_map, normalize, reverse, reverse_normalized,
    schedule_from, standardize, validate, ChainClass, ComponentKind, ExtendedGraph,
    NormalizedExtendedGraph, VertexId, WeightedGraph, Zigzag,
};

#[derive(Parser)]
#[command(name = "ruledsurf", version, about = "Boundary graphs of affine ruled surfaces")]
struct Cli {
    /// Machine-readable output; errors go to stderr as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate every item of a file.
    Check { file: PathBuf },
    /// Reduce a graph to standard form.
    Standardize {
        file: PathBuf,
        item: String,
        /// Write the surgery transcript here.
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Reverse a standard zigzag, or a normalized graph over one.
    Reverse { file: PathBuf, item: String },
    /// Normalized extended graph of an item.
    Normalize { file: PathBuf, item: String },
    /// Decide whether two normalized graphs are equivalent.
    Equiv {
        file: PathBuf,
        first: String,
        second: String,
        #[arg(long, value_delimiter = ',', num_args = 1, required = true)]
        genus: Vec<u32>,
    },
    /// δ map, component kinds and configuration-space dimensions.
    Moduli { file: PathBuf, item: String },
    /// Blowup schedule from the one-skeleton.
    Schedule {
        file: PathBuf,
        item: String,
        #[arg(long)]
        genus: u32,
    },
    /// Standard forms reachable by bounded surgery.
    Oracle {
        file: PathBuf,
        item: String,
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = 10)]
        cap: usize,
    },
    /// Graphviz source for a graph-like item.
    Dot { file: PathBuf, item: String },
}

enum Failure {
    Usage(String),
    Parse(DslError),
    Semantic { kind: &'static str, message: String },
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Parse(_) => 3,
            Failure::Semantic { .. } => 1,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Usage(m) => json!({ "error": "usage", "message": m }),
            Failure::Parse(e) => {
                let mut v = json!({ "error": "parse", "message": e.to_string() });
                if let DslError::SyntaxError { line, col, expected } = e {
                    v["line"] = json!(line);
                    v["col"] = json!(col);
                    v["expected"] = json!(expected);
                }
                v
            }
            Failure::Semantic { kind, message } => json!({ "error": kind, "message": message }),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Parse(e) => format!("parse error: {e}"),
            Failure::Semantic { message, .. } => message.clone(),
        }
    }
}

fn semantic(kind: &'static str, e: impl ToString) -> Failure {
    Failure::Semantic {
        kind,
        message: e.to_string(),
    }
}

fn dsl_failure(e: DslError) -> Failure {
    semantic("semantic", e)
}

/// What a command prints, plus whether it counts as success.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

fn load(path: &PathBuf) -> Result<Document, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    dsl::parse(&text).map_err(Failure::Parse)
}

fn chain_or_text(name: &str, g: &WeightedGraph) -> String {
    match Zigzag::from_graph(g) {
        Ok(z) if g.vertices().all(|v| v.genus == 0) => {
            let r = z.reversed();
            if r.weights().starts_with(&[0, 0]) && !z.weights().starts_with(&[0, 0]) {
                r.to_string()
            } else {
                z.to_string()
            }
        }
        _ => {
            let doc = Document {
                items: vec![(name.to_string(), dsl::ItemDecl::Graph(dsl::graph_decl(g)))],
            };
            doc.print().trim_end().to_string()
        }
    }
}

fn class_name(c: ChainClass) -> &'static str {
    match c {
        ChainClass::Standard => "standard",
        ChainClass::SemiStandard { .. } => "semi-standard",
        ChainClass::Neither => "neither",
    }
}

fn label(g: &WeightedGraph, v: VertexId) -> String {
    g.vertex(v).map_or_else(|| v.to_string(), |x| x.label())
}

/// Graph shown by `dot` and searched by `standardize` and `oracle`.
fn graph_like(doc: &Document, item: &str) -> Result<WeightedGraph, Failure> {
    Ok(match doc.resolve(item).map_err(dsl_failure)? {
        Resolved::Zigzag(z) => z.to_graph(),
        Resolved::Graph(g) => g,
        Resolved::Extended(e) => e.into_graph(),
        Resolved::Normalized(d) => d.realized(),
        Resolved::Instance(i) => i.instantiate().map_err(|e| semantic("presentation", e))?.extended.into_graph(),
    })
}

fn check_extended(e: &ExtendedGraph) -> Result<String, String> {
    let report = validate(e);
    if let Some((v, f)) = report.first_failure() {
        return Err(format!("fiber of {}: {f}", label(e.graph(), v)));
    }
    let d = normalize(e).map_err(|x| x.to_string())?;
    let blowdowns: usize = report.fibers.iter().map(|f| f.blowdowns()).sum();
    Ok(format!(
        "fibers={} blowdowns={blowdowns} feathers={}",
        report.fibers.len(),
        d.feather_count()
    ))
}

fn check_item(doc: &Document, name: &str) -> Result<String, String> {
    match doc.resolve(name).map_err(|e| e.to_string())? {
        Resolved::Zigzag(z) => Ok(format!("class={}", class_name(classify_chain(&z)))),
        Resolved::Graph(g) => Ok(format!(
            "tree={} standard={} semi-standard={}",
            g.is_tree(),
            is_standard_graph(&g, false),
            is_standard_graph(&g, true)
        )),
        Resolved::Extended(e) => check_extended(&e),
        Resolved::Normalized(d) => {
            let e = d.realized_extended().map_err(|x| x.to_string())?;
            check_extended(&e)
        }
        Resolved::Instance(i) => {
            let c = i.instantiate().map_err(|e| e.to_string())?;
            let d = doc.normalized(&doc_schedule_source(doc, name)).map_err(|e| e.to_string())?;
            let back = normalize(&c.extended).map_err(|e| e.to_string())?;
            if ruledsurf::canonical_code(&back.realized()).ok() != ruledsurf::canonical_code(&d.realized()).ok() {
                return Err("instance does not normalize back to its source".into());
            }
            let q = configuration_invariant(&c).map_err(|e| e.to_string())?;
            Ok(format!("invariant={}", q.to_text().trim_end().replace('\n', ";")))
        }
    }
}

fn doc_schedule_source(doc: &Document, name: &str) -> String {
    match doc.get(name) {
        Some(dsl::ItemDecl::Instance(i)) => i.schedule_of.clone(),
        _ => unreachable!("called for instances only"),
    }
}

fn cmd_check(doc: &Document) -> Output {
    let mut lines = Vec::new();
    let mut items = Vec::new();
    let mut ok = true;
    for (name, decl) in &doc.items {
        let res = check_item(doc, name);
        ok &= res.is_ok();
        let (status, detail) = match &res {
            Ok(d) => ("ok", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        lines.push(format!("{name} {} {status} {detail}", decl.keyword()));
        items.push(json!({ "name": name, "kind": decl.keyword(), "ok": res.is_ok(), "detail": detail }));
    }
    Output {
        text: lines.join("\n"),
        json: json!({ "ok": ok, "items": items }),
        ok,
    }
}

fn cmd_standardize(doc: &Document, item: &str, out: Option<&PathBuf>) -> Result<Output, Failure> {
    let g = graph_like(doc, item)?;
    let (std, t) = standardize(&g).map_err(|e| semantic("surgery", e))?;
    if let Some(path) = out {
        fs::write(path, write_transcript(&t.steps))
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let shown = chain_or_text(item, &std);
    Ok(Output::ok(
        format!("{shown}\n# steps={}", t.steps.len()),
        json!({ "graph": emit::graph_json(&std), "standard": shown, "steps": t.steps.len() }),
    ))
}

fn cmd_reverse(doc: &Document, item: &str) -> Result<Output, Failure> {
    match doc.resolve(item).map_err(dsl_failure)? {
        Resolved::Zigzag(z) => {
            let (r, t) = reverse(&z).map_err(|e| semantic("surgery", e))?;
            Ok(Output::ok(
                format!("{r}\n# steps={}", t.steps.len()),
                json!({ "reversed": r.weights(), "steps": t.steps.len() }),
            ))
        }
        Resolved::Extended(_) | Resolved::Normalized(_) => {
            let d = doc.normalized(item).map_err(dsl_failure)?;
            let r = reverse_normalized(&d).map_err(|e| semantic("invariants", e))?;
            Ok(Output::ok(
                dsl::normalized_text(item, &r).trim_end().to_string(),
                emit::normalized_json(&r),
            ))
        }
        other => Err(semantic("semantic", format!("cannot reverse a {}", other.kind()))),
    }
}

fn cmd_normalize(doc: &Document, item: &str) -> Result<Output, Failure> {
    let d = doc.normalized(item).map_err(dsl_failure)?;
    Ok(Output::ok(
        dsl::normalized_text(item, &d).trim_end().to_string(),
        emit::normalized_json(&d),
    ))
}

fn cmd_equiv(doc: &Document, a: &str, b: &str, genus: &[u32]) -> Result<Output, Failure> {
    let [g1, g2] = genus else {
        return Err(Failure::Usage("--genus takes two values G1,G2".into()));
    };
    let d1 = doc.normalized(a).map_err(dsl_failure)?;
    let d2 = doc.normalized(b).map_err(dsl_failure)?;
    let v = decide_equivalence(&d1, *g1, &d2, *g2);
    let word = if v.equivalent { "equivalent" } else { "not-equivalent" };
    Ok(Output {
        text: format!("{word} {}", v.witness.as_str()),
        json: emit::verdict_json(&v),
        ok: v.equivalent,
    })
}

fn cmd_moduli(doc: &Document, item: &str) -> Result<Output, Failure> {
    let (d, kinds, invariant): (NormalizedExtendedGraph, Option<BTreeMap<VertexId, ComponentKind>>, _) =
        match doc.resolve(item).map_err(dsl_failure)? {
            Resolved::Extended(e) => {
                let m = mother_map(&e).map_err(|x| semantic("extended", x))?;
                (normalize(&e).map_err(|x| semantic("extended", x))?, Some(m.kinds), None)
            }
            Resolved::Normalized(d) => (d, None, None),
            Resolved::Instance(i) => {
                let c = i.instantiate().map_err(|e| semantic("presentation", e))?;
                let m = mother_map(&c.extended).map_err(|x| semantic("extended", x))?;
                let q = configuration_invariant(&c).map_err(|e| semantic("invariants", e))?;
                (normalize(&c.extended).map_err(|x| semantic("extended", x))?, Some(m.kinds), Some(q))
            }
            other => return Err(semantic("semantic", format!("no moduli for a {}", other.kind()))),
        };
    let g = &d.boundary;
    let dims = config_space_dim(&d, kinds.as_ref().unwrap_or(&BTreeMap::new()));
    let mut text = Vec::new();
    for (&c, &k) in &d.delta {
        let kind = kinds.as_ref().and_then(|m| m.get(&c)).map_or("?", |k| k.as_str());
        text.push(format!(
            "{} delta={k} kind={kind} dim={}",
            label(g, c),
            dims.per_component[&c]
        ));
    }
    text.push(format!("total-dim={}", dims.total));
    let delta: serde_json::Map<String, Value> = d.delta.iter().map(|(&c, &k)| (label(g, c), json!(k))).collect();
    let per: serde_json::Map<String, Value> = dims
        .per_component
        .iter()
        .map(|(&c, &k)| (label(g, c), json!(k)))
        .collect();
    let mut j = json!({ "delta": delta, "dimensions": per, "total": dims.total });
    if let Some(k) = &kinds {
        j["kinds"] = emit::kinds_json(k.iter().map(|(&c, kind)| (label(g, c), kind)));
    }
    if let Some(q) = &invariant {
        text.push(format!("invariant {}", q.to_text().trim_end().replace('\n', "; ")));
        j["invariant"] = emit::invariant_json(g, q);
    }
    Ok(Output::ok(text.join("\n"), j))
}

fn cmd_schedule(doc: &Document, item: &str, genus: u32) -> Result<Output, Failure> {
    let d = doc.normalized(item).map_err(dsl_failure)?;
    let s = schedule_from(&d, genus).map_err(|e| semantic("presentation", e))?;
    let dim = ruledsurf::presentation::schedule_dimension(&s);
    Ok(Output::ok(
        format!("{}# dimension={dim}", s.to_text()),
        emit::schedule_json(&s, dim),
    ))
}

fn cmd_oracle(doc: &Document, item: &str, depth: u32, cap: usize) -> Result<Output, Failure> {
    let g = graph_like(doc, item)?;
    let r = confluence_oracle(&g, depth, cap).map_err(|e| semantic("surgery", e))?;
    let forms: Vec<String> = r.standard.values().map(|h| chain_or_text("standard", h)).collect();
    let mut text = vec![format!("explored={} standard-forms={}", r.explored, forms.len())];
    text.extend(forms.iter().cloned());
    Ok(Output::ok(
        text.join("\n"),
        json!({ "explored": r.explored, "standard": forms }),
    ))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.cmd {
        Cmd::Check { file } => Ok(cmd_check(&load(file)?)),
        Cmd::Standardize { file, item, transcript } => cmd_standardize(&load(file)?, item, transcript.as_ref()),
        Cmd::Reverse { file, item } => cmd_reverse(&load(file)?, item),
        Cmd::Normalize { file, item } => cmd_normalize(&load(file)?, item),
        Cmd::Equiv { file, first, second, genus } => cmd_equiv(&load(file)?, first, second, genus),
        Cmd::Moduli { file, item } => cmd_moduli(&load(file)?, item),
        Cmd::Schedule { file, item, genus } => cmd_schedule(&load(file)?, item, *genus),
        Cmd::Oracle { file, item, depth, cap } => cmd_oracle(&load(file)?, item, *depth, *cap),
        Cmd::Dot { file, item } => {
            let g = graph_like(&load(file)?, item)?;
            let text = emit::emit_dot(item, &g);
            Ok(Output::ok(text.trim_end().to_string(), json!({ "dot": text })))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", emit::to_canonical(&out.json));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(f) => {
            if cli.json {
                eprintln!("{}", emit::to_canonical(&f.to_json()));
            } else {
                eprintln!("ruledsurf: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
