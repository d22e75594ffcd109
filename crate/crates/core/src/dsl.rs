//! Text format for zigzags, graphs, extended and normalized graphs, and
//! presentation instances.
//!
//! ```text
//! # comment
//! zigzag Z = [[0,0,(-2)_3]]
//! graph G { c0 w=0 role=fiber0; c1 w=0 role=section genus=0; c2 w=-2; edges: c0-c1, c1-c2 }
//! extended E { boundary=G; fiber(c2) += feather f1 w=-1 on c2 }
//! normalized N { boundary=G; delta: c2=1 }
//! instance I { schedule_of=N; genus=0; params: c2=1, c2_f1=3/2 }
//! ```
//!
//! Vertex roles default to `boundary`. Items may only refer to items
//! declared before them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::BigRational;
use thiserror::Error;

use crate::chain::Zigzag;
use crate::extended::{normalize, ExtendedError, ExtendedGraph, NormalizedExtendedGraph};
use crate::graph::{GraphError, Role, Vertex, VertexId, WeightedGraph};
use crate::invariants::{parse_rational, rational_string};
use crate::presentation::{schedule_from, PresentationError, PresentationInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{line}:{col}: syntax error: expected {expected}")]
    SyntaxError {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("unknown reference `{0}`")]
    UnknownReference(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("item `{item}`: {detail}")]
    Invalid { item: String, detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDecl {
    pub name: String,
    pub weight: i64,
    pub role: Role,
    pub genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphDecl {
    pub vertices: Vec<VertexDecl>,
    pub edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatherDecl {
    pub fiber: String,
    pub name: String,
    pub weight: i64,
    pub on: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedDecl {
    pub boundary: String,
    pub feathers: Vec<FeatherDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedDecl {
    pub boundary: String,
    pub delta: Vec<(String, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDecl {
    pub schedule_of: String,
    pub genus: u32,
    pub params: Vec<(String, BigRational)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemDecl {
    Zigzag(Vec<i64>),
    Graph(GraphDecl),
    Extended(ExtendedDecl),
    Normalized(NormalizedDecl),
    Instance(InstanceDecl),
}

impl ItemDecl {
    pub fn keyword(&self) -> &'static str {
        match self {
            ItemDecl::Zigzag(_) => "zigzag",
            ItemDecl::Graph(_) => "graph",
            ItemDecl::Extended(_) => "extended",
            ItemDecl::Normalized(_) => "normalized",
            ItemDecl::Instance(_) => "instance",
        }
    }
}

/// Parsed document: named items in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub items: Vec<(String, ItemDecl)>,
}

/// Anything the document can resolve a name to.
#[derive(Debug, Clone)]
pub enum Resolved {
    Zigzag(Zigzag),
    Graph(WeightedGraph),
    Extended(ExtendedGraph),
    Normalized(NormalizedExtendedGraph),
    Instance(PresentationInstance),
}

impl Resolved {
    pub fn kind(&self) -> &'static str {
        match self {
            Resolved::Zigzag(_) => "zigzag",
            Resolved::Graph(_) => "graph",
            Resolved::Extended(_) => "extended",
            Resolved::Normalized(_) => "normalized",
            Resolved::Instance(_) => "instance",
        }
    }
}

fn invalid(item: &str, detail: impl ToString) -> DslError {
    DslError::Invalid {
        item: item.to_string(),
        detail: detail.to_string(),
    }
}

impl Document {
    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|(n, _)| n.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&ItemDecl> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    fn decl(&self, name: &str) -> Result<&ItemDecl, DslError> {
        self.get(name)
            .ok_or_else(|| DslError::UnknownReference(name.to_string()))
    }

    pub fn resolve(&self, name: &str) -> Result<Resolved, DslError> {
        Ok(match self.decl(name)? {
            ItemDecl::Zigzag(_) => Resolved::Zigzag(self.zigzag(name)?),
            ItemDecl::Graph(_) => Resolved::Graph(self.graph(name)?),
            ItemDecl::Extended(_) => Resolved::Extended(self.extended(name)?),
            ItemDecl::Normalized(_) => Resolved::Normalized(self.normalized(name)?),
            ItemDecl::Instance(_) => Resolved::Instance(self.instance(name)?),
        })
    }

    pub fn zigzag(&self, name: &str) -> Result<Zigzag, DslError> {
        match self.decl(name)? {
            ItemDecl::Zigzag(ws) => Zigzag::new(ws.clone()).map_err(|e| invalid(name, e)),
            other => Err(invalid(name, format!("is a {}, not a zigzag", other.keyword()))),
        }
    }

    /// Graph items; zigzags resolve to their chain graph.
    pub fn graph(&self, name: &str) -> Result<WeightedGraph, DslError> {
        match self.decl(name)? {
            ItemDecl::Zigzag(_) => Ok(self.zigzag(name)?.to_graph()),
            ItemDecl::Graph(g) => build_graph(name, g),
            other => Err(invalid(name, format!("is a {}, not a graph", other.keyword()))),
        }
    }

    pub fn extended(&self, name: &str) -> Result<ExtendedGraph, DslError> {
        let ItemDecl::Extended(e) = self.decl(name)? else {
            return Err(invalid(name, "not an extended graph"));
        };
        let boundary = self.graph(&e.boundary)?;
        let mut g = boundary.clone();
        for f in &e.feathers {
            let on = lookup(&g, &f.on)?;
            let id = g.add_fresh(f.weight, Role::Feather);
            g.set_name(id, Some(f.name.clone())).expect("fresh");
            g.add_edge(on, id).expect("present");
        }
        let ext = ExtendedGraph::new(g).map_err(|err| invalid(name, err))?;
        for f in &e.feathers {
            let fid = ext.graph().find_by_name(&f.name).expect("added");
            let dist = lookup(&boundary, &f.fiber)?;
            let ok = ext
                .fibers()
                .iter()
                .any(|fb| fb.distinguished == dist && fb.members.contains(&fid));
            if !ok {
                return Err(invalid(
                    name,
                    format!("feather {} is not in the fiber of {}", f.name, f.fiber),
                ));
            }
        }
        Ok(ext)
    }

    /// Normalized items; extended items are normalized on the fly.
    pub fn normalized(&self, name: &str) -> Result<NormalizedExtendedGraph, DslError> {
        match self.decl(name)? {
            ItemDecl::Normalized(n) => {
                let b = self.graph(&n.boundary)?;
                let mut delta = BTreeMap::new();
                for (v, k) in &n.delta {
                    *delta.entry(lookup(&b, v)?).or_insert(0) += k;
                }
                NormalizedExtendedGraph::new(b, delta).map_err(|e| invalid(name, e))
            }
            ItemDecl::Extended(_) => {
                normalize(&self.extended(name)?).map_err(|e: ExtendedError| invalid(name, e))
            }
            other => Err(invalid(name, format!("is a {}, not normalizable", other.keyword()))),
        }
    }

    pub fn instance(&self, name: &str) -> Result<PresentationInstance, DslError> {
        let ItemDecl::Instance(i) = self.decl(name)? else {
            return Err(invalid(name, "not an instance"));
        };
        let d = self.normalized(&i.schedule_of)?;
        let schedule = schedule_from(&d, i.genus).map_err(|e: PresentationError| invalid(name, e))?;
        Ok(PresentationInstance {
            schedule,
            params: i.params.iter().cloned().collect(),
        })
    }

    /// Canonical text form; parses back to an equal document.
    pub fn print(&self) -> String {
        let mut out = String::new();
        for (name, item) in &self.items {
            match item {
                ItemDecl::Zigzag(ws) => {
                    let _ = writeln!(out, "zigzag {name} = {}", Zigzag::new(ws.clone()).expect("non-empty"));
                }
                ItemDecl::Graph(g) => {
                    let _ = writeln!(out, "graph {name} {{");
                    for v in &g.vertices {
                        let _ = write!(out, "  {} w={}", v.name, v.weight);
                        if v.role != Role::Boundary {
                            let _ = write!(out, " role={}", v.role);
                        }
                        if v.genus != 0 {
                            let _ = write!(out, " genus={}", v.genus);
                        }
                        out.push_str(";\n");
                    }
                    let edges: Vec<String> = g.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
                    let _ = writeln!(out, "  edges: {}\n}}", edges.join(", "));
                }
                ItemDecl::Extended(e) => {
                    let _ = writeln!(out, "extended {name} {{\n  boundary={};", e.boundary);
                    for f in &e.feathers {
                        let _ = writeln!(
                            out,
                            "  fiber({}) += feather {} w={} on {};",
                            f.fiber, f.name, f.weight, f.on
                        );
                    }
                    out.push_str("}\n");
                }
                ItemDecl::Normalized(n) => {
                    let delta: Vec<String> = n.delta.iter().map(|(v, k)| format!("{v}={k}")).collect();
                    let _ = writeln!(
                        out,
                        "normalized {name} {{\n  boundary={};\n  delta: {}\n}}",
                        n.boundary,
                        delta.join(", ")
                    );
                }
                ItemDecl::Instance(i) => {
                    let params: Vec<String> = i
                        .params
                        .iter()
                        .map(|(k, v)| format!("{k}={}", rational_string(v)))
                        .collect();
                    let _ = writeln!(
                        out,
                        "instance {name} {{\n  schedule_of={};\n  genus={};\n  params: {}\n}}",
                        i.schedule_of,
                        i.genus,
                        params.join(", ")
                    );
                }
            }
        }
        out
    }
}

/// Declaration of `g` using vertex labels; vertices in id order.
pub fn graph_decl(g: &WeightedGraph) -> GraphDecl {
    let label = |id| g.vertex(id).expect("edge endpoint").label();
    GraphDecl {
        vertices: g
            .vertices()
            .map(|v| VertexDecl {
                name: v.label(),
                weight: v.weight,
                role: v.role,
                genus: v.genus,
            })
            .collect(),
        edges: g.edges().iter().map(|&(a, b)| (label(a), label(b))).collect(),
    }
}

/// Text of a normalized graph as a `graph` item plus a `normalized` item.
pub fn normalized_text(name: &str, d: &NormalizedExtendedGraph) -> String {
    let boundary = format!("{name}_boundary");
    let delta = d
        .delta
        .iter()
        .map(|(&c, &k)| (d.boundary.vertex(c).expect("delta key").label(), k))
        .collect();
    Document {
        items: vec![
            (boundary.clone(), ItemDecl::Graph(graph_decl(&d.boundary))),
            (name.to_string(), ItemDecl::Normalized(NormalizedDecl { boundary, delta })),
        ],
    }
    .print()
}

fn lookup(g: &WeightedGraph, name: &str) -> Result<VertexId, DslError> {
    g.find_by_name(name)
        .ok_or_else(|| DslError::UnknownReference(name.to_string()))
}

fn build_graph(item: &str, decl: &GraphDecl) -> Result<WeightedGraph, DslError> {
    let mut g = WeightedGraph::new();
    for (i, v) in decl.vertices.iter().enumerate() {
        let vx = Vertex::new(VertexId(i as u32), v.weight, v.role)
            .named(v.name.clone())
            .with_genus(v.genus);
        g.add_vertex(vx).map_err(|e: GraphError| invalid(item, e))?;
    }
    for (a, b) in &decl.edges {
        let (u, v) = (lookup(&g, a)?, lookup(&g, b)?);
        g.add_edge(u, v).map_err(|e| invalid(item, e))?;
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, DslError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Ident(s), line, col });
                continue;
            }
            let negative = c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)
                && !matches!(out.last(), Some(Token { tok: Tok::Ident(_), .. }));
            if c.is_ascii_digit() || negative {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse::<i64>().map_err(|_| DslError::SyntaxError {
                    line,
                    col,
                    expected: "an integer that fits in 64 bits".into(),
                })?;
                out.push(Token { tok: Tok::Int(n), line, col });
                continue;
            }
            if "[](){}=;,:-/+_".contains(c) {
                out.push(Token { tok: Tok::Punct(c), line, col });
                i += 1;
                continue;
            }
            return Err(DslError::SyntaxError {
                line,
                col,
                expected: format!("a token, found `{c}`"),
            });
        }
    }
    let line = text.lines().count().max(1);
    let col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn err_at(&self, idx: usize, expected: &str) -> DslError {
        let t = &self.toks[idx];
        DslError::SyntaxError {
            line: t.line,
            col: t.col,
            expected: expected.to_string(),
        }
    }

    fn err(&self, expected: &str) -> DslError {
        self.err_at(self.pos, expected)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_punct(&self, c: char) -> bool {
        *self.peek() == Tok::Punct(c)
    }

    fn punct(&mut self, c: char) -> Result<(), DslError> {
        if self.is_punct(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("`{c}`")))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn word(&mut self, w: &str) -> Result<(), DslError> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&format!("`{w}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, DslError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.err(what)),
        }
    }

    fn int(&mut self, what: &str) -> Result<i64, DslError> {
        match *self.peek() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(self.err(what)),
        }
    }

    fn nonneg(&mut self, what: &str) -> Result<u32, DslError> {
        let at = self.pos;
        let n = self.int(what)?;
        u32::try_from(n).map_err(|_| self.err_at(at, what))
    }

    fn rational(&mut self) -> Result<BigRational, DslError> {
        let at = self.pos;
        let n = self.int("a rational number")?;
        if self.is_punct('/') {
            self.bump();
            let d = self.int("a denominator")?;
            return parse_rational(&format!("{n}/{d}")).ok_or_else(|| self.err_at(at, "a nonzero denominator"));
        }
        Ok(BigRational::from_integer(n.into()))
    }

    /// `key=` prefix.
    fn key(&mut self, k: &str) -> Result<(), DslError> {
        self.word(k)?;
        self.punct('=')
    }

    fn zigzag_body(&mut self) -> Result<Vec<i64>, DslError> {
        self.punct('[')?;
        self.punct('[')?;
        let mut ws = Vec::new();
        loop {
            if self.is_punct('(') {
                self.bump();
                let w = self.int("a weight")?;
                self.punct(')')?;
                self.punct('_')?;
                let at = self.pos;
                let k = self.int("a repetition count")?;
                if k < 1 {
                    return Err(self.err_at(at, "a positive repetition count"));
                }
                ws.extend(std::iter::repeat_n(w, k as usize));
            } else {
                ws.push(self.int("a weight or `(w)_k`")?);
            }
            if self.is_punct(',') {
                let comma = self.pos;
                self.bump();
                if !matches!(self.peek(), Tok::Int(_) | Tok::Punct('(')) {
                    return Err(self.err_at(comma, "a weight after `,`"));
                }
            } else {
                break;
            }
        }
        self.punct(']')?;
        self.punct(']')?;
        Ok(ws)
    }

    /// Runs `stmt` for `;`-separated statements up to the closing brace.
    fn block(&mut self, mut stmt: impl FnMut(&mut Parser) -> Result<(), DslError>) -> Result<(), DslError> {
        self.punct('{')?;
        loop {
            while self.is_punct(';') {
                self.bump();
            }
            if self.is_punct('}') {
                self.bump();
                return Ok(());
            }
            stmt(self)?;
            if !self.is_punct(';') && !self.is_punct('}') {
                return Err(self.err("`;` or `}`"));
            }
        }
    }

    /// Comma-separated list that may be empty (ends at `;` or `}`).
    fn list(&mut self, mut elem: impl FnMut(&mut Parser) -> Result<(), DslError>) -> Result<(), DslError> {
        if self.is_punct(';') || self.is_punct('}') {
            return Ok(());
        }
        loop {
            elem(self)?;
            if self.is_punct(',') {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn graph_body(&mut self) -> Result<GraphDecl, DslError> {
        let mut g = GraphDecl {
            vertices: Vec::new(),
            edges: Vec::new(),
        };
        self.block(|p| {
            if p.is_word("edges") && *p.peek_at(1) == Tok::Punct(':') {
                p.bump();
                p.bump();
                return p.list(|p| {
                    let a = p.ident("a vertex name")?;
                    p.punct('-')?;
                    let b = p.ident("a vertex name")?;
                    g.edges.push((a, b));
                    Ok(())
                });
            }
            let name = p.ident("a vertex name or `edges:`")?;
            let mut v = VertexDecl {
                name,
                weight: 0,
                role: Role::Boundary,
                genus: 0,
            };
            let mut has_weight = false;
            while let Tok::Ident(attr) = p.peek().clone() {
                match attr.as_str() {
                    "w" => {
                        p.key("w")?;
                        v.weight = p.int("a weight")?;
                        has_weight = true;
                    }
                    "role" => {
                        p.key("role")?;
                        let at = p.pos;
                        let r = p.ident("a role")?;
                        v.role = Role::parse(&r)
                            .ok_or_else(|| p.err_at(at, "one of section, fiber0, boundary, feather"))?;
                    }
                    "genus" => {
                        p.key("genus")?;
                        v.genus = p.nonneg("a genus")?;
                    }
                    _ => return Err(p.err("`w=`, `role=` or `genus=`")),
                }
            }
            if !has_weight {
                return Err(p.err("`w=`"));
            }
            g.vertices.push(v);
            Ok(())
        })?;
        Ok(g)
    }

    fn extended_body(&mut self) -> Result<ExtendedDecl, DslError> {
        let mut boundary = None;
        let mut feathers = Vec::new();
        let start = self.pos;
        self.block(|p| {
            if p.is_word("boundary") {
                p.key("boundary")?;
                boundary = Some(p.ident("a graph name")?);
                return Ok(());
            }
            p.word("fiber")?;
            p.punct('(')?;
            let fiber = p.ident("a vertex name")?;
            p.punct(')')?;
            p.punct('+')?;
            p.punct('=')?;
            p.word("feather")?;
            let name = p.ident("a feather name")?;
            p.key("w")?;
            let weight = p.int("a weight")?;
            p.word("on")?;
            let on = p.ident("a vertex name")?;
            feathers.push(FeatherDecl { fiber, name, weight, on });
            Ok(())
        })?;
        let boundary = boundary.ok_or_else(|| self.err_at(start, "a `boundary=` entry"))?;
        Ok(ExtendedDecl { boundary, feathers })
    }

    fn normalized_body(&mut self) -> Result<NormalizedDecl, DslError> {
        let mut boundary = None;
        let mut delta = Vec::new();
        let start = self.pos;
        self.block(|p| {
            if p.is_word("boundary") {
                p.key("boundary")?;
                boundary = Some(p.ident("a graph name")?);
                return Ok(());
            }
            p.word("delta")?;
            p.punct(':')?;
            p.list(|p| {
                let v = p.ident("a vertex name")?;
                p.punct('=')?;
                let k = p.nonneg("a count")?;
                delta.push((v, k));
                Ok(())
            })
        })?;
        let boundary = boundary.ok_or_else(|| self.err_at(start, "a `boundary=` entry"))?;
        Ok(NormalizedDecl { boundary, delta })
    }

    fn instance_body(&mut self) -> Result<InstanceDecl, DslError> {
        let mut schedule_of = None;
        let mut genus = 0;
        let mut params = Vec::new();
        let start = self.pos;
        self.block(|p| {
            if p.is_word("schedule_of") {
                p.key("schedule_of")?;
                schedule_of = Some(p.ident("an item name")?);
                return Ok(());
            }
            if p.is_word("genus") {
                p.key("genus")?;
                genus = p.nonneg("a genus")?;
                return Ok(());
            }
            p.word("params")?;
            p.punct(':')?;
            p.list(|p| {
                let k = p.ident("a slot name")?;
                p.punct('=')?;
                params.push((k, p.rational()?));
                Ok(())
            })
        })?;
        let schedule_of = schedule_of.ok_or_else(|| self.err_at(start, "a `schedule_of=` entry"))?;
        Ok(InstanceDecl {
            schedule_of,
            genus,
            params,
        })
    }
}

/// Parses a document and checks names and references.
pub fn parse(text: &str) -> Result<Document, DslError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let mut doc = Document::default();
    let mut seen = BTreeSet::new();
    while *p.peek() != Tok::Eof {
        let at = p.pos;
        let kw = p.ident("`zigzag`, `graph`, `extended`, `normalized` or `instance`")?;
        let name = p.ident("an item name")?;
        let item = match kw.as_str() {
            "zigzag" => {
                p.punct('=')?;
                ItemDecl::Zigzag(p.zigzag_body()?)
            }
            "graph" => ItemDecl::Graph(p.graph_body()?),
            "extended" => ItemDecl::Extended(p.extended_body()?),
            "normalized" => ItemDecl::Normalized(p.normalized_body()?),
            "instance" => ItemDecl::Instance(p.instance_body()?),
            _ => return Err(p.err_at(at, "`zigzag`, `graph`, `extended`, `normalized` or `instance`")),
        };
        if !seen.insert(name.clone()) {
            return Err(DslError::DuplicateName(name));
        }
        check_references(&doc, &name, &item)?;
        doc.items.push((name, item));
    }
    Ok(doc)
}

fn check_references(doc: &Document, name: &str, item: &ItemDecl) -> Result<(), DslError> {
    let unknown = |s: &str| DslError::UnknownReference(s.to_string());
    let graph_names = |g: &str| -> Result<BTreeSet<String>, DslError> {
        match doc.get(g) {
            Some(ItemDecl::Graph(d)) => Ok(d.vertices.iter().map(|v| v.name.clone()).collect()),
            Some(other) => Err(invalid(name, format!("`{g}` is a {}, not a graph", other.keyword()))),
            None => Err(unknown(g)),
        }
    };
    match item {
        ItemDecl::Zigzag(_) => {}
        ItemDecl::Graph(g) => {
            let mut names = BTreeSet::new();
            for v in &g.vertices {
                if !names.insert(v.name.as_str()) {
                    return Err(DslError::DuplicateName(v.name.clone()));
                }
            }
            for (a, b) in &g.edges {
                for x in [a, b] {
                    if !names.contains(x.as_str()) {
                        return Err(unknown(x));
                    }
                }
            }
        }
        ItemDecl::Extended(e) => {
            let mut names = graph_names(&e.boundary)?;
            for f in &e.feathers {
                if !names.contains(&f.fiber) || !names.contains(&f.on) {
                    let missing = if names.contains(&f.fiber) { &f.on } else { &f.fiber };
                    return Err(unknown(missing));
                }
                if !names.insert(f.name.clone()) {
                    return Err(DslError::DuplicateName(f.name.clone()));
                }
            }
        }
        ItemDecl::Normalized(n) => {
            let names = graph_names(&n.boundary)?;
            for (v, _) in &n.delta {
                if !names.contains(v) {
                    return Err(unknown(v));
                }
            }
        }
        ItemDecl::Instance(i) => match doc.get(&i.schedule_of) {
            Some(ItemDecl::Normalized(_) | ItemDecl::Extended(_)) => {}
            Some(other) => {
                return Err(invalid(
                    name,
                    format!("`{}` is a {}, not a normalized graph", i.schedule_of, other.keyword()),
                ))
            }
            None => return Err(unknown(&i.schedule_of)),
        },
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const SAMPLE: &str = "
# jumping family
graph G {
  c0 w=0 role=fiber0; c1 w=0 role=section genus=0
  ; c2 w=-2; c3 w=-2;
  edges: c0-c1, c1-c2, c2-c3
}
extended E0 { boundary=G; fiber(c2) += feather f1 w=-1 on c2; fiber(c2) += feather f2 w=-1 on c3 }
extended ES { boundary=G; fiber(c2) += feather f1 w=-2 on c3; fiber(c2) += feather f2 w=-1 on c3; }
normalized N { boundary=G; delta: c2=1, c3=1 }
instance I { schedule_of=N; genus=0; params: c2=1, c2_f1=0, c3=5/2, c3_f1=-3 }
zigzag Z = [[0,0,(-2)_3]]
";

    #[test]
    fn zigzag_forms() {
        let d = parse("zigzag Z = [[0,0,-2,-3]]").unwrap();
        assert_eq!(d.zigzag("Z").unwrap().weights(), &[0, 0, -2, -3]);
        let d = parse("zigzag Z = [[0,0,(-2)_3]]").unwrap();
        assert_eq!(d.zigzag("Z").unwrap().weights(), &[0, 0, -2, -2, -2]);
    }

    #[test]
    fn trailing_comma_is_reported_at_the_comma() {
        assert_eq!(
            parse("zigzag Z = [[0,0,]]"),
            Err(DslError::SyntaxError {
                line: 1,
                col: 17,
                expected: "a weight after `,`".into()
            })
        );
    }

    #[test]
    fn sample_resolves() {
        let d = parse(SAMPLE).unwrap();
        let e0 = d.extended("E0").unwrap();
        let es = d.extended("ES").unwrap();
        assert_eq!(normalize(&e0).unwrap(), normalize(&es).unwrap());
        assert_eq!(d.normalized("N").unwrap(), normalize(&e0).unwrap());
        let inst = d.instance("I").unwrap().instantiate().unwrap();
        assert_eq!(normalize(&inst.extended).unwrap(), d.normalized("N").unwrap());
        let cat = normalize(&catalog::jumping_generic()).unwrap();
        assert_eq!(
            crate::canon::canonical_code(&cat.realized()),
            crate::canon::canonical_code(&d.normalized("N").unwrap().realized())
        );
    }

    #[test]
    fn print_round_trip() {
        let d = parse(SAMPLE).unwrap();
        let again = parse(&d.print()).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn normalized_text_reparses() {
        let d = normalize(&catalog::jumping_generic()).unwrap();
        let doc = parse(&normalized_text("N", &d)).unwrap();
        assert_eq!(doc.normalized("N").unwrap().realized(), d.realized());
    }

    #[test]
    fn reference_errors() {
        assert_eq!(
            parse("normalized N { boundary=G; delta: c2=1 }"),
            Err(DslError::UnknownReference("G".into()))
        );
        assert_eq!(
            parse("zigzag A = [[0]]\nzigzag A = [[1]]"),
            Err(DslError::DuplicateName("A".into()))
        );
        assert_eq!(
            parse("graph G { a w=0; edges: a-b }"),
            Err(DslError::UnknownReference("b".into()))
        );
    }

    #[test]
    fn syntax_error_positions() {
        let err = parse("graph G {\n  a w=0 colour=red\n}").unwrap_err();
        assert_eq!(
            err,
            DslError::SyntaxError {
                line: 2,
                col: 9,
                expected: "`w=`, `role=` or `genus=`".into()
            }
        );
        assert!(matches!(parse("zigzag Z = [[0,0"), Err(DslError::SyntaxError { .. })));
        assert!(matches!(parse("zigzag Z = [[0 @]]"), Err(DslError::SyntaxError { col: 16, .. })));
    }
}
