//! Line-oriented transcript format.
//!
//! One step per line:
//!
//! ```text
//! blowup-inner site=3-5 created=7 deltas=3:-1,5:-1
//! blowup-outer site=3 created=7 deltas=3:-1
//! blowdown site=7 deltas=3:+1,5:+1
//! elem-inner site=2 toward=3 created=8 deltas=1:+1,3:-1
//! elem-outer site=0 created=8 deltas=1:+1
//! ```
//!
//! Blank lines and `#` comments are ignored. `destroyed` is implied by the kind.

use std::fmt::Write as _;

use super::{apply_step, StepKind, SurgeryError, SurgeryStep};
use crate::graph::{VertexId, WeightedGraph};

fn ids(v: &[VertexId]) -> String {
    v.iter().map(|i| i.0.to_string()).collect::<Vec<_>>().join(",")
}

fn deltas(d: &[(VertexId, i64)]) -> String {
    d.iter()
        .map(|(v, x)| format!("{}:{:+}", v.0, x))
        .collect::<Vec<_>>()
        .join(",")
}

pub fn write_transcript(steps: &[SurgeryStep]) -> String {
    let mut out = String::new();
    for s in steps {
        let head = match s.kind {
            StepKind::InnerBlowup { edge: (a, b) } => format!("blowup-inner site={}-{}", a.0, b.0),
            StepKind::OuterBlowup { vertex } => format!("blowup-outer site={}", vertex.0),
            StepKind::Blowdown { vertex } => format!("blowdown site={}", vertex.0),
            StepKind::ElemInner { zero, toward } => {
                format!("elem-inner site={} toward={}", zero.0, toward.0)
            }
            StepKind::ElemOuter { zero } => format!("elem-outer site={}", zero.0),
        };
        out.push_str(&head);
        if !s.created.is_empty() {
            let _ = write!(out, " created={}", ids(&s.created));
        }
        let _ = writeln!(out, " deltas={}", deltas(&s.deltas));
    }
    out
}

fn syntax(line: usize, detail: impl Into<String>) -> SurgeryError {
    SurgeryError::TranscriptSyntax {
        line,
        detail: detail.into(),
    }
}

fn parse_id(line: usize, s: &str) -> Result<VertexId, SurgeryError> {
    s.parse::<u32>()
        .map(VertexId)
        .map_err(|_| syntax(line, format!("bad vertex id `{s}`")))
}

pub fn parse_transcript(text: &str) -> Result<Vec<SurgeryStep>, SurgeryError> {
    let mut steps = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let kind_word = parts.next().expect("non-empty");
        let mut site = None;
        let mut toward = None;
        let mut created = Vec::new();
        let mut delta_list = Vec::new();
        for field in parts {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| syntax(line, format!("expected key=value, got `{field}`")))?;
            match key {
                "site" => site = Some(value.to_string()),
                "toward" => toward = Some(parse_id(line, value)?),
                "created" => {
                    for p in value.split(',').filter(|p| !p.is_empty()) {
                        created.push(parse_id(line, p)?);
                    }
                }
                "deltas" => {
                    for p in value.split(',').filter(|p| !p.is_empty()) {
                        let (v, d) = p
                            .split_once(':')
                            .ok_or_else(|| syntax(line, format!("bad delta `{p}`")))?;
                        let d: i64 = d
                            .trim_start_matches('+')
                            .parse()
                            .map_err(|_| syntax(line, format!("bad delta `{p}`")))?;
                        delta_list.push((parse_id(line, v)?, d));
                    }
                }
                other => return Err(syntax(line, format!("unknown field `{other}`"))),
            }
        }
        let site = site.ok_or_else(|| syntax(line, "missing site"))?;
        let single = || parse_id(line, &site);
        let (kind, destroyed) = match kind_word {
            "blowup-inner" => {
                let (a, b) = site
                    .split_once('-')
                    .ok_or_else(|| syntax(line, "inner blowup site must be an edge a-b"))?;
                (
                    StepKind::InnerBlowup {
                        edge: (parse_id(line, a)?, parse_id(line, b)?),
                    },
                    vec![],
                )
            }
            "blowup-outer" => (StepKind::OuterBlowup { vertex: single()? }, vec![]),
            "blowdown" => {
                let v = single()?;
                (StepKind::Blowdown { vertex: v }, vec![v])
            }
            "elem-inner" => {
                let v = single()?;
                let t = toward.ok_or_else(|| syntax(line, "elem-inner needs toward="))?;
                (StepKind::ElemInner { zero: v, toward: t }, vec![v])
            }
            "elem-outer" => {
                let v = single()?;
                (StepKind::ElemOuter { zero: v }, vec![v])
            }
            other => return Err(syntax(line, format!("unknown step kind `{other}`"))),
        };
        steps.push(SurgeryStep {
            kind,
            created,
            destroyed,
            deltas: delta_list,
        });
    }
    Ok(steps)
}

/// Folds `steps` over `initial`, checking each step's recorded provenance.
pub fn replay_transcript(initial: &WeightedGraph, steps: &[SurgeryStep]) -> Result<WeightedGraph, SurgeryError> {
    let mut g = initial.clone();
    for (index, step) in steps.iter().enumerate() {
        g = apply_step(&g, step).map_err(|e| match e {
            SurgeryError::ReplayMismatch { detail, .. } => SurgeryError::ReplayMismatch { index, detail },
            other => other,
        })?;
    }
    Ok(g)
}
