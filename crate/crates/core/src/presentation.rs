//! Blowup schedules that realize a normalized extended graph from its
//! one-skeleton, their parameter slots, and instantiation with rational
//! blowup centers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::extended::{contract_canonically, ExtendedError, ExtendedGraph, NormalizedExtendedGraph};
use crate::graph::{Role, Vertex, VertexId, WeightedGraph};
use crate::invariants::{rational_string, BaseCoordinate, CoordinatedGraph};
use crate::surgery::{raw_blow_up, BlowupSite};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("boundary has no section vertex")]
    NoSection,
    #[error("no extremal 0-vertex adjacent to the section")]
    NoExtremalZero,
    #[error("not realizable from its one-skeleton: {0}")]
    NotRealizable(String),
    #[error("reordering breaks step dependencies at step {0}")]
    OrderingConflict(usize),
    #[error("replayed schedule does not reproduce the target graph")]
    ReplayMismatch,
    #[error("parameter slot `{0}` is not assigned")]
    MissingParameter(String),
    #[error("unknown parameter slot `{0}`")]
    UnknownSlot(String),
    #[error("slot `{slot}` violates a distinctness condition: {detail}")]
    SlotViolation { slot: String, detail: String },
    #[error(transparent)]
    Extended(#[from] ExtendedError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// The star of the section: `v_1` at weight `-2g` with its neighbors at 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneSkeleton {
    pub section: VertexId,
    pub genus: u32,
    /// The extremal 0-vertices `C_{0i}`, by increasing id.
    pub full_fibers: Vec<VertexId>,
    /// The distinguished components `C_{2j}`, by increasing id.
    pub distinguished: Vec<VertexId>,
    pub graph: WeightedGraph,
}

impl OneSkeleton {
    pub fn a(&self) -> usize {
        self.full_fibers.len()
    }

    pub fn b(&self) -> usize {
        self.distinguished.len()
    }
}

pub fn one_skeleton(d: &NormalizedExtendedGraph, genus: u32) -> Result<OneSkeleton, PresentationError> {
    let section = d.section().ok_or(PresentationError::NoSection)?;
    let b = &d.boundary;
    let mut full_fibers = Vec::new();
    let mut distinguished = Vec::new();
    for nb in b.neighbors(section) {
        let v = b.vertex(nb).expect("neighbor");
        if v.role == Role::FiberZero && v.weight == 0 && b.degree(nb) == 1 {
            full_fibers.push(nb);
        } else {
            distinguished.push(nb);
        }
    }
    if full_fibers.is_empty() {
        return Err(PresentationError::NoExtremalZero);
    }
    let mut graph = WeightedGraph::new();
    let sv = b.vertex(section).expect("section");
    let mut s = Vertex::new(section, -2 * genus as i64, Role::Section).with_genus(genus);
    s.name = sv.name.clone();
    graph.add_vertex(s).expect("fresh");
    for &v in full_fibers.iter().chain(&distinguished) {
        let src = b.vertex(v).expect("neighbor");
        let mut x = Vertex::new(v, 0, src.role);
        x.name = src.name.clone();
        graph.add_vertex(x).expect("fresh");
        graph.add_edge(section, v).expect("present");
    }
    Ok(OneSkeleton {
        section,
        genus,
        full_fibers,
        distinguished,
        graph,
    })
}

/// The three kinds of creation steps: a feather (`A`), a boundary vertex at
/// a point of one component (`B1`) or at a crossing of two (`B2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StepType {
    A,
    B1,
    B2,
}

impl StepType {
    pub fn as_str(self) -> &'static str {
        match self {
            StepType::A => "A",
            StepType::B1 => "B1",
            StepType::B2 => "B2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepSite {
    Outer { target: VertexId },
    /// `(section side, far side)`.
    Inner { near: VertexId, far: VertexId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleStep {
    pub step_type: StepType,
    pub site: StepSite,
    pub created: VertexId,
    pub role: Role,
    pub name: Option<String>,
}

impl ScheduleStep {
    pub fn is_outer(&self) -> bool {
        matches!(self.site, StepSite::Outer { .. })
    }

    fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("v{}", self.created.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotKind {
    /// Position on the section of a skeleton leaf.
    Skeleton { vertex: VertexId },
    /// Center of an outer blowup (index into the steps).
    Outer { step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slot {
    pub name: String,
    pub kind: SlotKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupSchedule {
    pub skeleton: OneSkeleton,
    pub steps: Vec<ScheduleStep>,
    pub slots: Vec<Slot>,
    /// Section weight of the target; reached from `-2g` by elementary
    /// transformations at the full fibers, which do not affect the rest.
    pub target_section_weight: i64,
}

fn label_of(g: &WeightedGraph, v: VertexId) -> String {
    g.vertex(v).expect("vertex").label()
}

fn apply_combinatorial(g: &mut WeightedGraph, step: &ScheduleStep) -> Result<(), ()> {
    let site = match step.site {
        StepSite::Outer { target } => {
            if !g.contains(target) {
                return Err(());
            }
            BlowupSite::Vertex(target)
        }
        StepSite::Inner { near, far } => {
            if !g.has_edge(near, far) {
                return Err(());
            }
            BlowupSite::Edge(near, far)
        }
    };
    raw_blow_up(g, site, step.created, step.role, step.name.clone()).map_err(|_| ())
}

impl BlowupSchedule {
    /// Replays the steps on the skeleton and sets the section weight.
    pub fn replay(&self) -> Result<WeightedGraph, PresentationError> {
        let mut g = self.skeleton.graph.clone();
        for (i, s) in self.steps.iter().enumerate() {
            apply_combinatorial(&mut g, s).map_err(|_| PresentationError::OrderingConflict(i))?;
        }
        g.set_weight(self.skeleton.section, self.target_section_weight)
            .expect("section");
        Ok(g)
    }

    pub fn outer_steps(&self) -> usize {
        self.steps.iter().filter(|s| s.is_outer()).count()
    }

    /// Text form: header comments, then one surgery-transcript line per step.
    pub fn to_text(&self) -> String {
        let sk = &self.skeleton;
        let g = &sk.graph;
        let names = |vs: &[VertexId]| vs.iter().map(|&v| label_of(g, v)).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# skeleton section={} genus={} fiber0={} fibers={}",
            label_of(g, sk.section),
            sk.genus,
            names(&sk.full_fibers),
            names(&sk.distinguished)
        );
        let _ = writeln!(out, "# section-weight {}", self.target_section_weight);
        let slots: Vec<&str> = self.slots.iter().map(|s| s.name.as_str()).collect();
        let _ = writeln!(out, "# slots {}", slots.join(","));
        for s in &self.steps {
            match s.site {
                StepSite::Outer { target } => {
                    let _ = write!(
                        out,
                        "blowup-outer site={} created={} deltas={}:-1",
                        target.0, s.created.0, target.0
                    );
                }
                StepSite::Inner { near, far } => {
                    let (a, b) = (near.min(far), near.max(far));
                    let _ = write!(
                        out,
                        "blowup-inner site={}-{} created={} deltas={}:-1,{}:-1",
                        a.0, b.0, s.created.0, a.0, b.0
                    );
                }
            }
            let _ = writeln!(out, " # {} {} {}", s.step_type.as_str(), s.role, s.label());
        }
        out
    }
}

/// Derives a blowup schedule from the canonical contraction of `d`'s
/// realized graph, ordered so that every boundary vertex is followed by its
/// feathers, and verifies it by replay.
pub fn schedule_from(d: &NormalizedExtendedGraph, genus: u32) -> Result<BlowupSchedule, PresentationError> {
    let skeleton = one_skeleton(d, genus)?;
    let mut realized = d.realized();
    realized.set_genus(skeleton.section, genus)?;
    let e = ExtendedGraph::new(realized.clone())?;
    let transcript = match contract_canonically(&e) {
        Ok(t) => t,
        Err(ExtendedError::InvalidExtendedGraph { distinguished, failure }) => {
            return Err(PresentationError::NotRealizable(format!(
                "fiber of {}: {failure}",
                label_of(&realized, distinguished)
            )))
        }
        Err(other) => return Err(other.into()),
    };

    // Distance from the section decides which end of an inner step is near.
    let depth = bfs_depth(&realized, skeleton.section);
    let mut created: Vec<ScheduleStep> = Vec::new();
    for round in transcript.rounds.iter().rev() {
        for rec in round {
            let v = realized.vertex(rec.vertex).expect("contracted vertex");
            let (site, step_type) = match rec.neighbors[..] {
                [t] => (
                    StepSite::Outer { target: t },
                    if v.role == Role::Feather { StepType::A } else { StepType::B1 },
                ),
                [a, b] => {
                    let (near, far) = if depth[&a] <= depth[&b] { (a, b) } else { (b, a) };
                    (StepSite::Inner { near, far }, StepType::B2)
                }
                _ => {
                    return Err(PresentationError::NotRealizable(format!(
                        "{} has {} neighbors when contracted",
                        v.label(),
                        rec.neighbors.len()
                    )))
                }
            };
            created.push(ScheduleStep {
                step_type,
                site,
                created: v.id,
                role: v.role,
                name: v.name.clone(),
            });
        }
    }

    let skeleton_ids: BTreeSet<VertexId> = skeleton.graph.ids().collect();
    let feather_target = |s: &ScheduleStep| match s.site {
        StepSite::Outer { target } if s.step_type == StepType::A => Some(target),
        _ => None,
    };
    let mut steps: Vec<ScheduleStep> = created
        .iter()
        .filter(|s| feather_target(s).is_some_and(|t| skeleton_ids.contains(&t)))
        .cloned()
        .collect();
    for s in created.iter().filter(|s| s.step_type != StepType::A) {
        steps.push(s.clone());
        steps.extend(
            created
                .iter()
                .filter(|f| feather_target(f) == Some(s.created))
                .cloned(),
        );
    }
    if steps.len() != created.len() {
        return Err(PresentationError::OrderingConflict(steps.len()));
    }

    let mut slots: Vec<Slot> = skeleton
        .full_fibers
        .iter()
        .skip(1)
        .chain(&skeleton.distinguished)
        .map(|&v| Slot {
            name: label_of(&skeleton.graph, v),
            kind: SlotKind::Skeleton { vertex: v },
        })
        .collect();
    for (i, s) in steps.iter().enumerate() {
        if s.is_outer() {
            slots.push(Slot {
                name: s.label(),
                kind: SlotKind::Outer { step: i },
            });
        }
    }

    let schedule = BlowupSchedule {
        target_section_weight: realized.weight(skeleton.section).expect("section"),
        skeleton,
        steps,
        slots,
    };
    if schedule.replay()? != realized {
        return Err(PresentationError::ReplayMismatch);
    }
    Ok(schedule)
}

fn bfs_depth(g: &WeightedGraph, root: VertexId) -> BTreeMap<VertexId, usize> {
    let mut depth = BTreeMap::from([(root, 0)]);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if !depth.contains_key(&w) {
                depth.insert(w, depth[&v] + 1);
                queue.push_back(w);
            }
        }
    }
    depth
}

/// Dimension convention for the genus part of the parameter space.
pub fn genus_base_dimension(genus: u32) -> u64 {
    match genus {
        0 => 0,
        1 => 2,
        g => 4 * g as u64 - 2,
    }
}

/// `base(g) + (a + b - 1) + #outer steps`.
pub fn presentation_dimension(d: &NormalizedExtendedGraph, genus: u32) -> Result<u64, PresentationError> {
    let s = schedule_from(d, genus)?;
    Ok(schedule_dimension(&s))
}

pub fn schedule_dimension(s: &BlowupSchedule) -> u64 {
    genus_base_dimension(s.skeleton.genus)
        + (s.skeleton.a() + s.skeleton.b() - 1) as u64
        + s.outer_steps() as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationInstance {
    pub schedule: BlowupSchedule,
    pub params: BTreeMap<String, BigRational>,
}

impl PresentationInstance {
    pub fn instantiate(&self) -> Result<CoordinatedGraph, PresentationError> {
        instantiate(&self.schedule, &self.params)
    }

    /// Schedule text followed by a `params:` section.
    pub fn to_text(&self) -> String {
        let mut out = self.schedule.to_text();
        out.push_str("params:\n");
        for (k, v) in &self.params {
            let _ = writeln!(out, "{k}={}", rational_string(v));
        }
        out
    }
}

/// A point of a boundary component in its chart; `None` is `∞`.
type Coord = Option<BigRational>;

fn violation(slot: &str, detail: impl Into<String>) -> PresentationError {
    PresentationError::SlotViolation {
        slot: slot.to_string(),
        detail: detail.into(),
    }
}

/// Replays `s` with the centers given by `params`. Each created curve gets
/// a chart with `∞` at the curve it was born on (the section side for inner
/// steps, whose far side becomes `0`). A feather center may coincide with
/// the point of an earlier feather; the new curve is then inserted between
/// the component and that feather.
pub fn instantiate(
    s: &BlowupSchedule,
    params: &BTreeMap<String, BigRational>,
) -> Result<CoordinatedGraph, PresentationError> {
    for k in params.keys() {
        if !s.slots.iter().any(|sl| &sl.name == k) {
            return Err(PresentationError::UnknownSlot(k.clone()));
        }
    }
    let value = |name: &str| {
        params
            .get(name)
            .cloned()
            .ok_or_else(|| PresentationError::MissingParameter(name.to_string()))
    };

    let sk = &s.skeleton;
    let mut g = sk.graph.clone();
    let mut pos: BTreeMap<(VertexId, VertexId), Coord> = BTreeMap::new();
    let mut taken: Vec<(String, BigRational)> = Vec::new();
    for (i, &v) in sk.full_fibers.iter().chain(&sk.distinguished).enumerate() {
        let p = if i == 0 {
            BigRational::zero()
        } else {
            let name = label_of(&g, v);
            let p = value(&name)?;
            if let Some((other, _)) = taken.iter().find(|(_, q)| *q == p) {
                return Err(violation(&name, format!("coincides with {other} on the section")));
            }
            p
        };
        taken.push((label_of(&g, v), p.clone()));
        pos.insert((sk.section, v), Some(p));
        pos.insert((v, sk.section), None);
    }

    let mut base_points: BTreeMap<VertexId, BaseCoordinate> = BTreeMap::new();
    for step in &s.steps {
        let n = step.created;
        match step.site {
            StepSite::Outer { target } => {
                let name = step.label();
                let p = value(&name)?;
                let mut jumped = None;
                for x in g.neighbors(target) {
                    if pos.get(&(target, x)) == Some(&Some(p.clone())) {
                        if g.vertex(x).expect("neighbor").role.is_boundary() {
                            return Err(violation(
                                &name,
                                format!("center lies on boundary component {}", label_of(&g, x)),
                            ));
                        }
                        jumped = Some(x);
                    }
                }
                match jumped {
                    None => {
                        raw_blow_up(&mut g, BlowupSite::Vertex(target), n, step.role, step.name.clone())
                            .expect("target present");
                    }
                    Some(f) => {
                        raw_blow_up(&mut g, BlowupSite::Edge(target, f), n, step.role, step.name.clone())
                            .expect("edge present");
                        pos.remove(&(target, f));
                        pos.insert((n, f), Some(BigRational::zero()));
                    }
                }
                pos.insert((target, n), Some(p.clone()));
                pos.insert((n, target), None);
                if step.role == Role::Feather {
                    base_points.insert(
                        n,
                        BaseCoordinate {
                            mother: target,
                            point: p,
                        },
                    );
                }
            }
            StepSite::Inner { near, far } => {
                raw_blow_up(&mut g, BlowupSite::Edge(near, far), n, step.role, step.name.clone())
                    .map_err(|_| PresentationError::OrderingConflict(0))?;
                for (a, b) in [(near, far), (far, near)] {
                    if let Some(c) = pos.remove(&(a, b)) {
                        pos.insert((a, n), c);
                    }
                }
                pos.insert((n, near), None);
                pos.insert((n, far), Some(BigRational::zero()));
            }
        }
    }
    g.set_weight(sk.section, s.target_section_weight).expect("section");
    let extended = ExtendedGraph::new(g)?;
    Ok(CoordinatedGraph {
        extended,
        base_points,
    })
}
