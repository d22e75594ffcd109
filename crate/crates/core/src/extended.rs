//! Extended graphs: the boundary together with its degenerate fibers and
//! feathers, the canonical contraction of the fibers, mother components and
//! normalization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{GraphError, Role, Vertex, VertexId, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtendedError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("no vertex with role section")]
    NoSection,
    #[error("more than one section vertex ({0} and {1})")]
    MultipleSections(VertexId, VertexId),
    #[error("fiber0 vertex {0} must be a 0-leaf adjacent to the section")]
    FiberZeroMisplaced(VertexId),
    #[error("feather vertex {0} is adjacent to the section")]
    FeatherOnSection(VertexId),
    #[error("feather containing {0} is not a chain attached to the boundary by one edge")]
    FeatherNotChain(VertexId),
    #[error("boundary vertices do not span a connected subtree")]
    BoundaryDisconnected,
    #[error("invalid extended graph: fiber of {distinguished}: {failure}")]
    InvalidExtendedGraph {
        distinguished: VertexId,
        failure: FiberFailure,
    },
    #[error("feather {0} is contracted with no boundary neighbor")]
    NoBoundaryNeighbor(VertexId),
    #[error("feather {0} is contracted with two boundary neighbors")]
    AmbiguousMother(VertexId),
}

/// A degenerate fiber: the component of `graph - section` through a
/// distinguished component `C_2j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub distinguished: VertexId,
    pub members: BTreeSet<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedGraph {
    graph: WeightedGraph,
    section: VertexId,
    full_fibers: Vec<VertexId>,
    fibers: Vec<Fiber>,
}

impl ExtendedGraph {
    /// Checks the shape of `graph` and derives section, full fibers and
    /// degenerate fibers from the vertex roles.
    pub fn new(graph: WeightedGraph) -> Result<Self, ExtendedError> {
        graph.require_tree()?;
        let mut section = None;
        for v in graph.vertices().filter(|v| v.role == Role::Section) {
            if let Some(s) = section {
                return Err(ExtendedError::MultipleSections(s, v.id));
            }
            section = Some(v.id);
        }
        let section = section.ok_or(ExtendedError::NoSection)?;

        let mut full_fibers = Vec::new();
        for v in graph.vertices().filter(|v| v.role == Role::FiberZero) {
            let nbrs = graph.neighbors(v.id);
            if v.weight != 0 || nbrs != [section] {
                return Err(ExtendedError::FiberZeroMisplaced(v.id));
            }
            full_fibers.push(v.id);
        }

        let boundary: BTreeSet<VertexId> = graph
            .vertices()
            .filter(|v| v.role.is_boundary())
            .map(|v| v.id)
            .collect();
        if graph.components_within(&boundary).len() != 1 {
            return Err(ExtendedError::BoundaryDisconnected);
        }
        let feathers: BTreeSet<VertexId> = graph.ids().filter(|v| !boundary.contains(v)).collect();
        for comp in graph.components_within(&feathers) {
            let first = *comp.iter().next().expect("non-empty");
            let path = graph.induced(&comp).path_order().is_some();
            let bridges: usize = comp
                .iter()
                .map(|&f| {
                    graph
                        .neighbors(f)
                        .iter()
                        .filter(|w| boundary.contains(w))
                        .count()
                })
                .sum();
            if !path || bridges != 1 {
                return Err(ExtendedError::FeatherNotChain(first));
            }
        }

        let mut fibers = Vec::new();
        for nb in graph.neighbors(section) {
            match graph.vertex(nb).expect("neighbor").role {
                Role::FiberZero => {}
                Role::Feather => return Err(ExtendedError::FeatherOnSection(nb)),
                _ => {}
            }
        }
        let rest: BTreeSet<VertexId> = graph.ids().filter(|&v| v != section).collect();
        for comp in graph.components_within(&rest) {
            let distinguished = graph
                .neighbors(section)
                .into_iter()
                .find(|v| comp.contains(v))
                .expect("tree component touches the section");
            if graph.vertex(distinguished).expect("vertex").role == Role::FiberZero {
                continue;
            }
            fibers.push(Fiber {
                distinguished,
                members: comp,
            });
        }
        fibers.sort_by_key(|f| f.distinguished);
        Ok(ExtendedGraph {
            graph,
            section,
            full_fibers,
            fibers,
        })
    }

    /// Attaches feather chains to a boundary graph. Each feather is
    /// `(name, weight, attach_to)`, where `attach_to` may be an earlier feather.
    pub fn from_boundary(
        boundary: &WeightedGraph,
        feathers: &[(Option<String>, i64, VertexId)],
    ) -> Result<Self, ExtendedError> {
        let mut g = boundary.clone();
        for (name, weight, on) in feathers {
            let id = g.add_fresh(*weight, Role::Feather);
            g.set_name(id, name.clone())?;
            g.add_edge(*on, id)?;
        }
        ExtendedGraph::new(g)
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn into_graph(self) -> WeightedGraph {
        self.graph
    }

    pub fn section(&self) -> VertexId {
        self.section
    }

    pub fn genus(&self) -> u32 {
        self.graph.vertex(self.section).expect("section").genus
    }

    pub fn full_fibers(&self) -> &[VertexId] {
        &self.full_fibers
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    pub fn feathers(&self) -> Vec<VertexId> {
        self.graph
            .vertices()
            .filter(|v| v.role == Role::Feather)
            .map(|v| v.id)
            .collect()
    }

    /// The boundary subgraph `Γ`. Identifiers are preserved; fresh ids
    /// continue after the largest boundary id.
    pub fn boundary(&self) -> WeightedGraph {
        let keep: BTreeSet<VertexId> = self
            .graph
            .vertices()
            .filter(|v| v.role.is_boundary())
            .map(|v| v.id)
            .collect();
        let mut g = self.graph.induced(&keep);
        g.compact_fresh_ids();
        g
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberFailure {
    /// No contractible vertex while more than the distinguished one remains.
    Stalled { remaining: usize },
    /// Two adjacent non-distinguished `(-1)`-vertices.
    AdjacentMinusOnes(VertexId, VertexId),
    /// The fiber reduced to its distinguished vertex with this nonzero weight.
    FinalWeight(i64),
}

impl fmt::Display for FiberFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberFailure::Stalled { remaining } => {
                write!(f, "contraction stalls with {remaining} vertices left")
            }
            FiberFailure::AdjacentMinusOnes(a, b) => {
                write!(f, "adjacent (-1)-vertices {a} and {b}")
            }
            FiberFailure::FinalWeight(w) => {
                write!(f, "distinguished vertex ends with weight {w}")
            }
        }
    }
}

/// One blowdown inside a contraction round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionRecord {
    pub vertex: VertexId,
    /// Neighbors at contraction time, sorted.
    pub neighbors: Vec<VertexId>,
    /// The neighbor the vertex is contracted onto, when it has only one.
    pub onto: Option<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberOutcome {
    pub distinguished: VertexId,
    pub size: usize,
    pub rounds: Vec<Vec<ContractionRecord>>,
    /// Multiplicity of each member in the fiber; empty when contraction failed.
    pub multiplicities: BTreeMap<VertexId, u64>,
    pub failure: Option<FiberFailure>,
}

impl FiberOutcome {
    pub fn is_valid(&self) -> bool {
        self.failure.is_none()
    }

    pub fn blowdowns(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberReport {
    pub fibers: Vec<FiberOutcome>,
}

impl FiberReport {
    pub fn is_valid(&self) -> bool {
        self.fibers.iter().all(FiberOutcome::is_valid)
    }

    pub fn first_failure(&self) -> Option<(VertexId, &FiberFailure)> {
        self.fibers
            .iter()
            .find_map(|f| f.failure.as_ref().map(|x| (f.distinguished, x)))
    }
}

fn contract_fiber(g: &WeightedGraph, fiber: &Fiber) -> FiberOutcome {
    let dist = fiber.distinguished;
    let mut h = g.induced(&fiber.members);
    let mut rounds: Vec<Vec<ContractionRecord>> = Vec::new();
    let failure = loop {
        let minus_ones: Vec<VertexId> = h
            .vertices()
            .filter(|v| v.id != dist && v.weight == -1)
            .map(|v| v.id)
            .collect();
        if let Some((a, b)) = minus_ones.iter().find_map(|&a| {
            h.neighbors(a)
                .into_iter()
                .find(|b| *b != dist && h.weight(*b) == Some(-1))
                .map(|b| (a.min(b), a.max(b)))
        }) {
            break Some(FiberFailure::AdjacentMinusOnes(a, b));
        }
        let candidates: Vec<VertexId> = minus_ones
            .into_iter()
            .filter(|&v| h.degree(v) <= 2 && h.vertex(v).expect("v").genus == 0)
            .collect();
        if candidates.is_empty() {
            if h.len() > 1 {
                break Some(FiberFailure::Stalled { remaining: h.len() });
            }
            let w = h.weight(dist).expect("distinguished");
            break (w != 0).then_some(FiberFailure::FinalWeight(w));
        }
        let mut round = Vec::new();
        for v in candidates {
            let neighbors = h.neighbors(v);
            let onto = (neighbors.len() == 1).then(|| neighbors[0]);
            crate::surgery::raw_blow_down(&mut h, v).expect("contractible");
            round.push(ContractionRecord {
                vertex: v,
                neighbors,
                onto,
            });
        }
        rounds.push(round);
    };
    let mut multiplicities = BTreeMap::new();
    if failure.is_none() {
        multiplicities.insert(dist, 1u64);
        for rec in rounds.iter().rev().flatten() {
            let m = rec.neighbors.iter().map(|w| multiplicities[w]).sum();
            multiplicities.insert(rec.vertex, m);
        }
    }
    FiberOutcome {
        distinguished: dist,
        size: fiber.members.len(),
        rounds,
        multiplicities,
        failure,
    }
}

/// Runs the canonical contraction on every fiber and reports the outcome.
pub fn validate(e: &ExtendedGraph) -> FiberReport {
    FiberReport {
        fibers: e.fibers.iter().map(|f| contract_fiber(&e.graph, f)).collect(),
    }
}

/// Rounds of simultaneous blowdowns across all fibers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionTranscript {
    pub rounds: Vec<Vec<ContractionRecord>>,
}

impl ContractionTranscript {
    pub fn round_sets(&self) -> Vec<Vec<VertexId>> {
        self.rounds
            .iter()
            .map(|r| r.iter().map(|c| c.vertex).collect())
            .collect()
    }

    pub fn blowdowns(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }
}

pub fn contract_canonically(e: &ExtendedGraph) -> Result<ContractionTranscript, ExtendedError> {
    let report = validate(e);
    if let Some((distinguished, failure)) = report.first_failure() {
        return Err(ExtendedError::InvalidExtendedGraph {
            distinguished,
            failure: failure.clone(),
        });
    }
    let depth = report.fibers.iter().map(|f| f.rounds.len()).max().unwrap_or(0);
    let mut rounds = vec![Vec::new(); depth];
    for f in report.fibers {
        for (i, r) in f.rounds.into_iter().enumerate() {
            rounds[i].extend(r);
        }
    }
    for r in &mut rounds {
        r.sort_by_key(|c| c.vertex);
    }
    Ok(ContractionTranscript { rounds })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKind {
    /// Two mother components inside the boundary.
    Star,
    Plus,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::Star => "star",
            ComponentKind::Plus => "plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatherMother {
    pub mother: VertexId,
    /// Feathers with the same mother share a class iff they are born at the
    /// same point of it.
    pub base_point_class: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotherAssignment {
    pub feathers: BTreeMap<VertexId, FeatherMother>,
    pub kinds: BTreeMap<VertexId, ComponentKind>,
}

impl MotherAssignment {
    pub fn delta(&self) -> BTreeMap<VertexId, u32> {
        let mut d = BTreeMap::new();
        for fm in self.feathers.values() {
            *d.entry(fm.mother).or_insert(0) += 1;
        }
        d
    }
}

/// Points on boundary components: `(component, incident vertex)` to a point id.
type PointIds = BTreeMap<(VertexId, VertexId), u32>;

pub fn mother_map(e: &ExtendedGraph) -> Result<MotherAssignment, ExtendedError> {
    let transcript = contract_canonically(e)?;
    let g = &e.graph;
    let is_boundary = |v: VertexId| g.vertex(v).expect("vertex").role.is_boundary();

    let mut points: PointIds = BTreeMap::new();
    let mut next_point = 0u32;
    for &(a, b) in g.edges() {
        for (c, x) in [(a, b), (b, a)] {
            if is_boundary(c) {
                points.insert((c, x), next_point);
                next_point += 1;
            }
        }
    }

    let mut raw: BTreeMap<VertexId, (VertexId, u32)> = BTreeMap::new();
    let mut kinds: BTreeMap<VertexId, ComponentKind> = g
        .vertices()
        .filter(|v| v.role.is_boundary())
        .map(|v| (v.id, ComponentKind::Plus))
        .collect();
    for round in &transcript.rounds {
        for rec in round {
            let v = rec.vertex;
            let bnbrs: Vec<VertexId> = rec.neighbors.iter().copied().filter(|&w| is_boundary(w)).collect();
            if is_boundary(v) {
                if bnbrs.len() == 2 {
                    kinds.insert(v, ComponentKind::Star);
                }
            } else {
                match bnbrs.as_slice() {
                    [] => return Err(ExtendedError::NoBoundaryNeighbor(v)),
                    [m] => {
                        raw.insert(v, (*m, points[&(*m, v)]));
                    }
                    _ => return Err(ExtendedError::AmbiguousMother(v)),
                }
            }
            if let [a, b] = rec.neighbors[..] {
                if let Some(&p) = points.get(&(a, v)) {
                    points.insert((a, b), p);
                }
                if let Some(&p) = points.get(&(b, v)) {
                    points.insert((b, a), p);
                }
            }
        }
    }

    let classes: BTreeSet<(VertexId, u32)> = raw.values().copied().collect();
    let class_index: BTreeMap<(VertexId, u32), u32> = classes
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i as u32))
        .collect();
    let feathers = raw
        .into_iter()
        .map(|(f, key)| {
            (
                f,
                FeatherMother {
                    mother: key.0,
                    base_point_class: class_index[&key],
                },
            )
        })
        .collect();
    Ok(MotherAssignment { feathers, kinds })
}

/// The boundary `Γ` plus, for each component `C`, the number `δ_C` of
/// feathers with mother `C` (only positive entries are stored).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedExtendedGraph {
    pub boundary: WeightedGraph,
    pub delta: BTreeMap<VertexId, u32>,
}

impl NormalizedExtendedGraph {
    pub fn new(boundary: WeightedGraph, delta: BTreeMap<VertexId, u32>) -> Result<Self, GraphError> {
        for &c in delta.keys() {
            if !boundary.contains(c) {
                return Err(GraphError::MissingVertex(c));
            }
        }
        let delta = delta.into_iter().filter(|&(_, d)| d > 0).collect();
        Ok(NormalizedExtendedGraph { boundary, delta })
    }

    pub fn delta_of(&self, c: VertexId) -> u32 {
        self.delta.get(&c).copied().unwrap_or(0)
    }

    pub fn feather_count(&self) -> u32 {
        self.delta.values().sum()
    }

    /// Attaches `δ_C` extremal `(-1)`-leaves to each `C`, in increasing order
    /// of `C`, with fresh identifiers.
    pub fn realized(&self) -> WeightedGraph {
        let mut g = self.boundary.clone();
        for (&c, &d) in &self.delta {
            let base = g.vertex(c).expect("delta key").label();
            for k in 1..=d {
                let id = g.peek_fresh_id();
                let v = Vertex::new(id, -1, Role::Feather).named(format!("{base}_f{k}"));
                g.add_vertex(v).expect("fresh id");
                g.add_edge(c, id).expect("both present");
            }
        }
        g
    }

    pub fn realized_extended(&self) -> Result<ExtendedGraph, ExtendedError> {
        ExtendedGraph::new(self.realized())
    }

    pub fn section(&self) -> Option<VertexId> {
        self.boundary
            .vertices()
            .find(|v| v.role == Role::Section)
            .map(|v| v.id)
    }
}

pub fn normalize(e: &ExtendedGraph) -> Result<NormalizedExtendedGraph, ExtendedError> {
    let mothers = mother_map(e)?;
    Ok(NormalizedExtendedGraph {
        boundary: e.boundary(),
        delta: mothers.delta(),
    })
}
