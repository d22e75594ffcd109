//! Birational surgery on weighted trees: blowups, blowdowns and elementary
//! transformations, plus zigzag reversion, standardization and a bounded
//! breadth-first oracle over the rewrite system.

mod search;
mod transcript;

pub use search::{confluence_oracle, standardize, standardize_with, OracleResult, SearchBudget};
pub use transcript::{parse_transcript, replay_transcript, write_transcript};

use thiserror::Error;

use crate::chain::Zigzag;
use crate::graph::{GraphError, Role, VertexId, WeightedGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("graph is not a tree")]
    NotATree,
    #[error("site {0} does not exist")]
    SiteMissing(String),
    #[error("vertex {vertex} has weight {weight}, expected -1")]
    NotMinusOne { vertex: VertexId, weight: i64 },
    #[error("vertex {vertex} has degree {degree} > 2")]
    DegreeTooHigh { vertex: VertexId, degree: usize },
    #[error("vertex {vertex} has genus {genus} and cannot be contracted")]
    NonRational { vertex: VertexId, genus: u32 },
    #[error("vertex {vertex} has weight {weight}, expected 0")]
    NotZeroVertex { vertex: VertexId, weight: i64 },
    #[error("vertex {vertex} has degree {degree}, not valid for this elementary transformation")]
    WrongDegree { vertex: VertexId, degree: usize },
    #[error("zigzag {0} is not of the form [[0,0,w_2,...,w_n]] with w_j <= -2, nor [[(0)_i]]")]
    NotReversible(Zigzag),
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(SearchBudget),
    #[error("replay mismatch at step {index}: {detail}")]
    ReplayMismatch { index: usize, detail: String },
    #[error("transcript line {line}: {detail}")]
    TranscriptSyntax { line: usize, detail: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Where a blowup is centered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlowupSite {
    /// The intersection point of two adjacent components.
    Edge(VertexId, VertexId),
    /// A general point of one component.
    Vertex(VertexId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemDirection {
    /// Inner transformation: blow up the edge from the zero vertex to this neighbor.
    Toward(VertexId),
    /// Outer transformation at a zero vertex of degree at most one.
    Outer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    InnerBlowup { edge: (VertexId, VertexId) },
    OuterBlowup { vertex: VertexId },
    Blowdown { vertex: VertexId },
    ElemInner { zero: VertexId, toward: VertexId },
    ElemOuter { zero: VertexId },
}

/// One surgery step with its provenance. Replaying `kind` on the pre-graph
/// creates exactly `created`, removes `destroyed` and changes the weights of
/// the surviving old vertices by `deltas`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryStep {
    pub kind: StepKind,
    pub created: Vec<VertexId>,
    pub destroyed: Vec<VertexId>,
    pub deltas: Vec<(VertexId, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryTranscript {
    pub initial: WeightedGraph,
    pub steps: Vec<SurgeryStep>,
    pub final_graph: WeightedGraph,
}

impl SurgeryTranscript {
    pub fn empty(g: WeightedGraph) -> Self {
        SurgeryTranscript {
            initial: g.clone(),
            steps: Vec::new(),
            final_graph: g,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-applies every step to `initial` and checks the result against `final_graph`.
    pub fn verify(&self) -> Result<(), SurgeryError> {
        let out = replay_transcript(&self.initial, &self.steps)?;
        if out != self.final_graph {
            return Err(SurgeryError::ReplayMismatch {
                index: self.steps.len(),
                detail: "final graph differs".into(),
            });
        }
        Ok(())
    }
}

fn missing(v: VertexId) -> SurgeryError {
    SurgeryError::SiteMissing(v.to_string())
}

// Unchecked primitives: callers guarantee a tree and existing sites.

pub(crate) fn raw_blow_up(
    g: &mut WeightedGraph,
    site: BlowupSite,
    new_id: VertexId,
    role: Role,
    name: Option<String>,
) -> Result<(), SurgeryError> {
    let mut vertex = crate::graph::Vertex::new(new_id, -1, role);
    vertex.name = name;
    match site {
        BlowupSite::Edge(u, v) => {
            g.remove_edge(u, v)?;
            g.add_vertex(vertex)?;
            g.add_weight(u, -1)?;
            g.add_weight(v, -1)?;
            g.add_edge(u, new_id)?;
            g.add_edge(new_id, v)?;
        }
        BlowupSite::Vertex(u) => {
            g.add_vertex(vertex)?;
            g.add_weight(u, -1)?;
            g.add_edge(u, new_id)?;
        }
    }
    Ok(())
}

pub(crate) fn raw_blow_down(g: &mut WeightedGraph, v: VertexId) -> Result<Vec<VertexId>, SurgeryError> {
    let nbrs = g.neighbors(v);
    g.remove_vertex(v)?;
    for &w in &nbrs {
        g.add_weight(w, 1)?;
    }
    if let [a, b] = nbrs[..] {
        g.add_edge(a, b)?;
    }
    Ok(nbrs)
}

fn check_contractible(g: &WeightedGraph, v: VertexId) -> Result<(), SurgeryError> {
    let vx = g.vertex(v).ok_or_else(|| missing(v))?;
    if vx.weight != -1 {
        return Err(SurgeryError::NotMinusOne {
            vertex: v,
            weight: vx.weight,
        });
    }
    if vx.genus > 0 {
        return Err(SurgeryError::NonRational {
            vertex: v,
            genus: vx.genus,
        });
    }
    let degree = g.degree(v);
    if degree > 2 {
        return Err(SurgeryError::DegreeTooHigh { vertex: v, degree });
    }
    Ok(())
}

fn require_tree(g: &WeightedGraph) -> Result<(), SurgeryError> {
    if g.is_tree() {
        Ok(())
    } else {
        Err(SurgeryError::NotATree)
    }
}

/// Blows up a point of `g`. The new `(-1)`-vertex gets role `Boundary`.
pub fn blow_up(g: &WeightedGraph, site: BlowupSite) -> Result<(WeightedGraph, SurgeryStep), SurgeryError> {
    blow_up_as(g, site, Role::Boundary)
}

pub fn blow_up_as(
    g: &WeightedGraph,
    site: BlowupSite,
    role: Role,
) -> Result<(WeightedGraph, SurgeryStep), SurgeryError> {
    require_tree(g)?;
    let (kind, deltas) = match site {
        BlowupSite::Edge(u, v) => {
            if !g.has_edge(u, v) {
                return Err(SurgeryError::SiteMissing(format!("{u}-{v}")));
            }
            let (a, b) = if u <= v { (u, v) } else { (v, u) };
            (StepKind::InnerBlowup { edge: (a, b) }, vec![(a, -1), (b, -1)])
        }
        BlowupSite::Vertex(u) => {
            if !g.contains(u) {
                return Err(missing(u));
            }
            (StepKind::OuterBlowup { vertex: u }, vec![(u, -1)])
        }
    };
    let mut out = g.clone();
    let id = out.peek_fresh_id();
    raw_blow_up(&mut out, site, id, role, None)?;
    Ok((
        out,
        SurgeryStep {
            kind,
            created: vec![id],
            destroyed: vec![],
            deltas,
        },
    ))
}

/// Contracts a `(-1)`-vertex of degree at most two.
pub fn blow_down(g: &WeightedGraph, v: VertexId) -> Result<(WeightedGraph, SurgeryStep), SurgeryError> {
    require_tree(g)?;
    check_contractible(g, v)?;
    let mut out = g.clone();
    let nbrs = raw_blow_down(&mut out, v)?;
    Ok((
        out,
        SurgeryStep {
            kind: StepKind::Blowdown { vertex: v },
            created: vec![],
            destroyed: vec![v],
            deltas: nbrs.into_iter().map(|w| (w, 1)).collect(),
        },
    ))
}

/// Blowup next to a 0-vertex followed by contraction of that vertex's image.
/// The new 0-vertex inherits the role and name of the contracted one.
pub fn elementary_transform(
    g: &WeightedGraph,
    zero: VertexId,
    direction: ElemDirection,
) -> Result<(WeightedGraph, SurgeryStep), SurgeryError> {
    require_tree(g)?;
    elementary_unchecked(g, zero, direction, None)
}

pub(crate) fn elementary_unchecked(
    g: &WeightedGraph,
    zero: VertexId,
    direction: ElemDirection,
    forced_id: Option<VertexId>,
) -> Result<(WeightedGraph, SurgeryStep), SurgeryError> {
    let zx = g.vertex(zero).ok_or_else(|| missing(zero))?;
    if zx.weight != 0 {
        return Err(SurgeryError::NotZeroVertex {
            vertex: zero,
            weight: zx.weight,
        });
    }
    if zx.genus > 0 {
        return Err(SurgeryError::NonRational {
            vertex: zero,
            genus: zx.genus,
        });
    }
    let degree = g.degree(zero);
    let nbrs = g.neighbors(zero);
    let (site, kind) = match direction {
        ElemDirection::Toward(t) => {
            if degree != 2 {
                return Err(SurgeryError::WrongDegree { vertex: zero, degree });
            }
            if !nbrs.contains(&t) {
                return Err(SurgeryError::SiteMissing(format!("{zero}-{t}")));
            }
            (BlowupSite::Edge(zero, t), StepKind::ElemInner { zero, toward: t })
        }
        ElemDirection::Outer => {
            if degree > 1 {
                return Err(SurgeryError::WrongDegree { vertex: zero, degree });
            }
            (BlowupSite::Vertex(zero), StepKind::ElemOuter { zero })
        }
    };
    let mut out = g.clone();
    let id = forced_id.unwrap_or_else(|| out.peek_fresh_id());
    raw_blow_up(&mut out, site, id, zx.role, zx.name.clone())?;
    raw_blow_down(&mut out, zero)?;
    let mut deltas: Vec<(VertexId, i64)> = Vec::new();
    for w in nbrs {
        let before = g.weight(w).expect("neighbor");
        let after = out.weight(w).expect("surviving neighbor");
        if after != before {
            deltas.push((w, after - before));
        }
    }
    Ok((
        out,
        SurgeryStep {
            kind,
            created: vec![id],
            destroyed: vec![zero],
            deltas,
        },
    ))
}

/// Re-applies `step` to `g`, reusing its recorded identifiers, and checks
/// that the recorded provenance matches.
pub fn apply_step(g: &WeightedGraph, step: &SurgeryStep) -> Result<WeightedGraph, SurgeryError> {
    let mismatch = |detail: String| SurgeryError::ReplayMismatch { index: 0, detail };
    let (out, derived) = match step.kind {
        StepKind::InnerBlowup { edge: (u, v) } | StepKind::OuterBlowup { vertex: u @ v } => {
            let id = *step
                .created
                .first()
                .ok_or_else(|| mismatch("blowup without created vertex".into()))?;
            let site = match step.kind {
                StepKind::InnerBlowup { .. } => {
                    if !g.has_edge(u, v) {
                        return Err(SurgeryError::SiteMissing(format!("{u}-{v}")));
                    }
                    BlowupSite::Edge(u, v)
                }
                _ => {
                    if !g.contains(u) {
                        return Err(missing(u));
                    }
                    BlowupSite::Vertex(u)
                }
            };
            let mut out = g.clone();
            raw_blow_up(&mut out, site, id, Role::Boundary, None)?;
            let deltas = match site {
                BlowupSite::Edge(a, b) => vec![(a, -1), (b, -1)],
                BlowupSite::Vertex(a) => vec![(a, -1)],
            };
            let derived = SurgeryStep {
                kind: step.kind,
                created: vec![id],
                destroyed: vec![],
                deltas,
            };
            (out, derived)
        }
        StepKind::Blowdown { vertex } => blow_down(g, vertex)?,
        StepKind::ElemInner { zero, toward } => {
            let id = step.created.first().copied();
            elementary_unchecked(g, zero, ElemDirection::Toward(toward), id)?
        }
        StepKind::ElemOuter { zero } => {
            let id = step.created.first().copied();
            elementary_unchecked(g, zero, ElemDirection::Outer, id)?
        }
    };
    let norm = |s: &SurgeryStep| {
        let mut d = s.deltas.clone();
        d.sort();
        (s.created.clone(), s.destroyed.clone(), d)
    };
    if norm(&derived) != norm(step) {
        return Err(mismatch(format!(
            "recorded provenance {:?} differs from replay {:?}",
            norm(step),
            norm(&derived)
        )));
    }
    Ok(out)
}

/// Moves the zero pair of `[[0,0,w_2,...,w_n]]` to the far end by inner
/// elementary transformations, yielding `[[0,0,w_n,...,w_2]]`.
pub fn reverse(z: &Zigzag) -> Result<(Zigzag, SurgeryTranscript), SurgeryError> {
    let ws = z.weights();
    let g = z.to_graph();
    if ws.len() <= 3 && ws.iter().all(|&w| w == 0) {
        return Ok((z.clone(), SurgeryTranscript::empty(g)));
    }
    if !(ws.len() >= 3 && ws[0] == 0 && ws[1] == 0 && ws[2..].iter().all(|&w| w <= -2)) {
        return Err(SurgeryError::NotReversible(z.clone()));
    }
    let mut order = g.path_order().expect("chain");
    let mut cur = g.clone();
    let mut steps = Vec::new();
    for k in 0..ws.len() - 2 {
        let w = cur.weight(order[k + 2]).expect("chain vertex");
        for _ in 0..(-w) {
            let (next, step) =
                elementary_unchecked(&cur, order[k + 1], ElemDirection::Toward(order[k]), None)?;
            order[k + 1] = step.created[0];
            steps.push(step);
            cur = next;
        }
    }
    let mut reversed: Vec<i64> = order.iter().map(|&v| cur.weight(v).expect("vertex")).collect();
    reversed.reverse();
    let transcript = SurgeryTranscript {
        initial: g,
        steps,
        final_graph: cur,
    };
    Ok((Zigzag::new(reversed).expect("non-empty"), transcript))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::canonical_code;
    use proptest::prelude::*;

    fn chain(ws: &[i64]) -> WeightedGraph {
        WeightedGraph::chain(ws)
    }

    fn weights(g: &WeightedGraph) -> Vec<i64> {
        g.chain_weights().unwrap()
    }

    #[test]
    fn inner_blowup_of_zero_pair() {
        let (g, step) = blow_up(&chain(&[0, 0]), BlowupSite::Edge(VertexId(0), VertexId(1))).unwrap();
        assert_eq!(weights(&g), vec![-1, -1, -1]);
        assert_eq!(step.created, vec![VertexId(2)]);
        let (back, _) = blow_down(&g, VertexId(2)).unwrap();
        assert_eq!(weights(&back), vec![0, 0]);
    }

    #[test]
    fn outer_blowup_and_contraction() {
        let (g, _) = blow_up(&chain(&[0, 0]), BlowupSite::Vertex(VertexId(1))).unwrap();
        assert_eq!(weights(&g), vec![0, -1, -1]);
        let (h, _) = blow_down(&chain(&[0, -1, -1]), VertexId(2)).unwrap();
        assert_eq!(weights(&h), vec![0, 0]);
        let (empty, _) = blow_down(&chain(&[-1]), VertexId(0)).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn blow_down_errors() {
        assert!(matches!(
            blow_down(&chain(&[0, -2]), VertexId(1)),
            Err(SurgeryError::NotMinusOne { .. })
        ));
        let mut star = chain(&[-2, -1, -2]);
        let x = star.add_fresh(-2, Role::Boundary);
        star.add_edge(VertexId(1), x).unwrap();
        assert!(matches!(
            blow_down(&star, VertexId(1)),
            Err(SurgeryError::DegreeTooHigh { degree: 3, .. })
        ));
        let mut cyc = chain(&[-1, -2, -2]);
        cyc.add_edge(VertexId(0), VertexId(2)).unwrap();
        assert_eq!(blow_down(&cyc, VertexId(0)).unwrap_err(), SurgeryError::NotATree);
        assert!(matches!(
            blow_up(&chain(&[0]), BlowupSite::Vertex(VertexId(7))),
            Err(SurgeryError::SiteMissing(_))
        ));
    }

    #[test]
    fn elementary_examples() {
        let (g, step) =
            elementary_transform(&chain(&[-2, 0, -3]), VertexId(1), ElemDirection::Toward(VertexId(2)))
                .unwrap();
        assert_eq!(weights(&g), vec![-1, 0, -4]);
        assert_eq!(step.destroyed, vec![VertexId(1)]);
        let (h, _) = elementary_transform(&chain(&[0, -3]), VertexId(0), ElemDirection::Outer).unwrap();
        assert_eq!(weights(&h), vec![-2, 0]);
        assert!(matches!(
            elementary_transform(&chain(&[0, -3]), VertexId(1), ElemDirection::Outer),
            Err(SurgeryError::NotZeroVertex { .. })
        ));
        assert!(matches!(
            elementary_transform(&chain(&[0, -3]), VertexId(0), ElemDirection::Toward(VertexId(1))),
            Err(SurgeryError::WrongDegree { .. })
        ));
    }

    #[test]
    fn zero_pair_moves_left() {
        // [[0,0,w_2,...]] -> [[w_2,0,0,...]] after -w_2 inner steps toward the first vertex.
        let mut g = chain(&[0, 0, -3, -2]);
        let mut zero = VertexId(1);
        for _ in 0..3 {
            let (next, step) = elementary_transform(&g, zero, ElemDirection::Toward(VertexId(0))).unwrap();
            zero = step.created[0];
            g = next;
        }
        assert_eq!(weights(&g), vec![-3, 0, 0, -2]);
    }

    #[test]
    fn reversion_examples() {
        let z = Zigzag::new(vec![0, 0, -2, -3]).unwrap();
        let (r, t) = reverse(&z).unwrap();
        assert_eq!(r.weights(), &[0, 0, -3, -2]);
        t.verify().unwrap();
        let mid = replay_transcript(&t.initial, &t.steps[..2]).unwrap();
        assert_eq!(weights(&mid), vec![-2, 0, 0, -3]);

        let pal = Zigzag::new(vec![0, 0, -2, -2]).unwrap();
        assert_eq!(reverse(&pal).unwrap().0, pal);
        let zeros = Zigzag::new(vec![0, 0, 0]).unwrap();
        let (same, t0) = reverse(&zeros).unwrap();
        assert_eq!(same, zeros);
        assert!(t0.is_empty());
        assert!(matches!(
            reverse(&Zigzag::new(vec![0, -2, -3]).unwrap()),
            Err(SurgeryError::NotReversible(_))
        ));
    }

    #[test]
    fn replay_rejects_forged_deltas() {
        let (_, mut step) = blow_down(&chain(&[0, -1, -1]), VertexId(2)).unwrap();
        step.deltas = vec![(VertexId(1), 2)];
        assert!(matches!(
            apply_step(&chain(&[0, -1, -1]), &step),
            Err(SurgeryError::ReplayMismatch { .. })
        ));
    }

    fn arb_tree() -> impl Strategy<Value = WeightedGraph> {
        (1usize..=7)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(-4i64..=2, n),
                    prop::collection::vec(any::<prop::sample::Index>(), n.saturating_sub(1)),
                )
            })
            .prop_map(|(ws, parents)| {
                let mut g = WeightedGraph::new();
                let ids: Vec<VertexId> = ws.iter().map(|&w| g.add_fresh(w, Role::Boundary)).collect();
                for (i, p) in parents.iter().enumerate() {
                    g.add_edge(ids[p.index(i + 1)], ids[i + 1]).unwrap();
                }
                g
            })
    }

    proptest! {
        #[test]
        fn blow_down_undoes_blow_up(g in arb_tree(), pick in any::<prop::sample::Index>()) {
            let mut sites: Vec<BlowupSite> = g.ids().map(BlowupSite::Vertex).collect();
            sites.extend(g.edges().iter().map(|&(a, b)| BlowupSite::Edge(a, b)));
            let site = sites[pick.index(sites.len())];
            let (up, step) = blow_up(&g, site).unwrap();
            let (down, _) = blow_down(&up, step.created[0]).unwrap();
            prop_assert_eq!(canonical_code(&down).unwrap(), canonical_code(&g).unwrap());
        }

        #[test]
        fn reverse_is_involution(ws in prop::collection::vec(-5i64..=-2, 1..=6)) {
            let mut all = vec![0, 0];
            all.extend(ws);
            let z = Zigzag::new(all).unwrap();
            let (r, t) = reverse(&z).unwrap();
            t.verify().unwrap();
            let (rr, _) = reverse(&r).unwrap();
            prop_assert!(rr.same_chain(&z));
            let mut expect = z.weights()[2..].to_vec();
            expect.reverse();
            prop_assert_eq!(&r.weights()[2..], &expect[..]);
        }

        #[test]
        fn surgery_is_a_congruence(g in arb_tree(), pick in any::<prop::sample::Index>(), shift in 0u32..5) {
            // Relabel by inserting in reverse order with shifted identifiers.
            let mut h = WeightedGraph::new();
            let mut map = std::collections::BTreeMap::new();
            for v in g.vertices().collect::<Vec<_>>().into_iter().rev() {
                let id = VertexId(v.id.0 * 3 + shift);
                h.add_vertex(crate::graph::Vertex::new(id, v.weight, v.role)).unwrap();
                map.insert(v.id, id);
            }
            for &(a, b) in g.edges() {
                h.add_edge(map[&b], map[&a]).unwrap();
            }
            let mut sites: Vec<BlowupSite> = g.ids().map(BlowupSite::Vertex).collect();
            sites.extend(g.edges().iter().map(|&(a, b)| BlowupSite::Edge(a, b)));
            let site = sites[pick.index(sites.len())];
            let mapped = match site {
                BlowupSite::Vertex(v) => BlowupSite::Vertex(map[&v]),
                BlowupSite::Edge(a, b) => BlowupSite::Edge(map[&a], map[&b]),
            };
            let (g2, _) = blow_up(&g, site).unwrap();
            let (h2, _) = blow_up(&h, mapped).unwrap();
            prop_assert_eq!(canonical_code(&g2).unwrap(), canonical_code(&h2).unwrap());
        }
    }
}
