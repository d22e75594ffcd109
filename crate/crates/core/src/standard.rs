//! Segments and the (semi-)standard predicate for arbitrary dual graphs.

use std::collections::BTreeSet;

use crate::chain::{classify_weights, is_standard_circular, ChainClass};
use crate::graph::{VertexId, WeightedGraph};

/// A connected component of `g - (B ∪ S)`, where `B` are the branching
/// vertices and `S` the non-rational ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// Vertices in path order (or cyclic order when `is_cycle`).
    pub vertices: Vec<VertexId>,
    /// Contains a vertex of degree at most one in the whole graph.
    pub is_outer: bool,
    pub is_cycle: bool,
}

impl Segment {
    pub fn weights(&self, g: &WeightedGraph) -> Vec<i64> {
        self.vertices
            .iter()
            .map(|&v| g.weight(v).expect("segment vertex"))
            .collect()
    }
}

pub fn branching_vertices(g: &WeightedGraph) -> BTreeSet<VertexId> {
    g.ids().filter(|&v| g.degree(v) >= 3).collect()
}

pub fn non_rational_vertices(g: &WeightedGraph) -> BTreeSet<VertexId> {
    g.vertices().filter(|v| v.genus > 0).map(|v| v.id).collect()
}

/// Walks a connected component whose vertices have degree at most two inside it.
fn order_component(g: &WeightedGraph, comp: &BTreeSet<VertexId>) -> (Vec<VertexId>, bool) {
    let sub = g.induced(comp);
    let adj = sub.adjacency();
    let start = adj
        .iter()
        .find(|(_, n)| n.len() <= 1)
        .map(|(k, _)| *k)
        .unwrap_or_else(|| *comp.iter().next().expect("non-empty component"));
    let is_cycle = adj.values().all(|n| n.len() == 2);
    let mut order = vec![start];
    let mut used_edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut cur = start;
    loop {
        // Follow an unused edge copy; loops and double edges close the cycle.
        let mut next = None;
        for &w in &adj[&cur] {
            let e = if cur <= w { (cur, w) } else { (w, cur) };
            let available = sub.edges().iter().filter(|&&f| f == e).count();
            let used = used_edges.iter().filter(|&&f| f == e).count();
            if used < available {
                used_edges.push(e);
                next = Some(w);
                break;
            }
        }
        match next {
            Some(w) if w == start => break,
            Some(w) => {
                order.push(w);
                cur = w;
            }
            None => break,
        }
    }
    (order, is_cycle)
}

pub fn segments(g: &WeightedGraph) -> Vec<Segment> {
    let excluded: BTreeSet<VertexId> = branching_vertices(g)
        .union(&non_rational_vertices(g))
        .copied()
        .collect();
    let keep: BTreeSet<VertexId> = g.ids().filter(|v| !excluded.contains(v)).collect();
    g.components_within(&keep)
        .into_iter()
        .map(|comp| {
            let is_outer = comp.iter().any(|&v| g.degree(v) <= 1);
            let (vertices, is_cycle) = order_component(g, &comp);
            Segment {
                vertices,
                is_outer,
                is_cycle,
            }
        })
        .collect()
}

/// Standard (`semi = false`) or semi-standard (`semi = true`) graph predicate.
pub fn is_standard_graph(g: &WeightedGraph, semi: bool) -> bool {
    for seg in segments(g) {
        let ws = seg.weights(g);
        let shape_ok = if seg.is_cycle {
            is_standard_circular(&ws)
        } else {
            match classify_weights(&ws) {
                ChainClass::Standard => true,
                ChainClass::SemiStandard { .. } => semi,
                ChainClass::Neither => false,
            }
        };
        if !shape_ok {
            return false;
        }
        if seg.is_outer && ws.contains(&0) {
            let has_extremal_zero = seg
                .vertices
                .iter()
                .any(|&v| g.degree(v) <= 1 && g.weight(v) == Some(0));
            if !has_extremal_zero {
                return false;
            }
        }
    }
    if !semi {
        for v in g.vertices() {
            if v.weight == 0 && g.degree(v.id) == 1 {
                let nb = g.neighbors(v.id)[0];
                if g.weight(nb) != Some(0) {
                    return false;
                }
            }
        }
    }
    true
}
