//! Weighted dual graphs.
//!
//! A [`WeightedGraph`] is a finite multigraph whose vertices stand for the
//! components of a boundary divisor (or of an extended divisor) and carry a
//! self-intersection weight, a genus and a role tag. Loops and multi-edges are
//! representable, but every surgery algorithm in this crate requires a tree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Opaque vertex identifier. Identifiers are never reused inside the lineage
/// of one graph: every blowup draws a fresh one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    /// The horizontal component `C_1`.
    Section,
    /// An extremal 0-vertex `C_{0i}` attached to the section.
    FiberZero,
    /// Any other boundary component.
    Boundary,
    /// A feather component (not part of the boundary).
    Feather,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Section => "section",
            Role::FiberZero => "fiber0",
            Role::Boundary => "boundary",
            Role::Feather => "feather",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        match s {
            "section" => Some(Role::Section),
            "fiber0" => Some(Role::FiberZero),
            "boundary" => Some(Role::Boundary),
            "feather" => Some(Role::Feather),
            _ => None,
        }
    }

    pub fn is_boundary(self) -> bool {
        !matches!(self, Role::Feather)
    }

    pub(crate) fn tag(self) -> u8 {
        match self {
            Role::Section => 0,
            Role::FiberZero => 1,
            Role::Boundary => 2,
            Role::Feather => 3,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub weight: i64,
    pub genus: u32,
    pub role: Role,
    pub name: Option<String>,
}

impl Vertex {
    pub fn new(id: VertexId, weight: i64, role: Role) -> Self {
        Vertex {
            id,
            weight,
            genus: 0,
            role,
            name: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_genus(mut self, genus: u32) -> Self {
        self.genus = genus;
        self
    }

    /// Display name, falling back to `v<id>`.
    pub fn label(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => format!("v{}", self.id.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} already exists")]
    DuplicateVertex(VertexId),
    #[error("vertex {0} does not exist")]
    MissingVertex(VertexId),
    #[error("edge {0}-{1} does not exist")]
    MissingEdge(VertexId, VertexId),
    #[error("genus {genus} on vertex {id} with role {role}; only the section may be non-rational")]
    GenusOnNonSection { id: VertexId, role: Role, genus: u32 },
    #[error("graph is not a tree")]
    NotATree,
    #[error("graph has a loop or a multi-edge")]
    LoopsUnsupported,
}

/// Finite weighted multigraph.
#[derive(Debug, Clone, Default)]
pub struct WeightedGraph {
    vertices: BTreeMap<VertexId, Vertex>,
    /// Unordered pairs stored as `(min, max)`, kept sorted.
    edges: Vec<(VertexId, VertexId)>,
    next_id: u32,
}

impl PartialEq for WeightedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for WeightedGraph {}

fn ordered(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.vertices.get(&id)
    }

    pub fn contains(&self, id: VertexId) -> bool {
        self.vertices.contains_key(&id)
    }

    pub fn weight(&self, id: VertexId) -> Option<i64> {
        self.vertices.get(&id).map(|v| v.weight)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// The identifier the next fresh vertex will receive.
    pub fn peek_fresh_id(&self) -> VertexId {
        VertexId(self.next_id)
    }

    /// Lowers the fresh-id counter to one past the largest identifier.
    pub fn compact_fresh_ids(&mut self) {
        self.next_id = self.vertices.keys().next_back().map_or(0, |v| v.0 + 1);
    }

    pub fn add_vertex(&mut self, vertex: Vertex) -> Result<VertexId, GraphError> {
        if self.vertices.contains_key(&vertex.id) {
            return Err(GraphError::DuplicateVertex(vertex.id));
        }
        if vertex.genus > 0 && vertex.role != Role::Section {
            return Err(GraphError::GenusOnNonSection {
                id: vertex.id,
                role: vertex.role,
                genus: vertex.genus,
            });
        }
        let id = vertex.id;
        self.next_id = self.next_id.max(id.0 + 1);
        self.vertices.insert(id, vertex);
        Ok(id)
    }

    /// Adds a vertex with a fresh identifier.
    pub fn add_fresh(&mut self, weight: i64, role: Role) -> VertexId {
        let id = VertexId(self.next_id);
        self.next_id += 1;
        self.vertices.insert(id, Vertex::new(id, weight, role));
        id
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        for x in [u, v] {
            if !self.vertices.contains_key(&x) {
                return Err(GraphError::MissingVertex(x));
            }
        }
        let e = ordered(u, v);
        let pos = self.edges.partition_point(|f| *f < e);
        self.edges.insert(pos, e);
        Ok(())
    }

    /// Removes one copy of the edge `{u, v}`.
    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        let e = ordered(u, v);
        match self.edges.binary_search(&e) {
            Ok(pos) => {
                self.edges.remove(pos);
                Ok(())
            }
            Err(_) => Err(GraphError::MissingEdge(u, v)),
        }
    }

    /// Removes a vertex together with all incident edges.
    pub fn remove_vertex(&mut self, id: VertexId) -> Result<Vertex, GraphError> {
        let vertex = self
            .vertices
            .remove(&id)
            .ok_or(GraphError::MissingVertex(id))?;
        self.edges.retain(|&(a, b)| a != id && b != id);
        Ok(vertex)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.binary_search(&ordered(u, v)).is_ok()
    }

    pub fn set_weight(&mut self, id: VertexId, weight: i64) -> Result<(), GraphError> {
        let v = self
            .vertices
            .get_mut(&id)
            .ok_or(GraphError::MissingVertex(id))?;
        v.weight = weight;
        Ok(())
    }

    pub fn add_weight(&mut self, id: VertexId, delta: i64) -> Result<(), GraphError> {
        let v = self
            .vertices
            .get_mut(&id)
            .ok_or(GraphError::MissingVertex(id))?;
        v.weight += delta;
        Ok(())
    }

    pub fn set_name(&mut self, id: VertexId, name: Option<String>) -> Result<(), GraphError> {
        let v = self
            .vertices
            .get_mut(&id)
            .ok_or(GraphError::MissingVertex(id))?;
        v.name = name;
        Ok(())
    }

    pub fn set_role(&mut self, id: VertexId, role: Role) -> Result<(), GraphError> {
        let v = self
            .vertices
            .get_mut(&id)
            .ok_or(GraphError::MissingVertex(id))?;
        if v.genus > 0 && role != Role::Section {
            return Err(GraphError::GenusOnNonSection {
                id,
                role,
                genus: v.genus,
            });
        }
        v.role = role;
        Ok(())
    }

    pub fn set_genus(&mut self, id: VertexId, genus: u32) -> Result<(), GraphError> {
        let v = self
            .vertices
            .get_mut(&id)
            .ok_or(GraphError::MissingVertex(id))?;
        if genus > 0 && v.role != Role::Section {
            return Err(GraphError::GenusOnNonSection {
                id,
                role: v.role,
                genus,
            });
        }
        v.genus = genus;
        Ok(())
    }

    /// Neighbors with multiplicity, sorted. A loop contributes its vertex twice.
    pub fn neighbors(&self, id: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == id {
                out.push(b);
            }
            if b == id {
                out.push(a);
            }
        }
        out.sort();
        out
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, id: VertexId) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| usize::from(a == id) + usize::from(b == id))
            .sum()
    }

    pub fn adjacency(&self) -> BTreeMap<VertexId, Vec<VertexId>> {
        let mut adj: BTreeMap<VertexId, Vec<VertexId>> =
            self.vertices.keys().map(|&k| (k, Vec::new())).collect();
        for &(a, b) in &self.edges {
            adj.get_mut(&a).expect("edge endpoint").push(b);
            adj.get_mut(&b).expect("edge endpoint").push(a);
        }
        for list in adj.values_mut() {
            list.sort();
        }
        adj
    }

    pub fn has_loops_or_multi_edges(&self) -> bool {
        self.edges.iter().any(|(a, b)| a == b) || self.edges.windows(2).any(|w| w[0] == w[1])
    }

    /// Connected components of the subgraph induced on `keep`.
    pub fn components_within(&self, keep: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
        let adj = self.adjacency();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in keep {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for &w in &adj[&v] {
                    if keep.contains(&w) && seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let all: BTreeSet<VertexId> = self.ids().collect();
        self.components_within(&all).len() <= 1
    }

    /// A tree: connected, no loops, no multi-edges. The empty graph counts.
    pub fn is_tree(&self) -> bool {
        if self.vertices.is_empty() {
            return self.edges.is_empty();
        }
        !self.has_loops_or_multi_edges()
            && self.edges.len() + 1 == self.vertices.len()
            && self.is_connected()
    }

    pub fn require_tree(&self) -> Result<(), GraphError> {
        if self.has_loops_or_multi_edges() {
            Err(GraphError::LoopsUnsupported)
        } else if self.is_tree() {
            Ok(())
        } else {
            Err(GraphError::NotATree)
        }
    }

    /// Induced subgraph on `keep`; identifiers and labels are preserved.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> WeightedGraph {
        let vertices = self
            .vertices
            .iter()
            .filter(|(k, _)| keep.contains(k))
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .collect();
        WeightedGraph {
            vertices,
            edges,
            next_id: self.next_id,
        }
    }

    /// For a linear tree, the vertices in path order starting from the end
    /// with the smaller identifier. `None` if the graph is not a path.
    pub fn path_order(&self) -> Option<Vec<VertexId>> {
        if self.vertices.is_empty() || !self.is_tree() {
            return None;
        }
        if self.vertices.len() == 1 {
            return Some(self.ids().collect());
        }
        let adj = self.adjacency();
        if adj.values().any(|n| n.len() > 2) {
            return None;
        }
        let start = *adj.iter().find(|(_, n)| n.len() == 1)?.0;
        let mut order = vec![start];
        let mut prev = None;
        let mut cur = start;
        loop {
            let next = adj[&cur].iter().copied().find(|&w| Some(w) != prev);
            match next {
                Some(w) => {
                    prev = Some(cur);
                    cur = w;
                    order.push(w);
                }
                None => break,
            }
        }
        Some(order)
    }

    /// Builds a linear chain with fresh identifiers `0..n`, all role `Boundary`.
    pub fn chain(weights: &[i64]) -> WeightedGraph {
        let mut g = WeightedGraph::new();
        let mut prev: Option<VertexId> = None;
        for &w in weights {
            let id = g.add_fresh(w, Role::Boundary);
            if let Some(p) = prev {
                g.add_edge(p, id).expect("fresh vertices exist");
            }
            prev = Some(id);
        }
        g
    }

    /// Weights along [`path_order`](Self::path_order).
    pub fn chain_weights(&self) -> Option<Vec<i64>> {
        let order = self.path_order()?;
        Some(order.iter().map(|id| self.vertices[id].weight).collect())
    }

    pub fn find_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices
            .values()
            .find(|v| v.name.as_deref() == Some(name))
            .map(|v| v.id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_only_on_section() {
        let mut g = WeightedGraph::new();
        let err = g
            .add_vertex(Vertex::new(VertexId(0), 0, Role::Boundary).with_genus(1))
            .unwrap_err();
        assert!(matches!(err, GraphError::GenusOnNonSection { .. }));
        g.add_vertex(Vertex::new(VertexId(1), 0, Role::Section).with_genus(2))
            .unwrap();
        assert!(g.set_role(VertexId(1), Role::Boundary).is_err());
    }

    #[test]
    fn loops_count_twice() {
        let mut g = WeightedGraph::new();
        let a = g.add_fresh(3, Role::Boundary);
        g.add_edge(a, a).unwrap();
        assert_eq!(g.degree(a), 2);
        assert!(g.has_loops_or_multi_edges());
        assert_eq!(g.require_tree(), Err(GraphError::LoopsUnsupported));
    }

    #[test]
    fn path_order_of_chain() {
        let g = WeightedGraph::chain(&[0, 0, -2, -3]);
        assert_eq!(g.chain_weights().unwrap(), vec![0, 0, -2, -3]);
        let mut star = WeightedGraph::chain(&[1, 2]);
        let c = star.add_fresh(0, Role::Boundary);
        star.add_edge(VertexId(0), c).unwrap();
        let d = star.add_fresh(0, Role::Boundary);
        star.add_edge(VertexId(0), d).unwrap();
        assert!(star.path_order().is_none());
    }

    #[test]
    fn fresh_ids_are_not_reused() {
        let mut g = WeightedGraph::chain(&[0, -1]);
        g.remove_vertex(VertexId(1)).unwrap();
        assert_eq!(g.add_fresh(-1, Role::Feather), VertexId(2));
    }
}
