//! Canonical codes for labeled trees (AHU encoding rooted at the centroid).

use std::collections::BTreeMap;
use std::fmt;

use crate::graph::{GraphError, Role, Vertex, VertexId, WeightedGraph};

/// Byte string that identifies a labeled tree up to isomorphism preserving
/// weight, genus and role.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

const OPEN: u8 = b'(';
const CLOSE: u8 = b')';

fn push_label(out: &mut Vec<u8>, v: &Vertex) {
    // Sign bit flipped so byte order matches integer order.
    out.extend_from_slice(&((v.weight as u64) ^ (1 << 63)).to_be_bytes());
    out.extend_from_slice(&v.genus.to_be_bytes());
    out.push(v.role.tag());
}

fn encode(
    g: &WeightedGraph,
    adj: &BTreeMap<VertexId, Vec<VertexId>>,
    v: VertexId,
    parent: Option<VertexId>,
) -> Vec<u8> {
    let mut children: Vec<Vec<u8>> = adj[&v]
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| encode(g, adj, w, Some(v)))
        .collect();
    children.sort();
    let mut out = vec![OPEN];
    push_label(&mut out, g.vertex(v).expect("vertex"));
    for c in children {
        out.extend_from_slice(&c);
    }
    out.push(CLOSE);
    out
}

/// Vertices whose removal leaves components of size at most `n / 2`.
fn centroids(adj: &BTreeMap<VertexId, Vec<VertexId>>) -> Vec<VertexId> {
    let n = adj.len();
    let root = *adj.keys().next().expect("non-empty");
    // Iterative DFS order, then subtree sizes bottom-up.
    let mut order = Vec::with_capacity(n);
    let mut parent: BTreeMap<VertexId, Option<VertexId>> = BTreeMap::new();
    let mut stack = vec![(root, None)];
    while let Some((v, p)) = stack.pop() {
        parent.insert(v, p);
        order.push(v);
        for &w in &adj[&v] {
            if Some(w) != p {
                stack.push((w, Some(v)));
            }
        }
    }
    let mut size: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &v in order.iter().rev() {
        let s = 1 + adj[&v]
            .iter()
            .filter(|&&w| Some(w) != parent[&v])
            .map(|w| size[w])
            .sum::<usize>();
        size.insert(v, s);
    }
    order
        .iter()
        .copied()
        .filter(|&v| {
            let largest_child = adj[&v]
                .iter()
                .filter(|&&w| Some(w) != parent[&v])
                .map(|w| size[w])
                .max()
                .unwrap_or(0);
            largest_child.max(n - size[&v]) <= n / 2
        })
        .collect()
}

pub fn canonical_code(g: &WeightedGraph) -> Result<CanonicalCode, GraphError> {
    g.require_tree()?;
    if g.is_empty() {
        return Ok(CanonicalCode(Vec::new()));
    }
    let adj = g.adjacency();
    let best = centroids(&adj)
        .into_iter()
        .map(|c| encode(g, &adj, c, None))
        .min()
        .expect("a tree has a centroid");
    Ok(CanonicalCode(best))
}

/// Code of the underlying weighted tree: roles are ignored, genus is kept.
pub fn shape_code(g: &WeightedGraph) -> Result<CanonicalCode, GraphError> {
    let mut h = g.clone();
    let ids: Vec<VertexId> = h.ids().collect();
    for v in ids {
        let role = if h.vertex(v).expect("vertex").genus > 0 {
            Role::Section
        } else {
            Role::Boundary
        };
        h.set_role(v, role)?;
    }
    canonical_code(&h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(ws: &[i64]) -> CanonicalCode {
        canonical_code(&WeightedGraph::chain(ws)).unwrap()
    }

    #[test]
    fn chains_are_unoriented() {
        assert_eq!(code(&[0, 0, -2, -2]), code(&[-2, -2, 0, 0]));
        assert_ne!(code(&[0, 0, -2, -3]), code(&[0, 0, -3, -2]));
    }

    #[test]
    fn relabeling_invariance() {
        // Same star, vertices inserted in a different order.
        let mut a = WeightedGraph::new();
        let c = a.add_fresh(-1, Role::Boundary);
        for w in [-2, -3, -4] {
            let l = a.add_fresh(w, Role::Boundary);
            a.add_edge(c, l).unwrap();
        }
        let mut b = WeightedGraph::new();
        let leaves: Vec<_> = [-4, -2, -3]
            .iter()
            .map(|&w| b.add_fresh(w, Role::Boundary))
            .collect();
        let c2 = b.add_fresh(-1, Role::Boundary);
        for l in leaves {
            b.add_edge(l, c2).unwrap();
        }
        assert_eq!(canonical_code(&a).unwrap(), canonical_code(&b).unwrap());
    }

    #[test]
    fn roles_and_genus_matter() {
        let a = WeightedGraph::chain(&[0, -1]);
        let mut b = a.clone();
        b.set_role(VertexId(1), Role::Feather).unwrap();
        assert_ne!(canonical_code(&a).unwrap(), canonical_code(&b).unwrap());
        assert_eq!(shape_code(&a).unwrap(), shape_code(&b).unwrap());
    }

    #[test]
    fn loops_rejected() {
        let mut g = WeightedGraph::chain(&[0, 0]);
        g.add_edge(VertexId(0), VertexId(1)).unwrap();
        assert_eq!(canonical_code(&g), Err(GraphError::LoopsUnsupported));
        let mut h = WeightedGraph::chain(&[0]);
        h.add_fresh(1, Role::Boundary);
        assert_eq!(canonical_code(&h), Err(GraphError::NotATree));
    }

    #[test]
    fn bicentroid_trees() {
        // Path of even length has two centroids; both orientations agree.
        assert_eq!(code(&[1, 2, 3, 4]), code(&[4, 3, 2, 1]));
        assert_ne!(code(&[1, 2, 3, 4]), code(&[1, 3, 2, 4]));
    }
}
