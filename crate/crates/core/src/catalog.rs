//! Named example graphs used by tests, benches and the shipped corpus.

use std::collections::BTreeMap;

use crate::extended::{ExtendedGraph, NormalizedExtendedGraph};
use crate::graph::{Role, Vertex, VertexId, WeightedGraph};

/// `C0(0) - C1(0) - C2(w_2) - ... - Cn(w_n)` with `C0` a full fiber and `C1`
/// the section, no feathers.
pub fn gizatullin_boundary(tail: &[i64]) -> NormalizedExtendedGraph {
    let mut g = WeightedGraph::new();
    let weights: Vec<i64> = [0, 0].iter().chain(tail).copied().collect();
    for (i, &w) in weights.iter().enumerate() {
        let role = match i {
            0 => Role::FiberZero,
            1 => Role::Section,
            _ => Role::Boundary,
        };
        g.add_vertex(Vertex::new(VertexId(i as u32), w, role).named(format!("C{i}")))
            .expect("fresh");
        if i > 0 {
            g.add_edge(VertexId(i as u32 - 1), VertexId(i as u32)).expect("present");
        }
    }
    NormalizedExtendedGraph {
        boundary: g,
        delta: BTreeMap::new(),
    }
}

fn with_feathers(tail: &[i64], feathers: &[(&str, i64, u32)]) -> ExtendedGraph {
    let b = gizatullin_boundary(tail).boundary;
    let list: Vec<_> = feathers
        .iter()
        .map(|&(n, w, on)| (Some(n.to_string()), w, VertexId(on)))
        .collect();
    ExtendedGraph::from_boundary(&b, &list).expect("catalog graphs are well formed")
}

/// Generic member of the jumping family: `F1(-1)` on `C2`, `F2(-1)` on `C3`.
pub fn jumping_generic() -> ExtendedGraph {
    with_feathers(&[-2, -2], &[("F1", -1, 2), ("F2", -1, 3)])
}

/// Special member of the jumping family: `F1(-2)` and `F2(-1)` both on `C3`.
pub fn jumping_special() -> ExtendedGraph {
    with_feathers(&[-2, -2], &[("F1", -2, 3), ("F2", -1, 3)])
}

/// Danilov-Gizatullin completion of length `n` with parameter `r`:
/// `[[0,0,(-2)_{n-1}]]`, `F1(-r)` on `C_{r+1}` and `F0(-1)` on `C_n`.
pub fn danilov_gizatullin(n: u32, r: u32) -> ExtendedGraph {
    assert!(n >= 3 && (1..n).contains(&r), "need n >= 3 and 1 <= r < n");
    let tail = vec![-2; n as usize - 1];
    with_feathers(&tail, &[("F1", -(r as i64), r + 1), ("F0", -1, n)])
}

/// Normalized graph `Δ(n, r, t)` of a special Gizatullin surface.
pub fn special_gizatullin(n: u32, r: u32, t: u32) -> NormalizedExtendedGraph {
    assert!(n >= 3 && (2..=n).contains(&t) && r >= 1, "need n >= 3, 2 <= t <= n, r >= 1");
    let tail: Vec<i64> = (2..=n)
        .map(|i| if i == t { -2 - r as i64 } else { -2 })
        .collect();
    let mut d = gizatullin_boundary(&tail);
    *d.delta.entry(VertexId(2)).or_insert(0) += 1;
    *d.delta.entry(VertexId(n)).or_insert(0) += 1;
    *d.delta.entry(VertexId(t)).or_insert(0) += r;
    d
}

/// `[[0,0,-2,-3,-2]]` with two feathers on `C3`, which is then a
/// star component (created by an inner blowup between `C2` and `C4`).
pub fn star_example() -> NormalizedExtendedGraph {
    let mut d = gizatullin_boundary(&[-2, -3, -2]);
    d.delta.insert(VertexId(3), 2);
    d
}
