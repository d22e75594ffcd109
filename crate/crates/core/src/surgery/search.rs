use std::collections::{BTreeMap, VecDeque};

use rustc_hash::FxHashSet;
use std::fmt;

use super::{
    elementary_unchecked, raw_blow_down, raw_blow_up, BlowupSite, ElemDirection, StepKind,
    SurgeryError, SurgeryStep, SurgeryTranscript,
};
use crate::canon::{shape_code, CanonicalCode};
use crate::graph::{Role, Vertex, VertexId, WeightedGraph};
use crate::standard::is_standard_graph;

/// Bounds for the rewrite-system searches.
///
/// `blowup_depth` counts bare blowups along a path (elementary transformations
/// and blowdowns are free). Every visited graph has at most `size_cap`
/// vertices and all weights inside a window derived from the start graph:
/// `[min(w_min, -2) - depth - 2, max(w_max, 0) + depth + 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub blowup_depth: u32,
    pub size_cap: usize,
    pub max_states: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            blowup_depth: 3,
            size_cap: 10,
            max_states: 200_000,
        }
    }
}

impl fmt::Display for SearchBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "blowup depth {}, size cap {}, {} states",
            self.blowup_depth, self.size_cap, self.max_states
        )
    }
}

#[derive(Debug, Clone, Copy)]
struct Window {
    lo: i64,
    hi: i64,
}

impl Window {
    fn for_start(g: &WeightedGraph, depth: u32) -> Window {
        let min = g.vertices().map(|v| v.weight).min().unwrap_or(0).min(-2);
        let max = g.vertices().map(|v| v.weight).max().unwrap_or(0).max(0);
        let slack = i64::from(depth) + 2;
        Window {
            lo: min - slack,
            hi: max + slack,
        }
    }

    fn admits(&self, t: &Tree) -> bool {
        t.w[..t.n].iter().all(|&w| w >= self.lo && w <= self.hi)
    }

    fn admits_graph(&self, g: &WeightedGraph) -> bool {
        g.vertices().all(|v| v.weight >= self.lo && v.weight <= self.hi)
    }
}

/// Largest graph the search can hold.
const MAXV: usize = 24;

/// Starting weights beyond this are refused so codes can store weights in
/// two bytes; the window keeps later weights close to the starting ones.
const WEIGHT_LIMIT: i64 = 16_000;

const OPEN: u8 = b'(';
const CLOSE: u8 = b')';
const GENUS: u8 = b'g';

/// Fixed-size tree used inside the search. Slots `0..n` are live; `adj`
/// holds neighbor bitmasks over slots. Roles and names are dropped.
#[derive(Clone, Copy)]
struct Tree {
    n: usize,
    w: [i64; MAXV],
    genus: [u32; MAXV],
    adj: [u32; MAXV],
    id: [u32; MAXV],
    next_id: u32,
}

impl Tree {
    fn from_graph(g: &WeightedGraph) -> Option<Tree> {
        if g.len() > MAXV || g.vertices().any(|v| v.weight.abs() > WEIGHT_LIMIT) {
            return None;
        }
        let mut t = Tree {
            n: g.len(),
            w: [0; MAXV],
            genus: [0; MAXV],
            adj: [0; MAXV],
            id: [0; MAXV],
            next_id: g.peek_fresh_id().0,
        };
        let mut slot = BTreeMap::new();
        for (i, v) in g.vertices().enumerate() {
            t.w[i] = v.weight;
            t.genus[i] = v.genus;
            t.id[i] = v.id.0;
            slot.insert(v.id, i);
        }
        for &(a, b) in g.edges() {
            let (i, j) = (slot[&a], slot[&b]);
            t.adj[i] |= 1 << j;
            t.adj[j] |= 1 << i;
        }
        Some(t)
    }

    /// Role-blind graph: rational vertices become boundary curves, the
    /// others sections.
    fn graph(&self) -> WeightedGraph {
        let mut g = WeightedGraph::new();
        for i in 0..self.n {
            let role = if self.genus[i] > 0 { Role::Section } else { Role::Boundary };
            g.add_vertex(Vertex::new(VertexId(self.id[i]), self.w[i], role).with_genus(self.genus[i]))
                .expect("distinct ids");
        }
        for i in 0..self.n {
            for j in self.nbrs(i) {
                if i < j {
                    g.add_edge(VertexId(self.id[i]), VertexId(self.id[j])).expect("present");
                }
            }
        }
        g
    }

    fn degree(&self, i: usize) -> u32 {
        self.adj[i].count_ones()
    }

    fn nbrs(&self, i: usize) -> impl Iterator<Item = usize> {
        let mut m = self.adj[i];
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(j)
        })
    }

    /// Slots sorted by vertex identifier.
    fn by_id(&self) -> ([usize; MAXV], usize) {
        let mut order = [0; MAXV];
        for (i, o) in order.iter_mut().enumerate().take(self.n) {
            *o = i;
        }
        order[..self.n].sort_unstable_by_key(|&i| self.id[i]);
        (order, self.n)
    }

    fn slot_of(&self, id: u32) -> usize {
        (0..self.n).find(|&i| self.id[i] == id).expect("live vertex")
    }

    fn link(&mut self, i: usize, j: usize) {
        self.adj[i] |= 1 << j;
        self.adj[j] |= 1 << i;
    }

    fn unlink(&mut self, i: usize, j: usize) {
        self.adj[i] &= !(1 << j);
        self.adj[j] &= !(1 << i);
    }

    fn push(&mut self, w: i64) -> usize {
        let i = self.n;
        self.n += 1;
        self.w[i] = w;
        self.genus[i] = 0;
        self.adj[i] = 0;
        self.id[i] = self.next_id;
        self.next_id += 1;
        i
    }

    /// Removes slot `i`, moving the last slot into its place.
    fn remove(&mut self, i: usize) {
        for j in self.nbrs(i) {
            self.adj[j] &= !(1 << i);
        }
        self.adj[i] = 0;
        let last = self.n - 1;
        if i != last {
            let moved = self.adj[last];
            for j in self.nbrs(last) {
                self.adj[j] = (self.adj[j] & !(1 << last)) | (1 << i);
            }
            self.adj[last] = 0;
            self.adj[i] = moved;
            self.w[i] = self.w[last];
            self.genus[i] = self.genus[last];
            self.id[i] = self.id[last];
        }
        self.n = last;
    }

    fn contractible(&self, i: usize) -> bool {
        self.w[i] == -1 && self.genus[i] == 0 && self.degree(i) <= 2 && self.n > 1
    }

    fn blow_down(&mut self, i: usize) {
        let nb = self.adj[i];
        for j in self.nbrs(i) {
            self.w[j] += 1;
        }
        if nb.count_ones() == 2 {
            let a = nb.trailing_zeros() as usize;
            let b = (nb & (nb - 1)).trailing_zeros() as usize;
            self.link(a, b);
        }
        self.remove(i);
    }

    fn blow_up_edge(&mut self, a: usize, b: usize) {
        self.unlink(a, b);
        self.w[a] -= 1;
        self.w[b] -= 1;
        let c = self.push(-1);
        self.link(a, c);
        self.link(b, c);
    }

    fn blow_up_vertex(&mut self, a: usize) {
        self.w[a] -= 1;
        let c = self.push(-1);
        self.link(a, c);
    }

    fn apply(&self, m: Move) -> Tree {
        let mut t = *self;
        match m {
            Move::Blowdown(v) => t.blow_down(t.slot_of(v.0)),
            Move::Elem(z, toward) => {
                let zi = t.slot_of(z.0);
                match toward {
                    Some(v) => {
                        let ti = t.slot_of(v.0);
                        t.blow_up_edge(zi, ti);
                    }
                    None => t.blow_up_vertex(zi),
                }
                t.blow_down(zi);
            }
            Move::BlowupEdge(a, b) => {
                let (ai, bi) = (t.slot_of(a.0), t.slot_of(b.0));
                t.blow_up_edge(ai, bi);
            }
            Move::BlowupVertex(a) => {
                let ai = t.slot_of(a.0);
                t.blow_up_vertex(ai);
            }
        }
        t
    }

    /// AHU encoding of the subtree at `v`, appended to `out`. Children are
    /// encoded in place and then reordered through `scratch`.
    fn encode(&self, v: usize, parent: usize, out: &mut Vec<u8>, scratch: &mut Vec<u8>) {
        out.push(OPEN);
        out.extend_from_slice(&(self.w[v] as i16).to_le_bytes());
        if self.genus[v] > 0 {
            out.push(GENUS);
            out.extend_from_slice(&self.genus[v].to_le_bytes());
        }
        let body = out.len();
        let mut spans = [(0u16, 0u16); MAXV];
        let mut k = 0;
        let mut m = self.adj[v];
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            if j == parent {
                continue;
            }
            let a = out.len() as u16;
            self.encode(j, v, out, scratch);
            spans[k] = (a, out.len() as u16);
            k += 1;
        }
        if k > 1 {
            let spans = &mut spans[..k];
            spans.sort_unstable_by(|x, y| out[x.0 as usize..x.1 as usize].cmp(&out[y.0 as usize..y.1 as usize]));
            scratch.clear();
            for &(a, b) in spans.iter() {
                scratch.extend_from_slice(&out[a as usize..b as usize]);
            }
            out.truncate(body);
            out.extend_from_slice(scratch);
        }
        out.push(CLOSE);
    }

    /// Isomorphism-invariant code (weights, genera, shape), rooted at the
    /// tree's center.
    fn code(&self) -> Box<[u8]> {
        let mut deg = [0u32; MAXV];
        let mut alive: u32 = 0;
        let mut leaves: u32 = 0;
        for (i, d) in deg.iter_mut().enumerate().take(self.n) {
            *d = self.degree(i);
            alive |= 1 << i;
            if *d <= 1 {
                leaves |= 1 << i;
            }
        }
        let mut remaining = self.n;
        while remaining > 2 {
            let mut next = 0u32;
            let mut ls = leaves;
            while ls != 0 {
                let l = ls.trailing_zeros() as usize;
                ls &= ls - 1;
                alive &= !(1 << l);
                remaining -= 1;
                let mut m = self.adj[l] & alive;
                while m != 0 {
                    let j = m.trailing_zeros() as usize;
                    m &= m - 1;
                    deg[j] -= 1;
                    if deg[j] == 1 {
                        next |= 1 << j;
                    }
                }
            }
            leaves = next;
        }
        let mut out = Vec::with_capacity(4 * self.n + 2);
        let mut scratch = Vec::new();
        if alive.count_ones() == 1 {
            out.push(1);
            self.encode(alive.trailing_zeros() as usize, usize::MAX, &mut out, &mut scratch);
        } else if alive != 0 {
            let a = alive.trailing_zeros() as usize;
            let b = (alive & (alive - 1)).trailing_zeros() as usize;
            out.push(2);
            self.encode(a, b, &mut out, &mut scratch);
            let mid = out.len();
            self.encode(b, a, &mut out, &mut scratch);
            if out[mid..] < out[1..mid] {
                out[1..].rotate_left(mid - 1);
            }
        }
        out.into_boxed_slice()
    }

    /// Cheap necessary condition for the standard predicate: every rational
    /// vertex of degree at most two has weight `0` or at most `-2`.
    fn may_be_standard(&self) -> bool {
        (0..self.n).all(|i| self.genus[i] > 0 || self.degree(i) > 2 || self.w[i] == 0 || self.w[i] <= -2)
    }
}

/// A move, named by vertex identifiers.
#[derive(Debug, Clone, Copy)]
enum Move {
    Blowdown(VertexId),
    /// Elementary transformation at a 0-vertex, inner toward a neighbor or outer.
    Elem(VertexId, Option<VertexId>),
    BlowupEdge(VertexId, VertexId),
    BlowupVertex(VertexId),
}

impl Move {
    fn is_blowup(self) -> bool {
        matches!(self, Move::BlowupEdge(..) | Move::BlowupVertex(_))
    }

    /// Performs the move on a full graph, producing its recorded step.
    fn on_graph(self, g: &WeightedGraph) -> Result<(WeightedGraph, SurgeryStep), SurgeryError> {
        let mut h = g.clone();
        let step = match self {
            Move::Blowdown(v) => {
                let nbrs = raw_blow_down(&mut h, v)?;
                SurgeryStep {
                    kind: StepKind::Blowdown { vertex: v },
                    created: vec![],
                    destroyed: vec![v],
                    deltas: nbrs.into_iter().map(|w| (w, 1)).collect(),
                }
            }
            Move::Elem(z, toward) => {
                let dir = toward.map_or(ElemDirection::Outer, ElemDirection::Toward);
                return elementary_unchecked(g, z, dir, None);
            }
            Move::BlowupEdge(a, b) => {
                let id = h.peek_fresh_id();
                raw_blow_up(&mut h, BlowupSite::Edge(a, b), id, Role::Boundary, None)?;
                SurgeryStep {
                    kind: StepKind::InnerBlowup { edge: (a, b) },
                    created: vec![id],
                    destroyed: vec![],
                    deltas: vec![(a, -1), (b, -1)],
                }
            }
            Move::BlowupVertex(a) => {
                let id = h.peek_fresh_id();
                raw_blow_up(&mut h, BlowupSite::Vertex(a), id, Role::Boundary, None)?;
                SurgeryStep {
                    kind: StepKind::OuterBlowup { vertex: a },
                    created: vec![id],
                    destroyed: vec![],
                    deltas: vec![(a, -1)],
                }
            }
        };
        Ok((h, step))
    }
}

/// Moves available from `t`: free moves first (blowdowns, then elementary
/// transformations), then blowups. Lowest identifiers first throughout.
fn moves(t: &Tree, with_blowups: bool, out: &mut Vec<Move>) {
    out.clear();
    let (order, n) = t.by_id();
    let order = &order[..n];
    let vid = |i: usize| VertexId(t.id[i]);
    for &i in order {
        if t.contractible(i) {
            out.push(Move::Blowdown(vid(i)));
        }
    }
    for &i in order {
        if t.w[i] != 0 || t.genus[i] > 0 {
            continue;
        }
        match t.degree(i) {
            2 => {
                let mut nb: Vec<usize> = t.nbrs(i).collect();
                nb.sort_unstable_by_key(|&j| t.id[j]);
                for j in nb {
                    out.push(Move::Elem(vid(i), Some(vid(j))));
                }
            }
            0 | 1 => out.push(Move::Elem(vid(i), None)),
            _ => {}
        }
    }
    if with_blowups {
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for i in 0..n {
            for j in t.nbrs(i) {
                if t.id[i] < t.id[j] {
                    edges.push((t.id[i], t.id[j]));
                }
            }
        }
        edges.sort_unstable();
        for (a, b) in edges {
            out.push(Move::BlowupEdge(VertexId(a), VertexId(b)));
        }
        for &i in order {
            out.push(Move::BlowupVertex(vid(i)));
        }
    }
}

/// Search tree: how each visited state was first reached.
struct Visited {
    parents: Vec<Option<(usize, Move)>>,
}

impl Visited {
    fn len(&self) -> usize {
        self.parents.len()
    }

    fn path_to(&self, mut idx: usize) -> Vec<Move> {
        let mut path = Vec::new();
        while let Some((p, m)) = self.parents[idx] {
            path.push(m);
            idx = p;
        }
        path.reverse();
        path
    }
}

/// Layered breadth-first exploration: layer `k` holds graphs first reached
/// with `k` bare blowups. `visit` is called once per new graph in BFS order
/// and may stop the search by returning `true`.
fn explore(
    start: &WeightedGraph,
    window: Window,
    budget: SearchBudget,
    mut visit: impl FnMut(&Tree) -> bool,
) -> Result<(Visited, Option<usize>), SurgeryError> {
    let root = Tree::from_graph(start).ok_or(SurgeryError::SearchBudgetExceeded(budget))?;
    let cap = budget.size_cap.min(MAXV);
    let mut visited = Visited { parents: vec![None] };
    let mut seen: FxHashSet<Box<[u8]>> = FxHashSet::default();
    seen.insert(root.code());
    if visit(&root) {
        return Ok((visited, Some(0)));
    }
    let mut frontier: Vec<(usize, Tree)> = vec![(0, root)];
    let mut buf = Vec::new();
    for layer in 0..=budget.blowup_depth {
        let allow_blowups = layer < budget.blowup_depth;
        let mut queue: VecDeque<(usize, Tree)> = frontier.drain(..).collect();
        let mut next_layer: Vec<(usize, Tree, Move, Box<[u8]>)> = Vec::new();
        while let Some((idx, t)) = queue.pop_front() {
            moves(&t, allow_blowups, &mut buf);
            for &m in &buf {
                if m.is_blowup() && t.n >= cap {
                    continue;
                }
                let h = t.apply(m);
                if h.n > cap || !window.admits(&h) {
                    continue;
                }
                let code = h.code();
                if seen.contains(&code) {
                    continue;
                }
                if m.is_blowup() {
                    next_layer.push((idx, h, m, code));
                    continue;
                }
                let id = visited.len();
                visited.parents.push(Some((idx, m)));
                seen.insert(code);
                if visited.len() > budget.max_states {
                    return Err(SurgeryError::SearchBudgetExceeded(budget));
                }
                if visit(&h) {
                    return Ok((visited, Some(id)));
                }
                queue.push_back((id, h));
            }
        }
        for (parent, h, m, code) in next_layer {
            if !seen.insert(code) {
                continue;
            }
            let id = visited.len();
            visited.parents.push(Some((parent, m)));
            if visited.len() > budget.max_states {
                return Err(SurgeryError::SearchBudgetExceeded(budget));
            }
            if visit(&h) {
                return Ok((visited, Some(id)));
            }
            frontier.push((id, h));
        }
    }
    Ok((visited, None))
}

fn contractible(g: &WeightedGraph, v: VertexId) -> bool {
    let vx = g.vertex(v).expect("vertex");
    vx.weight == -1 && vx.genus == 0 && g.degree(v) <= 2 && g.len() > 1
}

/// Replays a move path on the full graph, keeping roles and names.
fn replay(g: &WeightedGraph, path: &[Move]) -> Result<(WeightedGraph, Vec<SurgeryStep>), SurgeryError> {
    let mut cur = g.clone();
    let mut steps = Vec::with_capacity(path.len());
    for &m in path {
        let (h, step) = m.on_graph(&cur)?;
        steps.push(step);
        cur = h;
    }
    Ok((cur, steps))
}

/// Standardizes with [`SearchBudget::default`].
pub fn standardize(g: &WeightedGraph) -> Result<(WeightedGraph, SurgeryTranscript), SurgeryError> {
    standardize_with(g, SearchBudget::default())
}

/// Returns a standard graph reachable from `g` and the transcript leading there.
///
/// First contracts `(-1)`-vertices of degree at most two (lowest identifier
/// first, never the last vertex), then runs the layered search until a graph
/// satisfying the standard predicate appears.
pub fn standardize_with(
    g: &WeightedGraph,
    budget: SearchBudget,
) -> Result<(WeightedGraph, SurgeryTranscript), SurgeryError> {
    if !g.is_tree() {
        return Err(SurgeryError::NotATree);
    }
    let window = Window::for_start(g, budget.blowup_depth);
    let mut cur = g.clone();
    let mut steps = Vec::new();
    loop {
        let candidate = cur.ids().find(|&v| {
            if !contractible(&cur, v) {
                return false;
            }
            let mut h = cur.clone();
            raw_blow_down(&mut h, v).expect("contractible");
            window.admits_graph(&h)
        });
        let Some(v) = candidate else { break };
        let nbrs = raw_blow_down(&mut cur, v)?;
        steps.push(SurgeryStep {
            kind: StepKind::Blowdown { vertex: v },
            created: vec![],
            destroyed: vec![v],
            deltas: nbrs.into_iter().map(|w| (w, 1)).collect(),
        });
    }
    let (visited, found) = explore(&cur, window, budget, |t| {
        t.may_be_standard() && is_standard_graph(&t.graph(), false)
    })?;
    let idx = found.ok_or(SurgeryError::SearchBudgetExceeded(budget))?;
    let (final_graph, tail) = replay(&cur, &visited.path_to(idx))?;
    steps.extend(tail);
    Ok((
        final_graph.clone(),
        SurgeryTranscript {
            initial: g.clone(),
            steps,
            final_graph,
        },
    ))
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    /// Standard graphs met during the search, one representative per code.
    pub standard: BTreeMap<CanonicalCode, WeightedGraph>,
    pub explored: usize,
}

impl OracleResult {
    pub fn codes(&self) -> impl Iterator<Item = &CanonicalCode> {
        self.standard.keys()
    }
}

/// Closure of `g` under blowdowns, elementary transformations and at most
/// `blowup_depth` bare blowups; collects every standard graph encountered.
pub fn confluence_oracle(
    g: &WeightedGraph,
    blowup_depth: u32,
    size_cap: usize,
) -> Result<OracleResult, SurgeryError> {
    let budget = SearchBudget {
        blowup_depth,
        size_cap,
        ..SearchBudget::default()
    };
    if !g.is_tree() {
        return Err(SurgeryError::NotATree);
    }
    if g.len() > size_cap {
        return Err(SurgeryError::SearchBudgetExceeded(budget));
    }
    let window = Window::for_start(g, blowup_depth);
    let mut standard = BTreeMap::new();
    let mut failure = None;
    let (visited, _) = explore(g, window, budget, |t| {
        if t.may_be_standard() {
            let h = t.graph();
            if is_standard_graph(&h, false) {
                match shape_code(&h) {
                    Ok(code) => {
                        standard.entry(code).or_insert(h);
                    }
                    Err(e) => {
                        failure = Some(e);
                        return true;
                    }
                }
            }
        }
        false
    })?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(OracleResult {
        standard,
        explored: visited.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Zigzag;
    use crate::surgery::reverse;

    fn code(ws: &[i64]) -> CanonicalCode {
        shape_code(&WeightedGraph::chain(ws)).unwrap()
    }

    #[test]
    fn standard_input_is_fixed() {
        let g = WeightedGraph::chain(&[0, 0, -2, -3]);
        let (s, t) = standardize(&g).unwrap();
        assert_eq!(s, g);
        assert!(t.is_empty());
    }

    #[test]
    fn contraction_then_standard() {
        let (s, t) = standardize(&WeightedGraph::chain(&[0, -1, -1])).unwrap();
        assert_eq!(shape_code(&s).unwrap(), code(&[0, 0]));
        t.verify().unwrap();
    }

    #[test]
    fn positive_weight_chain() {
        let g = WeightedGraph::chain(&[1, 0, -3]);
        let (s, t) = standardize(&g).unwrap();
        assert!(is_standard_graph(&s, false));
        t.verify().unwrap();
        let oracle = confluence_oracle(&g, 2, 10).unwrap();
        assert!(oracle.standard.contains_key(&shape_code(&s).unwrap()));
        assert_eq!(shape_code(&s).unwrap(), code(&[0, 0, -2]));
    }

    #[test]
    fn oracle_examples() {
        let got: Vec<_> = confluence_oracle(&WeightedGraph::chain(&[0, 0, -2, -3]), 2, 10)
            .unwrap()
            .codes()
            .cloned()
            .collect();
        let mut want = vec![code(&[0, 0, -2, -3]), code(&[0, 0, -3, -2])];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(
            confluence_oracle(&WeightedGraph::chain(&[0, 0]), 2, 10)
                .unwrap()
                .standard
                .len(),
            1
        );
        assert_eq!(
            confluence_oracle(&WeightedGraph::chain(&[0, 0, -2, -2]), 2, 10)
                .unwrap()
                .standard
                .len(),
            1
        );
    }

    #[test]
    fn oracle_finds_exactly_the_reversion_pair() {
        for ws in [vec![0, 0, -2, -4], vec![0, 0, -3, -2, -2], vec![0, 0, -2]] {
            let z = Zigzag::new(ws.clone()).unwrap();
            let (r, _) = reverse(&z).unwrap();
            let got: Vec<_> = confluence_oracle(&z.to_graph(), 2, 8).unwrap().codes().cloned().collect();
            let mut want = vec![code(&ws), code(r.weights())];
            want.sort();
            want.dedup();
            assert_eq!(got, want, "{z}");
        }
    }

    #[test]
    fn standardize_is_idempotent() {
        for ws in [vec![0, -1, -1], vec![1, 0, -3], vec![-2, 0, -3]] {
            let (s, _) = standardize(&WeightedGraph::chain(&ws)).unwrap();
            let (_, t) = standardize(&s).unwrap();
            assert!(t.is_empty());
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let budget = SearchBudget {
            blowup_depth: 0,
            size_cap: 4,
            max_states: 1000,
        };
        assert!(matches!(
            standardize_with(&WeightedGraph::chain(&[-1]), budget),
            Err(SurgeryError::SearchBudgetExceeded(_))
        ));
    }
}
