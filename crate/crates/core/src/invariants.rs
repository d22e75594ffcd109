//! Configuration invariants, reversion of normalized graphs and the
//! deformation-equivalence decision.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::canon::canonical_code;
use crate::chain::Zigzag;
use crate::extended::{mother_map, ComponentKind, ExtendedError, ExtendedGraph, NormalizedExtendedGraph};
use crate::graph::{Role, VertexId, WeightedGraph};
use crate::surgery::reverse;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("star configuration contains the point 0")]
    ZeroPointInStar,
    #[error("feather {0} has no base point coordinate")]
    MissingCoordinates(VertexId),
    #[error("recorded mother of feather {0} disagrees with the contraction")]
    InconsistentInstance(VertexId),
    #[error("boundary is not a zigzag [[0,0,w_2,...,w_n]] with w_i <= -2")]
    NotAZigzag,
    #[error("mother index {index} outside 2..={n}")]
    IndexOutOfRange { index: u32, n: u32 },
    #[error("chain length must be positive")]
    InvalidChainLength,
    #[error(transparent)]
    Extended(#[from] ExtendedError),
}

/// Formats a rational as `num/den`.
pub fn rational_string(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// A multiset of base points on one boundary component, in the chart where
/// `∞_C` (and for star components `0_C`) is removed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointConfig {
    pub kind: ComponentKind,
    points: Vec<BigRational>,
}

impl PointConfig {
    pub fn new(kind: ComponentKind, mut points: Vec<BigRational>) -> Result<Self, InvariantError> {
        if kind == ComponentKind::Star && points.iter().any(Zero::is_zero) {
            return Err(InvariantError::ZeroPointInStar);
        }
        points.sort();
        Ok(PointConfig { kind, points })
    }

    pub fn from_ints(kind: ComponentKind, points: &[i64]) -> Result<Self, InvariantError> {
        PointConfig::new(
            kind,
            points.iter().map(|&p| BigRational::from_integer(p.into())).collect(),
        )
    }

    /// Sorted points.
    pub fn points(&self) -> &[BigRational] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_text(&self) -> String {
        let pts: Vec<String> = self.points.iter().map(rational_string).collect();
        format!("{}:{}", self.kind.as_str(), pts.join(","))
    }
}

fn distinct(points: &[BigRational]) -> Vec<&BigRational> {
    let mut d: Vec<&BigRational> = points.iter().collect();
    d.dedup();
    d
}

fn sorted(mut v: Vec<BigRational>) -> Vec<BigRational> {
    v.sort();
    v
}

/// Orbit representative under `z ↦ az + b` (plus) or `z ↦ az` (star).
pub fn canonical_config(c: &PointConfig) -> Result<PointConfig, InvariantError> {
    let pts = &c.points;
    let n = pts.len();
    let points = match c.kind {
        ComponentKind::Plus => {
            let values = distinct(pts);
            if values.len() <= 1 {
                vec![BigRational::zero(); n]
            } else {
                let mut best: Option<Vec<BigRational>> = None;
                for &p in &values {
                    for &q in &values {
                        if p == q {
                            continue;
                        }
                        let scale = q - p;
                        let cand = sorted(pts.iter().map(|z| (z - p) / &scale).collect());
                        if best.as_ref().is_none_or(|b| cand < *b) {
                            best = Some(cand);
                        }
                    }
                }
                best.expect("two distinct values")
            }
        }
        ComponentKind::Star => {
            if pts.iter().any(Zero::is_zero) {
                return Err(InvariantError::ZeroPointInStar);
            }
            let mut best: Option<Vec<BigRational>> = None;
            for p in distinct(pts) {
                let cand = sorted(pts.iter().map(|z| z / p).collect());
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
            best.unwrap_or_default()
        }
    };
    Ok(PointConfig {
        kind: c.kind,
        points,
    })
}

/// Canonical point configuration per boundary component with `δ_C > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConfigurationInvariant {
    pub entries: BTreeMap<VertexId, PointConfig>,
}

impl ConfigurationInvariant {
    /// One `id=kind:p/q,...` line per component, in increasing id order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, c) in &self.entries {
            let _ = writeln!(out, "{}={}", id.0, c.to_text());
        }
        out
    }
}

/// Where a feather was born: its mother and the coordinate of the center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseCoordinate {
    pub mother: VertexId,
    pub point: BigRational,
}

/// An extended graph whose feathers carry base-point coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinatedGraph {
    pub extended: ExtendedGraph,
    pub base_points: BTreeMap<VertexId, BaseCoordinate>,
}

pub fn configuration_invariant(inst: &CoordinatedGraph) -> Result<ConfigurationInvariant, InvariantError> {
    let mothers = mother_map(&inst.extended)?;
    let mut groups: BTreeMap<VertexId, Vec<BigRational>> = BTreeMap::new();
    for (&f, fm) in &mothers.feathers {
        let bc = inst
            .base_points
            .get(&f)
            .ok_or(InvariantError::MissingCoordinates(f))?;
        if bc.mother != fm.mother {
            return Err(InvariantError::InconsistentInstance(f));
        }
        groups.entry(fm.mother).or_default().push(bc.point.clone());
    }
    let mut entries = BTreeMap::new();
    for (c, pts) in groups {
        let kind = mothers.kinds.get(&c).copied().unwrap_or(ComponentKind::Plus);
        entries.insert(c, canonical_config(&PointConfig::new(kind, pts)?)?);
    }
    Ok(ConfigurationInvariant { entries })
}

/// Vertices of a `[[0,0,w_2,...,w_n]]` boundary in position order.
fn zigzag_positions(b: &WeightedGraph) -> Option<Vec<VertexId>> {
    let mut order = b.path_order()?;
    let ws = |o: &[VertexId]| -> Vec<i64> { o.iter().map(|&v| b.weight(v).expect("v")).collect() };
    let fits = |o: &[VertexId]| {
        let w = ws(o);
        w.len() >= 3
            && w[0] == 0
            && w[1] == 0
            && w[2..].iter().all(|&x| x <= -2)
            && b.vertex(o[0]).expect("v").role != Role::Section
    };
    if !fits(&order) {
        order.reverse();
        if !fits(&order) {
            return None;
        }
    }
    Some(order)
}

/// Reversion of a normalized graph with zigzag boundary. Vertex identifiers
/// stay at their positions; weights and `δ` move by `i ↦ n - i + 2`.
pub fn reverse_normalized(d: &NormalizedExtendedGraph) -> Result<NormalizedExtendedGraph, InvariantError> {
    let order = zigzag_positions(&d.boundary).ok_or(InvariantError::NotAZigzag)?;
    let n = order.len() - 1;
    let weights: Vec<i64> = order.iter().map(|&v| d.boundary.weight(v).expect("v")).collect();
    let (rev, _) = reverse(&Zigzag::new(weights).expect("non-empty")).map_err(|_| InvariantError::NotAZigzag)?;
    let mut boundary = d.boundary.clone();
    for (pos, &v) in order.iter().enumerate() {
        boundary.set_weight(v, rev.weights()[pos]).expect("present");
    }
    let position: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let delta = d
        .delta
        .iter()
        .map(|(v, &k)| {
            let i = position[v];
            let j = if i >= 2 { n - i + 2 } else { i };
            (order[j], k)
        })
        .collect();
    Ok(NormalizedExtendedGraph { boundary, delta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    DirectIso,
    ReversedIso,
    GenusMismatch,
    GraphMismatch,
}

impl Witness {
    pub fn as_str(self) -> &'static str {
        match self {
            Witness::DirectIso => "DirectIso",
            Witness::ReversedIso => "ReversedIso",
            Witness::GenusMismatch => "GenusMismatch",
            Witness::GraphMismatch => "GraphMismatch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub equivalent: bool,
    pub witness: Witness,
}

impl Verdict {
    fn of(witness: Witness) -> Verdict {
        Verdict {
            equivalent: matches!(witness, Witness::DirectIso | Witness::ReversedIso),
            witness,
        }
    }
}

fn realized_code(d: &NormalizedExtendedGraph) -> Option<crate::canon::CanonicalCode> {
    canonical_code(&d.realized()).ok()
}

pub fn decide_equivalence(
    d1: &NormalizedExtendedGraph,
    g1: u32,
    d2: &NormalizedExtendedGraph,
    g2: u32,
) -> Verdict {
    if g1 != g2 {
        return Verdict::of(Witness::GenusMismatch);
    }
    let c1 = realized_code(d1);
    if c1.is_some() && c1 == realized_code(d2) {
        return Verdict::of(Witness::DirectIso);
    }
    if zigzag_positions(&d1.boundary).is_some() {
        if let Ok(r2) = reverse_normalized(d2) {
            if c1.is_some() && c1 == realized_code(&r2) {
                return Verdict::of(Witness::ReversedIso);
            }
        }
    }
    Verdict::of(Witness::GraphMismatch)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FeatherTriple {
    pub mother_index: u32,
    pub base_point: BigRational,
    pub chain_length: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatherData {
    pub triples: Vec<FeatherTriple>,
}

/// Feather data on the reversed side: `(t, p, m) ↦ (n - t + 2, p, m)`.
pub fn match_feather_data(fd: &FeatherData, n: u32) -> Result<FeatherData, InvariantError> {
    let triples = fd
        .triples
        .iter()
        .map(|t| {
            if !(2..=n).contains(&t.mother_index) {
                return Err(InvariantError::IndexOutOfRange {
                    index: t.mother_index,
                    n,
                });
            }
            if t.chain_length == 0 {
                return Err(InvariantError::InvalidChainLength);
            }
            Ok(FeatherTriple {
                mother_index: n - t.mother_index + 2,
                base_point: t.base_point.clone(),
                chain_length: t.chain_length,
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(FeatherData { triples })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigDimensions {
    pub per_component: BTreeMap<VertexId, u32>,
    pub total: u32,
}

/// Dimension of the automorphism group of `C*` fixing `∞_C` (and `0_C`).
pub fn aut_dimension(kind: ComponentKind) -> u32 {
    match kind {
        ComponentKind::Plus => 2,
        ComponentKind::Star => 1,
    }
}

/// Generic orbit dimension `max(0, δ_C - dim Aut)` per component with
/// `δ_C > 0`; components missing from `kinds` count as plus components.
pub fn config_space_dim(
    d: &NormalizedExtendedGraph,
    kinds: &BTreeMap<VertexId, ComponentKind>,
) -> ConfigDimensions {
    let per_component: BTreeMap<VertexId, u32> = d
        .delta
        .iter()
        .map(|(&c, &delta)| {
            let kind = kinds.get(&c).copied().unwrap_or(ComponentKind::Plus);
            (c, delta.saturating_sub(aut_dimension(kind)))
        })
        .collect();
    let total = per_component.values().sum();
    ConfigDimensions { per_component, total }
}

/// Applies `z ↦ az + b`; used by tests and the acceptance suite.
pub fn act(c: &PointConfig, a: &BigRational, b: &BigRational) -> PointConfig {
    let b = if c.kind == ComponentKind::Star { BigRational::zero() } else { b.clone() };
    PointConfig {
        kind: c.kind,
        points: sorted(c.points.iter().map(|z| a * z + &b).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::extended::normalize;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn plus(p: &[i64]) -> PointConfig {
        PointConfig::from_ints(ComponentKind::Plus, p).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_config(&plus(&[7])).unwrap().points(), &[q(0, 1)]);
        assert_eq!(
            canonical_config(&plus(&[0, 1, 3])).unwrap().points(),
            &[q(-2, 1), q(0, 1), q(1, 1)]
        );
        let star = PointConfig::from_ints(ComponentKind::Star, &[2, 6]).unwrap();
        assert_eq!(canonical_config(&star).unwrap().points(), &[q(1, 3), q(1, 1)]);
        assert_eq!(
            canonical_config(&plus(&[4, 4, 4])).unwrap().points(),
            &[q(0, 1), q(0, 1), q(0, 1)]
        );
        assert_eq!(
            PointConfig::from_ints(ComponentKind::Star, &[0, 1]),
            Err(InvariantError::ZeroPointInStar)
        );
    }

    #[test]
    fn canonical_oracle_plus_triple() {
        // Independent check: brute force over the six affine normalizations,
        // written out by hand for {0,1,3}.
        let cands = [
            vec![q(0, 1), q(1, 1), q(3, 1)],
            vec![q(-2, 1), q(0, 1), q(1, 1)],
            vec![q(0, 1), q(1, 3), q(1, 1)],
            vec![q(0, 1), q(2, 3), q(1, 1)],
            vec![q(-1, 2), q(0, 1), q(1, 1)],
            vec![q(0, 1), q(1, 1), q(3, 2)],
        ];
        let min = cands.iter().min().unwrap();
        assert_eq!(canonical_config(&plus(&[0, 1, 3])).unwrap().points(), min.as_slice());
    }

    #[test]
    fn rational_text() {
        assert_eq!(rational_string(&q(6, -4)), "-3/2");
        assert_eq!(parse_rational("6/4"), Some(q(3, 2)));
        assert_eq!(parse_rational("-5"), Some(q(-5, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn reversion_of_special_gizatullin() {
        for n in 3..=6 {
            for t in 2..=n {
                let d = catalog::special_gizatullin(n, 2, t);
                let r = reverse_normalized(&d).unwrap();
                assert_eq!(r, catalog::special_gizatullin(n, 2, n - t + 2), "n={n} t={t}");
                assert_eq!(reverse_normalized(&r).unwrap(), d);
            }
        }
    }

    #[test]
    fn dg_reversion_is_fixed() {
        for n in 3..=7 {
            let d = normalize(&catalog::danilov_gizatullin(n, 1)).unwrap();
            assert_eq!(reverse_normalized(&d).unwrap(), d);
        }
    }

    #[test]
    fn equivalence_examples() {
        let a = normalize(&catalog::danilov_gizatullin(5, 1)).unwrap();
        let b = normalize(&catalog::danilov_gizatullin(5, 3)).unwrap();
        assert_eq!(decide_equivalence(&a, 0, &b, 0).witness, Witness::DirectIso);
        let v = decide_equivalence(&a, 0, &a, 1);
        assert_eq!((v.equivalent, v.witness), (false, Witness::GenusMismatch));
        let s3 = catalog::special_gizatullin(5, 2, 3);
        let s4 = catalog::special_gizatullin(5, 2, 4);
        let v = decide_equivalence(&s3, 0, &s4, 0);
        assert_eq!((v.equivalent, v.witness), (true, Witness::ReversedIso));
        let s5 = catalog::special_gizatullin(5, 1, 3);
        assert_eq!(decide_equivalence(&s3, 0, &s5, 0).witness, Witness::GraphMismatch);
    }

    #[test]
    fn feather_data_matching() {
        let fd = FeatherData {
            triples: vec![FeatherTriple {
                mother_index: 3,
                base_point: q(5, 7),
                chain_length: 2,
            }],
        };
        let m = match_feather_data(&fd, 5).unwrap();
        assert_eq!(m.triples[0].mother_index, 4);
        assert_eq!(m.triples[0].base_point, q(5, 7));
        assert_eq!(match_feather_data(&m, 5).unwrap(), fd);
        let dg = FeatherData {
            triples: vec![FeatherTriple {
                mother_index: 2,
                base_point: q(1, 1),
                chain_length: 1,
            }],
        };
        assert_eq!(match_feather_data(&dg, 6).unwrap().triples[0].mother_index, 6);
        let bad = FeatherData {
            triples: vec![FeatherTriple {
                mother_index: 1,
                base_point: q(0, 1),
                chain_length: 1,
            }],
        };
        assert_eq!(
            match_feather_data(&bad, 5),
            Err(InvariantError::IndexOutOfRange { index: 1, n: 5 })
        );
    }

    #[test]
    fn dimensions() {
        let mut d = catalog::gizatullin_boundary(&[-2, -2, -2]);
        d.delta.insert(VertexId(2), 1);
        d.delta.insert(VertexId(3), 3);
        d.delta.insert(VertexId(4), 2);
        let kinds = BTreeMap::from([(VertexId(4), ComponentKind::Star)]);
        let dims = config_space_dim(&d, &kinds);
        assert_eq!(dims.per_component[&VertexId(2)], 0);
        assert_eq!(dims.per_component[&VertexId(3)], 1);
        assert_eq!(dims.per_component[&VertexId(4)], 1);
        assert_eq!(dims.total, 2);
    }

    #[test]
    fn plus_triples_have_one_free_value() {
        // Sampled oracle for the generic dimension: canonical forms of generic
        // triples always contain 0 and 1, leaving one free coordinate.
        for (a, b, c) in [(0, 5, 9), (-3, 2, 11), (1, 4, 100), (7, -8, 2)] {
            let cf = canonical_config(&plus(&[a, b, c])).unwrap();
            assert!(cf.points().contains(&q(0, 1)) && cf.points().contains(&q(1, 1)));
        }
    }

    fn rat() -> impl Strategy<Value = BigRational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| q(n, d))
    }

    fn nonzero_rat() -> impl Strategy<Value = BigRational> {
        rat().prop_filter("nonzero", |r| !r.is_zero())
    }

    proptest! {
        #[test]
        fn plus_canonical_is_invariant(pts in prop::collection::vec(rat(), 0..=5), a in nonzero_rat(), b in rat()) {
            let c = PointConfig::new(ComponentKind::Plus, pts).unwrap();
            let k = canonical_config(&c).unwrap();
            prop_assert_eq!(canonical_config(&act(&c, &a, &b)).unwrap(), k.clone());
            prop_assert_eq!(canonical_config(&k).unwrap(), k);
        }

        #[test]
        fn star_canonical_is_invariant(pts in prop::collection::vec(nonzero_rat(), 0..=5), a in nonzero_rat()) {
            let c = PointConfig::new(ComponentKind::Star, pts).unwrap();
            let k = canonical_config(&c).unwrap();
            prop_assert_eq!(canonical_config(&act(&c, &a, &BigRational::zero())).unwrap(), k.clone());
            prop_assert_eq!(canonical_config(&k).unwrap(), k);
        }
    }
}
