//! Zigzags (linear chains) and the standard / semi-standard normal forms.

use std::fmt;

use thiserror::Error;

use crate::graph::WeightedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("a zigzag needs at least one component")]
    Empty,
    #[error("graph is not a linear chain")]
    NotLinear,
}

/// Weights `[[w_0, ..., w_n]]` of a linear chain. Stored oriented, compared
/// unoriented through [`Zigzag::same_chain`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Zigzag {
    weights: Vec<i64>,
}

impl Zigzag {
    pub fn new(weights: Vec<i64>) -> Result<Self, ChainError> {
        if weights.is_empty() {
            return Err(ChainError::Empty);
        }
        Ok(Zigzag { weights })
    }

    pub fn from_graph(g: &WeightedGraph) -> Result<Self, ChainError> {
        let weights = g.chain_weights().ok_or(ChainError::NotLinear)?;
        Zigzag::new(weights)
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn reversed(&self) -> Zigzag {
        let mut weights = self.weights.clone();
        weights.reverse();
        Zigzag { weights }
    }

    /// Equality as abstract (unoriented) chains.
    pub fn same_chain(&self, other: &Zigzag) -> bool {
        self.weights == other.weights || self.weights.iter().eq(other.weights.iter().rev())
    }

    pub fn to_graph(&self) -> WeightedGraph {
        WeightedGraph::chain(&self.weights)
    }
}

impl fmt::Display for Zigzag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[[")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str("]]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainClass {
    Standard,
    /// `[[0, w_1, w_2, ..., w_n]]` or `[[0, w_1, 0]]`, carrying `w_1`.
    SemiStandard { w1: i64 },
    Neither,
}

impl ChainClass {
    pub fn is_semi_standard(self) -> bool {
        !matches!(self, ChainClass::Neither)
    }
}

fn all_at_most_minus_two(ws: &[i64]) -> bool {
    ws.iter().all(|&w| w <= -2)
}

fn standard_reading(ws: &[i64]) -> bool {
    if ws.len() <= 3 && ws.iter().all(|&w| w == 0) {
        return true;
    }
    let tail = if ws.starts_with(&[0, 0]) { &ws[2..] } else { ws };
    !tail.is_empty() && all_at_most_minus_two(tail)
}

fn semi_standard_reading(ws: &[i64]) -> Option<i64> {
    match ws {
        [0, w1, 0] => Some(*w1),
        [0, w1, rest @ ..] if all_at_most_minus_two(rest) => Some(*w1),
        _ => None,
    }
}

/// Classifies a chain, reading it from either end.
pub fn classify_chain(z: &Zigzag) -> ChainClass {
    classify_weights(z.weights())
}

pub(crate) fn classify_weights(ws: &[i64]) -> ChainClass {
    let rev: Vec<i64> = ws.iter().rev().copied().collect();
    if standard_reading(ws) || standard_reading(&rev) {
        return ChainClass::Standard;
    }
    match semi_standard_reading(ws).or_else(|| semi_standard_reading(&rev)) {
        Some(w1) => ChainClass::SemiStandard { w1 },
        None => ChainClass::Neither,
    }
}

fn circular_shape(ws: &[i64]) -> bool {
    if all_at_most_minus_two(ws) {
        return true;
    }
    if ws.starts_with(&[0, 0]) && ws.len() > 2 && all_at_most_minus_two(&ws[2..]) {
        return true;
    }
    if ws.len() <= 4 {
        let (zeros, last) = ws.split_at(ws.len() - 1);
        if zeros.iter().all(|&w| w == 0) && last[0] <= 0 {
            return true;
        }
    }
    ws == [0, 0, -1, -1]
}

/// Standard circular graphs `((w_1..w_n))`, `((0,0,w_1..w_n))`,
/// `((0_l, w))` and `((0,0,-1,-1))`, matched up to rotation and reflection.
pub fn is_standard_circular(weights: &[i64]) -> bool {
    if weights.is_empty() {
        return false;
    }
    let n = weights.len();
    let mut rotated = Vec::with_capacity(n);
    for start in 0..n {
        for reflect in [false, true] {
            rotated.clear();
            for k in 0..n {
                let idx = if reflect {
                    (start + n - k) % n
                } else {
                    (start + k) % n
                };
                rotated.push(weights[idx]);
            }
            if circular_shape(&rotated) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(ws: &[i64]) -> Zigzag {
        Zigzag::new(ws.to_vec()).unwrap()
    }

    #[test]
    fn standard_examples() {
        assert_eq!(classify_chain(&z(&[0, 0, -2, -3])), ChainClass::Standard);
        assert_eq!(classify_chain(&z(&[-2, -3])), ChainClass::Standard);
        assert_eq!(
            classify_chain(&z(&[0, -2])),
            ChainClass::SemiStandard { w1: -2 }
        );
        assert_eq!(classify_chain(&z(&[0, 0, 0, 0])), ChainClass::Neither);
    }

    #[test]
    fn zero_runs() {
        for k in 1..=3 {
            assert_eq!(classify_chain(&z(&vec![0; k])), ChainClass::Standard);
        }
        assert_eq!(classify_chain(&z(&[-3, -2, 0, 0])), ChainClass::Standard);
        assert_eq!(
            classify_chain(&z(&[0, 4, 0])),
            ChainClass::SemiStandard { w1: 4 }
        );
        assert_eq!(
            classify_chain(&z(&[-2, 7, 0])),
            ChainClass::SemiStandard { w1: 7 }
        );
        assert_eq!(classify_chain(&z(&[0, -1, -1])), ChainClass::Neither);
        assert_eq!(classify_chain(&z(&[-1])), ChainClass::Neither);
        assert_eq!(classify_chain(&z(&[1, 0, -3])), ChainClass::Neither);
    }

    #[test]
    fn empty_zigzag_rejected() {
        assert_eq!(Zigzag::new(vec![]), Err(ChainError::Empty));
    }

    #[test]
    fn circular_examples() {
        assert!(is_standard_circular(&[-2, -2, -3]));
        assert!(is_standard_circular(&[0, 0, -1, -1]));
        assert!(is_standard_circular(&[-1, 0, 0, -1]));
        assert!(is_standard_circular(&[-3, 0, 0, -2]));
        // ((0_l, w)) with l = 1, w = -2.
        assert!(is_standard_circular(&[0, -2]));
        assert!(!is_standard_circular(&[0, 1]));
        assert!(!is_standard_circular(&[0, 0, 0, 0, 0]));
        assert!(!is_standard_circular(&[0, -1, -1]));
        assert!(!is_standard_circular(&[]));
    }

    proptest! {
        #[test]
        fn classification_ignores_orientation(ws in prop::collection::vec(-5i64..=3, 1..=8)) {
            let zz = Zigzag::new(ws).unwrap();
            prop_assert_eq!(classify_chain(&zz), classify_chain(&zz.reversed()));
        }
    }
}
