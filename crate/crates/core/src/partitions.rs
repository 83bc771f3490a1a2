//! Strict partitions, containment and upward-closed sets of them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("parts {0:?} are not strictly decreasing positive integers")]
    NotStrict(Vec<usize>),
    #[error("cannot parse partition from {0:?}")]
    Parse(String),
}

/// λ₁ > λ₂ > ⋯ > λ_r > 0.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct StrictPartition {
    parts: Vec<usize>,
}

impl StrictPartition {
    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        let strict = parts.windows(2).all(|w| w[0] > w[1]) && parts.last().is_none_or(|&p| p > 0);
        if strict {
            Ok(StrictPartition { parts })
        } else {
            Err(PartitionError::NotStrict(parts))
        }
    }

    pub fn empty() -> Self {
        StrictPartition { parts: Vec::new() }
    }

    /// Convenience constructor for literals; panics on non-strict input.
    pub fn from_slice(parts: &[usize]) -> Self {
        Self::new(parts.to_vec()).expect("strict partition literal")
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// λᵢ with missing parts read as zero (0-based).
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// 0 if ℓ(λ) is even, 1 if odd.
    pub fn delta(&self) -> usize {
        self.parts.len() % 2
    }

    /// Containment of shifted diagrams: λᵢ ≤ μᵢ for all i.
    pub fn is_contained_in(&self, mu: &StrictPartition) -> bool {
        self.len() <= mu.len() && self.parts.iter().zip(&mu.parts).all(|(a, b)| a <= b)
    }

    /// Strict partitions obtained by adding one box.
    pub fn add_box(&self) -> Vec<StrictPartition> {
        let mut out = Vec::new();
        for i in 0..=self.len() {
            let mut p = self.parts.clone();
            if i == p.len() {
                p.push(1);
            } else {
                p[i] += 1;
            }
            if let Ok(sp) = StrictPartition::new(p) {
                out.push(sp);
            }
        }
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// Strict partitions obtained by removing one box.
    pub fn remove_box(&self) -> Vec<StrictPartition> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            let mut p = self.parts.clone();
            p[i] -= 1;
            if p[i] == 0 {
                p.pop();
            }
            if let Ok(sp) = StrictPartition::new(p) {
                out.push(sp);
            }
        }
        out.sort_by(|a, b| b.cmp(a));
        out
    }
}

/// By size, then lexicographic on parts.
impl Ord for StrictPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for StrictPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn delta(lambda: &StrictPartition) -> usize {
    lambda.delta()
}

pub fn contains(lambda: &StrictPartition, mu: &StrictPartition) -> bool {
    lambda.is_contained_in(mu)
}

/// All strict partitions of `n`, lexicographically descending.
pub fn enumerate_strict(n: usize) -> Vec<StrictPartition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<StrictPartition>) {
        if rest == 0 {
            out.push(StrictPartition { parts: cur.clone() });
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All strict partitions of size at most `n`, by size then descending.
pub fn enumerate_strict_up_to(n: usize) -> Vec<StrictPartition> {
    (0..=n).flat_map(enumerate_strict).collect()
}

/// The staircase (r+1, r, …, 1).
pub fn staircase(r: usize) -> StrictPartition {
    StrictPartition { parts: (1..=r + 1).rev().collect() }
}

/// Number of standard shifted tableaux of shape λ.
pub fn shifted_standard_count(lambda: &StrictPartition) -> u64 {
    if lambda.is_empty() {
        return 1;
    }
    lambda.remove_box().iter().map(shifted_standard_count).sum()
}

impl fmt::Display for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for StrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for StrictPartition {
    type Err = PartitionError;

    /// Parses `"3,1"`; the empty string is the empty partition.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(StrictPartition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PartitionError::Parse(s.to_string()))?;
        StrictPartition::new(parts)
    }
}

impl TryFrom<String> for StrictPartition {
    type Error = PartitionError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<StrictPartition> for String {
    fn from(p: StrictPartition) -> String {
        p.to_string()
    }
}

/// An upward-closed set of strict partitions, stored by its minimal elements.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PosetIdeal {
    generators: Vec<StrictPartition>,
}

impl PosetIdeal {
    /// Reduces `gens` to an antichain of minimal elements.
    pub fn new(gens: impl IntoIterator<Item = StrictPartition>) -> Self {
        let mut all: Vec<StrictPartition> = gens.into_iter().collect();
        all.sort();
        all.dedup();
        let mut generators: Vec<StrictPartition> = Vec::new();
        for g in all {
            // sorted by size, so any generator below g is already present
            if !generators.iter().any(|h| h.is_contained_in(&g)) {
                generators.push(g);
            }
        }
        PosetIdeal { generators }
    }

    pub fn generators(&self) -> &[StrictPartition] {
        &self.generators
    }

    pub fn contains(&self, mu: &StrictPartition) -> bool {
        self.generators.iter().any(|g| g.is_contained_in(mu))
    }
}

pub fn ideal_member(ideal: &PosetIdeal, mu: &StrictPartition) -> bool {
    ideal.contains(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: &[usize]) -> StrictPartition {
        StrictPartition::from_slice(p)
    }

    #[test]
    fn delta_values() {
        assert_eq!(sp(&[2, 1]).delta(), 0);
        assert_eq!(sp(&[3]).delta(), 1);
        assert_eq!(sp(&[]).delta(), 0);
    }

    #[test]
    fn containment_examples() {
        assert!(contains(&sp(&[2]), &sp(&[2, 1])));
        assert!(!contains(&sp(&[2]), &sp(&[1])));
        assert!(contains(&sp(&[3, 1]), &sp(&[4, 1])));
        assert!(!contains(&sp(&[2, 1]), &sp(&[3])));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_strict(4), vec![sp(&[4]), sp(&[3, 1])]);
        assert_eq!(enumerate_strict(0), vec![sp(&[])]);
        assert_eq!(
            enumerate_strict(6),
            vec![sp(&[6]), sp(&[5, 1]), sp(&[4, 2]), sp(&[3, 2, 1])]
        );
        let counts: Vec<usize> = (0..=10).map(|n| enumerate_strict(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10]);
    }

    #[test]
    fn staircase_examples() {
        assert_eq!(staircase(0), sp(&[1]));
        assert_eq!(staircase(1), sp(&[2, 1]));
        assert_eq!(staircase(2), sp(&[3, 2, 1]));
    }

    #[test]
    fn rejects_non_strict() {
        assert!(StrictPartition::new(vec![2, 2]).is_err());
        assert!(StrictPartition::new(vec![2, 0]).is_err());
        assert!(StrictPartition::new(vec![1, 3]).is_err());
        assert!("2,2".parse::<StrictPartition>().is_err());
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(sp(&[3, 1]).to_string(), "3,1");
        assert_eq!(sp(&[]).to_string(), "");
        assert_eq!("3,1".parse::<StrictPartition>().unwrap(), sp(&[3, 1]));
        assert_eq!("".parse::<StrictPartition>().unwrap(), sp(&[]));
        let json = serde_json::to_string(&sp(&[5, 2])).unwrap();
        assert_eq!(json, "\"5,2\"");
    }

    #[test]
    fn ideal_membership_examples() {
        let i = PosetIdeal::new([sp(&[2])]);
        assert!(ideal_member(&i, &sp(&[3, 1])));
        assert!(!ideal_member(&i, &sp(&[1])));
        let stair = PosetIdeal::new([staircase(2)]);
        for mu in enumerate_strict_up_to(12) {
            if mu.len() > 2 {
                assert!(ideal_member(&stair, &mu), "{mu:?}");
            }
        }
    }

    #[test]
    fn ideal_generators_reduce_to_antichain() {
        let i = PosetIdeal::new([sp(&[3, 1]), sp(&[2]), sp(&[2, 1]), sp(&[2])]);
        assert_eq!(i.generators(), &[sp(&[2])]);
        let j = PosetIdeal::new([sp(&[3]), sp(&[2, 1])]);
        assert_eq!(j.generators().len(), 2);
    }

    #[test]
    fn containment_is_a_partial_order() {
        let all = enumerate_strict_up_to(8);
        for a in &all {
            assert!(a.is_contained_in(a));
            for b in &all {
                if a.is_contained_in(b) && b.is_contained_in(a) {
                    assert_eq!(a, b);
                }
                for c in &all {
                    if a.is_contained_in(b) && b.is_contained_in(c) {
                        assert!(a.is_contained_in(c));
                    }
                }
            }
        }
    }

    #[test]
    fn membership_is_upward_closed() {
        let all = enumerate_strict_up_to(8);
        let ideals = [
            PosetIdeal::new([sp(&[2])]),
            PosetIdeal::new([sp(&[3]), sp(&[2, 1])]),
            PosetIdeal::new([staircase(1)]),
        ];
        for i in &ideals {
            for mu in &all {
                for nu in &all {
                    if mu.is_contained_in(nu) && i.contains(mu) {
                        assert!(i.contains(nu));
                    }
                }
            }
        }
    }

    #[test]
    fn long_partitions_contain_the_staircase() {
        // ℓ(μ) ≥ k forces the staircase with top row k inside μ
        for k in 1..=4 {
            let stair = staircase(k - 1);
            for mu in enumerate_strict_up_to(12) {
                if mu.len() >= k {
                    assert!(stair.is_contained_in(&mu), "{stair:?} in {mu:?}");
                }
            }
        }
    }

    #[test]
    fn shifted_tableaux_counts() {
        assert_eq!(shifted_standard_count(&sp(&[3, 1])), 2);
        assert_eq!(shifted_standard_count(&sp(&[2, 1])), 1);
        assert_eq!(shifted_standard_count(&sp(&[4, 2, 1])), 7);
    }
}
