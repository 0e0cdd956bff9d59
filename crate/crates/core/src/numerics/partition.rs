use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::factorial;
use crate::error::{HurwitzError, Result};

/// An integer partition, parts stored weakly decreasing.
///
/// The empty partition is the unique partition of 0; it indexes constant
/// terms of series and has length 0 and a trivial automorphism group.
/// Partitions also serve as monomial keys (`q_alpha = prod q_{alpha_i}`), so
/// ordering is graded: first by size, then by length, then reverse-lex on
/// the parts.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from parts in any order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(HurwitzError::InvalidPartition(format!(
                "zero part in {parts:?}"
            )));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// `1^d`.
    pub fn ones(d: u32) -> Self {
        Partition {
            parts: vec![1; d as usize],
        }
    }

    /// The one-part partition `(k)`.
    pub fn single(k: u32) -> Self {
        assert!(k > 0, "single part must be positive");
        Partition { parts: vec![k] }
    }

    pub(crate) fn from_sorted_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&p| p > 0));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `d = |alpha|`.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `l(alpha)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Multiplicity of `part`.
    pub fn multiplicity(&self, part: u32) -> usize {
        self.parts.iter().filter(|&&p| p == part).count()
    }

    /// Pairs `(part, multiplicity)` with distinct parts, largest first.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `|Aut alpha| = prod_m (multiplicity of m)!`.
    pub fn aut_order(&self) -> BigInt {
        self.multiplicities()
            .into_iter()
            .fold(BigInt::one(), |acc, (_, m)| acc * factorial(m as u32))
    }

    /// Multiset union (monomial product).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.parts.len() && j < other.parts.len() {
            if self.parts[i] >= other.parts[j] {
                parts.push(self.parts[i]);
                i += 1;
            } else {
                parts.push(other.parts[j]);
                j += 1;
            }
        }
        parts.extend_from_slice(&self.parts[i..]);
        parts.extend_from_slice(&other.parts[j..]);
        Partition { parts }
    }

    /// Adds one part.
    pub fn with_part(&self, part: u32) -> Partition {
        assert!(part > 0);
        let pos = self.parts.partition_point(|&p| p >= part);
        let mut parts = self.parts.clone();
        parts.insert(pos, part);
        Partition { parts }
    }

    /// Removes one copy of `part`, if present.
    pub fn without_part(&self, part: u32) -> Option<Partition> {
        let pos = self.parts.iter().position(|&p| p == part)?;
        let mut parts = self.parts.clone();
        parts.remove(pos);
        Some(Partition { parts })
    }

    /// True when every part of `self` occurs in `other` at least as often.
    pub fn divides(&self, other: &Partition) -> bool {
        let mut j = 0;
        for &p in &self.parts {
            while j < other.parts.len() && other.parts[j] > p {
                j += 1;
            }
            if j == other.parts.len() || other.parts[j] != p {
                return false;
            }
            j += 1;
        }
        true
    }

    /// Multiset difference `other \ self`, assuming `self` divides `other`.
    pub fn complement_in(&self, other: &Partition) -> Option<Partition> {
        let mut rest = other.parts.clone();
        for &p in &self.parts {
            let pos = rest.iter().position(|&q| q == p)?;
            rest.remove(pos);
        }
        Some(Partition { parts: rest })
    }

    /// Multiset intersection.
    pub fn meet(&self, other: &Partition) -> Partition {
        let mut parts = Vec::new();
        for (p, m) in self.multiplicities() {
            let k = m.min(other.multiplicity(p));
            parts.extend(std::iter::repeat(p).take(k));
        }
        Partition { parts }
    }

    /// All sub-multisets, each listed once.
    pub fn sub_multisets(&self) -> Vec<Partition> {
        let mut out = vec![Vec::new()];
        for (p, m) in self.multiplicities() {
            let mut next = Vec::with_capacity(out.len() * (m + 1));
            for base in &out {
                for k in 0..=m {
                    let mut v: Vec<u32> = base.clone();
                    v.extend(std::iter::repeat(p).take(k));
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(Partition::from_sorted_unchecked)
            .collect()
    }

    /// All partitions of `n`, in reverse-lexicographic order.
    pub fn all_of(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(n: u32, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition::from_sorted_unchecked(current.clone()));
                return;
            }
            for p in (1..=max.min(n)).rev() {
                current.push(p);
                rec(n - p, p, current, out);
                current.pop();
            }
        }
        rec(n, n, &mut current, &mut out);
        out
    }

    /// All partitions of `n` with exactly `len` parts.
    pub fn all_with_length(n: u32, len: usize) -> Vec<Partition> {
        Partition::all_of(n)
            .into_iter()
            .filter(|p| p.len() == len)
            .collect()
    }

    /// All partitions with `len` parts, every part at most `max_part`.
    pub fn all_bounded(len: usize, max_part: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(len: usize, max: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if len == 0 {
                out.push(Partition::from_sorted_unchecked(current.clone()));
                return;
            }
            for p in 1..=max {
                current.push(p);
                rec(len - 1, p, current, out);
                current.pop();
            }
        }
        rec(len, max_part, &mut current, &mut out);
        out
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then(self.len().cmp(&other.len()))
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = HurwitzError;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(HurwitzError::InvalidPartition(format!(
                "parts not weakly decreasing: {parts:?}"
            )));
        }
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Vec<u32> {
        p.parts
    }
}

impl FromStr for Partition {
    type Err = HurwitzError;

    /// Parses comma-separated parts, e.g. `"3,2,2"`; `""` or `"0"` is empty.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim().parse::<u32>().map_err(|e| {
                    HurwitzError::InvalidPartition(format!("bad part {t:?}: {e}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "(0)");
        }
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn aut_order_examples() {
        assert_eq!(p(&[1, 1]).aut_order(), BigInt::from(2));
        assert_eq!(p(&[3, 2, 2, 1]).aut_order(), BigInt::from(2));
        assert_eq!(p(&[2, 2, 2]).aut_order(), BigInt::from(6));
        assert_eq!(Partition::empty().aut_order(), BigInt::from(1));
    }

    #[test]
    fn empty_partition() {
        let e = Partition::empty();
        assert_eq!(e.size(), 0);
        assert_eq!(e.len(), 0);
        assert_eq!("0".parse::<Partition>().unwrap(), e);
    }

    #[test]
    fn rejects_zero_and_unsorted_deserialize() {
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
        assert_eq!(serde_json::from_str::<Partition>("[2,1]").unwrap(), p(&[2, 1]));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=10).map(|n| Partition::all_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn multiset_ops() {
        let a = p(&[3, 2, 2, 1]);
        assert!(p(&[2, 1]).divides(&a));
        assert!(!p(&[2, 2, 2]).divides(&a));
        assert_eq!(p(&[2, 1]).complement_in(&a), Some(p(&[3, 2])));
        assert_eq!(a.sub_multisets().len(), 2 * 3 * 2);
        assert_eq!(p(&[2, 1]).union(&p(&[3, 2])), a);
        assert_eq!(p(&[3, 1]).with_part(2), p(&[3, 2, 1]));
        assert_eq!(a.meet(&p(&[2, 2, 2, 1, 1])), p(&[2, 2, 1]));
    }

    #[test]
    fn parse_and_display() {
        let a: Partition = "2, 3,1".parse().unwrap();
        assert_eq!(a.parts(), &[3, 2, 1]);
        assert_eq!(a.to_string(), "(3,2,1)");
    }
}
