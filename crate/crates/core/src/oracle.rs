//! Ground-truth counting of transitive transposition factorizations in `S_d`.
//!
//! Conventions: permutations are arrays `p[x] = image of x`, acting on the
//! right, and products are evaluated left to right, so
//! `(p * t)[x] = t[p[x]]`. A tuple `(rho, t_1, ..., t_r)` with
//! `rho t_1 ... t_r = id` is determined by the transposition sequence, and
//! `rho` has the cycle type of `t_1 ... t_r`. The group generated by the tuple
//! is the group generated by the transpositions alone.
//!
//! Two independent counters are provided:
//!
//! * a dynamic program over `(permutation, r)` that processes the larger
//!   element `b` of `(a b)` in increasing order (monotone) or over all
//!   transpositions (classical), producing counts with transitivity NOT
//!   imposed; transitive counts are then recovered by peeling off the orbit
//!   of the point `0`: `Total_d = sum_k C(d-1, k-1) T_k * Total_{d-k}`. For
//!   monotone sequences with disjoint supports the interleaving that keeps
//!   the `b`-values sorted is unique, so the convolution in `r` is ordinary;
//!   for classical sequences it carries a binomial factor;
//! * a depth-first enumeration of monotone sequences with a union-find
//!   connectivity check.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{HurwitzError, Result};
use crate::numerics::{binomial, Partition};

/// Largest degree accepted by the dynamic program.
pub const MAX_DEGREE_DP: u32 = 8;
/// Largest transposition count accepted by the dynamic program.
pub const MAX_TRANSPOSITIONS_DP: u32 = 24;
/// Largest degree accepted by the depth-first enumerator.
pub const MAX_DEGREE_DFS: u32 = 7;
/// Largest transposition count accepted by the depth-first enumerator.
pub const MAX_TRANSPOSITIONS_DFS: u32 = 12;

/// Which family of factorizations to count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Monotone,
    Classical,
}

/// A counting request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorQuery {
    pub alpha: Partition,
    /// `None` means `1^d`.
    pub beta: Option<Partition>,
    pub r: u32,
    pub monotone: bool,
    pub transitive: bool,
}

impl FactorQuery {
    pub fn single(alpha: Partition, r: u32, family: Family) -> Self {
        FactorQuery {
            alpha,
            beta: None,
            r,
            monotone: family == Family::Monotone,
            transitive: true,
        }
    }

    pub fn run(&self) -> Result<BigUint> {
        let d = self.alpha.size();
        if let Some(beta) = &self.beta {
            if beta.size() != d {
                return Err(HurwitzError::SizeMismatch(d, beta.size()));
            }
            if !(self.monotone && self.transitive) {
                return Err(HurwitzError::OutOfRange(
                    "double counts are only available for transitive monotone tuples".into(),
                ));
            }
            return count_monotone_double(&self.alpha, beta, self.r);
        }
        let family = if self.monotone {
            Family::Monotone
        } else {
            Family::Classical
        };
        if self.transitive {
            let table = CountTable::build(d, self.r, family)?;
            Ok(table.get(&self.alpha, self.r))
        } else {
            let all = totals_by_dp(d, self.r, family)?;
            Ok(all
                .get(&(self.alpha.clone(), self.r))
                .map(|c| BigUint::from(*c))
                .unwrap_or_default())
        }
    }
}

/// Exact transitive counts `(alpha, r) -> count` for every `alpha |- d` and
/// `r <= r_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    pub d: u32,
    pub r_max: u32,
    pub family: Family,
    counts: BTreeMap<(Partition, u32), BigUint>,
}

impl CountTable {
    /// Transitive counts by dynamic programming plus orbit decomposition.
    pub fn build(d: u32, r_max: u32, family: Family) -> Result<Self> {
        check_dp_bounds(d, r_max)?;
        let transitive = transitive_tables(d, r_max, family)?;
        let top = transitive
            .into_iter()
            .last()
            .expect("tables for every size up to d");
        let mut counts = BTreeMap::new();
        for ((alpha, r), c) in top {
            let c = c.to_biguint().ok_or_else(|| {
                HurwitzError::Assertion(format!(
                    "negative transitive count at {alpha} r={r}: {c}"
                ))
            })?;
            if !c.is_zero() {
                counts.insert((alpha, r), c);
            }
        }
        Ok(CountTable {
            d,
            r_max,
            family,
            counts,
        })
    }

    /// Transitive monotone counts by depth-first enumeration.
    pub fn build_dfs(d: u32, r_max: u32) -> Result<Self> {
        check_dfs_bounds(d, r_max)?;
        let mut counts = BTreeMap::new();
        for r in 0..=r_max {
            for (alpha, c) in dfs_monotone(d, r, None, true) {
                if c > 0 {
                    counts.insert((alpha, r), BigUint::from(c));
                }
            }
        }
        Ok(CountTable {
            d,
            r_max,
            family: Family::Monotone,
            counts,
        })
    }

    pub fn get(&self, alpha: &Partition, r: u32) -> BigUint {
        self.counts
            .get(&(alpha.clone(), r))
            .cloned()
            .unwrap_or_default()
    }

    /// Nonzero entries.
    pub fn entries(&self) -> impl Iterator<Item = (&(Partition, u32), &BigUint)> {
        self.counts.iter()
    }
}

fn check_dp_bounds(d: u32, r: u32) -> Result<()> {
    if d == 0 {
        return Err(HurwitzError::OutOfRange("degree must be at least 1".into()));
    }
    if d > MAX_DEGREE_DP {
        return Err(HurwitzError::ResourceBound {
            what: "degree d",
            got: d as usize,
            limit: MAX_DEGREE_DP as usize,
        });
    }
    if r > MAX_TRANSPOSITIONS_DP {
        return Err(HurwitzError::ResourceBound {
            what: "transposition count r",
            got: r as usize,
            limit: MAX_TRANSPOSITIONS_DP as usize,
        });
    }
    Ok(())
}

fn check_dfs_bounds(d: u32, r: u32) -> Result<()> {
    if d == 0 {
        return Err(HurwitzError::OutOfRange("degree must be at least 1".into()));
    }
    if d > MAX_DEGREE_DFS {
        return Err(HurwitzError::ResourceBound {
            what: "degree d",
            got: d as usize,
            limit: MAX_DEGREE_DFS as usize,
        });
    }
    if r > MAX_TRANSPOSITIONS_DFS {
        return Err(HurwitzError::ResourceBound {
            what: "transposition count r",
            got: r as usize,
            limit: MAX_TRANSPOSITIONS_DFS as usize,
        });
    }
    Ok(())
}

/// `H->^r(alpha)`: transitive monotone factorizations.
pub fn count_monotone_transitive(alpha: &Partition, r: u32) -> Result<BigUint> {
    Ok(CountTable::build(alpha.size(), r, Family::Monotone)?.get(alpha, r))
}

/// `H^r(alpha)`: transitive factorizations without the monotone condition.
pub fn count_classical_transitive(alpha: &Partition, r: u32) -> Result<BigUint> {
    Ok(CountTable::build(alpha.size(), r, Family::Classical)?.get(alpha, r))
}

/// Same as [`count_monotone_transitive`], by depth-first enumeration.
pub fn count_monotone_transitive_dfs(alpha: &Partition, r: u32) -> Result<BigUint> {
    let d = alpha.size();
    check_dfs_bounds(d, r)?;
    let counts = dfs_monotone(d, r, None, true);
    Ok(BigUint::from(counts.get(alpha).copied().unwrap_or(0)))
}

/// Monotone tuple counts with transitivity NOT imposed, for every `alpha |- d`.
pub fn count_monotone_all(d: u32, r: u32) -> Result<BTreeMap<Partition, BigUint>> {
    check_dp_bounds(d, r)?;
    let totals = totals_by_dp(d, r, Family::Monotone)?;
    Ok(Partition::all_of(d)
        .into_iter()
        .map(|alpha| {
            let c = totals
                .get(&(alpha.clone(), r))
                .copied()
                .unwrap_or(0);
            (alpha, BigUint::from(c))
        })
        .collect())
}

/// Monotone double count: tuples `(rho, sigma, t_1..t_r)` with `rho` of type
/// `alpha`, `sigma` of type `beta`, `rho sigma t_1 ... t_r = id`, monotone
/// transpositions, and transitive generated group.
pub fn count_monotone_double(alpha: &Partition, beta: &Partition, r: u32) -> Result<BigUint> {
    let d = alpha.size();
    if beta.size() != d {
        return Err(HurwitzError::SizeMismatch(d, beta.size()));
    }
    check_dfs_bounds(d, r)?;
    let group = SymmetricGroup::new(d as usize);
    let mut total: u128 = 0;
    for sigma in group.perms.iter().filter(|p| &cycle_type(p) == beta) {
        // rho = (sigma t_1 ... t_r)^{-1} has the cycle type of sigma t_1 ... t_r
        let counts = dfs_monotone(d, r, Some(sigma), true);
        total += counts.get(alpha).copied().unwrap_or(0);
    }
    Ok(BigUint::from(total))
}

/// Cycle type of a permutation array.
pub fn cycle_type(p: &[u8]) -> Partition {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x] as usize;
            len += 1;
        }
        parts.push(len);
    }
    Partition::new(parts).expect("cycle lengths are positive")
}

struct SymmetricGroup {
    d: usize,
    perms: Vec<Vec<u8>>,
    /// Transpositions `(a, b)` with `a < b`, sorted by `b` then `a`.
    transpositions: Vec<(u8, u8)>,
    /// `right_mul[i * T + t]` = index of `perms[i] * transpositions[t]`.
    right_mul: Vec<u32>,
}

impl SymmetricGroup {
    fn new(d: usize) -> Self {
        let mut perms = Vec::new();
        let mut cur: Vec<u8> = (0..d as u8).collect();
        permutations(&mut cur, 0, &mut perms);
        perms.sort();
        let mut transpositions = Vec::new();
        for b in 1..d as u8 {
            for a in 0..b {
                transpositions.push((a, b));
            }
        }
        let nt = transpositions.len();
        let mut right_mul = vec![0u32; perms.len() * nt];
        for (i, p) in perms.iter().enumerate() {
            for (t, &(a, b)) in transpositions.iter().enumerate() {
                let q: Vec<u8> = p
                    .iter()
                    .map(|&x| {
                        if x == a {
                            b
                        } else if x == b {
                            a
                        } else {
                            x
                        }
                    })
                    .collect();
                right_mul[i * nt + t] = rank(&q) as u32;
            }
        }
        SymmetricGroup {
            d,
            perms,
            transpositions,
            right_mul,
        }
    }

    fn identity_index(&self) -> usize {
        0
    }
}

fn permutations(cur: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

/// Lexicographic rank (Lehmer code).
fn rank(p: &[u8]) -> usize {
    let n = p.len();
    let mut r = 0;
    for i in 0..n {
        let smaller = p[i + 1..].iter().filter(|&&x| x < p[i]).count();
        r = r * (n - i) + smaller;
    }
    r
}

type Graded = BTreeMap<(Partition, u32), BigInt>;

/// Non-transitive counts keyed by `(cycle type of product, r)`, all `r <= r_max`.
fn totals_by_dp(d: u32, r_max: u32, family: Family) -> Result<BTreeMap<(Partition, u32), u128>> {
    check_dp_bounds(d, r_max)?;
    let group = SymmetricGroup::new(d as usize);
    let n = group.perms.len();
    let nt = group.transpositions.len();
    let rows = r_max as usize + 1;
    let mut dp = vec![vec![0u128; n]; rows];
    dp[0][group.identity_index()] = 1;

    match family {
        Family::Monotone => {
            // transpositions sharing the same b form one contiguous block
            let mut start = 0;
            for b in 1..group.d {
                let block = start..start + b;
                start += b;
                for r in 1..rows {
                    let (lo, hi) = dp.split_at_mut(r);
                    let prev = &lo[r - 1];
                    let cur = &mut hi[0];
                    for (i, &c) in prev.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for t in block.clone() {
                            cur[group.right_mul[i * nt + t] as usize] += c;
                        }
                    }
                }
            }
        }
        Family::Classical => {
            for r in 1..rows {
                let (lo, hi) = dp.split_at_mut(r);
                let prev = &lo[r - 1];
                let cur = &mut hi[0];
                for (i, &c) in prev.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for t in 0..nt {
                        cur[group.right_mul[i * nt + t] as usize] += c;
                    }
                }
            }
        }
    }

    let types: Vec<Partition> = group.perms.iter().map(|p| cycle_type(p)).collect();
    let mut out = BTreeMap::new();
    for (r, row) in dp.iter().enumerate() {
        for (i, &c) in row.iter().enumerate() {
            if c != 0 {
                *out.entry((types[i].clone(), r as u32)).or_insert(0u128) += c;
            }
        }
    }
    Ok(out)
}

fn to_graded(m: &BTreeMap<(Partition, u32), u128>) -> Graded {
    m.iter()
        .map(|(k, &v)| (k.clone(), BigInt::from(v)))
        .collect()
}

/// Product of two graded count maps with disjoint ground sets.
fn convolve(a: &Graded, b: &Graded, r_max: u32, family: Family) -> Graded {
    let mut out = Graded::new();
    for ((alpha, r1), c1) in a {
        for ((beta, r2), c2) in b {
            let r = r1 + r2;
            if r > r_max {
                continue;
            }
            let mut c = c1 * c2;
            if family == Family::Classical {
                c *= binomial(r, *r1);
            }
            *out.entry((alpha.union(beta), r)).or_insert_with(BigInt::zero) += c;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Transitive tables for every size `1..=d` (index `k - 1`).
fn transitive_tables(d: u32, r_max: u32, family: Family) -> Result<Vec<Graded>> {
    let mut totals: Vec<Graded> = Vec::with_capacity(d as usize + 1);
    let mut empty = Graded::new();
    empty.insert((Partition::empty(), 0), BigInt::from(1));
    totals.push(empty);
    for m in 1..=d {
        totals.push(to_graded(&totals_by_dp(m, r_max, family)?));
    }

    let mut transitive: Vec<Graded> = Vec::with_capacity(d as usize);
    for m in 1..=d {
        let mut t = totals[m as usize].clone();
        for k in 1..m {
            let orbit = &transitive[k as usize - 1];
            let rest = &totals[(m - k) as usize];
            let ways = BigInt::from(binomial(m - 1, k - 1));
            for (key, c) in convolve(orbit, rest, r_max, family) {
                let slot = t.entry(key).or_insert_with(BigInt::zero);
                *slot -= c * &ways;
            }
        }
        t.retain(|_, v| !v.is_zero());
        transitive.push(t);
    }
    Ok(transitive)
}

/// Transitive tables for each size, exposed for self-consistency checks.
pub fn transitive_tables_by_size(
    d: u32,
    r_max: u32,
    family: Family,
) -> Result<Vec<BTreeMap<(Partition, u32), BigUint>>> {
    check_dp_bounds(d, r_max)?;
    Ok(transitive_tables(d, r_max, family)?
        .into_iter()
        .map(|t| {
            t.into_iter()
                .map(|(k, v)| (k, v.to_biguint().expect("transitive counts are nonnegative")))
                .collect()
        })
        .collect())
}

/// Non-transitive totals for each `(alpha, r)`, exposed for self-consistency checks.
pub fn nontransitive_totals(
    d: u32,
    r_max: u32,
    family: Family,
) -> Result<BTreeMap<(Partition, u32), BigUint>> {
    Ok(totals_by_dp(d, r_max, family)?
        .into_iter()
        .map(|(k, v)| (k, BigUint::from(v)))
        .collect())
}

fn find(parent: &mut [u8], x: u8) -> u8 {
    let mut x = x;
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// Depth-first enumeration of monotone sequences of length `r`, starting from
/// the product `start` (identity when `None`), tallying the cycle type of the
/// final product. The orbits of `start` count towards connectivity.
fn dfs_monotone(d: u32, r: u32, start: Option<&Vec<u8>>, transitive: bool) -> BTreeMap<Partition, u128> {
    let d = d as usize;
    let product: Vec<u8> = start.cloned().unwrap_or_else(|| (0..d as u8).collect());
    let mut parent: Vec<u8> = (0..d as u8).collect();
    for x in 0..d {
        let (a, b) = (find(&mut parent, x as u8), find(&mut parent, product[x]));
        if a != b {
            parent[a as usize] = b;
        }
    }

    struct Walk {
        d: usize,
        remaining: u32,
        transitive: bool,
        counts: BTreeMap<Partition, u128>,
    }

    fn step(w: &mut Walk, product: &mut Vec<u8>, parent: &[u8], min_b: usize, depth: u32) {
        if depth == w.remaining {
            if w.transitive {
                let mut parent = parent.to_vec();
                let root = find(&mut parent, 0);
                if (1..w.d as u8).any(|x| find(&mut parent, x) != root) {
                    return;
                }
            }
            *w.counts.entry(cycle_type(product)).or_insert(0) += 1;
            return;
        }
        for b in min_b..w.d {
            for a in 0..b {
                let (a8, b8) = (a as u8, b as u8);
                let saved = product.clone();
                for x in product.iter_mut() {
                    if *x == a8 {
                        *x = b8;
                    } else if *x == b8 {
                        *x = a8;
                    }
                }
                let mut next_parent = parent.to_vec();
                let (ra, rb) = (find(&mut next_parent, a8), find(&mut next_parent, b8));
                if ra != rb {
                    next_parent[ra as usize] = rb;
                }
                step(w, product, &next_parent, b, depth + 1);
                *product = saved;
            }
        }
    }

    let mut w = Walk {
        d,
        remaining: r,
        transitive,
        counts: BTreeMap::new(),
    };
    let mut product = product;
    step(&mut w, &mut product, &parent, 1, 0);
    w.counts
}

/// Convenience: a count as `u64`, panicking on overflow (test helper).
pub fn to_u64(c: &BigUint) -> u64 {
    c.to_u64().expect("count fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn mono(parts: &[u32], r: u32) -> u64 {
        to_u64(&count_monotone_transitive(&p(parts), r).unwrap())
    }

    fn classical(parts: &[u32], r: u32) -> u64 {
        to_u64(&count_classical_transitive(&p(parts), r).unwrap())
    }

    #[test]
    fn monotone_examples() {
        assert_eq!(mono(&[1], 0), 1);
        assert_eq!(mono(&[2], 1), 1);
        assert_eq!(mono(&[3], 2), 4);
        assert_eq!(mono(&[2], 3), 1);
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical(&[2], 1), 1);
        assert_eq!(classical(&[3], 2), 6);
        assert_eq!(classical(&[1, 1], 2), 1);
    }

    #[test]
    fn double_examples() {
        let c = |a: &[u32], b: &[u32], r| to_u64(&count_monotone_double(&p(a), &p(b), r).unwrap());
        assert_eq!(c(&[2], &[2], 0), 1);
        assert_eq!(c(&[2], &[1, 1], 1), 1);
        assert!(matches!(
            count_monotone_double(&p(&[2]), &p(&[1]), 1),
            Err(HurwitzError::SizeMismatch(2, 1))
        ));
    }

    #[test]
    fn double_with_trivial_beta_is_single() {
        for d in 1..=4 {
            for alpha in Partition::all_of(d) {
                for r in 0..=4 {
                    assert_eq!(
                        count_monotone_double(&alpha, &Partition::ones(d), r).unwrap(),
                        count_monotone_transitive(&alpha, r).unwrap(),
                        "{alpha} r={r}"
                    );
                }
            }
        }
    }

    #[test]
    fn all_counts_examples() {
        let m = count_monotone_all(1, 0).unwrap();
        assert_eq!(m[&p(&[1])], BigUint::from(1u32));
        let m = count_monotone_all(2, 2).unwrap();
        assert_eq!(m[&p(&[1, 1])], BigUint::from(1u32));
        assert_eq!(m[&p(&[2])], BigUint::from(0u32));
        let m = count_monotone_all(2, 1).unwrap();
        assert_eq!(m[&p(&[2])], BigUint::from(1u32));
        assert_eq!(m[&p(&[1, 1])], BigUint::from(0u32));
    }

    #[test]
    fn resource_guard() {
        assert!(matches!(
            count_monotone_transitive(&p(&[9]), 2),
            Err(HurwitzError::ResourceBound { .. })
        ));
        assert!(matches!(
            count_monotone_transitive_dfs(&p(&[8]), 2),
            Err(HurwitzError::ResourceBound { .. })
        ));
    }

    #[test]
    fn rank_is_bijective() {
        let g = SymmetricGroup::new(4);
        for (i, q) in g.perms.iter().enumerate() {
            assert_eq!(rank(q), i);
        }
    }

    #[test]
    fn query_dispatch() {
        let q = FactorQuery::single(p(&[3]), 2, Family::Classical);
        assert_eq!(q.run().unwrap(), BigUint::from(6u32));
        let q = FactorQuery {
            alpha: p(&[1, 1]),
            beta: None,
            r: 2,
            monotone: true,
            transitive: false,
        };
        // (12)(12) is the only monotone pair; it is transitive on two points
        assert_eq!(q.run().unwrap(), BigUint::from(1u32));
    }
}
