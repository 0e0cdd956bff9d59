//! Degree-by-degree solution of the monotone and classical join-cut equations
//! on truncated series.
//!
//! Both equations share the right-hand side
//!
//! ```text
//! 1/2 sum_{i,j>=1} ( (i+j) p_i p_j dH/dp_{i+j}            (cut)
//!                  + i j p_{i+j} d2H/dp_i dp_j             (join)
//!                  + i j p_{i+j} dH/dp_i dH/dp_j )         (product)
//! ```
//!
//! and differ on the left: `(1/2t)(z dH/dz - z p_1)` for monotone numbers,
//! `dH/dt` for classical ones. Write `h(alpha, r) = [z^d t^r p_alpha] H`, so
//! `h = H^r(alpha)/d!` (monotone) or `H^r(alpha)/(d! r!)` (classical), and
//! let `m_k(beta)` be the multiplicity of `k` in `beta`. Extracting
//! `[t^r p_alpha]` of the right-hand side gives, for `|alpha| = d`:
//!
//! * cut, for distinct values `i < j` of `alpha`, with
//!   `beta = alpha - {i, j} + {i+j}`: `(i+j) m_{i+j}(beta) h(beta, r)`;
//!   for a value `i` with `m_i(alpha) >= 2`, `beta = alpha - {i, i} + {2i}`:
//!   `i m_{2i}(beta) h(beta, r)`;
//! * join, for each distinct value `k` of `alpha` and `i < j` with
//!   `i + j = k`, `beta = alpha - {k} + {i, j}`: `i j m_i(beta) m_j(beta)
//!   h(beta, r)`; when `i = j = k/2`: `1/2 i^2 m_i(beta) (m_i(beta) - 1)
//!   h(beta, r)`;
//! * product, for each distinct value `k` of `alpha`, each ordered `(i, j)`
//!   with `i + j = k`, and each split of `alpha - {k}` into sub-multisets
//!   `gamma_1 + gamma_2`, with `beta_1 = gamma_1 + {i}` and `beta_2 = gamma_2
//!   + {j}`: `1/2 i j m_i(beta_1) m_j(beta_2) sum_{r_1 + r_2 = r}
//!   h(beta_1, r_1) h(beta_2, r_2)`.
//!
//! The left side then fixes `h(alpha, r+1)`: `d/2 h(alpha, r+1) = RHS`
//! (monotone) or `(r+1) h(alpha, r+1) = RHS` (classical). The `t^0` row is the
//! seed `h((1), 0) = 1`.
//!
//! [`pde_residual`] evaluates the operators term by term on a truncated
//! series instead, which checks the extraction above.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{HurwitzError, Result};
use crate::numerics::{big, factorial, int, rat, Partition, Rat};
use crate::oracle::Family;

/// Truncated Hurwitz table: `(alpha, r) -> H^r(alpha)` for `|alpha| <= max_degree`,
/// `r <= max_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedH {
    pub max_degree: u32,
    pub max_r: u32,
    pub family: Family,
    numbers: BTreeMap<(Partition, u32), Rat>,
}

impl TruncatedH {
    /// `H^r(alpha)`; zero outside the stored support.
    pub fn get(&self, alpha: &Partition, r: u32) -> Rat {
        self.numbers
            .get(&(alpha.clone(), r))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// `H_g(alpha)` with `r = 2g - 2 + l(alpha) + d`; `None` when `r` is
    /// negative or beyond the truncation.
    pub fn genus(&self, alpha: &Partition, g: u32) -> Option<Rat> {
        let r = (2 * g + alpha.len() as u32 + alpha.size()).checked_sub(2)?;
        (r <= self.max_r && alpha.size() <= self.max_degree).then(|| self.get(alpha, r))
    }

    /// Nonzero entries.
    pub fn entries(&self) -> impl Iterator<Item = (&(Partition, u32), &Rat)> {
        self.numbers.iter()
    }

    /// `[z^d t^r p_alpha]` of the generating function.
    pub fn normalized(&self, alpha: &Partition, r: u32) -> Rat {
        self.get(alpha, r) / normalizer(alpha.size(), r, self.family)
    }
}

fn normalizer(d: u32, r: u32, family: Family) -> Rat {
    match family {
        Family::Monotone => big(&factorial(d)),
        Family::Classical => big(&(factorial(d) * factorial(r))),
    }
}

type Coeffs = BTreeMap<(Partition, u32), Rat>;

fn coeff(h: &Coeffs, beta: &Partition, r: u32) -> Rat {
    h.get(&(beta.clone(), r)).cloned().unwrap_or_else(Rat::zero)
}

fn all_partitions_up_to(max_degree: u32) -> Vec<Partition> {
    (1..=max_degree).flat_map(Partition::all_of).collect()
}

/// `[t^r p_alpha]` of the shared right-hand side, pulled from known coefficients.
fn rhs_coefficient(h: &Coeffs, alpha: &Partition, r: u32) -> Rat {
    let mut total = Rat::zero();
    let mult = alpha.multiplicities();

    // cut
    for (x, &(i, mi)) in mult.iter().enumerate() {
        if mi >= 2 {
            let beta = alpha
                .without_part(i)
                .and_then(|b| b.without_part(i))
                .expect("two copies present")
                .with_part(2 * i);
            total += int(i as i64) * int(beta.multiplicity(2 * i) as i64) * coeff(h, &beta, r);
        }
        for &(j, _) in &mult[x + 1..] {
            let beta = alpha
                .without_part(i)
                .and_then(|b| b.without_part(j))
                .expect("both parts present")
                .with_part(i + j);
            total +=
                int((i + j) as i64) * int(beta.multiplicity(i + j) as i64) * coeff(h, &beta, r);
        }
    }

    for &(k, _) in &mult {
        let rest = alpha.without_part(k).expect("part present");
        // join
        for i in 1..=k / 2 {
            let j = k - i;
            let beta = rest.with_part(i).with_part(j);
            let c = coeff(h, &beta, r);
            if c.is_zero() {
                continue;
            }
            if i < j {
                let f = (i * j) as i64 * (beta.multiplicity(i) * beta.multiplicity(j)) as i64;
                total += int(f) * c;
            } else {
                let m = beta.multiplicity(i) as i64;
                total += rat((i * i) as i64 * m * (m - 1), 2) * c;
            }
        }
        // product
        let splits = rest.sub_multisets();
        for i in 1..k {
            let j = k - i;
            for gamma1 in &splits {
                let gamma2 = gamma1.complement_in(&rest).expect("sub-multiset");
                let beta1 = gamma1.with_part(i);
                let beta2 = gamma2.with_part(j);
                let mut conv = Rat::zero();
                for r1 in 0..=r {
                    let a = coeff(h, &beta1, r1);
                    if a.is_zero() {
                        continue;
                    }
                    conv += a * coeff(h, &beta2, r - r1);
                }
                if conv.is_zero() {
                    continue;
                }
                let f = (i * j) as i64
                    * (beta1.multiplicity(i) * beta2.multiplicity(j)) as i64;
                total += rat(f, 2) * conv;
            }
        }
    }
    total
}

fn solve(max_degree: u32, max_r: u32, family: Family) -> Result<TruncatedH> {
    if max_degree == 0 {
        return Err(HurwitzError::OutOfRange("max degree must be at least 1".into()));
    }
    let mut h = Coeffs::new();
    h.insert((Partition::single(1), 0), Rat::one());
    let targets = all_partitions_up_to(max_degree);
    for r in 0..max_r {
        let mut layer = Vec::new();
        for alpha in &targets {
            let rhs = rhs_coefficient(&h, alpha, r);
            if rhs.is_zero() {
                continue;
            }
            let next = match family {
                Family::Monotone => rhs * rat(2, alpha.size() as i64),
                Family::Classical => rhs / int(r as i64 + 1),
            };
            layer.push(((alpha.clone(), r + 1), next));
        }
        h.extend(layer);
    }
    let numbers = h
        .into_iter()
        .map(|((alpha, r), c)| {
            let n = c * normalizer(alpha.size(), r, family);
            ((alpha, r), n)
        })
        .collect();
    Ok(TruncatedH {
        max_degree,
        max_r,
        family,
        numbers,
    })
}

/// Monotone join-cut solution truncated at `|alpha| <= max_degree`, `r <= max_r`.
pub fn solve_monotone(max_degree: u32, max_r: u32) -> Result<TruncatedH> {
    solve(max_degree, max_r, Family::Monotone)
}

/// Classical join-cut solution truncated at `|alpha| <= max_degree`, `r <= max_r`.
pub fn solve_classical(max_degree: u32, max_r: u32) -> Result<TruncatedH> {
    solve(max_degree, max_r, Family::Classical)
}

/// Genus slice `alpha -> H_g(alpha)` for `1 <= |alpha| <= max_degree`, solving
/// just far enough in `r`.
pub fn genus_slice(g: u32, max_degree: u32, family: Family) -> Result<BTreeMap<Partition, Rat>> {
    let max_r = 2 * g + 2 * max_degree - 2;
    let table = solve(max_degree, max_r, family)?;
    Ok(all_partitions_up_to(max_degree)
        .into_iter()
        .filter_map(|alpha| table.genus(&alpha, g).map(|v| (alpha, v)))
        .collect())
}

/// Literal evaluation of the join-cut PDE on the truncated series stored in
/// `table`. Returns every `(alpha, r)` (target coefficient `[t^r p_alpha]`)
/// where left and right sides differ, together with the difference. Only
/// coefficients fully determined by the truncation are compared: `|alpha| <=
/// max_degree` and `r < max_r`, plus the `t^0` initial conditions, whose
/// failures are reported with `r = u32::MAX`.
pub fn pde_residual(table: &TruncatedH) -> Vec<((Partition, u32), Rat)> {
    let max_d = table.max_degree;
    let max_r = table.max_r;
    let series: Coeffs = table
        .entries()
        .map(|((a, r), v)| ((a.clone(), *r), v / normalizer(a.size(), *r, table.family)))
        .collect();

    let mut rhs = Coeffs::new();
    let add = |m: &mut Coeffs, key: (Partition, u32), c: Rat| {
        if c.is_zero() {
            return;
        }
        let slot = m.entry(key).or_insert_with(Rat::zero);
        *slot += c;
    };

    // derivatives dH/dp_i, keyed by i
    let mut partials: BTreeMap<u32, Coeffs> = BTreeMap::new();
    for ((beta, r), c) in &series {
        for (k, mk) in beta.multiplicities() {
            let rest = beta.without_part(k).expect("part present");
            add(
                partials.entry(k).or_default(),
                (rest, *r),
                c * int(mk as i64),
            );
        }
    }

    for ((beta, r), c) in &series {
        if *r >= max_r {
            continue;
        }
        let mult = beta.multiplicities();
        // cut: (i+j) p_i p_j d/dp_{i+j}, summed over ordered (i, j)
        for &(k, mk) in &mult {
            let rest = beta.without_part(k).expect("part present");
            for i in 1..k {
                let j = k - i;
                let target = rest.with_part(i).with_part(j);
                add(&mut rhs, (target, *r), rat(k as i64 * mk as i64, 2) * c);
            }
        }
        // join: i j p_{i+j} d2/dp_i dp_j, summed over ordered (i, j)
        for &(i, mi) in &mult {
            for &(j, mj) in &mult {
                let factor = if i == j {
                    (mi * (mi - 1)) as i64
                } else {
                    (mi * mj) as i64
                };
                if factor == 0 {
                    continue;
                }
                let target = beta
                    .without_part(i)
                    .and_then(|b| b.without_part(j))
                    .expect("parts present")
                    .with_part(i + j);
                add(&mut rhs, (target, *r), rat((i * j) as i64 * factor, 2) * c);
            }
        }
    }

    // product: i j p_{i+j} dH/dp_i dH/dp_j
    for (&i, di) in &partials {
        for (&j, dj) in &partials {
            for ((g1, r1), c1) in di {
                for ((g2, r2), c2) in dj {
                    if r1 + r2 >= max_r || g1.size() + g2.size() + i + j > max_d {
                        continue;
                    }
                    let target = g1.union(g2).with_part(i + j);
                    add(&mut rhs, (target, r1 + r2), rat((i * j) as i64, 2) * c1 * c2);
                }
            }
        }
    }

    let mut lhs = Coeffs::new();
    let mut initial = Coeffs::new();
    for ((alpha, r), c) in &series {
        let d = alpha.size() as i64;
        match table.family {
            Family::Monotone => {
                if *r == 0 {
                    add(&mut initial, (alpha.clone(), 0), c * int(d));
                } else {
                    add(&mut lhs, (alpha.clone(), r - 1), c * rat(d, 2));
                }
            }
            Family::Classical => {
                if *r == 0 {
                    add(&mut initial, (alpha.clone(), 0), c.clone());
                } else {
                    add(&mut lhs, (alpha.clone(), r - 1), c * int(*r as i64));
                }
            }
        }
    }
    // z p_1 seed
    add(&mut initial, (Partition::single(1), 0), -Rat::one());

    let mut out = Vec::new();
    for alpha in all_partitions_up_to(max_d) {
        for r in 0..max_r {
            let key = (alpha.clone(), r);
            let diff = coeff(&lhs, &alpha, r) - coeff(&rhs, &alpha, r);
            if !diff.is_zero() {
                out.push((key, diff));
            }
        }
        let init = coeff(&initial, &alpha, 0);
        if !init.is_zero() {
            out.push(((alpha.clone(), u32::MAX), init));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn monotone_examples() {
        let t = solve_monotone(4, 6).unwrap();
        assert_eq!(t.get(&p(&[1]), 0), int(1));
        assert_eq!(t.get(&p(&[1, 1]), 2), int(1));
        assert_eq!(t.get(&p(&[3]), 2), int(4));
        assert_eq!(t.get(&p(&[2]), 3), int(1));
    }

    #[test]
    fn classical_examples() {
        let t = solve_classical(4, 6).unwrap();
        assert_eq!(t.get(&p(&[1]), 0), int(1));
        assert_eq!(t.get(&p(&[3]), 2), int(6));
        assert_eq!(t.get(&p(&[2, 2]), 4), int(288));
    }

    #[test]
    fn residual_vanishes() {
        for family in [Family::Monotone, Family::Classical] {
            let t = solve(5, 8, family).unwrap();
            assert!(pde_residual(&t).is_empty(), "{family:?}");
        }
    }

    #[test]
    fn residual_detects_corruption() {
        let mut t = solve_monotone(4, 6).unwrap();
        let key = (p(&[2, 1]), 3);
        let v = t.numbers[&key].clone();
        t.numbers.insert(key, v + int(1));
        assert!(!pde_residual(&t).is_empty());
    }

    #[test]
    fn genus_lookup() {
        let t = solve_monotone(3, 6).unwrap();
        assert_eq!(t.genus(&p(&[2]), 1), Some(int(1)));
        assert_eq!(t.genus(&p(&[1]), 0), Some(int(1)));
        // r = 2*3 - 2 + 1 + 3 = 8 is beyond the truncation
        assert_eq!(t.genus(&p(&[3]), 3), None);
    }
}
