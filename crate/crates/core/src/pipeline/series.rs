//! Truncated series in `q` (or `p`) and two auxiliary variables, with the
//! operators applied straight from their series definitions. Used to check
//! the symbolic operators.
//!
//! In `(q, y)` coordinates:
//!
//! ```text
//! D   = sum_k k y_1^k d/dq_k + 4y_1 (1-4y_1)^{-3/2} (1-eta)^{-1} (sum_k k q_k d/dq_k + y_1 d/dy_1)
//! T F = (1-eta)^{-1} Pi_2 (1-4y_2)^{-3/2} Split((1-4y_1) F)
//! Split y_1^n = sum_{i=1}^{n-1} y_1^{n-i} y_2^i,   Pi_2 = [y_2^0] + sum_k q_k [y_2^k]
//! ```
//!
//! In `(p, x)` coordinates `D = sum_k k x_1^k d/dp_k`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::ring::{CoeffPoly, RElement};
use crate::joincut::TruncatedH;
use crate::numerics::{big, factorial, int, rising, Partition, Rat};
use crate::oracle::Family;
use crate::qseries::{aux_series, q_in_p, MSeries, Support};

/// `sum c[m, a, b] q_m y_1^a y_2^b`, truncated at `|m| + a + b <= max_weight`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QySeries {
    pub max_weight: u32,
    terms: BTreeMap<(Partition, u32, u32), Rat>,
}

impl QySeries {
    pub fn zero(max_weight: u32) -> Self {
        QySeries {
            max_weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, m: Partition, a: u32, b: u32, c: Rat) {
        if c.is_zero() || m.size() + a + b > self.max_weight {
            return;
        }
        match self.terms.entry((m, a, b)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &Partition, a: u32, b: u32) -> Rat {
        self.terms
            .get(&(m.clone(), a, b))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Partition, u32, u32), &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// A series in `q` alone.
    pub fn from_q(s: &MSeries, max_weight: u32) -> Self {
        let mut out = QySeries::zero(max_weight);
        for (m, c) in s.terms() {
            out.add_term(m.clone(), 0, 0, c.clone());
        }
        out
    }

    /// A series in `y_1` alone, from coefficients `c(n)`.
    pub fn from_y1(max_weight: u32, c: impl Fn(u32) -> Rat) -> Self {
        let mut out = QySeries::zero(max_weight);
        for n in 0..=max_weight {
            out.add_term(Partition::empty(), n, 0, c(n));
        }
        out
    }

    pub fn add(&self, other: &QySeries) -> QySeries {
        let mut out = QySeries::zero(self.max_weight.min(other.max_weight));
        for ((m, a, b), c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(m.clone(), *a, *b, c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> QySeries {
        let mut out = QySeries::zero(self.max_weight);
        for ((m, a, b), c) in &self.terms {
            out.add_term(m.clone(), *a, *b, c * s);
        }
        out
    }

    pub fn mul(&self, other: &QySeries) -> QySeries {
        let mut out = QySeries::zero(self.max_weight.min(other.max_weight));
        for ((m1, a1, b1), c1) in &self.terms {
            let w1 = m1.size() + a1 + b1;
            for ((m2, a2, b2), c2) in &other.terms {
                if w1 + m2.size() + a2 + b2 > out.max_weight {
                    continue;
                }
                out.add_term(m1.union(m2), a1 + a2, b1 + b2, c1 * c2);
            }
        }
        out
    }
}

/// `(1 - 4y)^{-e}` coefficients: `4^n rising(e, n) / n!`.
fn u_power_coeff(e: &Rat, n: u32) -> Rat {
    int(4).pow(n as i32) * rising(e, n as i64).expect("nonnegative count") / big(&factorial(n))
}

/// `(1 - 4y_1)^{-e}` as a series.
pub fn u_power_series(e: &Rat, max_weight: u32) -> QySeries {
    QySeries::from_y1(max_weight, |n| u_power_coeff(e, n))
}

/// `(1 - 4y_2)^{-e}` as a series.
fn u2_power_series(e: &Rat, max_weight: u32) -> QySeries {
    let mut out = QySeries::zero(max_weight);
    for n in 0..=max_weight {
        out.add_term(Partition::empty(), 0, n, u_power_coeff(e, n));
    }
    out
}

/// Expands a ring element as a series in `q` and `y_1`.
pub fn expand(r: &RElement, max_weight: u32) -> QySeries {
    let support = Support::weight(max_weight);
    let max_hat = r
        .terms()
        .flat_map(|(_, c)| c.terms().filter_map(|((_, h), _)| h.parts().first().copied()))
        .max()
        .unwrap_or(0);
    let aux = aux_series(Family::Monotone, &support, max_hat);
    let mut v_cache: BTreeMap<i32, MSeries> = BTreeMap::new();
    let mut out = QySeries::zero(max_weight);
    for (e2, c) in r.terms() {
        let upart = u_power_series(&Rat::new((*e2).into(), 2.into()), max_weight);
        let qpart = coeff_series(c, &aux, &mut v_cache);
        out = out.add(&upart.mul(&QySeries::from_q(&qpart, max_weight)));
    }
    out
}

fn coeff_series(
    c: &CoeffPoly,
    aux: &crate::qseries::AuxSeries,
    v_cache: &mut BTreeMap<i32, MSeries>,
) -> MSeries {
    let support = aux.eta.support().clone();
    let mut out = MSeries::zero(support.clone());
    for ((v, hats), coef) in c.terms() {
        let n = *v + hats.len() as i32;
        let vpow = v_cache
            .entry(n)
            .or_insert_with(|| aux.eta.one_minus_pow(&int(-n as i64)))
            .clone();
        let mono = hats
            .parts()
            .iter()
            .fold(vpow, |acc, &k| acc.mul(&aux.etas[k as usize - 1]));
        out = out.add(&mono.scale(coef));
    }
    out
}

/// `(1 - eta)^{-1}` as a series.
fn v_series(max_weight: u32) -> QySeries {
    let aux = aux_series(Family::Monotone, &Support::weight(max_weight), 0);
    QySeries::from_q(&aux.eta.one_minus_pow(&int(-1)), max_weight)
}

/// The lifting operator from its `(q, y)` definition; `y_2` must be absent.
pub fn literal_delta1(f: &QySeries) -> QySeries {
    let w = f.max_weight;
    let mut first = QySeries::zero(w);
    let mut euler = QySeries::zero(w);
    for ((m, a, b), c) in f.terms() {
        assert_eq!(*b, 0, "literal lifting expects no y_2");
        for (k, mult) in m.multiplicities() {
            let rest = m.without_part(k).expect("part present");
            first.add_term(rest, a + k, 0, c * int(k as i64 * mult as i64));
        }
        euler.add_term(m.clone(), *a, 0, c * int((m.size() + a) as i64));
    }
    // 4y (1-4y)^{-3/2} = u^{3/2} - u^{1/2}
    let wser = u_power_series(&Rat::new(3.into(), 2.into()), w)
        .add(&u_power_series(&Rat::new(1.into(), 2.into()), w).scale(&-Rat::one()));
    first.add(&wser.mul(&v_series(w)).mul(&euler))
}

/// The operator `T` from its series definition; `y_2` must be absent.
pub fn literal_t(f: &QySeries) -> QySeries {
    let w = f.max_weight;
    let one_minus = QySeries::from_y1(w, |n| match n {
        0 => Rat::one(),
        1 => int(-4),
        _ => Rat::zero(),
    });
    let g = one_minus.mul(f);
    let mut split = QySeries::zero(w);
    for ((m, n, b), c) in g.terms() {
        assert_eq!(*b, 0, "literal T expects no y_2");
        for i in 1..*n {
            split.add_term(m.clone(), n - i, i, c.clone());
        }
    }
    let weighted = u2_power_series(&Rat::new(3.into(), 2.into()), w).mul(&split);
    let mut proj = QySeries::zero(w);
    for ((m, a, b), c) in weighted.terms() {
        let m2 = if *b == 0 { m.clone() } else { m.with_part(*b) };
        proj.add_term(m2, *a, 0, c.clone());
    }
    v_series(w).mul(&proj)
}

/// Rewrites a `(q, y_1)` series in `(p, x_1)` via `q_j = p_j (1-gamma)^{-2j}`
/// and `y_1 = x_1 (1-gamma)^{-2}`. The result stores `p` monomials and
/// powers of `x_1` in the same slots.
pub fn to_px(f: &QySeries) -> QySeries {
    let w = f.max_weight;
    let mut by_y: BTreeMap<u32, MSeries> = BTreeMap::new();
    for ((m, a, b), c) in f.terms() {
        assert_eq!(*b, 0, "conversion expects no y_2");
        by_y.entry(*a)
            .or_insert_with(|| MSeries::zero(Support::weight(w - a)))
            .add_term(m.clone(), c.clone());
    }
    let mut out = QySeries::zero(w);
    for (a, s) in by_y {
        let support = Support::weight(w - a);
        let images = q_in_p(Family::Monotone, &support);
        let aux = aux_series(Family::Monotone, &support, 0);
        let gamma_p = aux.gamma.substitute(&images, &support);
        let factor = gamma_p.one_minus_pow(&int(-2 * a as i64));
        let sp = s.substitute(&images, &support).mul(&factor);
        for (m, c) in sp.terms() {
            out.add_term(m.clone(), a, 0, c.clone());
        }
    }
    out
}

/// `D = sum_k k x_1^k d/dp_k` on a `(p, x_1)` series.
pub fn literal_delta1_px(f: &QySeries) -> QySeries {
    let mut out = QySeries::zero(f.max_weight);
    for ((m, a, b), c) in f.terms() {
        for (k, mult) in m.multiplicities() {
            let rest = m.without_part(k).expect("part present");
            out.add_term(rest, a + k, *b, c * int(k as i64 * mult as i64));
        }
    }
    out
}

/// `sum_{|alpha| <= W} H_g(alpha)/d! p_alpha` from a monotone join-cut table.
pub fn genus_series_px(table: &TruncatedH, g: u32, max_weight: u32) -> QySeries {
    let mut out = QySeries::zero(max_weight);
    for d in 1..=max_weight.min(table.max_degree) {
        for alpha in Partition::all_of(d) {
            if let Some(h) = table.genus(&alpha, g) {
                out.add_term(alpha, 0, 0, h / big(&factorial(d)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use crate::pipeline::{apply_delta1, apply_t, delta1_h, delta1_sq_h0, solve_up_to};

    #[test]
    fn expand_basics() {
        let s = expand(&RElement::big_y1_pow(1), 3);
        // Y_1 = y + 4y^2 + 16y^3
        assert_eq!(s.coeff(&Partition::empty(), 1, 0), int(1));
        assert_eq!(s.coeff(&Partition::empty(), 3, 0), int(16));
        let h = expand(&RElement::from_coeff(CoeffPoly::hat(1)), 3);
        // h_1 = eta_1 (1 - eta)^{-1}: [q_1] = 6, [q_1^2] = 36
        assert_eq!(h.coeff(&Partition::single(1), 0, 0), int(6));
        assert_eq!(h.coeff(&Partition::ones(2), 0, 0), int(36));
    }

    #[test]
    fn delta_on_y1_matches_literal() {
        let y = RElement::big_y1_pow(1);
        assert_eq!(expand(&apply_delta1(&y, 0), 4), literal_delta1(&expand(&y, 4)));
    }

    #[test]
    fn t_on_y1_squared_matches_literal() {
        let y = RElement::big_y1_pow(2);
        assert_eq!(expand(&apply_t(&y).unwrap(), 5), literal_t(&expand(&y, 5)));
    }

    #[test]
    fn delta_sq_h0_from_joincut() {
        let w = 5;
        let table = crate::joincut::solve_monotone(w, 2 * w).unwrap();
        let h0 = genus_series_px(&table, 0, w);
        let lhs = literal_delta1_px(&literal_delta1_px(&h0));
        let rhs = to_px(&expand(&delta1_sq_h0(), w));
        assert_eq!(lhs, rhs);
        assert!(!lhs.is_zero());
    }

    #[test]
    fn delta_h1_from_joincut() {
        let w = 5;
        let table = crate::joincut::solve_monotone(w, 2 * w + 2).unwrap();
        let h1 = genus_series_px(&table, 1, w);
        let es = solve_up_to(1).unwrap();
        let lhs = literal_delta1_px(&h1);
        let rhs = to_px(&expand(&delta1_h(1, &es[0]), w));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.coeff(&Partition::empty(), 2, 0), rat(1, 1));
    }
}
