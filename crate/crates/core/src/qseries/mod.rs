//! Truncated multivariate formal power series over the rationals in
//! indeterminates `q_1, q_2, ...` where `q_k` has weight `k`.
//!
//! A monomial `q_alpha = prod q_{alpha_i}` is keyed by the partition `alpha`.
//! Every series carries a [`Support`]: the set of monomials it keeps. All
//! binary operations truncate eagerly to the meet of the operands' supports.

mod aux;
mod forms;

pub use aux::{
    aux_series, lagrange_extract, p_in_q, p_to_q, q_in_p, q_to_p, AuxSeries, ChangeOfVariables,
};
pub use forms::{expand_log_form, expand_rational_form, LogForm, RationalForm};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::numerics::{int, Partition, Rat};

/// Which monomials a truncated series keeps: weight at most `max_weight`, and
/// when `divides` is set, only sub-multisets of that monomial.
///
/// The divisor restriction is what makes single-coefficient extraction cheap:
/// `[q_alpha]` of a product only ever needs factors dividing `q_alpha`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    pub max_weight: u32,
    pub divides: Option<Partition>,
}

impl Support {
    pub fn weight(max_weight: u32) -> Self {
        Support {
            max_weight,
            divides: None,
        }
    }

    pub fn dividing(alpha: &Partition) -> Self {
        Support {
            max_weight: alpha.size(),
            divides: Some(alpha.clone()),
        }
    }

    pub fn admits(&self, m: &Partition) -> bool {
        m.size() <= self.max_weight && self.divides.as_ref().map_or(true, |a| m.divides(a))
    }

    pub fn meet(&self, other: &Support) -> Support {
        let divides = match (&self.divides, &other.divides) {
            (Some(a), Some(b)) => Some(a.meet(b)),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        };
        Support {
            max_weight: self.max_weight.min(other.max_weight),
            divides,
        }
    }

    /// Indices `k` with `q_k` admitted.
    pub fn variables(&self) -> Vec<u32> {
        match &self.divides {
            Some(a) => a
                .multiplicities()
                .into_iter()
                .map(|(k, _)| k)
                .filter(|&k| k <= self.max_weight)
                .rev()
                .collect(),
            None => (1..=self.max_weight).collect(),
        }
    }

    /// Upper bound on the number of variable factors in an admitted monomial.
    pub fn max_length(&self) -> u32 {
        match &self.divides {
            Some(a) => a.len() as u32,
            None => self.max_weight,
        }
    }
}

/// A truncated series in `q`.
#[derive(Clone, PartialEq, Eq)]
pub struct MSeries {
    support: Support,
    terms: BTreeMap<Partition, Rat>,
}

impl MSeries {
    pub fn zero(support: Support) -> Self {
        MSeries {
            support,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(support: Support, c: Rat) -> Self {
        let mut s = MSeries::zero(support);
        s.add_term(Partition::empty(), c);
        s
    }

    pub fn one(support: Support) -> Self {
        MSeries::constant(support, Rat::one())
    }

    /// The single variable `q_k`.
    pub fn var(support: Support, k: u32) -> Self {
        let mut s = MSeries::zero(support);
        s.add_term(Partition::single(k), Rat::one());
        s
    }

    /// `sum_k coeff(k) q_k` over admitted `k`.
    pub fn linear(support: Support, coeff: impl Fn(u32) -> Rat) -> Self {
        let mut s = MSeries::zero(support.clone());
        for k in support.variables() {
            s.add_term(Partition::single(k), coeff(k));
        }
        s
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn max_weight(&self) -> u32 {
        self.support.max_weight
    }

    /// Adds `c q_m`; silently drops monomials outside the support.
    pub fn add_term(&mut self, m: Partition, c: Rat) {
        if c.is_zero() || !self.support.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &Partition) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&Partition::empty())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Restricts to a smaller support.
    pub fn truncate(&self, support: &Support) -> MSeries {
        let support = self.support.meet(support);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| support.admits(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        MSeries { support, terms }
    }

    pub fn add(&self, other: &MSeries) -> MSeries {
        let mut out = self.truncate(&other.support);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MSeries) -> MSeries {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MSeries {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, s: &Rat) -> MSeries {
        let mut out = MSeries::zero(self.support.clone());
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &MSeries) -> MSeries {
        let support = self.support.meet(&other.support);
        let mut out = MSeries::zero(support);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.size() + m2.size() > out.support.max_weight {
                    continue;
                }
                let m = m1.union(m2);
                if out.support.admits(&m) {
                    out.add_term(m, c1 * c2);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MSeries {
        let mut acc = MSeries::one(self.support.clone());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `sum_n a(n) x^n` for a series `x` without constant term.
    pub fn compose_univariate(&self, a: impl Fn(u32) -> Rat) -> MSeries {
        assert!(
            self.constant_term().is_zero(),
            "univariate composition needs a series without constant term"
        );
        let mut out = MSeries::constant(self.support.clone(), a(0));
        let mut power = MSeries::one(self.support.clone());
        for n in 1..=self.support.max_length() {
            power = power.mul(self);
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&a(n)));
        }
        out
    }

    /// `(1 - x)^exponent` for rational exponent, `x` without constant term.
    pub fn one_minus_pow(&self, exponent: &Rat) -> MSeries {
        // (1 - x)^e = sum_n C(e, n) (-x)^n
        self.compose_univariate(|n| {
            let c = crate::numerics::binomial_rat(exponent, n);
            if n % 2 == 1 {
                -c
            } else {
                c
            }
        })
    }

    /// `log(1/(1 - x)) = sum_{n>=1} x^n / n`.
    pub fn log_one_minus_inv(&self) -> MSeries {
        self.compose_univariate(|n| {
            if n == 0 {
                Rat::zero()
            } else {
                int(1) / int(n as i64)
            }
        })
    }

    /// `exp(x)`.
    pub fn exp(&self) -> MSeries {
        self.compose_univariate(|n| Rat::one() / crate::numerics::big(&crate::numerics::factorial(n)))
    }

    /// Substitutes `q_k -> images[k]` (1-based, `images[0]` unused).
    pub fn substitute(&self, images: &[MSeries], support: &Support) -> MSeries {
        let mut cache: BTreeMap<Partition, MSeries> = BTreeMap::new();
        cache.insert(Partition::empty(), MSeries::one(support.clone()));
        let mut out = MSeries::zero(support.clone());
        for (m, c) in &self.terms {
            let prod = monomial_image(m, images, support, &mut cache);
            out = out.add(&prod.scale(c));
        }
        out
    }
}

fn monomial_image(
    m: &Partition,
    images: &[MSeries],
    support: &Support,
    cache: &mut BTreeMap<Partition, MSeries>,
) -> MSeries {
    if let Some(s) = cache.get(m) {
        return s.clone();
    }
    let last = *m.parts().last().expect("nonempty monomial");
    let rest = m.without_part(last).expect("part present");
    let base = monomial_image(&rest, images, support, cache);
    let img = images
        .get(last as usize)
        .unwrap_or_else(|| panic!("no image for q_{last}"));
    let prod = base.mul(&img.truncate(support));
    cache.insert(m.clone(), prod.clone());
    prod
}

impl fmt::Debug for MSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MSeries[w<={}]{{", self.support.max_weight)?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}: {c}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn truncating_product() {
        let s = Support::weight(3);
        let x = MSeries::var(s.clone(), 1).add(&MSeries::var(s.clone(), 2));
        let sq = x.mul(&x);
        assert_eq!(sq.coeff(&p(&[1, 1])), int(1));
        assert_eq!(sq.coeff(&p(&[2, 1])), int(2));
        assert_eq!(sq.coeff(&p(&[2, 2])), int(0));
    }

    #[test]
    fn geometric_and_log() {
        let s = Support::weight(4);
        let x = MSeries::var(s.clone(), 1);
        let g = x.one_minus_pow(&int(-2));
        for k in 0..=4u32 {
            assert_eq!(g.coeff(&Partition::ones(k)), int(k as i64 + 1));
        }
        let l = x.log_one_minus_inv();
        assert_eq!(l.coeff(&Partition::ones(3)), rat(1, 3));
        // exp(log(1/(1-x))) = 1/(1-x)
        let e = l.exp();
        for k in 0..=4u32 {
            assert_eq!(e.coeff(&Partition::ones(k)), int(1));
        }
    }

    #[test]
    fn divisor_support() {
        let alpha = p(&[2, 1, 1]);
        let s = Support::dividing(&alpha);
        assert_eq!(s.variables(), vec![1, 2]);
        let x = MSeries::linear(s.clone(), |k| int(k as i64));
        let cube = x.pow(3);
        // only q_2 q_1 q_1 survives among weight-4 monomials
        assert_eq!(cube.len(), 1);
        assert_eq!(cube.coeff(&alpha), int(3 * 2));
    }

    fn arb_series() -> impl Strategy<Value = MSeries> {
        let monos: Vec<Partition> = (0..=5).flat_map(Partition::all_of).collect();
        proptest::collection::vec(-4i64..5, monos.len()).prop_map(move |cs| {
            let mut s = MSeries::zero(Support::weight(5));
            for (m, c) in monos.iter().zip(cs) {
                s.add_term(m.clone(), int(c));
            }
            s
        })
    }

    proptest! {
        #[test]
        fn multiplication_commutes_and_associates(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }
    }
}
