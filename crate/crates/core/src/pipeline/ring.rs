//! Elements of the ring of polynomials in `u = (1 - 4y_1)^{-1}` and
//! `h_k = eta_k (1 - eta)^{-1}`, extended by half-integer powers of `u` and
//! integer powers of `v = (1 - eta)^{-1}` so intermediate expressions stay
//! closed.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{HurwitzError, Result};
use crate::numerics::{big, binomial, int, Partition, Rat};

/// Polynomial over the rationals in `v` (integer exponents of either sign)
/// and `h_1, h_2, ...`. Keys are `(v exponent, multiset of h indices)`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct CoeffPoly {
    terms: BTreeMap<(i32, Partition), Rat>,
}

impl CoeffPoly {
    pub fn zero() -> Self {
        CoeffPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        CoeffPoly::monomial(0, Partition::empty(), c)
    }

    pub fn one() -> Self {
        CoeffPoly::constant(Rat::one())
    }

    pub fn monomial(v: i32, hats: Partition, c: Rat) -> Self {
        let mut p = CoeffPoly::zero();
        p.add_term(v, hats, c);
        p
    }

    /// `v^e`.
    pub fn v_pow(e: i32) -> Self {
        CoeffPoly::monomial(e, Partition::empty(), Rat::one())
    }

    /// `h_k`.
    pub fn hat(k: u32) -> Self {
        CoeffPoly::monomial(0, Partition::single(k), Rat::one())
    }

    pub fn add_term(&mut self, v: i32, hats: Partition, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((v, hats)) {
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

    pub fn coeff(&self, v: i32, hats: &Partition) -> Rat {
        self.terms
            .get(&(v, hats.clone()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, Partition), &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `h`-weight over monomials.
    pub fn weight(&self) -> Option<u32> {
        self.terms.keys().map(|(_, h)| h.size()).max()
    }

    pub fn is_v_free(&self) -> bool {
        self.terms.keys().all(|(v, _)| *v == 0)
    }

    pub fn add(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &CoeffPoly) {
        for ((v, h), c) in &other.terms {
            self.add_term(*v, h.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &CoeffPoly) -> CoeffPoly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> CoeffPoly {
        if s.is_zero() {
            return CoeffPoly::zero();
        }
        CoeffPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c * s))
                .collect(),
        }
    }

    pub fn mul(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for ((v1, h1), c1) in &self.terms {
            for ((v2, h2), c2) in &other.terms {
                out.add_term(v1 + v2, h1.union(h2), c1 * c2);
            }
        }
        out
    }

    /// Multiplies by `v^e`.
    pub fn shift_v(&self, e: i32) -> CoeffPoly {
        CoeffPoly {
            terms: self
                .terms
                .iter()
                .map(|((v, h), c)| ((v + e, h.clone()), c.clone()))
                .collect(),
        }
    }

    /// Groups by `h` monomial: `h_alpha -> (v exponent -> coefficient)`.
    pub fn by_hats(&self) -> BTreeMap<Partition, BTreeMap<i32, Rat>> {
        let mut out: BTreeMap<Partition, BTreeMap<i32, Rat>> = BTreeMap::new();
        for ((v, h), c) in &self.terms {
            out.entry(h.clone()).or_default().insert(*v, c.clone());
        }
        out
    }
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((v, h), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if *v != 0 {
                write!(f, "*v^{v}")?;
            }
            for k in h.parts() {
                write!(f, "*h{k}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `sum_e coeff(e) u^{e/2}` with `u = (1 - 4y_1)^{-1}`; keys are twice the
/// exponent.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct RElement {
    terms: BTreeMap<i32, CoeffPoly>,
}

impl RElement {
    pub fn zero() -> Self {
        RElement::default()
    }

    pub fn one() -> Self {
        RElement::from_coeff(CoeffPoly::one())
    }

    pub fn constant(c: Rat) -> Self {
        RElement::from_coeff(CoeffPoly::constant(c))
    }

    pub fn from_coeff(c: CoeffPoly) -> Self {
        RElement::term(0, c)
    }

    /// `c u^{e2/2}`.
    pub fn term(e2: i32, c: CoeffPoly) -> Self {
        let mut r = RElement::zero();
        r.add_coeff(e2, &c);
        r
    }

    /// `u^{e2/2}`.
    pub fn u_half_pow(e2: i32) -> Self {
        RElement::term(e2, CoeffPoly::one())
    }

    pub fn u_pow(n: i32) -> Self {
        RElement::u_half_pow(2 * n)
    }

    /// `Y_1^k = ((u - 1)/4)^k`.
    pub fn big_y1_pow(k: u32) -> Self {
        let mut r = RElement::zero();
        let scale = Rat::one() / int(4).pow(k as i32);
        for j in 0..=k {
            let sign = if (k - j) % 2 == 0 { int(1) } else { int(-1) };
            r.add_coeff(
                2 * j as i32,
                &CoeffPoly::constant(sign * big(&binomial(k, j)) * &scale),
            );
        }
        r
    }

    pub fn add_coeff(&mut self, e2: i32, c: &CoeffPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e2).or_default();
        slot.add_assign(c);
        if slot.is_zero() {
            self.terms.remove(&e2);
        }
    }

    pub fn coeff(&self, e2: i32) -> CoeffPoly {
        self.terms.get(&e2).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i32, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_monomials(&self) -> usize {
        self.terms.values().map(CoeffPoly::len).sum()
    }

    pub fn add(&self, other: &RElement) -> RElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &RElement) {
        for (e, c) in &other.terms {
            self.add_coeff(*e, c);
        }
    }

    pub fn sub(&self, other: &RElement) -> RElement {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> RElement {
        if s.is_zero() {
            return RElement::zero();
        }
        RElement {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.scale(s)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &RElement) -> RElement {
        let mut out = RElement::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_coeff(e1 + e2, &c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_coeff(&self, c: &CoeffPoly) -> RElement {
        let mut out = RElement::zero();
        for (e, ce) in &self.terms {
            out.add_coeff(*e, &ce.mul(c));
        }
        out
    }

    /// Multiplies by `u^{e2/2}`.
    pub fn shift_u(&self, e2: i32) -> RElement {
        RElement {
            terms: self.terms.iter().map(|(e, c)| (e + e2, c.clone())).collect(),
        }
    }

    /// Multiplies by `v^e`.
    pub fn shift_v(&self, e: i32) -> RElement {
        RElement {
            terms: self.terms.iter().map(|(k, c)| (*k, c.shift_v(e))).collect(),
        }
    }

    pub fn has_half_exponents(&self) -> bool {
        self.terms.keys().any(|e| e % 2 != 0)
    }

    /// Value at `u = 1`, i.e. `y_1 = 0`.
    pub fn at_u_one(&self) -> CoeffPoly {
        let mut out = CoeffPoly::zero();
        for c in self.terms.values() {
            out.add_assign(c);
        }
        out
    }

    /// Maximum of `u`-exponent plus `h`-weight over monomials.
    pub fn weighted_degree(&self) -> Option<i32> {
        self.terms
            .iter()
            .flat_map(|(e, c)| c.terms().map(move |((_, h), _)| e / 2 + h.size() as i32))
            .max()
    }

    /// Checks membership in the weighted-degree-`d` part of the ring: no
    /// `v`, nonnegative integer `u` exponents, weighted degree at most `d`.
    pub fn check_in_r(&self, d: u32) -> Result<()> {
        for (e, c) in &self.terms {
            if e % 2 != 0 || *e < 0 {
                return Err(HurwitzError::Assertion(format!(
                    "u exponent {}/2 is not a nonnegative integer",
                    e
                )));
            }
            if !c.is_v_free() {
                return Err(HurwitzError::Assertion(format!(
                    "coefficient of u^{} involves v: {c}",
                    e / 2
                )));
            }
            if let Some(w) = c.weight() {
                if e / 2 + w as i32 > d as i32 {
                    return Err(HurwitzError::Assertion(format!(
                        "weighted degree {} exceeds {d}",
                        e / 2 + w as i32
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e % 2 == 0 {
                write!(f, "[{c}]*u^{}", e / 2)?;
            } else {
                write!(f, "[{c}]*u^({e}/2)")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
