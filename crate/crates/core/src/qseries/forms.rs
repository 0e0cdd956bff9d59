//! Rational and logarithmic closed forms in the auxiliary series.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::{aux_series, MSeries, Support};
use crate::error::{HurwitzError, Result};
use crate::numerics::{int, Partition, Rat};
use crate::oracle::Family;

/// `constant + sum_alpha c_alpha eta_alpha (1 - eta)^{-l(alpha) - 2g + 2}`,
/// with `eta_alpha = prod eta_{alpha_i}` (`phi` in place of `eta` for the
/// classical family).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalForm {
    pub genus: u32,
    pub constant: Rat,
    pub terms: BTreeMap<Partition, Rat>,
}

impl RationalForm {
    /// Builds a form whose constant cancels the empty-partition term.
    pub fn new(genus: u32, terms: BTreeMap<Partition, Rat>) -> Result<Self> {
        let constant = -terms.get(&Partition::empty()).cloned().unwrap_or_else(Rat::zero);
        let form = RationalForm {
            genus,
            constant,
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        };
        form.validate()?;
        Ok(form)
    }

    pub fn validate(&self) -> Result<()> {
        if self.genus < 2 {
            return Err(HurwitzError::OutOfRange(format!(
                "rational forms start at genus 2, got {}",
                self.genus
            )));
        }
        let c0 = self.coeff(&Partition::empty());
        if self.constant != -c0.clone() {
            return Err(HurwitzError::Malformed(format!(
                "constant {} does not cancel empty term {c0}",
                self.constant
            )));
        }
        let bound = 3 * self.genus - 3;
        if let Some((alpha, _)) = self.terms.iter().find(|(a, _)| a.size() > bound) {
            return Err(HurwitzError::Malformed(format!(
                "term {alpha} exceeds weight {bound}"
            )));
        }
        Ok(())
    }

    pub fn coeff(&self, alpha: &Partition) -> Rat {
        self.terms.get(alpha).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, s: &Rat) -> RationalForm {
        RationalForm {
            genus: self.genus,
            constant: &self.constant * s,
            terms: self
                .terms
                .iter()
                .map(|(a, c)| (a.clone(), c * s))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    fn max_index(&self) -> u32 {
        self.terms
            .keys()
            .filter_map(|a| a.parts().first().copied())
            .max()
            .unwrap_or(0)
    }
}

/// `a log(1/(1 - eta)) + b log(1/(1 - gamma))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogForm {
    pub a: Rat,
    pub b: Rat,
}

/// Expands a rational form on `support`.
pub fn expand_rational_form(form: &RationalForm, family: Family, support: &Support) -> MSeries {
    let aux = aux_series(family, support, form.max_index());
    let one = MSeries::one(support.clone());
    let g = form.genus as i64;
    let mut powers: BTreeMap<i64, MSeries> = BTreeMap::new();
    let mut out = MSeries::constant(support.clone(), form.constant.clone());
    for (alpha, c) in &form.terms {
        let m = alpha.len() as i64 + 2 * g - 2;
        let geom = powers
            .entry(m)
            .or_insert_with(|| aux.eta.one_minus_pow(&int(-m)))
            .clone();
        let mono = alpha
            .parts()
            .iter()
            .fold(one.clone(), |acc, &k| acc.mul(&aux.etas[k as usize - 1]));
        out = out.add(&mono.mul(&geom).scale(c));
    }
    out
}

/// Expands a monotone logarithmic form on `support`.
pub fn expand_log_form(form: &LogForm, support: &Support) -> MSeries {
    let aux = aux_series(Family::Monotone, support, 0);
    aux.eta
        .log_one_minus_inv()
        .scale(&form.a)
        .add(&aux.gamma.log_one_minus_inv().scale(&form.b))
}
