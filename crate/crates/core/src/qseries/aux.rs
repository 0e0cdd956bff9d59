//! The implicit change of variables `p <-> q` and Lagrange extraction.
//!
//! Monotone: `q_j = p_j (1 - gamma)^{-2j}` with
//! `gamma = sum C(2k,k) q_k`, `eta = sum (2k+1) C(2k,k) q_k`,
//! `eta_j = sum (2k+1) k^j C(2k,k) q_k`.
//!
//! Classical: `q_j = p_j e^{j delta}` with `delta = sum k^k/k! q_k`,
//! `phi = sum k^{k+1}/k! q_k`, `phi_j = sum k^{k+j+1}/k! q_k`.
//!
//! In both cases `[p_alpha] F = [q_alpha] K_d F` for `|alpha| = d`, where the
//! kernel is `K_d = (1 - eta)(1 - gamma)^{-(2d+1)}` or `(1 - phi) e^{d delta}`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{MSeries, Support};
use crate::error::{HurwitzError, Result};
use crate::numerics::{big, central_binomial, factorial, int, Partition, Rat};
use crate::oracle::Family;

/// The series `gamma`, `eta`, `eta_1..=eta_J` (or `delta`, `phi`, `phi_j`).
#[derive(Clone, Debug)]
pub struct AuxSeries {
    pub family: Family,
    pub gamma: MSeries,
    pub eta: MSeries,
    /// `etas[j - 1] = eta_j`.
    pub etas: Vec<MSeries>,
}

/// Extension trait giving each family its change-of-variables data.
pub trait ChangeOfVariables {
    /// `[q_k] gamma` (or `delta`).
    fn base_coeff(&self, k: u32) -> Rat;
    /// `[q_k] eta_j` with `eta_0 = eta` (or `phi_j`).
    fn eta_coeff(&self, k: u32, j: u32) -> Rat;
    /// `f_j` with `p_j = q_j f_j(q)`.
    fn p_factor(&self, aux: &AuxSeries, j: u32) -> MSeries;
    /// Lagrange kernel for weight `d`.
    fn kernel(&self, aux: &AuxSeries, d: u32) -> MSeries;
}

impl ChangeOfVariables for Family {
    fn base_coeff(&self, k: u32) -> Rat {
        match self {
            Family::Monotone => big(&central_binomial(k)),
            Family::Classical => big(&BigInt::from(k).pow(k)) / big(&factorial(k)),
        }
    }

    fn eta_coeff(&self, k: u32, j: u32) -> Rat {
        match self {
            Family::Monotone => {
                big(&(central_binomial(k) * (2 * k + 1) * BigInt::from(k).pow(j)))
            }
            Family::Classical => big(&BigInt::from(k).pow(k + j + 1)) / big(&factorial(k)),
        }
    }

    fn p_factor(&self, aux: &AuxSeries, j: u32) -> MSeries {
        match self {
            Family::Monotone => aux.gamma.one_minus_pow(&int(2 * j as i64)),
            Family::Classical => aux.gamma.scale(&int(-(j as i64))).exp(),
        }
    }

    fn kernel(&self, aux: &AuxSeries, d: u32) -> MSeries {
        let one = MSeries::one(aux.eta.support().clone());
        let lead = one.sub(&aux.eta);
        match self {
            Family::Monotone => lead.mul(&aux.gamma.one_minus_pow(&int(-(2 * d as i64) - 1))),
            Family::Classical => lead.mul(&aux.gamma.scale(&int(d as i64)).exp()),
        }
    }
}

/// Materializes the auxiliary series on `support`, with `eta_j` for
/// `1 <= j <= max_j`.
pub fn aux_series(family: Family, support: &Support, max_j: u32) -> AuxSeries {
    let s = support.clone();
    AuxSeries {
        family,
        gamma: MSeries::linear(s.clone(), |k| family.base_coeff(k)),
        eta: MSeries::linear(s.clone(), |k| family.eta_coeff(k, 0)),
        etas: (1..=max_j)
            .map(|j| MSeries::linear(s.clone(), |k| family.eta_coeff(k, j)))
            .collect(),
    }
}

/// Images of `p_j` as series in `q` (index 0 unused).
pub fn p_in_q(family: Family, support: &Support) -> Vec<MSeries> {
    let aux = aux_series(family, support, 0);
    let mut out = vec![MSeries::zero(support.clone())];
    for j in 1..=support.max_weight {
        let qj = MSeries::var(support.clone(), j);
        out.push(qj.mul(&family.p_factor(&aux, j)));
    }
    out
}

/// Images of `q_j` as series in `p` (index 0 unused), by fixed-point
/// iteration `q_j <- p_j / f_j(q)`.
pub fn q_in_p(family: Family, support: &Support) -> Vec<MSeries> {
    let vars: Vec<MSeries> = (0..=support.max_weight)
        .map(|j| {
            if j == 0 {
                MSeries::zero(support.clone())
            } else {
                MSeries::var(support.clone(), j)
            }
        })
        .collect();
    let mut q = vars.clone();
    for _ in 0..support.max_weight {
        let gamma = (1..=support.max_weight).fold(MSeries::zero(support.clone()), |acc, k| {
            acc.add(&q[k as usize].scale(&family.base_coeff(k)))
        });
        q = (0..=support.max_weight)
            .map(|j| {
                if j == 0 {
                    return vars[0].clone();
                }
                let inv = match family {
                    Family::Monotone => gamma.one_minus_pow(&int(-2 * j as i64)),
                    Family::Classical => gamma.scale(&int(j as i64)).exp(),
                };
                vars[j as usize].mul(&inv)
            })
            .collect();
    }
    q
}

/// Rewrites a series in `p` as a series in `q`.
pub fn p_to_q(f: &MSeries, family: Family) -> MSeries {
    let support = f.support().clone();
    f.substitute(&p_in_q(family, &support), &support)
}

/// Rewrites a series in `q` as a series in `p`.
pub fn q_to_p(f: &MSeries, family: Family) -> MSeries {
    let support = f.support().clone();
    f.substitute(&q_in_p(family, &support), &support)
}

/// `[p_alpha] F` for `F` given in `q`, via the Lagrange kernel.
pub fn lagrange_extract(f: &MSeries, alpha: &Partition, family: Family) -> Result<Rat> {
    let d = alpha.size();
    if !f.support().admits(alpha) {
        return Err(HurwitzError::TruncationInsufficient {
            needed: d,
            available: f.max_weight(),
        });
    }
    if d == 0 {
        return Ok(f.constant_term());
    }
    let support = Support::dividing(alpha);
    let aux = aux_series(family, &support, 0);
    let kernel = family.kernel(&aux, d);
    let prod = kernel.mul(&f.truncate(&support));
    let c = prod.coeff(alpha);
    debug_assert!(prod.support().admits(alpha) || c.is_zero());
    Ok(c)
}
