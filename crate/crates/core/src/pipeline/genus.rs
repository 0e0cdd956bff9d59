//! Genus-by-genus solution of the lifted join-cut equation, the basis
//! decomposition, and the integration back to the generating function.
//!
//! With `E_g = (1 - eta)^{2g-1} (1 - 4y_1)^{1/2} D H_g`, the lifted equation
//! reads
//!
//! ```text
//! (1 - T) E_g = Y_1^2                                              (g = 1)
//! (1 - T) E_g = u sum_{g'} E_{g'} E_{g-g'}
//!             + v^{2-2g} D( v^{2g-3} u^{1/2} E_{g-1} )              (g >= 2)
//! ```

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::ops::{apply_delta1, delta1_sq_h0, eta_y, TOperator};
use super::ring::{CoeffPoly, RElement};
use crate::error::{HurwitzError, Result};
use crate::numerics::{big, binomial, rat, Partition, Rat};
use crate::qseries::{LogForm, RationalForm};

/// `E_g = F_0 + F_1 (u - 1) + sum_{j>=2} F_j u^{-1/2} eta_{j-1}(y_1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisDecomp {
    pub genus: u32,
    /// `f[j] = F_{g,j}` for `j = 0..=3g-1`.
    pub f: Vec<CoeffPoly>,
}

/// Basis element `b_j(u)`: `1`, `u - 1`, then `u^{-1/2} eta_{j-1}(y_1)`.
pub fn basis_element(j: u32) -> RElement {
    match j {
        0 => RElement::one(),
        1 => RElement::u_pow(1).sub(&RElement::one()),
        _ => eta_y(j - 1).shift_u(-1),
    }
}

/// Solves for `E_g` given `lower[i] = E_{i+1}` for `i < g - 1`.
pub fn solve_genus(g: u32, lower: &[RElement]) -> Result<RElement> {
    if g == 0 {
        return Err(HurwitzError::OutOfRange("solve_genus needs g >= 1".into()));
    }
    if lower.len() < g as usize - 1 {
        return Err(HurwitzError::Malformed(format!(
            "genus {g} needs {} lower solutions, got {}",
            g - 1,
            lower.len()
        )));
    }
    let rhs = if g == 1 {
        delta1_sq_h0()
    } else {
        let gi = g as i32;
        let mut sum = RElement::zero();
        for a in 1..g {
            sum.add_assign(&lower[a as usize - 1].mul(&lower[(g - a) as usize - 1]));
        }
        let prev = lower[g as usize - 2].shift_u(1);
        let lifted = apply_delta1(&prev, 2 * gi - 3).shift_v(2 - 2 * gi);
        sum.shift_u(2).add(&lifted)
    };
    let bound = 3 * g - 1;
    rhs.check_in_r(bound).map_err(|e| {
        HurwitzError::Assertion(format!("genus {g} right-hand side: {e}"))
    })?;
    let t = TOperator::new(bound)?;
    let e = t.invert_one_minus(&rhs)?;
    e.check_in_r(bound)
        .map_err(|err| HurwitzError::Assertion(format!("genus {g} solution: {err}")))?;
    Ok(e)
}

/// `D H_g = v^{2g-1} u^{1/2} E_g`.
pub fn delta1_h(g: u32, e: &RElement) -> RElement {
    e.shift_v(2 * g as i32 - 1).shift_u(1)
}

/// `E_1, ..., E_{max_genus}`.
pub fn solve_up_to(max_genus: u32) -> Result<Vec<RElement>> {
    let mut out = Vec::new();
    for g in 1..=max_genus {
        let e = solve_genus(g, &out)?;
        out.push(e);
    }
    Ok(out)
}

/// Rewrites `E_g` in the triangular basis and checks the structural
/// identities.
pub fn decompose_basis(g: u32, e: &RElement) -> Result<BasisDecomp> {
    let top = 3 * g - 1;
    e.check_in_r(top)?;
    let basis: Vec<RElement> = (0..=top).map(basis_element).collect();
    let mut rem = e.clone();
    let mut f = vec![CoeffPoly::zero(); top as usize + 1];
    for j in (0..=top).rev() {
        let lead = basis[j as usize]
            .coeff(2 * j as i32)
            .coeff(0, &Partition::empty());
        let c = rem.coeff(2 * j as i32).scale(&lead.recip());
        rem = rem.sub(&basis[j as usize].mul_coeff(&c));
        f[j as usize] = c;
    }
    if !rem.is_zero() {
        return Err(HurwitzError::Assertion(format!(
            "genus {g}: basis decomposition leaves remainder {rem}"
        )));
    }
    for (j, fj) in f.iter().enumerate() {
        if let Some(w) = fj.weight() {
            if w + j as u32 > top {
                return Err(HurwitzError::Assertion(format!(
                    "genus {g}: F_{j} has weighted degree {w} > {}",
                    top - j as u32
                )));
            }
        }
    }
    if !f[0].is_zero() {
        return Err(HurwitzError::Assertion(format!(
            "genus {g}: F_0 = {} is nonzero",
            f[0]
        )));
    }
    let decomp = BasisDecomp { genus: g, f };
    if g >= 2 {
        let c2 = decomp.cond2();
        if !c2.is_zero() {
            return Err(HurwitzError::Assertion(format!(
                "genus {g}: -F_1 + sum F_j h_(j-1) = {c2}"
            )));
        }
    }
    Ok(decomp)
}

impl BasisDecomp {
    /// `-F_1 + sum_{j>=2} F_j h_{j-1}`.
    pub fn cond2(&self) -> CoeffPoly {
        let mut acc = self.f.get(1).cloned().unwrap_or_default().scale(&-Rat::one());
        for (j, fj) in self.f.iter().enumerate().skip(2) {
            acc.add_assign(&fj.mul(&CoeffPoly::hat(j as u32 - 1)));
        }
        acc
    }

    /// `sum_j F_j b_j(u)`.
    pub fn recompose(&self) -> RElement {
        self.f
            .iter()
            .enumerate()
            .fold(RElement::zero(), |acc, (j, fj)| {
                acc.add(&basis_element(j as u32).mul_coeff(fj))
            })
    }
}

/// Integrates `(F_2 eta + sum_{j>=3} F_j eta_{j-2}) (1 - eta)^{1-2g}` along
/// `q -> t q` and collects the result into rational form.
pub fn integrate_phi(g: u32, b: &BasisDecomp) -> Result<RationalForm> {
    if g < 2 || b.genus != g {
        return Err(HurwitzError::Malformed(format!(
            "integration needs a genus-{g} decomposition with g >= 2"
        )));
    }
    let n = 2 * g - 3;
    // h_alpha -> polynomial in v (exponent -> coefficient)
    let mut acc: BTreeMap<Partition, BTreeMap<i32, Rat>> = BTreeMap::new();
    let mut add_poly = |beta: Partition, c: &Rat, shift: u32, offset: u32| {
        // c h_beta sum_i C(n,i)/(l + offset + i) (v - 1)^{i + shift}
        let l = beta.len() as u32;
        let slot = acc.entry(beta).or_default();
        for i in 0..=n {
            let w = c * big(&binomial(n, i)) / Rat::from_integer((l + offset + i).into());
            let p = i + shift;
            for k in 0..=p {
                let sign = if (p - k) % 2 == 0 { Rat::one() } else { -Rat::one() };
                let term = &w * big(&binomial(p, k)) * sign;
                *slot.entry(k as i32).or_insert_with(Rat::zero) += term;
            }
        }
    };
    for (j, fj) in b.f.iter().enumerate() {
        if !fj.is_v_free() {
            return Err(HurwitzError::Malformed(format!("F_{j} involves v")));
        }
        for ((_, alpha), c) in fj.terms() {
            match j {
                0 | 1 => {}
                2 => add_poly(alpha.clone(), c, 1, 1),
                _ => add_poly(alpha.with_part(j as u32 - 2), c, 0, 0),
            }
        }
    }
    let target = 2 * g as i32 - 2;
    let mut terms = BTreeMap::new();
    for (alpha, poly) in acc {
        for (e, c) in &poly {
            let expected_zero = *e != target && !(alpha.is_empty() && *e == 0);
            if expected_zero && !c.is_zero() {
                return Err(HurwitzError::Assertion(format!(
                    "genus {g}: term h_{alpha} v^{e} survives with coefficient {c}"
                )));
            }
        }
        let c = poly.get(&target).cloned().unwrap_or_else(Rat::zero);
        if alpha.is_empty() {
            let c0 = poly.get(&0).cloned().unwrap_or_else(Rat::zero);
            if c0 != -c.clone() {
                return Err(HurwitzError::Assertion(format!(
                    "genus {g}: constant {c0} does not cancel {c}"
                )));
            }
        }
        if !c.is_zero() {
            terms.insert(alpha, c);
        }
    }
    RationalForm::new(g, terms)
}

/// The genus-one logarithmic form.
pub fn genus1_closed() -> LogForm {
    LogForm {
        a: rat(1, 24),
        b: rat(-1, 8),
    }
}

/// Everything the pipeline produces for one genus.
#[derive(Clone, Debug)]
pub struct GenusResult {
    pub genus: u32,
    pub normalized: RElement,
    pub decomposition: BasisDecomp,
    /// `None` at genus one, where the logarithmic form applies.
    pub form: Option<RationalForm>,
}

/// Runs the pipeline for genera `1..=max_genus`.
pub fn run(max_genus: u32) -> Result<Vec<GenusResult>> {
    let es = solve_up_to(max_genus)?;
    es.iter()
        .enumerate()
        .map(|(i, e)| {
            let g = i as u32 + 1;
            let decomposition = decompose_basis(g, e)?;
            let form = if g >= 2 {
                Some(integrate_phi(g, &decomposition)?)
            } else {
                None
            };
            Ok(GenusResult {
                genus: g,
                normalized: e.clone(),
                decomposition,
                form,
            })
        })
        .collect()
}

/// The rational form for a single genus `g >= 2`.
pub fn rational_form(g: u32) -> Result<RationalForm> {
    if g < 2 {
        return Err(HurwitzError::OutOfRange(format!(
            "rational forms exist for g >= 2, got {g}"
        )));
    }
    let es = solve_up_to(g)?;
    let b = decompose_basis(g, &es[g as usize - 1])?;
    integrate_phi(g, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn genus_one() {
        let e1 = solve_genus(1, &[]).unwrap();
        let expected = RElement::big_y1_pow(2)
            .add(&RElement::big_y1_pow(1).mul_coeff(&CoeffPoly::hat(1).scale(&rat(1, 6))));
        assert_eq!(e1, expected);
        let b = decompose_basis(1, &e1).unwrap();
        assert!(b.f[0].is_zero());
        assert_eq!(
            b.f[1],
            CoeffPoly::constant(rat(-1, 16)).add(&CoeffPoly::hat(1).scale(&rat(1, 24)))
        );
        assert_eq!(b.f[2], CoeffPoly::constant(rat(1, 24)));
        assert_eq!(b.recompose(), e1);
    }

    #[test]
    fn genus_two_form() {
        let form = rational_form(2).unwrap();
        let s = rat(1, 720);
        let expect = [
            (vec![], 3),
            (vec![1], -5),
            (vec![2], -6),
            (vec![3], 5),
            (vec![1, 1], -10),
            (vec![2, 1], 29),
            (vec![1, 1, 1], 28),
        ];
        assert_eq!(form.terms.len(), expect.len());
        for (parts, c) in expect {
            assert_eq!(form.coeff(&p(&parts)), int(c) * &s, "{parts:?}");
        }
        assert_eq!(form.constant, rat(-3, 720));
    }
}
