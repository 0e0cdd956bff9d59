//! The lifting derivation, the projection fit, and the nilpotent operator
//! on ring elements.
//!
//! Rules used by the derivation (with `W = u^{3/2} - u^{1/2}`, the algebraic
//! form of `4y_1(1-4y_1)^{-3/2}`, and `eta_j(y) = (y d/dy)^j u^{3/2}`):
//!
//! ```text
//! D u^a = a (u - 1)^2 u^{a + 1/2} v
//! D v   = v^2 (eta_1(y) + W h_1)
//! D h_k = v (eta_{k+1}(y) + W h_{k+1}) + h_k v (eta_1(y) + W h_1)
//! ```

use num_traits::{One, Zero};

use super::ring::{CoeffPoly, RElement};
use crate::error::{HurwitzError, Result};
use crate::numerics::{big, binomial, central_binomial, factorial, int, interpolate, rising, Partition, Rat};

/// `y d/dy` acting on the `u`-part: `u^a -> a (u^{a+1} - u^a)`.
pub fn y_dy(f: &RElement) -> RElement {
    let mut out = RElement::zero();
    for (e2, c) in f.terms() {
        let a = Rat::new((*e2).into(), 2.into());
        let c = c.scale(&a);
        out.add_coeff(e2 + 2, &c);
        out.add_coeff(*e2, &c.scale(&-Rat::one()));
    }
    out
}

/// `eta_j(y_1)` as an element; `j = 0` gives `eta(y_1) = u^{3/2} - 1`.
pub fn eta_y(j: u32) -> RElement {
    if j == 0 {
        return RElement::u_half_pow(3).sub(&RElement::one());
    }
    (0..j).fold(RElement::u_half_pow(3), |acc, _| y_dy(&acc))
}

/// `gamma(y_1) = u^{1/2} - 1`.
pub fn gamma_y() -> RElement {
    RElement::u_half_pow(1).sub(&RElement::one())
}

/// `W = eta(y_1) - gamma(y_1) = 4 y_1 (1 - 4y_1)^{-3/2}`.
pub fn w_series() -> RElement {
    RElement::u_half_pow(3).sub(&RElement::u_half_pow(1))
}

/// `Y_1^2 = y_1^2 (1 - 4y_1)^{-2}`.
pub fn delta1_sq_h0() -> RElement {
    RElement::big_y1_pow(2)
}

/// Tables for repeated derivations.
#[derive(Default)]
struct DeltaTables {
    eta_y: Vec<RElement>,
}

impl DeltaTables {
    fn eta_y(&mut self, j: u32) -> &RElement {
        while self.eta_y.len() <= j as usize {
            let next = match self.eta_y.last() {
                None => eta_y(0),
                Some(_) if self.eta_y.len() == 1 => eta_y(1),
                Some(prev) => y_dy(prev),
            };
            self.eta_y.push(next);
        }
        &self.eta_y[j as usize]
    }

    /// `eta_j(y) + W h_j`.
    fn lift(&mut self, j: u32) -> RElement {
        let w = w_series();
        self.eta_y(j)
            .add(&w.mul_coeff(&CoeffPoly::hat(j)))
    }
}

/// The lifting operator applied to `v^m F`.
pub fn apply_delta1(f: &RElement, m: i32) -> RElement {
    delta1(&f.shift_v(m))
}

fn delta1(f: &RElement) -> RElement {
    let mut tables = DeltaTables::default();
    let d_v = tables.lift(1);
    let mut out = RElement::zero();
    for (e2, c) in f.terms() {
        for ((m, hats), coef) in c.terms() {
            let mono = CoeffPoly::monomial(*m, hats.clone(), coef.clone());
            let mono_v = mono.shift_v(1);
            // u^a part
            if *e2 != 0 {
                let a = Rat::new((*e2).into(), 2.into());
                let sq = RElement::u_pow(2)
                    .sub(&RElement::u_pow(1).scale(&int(2)))
                    .add(&RElement::one());
                out.add_assign(&sq.shift_u(e2 + 1).mul_coeff(&mono_v.scale(&a)));
            }
            // v^m and the h_k v factors
            let n = *m + hats.len() as i32;
            if n != 0 {
                out.add_assign(&d_v.shift_u(*e2).mul_coeff(&mono_v.scale(&int(n as i64))));
            }
            // h_k -> eta_{k+1}(y) + W h_{k+1}
            for (k, mult) in hats.multiplicities() {
                let rest = hats.without_part(k).expect("part present");
                let base = CoeffPoly::monomial(m + 1, rest, coef * int(mult as i64));
                out.add_assign(&tables.lift(k + 1).shift_u(*e2).mul_coeff(&base));
            }
        }
    }
    out
}

/// `(1 - eta)^{-1} Pi_2 ( y_2^i (1 - 4y_2)^{-3/2-i} )` in the generators,
/// fitted from the coefficients at `y^k`, `k >= 1`.
pub fn pi2_project(i: u32) -> Result<CoeffPoly> {
    // a_k = 4^{k-i} rising(3/2 + i, k - i) / (k - i)!
    let a = |k: u32| -> Rat {
        if k < i {
            return Rat::zero();
        }
        let n = k - i;
        let base = Rat::new((2 * i + 3).into(), 2.into());
        int(4).pow(n as i32) * rising(&base, n as i64).expect("positive base")
            / big(&factorial(n))
    };
    let weight = |k: u32| big(&(central_binomial(k) * (2 * k + 1)));
    let points: Vec<(Vec<Rat>, Rat)> = (1..=i + 4)
        .map(|k| (vec![int(k as i64)], a(k) / weight(k)))
        .collect();
    let p = interpolate(&points, i).map_err(|e| {
        HurwitzError::Assertion(format!("projection fit for i = {i} failed: {e}"))
    })?;
    let mut out = CoeffPoly::zero();
    for (exps, c) in p.terms() {
        match exps[0] {
            0 => {
                out.add_term(1, Partition::empty(), c.clone());
                out.add_term(0, Partition::empty(), -c.clone());
            }
            j => out.add_term(0, Partition::single(j), c.clone()),
        }
    }
    Ok(out)
}

/// The operator `T`, with its images of `u^n` cached up to a degree.
pub struct TOperator {
    images: Vec<RElement>,
}

impl TOperator {
    /// Prepares `T(u^n)` for `n <= max_degree`.
    pub fn new(max_degree: u32) -> Result<Self> {
        let proj: Vec<CoeffPoly> = (0..=max_degree)
            .map(|i| if i == 0 { Ok(CoeffPoly::zero()) } else { pi2_project(i) })
            .collect::<Result<_>>()?;
        let y_pows: Vec<RElement> = (0..=max_degree).map(RElement::big_y1_pow).collect();
        // T(Y^k) = sum_{i=1}^{k-1} Y^{k-i} P_i
        let t_y: Vec<RElement> = (0..=max_degree)
            .map(|k| {
                (1..k).fold(RElement::zero(), |acc, i| {
                    acc.add(&y_pows[(k - i) as usize].mul_coeff(&proj[i as usize]))
                })
            })
            .collect();
        // u^n = sum_k C(n,k) 4^k Y^k
        let images = (0..=max_degree)
            .map(|n| {
                (0..=n).fold(RElement::zero(), |acc, k| {
                    let c = big(&binomial(n, k)) * int(4).pow(k as i32);
                    acc.add(&t_y[k as usize].scale(&c))
                })
            })
            .collect();
        Ok(TOperator { images })
    }

    pub fn max_degree(&self) -> u32 {
        self.images.len() as u32 - 1
    }

    pub fn apply(&self, f: &RElement) -> Result<RElement> {
        let mut out = RElement::zero();
        for (e2, c) in f.terms() {
            if e2 % 2 != 0 {
                return Err(HurwitzError::Malformed(format!(
                    "T needs integer exponents, found u^({e2}/2)"
                )));
            }
            if *e2 < 0 || e2 / 2 > self.max_degree() as i32 {
                return Err(HurwitzError::OutOfRange(format!(
                    "u^{} outside the prepared range 0..={}",
                    e2 / 2,
                    self.max_degree()
                )));
            }
            out.add_assign(&self.images[(e2 / 2) as usize].mul_coeff(c));
        }
        Ok(out)
    }

    /// `(1 + T + ... + T^{d-1}) F` with `d` the weighted degree, checked by
    /// applying `1 - T` to the result.
    pub fn invert_one_minus(&self, f: &RElement) -> Result<RElement> {
        let d = f.weighted_degree().unwrap_or(0).max(1);
        let mut term = f.clone();
        let mut acc = f.clone();
        for _ in 1..d {
            term = self.apply(&term)?;
            if term.is_zero() {
                break;
            }
            acc.add_assign(&term);
        }
        let back = acc.sub(&self.apply(&acc)?);
        if back != *f {
            return Err(HurwitzError::Assertion(
                "(1 - T) applied to the computed inverse does not return the input".into(),
            ));
        }
        Ok(acc)
    }
}

fn u_degree(f: &RElement) -> u32 {
    f.terms().map(|(e, _)| (*e).max(0) as u32 / 2).max().unwrap_or(0)
}

/// `T(F)`.
pub fn apply_t(f: &RElement) -> Result<RElement> {
    TOperator::new(u_degree(f))?.apply(f)
}

/// `(1 - T)^{-1} F`.
pub fn invert_one_minus_t(f: &RElement) -> Result<RElement> {
    TOperator::new(u_degree(f))?.invert_one_minus(f)
}
