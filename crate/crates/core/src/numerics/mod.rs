//! Exact rational helpers, partitions, and the combinatorial quantities the
//! Hurwitz formulas consume.

mod partition;
mod poly;

pub use partition::Partition;
pub use poly::{interpolate, PolynomialQ};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{HurwitzError, Result};

/// Canonical arbitrary-precision rational (always reduced, positive denominator).
pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn big(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// `"num/den"` with the denominator always written.
pub fn rat_to_string(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"n"` or `"n/d"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = |e: String| HurwitzError::Malformed(format!("rational {s:?}: {e}"));
    let s = s.trim();
    match s.split_once('/') {
        None => Ok(Rat::from_integer(
            s.parse::<BigInt>().map_err(|e| bad(e.to_string()))?,
        )),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().map_err(|e| bad(e.to_string()))?;
            let d = d.trim().parse::<BigInt>().map_err(|e| bad(e.to_string()))?;
            if d.is_zero() {
                return Err(bad("zero denominator".into()));
            }
            Ok(Rat::new(n, d))
        }
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)` for `0 <= k`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Generalized binomial `C(a, k) = a(a-1)...(a-k+1)/k!` for rational `a`.
pub fn binomial_rat(a: &Rat, k: u32) -> Rat {
    let mut acc = Rat::one();
    for i in 0..k {
        acc = acc * (a - int(i as i64)) / int(i as i64 + 1);
    }
    acc
}

/// `C(2k, k)`.
pub fn central_binomial(k: u32) -> BigInt {
    binomial(2 * k, k)
}

/// Rising product with `k` factors.
///
/// For `k >= 0` this is `a(a+1)...(a+k-1)`. For `k < 0` it is the reciprocal
/// `1 / ((a+k)(a+k+1)...(a-1))`, so that `rising(a, k) * rising(a+k, m) ==
/// rising(a, k+m)` holds for all integers. A vanishing reciprocal factor is an
/// error.
pub fn rising(a: &Rat, k: i64) -> Result<Rat> {
    if k >= 0 {
        let mut acc = Rat::one();
        for i in 0..k {
            acc *= a + int(i);
        }
        return Ok(acc);
    }
    let mut denom = Rat::one();
    for i in k..0 {
        let f = a + int(i);
        if f.is_zero() {
            return Err(HurwitzError::DivisionByZero(format!(
                "rising({a}, {k}) has a zero factor"
            )));
        }
        denom *= f;
    }
    Ok(denom.recip())
}

/// Elementary symmetric polynomial `e_k` of a list of values.
pub fn elem_sym(values: &[BigInt], k: usize) -> BigInt {
    // e[j] after processing a prefix
    let mut e = vec![BigInt::zero(); k + 1];
    e[0] = BigInt::one();
    for v in values {
        for j in (1..=k).rev() {
            let add = &e[j - 1] * v;
            e[j] += add;
        }
    }
    e[k].clone()
}

/// `e_k` over the multiset `{2 alpha_i + 1}`.
pub fn elem_sym_shifted(alpha: &Partition, k: usize) -> Result<BigInt> {
    if k > alpha.len() {
        return Err(HurwitzError::OutOfRange(format!(
            "e_{k} requested for a partition with {} parts",
            alpha.len()
        )));
    }
    let values: Vec<BigInt> = alpha
        .parts()
        .iter()
        .map(|&a| BigInt::from(2 * a + 1))
        .collect();
    Ok(elem_sym(&values, k))
}

/// `e_k` over the parts themselves.
pub fn elem_sym_parts(alpha: &Partition, k: usize) -> BigInt {
    let values: Vec<BigInt> = alpha.parts().iter().map(|&a| BigInt::from(a)).collect();
    elem_sym(&values, k)
}

/// Bernoulli numbers `B_0..=B_n` read off `z/(e^z - 1)`.
///
/// The series is inverted directly: `(e^z - 1)/z = sum z^k/(k+1)!`.
pub fn bernoulli_table(n: u32) -> Vec<Rat> {
    let a: Vec<Rat> = (0..=n).map(|k| big(&factorial(k + 1)).recip()).collect();
    let mut c: Vec<Rat> = Vec::with_capacity(n as usize + 1);
    c.push(Rat::one());
    for m in 1..=n as usize {
        let mut s = Rat::zero();
        for k in 1..=m {
            s += &a[k] * &c[m - k];
        }
        c.push(-s);
    }
    c.into_iter()
        .enumerate()
        .map(|(m, cm)| cm * big(&factorial(m as u32)))
        .collect()
}

/// `B_n` for even `n >= 2`.
pub fn bernoulli(n: u32) -> Result<Rat> {
    if n < 2 || n % 2 == 1 {
        return Err(HurwitzError::OutOfRange(format!(
            "bernoulli({n}): index must be even and at least 2"
        )));
    }
    Ok(bernoulli_table(n).pop().expect("table is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rising_examples() {
        assert_eq!(rising(&int(5), 2).unwrap(), int(30));
        assert_eq!(rising(&int(3), -2).unwrap(), rat(1, 2));
        assert_eq!(rising(&int(7), 0).unwrap(), int(1));
    }

    #[test]
    fn rising_zero_factor_is_error() {
        assert!(matches!(
            rising(&int(2), -3),
            Err(HurwitzError::DivisionByZero(_))
        ));
        // positive k with a zero factor is simply zero
        assert_eq!(rising(&int(-1), 3).unwrap(), int(0));
    }

    #[test]
    fn central_binomial_examples() {
        assert_eq!(central_binomial(0), BigInt::from(1));
        assert_eq!(central_binomial(1), BigInt::from(2));
        assert_eq!(central_binomial(4), BigInt::from(70));
    }

    #[test]
    fn elem_sym_shifted_examples() {
        let p = |v: &[u32]| Partition::new(v.to_vec()).unwrap();
        assert_eq!(elem_sym_shifted(&p(&[1, 1]), 2).unwrap(), BigInt::from(9));
        assert_eq!(elem_sym_shifted(&p(&[2, 1]), 1).unwrap(), BigInt::from(8));
        assert_eq!(elem_sym_shifted(&p(&[4, 2, 1]), 0).unwrap(), BigInt::from(1));
        assert!(elem_sym_shifted(&p(&[2, 1]), 3).is_err());
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(2).unwrap(), rat(1, 6));
        assert_eq!(bernoulli(4).unwrap(), rat(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), rat(-691, 2730));
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(0).is_err());
    }

    #[test]
    fn bernoulli_recurrence() {
        let b = bernoulli_table(30);
        assert_eq!(b[1], rat(-1, 2));
        for n in 1..30u32 {
            let s: Rat = (0..=n)
                .map(|j| big(&binomial(n + 1, j)) * &b[j as usize])
                .sum();
            assert!(s.is_zero(), "recurrence fails at n = {n}");
        }
    }

    #[test]
    fn rat_strings() {
        assert_eq!(rat_to_string(&rat(-6, 4)), "-3/2");
        assert_eq!(rat_to_string(&int(5)), "5/1");
        assert_eq!(parse_rat("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat("7").unwrap(), int(7));
        assert!(parse_rat("1/0").is_err());
    }

    fn product_poly(alpha: &Partition) -> Vec<BigInt> {
        // coefficients of prod (1 + (2a+1) x)
        let mut c = vec![BigInt::one()];
        for &a in alpha.parts() {
            let mut next = vec![BigInt::zero(); c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i] += ci;
                next[i + 1] += ci * BigInt::from(2 * a + 1);
            }
            c = next;
        }
        c
    }

    #[test]
    fn elem_sym_generating_identity() {
        for d in 0..=8 {
            for alpha in Partition::all_of(d) {
                let c = product_poly(&alpha);
                for (k, ck) in c.iter().enumerate() {
                    assert_eq!(&elem_sym_shifted(&alpha, k).unwrap(), ck);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn rising_composes(a in -20i64..20, k in -6i64..6, m in -6i64..6) {
            let a = rat(2 * a + 1, 2);
            let lhs = rising(&a, k).and_then(|x| rising(&(&a + int(k)), m).map(|y| x * y));
            let rhs = rising(&a, k + m);
            // half-integers never hit a zero factor
            prop_assert_eq!(lhs.unwrap(), rhs.unwrap());
        }

        #[test]
        fn rising_negative_is_reciprocal(a in 1i64..40, k in 1i64..8) {
            let a = int(a) + rat(1, 3);
            let x = rising(&a, -k).unwrap();
            let y = rising(&(&a - int(k)), k).unwrap();
            prop_assert_eq!(x * y, int(1));
        }
    }
}
