use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::Rat;
use crate::error::{HurwitzError, Result};

/// Multivariate polynomial over the rationals with a fixed number of
/// variables. Keys are exponent vectors; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolynomialQ {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl PolynomialQ {
    pub fn zero(nvars: usize) -> Self {
        PolynomialQ {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = PolynomialQ::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The variable `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = PolynomialQ::zero(nvars);
        p.add_term(e, Rat::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        assert_eq!(exps.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
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

    pub fn coeff(&self, exps: &[u32]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    pub fn add(&self, other: &PolynomialQ) -> PolynomialQ {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> PolynomialQ {
        let mut out = PolynomialQ::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &PolynomialQ) -> PolynomialQ {
        assert_eq!(self.nvars, other.nvars);
        let mut out = PolynomialQ::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*x{}", v + 1)?,
                    _ => write!(f, "*x{}^{k}", v + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Exponent vectors of total degree at most `degree` in `nvars` variables.
fn monomials_up_to(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, degree, &mut cur, &mut out);
    out
}

/// Exact interpolation of a polynomial of total degree at most `degree`
/// through every given point.
///
/// The full (possibly over-determined) linear system is solved by exact
/// Gaussian elimination. Rank deficiency is reported as
/// [`HurwitzError::Singular`]; points that no polynomial of that degree can
/// fit are reported as [`HurwitzError::Inconsistent`].
pub fn interpolate(points: &[(Vec<Rat>, Rat)], degree: u32) -> Result<PolynomialQ> {
    let nvars = match points.first() {
        Some((x, _)) => x.len(),
        None => return Err(HurwitzError::Singular("no points".into())),
    };
    if points.iter().any(|(x, _)| x.len() != nvars) {
        return Err(HurwitzError::Malformed("points of mixed dimension".into()));
    }
    let monos = monomials_up_to(nvars, degree);
    let ncols = monos.len();
    if points.len() < ncols {
        return Err(HurwitzError::Singular(format!(
            "{} points for {ncols} unknown coefficients",
            points.len()
        )));
    }

    let mut rows: Vec<Vec<Rat>> = points
        .iter()
        .map(|(x, y)| {
            let mut row: Vec<Rat> = monos
                .iter()
                .map(|e| {
                    e.iter().zip(x).fold(Rat::one(), |acc, (&k, xi)| {
                        acc * num_traits::pow(xi.clone(), k as usize)
                    })
                })
                .collect();
            row.push(y.clone());
            row
        })
        .collect();

    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(ncols);
    for col in 0..ncols {
        let Some(r) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return Err(HurwitzError::Singular(format!(
                "coefficient of monomial {:?} undetermined",
                monos[col]
            )));
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for v in rows[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let prow = rows[pivot_row].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if let Some(bad) = rows[pivot_row..].iter().find(|r| !r[ncols].is_zero()) {
        return Err(HurwitzError::Inconsistent(format!(
            "no polynomial of degree {degree} fits (residual {})",
            bad[ncols]
        )));
    }

    let mut poly = PolynomialQ::zero(nvars);
    for (i, &col) in pivots.iter().enumerate() {
        poly.add_term(monos[col].clone(), rows[i][ncols].clone());
    }
    Ok(poly)
}

/// Convenience for one-variable integer sample points.
#[cfg(test)]
pub(crate) fn points_1d(samples: &[(i64, Rat)]) -> Vec<(Vec<Rat>, Rat)> {
    samples
        .iter()
        .map(|(x, y)| (vec![super::int(*x)], y.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    #[test]
    fn square_from_three_points() {
        let pts = points_1d(&[(1, int(1)), (2, int(4)), (3, int(9))]);
        let p = interpolate(&pts, 2).unwrap();
        let mut expected = PolynomialQ::zero(1);
        expected.add_term(vec![2], int(1));
        assert_eq!(p, expected);
    }

    #[test]
    fn constant_data() {
        let pts = points_1d(&[(1, rat(3, 7)), (5, rat(3, 7)), (9, rat(3, 7))]);
        let p = interpolate(&pts, 2).unwrap();
        assert_eq!(p, PolynomialQ::constant(1, rat(3, 7)));
    }

    #[test]
    fn singular_and_inconsistent() {
        let pts = points_1d(&[(1, int(1)), (2, int(4))]);
        assert!(matches!(interpolate(&pts, 2), Err(HurwitzError::Singular(_))));
        let dup = points_1d(&[(1, int(1)), (1, int(1)), (1, int(1))]);
        assert!(matches!(interpolate(&dup, 1), Err(HurwitzError::Singular(_))));
        let pts = points_1d(&[(1, int(1)), (2, int(4)), (3, int(9))]);
        assert!(matches!(
            interpolate(&pts, 1),
            Err(HurwitzError::Inconsistent(_))
        ));
    }

    #[test]
    fn two_variables() {
        // 1 + x y - 2 x^2 on a small grid
        let f = |x: i64, y: i64| int(1 + x * y - 2 * x * x);
        let pts: Vec<_> = (0..4)
            .flat_map(|x| (0..4).map(move |y| (x, y)))
            .map(|(x, y)| (vec![int(x), int(y)], f(x, y)))
            .collect();
        let p = interpolate(&pts, 2).unwrap();
        assert_eq!(p.coeff(&[1, 1]), int(1));
        assert_eq!(p.coeff(&[2, 0]), int(-2));
        assert_eq!(p.coeff(&[0, 0]), int(1));
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(p.eval(&[int(7), int(3)]), f(7, 3));
    }
}
