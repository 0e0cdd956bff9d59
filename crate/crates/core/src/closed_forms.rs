//! Closed formulas for low genus, single-cycle numbers, the Bernoulli
//! constants, the published coefficient tables, and the polynomiality fit.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Deserialize;

use crate::error::{HurwitzError, Result};
use crate::numerics::{
    big, bernoulli, binomial, central_binomial, elem_sym_parts, elem_sym_shifted, factorial, int,
    interpolate, parse_rat, rising, Partition, PolynomialQ, Rat,
};
use crate::oracle::Family;
use crate::pipeline::{genus1_closed, rational_form};
use crate::qseries::{
    aux_series, expand_log_form, expand_rational_form, lagrange_extract, MSeries, RationalForm,
    Support,
};

const EMBEDDED_TABLES: &str = include_str!("../data/tables.json");

/// Environment variable naming a replacement for the embedded table file.
pub const TABLES_ENV: &str = "HURWITZ_TABLES";

fn need_positive(alpha: &Partition) -> Result<u32> {
    let d = alpha.size();
    if d == 0 {
        return Err(HurwitzError::InvalidPartition(
            "closed formulas need d >= 1".into(),
        ));
    }
    Ok(d)
}

fn prefactor(alpha: &Partition) -> Rat {
    big(&factorial(alpha.size())) / big(&alpha.aut_order())
}

fn central_product(alpha: &Partition) -> BigInt {
    alpha
        .parts()
        .iter()
        .map(|&a| central_binomial(a))
        .product()
}

/// `prod alpha_j^{alpha_j} / alpha_j!`.
fn classical_product(alpha: &Partition) -> Rat {
    alpha.parts().iter().fold(Rat::one(), |acc, &a| {
        acc * big(&BigInt::from(a).pow(a)) / big(&factorial(a))
    })
}

pub fn monotone_genus0(alpha: &Partition) -> Result<Rat> {
    let d = need_positive(alpha)?;
    let l = alpha.len() as i64;
    let r = rising(&int(2 * d as i64 + 1), l - 3)?;
    Ok(prefactor(alpha) * r * big(&central_product(alpha)))
}

pub fn monotone_genus1(alpha: &Partition) -> Result<Rat> {
    let d = need_positive(alpha)?;
    let l = alpha.len() as i64;
    let base = int(2 * d as i64 + 1);
    let mut bracket = rising(&base, l)? - int(3) * rising(&base, l - 1)?;
    for k in 2..=l {
        let e = elem_sym_shifted(alpha, k as usize)?;
        bracket -= big(&factorial(k as u32 - 2)) * rising(&base, l - k)? * big(&e);
    }
    Ok(prefactor(alpha) * big(&central_product(alpha)) * bracket / int(24))
}

pub fn classical_genus0(alpha: &Partition) -> Result<Rat> {
    let d = need_positive(alpha)?;
    let l = alpha.len() as i32;
    let dpow = int(d as i64).pow(l - 3);
    Ok(prefactor(alpha) * big(&factorial(d + l as u32 - 2)) * dpow * classical_product(alpha))
}

pub fn classical_genus1(alpha: &Partition) -> Result<Rat> {
    let d = need_positive(alpha)?;
    let l = alpha.len() as i32;
    let dd = int(d as i64);
    let mut bracket = dd.pow(l) - dd.pow(l - 1);
    for k in 2..=l {
        bracket -= big(&factorial(k as u32 - 2))
            * dd.pow(l - k)
            * big(&elem_sym_parts(alpha, k as usize));
    }
    Ok(prefactor(alpha)
        * big(&factorial(d + l as u32))
        * classical_product(alpha)
        * bracket
        / int(24))
}

/// `(1/24) log(1/(1 - phi)) - delta/24`, the classical genus-one series in
/// the auxiliary variables.
pub fn classical_genus1_series(support: &Support) -> MSeries {
    let aux = aux_series(Family::Classical, support, 0);
    aux.eta
        .log_one_minus_inv()
        .sub(&aux.gamma)
        .scale(&Rat::new(1.into(), 24.into()))
}

/// Single-cycle monotone number `H_g((d))` from the hyperbolic-sine series.
pub fn mn_single_cycle(g: u32, d: u32) -> Result<Rat> {
    if g == 0 || d == 0 {
        return Err(HurwitzError::OutOfRange(format!(
            "single-cycle formula needs g >= 1 and d >= 1, got g={g}, d={d}"
        )));
    }
    // sinh(z/2)/(z/2) = sum_n w^n / (4^n (2n+1)!), w = z^2
    let n = g as usize;
    let base: Vec<Rat> = (0..=n)
        .map(|k| Rat::one() / (big(&factorial(2 * k as u32 + 1)) * int(4).pow(k as i32)))
        .collect();
    let mut acc = vec![Rat::zero(); n + 1];
    acc[0] = Rat::one();
    for _ in 0..(2 * d - 2) {
        let mut next = vec![Rat::zero(); n + 1];
        for (i, a) in acc.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in base.iter().enumerate().take(n + 1 - i) {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    let coeff = &acc[n] * big(&factorial(2 * g));
    let lead = big(&factorial(2 * d)) / big(&factorial(d))
        * big(&binomial(2 * g - 2 + 2 * d, 2 * g - 2))
        / int(2 * g as i64 * (2 * g as i64 - 1));
    Ok(lead * coeff)
}

/// `-B_{2g} / (2g (2g - 2))`.
pub fn bernoulli_constant(g: u32) -> Result<Rat> {
    if g < 2 {
        return Err(HurwitzError::OutOfRange(format!(
            "the constant term exists for g >= 2, got {g}"
        )));
    }
    let b = bernoulli(2 * g)?;
    Ok(-b / int(2 * g as i64 * (2 * g as i64 - 2)))
}

/// The genus-`g` generating function on `support`, from the logarithmic
/// form (genus one) or the given rational form.
pub fn genus_series(
    family: Family,
    g: u32,
    form: Option<&RationalForm>,
    support: &Support,
) -> Result<MSeries> {
    match (g, family) {
        (0, _) => Err(HurwitzError::OutOfRange(
            "genus zero has no form in the auxiliary series".into(),
        )),
        (1, Family::Monotone) => Ok(expand_log_form(&genus1_closed(), support)),
        (1, Family::Classical) => Ok(classical_genus1_series(support)),
        _ => {
            let form = form.ok_or_else(|| {
                HurwitzError::Table(format!("no rational form supplied for genus {g}"))
            })?;
            if form.genus != g {
                return Err(HurwitzError::Malformed(format!(
                    "form has genus {}, expected {g}",
                    form.genus
                )));
            }
            Ok(expand_rational_form(form, family, support))
        }
    }
}

/// `[p_alpha]` of a generating function, rescaled to the Hurwitz number.
pub fn number_from_coefficient(family: Family, g: u32, alpha: &Partition, c: Rat) -> Rat {
    let d = alpha.size();
    let scale = match family {
        Family::Monotone => big(&factorial(d)),
        Family::Classical => {
            let r = 2 * g + alpha.len() as u32 + d - 2;
            big(&factorial(d)) * big(&factorial(r))
        }
    };
    c * scale
}

/// Hurwitz number read off a genus form by Lagrange extraction.
pub fn number_via_form(
    family: Family,
    g: u32,
    alpha: &Partition,
    form: Option<&RationalForm>,
) -> Result<Rat> {
    need_positive(alpha)?;
    let f = genus_series(family, g, form, &Support::dividing(alpha))?;
    let c = lagrange_extract(&f, alpha, family)?;
    Ok(number_from_coefficient(family, g, alpha, c))
}

#[derive(Deserialize)]
struct RawFile {
    tables: Vec<RawTable>,
}

#[derive(Deserialize)]
struct RawTable {
    family: String,
    genus: u32,
    normalization: String,
    constant: String,
    terms: Vec<RawTerm>,
    #[serde(default)]
    errata: Vec<RawTerm>,
}

#[derive(Deserialize)]
struct RawTerm {
    alpha: Vec<u32>,
    coeff: String,
}

/// A published coefficient table: integers as printed, with the common
/// normalization kept separately. `errata` replaces printed entries that
/// disagree with the join-cut numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaperTable {
    pub family: Family,
    pub genus: u32,
    pub normalization: Rat,
    pub constant: Rat,
    pub raw: BTreeMap<Partition, Rat>,
    pub errata: BTreeMap<Partition, Rat>,
}

impl PaperTable {
    /// Corrected integer entries.
    pub fn entries(&self) -> BTreeMap<Partition, Rat> {
        let mut out = self.raw.clone();
        for (a, c) in &self.errata {
            out.insert(a.clone(), c.clone());
        }
        out
    }

    /// The normalized coefficient `a_{g,alpha}`, after errata.
    pub fn coeff(&self, alpha: &Partition) -> Rat {
        let c = self.errata.get(alpha).or_else(|| self.raw.get(alpha));
        c.cloned().unwrap_or_else(Rat::zero) * &self.normalization
    }

    /// The normalized coefficient as printed.
    pub fn printed_coeff(&self, alpha: &Partition) -> Rat {
        self.raw.get(alpha).cloned().unwrap_or_else(Rat::zero) * &self.normalization
    }

    /// The form with errata applied.
    pub fn form(&self) -> Result<RationalForm> {
        self.build_form(&self.entries())
    }

    /// The form exactly as printed.
    pub fn printed_form(&self) -> Result<RationalForm> {
        self.build_form(&self.raw)
    }

    fn build_form(&self, entries: &BTreeMap<Partition, Rat>) -> Result<RationalForm> {
        let terms = entries
            .iter()
            .map(|(a, c)| (a.clone(), c * &self.normalization))
            .collect();
        let form = RationalForm::new(self.genus, terms)?;
        if form.constant != &self.constant * &self.normalization {
            return Err(HurwitzError::Table(format!(
                "{:?} genus {}: stated constant {} does not cancel the empty term",
                self.family, self.genus, self.constant
            )));
        }
        Ok(form)
    }
}

fn parse_terms(terms: Vec<RawTerm>) -> Result<BTreeMap<Partition, Rat>> {
    let mut out = BTreeMap::new();
    for term in terms {
        let alpha = Partition::new(term.alpha)?;
        let c = parse_rat(&term.coeff)?;
        if out.insert(alpha.clone(), c).is_some() {
            return Err(HurwitzError::Table(format!("duplicate entry {alpha}")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct PaperTables {
    tables: Vec<PaperTable>,
}

impl PaperTables {
    /// Loads the file named by `HURWITZ_TABLES`, or the embedded copy.
    pub fn load() -> Result<Self> {
        match std::env::var_os(TABLES_ENV) {
            Some(path) => {
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    HurwitzError::Table(format!("{}: {e}", path.to_string_lossy()))
                })?;
                PaperTables::from_json(&text)
            }
            None => PaperTables::embedded(),
        }
    }

    pub fn embedded() -> Result<Self> {
        PaperTables::from_json(EMBEDDED_TABLES)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawFile =
            serde_json::from_str(text).map_err(|e| HurwitzError::Table(e.to_string()))?;
        let mut tables = Vec::with_capacity(raw.tables.len());
        for t in raw.tables {
            let family = match t.family.as_str() {
                "monotone" => Family::Monotone,
                "classical" => Family::Classical,
                other => return Err(HurwitzError::Table(format!("unknown family {other:?}"))),
            };
            let entries = parse_terms(t.terms)?;
            let errata = parse_terms(t.errata)?;
            if let Some(a) = errata.keys().find(|a| !entries.contains_key(*a)) {
                return Err(HurwitzError::Table(format!("erratum for missing entry {a}")));
            }
            let table = PaperTable {
                family,
                genus: t.genus,
                normalization: parse_rat(&t.normalization)?,
                constant: parse_rat(&t.constant)?,
                raw: entries,
                errata,
            };
            table.form()?;
            table.printed_form()?;
            tables.push(table);
        }
        Ok(PaperTables { tables })
    }

    pub fn get(&self, family: Family, genus: u32) -> Result<&PaperTable> {
        self.tables
            .iter()
            .find(|t| t.family == family && t.genus == genus)
            .ok_or_else(|| HurwitzError::Table(format!("no {family:?} table for genus {genus}")))
    }

    pub fn iter(&self) -> impl Iterator<Item = &PaperTable> {
        self.tables.iter()
    }
}

/// Compares top-weight coefficients of a monotone form against
/// `2^{3g-3}` times the classical table.
pub fn scaling_check_with(g: u32, monotone: &RationalForm, tables: &PaperTables) -> Result<bool> {
    let classical = tables.get(Family::Classical, g)?;
    let top = 3 * g - 3;
    let factor = int(2).pow(top as i32);
    Ok(Partition::all_of(top)
        .iter()
        .all(|a| monotone.coeff(a) == &factor * classical.coeff(a)))
}

/// The top-weight scaling relation for the pipeline's genus-`g` form.
pub fn scaling_check(g: u32) -> Result<bool> {
    let tables = PaperTables::load()?;
    tables.get(Family::Classical, g)?;
    scaling_check_with(g, &rational_form(g)?, &tables)
}

/// `H(alpha) |Aut alpha| / (d! prod C(2 alpha_j, alpha_j))`.
pub fn polynomiality_value(alpha: &Partition, h: &Rat) -> Rat {
    h * big(&alpha.aut_order()) / (big(&factorial(alpha.size())) * big(&central_product(alpha)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialFit {
    pub poly: PolynomialQ,
    /// Smallest degree that fits the training data.
    pub degree: u32,
    pub training: usize,
    pub held_out: usize,
}

/// Number of partitions held back from fitting and used only to verify.
pub const HELD_OUT: usize = 3;

fn permutations(parts: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // next lexicographic permutation
    loop {
        let Some(i) = (1..sorted.len()).rev().find(|&i| sorted[i - 1] < sorted[i]) else {
            break;
        };
        let j = (i..sorted.len()).rev().find(|&j| sorted[j] > sorted[i - 1]).unwrap();
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
        out.push(sorted.clone());
    }
    out
}

fn symmetric_points(alpha: &Partition, value: &Rat) -> Vec<(Vec<Rat>, Rat)> {
    permutations(alpha.parts())
        .into_iter()
        .map(|p| (p.into_iter().map(|a| int(a as i64)).collect(), value.clone()))
        .collect()
}

/// Fits the symmetric polynomial `P_{g,l}` through the samples, raising the
/// degree until an exact fit is found, then checks it against the last
/// [`HELD_OUT`] samples.
pub fn polynomiality_extract(
    g: u32,
    ell: usize,
    samples: &[Partition],
    value: &dyn Fn(&Partition) -> Result<Rat>,
) -> Result<PolynomialFit> {
    if g == 0 && ell < 3 {
        return Err(HurwitzError::OutOfRange(format!(
            "no polynomial for g=0, l={ell}"
        )));
    }
    if ell == 0 {
        return Err(HurwitzError::OutOfRange("l must be positive".into()));
    }
    if let Some(bad) = samples.iter().find(|a| a.len() != ell) {
        return Err(HurwitzError::InvalidPartition(format!(
            "sample {bad} does not have {ell} parts"
        )));
    }
    if samples.len() <= HELD_OUT {
        return Err(HurwitzError::Singular(format!(
            "{} samples leave nothing to fit after holding out {HELD_OUT}",
            samples.len()
        )));
    }
    let mut valued = Vec::with_capacity(samples.len());
    for a in samples {
        valued.push((a.clone(), polynomiality_value(a, &value(a)?)));
    }
    let (train, held) = valued.split_at(valued.len() - HELD_OUT);
    let points: Vec<(Vec<Rat>, Rat)> = train
        .iter()
        .flat_map(|(a, v)| symmetric_points(a, v))
        .collect();
    let mut degree = 0;
    let fit = loop {
        match interpolate(&points, degree) {
            Ok(p) => break p,
            Err(HurwitzError::Inconsistent(_)) => degree += 1,
            Err(e) => return Err(e),
        }
    };
    match interpolate(&points, degree + 1) {
        Ok(p) if p != fit => {
            return Err(HurwitzError::Inconsistent(format!(
                "interpolant changes between degree {degree} and {}",
                degree + 1
            )))
        }
        Ok(_) | Err(HurwitzError::Singular(_)) => {}
        Err(e) => return Err(e),
    }
    for (a, v) in held {
        let x: Vec<Rat> = a.parts().iter().map(|&k| int(k as i64)).collect();
        let got = fit.eval(&x);
        if &got != v {
            return Err(HurwitzError::Inconsistent(format!(
                "held-out sample {a}: polynomial gives {got}, value is {v}"
            )));
        }
    }
    Ok(PolynomialFit {
        poly: fit,
        degree,
        training: train.len(),
        held_out: held.len(),
    })
}

/// Monotone values for the polynomiality fit: closed formulas in genus zero
/// and one, the given rational form above.
pub fn monotone_value(g: u32, alpha: &Partition, form: Option<&RationalForm>) -> Result<Rat> {
    match g {
        0 => monotone_genus0(alpha),
        1 => monotone_genus1(alpha),
        _ => number_via_form(Family::Monotone, g, alpha, form),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rat;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn monotone_examples() {
        assert_eq!(monotone_genus0(&p(&[1])).unwrap(), int(1));
        assert_eq!(monotone_genus0(&p(&[3])).unwrap(), int(4));
        assert_eq!(monotone_genus0(&p(&[2, 2])).unwrap(), int(54));
        assert_eq!(monotone_genus1(&p(&[1])).unwrap(), int(0));
        assert_eq!(monotone_genus1(&p(&[2])).unwrap(), int(1));
        assert_eq!(monotone_genus1(&p(&[1, 1])).unwrap(), int(1));
        assert!(monotone_genus0(&Partition::empty()).is_err());
    }

    #[test]
    fn classical_examples() {
        assert_eq!(classical_genus0(&p(&[3])).unwrap(), int(6));
        assert_eq!(classical_genus0(&p(&[2, 2])).unwrap(), int(288));
        assert_eq!(classical_genus1(&p(&[3])).unwrap(), int(54));
    }

    #[test]
    fn single_cycle_examples() {
        assert_eq!(mn_single_cycle(1, 2).unwrap(), int(1));
        assert_eq!(mn_single_cycle(2, 2).unwrap(), int(1));
        for g in 1..4 {
            assert_eq!(mn_single_cycle(g, 1).unwrap(), int(0));
        }
        for d in 1..7 {
            assert_eq!(mn_single_cycle(1, d).unwrap(), monotone_genus1(&Partition::single(d)).unwrap());
        }
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli_constant(2).unwrap(), rat(1, 240));
        assert_eq!(bernoulli_constant(3).unwrap(), rat(-1, 1008));
        assert_eq!(bernoulli_constant(4).unwrap(), rat(1, 1440));
        assert!(bernoulli_constant(1).is_err());
    }

    #[test]
    fn tables_load() {
        let t = PaperTables::embedded().unwrap();
        let m2 = t.get(Family::Monotone, 2).unwrap();
        assert_eq!(m2.coeff(&p(&[1, 1, 1])), rat(28, 720));
        assert_eq!(m2.form().unwrap().constant, rat(-3, 720));
        let m3 = t.get(Family::Monotone, 3).unwrap();
        assert_eq!(m3.raw.len(), 30);
        assert_eq!(m3.form().unwrap().constant, rat(90 * 4, 362880));
        let c3 = t.get(Family::Classical, 3).unwrap();
        assert_eq!(c3.coeff(&p(&[6])), rat(70, 16 * 362880));
        assert_eq!(c3.printed_coeff(&p(&[4, 1])), rat(2418, 16 * 362880));
        assert_eq!(c3.coeff(&p(&[4, 1])), rat(-3876, 16 * 362880));
        assert!(t.get(Family::Classical, 4).is_err());
    }

    #[test]
    fn table_rejects_bad_constant() {
        let text = r#"{"tables":[{"family":"monotone","genus":2,"normalization":"1/720",
            "constant":"-2","terms":[{"alpha":[],"coeff":"3"}]}]}"#;
        assert!(matches!(PaperTables::from_json(text), Err(HurwitzError::Table(_))));
    }

    #[test]
    fn scaling_examples() {
        let t = PaperTables::embedded().unwrap();
        for g in [2, 3] {
            let m = t.get(Family::Monotone, g).unwrap().form().unwrap();
            assert!(scaling_check_with(g, &m, &t).unwrap());
        }
    }

    #[test]
    fn permutations_distinct() {
        assert_eq!(permutations(&[2, 1, 1]).len(), 3);
        assert_eq!(permutations(&[3, 2, 1]).len(), 6);
    }

    #[test]
    fn polynomiality_low_genus() {
        let samples = Partition::all_bounded(3, 5);
        let fit = polynomiality_extract(0, 3, &samples, &|a| monotone_genus0(a)).unwrap();
        assert_eq!(fit.poly, PolynomialQ::constant(3, int(1)));
        let samples = Partition::all_bounded(1, 8);
        let fit = polynomiality_extract(1, 1, &samples, &|a| monotone_genus1(a)).unwrap();
        let mut expect = PolynomialQ::constant(1, rat(-1, 12));
        expect.add_term(vec![1], rat(1, 12));
        assert_eq!(fit.poly, expect);
        assert!(polynomiality_extract(0, 2, &samples, &|a| monotone_genus0(a)).is_err());
    }
}
