use num_bigint::BigInt;

use hurwitz_core::closed_forms::{
    bernoulli_constant, classical_genus0, classical_genus1, mn_single_cycle, monotone_genus0,
    monotone_genus1, monotone_value, number_via_form, polynomiality_extract, scaling_check,
    PaperTables,
};
use hurwitz_core::numerics::int;
use hurwitz_core::oracle::{CountTable, Family};
use hurwitz_core::pipeline::run;
use hurwitz_core::{Partition, Rat};

fn oracle_genus(max_d: u32, family: Family, g: u32, f: fn(&Partition) -> hurwitz_core::Result<Rat>) {
    for d in 1..=max_d {
        let r_max = 2 * g + 2 * d - 2;
        let t = CountTable::build(d, r_max, family).unwrap();
        for alpha in Partition::all_of(d) {
            let r = 2 * g + alpha.len() as u32 + d - 2;
            let want = Rat::from_integer(BigInt::from(t.get(&alpha, r)));
            assert_eq!(f(&alpha).unwrap(), want, "{family:?} g={g} {alpha}");
        }
    }
}

#[test]
fn monotone_low_genus_vs_oracle() {
    oracle_genus(6, Family::Monotone, 0, monotone_genus0);
    oracle_genus(6, Family::Monotone, 1, monotone_genus1);
}

#[test]
fn classical_low_genus_vs_oracle() {
    oracle_genus(5, Family::Classical, 0, classical_genus0);
    oracle_genus(5, Family::Classical, 1, classical_genus1);
}

#[test]
fn single_cycle_vs_pipeline() {
    let results = run(3).unwrap();
    for res in &results {
        for d in 1..=6 {
            let via = number_via_form(Family::Monotone, res.genus, &Partition::single(d), res.form.as_ref());
            assert_eq!(mn_single_cycle(res.genus, d).unwrap(), via.unwrap(), "g={} d={d}", res.genus);
        }
    }
}

#[test]
fn bernoulli_vs_tables() {
    let tables = PaperTables::load().unwrap();
    for g in [2, 3] {
        let form = tables.get(Family::Monotone, g).unwrap().form().unwrap();
        assert_eq!(form.coeff(&Partition::empty()), bernoulli_constant(g).unwrap());
    }
}

#[test]
fn scaling_from_pipeline() {
    assert!(scaling_check(2).unwrap());
    assert!(scaling_check(3).unwrap());
    assert!(scaling_check(4).is_err());
}

#[test]
fn polynomiality_through_genus_two() {
    let f2 = run(2).unwrap()[1].form.clone();
    for g in 0..=2u32 {
        for ell in 1..=3usize {
            if g == 0 && ell < 3 {
                continue;
            }
            let samples = Partition::all_bounded(ell, 8);
            let fit = polynomiality_extract(g, ell, &samples, &|a| monotone_value(g, a, f2.as_ref()))
                .unwrap_or_else(|e| panic!("g={g} l={ell}: {e}"));
            assert!(fit.held_out >= 3 && fit.training > 0);
        }
    }
}

#[test]
fn polynomiality_genus_two_one_part() {
    let f2 = run(2).unwrap()[1].form.clone();
    let samples = Partition::all_bounded(1, 8);
    let fit = polynomiality_extract(2, 1, &samples, &|a| monotone_value(2, a, f2.as_ref())).unwrap();
    assert_eq!(fit.poly.eval(&[int(2)]), Rat::new(1.into(), 12.into()));
}

#[test]
fn polynomiality_needs_enough_samples() {
    let samples = Partition::all_bounded(2, 2);
    assert!(polynomiality_extract(2, 2, &samples, &|a| monotone_genus1(a)).is_err());
}
