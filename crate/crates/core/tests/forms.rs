use std::collections::BTreeMap;

use hurwitz_core::closed_forms::{number_via_form, PaperTables};
use hurwitz_core::joincut::genus_slice;
use hurwitz_core::oracle::Family;
use hurwitz_core::qseries::RationalForm;
use hurwitz_core::{Partition, Rat};

fn check_slice(family: Family, g: u32, max_d: u32, form: Option<&RationalForm>) -> Vec<Partition> {
    let slice: BTreeMap<Partition, Rat> = genus_slice(g, max_d, family).unwrap();
    assert!(!slice.is_empty());
    slice
        .iter()
        .filter(|(alpha, v)| &number_via_form(family, g, alpha, form).unwrap() != *v)
        .map(|(a, _)| a.clone())
        .collect()
}

#[test]
fn monotone_log_form_genus_one() {
    assert!(check_slice(Family::Monotone, 1, 6, None).is_empty());
}

#[test]
fn monotone_tables_match_joincut() {
    let tables = PaperTables::load().unwrap();
    for (g, d) in [(2, 6), (3, 5)] {
        let form = tables.get(Family::Monotone, g).unwrap().form().unwrap();
        let bad = check_slice(Family::Monotone, g, d, Some(&form));
        assert!(bad.is_empty(), "genus {g}: {bad:?}");
    }
}

#[test]
fn classical_genus_one_series() {
    assert!(check_slice(Family::Classical, 1, 5, None).is_empty());
}

#[test]
fn classical_tables_match_joincut() {
    let tables = PaperTables::load().unwrap();
    for g in [2, 3] {
        let form = tables.get(Family::Classical, g).unwrap().form().unwrap();
        let bad = check_slice(Family::Classical, g, 5, Some(&form));
        assert!(bad.is_empty(), "genus {g}: {bad:?}");
    }
}

#[test]
fn printed_classical_genus_three_entry_is_off() {
    let tables = PaperTables::load().unwrap();
    let table = tables.get(Family::Classical, 3).unwrap();
    let fixed: Vec<_> = table.errata.keys().cloned().collect();
    assert_eq!(fixed, vec![Partition::new(vec![4, 1]).unwrap()]);

    let printed = table.printed_form().unwrap();
    let bad = check_slice(Family::Classical, 3, 5, Some(&printed));
    // the (4,1) term feeds every [p_beta] with beta of length at least 2
    assert!(bad.iter().all(|b| b.len() >= 2) && !bad.is_empty());
    assert!(bad.contains(&Partition::new(vec![1, 1]).unwrap()));
}
