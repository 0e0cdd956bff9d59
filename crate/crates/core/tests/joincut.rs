use num_bigint::BigInt;
use num_traits::Zero;

use hurwitz_core::closed_forms::{classical_genus0, monotone_genus0};
use hurwitz_core::joincut::{genus_slice, pde_residual, solve_classical, solve_monotone};
use hurwitz_core::oracle::{CountTable, Family};
use hurwitz_core::{Partition, Rat};

fn against_oracle(family: Family, max_d: u32, max_r: u32) {
    let table = match family {
        Family::Monotone => solve_monotone(max_d, max_r),
        Family::Classical => solve_classical(max_d, max_r),
    }
    .unwrap();
    for d in 1..=max_d {
        let counts = CountTable::build(d, max_r, family).unwrap();
        for alpha in Partition::all_of(d) {
            for r in 0..=max_r {
                let want = Rat::from_integer(BigInt::from(counts.get(&alpha, r)));
                assert_eq!(table.get(&alpha, r), want, "{family:?} {alpha} r={r}");
            }
        }
    }
}

#[test]
fn monotone_matches_oracle() {
    against_oracle(Family::Monotone, 6, 10);
}

#[test]
fn classical_matches_oracle() {
    against_oracle(Family::Classical, 5, 8);
}

#[test]
fn vanishing_pattern() {
    for table in [solve_monotone(6, 12).unwrap(), solve_classical(6, 12).unwrap()] {
        for ((alpha, r), v) in table.entries() {
            let base = alpha.size() - alpha.len() as u32;
            assert!(*r >= base && (r - base) % 2 == 0, "{alpha} r={r}: {v}");
        }
    }
}

#[test]
fn genus_zero_stratum() {
    let m = genus_slice(0, 7, Family::Monotone).unwrap();
    let c = genus_slice(0, 7, Family::Classical).unwrap();
    for d in 1..=7 {
        for alpha in Partition::all_of(d) {
            assert_eq!(m[&alpha], monotone_genus0(&alpha).unwrap(), "{alpha}");
            assert_eq!(c[&alpha], classical_genus0(&alpha).unwrap(), "{alpha}");
        }
    }
}

#[test]
fn residual_vanishes_both_families() {
    for table in [solve_monotone(5, 9).unwrap(), solve_classical(5, 9).unwrap()] {
        let res = pde_residual(&table);
        assert!(res.is_empty(), "{:?}", &res[..res.len().min(3)]);
    }
    assert!(solve_monotone(3, 4).unwrap().get(&Partition::single(2), 1) > Rat::zero());
}
