//! Verification suites: named exact comparisons between independent methods.

use std::sync::OnceLock;

use clap::ValueEnum;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use hurwitz_core::closed_forms::{
    bernoulli_constant, classical_genus0, classical_genus1, mn_single_cycle, monotone_genus0,
    monotone_genus1, monotone_value, number_via_form, polynomiality_extract, scaling_check_with,
    PaperTables,
};
use hurwitz_core::joincut::{genus_slice, solve_classical, solve_monotone};
use hurwitz_core::oracle::{CountTable, Family};
use hurwitz_core::pipeline::series::{expand, literal_delta1, literal_t};
use hurwitz_core::pipeline::{
    apply_delta1, apply_t, decompose_basis, run as run_pipeline, CoeffPoly, GenusResult, RElement,
};
use hurwitz_core::{Partition, Rat};

use crate::compute::CliError;
use crate::Format;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    OracleVsJoincut,
    ClosedForms,
    Pipeline,
    Bernoulli,
    Scaling,
    Polynomiality,
    All,
}

type Outcome = Result<String, String>;

pub struct Check {
    pub name: String,
    run: Box<dyn Fn() -> Outcome + Send + Sync>,
}

fn check(name: impl Into<String>, f: impl Fn() -> Outcome + Send + Sync + 'static) -> Check {
    Check {
        name: name.into(),
        run: Box::new(f),
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn expect_eq(what: impl std::fmt::Display, got: &Rat, want: &Rat) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: expected {want}, got {got}"))
    }
}

fn count(c: &CountTable, alpha: &Partition, r: u32) -> Rat {
    Rat::from_integer(BigInt::from(c.get(alpha, r)))
}

const PIPELINE_GENUS: u32 = 6;

fn pipeline() -> Result<&'static [GenusResult], String> {
    static CELL: OnceLock<Result<Vec<GenusResult>, String>> = OnceLock::new();
    CELL.get_or_init(|| run_pipeline(PIPELINE_GENUS).map_err(err))
        .as_deref()
        .map_err(Clone::clone)
}

fn pipeline_form(g: u32) -> Result<&'static hurwitz_core::qseries::RationalForm, String> {
    pipeline()?[g as usize - 1]
        .form
        .as_ref()
        .ok_or_else(|| format!("no rational form at genus {g}"))
}

fn tables() -> Result<&'static PaperTables, String> {
    static CELL: OnceLock<Result<PaperTables, String>> = OnceLock::new();
    CELL.get_or_init(|| PaperTables::load().map_err(err))
        .as_ref()
        .map_err(Clone::clone)
}

fn oracle_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for d in 1..=5u32 {
        out.push(check(format!("oracle-vs-joincut/dfs-vs-dp/d={d}"), move || {
            let dfs = CountTable::build_dfs(d, 8).map_err(err)?;
            let dp = CountTable::build(d, 8, Family::Monotone).map_err(err)?;
            let mut n = 0;
            for alpha in Partition::all_of(d) {
                for r in 0..=8 {
                    expect_eq(
                        format!("{alpha} r={r}"),
                        &count(&dp, &alpha, r),
                        &count(&dfs, &alpha, r),
                    )?;
                    n += 1;
                }
            }
            Ok(format!("{n} entries, r <= 8"))
        }));
    }
    for (family, max_d, max_r) in [(Family::Monotone, 6u32, 10u32), (Family::Classical, 5, 8)] {
        let tag = if family == Family::Monotone { "monotone" } else { "classical" };
        for d in 1..=max_d {
            out.push(check(format!("oracle-vs-joincut/{tag}/d={d}"), move || {
                let table = match family {
                    Family::Monotone => solve_monotone(d, max_r),
                    Family::Classical => solve_classical(d, max_r),
                }
                .map_err(err)?;
                let c = CountTable::build(d, max_r, family).map_err(err)?;
                let mut n = 0;
                for alpha in Partition::all_of(d) {
                    for r in 0..=max_r {
                        expect_eq(format!("{alpha} r={r}"), &table.get(&alpha, r), &count(&c, &alpha, r))?;
                        n += 1;
                    }
                }
                Ok(format!("{n} entries, r <= {max_r}"))
            }));
        }
    }
    out
}

fn slice_check(
    family: Family,
    g: u32,
    max_d: u32,
    f: impl Fn(&Partition) -> hurwitz_core::Result<Rat>,
) -> Outcome {
    let slice = genus_slice(g, max_d, family).map_err(err)?;
    for (alpha, want) in &slice {
        expect_eq(alpha, &f(alpha).map_err(err)?, want)?;
    }
    Ok(format!("{} partitions, d <= {max_d}", slice.len()))
}

fn closed_form_checks() -> Vec<Check> {
    let mut out = vec![
        check("closed-forms/monotone-genus0", || {
            slice_check(Family::Monotone, 0, 8, monotone_genus0)
        }),
        check("closed-forms/monotone-genus1", || {
            slice_check(Family::Monotone, 1, 6, monotone_genus1)
        }),
        check("closed-forms/monotone-genus1-log-form", || {
            slice_check(Family::Monotone, 1, 6, |a| number_via_form(Family::Monotone, 1, a, None))
        }),
        check("closed-forms/classical-genus0", || {
            slice_check(Family::Classical, 0, 6, classical_genus0)
        }),
        check("closed-forms/classical-genus1", || {
            slice_check(Family::Classical, 1, 6, classical_genus1)
        }),
        check("closed-forms/classical-genus1-log-form", || {
            slice_check(Family::Classical, 1, 6, |a| number_via_form(Family::Classical, 1, a, None))
        }),
    ];
    for g in 1..=3u32 {
        out.push(check(format!("closed-forms/single-cycle/g={g}"), move || {
            let form = if g >= 2 { Some(pipeline_form(g)?) } else { None };
            for d in 1..=6 {
                let alpha = Partition::single(d);
                let mn = mn_single_cycle(g, d).map_err(err)?;
                let via = number_via_form(Family::Monotone, g, &alpha, form).map_err(err)?;
                expect_eq(format!("{alpha} pipeline"), &mn, &via)?;
                if d <= 5 {
                    let r = 2 * g - 1 + d;
                    let c = CountTable::build(d, r, Family::Monotone).map_err(err)?;
                    expect_eq(format!("{alpha} oracle"), &mn, &count(&c, &alpha, r))?;
                }
            }
            Ok("d <= 6, oracle on d <= 5".into())
        }));
    }
    for (family, tag) in [(Family::Monotone, "monotone"), (Family::Classical, "classical")] {
        for g in [2u32, 3] {
            out.push(check(format!("closed-forms/table/{tag}-g{g}"), move || {
                let form = tables()?.get(family, g).map_err(err)?.form().map_err(err)?;
                let max_d = if g == 2 { 6 } else { 5 };
                slice_check(family, g, max_d, |a| number_via_form(family, g, a, Some(&form)))
            }));
        }
    }
    out
}

fn random_element(rng: &mut ChaCha8Rng) -> RElement {
    let mut f = RElement::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let n = rng.gen_range(0..=3u32);
        let mut hats = Vec::new();
        let mut room = 4 - n;
        while room > 0 && rng.gen_bool(0.4) {
            let k = rng.gen_range(1..=room);
            hats.push(k);
            room -= k;
        }
        let c = Rat::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=5).into());
        let hats = Partition::new(hats).expect("positive parts");
        f.add_assign(&RElement::term(2 * n as i32, CoeffPoly::monomial(0, hats, c)));
    }
    f
}

fn pipeline_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for g in [2u32, 3] {
        out.push(check(format!("pipeline/table/g={g}"), move || {
            let want = tables()?.get(Family::Monotone, g).map_err(err)?.form().map_err(err)?;
            let got = pipeline_form(g)?;
            for alpha in want.terms.keys().chain(got.terms.keys()) {
                expect_eq(alpha, &got.coeff(alpha), &want.coeff(alpha))?;
            }
            expect_eq("constant", &got.constant, &want.constant)?;
            Ok(format!("{} coefficients", want.terms.len()))
        }));
    }
    for g in 2..=4u32 {
        out.push(check(format!("pipeline/joincut/g={g}"), move || {
            let form = pipeline_form(g)?;
            slice_check(Family::Monotone, g, 5, |a| {
                number_via_form(Family::Monotone, g, a, Some(form))
            })
        }));
    }
    for g in 1..=4u32 {
        out.push(check(format!("pipeline/structure/g={g}"), move || {
            let res = &pipeline()?[g as usize - 1];
            res.normalized.check_in_r(3 * g - 1).map_err(err)?;
            let b = decompose_basis(g, &res.normalized).map_err(err)?;
            if !b.f[0].is_zero() {
                return Err(format!("F_0 = {}", b.f[0]));
            }
            if g >= 2 && !b.cond2().is_zero() {
                return Err(format!("cond2 residue {}", b.cond2()));
            }
            if b.recompose() != res.normalized {
                return Err("recomposition differs".into());
            }
            Ok(format!("weighted degree <= {}", 3 * g - 1))
        }));
    }
    out.push(check("pipeline/operators", || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for i in 0..20 {
            let f = random_element(&mut rng);
            let s = expand(&f, 4);
            if expand(&apply_delta1(&f, 0), 4) != literal_delta1(&s) {
                return Err(format!("element {i} ({f}): lifting differs"));
            }
            if expand(&apply_t(&f).map_err(err)?, 4) != literal_t(&s) {
                return Err(format!("element {i} ({f}): T differs"));
            }
        }
        Ok("20 random elements, weight <= 4".into())
    }));
    out
}

fn bernoulli_checks() -> Vec<Check> {
    (2..=PIPELINE_GENUS)
        .map(|g| {
            check(format!("bernoulli/g={g}"), move || {
                let c0 = pipeline_form(g)?.coeff(&Partition::empty());
                let want = bernoulli_constant(g).map_err(err)?;
                expect_eq("constant", &c0, &want)?;
                Ok(format!("c_(0) = {c0}"))
            })
        })
        .collect()
}

fn scaling_checks() -> Vec<Check> {
    [2u32, 3]
        .into_iter()
        .map(|g| {
            check(format!("scaling/g={g}"), move || {
                let form = pipeline_form(g)?;
                if scaling_check_with(g, form, tables()?).map_err(err)? {
                    Ok(format!("all alpha |- {}", 3 * g - 3))
                } else {
                    let classical = tables()?.get(Family::Classical, g).map_err(err)?;
                    let factor = Rat::from_integer(BigInt::from(2).pow(3 * g - 3));
                    let bad = Partition::all_of(3 * g - 3)
                        .into_iter()
                        .find(|a| form.coeff(a) != &factor * classical.coeff(a))
                        .expect("some coefficient differs");
                    Err(format!(
                        "{bad}: expected {}, got {}",
                        &factor * classical.coeff(&bad),
                        form.coeff(&bad)
                    ))
                }
            })
        })
        .collect()
}

fn polynomiality_checks() -> Vec<Check> {
    [(0u32, 3usize), (0, 4), (1, 1), (1, 2), (2, 1), (2, 2)]
        .into_iter()
        .map(|(g, ell)| {
            check(format!("polynomiality/g={g},l={ell}"), move || {
                let form = if g >= 2 { Some(pipeline_form(g)?) } else { None };
                let samples = Partition::all_bounded(ell, 8);
                let fit = polynomiality_extract(g, ell, &samples, &|a| monotone_value(g, a, form))
                    .map_err(err)?;
                Ok(format!(
                    "degree {}, {} fitted, {} held out",
                    fit.degree, fit.training, fit.held_out
                ))
            })
        })
        .collect()
}

pub fn checks(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::OracleVsJoincut => oracle_checks(),
        Suite::ClosedForms => closed_form_checks(),
        Suite::Pipeline => pipeline_checks(),
        Suite::Bernoulli => bernoulli_checks(),
        Suite::Scaling => scaling_checks(),
        Suite::Polynomiality => polynomiality_checks(),
        Suite::All => [
            Suite::OracleVsJoincut,
            Suite::ClosedForms,
            Suite::Pipeline,
            Suite::Bernoulli,
            Suite::Scaling,
            Suite::Polynomiality,
        ]
        .into_iter()
        .flat_map(checks)
        .collect(),
    }
}

pub fn run(suite: Suite, jobs: usize, format: Format) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::failed(e.to_string()))?;
    let list = checks(suite);
    let mut results: Vec<(String, Outcome)> = pool.install(|| {
        list.par_iter()
            .map(|c| (c.name.clone(), (c.run)()))
            .collect()
    });
    results.sort_by(|a, b| a.0.cmp(&b.0));
    let failed = results.iter().filter(|(_, r)| r.is_err()).count();
    let passed = results.len() - failed;
    match format {
        Format::Json => {
            let items: Vec<_> = results
                .iter()
                .map(|(name, r)| match r {
                    Ok(d) => json!({ "check": name, "status": "pass", "detail": d }),
                    Err(d) => json!({ "check": name, "status": "fail", "detail": d }),
                })
                .collect();
            let rec = json!({ "checks": items, "passed": passed, "failed": failed });
            println!("{}", serde_json::to_string_pretty(&rec).expect("serializable"));
        }
        Format::Csv => {
            println!("check,status,detail");
            for (name, r) in &results {
                let (status, detail) = match r {
                    Ok(d) => ("pass", d),
                    Err(d) => ("fail", d),
                };
                println!("{name},{status},\"{}\"", detail.replace('"', "\"\""));
            }
        }
        Format::Text => {
            for (name, r) in &results {
                match r {
                    Ok(d) => println!("PASS {name}: {d}"),
                    Err(d) => println!("FAIL {name}: {d}"),
                }
            }
            println!("{passed} passed, {failed} failed");
        }
    }
    if failed > 0 {
        Err(CliError::failed(String::new()))
    } else {
        Ok(())
    }
}
