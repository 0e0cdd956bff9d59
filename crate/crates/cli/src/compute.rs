use clap::ValueEnum;
use num_bigint::BigInt;

use hurwitz_core::closed_forms::{
    classical_genus0, classical_genus1, mn_single_cycle, monotone_genus0, monotone_genus1,
    number_via_form, PaperTables,
};
use hurwitz_core::joincut::{solve_classical, solve_monotone, TruncatedH};
use hurwitz_core::oracle::{CountTable, Family};
use hurwitz_core::qseries::RationalForm;
use hurwitz_core::{HurwitzError, Partition, Rat};

pub const MAX_JOINCUT_DEGREE: u32 = 10;
pub const MAX_PIPELINE_GENUS: u32 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Oracle,
    Joincut,
    ClosedForm,
    Pipeline,
    Lagrange,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Joincut => "joincut",
            Method::ClosedForm => "closed-form",
            Method::Pipeline => "pipeline",
            Method::Lagrange => "lagrange",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn range(message: String) -> Self {
        CliError { code: 2, message }
    }

    pub fn usage(message: String) -> Self {
        CliError { code: 2, message }
    }

    pub fn failed(message: String) -> Self {
        CliError { code: 1, message }
    }
}

impl From<HurwitzError> for CliError {
    fn from(e: HurwitzError) -> Self {
        let code = match e {
            HurwitzError::OutOfRange(_)
            | HurwitzError::ResourceBound { .. }
            | HurwitzError::InvalidPartition(_)
            | HurwitzError::TruncationInsufficient { .. } => 2,
            _ => 1,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn family(classical: bool) -> Family {
    if classical {
        Family::Classical
    } else {
        Family::Monotone
    }
}

fn transpositions(genus: u32, alpha: &Partition) -> u32 {
    2 * genus + alpha.len() as u32 + alpha.size() - 2
}

pub fn check_pipeline_genus(genus: u32) -> Result<(), CliError> {
    if genus > MAX_PIPELINE_GENUS {
        return Err(CliError::range(format!(
            "pipeline genus {genus} exceeds the supported maximum {MAX_PIPELINE_GENUS}"
        )));
    }
    Ok(())
}

/// A method prepared for one family and genus.
struct Evaluator {
    method: Method,
    family: Family,
    genus: u32,
    form: Option<RationalForm>,
    joincut: Option<TruncatedH>,
}

impl Evaluator {
    fn new(method: Method, classical: bool, genus: u32, max_degree: u32) -> Result<Self, CliError> {
        let family = family(classical);
        let mut ev = Evaluator {
            method,
            family,
            genus,
            form: None,
            joincut: None,
        };
        match method {
            Method::Oracle | Method::ClosedForm => {}
            Method::Joincut => {
                if max_degree > MAX_JOINCUT_DEGREE {
                    return Err(CliError::range(format!(
                        "join-cut degree {max_degree} exceeds the supported maximum {MAX_JOINCUT_DEGREE}"
                    )));
                }
                let r = 2 * genus + 2 * max_degree - 2;
                ev.joincut = Some(match family {
                    Family::Monotone => solve_monotone(max_degree, r)?,
                    Family::Classical => solve_classical(max_degree, r)?,
                });
            }
            Method::Pipeline => {
                if classical {
                    return Err(CliError::range(
                        "the pipeline produces monotone forms only; use --method lagrange for classical tables".into(),
                    ));
                }
                match genus {
                    0 => {
                        return Err(CliError::range(
                            "the pipeline starts at genus 1".into(),
                        ))
                    }
                    1 => {}
                    g => {
                        check_pipeline_genus(g)?;
                        ev.form = Some(hurwitz_core::pipeline::rational_form(g)?);
                    }
                }
            }
            Method::Lagrange => match genus {
                0 => {
                    return Err(CliError::range(
                        "Lagrange extraction covers genus 1 to 3".into(),
                    ))
                }
                1 => {}
                2 | 3 => {
                    let tables = PaperTables::load()?;
                    ev.form = Some(tables.get(family, genus)?.form()?);
                }
                g => {
                    return Err(CliError::range(format!(
                        "Lagrange extraction covers genus 1 to 3, got {g}"
                    )))
                }
            },
        }
        Ok(ev)
    }

    fn eval(&self, alpha: &Partition) -> Result<Rat, CliError> {
        if alpha.is_empty() {
            return Err(CliError::range("the partition must be nonempty".into()));
        }
        let g = self.genus;
        match self.method {
            Method::Oracle => {
                let r = transpositions(g, alpha);
                let t = CountTable::build(alpha.size(), r, self.family)?;
                Ok(Rat::from_integer(BigInt::from(t.get(alpha, r))))
            }
            Method::Joincut => {
                let t = self.joincut.as_ref().expect("prepared");
                t.genus(alpha, g).ok_or_else(|| {
                    CliError::range(format!(
                        "partition size {} exceeds the prepared join-cut degree {}",
                        alpha.size(),
                        t.max_degree
                    ))
                })
            }
            Method::ClosedForm => match (self.family, g) {
                (Family::Monotone, 0) => Ok(monotone_genus0(alpha)?),
                (Family::Monotone, 1) => Ok(monotone_genus1(alpha)?),
                (Family::Classical, 0) => Ok(classical_genus0(alpha)?),
                (Family::Classical, 1) => Ok(classical_genus1(alpha)?),
                (Family::Monotone, _) if alpha.len() == 1 => Ok(mn_single_cycle(g, alpha.size())?),
                _ => Err(CliError::range(format!(
                    "closed formulas cover genus 0 and 1, and single-cycle monotone partitions; got genus {g}, {alpha}"
                ))),
            },
            Method::Pipeline | Method::Lagrange => {
                Ok(number_via_form(self.family, g, alpha, self.form.as_ref())?)
            }
        }
    }
}

pub fn number(method: Method, classical: bool, genus: u32, alpha: &Partition) -> Result<Rat, CliError> {
    Evaluator::new(method, classical, genus, alpha.size())?.eval(alpha)
}

pub fn table(
    method: Method,
    classical: bool,
    genus: u32,
    max_degree: u32,
) -> Result<Vec<(Partition, Rat)>, CliError> {
    if max_degree == 0 {
        return Err(CliError::range("--max-degree must be at least 1".into()));
    }
    let ev = Evaluator::new(method, classical, genus, max_degree)?;
    let mut rows = Vec::new();
    for d in 1..=max_degree {
        for alpha in Partition::all_of(d) {
            let v = ev.eval(&alpha)?;
            rows.push((alpha, v));
        }
    }
    Ok(rows)
}
