mod checks;
mod compute;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hurwitz_core::numerics::rat_to_string;
use hurwitz_core::{Partition, Rat};

use crate::compute::{CliError, Method};

#[derive(Parser)]
#[command(name = "hurwitz", version, about = "Exact monotone and classical single Hurwitz numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Hurwitz numbers for one partition, or for every partition up to --max-degree.
    Compute {
        #[arg(long)]
        genus: u32,
        /// Comma-separated parts, e.g. 3,1,1.
        #[arg(long)]
        partition: Option<Partition>,
        /// Classical instead of monotone numbers.
        #[arg(long)]
        classical: bool,
        #[arg(long, value_enum, default_value_t = Method::Joincut)]
        method: Method,
        /// Largest degree to tabulate, and the degree cap for a single partition.
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Include wall time in the output record.
        #[arg(long)]
        timing: bool,
    },
    /// The monotone generating function of one genus in closed form.
    RationalForm {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Runs a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = checks::Suite::All)]
        suite: checks::Suite,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn rat_json(x: &Rat) -> Value {
    Value::String(rat_to_string(x))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn emit_compute(
    method: Method,
    classical: bool,
    genus: u32,
    rows: &[(Partition, Rat)],
    format: Format,
    elapsed: Option<std::time::Duration>,
) {
    let family = if classical { "classical" } else { "monotone" };
    match format {
        Format::Json => {
            let values: Vec<Value> = rows
                .iter()
                .map(|(a, v)| json!({ "partition": a.parts(), "value": rat_json(v) }))
                .collect();
            let mut rec = json!({
                "method": method.tag(),
                "family": family,
                "genus": genus,
                "values": values,
            });
            if let Some(t) = elapsed {
                rec["timing_ms"] = json!(t.as_millis() as u64);
            }
            print_json(&rec);
        }
        Format::Csv => {
            println!("method,family,genus,partition,value");
            for (a, v) in rows {
                let parts: Vec<String> = a.parts().iter().map(u32::to_string).collect();
                println!(
                    "{},{family},{genus},\"{}\",{}",
                    method.tag(),
                    parts.join(","),
                    rat_to_string(v)
                );
            }
        }
        Format::Text => {
            let name = if classical { "H" } else { "H->" };
            for (a, v) in rows {
                println!("{name}_{genus}{a} = {v}");
            }
            if let Some(t) = elapsed {
                println!("# {} in {t:.2?}", method.tag());
            }
        }
    }
}

fn run_compute(
    genus: u32,
    partition: Option<Partition>,
    classical: bool,
    method: Method,
    max_degree: Option<u32>,
    format: Format,
    timing: bool,
) -> Result<(), CliError> {
    let start = std::time::Instant::now();
    let rows = match partition {
        Some(alpha) => {
            if let Some(m) = max_degree {
                if alpha.size() > m {
                    return Err(CliError::range(format!(
                        "partition size {} exceeds --max-degree {m}",
                        alpha.size()
                    )));
                }
            }
            vec![(alpha.clone(), compute::number(method, classical, genus, &alpha)?)]
        }
        None => {
            let m = max_degree.ok_or_else(|| {
                CliError::usage("give --partition, or --max-degree to tabulate".into())
            })?;
            compute::table(method, classical, genus, m)?
        }
    };
    let elapsed = timing.then(|| start.elapsed());
    emit_compute(method, classical, genus, &rows, format, elapsed);
    Ok(())
}

fn run_rational_form(genus: u32, format: Format) -> Result<(), CliError> {
    match genus {
        0 => Err(CliError::range(
            "genus 0 has no rational form; use genus >= 1".into(),
        )),
        1 => {
            let f = hurwitz_core::pipeline::genus1_closed();
            match format {
                Format::Text => println!(
                    "H->_1 = ({}) log(1/(1-eta)) + ({}) log(1/(1-gamma))",
                    f.a, f.b
                ),
                _ => print_json(&json!({ "log_eta": rat_json(&f.a), "log_gamma": rat_json(&f.b) })),
            }
            Ok(())
        }
        g => {
            compute::check_pipeline_genus(g)?;
            let form = hurwitz_core::pipeline::rational_form(g).map_err(CliError::from)?;
            match format {
                Format::Json => {
                    let terms: Vec<Value> = form
                        .terms
                        .iter()
                        .map(|(a, c)| json!({ "alpha": a.parts(), "coeff": rat_json(c) }))
                        .collect();
                    print_json(&json!({
                        "genus": g,
                        "constant": rat_json(&form.constant),
                        "terms": terms,
                    }));
                }
                Format::Csv => {
                    println!("alpha,coeff");
                    println!("\"constant\",{}", rat_to_string(&form.constant));
                    for (a, c) in &form.terms {
                        let parts: Vec<String> = a.parts().iter().map(u32::to_string).collect();
                        println!("\"{}\",{}", parts.join(","), rat_to_string(c));
                    }
                }
                Format::Text => {
                    println!("H->_{g} = {}", form.constant);
                    for (a, c) in &form.terms {
                        let eta: Vec<String> = a.parts().iter().map(|k| format!("eta_{k}")).collect();
                        let num = if eta.is_empty() { "1".to_string() } else { eta.join(" ") };
                        let pow = a.len() as u32 + 2 * g - 2;
                        println!("  + ({c}) {num} / (1-eta)^{pow}");
                    }
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute {
            genus,
            partition,
            classical,
            method,
            max_degree,
            format,
            timing,
        } => run_compute(genus, partition, classical, method, max_degree, format, timing),
        Command::RationalForm { genus, format } => run_rational_form(genus, format),
        Command::Verify { suite, jobs, format } => checks::run(suite, jobs, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message.is_empty() {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.code)
        }
    }
}
