use std::process::{Command, Output};

use serde_json::Value;

use hurwitz_core::numerics::{parse_rat, rat};
use hurwitz_core::Partition;

fn hurwitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(args)
        .env_remove("HURWITZ_TABLES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn single_value(args: &[&str]) -> String {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = hurwitz(&full);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    json(&o)["values"][0]["value"].as_str().unwrap().to_string()
}

#[test]
fn compute_examples() {
    assert_eq!(single_value(&["compute", "--genus", "1", "--partition", "2"]), "1/1");
    assert_eq!(single_value(&["compute", "--genus", "0", "--partition", "3"]), "4/1");
    assert_eq!(single_value(&["compute", "--genus", "2", "--partition", "1"]), "0/1");
    let o = hurwitz(&["compute", "--genus", "1", "--partition", "2"]);
    assert_eq!(stdout(&o).trim(), "H->_1(2) = 1");
}

#[test]
fn methods_agree() {
    for (g, part) in [(1, "2,1"), (2, "2,2"), (3, "3,1"), (2, "4")] {
        let base = ["compute", "--genus", &g.to_string(), "--partition", part];
        let mut seen = Vec::new();
        for method in ["oracle", "joincut", "pipeline", "lagrange"] {
            let mut args = base.to_vec();
            args.extend(["--method", method]);
            seen.push(single_value(&args));
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]), "g={g} {part}: {seen:?}");
    }
    let mut seen = Vec::new();
    for method in ["oracle", "joincut", "closed-form", "lagrange"] {
        seen.push(single_value(&[
            "compute", "--genus", "1", "--partition", "3,1", "--classical", "--method", method,
        ]));
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]), "{seen:?}");
}

#[test]
fn unsupported_ranges_exit_two() {
    for args in [
        vec!["compute", "--genus", "0", "--partition", "9", "--method", "oracle"],
        vec!["compute", "--genus", "2", "--partition", "2,1", "--method", "closed-form"],
        vec!["compute", "--genus", "2", "--partition", "2", "--method", "pipeline", "--classical"],
        vec!["compute", "--genus", "4", "--partition", "2", "--method", "lagrange"],
        vec!["compute", "--genus", "1", "--partition", "2,2", "--max-degree", "3"],
        vec!["compute", "--genus", "1", "--partition", "0"],
        vec!["rational-form", "--genus", "0"],
        vec!["rational-form", "--genus", "9"],
    ] {
        let o = hurwitz(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = hurwitz(&["compute", "--genus", "0", "--partition", "9", "--method", "oracle"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit 8"));
}

#[test]
fn rational_form_genus_one() {
    let o = hurwitz(&["rational-form", "--genus", "1"]);
    assert!(o.status.success());
    assert_eq!(
        json(&o),
        serde_json::json!({ "log_eta": "1/24", "log_gamma": "-1/8" })
    );
}

fn form_terms(v: &Value) -> Vec<(Partition, hurwitz_core::Rat)> {
    v["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let parts: Vec<u32> = t["alpha"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap() as u32)
                .collect();
            (
                Partition::new(parts).unwrap(),
                parse_rat(t["coeff"].as_str().unwrap()).unwrap(),
            )
        })
        .collect()
}

#[test]
fn rational_form_genus_two() {
    let o = hurwitz(&["rational-form", "--genus", "2"]);
    let v = json(&o);
    assert_eq!(v["genus"], 2);
    assert_eq!(parse_rat(v["constant"].as_str().unwrap()).unwrap(), rat(-3, 720));
    let mut got: Vec<(Vec<u32>, hurwitz_core::Rat)> = form_terms(&v)
        .into_iter()
        .map(|(a, c)| (a.parts().to_vec(), c * rat(720, 1)))
        .collect();
    got.sort();
    let mut want: Vec<(Vec<u32>, hurwitz_core::Rat)> = [
        (vec![], 3),
        (vec![1], -5),
        (vec![2], -6),
        (vec![3], 5),
        (vec![1, 1], -10),
        (vec![2, 1], 29),
        (vec![1, 1, 1], 28),
    ]
    .into_iter()
    .map(|(a, c)| (a, rat(c, 1)))
    .collect();
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn rational_form_genus_three() {
    let v = json(&hurwitz(&["rational-form", "--genus", "3"]));
    let terms = form_terms(&v);
    assert_eq!(terms.len(), 30);
    let scale = rat(362880, 4);
    let find = |parts: &[u32]| {
        let a = Partition::new(parts.to_vec()).unwrap();
        terms.iter().find(|(b, _)| *b == a).map(|(_, c)| c * &scale).unwrap()
    };
    assert_eq!(find(&[1, 1, 1, 1, 1, 1]), rat(68600, 1));
    assert_eq!(find(&[3, 1]), rat(-3914, 1));
    assert_eq!(find(&[]), rat(-90, 1));
    assert_eq!(parse_rat(v["constant"].as_str().unwrap()).unwrap() * &scale, rat(90, 1));
}

#[test]
fn verify_suites_pass() {
    for suite in ["bernoulli", "scaling", "oracle-vs-joincut"] {
        let o = hurwitz(&["verify", "--suite", suite, "--jobs", "2"]);
        assert!(o.status.success(), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains(", 0 failed"));
    }
}

#[test]
fn verify_report_is_sorted_and_deterministic() {
    let a = hurwitz(&["verify", "--suite", "closed-forms", "--jobs", "4", "--format", "json"]);
    let b = hurwitz(&["verify", "--suite", "closed-forms", "--jobs", "1", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let names: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert_eq!(v["failed"], 0);
}

#[test]
fn output_is_byte_identical() {
    let args = ["compute", "--genus", "2", "--max-degree", "5", "--format", "csv"];
    let a = hurwitz(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, hurwitz(&args).stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 1 + 18);
    assert!(text.lines().nth(1).unwrap().starts_with("joincut,monotone,2,\"1\","));
}

#[test]
fn json_values_round_trip() {
    let o = hurwitz(&["compute", "--genus", "1", "--max-degree", "4", "--format", "json", "--method", "closed-form"]);
    let v = json(&o);
    for item in v["values"].as_array().unwrap() {
        let s = item["value"].as_str().unwrap();
        let r = parse_rat(s).unwrap();
        assert_eq!(format!("{}/{}", r.numer(), r.denom()), s);
    }
}

#[test]
fn table_override() {
    let dir = std::env::temp_dir().join(format!("hurwitz-tables-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tables.json");
    let original = include_str!("../../core/data/tables.json");
    let tampered = original.replacen("\"coeff\": \"68600\"", "\"coeff\": \"68601\"", 2);
    std::fs::write(&path, tampered).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(["verify", "--suite", "scaling"])
        .env("HURWITZ_TABLES", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL scaling/g=3: (1,1,1,1,1,1)"));

    std::fs::write(&path, "{ not json").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz"))
        .args(["verify", "--suite", "scaling"])
        .env("HURWITZ_TABLES", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("table error"));
    std::fs::remove_dir_all(&dir).unwrap();
}
