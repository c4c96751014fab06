use std::process::{Command, Output};

use apnspectra_cli::report::{Payload, ReportDocument};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_apnspectra"));
    cmd.args(args).env_remove(apnspectra_cli::MAX_M_ENV);
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}

const TANIGUCHI: [&str; 11] = [
    "spectrum",
    "--family",
    "taniguchi",
    "--m",
    "3",
    "--k",
    "1",
    "--alpha",
    "0x2",
    "--beta",
    "0x3",
];

#[test]
fn spectrum_reports_the_header_and_levels() {
    let o = run(&TANIGUCHI);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["fields"][0]["m"], 3);
    assert_eq!(v["fields"][0]["reduction_polynomial"], "0xb");
    assert_eq!(v["command"]["args"][0], "spectrum");
    let report = &v["payload"]["data"]["report"];
    assert!(report["classical"].is_boolean());
    let total: u64 = report["counts"]
        .as_object()
        .unwrap()
        .values()
        .map(|n| n.as_u64().unwrap())
        .sum();
    assert_eq!(total, 63);
    assert_eq!(v["payload"]["data"]["params"]["alpha"], "0x2");
}

#[test]
fn json_is_byte_identical_apart_from_timing() {
    let (a, b) = (run(&TANIGUCHI), run(&TANIGUCHI));
    assert_eq!(without_timing(json(&a)), without_timing(json(&b)));
    let strip = |o: &Output| {
        String::from_utf8(o.stdout.clone())
            .unwrap()
            .lines()
            .filter(|l| !l.contains("elapsed_us"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn document_round_trips() {
    for args in [
        TANIGUCHI.to_vec(),
        vec![
            "apn",
            "--family",
            "zhou-pott",
            "--m",
            "4",
            "--k",
            "1",
            "--j",
            "2",
            "--alpha",
            "0x2",
        ],
        vec!["verify", "--claim", "s-full", "--m-min", "2", "--m-max", "4"],
    ] {
        let o = run(&args);
        let doc: ReportDocument = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(doc.to_json().as_bytes(), o.stdout.as_slice());
    }
}

#[test]
fn csv_carries_the_json_numbers() {
    let j = json(&run(&TANIGUCHI));
    let mut args = TANIGUCHI.to_vec();
    args.extend(["--format", "csv"]);
    let o = run(&args);
    assert_eq!(code(&o), 0);
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let report = &j["payload"]["data"]["report"];
    let counts = report["counts"].as_object().unwrap();
    assert_eq!(rows.len(), counts.len());
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    for row in &rows {
        assert_eq!(counts[&row[col("level")]].to_string(), row[col("components")]);
        for key in [
            "bent_count",
            "semibent_count",
            "nonlinearity",
            "max_abs_walsh",
            "parseval_violations",
            "classical",
        ] {
            assert_eq!(report[key].to_string(), row[col(key)], "{key}");
        }
        let values: Vec<String> = report["walsh_values"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.to_string())
            .collect();
        assert_eq!(values.join(" "), row[col("walsh_values")]);
        assert_eq!(row[col("reduction_polynomial")], *"0xb");
    }
}

#[test]
fn verify_csv_matches_json_totals() {
    let args = ["verify", "--claim", "cube-curve", "--m-min", "2", "--m-max", "4"];
    let j = json(&run(&args));
    let mut with_csv = args.to_vec();
    with_csv.extend(["--format", "csv"]);
    let o = run(&with_csv);
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let finding = &j["payload"]["data"]["findings"][0];
    let head = rows.iter().find(|r| &r[0] == "finding").unwrap();
    for key in [
        "instances",
        "components",
        "refutation_count",
        "triangle_disagreements",
        "boundary_count",
        "seed",
    ] {
        assert_eq!(finding[key].to_string(), head[col(key)], "{key}");
    }
    let boundary = rows.iter().filter(|r| &r[0] == "boundary").count();
    assert_eq!(boundary, finding["boundary_cases"].as_array().unwrap().len());
    let notes = rows.iter().filter(|r| &r[0] == "note").count();
    assert_eq!(notes, finding["notes"].as_array().unwrap().len());
}

#[test]
fn missing_or_foreign_flags_are_usage_errors() {
    let o = run(&[
        "spectrum",
        "--family",
        "taniguchi",
        "--m",
        "3",
        "--k",
        "1",
        "--alpha",
        "0x2",
    ]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--beta"));
    assert!(o.stdout.is_empty());
    let mut extra = TANIGUCHI.to_vec();
    extra.extend(["--j", "1"]);
    assert_eq!(code(&run(&extra)), 2);
    assert_eq!(
        code(&run(&[
            "spectrum",
            "--family",
            "taniguchi",
            "--m",
            "3",
            "--k",
            "1",
            "--alpha",
            "0x9",
            "--beta",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "spectrum",
            "--family",
            "taniguchi",
            "--m",
            "4",
            "--k",
            "2",
            "--alpha",
            "1",
            "--beta",
            "1"
        ])),
        2
    );
    assert_eq!(code(&run(&["spectrum"])), 2);
}

#[test]
fn apn_methods() {
    let o = run(&[
        "apn",
        "--family",
        "zhou-pott",
        "--m",
        "4",
        "--k",
        "1",
        "--j",
        "2",
        "--alpha",
        "0x2",
        "--method",
        "both",
    ]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["payload"]["data"]["verdict"], true);
    assert_eq!(v["payload"]["data"]["criterion"], true);
    assert_eq!(v["payload"]["data"]["brute"]["uniformity"], 2);

    let o = run(&[
        "apn",
        "--family",
        "taniguchi",
        "--m",
        "3",
        "--k",
        "1",
        "--alpha",
        "0x2",
        "--beta",
        "0x0",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["payload"]["data"]["verdict"], false);

    let o = run(&[
        "apn",
        "--family",
        "butterfly",
        "--m",
        "3",
        "--alpha",
        "0x2",
        "--beta",
        "0x3",
        "--method",
        "criterion",
    ]);
    assert_eq!(code(&o), 2);
    let o = run(&[
        "apn",
        "--family",
        "butterfly",
        "--m",
        "3",
        "--alpha",
        "0x2",
        "--beta",
        "0x3",
        "--method",
        "brute",
    ]);
    assert_eq!(code(&o), 0);
    let doc: ReportDocument = serde_json::from_slice(&o.stdout).unwrap();
    let Payload::Apn(apn) = doc.payload else {
        panic!("apn payload expected")
    };
    assert!(apn.criterion.is_none());
    assert!(apn.brute.is_some());
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--claim", "s-full", "--m-min", "2", "--m-max", "2"]);
    assert_eq!(code(&o), 0);
    let f = &json(&o)["payload"]["data"]["findings"][0];
    assert_eq!(f["status"], "out-of-hypothesis");
    assert!(f["boundary_count"].as_u64().unwrap() > 0);

    let o = run(&["verify", "--claim", "kernel-wht", "--m-min", "3", "--m-max", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["payload"]["data"]["findings"][0]["status"], "confirmed");

    // non-APN Taniguchi instances with three roots of G(X,1) have 4-plateaued components
    let o = run(&[
        "verify",
        "--claim",
        "taniguchi-spectrum",
        "--m-min",
        "2",
        "--m-max",
        "3",
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["payload"]["data"]["findings"][0]["status"], "refuted");

    assert_eq!(
        code(&run(&[
            "verify",
            "--claim",
            "taniguchi",
            "--m-min",
            "2",
            "--m-max",
            "2"
        ])),
        2
    );
    assert_eq!(
        code(&run(&["verify", "--claim", "s-full", "--m-min", "3", "--m-max", "2"])),
        2
    );
}

#[test]
fn verify_seed_is_recorded() {
    let o = run(&[
        "verify",
        "--claim",
        "carlet11",
        "--m-min",
        "3",
        "--m-max",
        "3",
        "--seed",
        "11",
        "--samples",
        "5",
    ]);
    let v = json(&o);
    assert_eq!(v["payload"]["data"]["config"]["seed"], 11);
    assert_eq!(v["payload"]["data"]["findings"][0]["seed"], 11);
    assert_eq!(v["fields"][0]["reduction_polynomial"], "0xb");
}

#[test]
fn resource_limits() {
    let args = [
        "spectrum",
        "--family",
        "taniguchi",
        "--m",
        "4",
        "--k",
        "1",
        "--alpha",
        "0x2",
        "--beta",
        "0x3",
    ];
    assert_eq!(code(&run_env(&args, &[("APNSPECTRA_MAX_M", "3")])), 3);
    assert_eq!(code(&run_env(&args, &[("APNSPECTRA_MAX_M", "4")])), 0);
    assert_eq!(code(&run_env(&args, &[("APNSPECTRA_MAX_M", "four")])), 2);
    let big = [
        "spectrum",
        "--family",
        "taniguchi",
        "--m",
        "17",
        "--k",
        "1",
        "--alpha",
        "0x2",
        "--beta",
        "0x3",
    ];
    assert_eq!(code(&run(&big)), 3);
    let v = ["verify", "--claim", "kernel-wht", "--m-min", "2", "--m-max", "4"];
    assert_eq!(code(&run_env(&v, &[("APNSPECTRA_MAX_M", "3")])), 3);
}

#[test]
fn out_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let mut args = TANIGUCHI.to_vec();
    let p = path.to_str().unwrap();
    args.extend(["--out", p]);
    let o = run(&args);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let doc: ReportDocument = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc.fields[0].m(), 3);
}

#[test]
fn in_process_run_matches_exit_codes() {
    assert_eq!(
        apnspectra_cli::run(["verify", "--claim", "nope", "--m-min", "2", "--m-max", "2"]),
        2
    );
    assert_eq!(apnspectra_cli::run(["--version"]), 0);
}
