//! Runs the `binrec` binary: exit codes, CSV/JSON round trips, caps from the
//! environment.

use std::process::{Command, Output};

use binrec::exact::{int, parse_rational, BigRational};
use binrec::recursion::a_sequence;
use serde_json::Value;

fn binrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binrec"))
        .args(args)
        .env_remove("BINREC_CAP")
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn compute_csv_round_trips() {
    for (x, n) in [("1", 7), ("-1", 6), ("-1/2", 30), ("3/7", 12)] {
        let out = binrec(&[
            "compute",
            "--x",
            x,
            "--n",
            &n.to_string(),
            "--output",
            "csv",
        ]);
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        assert!(!text.contains('\r'));
        let (header, rows) = csv_rows(&text);
        assert_eq!(header, ["n", "a_n_num", "a_n_den"]);
        let expect = a_sequence(&parse_rational(x).unwrap(), n).unwrap();
        let parsed: Vec<BigRational> = rows
            .iter()
            .map(|r| parse_rational(&format!("{}/{}", r[1], r[2])).unwrap())
            .collect();
        assert_eq!(parsed, expect, "x = {x}");
    }
}

#[test]
fn compute_examples() {
    let (_, rows) = csv_rows(&stdout(&binrec(&[
        "compute", "--x", "1", "--n", "7", "--output", "csv",
    ])));
    assert_eq!(rows.last().unwrap()[1], "1652");
    let (_, rows) = csv_rows(&stdout(&binrec(&[
        "compute", "--x", "-1", "--n", "6", "--output", "csv",
    ])));
    let column: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(column, ["-1", "1", "-2", "5", "-14", "42"]);
    let (header, rows) = csv_rows(&stdout(&binrec(&[
        "compute", "--n", "4", "--float", "--output", "csv",
    ])));
    assert_eq!(header, ["n", "a_n"]);
    assert_eq!(rows[3][1].parse::<f64>().unwrap(), 7.0);
}

#[test]
fn exit_codes() {
    assert_eq!(binrec(&["compute", "--x", "0"]).status.code(), Some(2));
    assert_eq!(binrec(&["compute", "--x", "1/0"]).status.code(), Some(2));
    assert_eq!(binrec(&["compute", "--n", "0"]).status.code(), Some(2));
    assert_eq!(binrec(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(binrec(&["spectral", "--x", "1/2"]).status.code(), Some(2));
    assert_eq!(
        binrec(&["verify", "--only", "formats,catalan,nzc"])
            .status
            .code(),
        Some(0)
    );
    // single events fail at sporadic n, so the shape group reports a violation
    assert_eq!(
        binrec(&["verify", "--only", "shapes", "--x", "-1/2", "--n", "40"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn verify_json_matches_csv() {
    let args = [
        "verify",
        "--only",
        "formats,paths,shapes,operator-gap",
        "--n",
        "10",
    ];
    let json_out = binrec(&[&args[..], &["--output", "json"]].concat());
    let csv_out = binrec(&[&args[..], &["--output", "csv"]].concat());
    assert_eq!(json_out.status.code(), csv_out.status.code());

    let report: Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    assert_eq!(report["command"], "verify");
    assert!(report["params"].is_object());
    let from_json: Vec<(String, String)> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            assert!(c["detail"].is_string());
            (
                c["name"].as_str().unwrap().to_string(),
                c["status"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    let (header, rows) = csv_rows(&stdout(&csv_out));
    assert_eq!(header, ["name", "status", "detail"]);
    let from_csv: Vec<(String, String)> = rows
        .into_iter()
        .map(|r| (r[0].clone(), r[1].clone()))
        .collect();
    assert_eq!(from_json, from_csv);
    let any_fail = from_json.iter().any(|(_, s)| s == "fail");
    assert_eq!(json_out.status.code(), Some(if any_fail { 1 } else { 0 }));
}

#[test]
fn seeded_runs_are_deterministic() {
    let run = |seed: &str| {
        stdout(&binrec(&[
            "verify", "--only", "dynamics", "--n", "30", "--seed", seed, "--output", "json",
        ]))
    };
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7"), run("8"));
}

#[test]
fn cap_from_environment() {
    let run = |cap: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_binrec"));
        cmd.args(["enumerate", "--n", "7"])
            .args(extra)
            .env_remove("BINREC_CAP");
        if let Some(c) = cap {
            cmd.env("BINREC_CAP", c);
        }
        cmd.output().unwrap().status.code()
    };
    assert_eq!(run(None, &[]), Some(0));
    assert_eq!(run(Some("6"), &[]), Some(2));
    assert_eq!(run(Some("6"), &["--cap", "8"]), Some(0));
    assert_eq!(run(Some("junk"), &[]), Some(0));
}

#[test]
fn plotdata_streams() {
    let (header, rows) = csv_rows(&stdout(&binrec(&["plotdata", "--x", "-1/2", "--n", "16"])));
    assert_eq!(header, ["u", "s"]);
    assert_eq!(rows.len(), 15);
    let values: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    let changes = values.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    assert_eq!(changes, 1);
    let (_, rows) = csv_rows(&stdout(&binrec(&["plotdata", "--x", "-1/2", "--n", "3"])));
    assert_eq!(rows.len(), 2);

    let out = binrec(&["plotdata", "--x", "-1/2", "--growth", "150:300"]);
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["n", "theta", "tan_theta", "log_r", "slope"]);
    assert_eq!(rows.len(), 151);
    let slope: f64 = rows.last().unwrap()[4].parse().unwrap();
    assert!((slope - (1.0 / std::f64::consts::PI).ln()).abs() < 0.02);
}

#[test]
fn table_output_lists_every_index() {
    let text = stdout(&binrec(&["compute", "--x", "-1", "--n", "10"]));
    let a = a_sequence(&int(-1), 10).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split_whitespace().collect())
        .filter(|r: &Vec<&str>| r.len() == 3)
        .collect();
    assert_eq!(rows[0], ["n", "a_n_num", "a_n_den"]);
    for (row, expect) in rows[1..].iter().zip(&a) {
        assert_eq!(
            parse_rational(&format!("{}/{}", row[1], row[2])).unwrap(),
            *expect
        );
    }
    assert_eq!(rows.len(), 11);
}
