use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn shiftpow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftpow"))
        .args(args)
        .env_remove("SHIFTPOW_WORKERS")
        .output()
        .expect("failed to run shiftpow")
}

fn records(output: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&output.stdout)
        .lines()
        .map(|line| serde_json::from_str(line).expect("JSON line"))
        .collect()
}

fn of_type<'a>(records: &'a [Value], kind: &str) -> Vec<&'a Value> {
    records.iter().filter(|r| r["type"] == kind).collect()
}

fn temp_set(name: &str, values: &[u64]) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("shiftpow-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    let text: String = values.iter().map(|v| format!("{v}\n")).collect();
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn neighbors_example_is_exact() {
    let out = shiftpow(&[
        "neighbors",
        "--a",
        "1",
        "--k",
        "3",
        "--shift",
        "1",
        "--X",
        "100",
        "--no-timing",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let expected = concat!(
        "{\"type\":\"edge\",\"a\":1,\"b\":7,\"root\":\"2\"}\n",
        "{\"type\":\"edge\",\"a\":1,\"b\":26,\"root\":\"3\"}\n",
        "{\"type\":\"edge\",\"a\":1,\"b\":63,\"root\":\"4\"}\n",
        "{\"type\":\"summary\",\"command\":\"neighbors\",\"inputs\":{\"k\":3,\"shift\":1,\"a_min\":1,\"a_max\":1,\"X\":100},",
        "\"counts\":{\"rows\":1,\"edges\":3},\"records\":3,\"elapsed\":null,\"violations\":0}\n",
    );
    assert_eq!(String::from_utf8(out.stdout).unwrap(), expected);
}

#[test]
fn scan_cor22_example_is_clean() {
    let out = shiftpow(&["scan-cor22", "--k", "3", "--shift", "1", "--X", "1000000"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let summary = recs.last().unwrap();
    assert_eq!(summary["type"], "summary");
    assert_eq!(summary["violations"], 0);
    assert!(summary["elapsed"].is_f64());
    assert_eq!(of_type(&recs, "cor22")[0]["threshold"], "2");
}

#[test]
fn decompose_example() {
    let path = temp_set("decompose.txt", &[6, 10, 15, 25]);
    let out = shiftpow(&["decompose", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let d = of_type(&recs, "decomposition")[0];
    assert_eq!(d["reducible"], true);
    assert_eq!(d["a"], serde_json::json!([2, 5]));
    assert_eq!(d["b"], serde_json::json!([3, 5]));

    let path = temp_set("irreducible.txt", &[2, 3]);
    let recs = records(&shiftpow(&["decompose", "--file", path.to_str().unwrap()]));
    assert_eq!(of_type(&recs, "decomposition")[0]["reducible"], false);
}

#[test]
fn set_constructions() {
    let values = |args: &[&str]| -> Vec<u64> {
        of_type(&records(&shiftpow(args)), "element")
            .iter()
            .map(|r| r["value"].as_u64().unwrap())
            .collect()
    };
    assert_eq!(
        values(&["truncate-M", "--k", "3", "--n", "1", "--X", "100"]),
        [2, 9, 28, 65]
    );
    assert_eq!(values(&["truncate-M", "--k", "3", "--n", "-1", "--X", "30"]), [7, 26]);
    assert_eq!(
        values(&["truncate-M", "--k", "3", "--n", "5", "--X", "40"]),
        [6, 13, 32]
    );
    assert_eq!(
        values(&["rm-example", "--m", "2", "--k", "3", "--n", "1", "--X", "100"]),
        [2, 4, 9, 18, 28, 56, 65]
    );
    let recs = records(&shiftpow(&[
        "perturb", "--m", "2", "--k", "3", "--n", "1", "--X", "100",
    ]));
    let p = of_type(&recs, "perturbation")[0];
    assert_eq!((p["added"].as_u64(), p["removed"].as_u64()), (Some(3), Some(0)));
}

#[test]
fn big_integers_are_strings() {
    let big = format!("1{}", "0".repeat(60));
    let recs = records(&shiftpow(&["root", "--value", &big, "--k", "3"]));
    let r = of_type(&recs, "root")[0];
    assert_eq!(r["root"], format!("1{}", "0".repeat(20)));
    assert_eq!(r["exact"], true);

    let recs = records(&shiftpow(&[
        "witness", "--a", "1", "--b", "7", "--k", "3", "--shift", "1",
    ]));
    let w = of_type(&recs, "witness")[0];
    assert_eq!(
        (&w["value"], &w["root"], &w["power"]),
        (&"8".into(), &"2".into(), &true.into())
    );
}

#[test]
fn audits_report_clean_runs() {
    let recs = records(&shiftpow(&[
        "kst-bound",
        "--m",
        "10",
        "--nv",
        "10",
        "--s",
        "1",
        "--t",
        "1",
        "--edges",
        "0",
    ]));
    let b = of_type(&recs, "kst_bound")[0];
    assert_eq!(b["bound"], 0.0);
    assert_eq!(b["admits"], true);

    let out = shiftpow(&[
        "kst-audit",
        "--a-max",
        "40",
        "--k",
        "3",
        "--shift",
        "1",
        "--X",
        "100000",
        "--s",
        "7",
        "--t",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(of_type(&records(&out), "kst_audit")[0]["status"], "holds");

    let out = shiftpow(&["claim31-audit", "--a", "1,2", "--k", "3", "--n", "1", "--X", "16777216"]);
    assert_eq!(out.status.code(), Some(0));
    let c = &records(&out)[0];
    assert_eq!(c["holds"], true);
    assert_eq!(c["terms"].as_object().unwrap().len(), 9);

    let out = shiftpow(&["pairs", "--a-max", "10", "--k", "3", "--shift", "-1", "--X", "100000"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(of_type(&records(&out), "pair").len(), 45);

    for cmd in ["gap-scan", "scan-cor24"] {
        let out = shiftpow(&[cmd, "--k", "3", "--shift", "-1", "--X", "200"]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
    }
}

#[test]
fn usage_and_input_errors_exit_one() {
    let bad = temp_set("bad.txt", &[5, 3]);
    let cases: Vec<Vec<&str>> = vec![
        vec!["neighbors", "--k", "3", "--shift", "1", "--X", "10"],
        vec!["neighbors", "--a", "1", "--k", "3", "--shift", "0", "--X", "10"],
        vec!["gap-scan", "--k", "2", "--shift", "1", "--X", "10"],
        vec![
            "pairs", "--a1", "5", "--a2", "3", "--k", "3", "--shift", "1", "--X", "100",
        ],
        vec!["decompose", "--file", bad.to_str().unwrap()],
        vec!["decompose", "--file", "/nonexistent/set.txt"],
        vec!["root", "--value", "-4", "--k", "2"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let out = shiftpow(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty() || !String::from_utf8_lossy(&out.stdout).contains("summary"));
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(shiftpow(&["--help"]).status.code(), Some(0));

    let out = Command::new(env!("CARGO_BIN_EXE_shiftpow"))
        .args(["root", "--value", "8", "--k", "3"])
        .env("SHIFTPOW_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_output_and_output_file() {
    let path = std::env::temp_dir().join(format!("shiftpow-out-{}.csv", std::process::id()));
    let out = shiftpow(&[
        "neighbors",
        "--a-max",
        "2",
        "--k",
        "3",
        "--shift",
        "1",
        "--X",
        "100",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
        "--no-timing",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "type,a,b,root");
    assert_eq!(lines[1], "edge,1,7,2");
    assert!(lines.last().unwrap().starts_with("# summary {"));
    fs::remove_file(path).unwrap();
}

#[test]
fn output_independent_of_workers() {
    let runs: Vec<(&str, Vec<&str>)> = vec![
        (
            "neighbors",
            vec!["--a-max", "300", "--k", "3", "--shift", "-2", "--X", "1000000"],
        ),
        (
            "pairs",
            vec!["--a-max", "20", "--k", "4", "--shift", "1", "--X", "1000000"],
        ),
        (
            "grid",
            vec![
                "--a-max", "60", "--k", "3", "--shift", "1", "--X", "3000", "--s", "2", "--t", "2",
            ],
        ),
        ("gap-scan", vec!["--k", "3", "--shift", "-1", "--X", "250"]),
        ("scan-cor24", vec!["--k", "3", "--shift", "1", "--X", "5000000"]),
    ];
    for (cmd, rest) in runs {
        let outputs: Vec<Vec<u8>> = ["1", "3", "8"]
            .iter()
            .map(|w| {
                let mut args = vec![cmd];
                args.extend(&rest);
                args.extend(["--no-timing", "--workers", w]);
                shiftpow(&args).stdout
            })
            .collect();
        assert!(!outputs[0].is_empty());
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{cmd}");
    }
}
