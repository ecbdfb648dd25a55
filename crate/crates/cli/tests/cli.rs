use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fitmetrics::ConfusionMatrix;
use fitmetrics_cli::input::parse_matrix_csv;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn fitmetrics(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fitmetrics"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json_scores(out: &Output) -> Vec<(String, f64)> {
    assert!(out.status.success(), "{}", stderr(out));
    let v: Value = serde_json::from_str(&stdout(out)).unwrap();
    v["scores"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["metric"].as_str().unwrap().to_string(), s["value"].as_f64().unwrap()))
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn script_matrix_values() {
    // Reference values from a direct evaluation of the geometric normalized
    // matrix, per-class harmonic means of precision/recall, and chi-square.
    let out = fitmetrics(&[
        "-i", "tests/data/script3.csv",
        "-m", "generalized_mcc",
        "-m", "generalized_f1:outer=harmonic",
        "-m", "cramers_phi",
        "-o", "json",
    ]);
    let scores = json_scores(&out);
    let expected = [
        ("generalized_mcc", 0.105283903441),
        ("generalized_f1", 0.413080895009),
        ("cramers_phi", 0.325251300461),
    ];
    for ((name, value), (want_name, want)) in scores.iter().zip(expected) {
        assert_eq!(name, want_name);
        assert!((value - want).abs() < 1e-11, "{name}: {value} vs {want}");
    }
}

#[test]
fn default_metrics_and_text_output() {
    let out = fitmetrics(&["-i", "tests/data/worked3.csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for name in ["generalized_mcc", "generalized_f1", "cramers_phi"] {
        assert!(text.contains(name), "{text}");
    }
    assert!(text.contains("0.225669288012"), "{text}");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let ragged = write(dir.path(), "ragged.csv", "1,2\n3\n");
    let out = fitmetrics(&["-i", &ragged]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("ragged row at line 2"), "{}", stderr(&out));

    let words = write(dir.path(), "words.csv", "1,2\n3,many\n");
    let out = fitmetrics(&["-i", &words]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2, column 2"));

    let single = write(dir.path(), "single.csv", "a,a\na,a\n");
    let out = fitmetrics(&["-i", &single, "-f", "pairs_csv"]);
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("missing.csv").display().to_string();
    assert_eq!(fitmetrics(&["-i", &missing]).status.code(), Some(2));

    let bad_json = write(dir.path(), "bad.json", "{\"counts\": [[1, 2], [3]]}");
    assert_eq!(fitmetrics(&["-i", &bad_json, "-f", "json"]).status.code(), Some(2));
}

#[test]
fn parameter_errors_exit_3() {
    for args in [
        vec!["-i", "tests/data/worked3.csv", "-m", "lp_multiclass:p=2"],
        vec!["-i", "tests/data/worked3.csv", "-m", "nonsense"],
        vec!["-i", "tests/data/worked3.csv", "-m", "generalized_f1:outer=max"],
        vec!["-i", "tests/data/worked3.csv", "-m", "mcc_binary"],
        vec!["-i", "tests/data/worked3.csv", "--smooth", "-1"],
    ] {
        let out = fitmetrics(&args);
        assert_eq!(out.status.code(), Some(3), "{args:?}: {}", stderr(&out));
        assert!(stderr(&out).starts_with("error: "));
    }
}

#[test]
fn smoothing_reported() {
    let out = fitmetrics(&["-i", "tests/data/identity4.csv", "--smooth", "0.5", "-m", "generalized_mcc", "-o", "json"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["smoothing"].as_f64(), Some(0.5));
    assert_eq!(v["scores"][0]["params"]["smooth"].as_str(), Some("0.5"));
    let value = v["scores"][0]["value"].as_f64().unwrap();
    assert!(value > 0.0 && value < 1.0);
}

#[test]
fn json_report_feeds_back_as_input() {
    let dir = tempfile::tempdir().unwrap();
    let first = fitmetrics(&["-i", "tests/data/script3.csv", "-m", "generalized_mcc", "-o", "json"]);
    let report = write(dir.path(), "report.json", &stdout(&first));
    let second = fitmetrics(&["-i", &report, "-f", "json", "-m", "generalized_mcc", "-o", "json"]);
    assert_eq!(json_scores(&first), json_scores(&second));
}

#[test]
fn pairs_and_matrix_inputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = write(dir.path(), "pairs.csv", "true,predicted\nb,a\na,a\na,b\nc,c\nb,b\nc,a\n");
    let matrix = write(dir.path(), "matrix.csv", ",a,b,c\na,1,1,0\nb,1,1,0\nc,1,0,1\n");
    let from_pairs = fitmetrics(&["-i", &pairs, "-f", "pairs_csv", "-o", "json"]);
    let from_matrix = fitmetrics(&["-i", &matrix, "-o", "json"]);
    assert_eq!(json_scores(&from_pairs), json_scores(&from_matrix));
}

#[test]
fn matrix_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..50 {
        let n = rng.random_range(2..=7);
        let grid: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.random_range(0..1000)).collect()).collect();
        let labels: Vec<String> = (0..n).map(|i| format!("k{i}")).collect();
        let cm = ConfusionMatrix::from_counts(&grid, &labels).unwrap();
        let mut text = format!(",{}\n", labels.join(","));
        for (label, row) in labels.iter().zip(&grid) {
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            text.push_str(&format!("{label},{}\n", cells.join(",")));
        }
        let path = dir.path().join(format!("m{case}.csv"));
        fs::write(&path, text).unwrap();
        assert_eq!(parse_matrix_csv(&path).unwrap(), cm);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["-i", "tests/data/script3.csv", "-m", "ovo_f1", "-m", "lp_multiclass:p=0", "-o", "json"];
    let runs: Vec<String> = (0..3).map(|_| stdout(&fitmetrics(&args))).collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
}
