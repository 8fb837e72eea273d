use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eeg-affect")).current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data_rows(path: &Path) -> usize {
    fs::read_to_string(path).unwrap().lines().count() - 1
}

#[test]
fn small_pipeline_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let summary = ok(d, &["synth", "--participants", "2", "--out", "raw.csv"]);
    assert!(summary.contains("recordings: 8"));
    assert_eq!(data_rows(&d.join("raw.csv")), 480);

    ok(d, &["featurize", "--input", "raw.csv", "--set", "stat", "--out", "stat.csv"]);
    ok(d, &["featurize", "--input", "raw.csv", "--set", "fused", "--out", "fused.csv"]);
    let header = |p: &str| fs::read_to_string(d.join(p)).unwrap().lines().next().unwrap().split(',').count();
    assert_eq!(header("stat.csv"), 2 + 56);
    assert_eq!(header("fused.csv"), 2 + 120);
    assert_eq!(data_rows(&d.join("fused.csv")), 8);

    ok(d, &["select", "--input", "fused.csv", "--method", "mrmr-miq", "--k", "5", "--out", "sel.csv", "--report", "sel_report.csv"]);
    assert_eq!(data_rows(&d.join("sel_report.csv")), 5);
    assert_eq!(header("sel.csv"), 2 + 5);

    let text = ok(d, &["reduce", "--input", "fused.csv", "--method", "pca", "--out", "pca.csv"]);
    assert!(text.contains("reaching 98% variance"));
}

#[test]
fn select_with_full_width_permutes_columns() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["synth", "--participants", "3", "--out", "raw.csv"]);
    ok(d, &["featurize", "--input", "raw.csv", "--set", "stat", "--out", "stat.csv"]);
    ok(d, &["select", "--input", "stat.csv", "--k", "56", "--out", "all.csv"]);
    let cols = |p: &str| -> Vec<String> {
        let text = fs::read_to_string(d.join(p)).unwrap();
        let mut h: Vec<String> = text.lines().next().unwrap().split(',').map(str::to_owned).collect();
        h.sort();
        h
    };
    assert_eq!(cols("stat.csv"), cols("all.csv"));
}

#[test]
fn train_evaluate_and_plot() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["synth", "--participants", "12", "--separability", "4", "--out", "raw.csv"]);
    ok(d, &["featurize", "--input", "raw.csv", "--out", "fused.csv"]);
    let table = ok(
        d,
        &["train", "--features", "fused.csv", "--n-trees", "30", "--model-out", "model.json", "--report-out", "report.json"],
    );
    assert!(table.contains("MLA Test Accuracy (%)"));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("model.json")).unwrap()).unwrap();
    assert_eq!(doc["format"], "eeg-affect-model");

    ok(d, &["roc", "--report", "report.json", "--out", "roc.svg"]);
    let svg = fs::read_to_string(d.join("roc.svg")).unwrap();
    let xml = roxmltree::Document::parse(&svg).expect("well-formed SVG");
    assert_eq!(xml.root_element().tag_name().name(), "svg");
    let curves = xml.descendants().filter(|n| n.tag_name().name() == "path" && n.attribute("class") == Some("roc")).count();
    assert_eq!(curves, 4);

    for model in ["nb", "tree", "perceptron"] {
        ok(d, &["evaluate", "--features", "fused.csv", "--model", model, "--epochs", "200", "--cv", "stratified", "--k", "3"]);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    ok(d, &["synth", "--participants", "3", "--seed", "9", "--out", "a.csv"]);
    ok(d, &["synth", "--participants", "3", "--seed", "9", "--out", "b.csv"]);
    assert_eq!(fs::read(d.join("a.csv")).unwrap(), fs::read(d.join("b.csv")).unwrap());
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(run(d, &["synth", "--bogus"]).status.code(), Some(1));
    assert_eq!(run(d, &["synth", "--participants", "0", "--out", "x.csv"]).status.code(), Some(1));
    assert_eq!(run(d, &["featurize", "--input", "missing.csv", "--out", "f.csv"]).status.code(), Some(2));

    fs::write(d.join("bad.csv"), "participant,label,t,delta\n1,sad,0,1\n").unwrap();
    let out = run(d, &["featurize", "--input", "bad.csv", "--out", "f.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    ok(d, &["synth", "--participants", "2", "--out", "raw.csv"]);
    ok(d, &["featurize", "--input", "raw.csv", "--set", "stat", "--out", "stat.csv"]);
    assert_eq!(run(d, &["select", "--input", "stat.csv", "--k", "57", "--out", "s.csv"]).status.code(), Some(1));
    assert_eq!(run(d, &["help"]).status.code(), Some(0));
}
