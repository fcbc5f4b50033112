use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use shorted_cli::MatrixDocument;
use tempfile::NamedTempFile;

fn shorted(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shorted"))
        .args(args)
        .env_remove("SHORTED_SEED")
        .output()
        .expect("binary runs")
}

fn fixture(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn rational(n: usize, entries: &[&str], partition: &[usize]) -> NamedTempFile {
    let entries: Vec<String> = entries.iter().map(|e| format!("\"{e}\"")).collect();
    fixture(&format!(
        r#"{{"backend":"rational","rows":{n},"cols":{n},"entries":[{}],"partition":{partition:?}}}"#,
        entries.join(",")
    ))
}

fn run_on(cmd: &str, file: &NamedTempFile, extra: &[&str]) -> Output {
    let path = file.path().to_str().unwrap();
    let mut args = vec![cmd, path];
    args.extend_from_slice(extra);
    shorted(&args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn schur_examples() {
    let out = run_on("schur", &rational(2, &["2", "1", "1", "1"], &[1, 1]), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["sigma"]["entries"], serde_json::json!(["1/2"]));

    let out = run_on("schur", &rational(3, &["4", "0", "0", "0", "2", "1/3", "0", "1/3", "5"], &[1, 2]), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["sigma"]["entries"], serde_json::json!(["2/1", "1/3", "1/3", "5/1"]));

    let out = run_on("schur", &rational(2, &["0", "1", "1", "1"], &[1, 1]), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("(i) fails"), "{}", stderr(&out));
}

#[test]
fn schur_routes_agree_on_float() {
    let doc = r#"{"backend":"float","rows":2,"cols":2,"entries":[[2,0],[1,0],[1,0],[1,0]],"partition":[1,1]}"#;
    let f = fixture(doc);
    let sqrt = json(&run_on("schur", &f, &["--route", "sqrt"]));
    let sigma = sqrt["sigma"]["entries"][0][0].as_f64().unwrap();
    assert!((sigma - 0.5).abs() < 1e-12);

    let exact = rational(2, &["2", "1", "1", "1"], &[1, 1]);
    assert_eq!(run_on("schur", &exact, &["--route", "sqrt"]).status.code(), Some(65));
    let as_float = json(&run_on("schur", &exact, &["--backend", "float"]));
    assert_eq!(as_float["sigma"]["entries"], serde_json::json!([[0.5, 0.0]]));
}

#[test]
fn albert_exit_codes() {
    let cases = [
        (&["1", "0", "0", "1"], "PSD", 0),
        (&["1", "2", "2", "1"], "SIGMA_NOT_PSD", 3),
        (&["0", "1", "1", "0"], "NOT_POSITIVE_TYPE", 2),
    ];
    for (entries, label, code) in cases {
        let out = run_on("albert", &rational(2, entries, &[1, 1]), &[]);
        assert_eq!(out.status.code(), Some(code));
        assert_eq!(stdout(&out).lines().next(), Some(label));
    }
}

#[test]
fn malformed_and_invalid_inputs() {
    assert_eq!(run_on("schur", &fixture("{not json"), &[]).status.code(), Some(64));
    assert_eq!(run_on("schur", &rational(2, &["1", "2/0", "2", "1"], &[1, 1]), &[]).status.code(), Some(64));
    let skew = run_on("schur", &rational(2, &["1", "2", "3", "1"], &[1, 1]), &[]);
    assert_eq!(skew.status.code(), Some(65));
    assert!(stderr(&skew).contains("not Hermitian"));
    assert_eq!(run_on("schur", &rational(2, &["1", "0", "0", "1"], &[1, 1, 0]), &[]).status.code(), Some(65));
    assert_eq!(run_on("schur", &rational(2, &["1", "0", "0", "1"], &[2, 1]), &[]).status.code(), Some(65));
    let ok = rational(2, &["1", "0", "0", "1"], &[1, 1]);
    assert_eq!(run_on("schur", &ok, &["--tol", "2"]).status.code(), Some(65));
    assert_eq!(shorted(&["schur", "/nonexistent/file.json"]).status.code(), Some(64));
    assert_eq!(shorted(&["frobnicate"]).status.code(), Some(64));
}

#[test]
fn extremal_report() {
    let out = run_on("extremal", &rational(3, &["1", "1", "1", "1", "1", "1", "1", "1", "1"], &[2, 1]), &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["is_extremal"], true);
    assert_eq!(v["is_doubly_extremal"], true);
    assert_eq!(v["kernels_equal"], true);
    assert_eq!(v["double_omega"]["entries"], serde_json::json!(["1/1", "1/1", "1/1", "1/1"]));

    let float = r#"{"backend":"float","rows":3,"cols":3,"entries":[[1,0],[0,0],[1,0],[0,0],[1,0],[0,0],[1,0],[0,0],[1,0]],"partition":[2,1]}"#;
    let v = json(&run_on("extremal", &fixture(float), &[]));
    assert_eq!(v["is_extremal"], true);
    assert_eq!(v["is_doubly_extremal"], false);
    assert_eq!(v["h1_dim"], 1);
}

#[test]
fn pair_check_report() {
    let out = run_on("pair-check", &rational(3, &["1", "0", "0", "0", "0", "1", "0", "1", "1"], &[2, 1]), &[]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["positive"], false);
    assert_eq!(v["kernel_condition"], false);
    assert!(v["omega"].is_null());

    let out = run_on("pair-check", &rational(3, &["1", "0", "3", "0", "0", "0", "3", "0", "9"], &[2, 1]), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["omega"]["entries"], serde_json::json!(["9/1"]));
}

#[test]
fn douglas_factorization() {
    let id = fixture(r#"{"backend":"float","rows":2,"cols":2,"entries":[[1,0],[0,0],[0,0],[1,0]]}"#);
    let big = fixture(r#"{"backend":"float","rows":2,"cols":2,"entries":[[4,0],[0,0],[0,0],[1,0]]}"#);
    let (a, d) = (big.path().to_str().unwrap(), id.path().to_str().unwrap());
    let out = shorted(&["douglas", a, d, "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("A ≰ α²D"));

    let out = shorted(&["douglas", a, d, "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
    assert!(v["op_norm_w"].as_f64().unwrap() <= 2.0 + 1e-9);
}

#[test]
fn quotient_examples() {
    let ones = rational(3, &["1"; 9], &[1, 1, 1]);
    let out = run_on("quotient", &ones, &[]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["d_over_a"]["entries"], serde_json::json!(["0/1", "0/1", "0/1", "0/1"]));
    assert_eq!(v["nested"], v["direct"]);
    assert_eq!(v["identity_holds"], true);

    assert_eq!(run_on("quotient", &rational(2, &["1", "0", "0", "1"], &[1, 1]), &[]).status.code(), Some(65));
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--kind", "block2-psd", "--seed", "7", "--dims", "2,2"];
    let first = shorted(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, shorted(&args).stdout);
    assert_ne!(first.stdout, shorted(&["gen", "--kind", "block2-psd", "--seed", "8", "--dims", "2,2"]).stdout);

    let from_env = Command::new(env!("CARGO_BIN_EXE_shorted"))
        .args(["gen", "--kind", "block2-psd", "--dims", "2,2"])
        .env("SHORTED_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(from_env.stdout, first.stdout);

    let rational = shorted(&["gen", "--kind", "block3-psd", "--seed", "3", "--dims", "1,2,1", "--backend", "rational"]);
    let text = stdout(&rational);
    let doc = MatrixDocument::parse(&text).unwrap();
    assert_eq!(doc.partition, Some(vec![1, 2, 1]));
    assert_eq!(doc.to_json(), text.trim_end());

    let float = stdout(&first);
    assert_eq!(MatrixDocument::parse(&float).unwrap().to_json(), float.trim_end());
    assert_eq!(shorted(&["gen", "--kind", "psd", "--dims", "2,2"]).status.code(), Some(65));
}

#[test]
fn generated_documents_feed_the_analyses() {
    let out = shorted(&["gen", "--kind", "block2-extremal", "--seed", "5", "--dims", "2,3", "--backend", "rational"]);
    let f = fixture(&stdout(&out));
    let v = json(&run_on("extremal", &f, &[]));
    assert_eq!(v["is_extremal"], true);
    assert_eq!(v["criteria_agree"], true);

    let chain = shorted(&["gen", "--kind", "chain", "--seed", "1", "--dims", "1,1", "--len", "3"]);
    let v: Value = serde_json::from_str(&stdout(&chain)).unwrap();
    assert_eq!(v["chain"].as_array().unwrap().len(), 3);
    assert_eq!(v["limit"]["partition"], serde_json::json!([1, 1]));
}

#[test]
fn verify_reports_counts() {
    let out = shorted(&["verify", "--suite", "albert", "--count", "1000", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "1000/1000 pass");

    let out = shorted(&["verify", "--suite", "quotient", "--count", "10", "--seed", "2", "--backend", "rational"]);
    assert_eq!(stdout(&out).trim(), "10/10 pass");

    assert_eq!(shorted(&["verify", "--suite", "douglas", "--backend", "rational"]).status.code(), Some(65));
    assert_eq!(shorted(&["verify", "--suite", "nonsense"]).status.code(), Some(64));
}
