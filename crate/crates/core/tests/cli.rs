use std::path::Path;
use std::process::{Command, Output};

use naw::extract::ExtractConfig;
use naw::runtime::{corpus_entry, FiniteModel, ValueRepr, Verifier};
use serde_json::Value as Json;

fn naw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_naw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Json> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{l}: {e}")))
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn every_command_succeeds_on_the_corpus() {
    for args in [
        &["check", "linear-search"][..],
        &["show-types", "higher-order", "--variant", "marked"],
        &["extract", "contraction", "--induction", "flagged"],
        &["verify", "bool-cases", "--budget", "40"],
        &["bench", "linear-search", "--n", "16", "--k", "5"],
    ] {
        let o = naw(args);
        assert_eq!(
            code(&o),
            0,
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn json_output_carries_schema_and_command() {
    for (cmd, args) in [
        ("check", &["check", "identity"][..]),
        ("show-types", &["show-types", "weakening"]),
        ("extract", &["extract", "nested-induction"]),
        ("verify", &["verify", "contraction"]),
        ("bench", &["bench", "linear-search", "--n", "8", "--k", "2"]),
    ] {
        let mut full = vec!["--out", "json"];
        full.extend_from_slice(args);
        let o = naw(&full);
        assert_eq!(code(&o), 0, "{args:?}");
        let first = &json_lines(&o)[0];
        assert_eq!(first["schema"], 1, "{args:?}");
        assert_eq!(first["command"], cmd, "{args:?}");
    }
}

#[test]
fn bench_record_matches_the_zero() {
    let o = naw(&[
        "--out",
        "json",
        "bench",
        "linear-search",
        "--n",
        "32",
        "--k",
        "11",
        "--induction",
        "flagged",
    ]);
    let r = &json_lines(&o)[0]["record"];
    assert_eq!(r["K"], 11);
    assert_eq!(r["counterexample"], 11);
    assert_eq!(r["tc_checks"], 12);
    assert_eq!(r["verdict"], "PASS");
}

#[test]
fn csv_has_a_header() {
    let o = naw(&[
        "--out",
        "csv",
        "bench",
        "linear-search",
        "--n",
        "8",
        "--k",
        "3",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("entry,variant,mode,n,K,tc_checks,rec_unfolds,beta_steps,verdict")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 9);
    assert_eq!(row[4], "3");

    let o = naw(&["--out", "csv", "verify", "contraction"]);
    assert!(stdout(&o).starts_with("variant,instances,exhaustive,passed"));
}

#[test]
fn failures_and_usage_errors_exit_differently() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.naw",
        "(var x nat)\n(formula A (atom tt))\n(all-elim (assume u A) x)\n",
    );
    assert_eq!(code(&naw(&["check", &bad])), 1);
    assert_eq!(code(&naw(&["verify", &bad])), 1);

    let unparsable = write(dir.path(), "u.naw", "(assume u (atom tt)\n");
    let o = naw(&["check", &unparsable]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("u.naw:"));

    assert_eq!(code(&naw(&["check", "no-such-entry"])), 2);
    assert_eq!(code(&naw(&["bench", "identity"])), 2);
    assert_eq!(
        code(&naw(&["extract", "identity", "--variant", "fancy"])),
        2
    );
    assert_eq!(code(&naw(&[])), 2);
}

#[test]
fn models_are_read_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(
        dir.path(),
        "m.json",
        r#"{"nat_bound": 2, "functions": {"f": [3, 0]}}"#,
    );
    let o = naw(&[
        "--out",
        "json",
        "verify",
        "linear-search",
        "--model",
        &model,
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_lines(&o)[0]["verdict"], "PASS");

    let broken = write(dir.path(), "b.json", "{\"nat_bound\": ");
    assert_eq!(
        code(&naw(&["verify", "linear-search", "--model", &broken])),
        2
    );
}

#[test]
fn replay_reruns_a_recorded_instance() {
    let e = corpus_entry("contraction").unwrap();
    let v = Verifier::new(&e.proof().unwrap(), ExtractConfig::default()).unwrap();
    let model = FiniteModel::default();
    let vars = v.instance_vars(&model);
    let (rows, _) = model.instances(&vars, 10);
    let rec = v.verify_instance(&model, &vars, &rows[0]).unwrap();
    let line = serde_json::json!({ "command": "verify-failure", "record": rec }).to_string();
    let bare: std::collections::BTreeMap<String, ValueRepr> = rec.instance.clone();

    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "r.jsonl",
        &format!("{line}\n\n{}\n", serde_json::to_string(&bare).unwrap()),
    );
    let o = naw(&["--out", "json", "verify", "contraction", "--replay", &file]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 2);
    for l in &lines {
        assert_eq!(l["schema"], 1);
    }

    let junk = write(dir.path(), "j.jsonl", "not json\n");
    assert_eq!(code(&naw(&["verify", "contraction", "--replay", &junk])), 2);
}
