use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use twistcert::diagram::link_components;
use twistcert::format::parse_diagram;

const FIGURE_8: &str = r#"{"name": "figure-8", "pd": [[4,2,5,1],[8,6,1,5],[6,3,7,4],[2,7,3,8]]}"#;
const TREFOIL: &str = "[[1,4,2,5],[3,6,4,1],[5,2,6,3]]";

fn corpus(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/data")
        .join(name)
}

fn twistcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn figure_eight_text_report() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "fig8.json", FIGURE_8);
    let o = twistcert(&["analyze", &f]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("tw 2"), "{out}");
    assert!(
        out.contains("hyperbolic (6-theorem): not certified"),
        "{out}"
    );
    assert!(out.contains("volume: augmentation >= 7.32772"), "{out}");
}

#[test]
fn attested_torus_link_is_geodesic() {
    let o = twistcert(&[
        "analyze",
        "--json",
        "--attest-hyperbolic",
        corpus("torus_2_58.json").to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let report = &v[0]["report"];
    assert_eq!(report["certificates"]["geodesic_hk"]["certified"], true);
    assert_eq!(report["certificates"]["hyperbolic_6thm"]["certified"], true);
    assert_eq!(report["circles"][0]["c"], 58);
}

#[test]
fn missing_inputs_is_a_usage_error() {
    let o = twistcert(&["analyze"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_file_fails_without_hiding_the_others() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "trefoil.json", TREFOIL);
    let bad = write(dir.path(), "bad.json", "[[1,2,3]]");
    let o = twistcert(&["analyze", "--json", &bad, &good]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v[0]["error"].as_str().unwrap().contains("crossing 0"));
    assert_eq!(v[1]["report"]["tw"], 1);
    assert!(stderr(&o).contains("bad.json"));
}

#[test]
fn exports_reparse_with_one_component_per_circle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let t = write(dir.path(), "trefoil.json", TREFOIL);
    let f = write(dir.path(), "fig8.json", FIGURE_8);
    let o = twistcert(&[
        "analyze",
        "--export-augmented",
        out.to_str().unwrap(),
        &t,
        &f,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for (stem, components) in [("trefoil", 2), ("fig8", 3)] {
        let text = fs::read_to_string(out.join(format!("{stem}.augmented.json"))).unwrap();
        let d = parse_diagram(&text).unwrap();
        assert_eq!(link_components(&d).component_count, components, "{stem}");
    }
}

#[test]
fn unknot_exports_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let u = write(dir.path(), "unknot.json", "[]");
    let o = twistcert(&["analyze", "--export-augmented", out.to_str().unwrap(), &u]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.join("unknot.augmented.json").exists());
}

#[test]
fn json_output_is_deterministic() {
    let files: Vec<String> = [
        "figure8.json",
        "five_strand_full_twist.json",
        "four_regions_c6.json",
    ]
    .iter()
    .map(|f| corpus(f).to_string_lossy().into_owned())
    .collect();
    let mut args = vec!["analyze", "--json", "--attest-hyperbolic"];
    args.extend(files.iter().map(String::as_str));
    let a = stdout(&twistcert(&args));
    let b = stdout(&twistcert(&args));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert_eq!(
        v[2]["report"]["certificates"]["hyperbolic_6thm"]["certified"],
        true
    );
}

#[test]
fn unknown_keys_warn_unless_strict() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "k.json",
        r#"{"pd": [[1,4,2,5],[3,6,4,1],[5,2,6,3]], "colour": "red"}"#,
    );
    let lenient = twistcert(&["analyze", &f]);
    assert!(lenient.status.success());
    assert!(stderr(&lenient).contains("warning"));
    let strict = twistcert(&["analyze", "--strict", &f]);
    assert_eq!(strict.status.code(), Some(2));
    assert!(stderr(&strict).contains("colour"));
}

#[test]
fn split_diagrams_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "split.json", "[[1,2,2,1],[3,4,4,3]]");
    let o = twistcert(&["analyze", &f]);
    assert_eq!(o.status.code(), Some(2));
}
