use std::process::{Command, Output};

use serde_json::Value;

fn hypercomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercomp")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn count_points_example() {
    let out = hypercomp(&["count-points", "--poly", "x0*x1 - 1", "--vars", "x0,x1,x2", "--field", "q=3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["total"], 6);
    assert_eq!(v["q"], 3);
    assert!(v.get("runtime_ms").is_none());
    let out = hypercomp(&[
        "count-points",
        "--poly",
        "x0*x1 - 1",
        "--vars",
        "x0,x1,x2",
        "--field",
        "q=3",
        "--json",
        "--timings",
    ]);
    assert!(json(&out)["timings_ms"]["total"].is_u64());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(hypercomp(&["count-points", "--bogus"]).status.code(), Some(2));
    assert_eq!(hypercomp(&["no-such-command"]).status.code(), Some(2));
    let bad_poly = hypercomp(&["count-points", "--poly", "x^^2", "--vars", "x", "--field", "q=3"]);
    assert_eq!(bad_poly.status.code(), Some(2));
    let bad_field = hypercomp(&["count-points", "--poly", "x", "--vars", "x", "--field", "q=6"]);
    assert_eq!(bad_field.status.code(), Some(2));
    let bad_family = hypercomp(&["verify-family", "--family", "plane", "--d", "4"]);
    assert_eq!(bad_family.status.code(), Some(2));
    assert_eq!(hypercomp(&["verify-family", "--family", "cone", "--d", "3"]).status.code(), Some(1));
}

#[test]
fn resource_bound_exits_3() {
    let out = hypercomp(&["count-points", "--poly", "x*y", "--vars", "x,y", "--field", "q=5", "--point-bound", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let out = hypercomp(&[
        "verify-family",
        "--family",
        "cone",
        "--d",
        "4",
        "--route",
        "direct",
        "--term-ceiling",
        "1000",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["summary"]["aborted"], 1);
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify-family", "--family", "line", "--d", "3..4", "--mutations", "4", "--seed", "11", "--json"];
    let a = hypercomp(&args);
    let b = hypercomp(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = hypercomp(&["verify-ga-actions"]);
    let d = hypercomp(&["verify-ga-actions"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn certify_from_map_files() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, comps: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, format!(r#"{{"vars": ["x", "y", "z"], "components": [{comps}]}}"#)).unwrap();
        p.to_string_lossy().into_owned()
    };
    let fw = write("fw.json", r#""x", "y", "z + x""#);
    let bw = write("bw.json", r#""x", "y", "z - x""#);
    let base = ["certify", "--f", "x^2*y + z^3", "--g", "x^2*y + (z - x)^3", "--json"];
    let ok = hypercomp(&[&base[..], &["--forward", &fw, "--backward", &bw]].concat());
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = hypercomp(&[&base[..], &["--forward", &fw, "--backward", &fw]].concat());
    assert_eq!(bad.status.code(), Some(1));
    let missing = hypercomp(&[&base[..], &["--forward", &fw, "--backward", "/nonexistent.json"]].concat());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn queries() {
    let out = hypercomp(&["euler-char", "--poly", "x^2*w + y^2*z", "--vars", "w,x,y,z", "--projective", "--json"]);
    let v = json(&out);
    assert_eq!(v["chi"], "4");
    assert_eq!(v["class"], "L^2 + 2*L + 1");
    let out = hypercomp(&["euler-char", "--poly", "record:union-tree:r=3,s=1", "--json"]);
    assert_eq!(json(&out)["chi"], "4");
    let out = hypercomp(&["verify-record", "--name", "record:nonnormal-cubic-f5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["summary"]["passed"], 4);
    let out = hypercomp(&["classify-quadric", "--poly", "x0*x1 + x2*x3", "--vars", "x0,x1,x2,x3", "--json"]);
    let v = json(&out);
    assert_eq!(v["kind"], "X");
    assert_eq!(v["m"], 2);
}

#[test]
fn quick_verify_all_passes() {
    let out = hypercomp(&["verify-all", "--quick", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["summary"]["passed"].as_u64().unwrap() > 100);
    let md = hypercomp(&["verify-all", "--quick"]);
    assert!(String::from_utf8_lossy(&md.stdout).contains("## Degree-8 involution"));
}
