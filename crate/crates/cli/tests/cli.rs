use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_slowness"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child =
        bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error(out: &Output) -> (i32, String) {
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    (out.status.code().unwrap(), v["error"]["kind"].as_str().unwrap().to_string())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn forward_reference_tensor() {
    let out = run(&["forward", "--tensor", path(&fixture("ref2d.json"))]);
    let v = json(&out);
    assert_eq!(v["coeffs"][0], "191/1");
    assert_eq!(v["basis"], "canon2d");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("forward_ref2d.json"));
}

#[test]
fn irreducible_olivine_at_five() {
    let poly = run(&["forward", "--tensor", path(&fixture("olivine.json"))]);
    let out = run_stdin(&["irreducible", "--poly", "-", "--prime", "5"], &poly.stdout);
    let v = json(&out);
    assert_eq!(v["verdict"], "CertifiedIrreducible");
    assert_eq!((v["prime"].as_u64(), v["d"].as_u64()), (Some(5), Some(6)));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("irreducible_olivine_p5.json"));
}

#[test]
fn irreducible_scan_and_budget() {
    let v = json(&run(&["irreducible", "--poly", path(&fixture("example2d.json")), "--prime", "7"]));
    assert_eq!(v["verdict"], "CertifiedIrreducible");
    assert_eq!(v["d"], 4);
    let v = json(&run(&["irreducible", "--poly", path(&fixture("example2d.json"))]));
    assert_eq!(v["verdict"], "CertifiedIrreducible");

    let poly = run(&["forward", "--tensor", path(&fixture("olivine.json"))]);
    let out =
        run_stdin(&["irreducible", "--poly", "-", "--prime", "5", "--budget", "0", "--plane-tries", "0"], &poly.stdout);
    assert_eq!(error(&out), (3, "resource".into()));
    let cert: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["verdict"], "Inconclusive");
}

#[test]
fn reconstruct_worked_example() {
    let out = run(&["reconstruct", "--poly", path(&fixture("example2d.json"))]);
    let v = json(&out);
    assert_eq!(v["multiplicity"], "unique");
    let sol = &v["solutions"][0]["voigt"];
    let got: Vec<&str> = ["b11", "b12", "b13", "b22", "b23", "b33"].iter().map(|k| sol[k].as_str().unwrap()).collect();
    assert_eq!(got, ["20/1", "39/1", "-65/1", "-16/1", "-87/1", "30/1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("reconstruct_example2d.json"));
}

#[test]
fn forward_then_reconstruct_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for (k, b) in [[10, 2, 3, 12, 5, 20], [22, 3, 4, 25, 6, 33], [40, -7, 5, 31, 2, 17]].iter().enumerate() {
        let names = ["b11", "b12", "b13", "b22", "b23", "b33"];
        let voigt: serde_json::Map<String, Value> =
            names.iter().zip(b).map(|(n, x)| (n.to_string(), Value::String(x.to_string()))).collect();
        let t = serde_json::json!({"dim": 2, "class": "full2d", "voigt": voigt});
        let tp = dir.path().join(format!("t{k}.json"));
        std::fs::write(&tp, t.to_string()).unwrap();
        let poly = run(&["forward", "--tensor", path(&tp)]);
        let v = json(&run_stdin(&["reconstruct", "--poly", "-"], &poly.stdout));
        assert_eq!(v["multiplicity"], "unique");
        for (n, x) in names.iter().zip(b) {
            assert_eq!(v["solutions"][0]["voigt"][n], format!("{x}/1"));
        }
    }
    // ortho3d coefficients come back as the four companions.
    let poly = run(&["forward", "--tensor", path(&fixture("olivine.json"))]);
    let v = json(&run_stdin(&["reconstruct", "--poly", "-"], &poly.stdout));
    assert_eq!(v["multiplicity"], "four_companions");
    assert!(v["solutions"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s["voigt"]["b12"] == "68/1" && s["voigt"]["b23"] == "77/1"));
}

#[test]
fn companions_and_crosscheck() {
    let v = json(&run(&["companions", "--tensor", path(&fixture("olivine.json")), "--with-groebner-crosscheck"]));
    assert_eq!(v["multiplicity"], "four_companions");
    assert_eq!(v["crosscheck"]["solution_count"], 4);
    assert_eq!(v["crosscheck"]["companions_on_variety"], true);
    let v = json(&run(&["companions", "--tensor", path(&fixture("ref2d.json"))]));
    assert_eq!(v["multiplicity"], "unique");
}

#[test]
fn admissibility() {
    let v = json(&run(&["admissible", "--poly", path(&fixture("example2d.json"))]));
    assert_eq!(v["admissible"], true);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("off.json");
    let mut poly: Value = serde_json::from_str(&std::fs::read_to_string(fixture("example2d.json")).unwrap()).unwrap();
    poly["coeffs"][0] = "-3624".into();
    std::fs::write(&p, poly.to_string()).unwrap();
    assert_eq!(json(&run(&["admissible", "--poly", path(&p)]))["admissible"], false);
    let out = run(&["admissible", "--poly", path(&p), "--output", path(&dir.path().join("o.json"))]);
    assert!(out.status.success() && out.stdout.is_empty());
}

#[test]
fn plot_outputs() {
    let out = run(&["slowness-plot", "--tensor", path(&fixture("ref2d.json")), "--directions", "72"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("plot_ref2d.svg"));

    let out = run(&[
        "slowness-plot",
        "--tensor",
        path(&fixture("ref2d.json")),
        "--directions",
        "8",
        "--format",
        "csv",
        "--velocities",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next().unwrap(), "direction,branch,p_x,p_y,v_x,v_y");
    assert_eq!(text.lines().count(), 17);
    let v = json(&run(&[
        "slowness-plot",
        "--tensor",
        path(&fixture("ref2d.json")),
        "--directions",
        "8",
        "--format",
        "json",
    ]));
    assert_eq!(v.as_array().unwrap().len(), 16);
    assert!(v[0].get("velocity").is_none());
}

#[test]
fn fit_from_tensor_and_from_csv() {
    let v = json(&run(&[
        "fit",
        "--tensor",
        path(&fixture("ref2d.json")),
        "--branch",
        "1",
        "--center",
        "17",
        "--aperture",
        "40",
        "--count",
        "12",
    ]));
    assert_eq!(v["poly"]["coeffs"], json(&run(&["forward", "--tensor", path(&fixture("ref2d.json"))]))["coeffs"]);
    assert_eq!(v["reconstruction"]["multiplicity"], "unique");

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let out = run(&[
        "slowness-plot",
        "--tensor",
        path(&fixture("ref2d.json")),
        "--directions",
        "30",
        "--format",
        "csv",
        "-o",
        path(&csv),
    ]);
    assert!(out.status.success());
    let v = json(&run(&["fit", "--samples", path(&csv), "--branch", "2"]));
    assert_eq!(v["samples"], 30);
    assert_eq!(v["poly"]["coeffs"][0], "191/1");
    assert_eq!(error(&run(&["fit", "--samples", path(&csv)])), (1, "domain".into()));
}

#[test]
fn error_kinds_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(error(&run(&["forward", "--tensor", path(&dir.path().join("missing.json"))])), (2, "io".into()));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(error(&run(&["forward", "--tensor", path(&bad)])), (2, "format".into()));
    std::fs::write(&bad, r#"{"dim": 2, "class": "full2d", "voigt": {"b11": "1"}, "extra": 1}"#).unwrap();
    assert_eq!(error(&run(&["forward", "--tensor", path(&bad)])), (2, "format".into()));
    // Not positive: b12² > b11 b22.
    std::fs::write(&bad, r#"{"dim": 2, "class": "full2d", "voigt": {"b11": "1", "b12": "5", "b13": "0", "b22": "1", "b23": "0", "b33": "1"}}"#)
        .unwrap();
    assert_eq!(error(&run(&["slowness-plot", "--tensor", path(&bad)])), (1, "domain".into()));
    assert_eq!(error(&run(&["forward", "--tensor", path(&fixture("ref2d.json")), "--unknown"])), (2, "usage".into()));
    assert_eq!(error(&run(&["admissible", "--poly", path(&fixture("ref2d.json"))])), (2, "format".into()));
    assert!(run(&["--help"]).status.success());
}

#[test]
fn two_layer_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.jsonl");
    let model = fixture("model.json");
    let out = run(&["twolayer-simulate", "--model", path(&model), "--threads", "1", "-o", path(&data)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let again = run(&["twolayer-simulate", "--model", path(&model)]);
    assert_eq!(std::fs::read(&data).unwrap(), again.stdout);

    let mask = dir.path().join("m.pgm");
    let v = json(&run(&["twolayer-recover", "--data", path(&data), "--mask", path(&mask)]));
    let m: Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    assert_eq!(v["A"]["voigt"]["b11"], "10/1");
    assert_eq!(v["a"]["voigt"]["b33"], "33/1");
    let r = v["interface"]["raster_circle"]["radius"].as_f64().unwrap();
    assert!((r - m["inner"]["radius"].as_f64().unwrap()).abs() < 2.0 * v["interface"]["cell"].as_f64().unwrap());
    assert!(std::fs::read_to_string(&mask).unwrap().starts_with("P2\n512 512\n1\n"));

    // Too few boundary points for the near-tangent speeds.
    let sparse = run(&["twolayer-simulate", "--model", path(&model), "--boundary-points", "40", "--traveltimes-only"]);
    let out = run_stdin(&["twolayer-recover", "--data", "-"], &sparse.stdout);
    assert_eq!(error(&out), (1, "domain".into()));
    let csv = run(&["twolayer-simulate", "--model", path(&model), "--boundary-points", "12", "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("t,x_1,x_2,y_1,y_2,p_1,p_2,q_1,q_2\n"));
    assert_eq!(text.lines().count(), 1 + 12 * 11);
}
