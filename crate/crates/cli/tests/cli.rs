use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};

fn gtorsion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gtorsion"))
        .args(args)
        .env_remove("GTORSION_COSET_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

const TREFOIL: &str = r#"{"crossings":[{"over":2,"in":0,"out":1,"sign":1},{"over":0,"in":1,"out":2,"sign":1},
    {"over":1,"in":2,"out":0,"sign":1}],"traversal":[0,1,2],"base_overarc":0}"#;

#[test]
fn build_then_verify_figure_eight() {
    let built = gtorsion(&["build", "genus1", "--p", "1", "--q", "1", "--slope", "1/1"]);
    assert_eq!(code(&built), 0);
    let cert = scratch("fig8.json", std::str::from_utf8(&built.stdout).unwrap());
    let v = gtorsion(&["verify", arg(&cert), "--cap", "1000"]);
    assert_eq!(code(&v), 0, "{}", String::from_utf8_lossy(&v.stderr));
    let r = report(&v);
    assert_eq!(r["verdict"], "accepted");
    assert_eq!(r["kind"], "torsion");
    assert_eq!(r["coset"], json!({"status": "overflow", "cap": 1000}));
    assert_eq!(r["h1"]["factors"], json!([]));
    assert!(r["quotient_checks"].as_u64().unwrap() >= 1);
}

#[test]
fn tampered_proof_is_rejected_with_step() {
    let built = gtorsion(&["build", "genus1", "--p", "1", "--q", "1", "--slope", "2"]);
    let mut cert = report(&built);
    let exp = cert["proof"]["moves"][1]["exp"].as_i64().unwrap();
    cert["proof"]["moves"][1]["exp"] = json!(-exp);
    let path = scratch("tampered.json", &cert.to_string());
    let v = gtorsion(&["verify", arg(&path), "--cap", "100"]);
    assert_eq!(code(&v), 1);
    let r = report(&v);
    assert_eq!(r["verdict"], "rejected");
    assert!(r["failed_step"].is_u64());
    assert!(r.get("coset").is_none());
}

#[test]
fn replay_overflow_exits_3() {
    let built = gtorsion(&["build", "torus", "--p", "2", "--q", "5"]);
    let path = scratch("torus25.json", std::str::from_utf8(&built.stdout).unwrap());
    let v = gtorsion(&["verify", arg(&path), "--max-length", "3"]);
    assert_eq!(code(&v), 3);
    assert_eq!(report(&v)["verdict"], "overflow");
}

#[test]
fn enumerate_flagship_and_overflow() {
    let o = gtorsion(&["enumerate", "--family", "torus", "--p", "2", "--q", "3", "--slope", "1/1", "--cap", "1000"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o), json!({"status": "complete", "index": 120}));
    let o = gtorsion(&["enumerate", "--family", "genus1", "--p", "1", "--q", "1", "--slope", "1", "--cap", "1000"]);
    assert_eq!(code(&o), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_gtorsion"))
        .args(["enumerate", "--family", "torus", "--p", "2", "--q", "3", "--slope", "1"])
        .env("GTORSION_COSET_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert_eq!(report(&o)["cap"], 50);
}

#[test]
fn input_errors_exit_2() {
    for slope in ["inf", "4/2", "1/-2", "x"] {
        let o = gtorsion(&["build", "genus1", "--p", "1", "--q", "1", "--slope", slope]);
        assert_eq!(code(&o), 2, "{slope}");
    }
    let o = gtorsion(&["build", "genus1", "--p", "1", "--q", "1", "--slope", "inf"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("trivial"));
    assert_eq!(code(&gtorsion(&["verify", "/nonexistent/cert.json"])), 2);
    assert_eq!(code(&gtorsion(&["build", "torus", "--p", "2", "--q", "4"])), 2);
    assert_eq!(code(&gtorsion(&["abelianize", "--family", "cable", "--p", "2", "--q", "3"])), 2);
}

#[test]
fn out_of_range_slopes_are_rejected() {
    let o = gtorsion(&["build", "genus1", "--p", "1", "--q", "1", "--slope", "0"]);
    assert_eq!(code(&o), 1);
    let o = gtorsion(&["build", "genus1", "--p", "1", "--q", "1", "--slope", "1", "--case", "2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(report(&o)["status"], "rejected");
    let d = scratch("trefoil.json", TREFOIL);
    assert_eq!(code(&gtorsion(&["build", "diagram", arg(&d), "--slope", "2"])), 1);
}

#[test]
fn diagram_and_disk_builds() {
    let d = scratch("trefoil-d.json", TREFOIL);
    let o = gtorsion(&["build", "diagram", arg(&d), "--slope", "7/2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["conjugators"].as_array().unwrap().len(), 7);

    let abel = gtorsion(&["abelianize", "--family", "diagram", "--diagram", arg(&d)]);
    assert_eq!(report(&abel), json!({"factors": [0], "free_rank": 1}));

    let knot = gtorsion(&["build", "genus1", "--p", "1", "--q", "1", "--slope", "1"]);
    let presentation = &report(&knot)["presentation"];
    let mut knot_json = presentation.clone();
    // drop the filling relator to get back the knot group
    knot_json["relators"].as_array_mut().unwrap().pop();
    knot_json["provenance"] = json!({"kind": "custom"});
    let kp = scratch("fig8-knot.json", &knot_json.to_string());
    let o = gtorsion(&["build", "disk", arg(&kp), "--p-count", "2", "--slope", "5/2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let cert = scratch("disk.json", std::str::from_utf8(&o.stdout).unwrap());
    let v = gtorsion(&["verify", arg(&cert), "--cap", "200", "--quotient-degree", "3"]);
    assert_eq!(code(&v), 0);
    assert_eq!(report(&v)["claimed_order"], 5);
}

#[test]
fn classify_and_alexander() {
    let o = gtorsion(&["classify", "--family", "cable", "--p", "2", "--q", "3", "--slope", "-5/2"]);
    assert_eq!(report(&o)["entries"][0]["applies"], true);
    let o = gtorsion(&["classify", "--family", "montesinos", "--tangles", "2,-2,2;2,1", "--slope", "3"]);
    assert_eq!(report(&o)["entries"][0]["applies"], false);
    let o = gtorsion(&["alexander", "--p", "2", "--q", "3"]);
    assert_eq!(report(&o)["coefficients"], json!([-6, 11, -6]));
}

#[test]
fn reports_are_deterministic() {
    let built = gtorsion(&["build", "torus", "--p", "3", "--q", "4", "--slope", "5"]);
    let path = scratch("torus34.json", std::str::from_utf8(&built.stdout).unwrap());
    let args = ["verify", arg(&path), "--quotient-degree", "6", "--seed", "7", "--cap", "2000"];
    let a = gtorsion(&args);
    let b = gtorsion(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn batch_round_trip_grid() {
    let mut entries = Vec::new();
    for family in [json!({"family": "torus", "p": 2, "q": 3}), json!({"family": "genus1", "p": 1, "q": 1}), json!({"family": "genus1", "p": 2, "q": -1})] {
        for slope in ["1", "-1", "3/2", "-3/2", "5", "7/3"] {
            let mut e = family.clone();
            e["slope"] = json!(slope);
            entries.push(e);
        }
    }
    let buildable = json!([{"family": "torus", "p": 2, "q": 5, "slope": "7/2"}, {"family": "genus1", "p": 1, "q": 1, "slope": "2"}]);
    let path = scratch("manifest.json", &buildable.to_string());
    let o = gtorsion(&["batch", arg(&path), "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(report(&o)["accepted"], 2);

    let path = scratch("grid.json", &Value::Array(entries.clone()).to_string());
    let a = gtorsion(&["batch", arg(&path), "--jobs", "4"]);
    let b = gtorsion(&["batch", arg(&path), "--jobs", "1"]);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    let rows = r["entries"].as_array().unwrap();
    assert_eq!(rows.len(), entries.len());
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row["index"], i);
        assert!(row["status"] == "accepted" || row["status"] == "not_constructible", "{row}");
    }
    assert!(r["accepted"].as_u64().unwrap() > 6);
}
