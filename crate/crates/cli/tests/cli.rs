use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_boxplus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn semicircle_snapshot() {
    let v = json(&run(&["snapshot", "--law", "semicircle", "--t", "4"]));
    let ac = &v["ac"][0];
    assert!((ac[0].as_f64().unwrap() + 4.0).abs() < 1e-3);
    assert!((ac[1].as_f64().unwrap() - 4.0).abs() < 1e-3);
    assert_eq!(v["atoms"].as_array().unwrap().len(), 0);
}

#[test]
fn bernoulli_atoms() {
    let v = json(&run(&["snapshot", "--law", "bernoulli", "--t", "1.5"]));
    let atoms = v["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 2);
    for a in atoms {
        assert_eq!(a["x"].as_f64().unwrap().abs(), 1.5);
        assert_eq!(a["m"].as_f64().unwrap(), 0.25);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["snapshot", "--law", "bernoulli", "--t", "1.0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "scan",
            "--law",
            "semicircle",
            "--t",
            "1.5:2.5",
            "--steps",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["snapshot", "--law", "cauchy", "--t", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["snapshot", "--t", "2"]).status.code(), Some(2));
    let bad = run(&["verify", "--file", &fixture("bad_mass.json")]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("MassNotOne"));
}

#[test]
fn renormalize_rescues_bad_mass() {
    let v = json(&run(&[
        "snapshot",
        "--file",
        &fixture("bad_mass.json"),
        "--renormalize",
        "--t",
        "3",
    ]));
    assert!(!v["ac"].as_array().unwrap().is_empty());
}

#[test]
fn semicircle_scan_matches_closed_form() {
    let out = run(&[
        "scan",
        "--law",
        "semicircle",
        "--t",
        "1.5:2.5",
        "--steps",
        "11",
        "--grid-n",
        "512",
        "--samples-n",
        "65",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,r,d_h,flags"));
    let mut rows = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let (t, r, d): (f64, f64, f64) = (
            f[0].parse().unwrap(),
            f[1].parse().unwrap(),
            f[2].parse().unwrap(),
        );
        assert!((d - 2.0 * (r.sqrt() - t.sqrt())).abs() < 1e-3, "{line}");
        rows += 1;
    }
    assert_eq!(rows, 10);
}

#[test]
fn verify_mixed_spec() {
    let out = run(&["verify", "--file", &fixture("atom_uniform.json")]);
    let v = json(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    let names: Vec<&str> = v["properties"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["name"].as_str().unwrap())
        .collect();
    for want in [
        "mass_conserved",
        "mean_scales_by_t",
        "h_t_lipschitz_2",
        "v_plus_increasing_in_t",
    ] {
        assert!(names.contains(&want), "{want}");
    }
}

#[test]
fn files_are_deterministic_and_comparable() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).display().to_string();
    let args = |out: &str, t: &str| {
        vec![
            "snapshot".to_string(),
            "--file".into(),
            fixture("two_atoms_triangle.json"),
            "--t".into(),
            t.into(),
            "--out".into(),
            out.to_string(),
        ]
    };
    for (name, t) in [("a.json", "1.5"), ("b.json", "1.5"), ("c.json", "1.6")] {
        let a = args(&path(name), t);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert!(run(&a).status.success());
    }
    let a = std::fs::read(path("a.json")).unwrap();
    assert_eq!(a, std::fs::read(path("b.json")).unwrap());

    let same = json(&run(&["hausdorff", &path("a.json"), &path("b.json")]));
    assert_eq!(same["d_h"].as_f64().unwrap(), 0.0);
    let moved = json(&run(&["hausdorff", &path("a.json"), &path("c.json")]));
    let d = moved["d_h"].as_f64().unwrap();
    assert!(d > 0.0 && d < 0.5, "{d}");
}

#[test]
fn failed_run_leaves_no_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.json");
    let status = run(&[
        "snapshot",
        "--law",
        "semicircle",
        "--t",
        "0.5",
        "--out",
        &out.display().to_string(),
    ])
    .status;
    assert_eq!(status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn density_csv() {
    let out = run(&[
        "density",
        "--law",
        "bernoulli",
        "--t",
        "3",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("u,p\n"));
    assert!(text.lines().count() > 100);
}
