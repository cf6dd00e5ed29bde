use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn drinfeld(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_drinfeld")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn body(path: &Path) -> Value {
    let mut v: Value = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    v.as_object_mut().unwrap().remove("timing");
    v
}

#[test]
fn verify_rational_field_passes() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let (code, out, _) = drinfeld(&["verify", "--q", "2", "--modulus", "t", "--prec", "30", "--no-cache", "--json", json.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("conjecture: consistent to O(t^-30)"));
    let v = body(&json);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["class_number"], "1");
    let z = &v["zeta"]["value"];
    assert_eq!(z["lowest_exponent"], 0);
    assert_eq!(z["precision"], 31);
    assert!(z["coefficients"].is_array());
}

#[test]
fn cached_and_uncached_reports_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    let paths: Vec<_> = (0..3).map(|i| dir.path().join(format!("{i}.json"))).collect();
    let base = ["verify", "--q", "2", "--modulus", "t^2+t+1", "--prec", "20"];
    let run = |extra: &[&str], p: &Path| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        args.extend_from_slice(&["--json", p.to_str().unwrap()]);
        drinfeld(&args)
    };
    assert_eq!(run(&["--cache-dir", c], &paths[0]).0, 0);
    let (code, _, err) = run(&["--cache-dir", c], &paths[1]);
    assert_eq!(code, 0);
    assert!(err.contains("cache: lattice loaded"), "{err}");
    assert_eq!(run(&["--no-cache"], &paths[2]).0, 0);
    let bodies: Vec<Value> = paths.iter().map(|p| body(p)).collect();
    assert_eq!(bodies[0], bodies[1]);
    assert_eq!(bodies[0], bodies[2]);

    // corrupt every entry: the next run discards them and recomputes
    for e in std::fs::read_dir(&cache).unwrap() {
        let p = e.unwrap().path();
        let text = std::fs::read_to_string(&p).unwrap();
        std::fs::write(&p, text.replacen("\"digest\":\"", "\"digest\":\"0", 1)).unwrap();
    }
    let (code, _, err) = run(&["--cache-dir", c], &paths[1]);
    assert_eq!(code, 0);
    assert!(err.contains("discarded"), "{err}");
    assert_eq!(body(&paths[1]), bodies[0]);
}

#[test]
fn subcommands_report() {
    let (code, out, _) = drinfeld(&["units", "--q", "3", "--min-poly", "x^2 + t", "--no-cache"]);
    assert_eq!(code, 0);
    assert!(out.contains("U_R: rank 1 = 2 - 1"), "{out}");
    let (code, out, _) = drinfeld(&["classmodule", "--q", "2", "--modulus", "t^3+t+1", "--no-cache"]);
    assert_eq!(code, 0);
    assert!(out.contains("|H_R| = 1"));
    let (code, out, _) = drinfeld(&["zeta", "--q", "2", "--modulus", "t", "--prec", "5", "--no-cache"]);
    assert_eq!(code, 0);
    assert!(out.contains("zeta_R(1) = 1 + t^-2 + t^-3 + t^-4 + t^-5 + O(t^-6)"), "{out}");
}

#[test]
fn failures_exit_with_two() {
    assert_eq!(drinfeld(&["verify", "--q", "2", "--modulus", "t^2+1", "--no-cache"]).0, 2);
    assert_eq!(drinfeld(&["verify", "--q", "6", "--modulus", "t", "--no-cache"]).0, 2);
    assert_eq!(drinfeld(&["verify", "--q", "2"]).0, 2);
    assert_eq!(drinfeld(&["zeta", "--q", "2", "--modulus", "t", "--min-poly", "x + t"]).0, 2);
}
