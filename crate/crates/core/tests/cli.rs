use std::process::Command;

use serde_json::Value;
use speciallocus::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["speciallocus", "--no-cache"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = call(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn documented_examples() {
    let v = json(&["classgroup", "-23"]);
    assert_eq!(v["h"], 3);
    assert_eq!(v["structure"], serde_json::json!([3]));
    let v = json(&["label", "1", "2", "3"]);
    assert_eq!(v["pairwise"], serde_json::json!([[1, 2, 3], [2, 1, 6], [3, 6, 1]]));
    let v = json(&["group", "minindex", "11", "12"]);
    assert_eq!((v["index"].as_u64(), v["witness_order"].as_u64()), (Some(11), Some(60)));
    assert_eq!(json(&["split", "2", "-23"])["split"], true);
}

#[test]
fn big_integers_are_strings() {
    let v = json(&["hilbert", "-23"]);
    assert_eq!(v["degree"], 3);
    assert_eq!(v["coeffs"][3], "12771880859375");
    let v = json(&["modpoly", "2"]);
    let terms = v["terms"].as_array().unwrap();
    assert!(terms.iter().all(|t| t[0].as_u64() >= t[1].as_u64() && t[2].is_string()));
    assert!(terms.contains(&serde_json::json!([0, 0, "-157464000000000"])));
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["bogus"]).0, 64);
    assert_eq!(call(&[]).0, 64);
    let (code, out, err) = call(&["classgroup", "-22"]);
    assert_eq!((code, out.as_str()), (1, ""));
    assert!(err.contains("discriminant"));
    assert_eq!(call(&["inclusion", "-4", "3"]).0, 1);
    assert_eq!(call(&["group", "normal", "49"]).0, 2);
    assert_eq!(call(&["modpoly", "25"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn density_is_csv() {
    let (code, out, _) = call(&["density", "2", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "step,points,covered,fraction,skipped");
    assert_eq!(lines.len(), 5);
}

#[test]
fn deterministic_output() {
    for args in [&["group", "goursat", "5", "--seed", "4"][..], &["descent", "3", "2", "2", "1000"], &["orbit", "-15"]] {
        assert_eq!(call(args), call(args));
    }
}

#[test]
fn chow_commands_round_trip_json() {
    let z = r#"{"n":2,"codim":1,"terms":[{"I":[1],"a":"2"},{"I":[2],"a":"3"}]}"#;
    let sq = json(&["chow", "mul", z, z]);
    assert_eq!(sq["terms"][0]["a"], "12");
    assert_eq!(json(&["chow", "degree", z])["degree"], "5");
    let h = json(&["chow", "bound", z, "2"]);
    assert_eq!(h["codim"], 1);
}

#[test]
fn binary_uses_the_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_speciallocus");
    let run = || {
        Command::new(bin)
            .args(["modpoly", "3"])
            .env("SPECIALLOCUS_CACHE", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    let cached = std::fs::read_to_string(dir.path().join("phi_3.txt")).unwrap();
    assert!(cached.starts_with("format=1\n"));
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    let bad = Command::new(bin).arg("nonsense").output().unwrap();
    assert_eq!(bad.status.code(), Some(64));
}
