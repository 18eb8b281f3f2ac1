use racklab::families::{dihedral_quandle, permutation_rack, trivial_rack};
use racklab::text::format_rack;
use racklab::Perm;
use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn racklab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_racklab"))
        .args(args)
        .env_remove("RACKLAB_THREADS")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "t.rack", &format_rack(&trivial_rack(3)));
    assert_eq!(racklab(&["check", s(&good)]).status.code(), Some(0));

    let bad = write(dir.path(), "bad.rack", "2\n0 1\n1 0\n");
    let out = racklab(&["--format", "json", "check", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["is_rack"], false);
    assert_eq!(v["violations"].as_array().unwrap().len(), 2);

    let garbage = write(dir.path(), "g.rack", "2\n0 x\n1 0\n");
    assert_eq!(racklab(&["check", s(&garbage)]).status.code(), Some(2));
    assert_eq!(
        racklab(&["check", s(&dir.path().join("missing"))])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn enumerate_codes_and_output() {
    let out = racklab(&["--format", "json", "enumerate", "--n", "3", "--oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["labeled"], 13);
    assert_eq!(v["classes"], 6);
    assert_eq!(v["oracle_agrees"], true);
    assert_eq!(
        out.stdout,
        racklab(&["--format", "json", "enumerate", "--n", "3", "--oracle"]).stdout
    );
    assert_eq!(racklab(&["enumerate", "--n", "9"]).status.code(), Some(3));
    assert_eq!(racklab(&["enumerate", "--n", "0"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let wit = dir.path().join("w");
    assert_eq!(
        racklab(&["--out", s(&wit), "enumerate", "--n", "3"])
            .status
            .code(),
        Some(0)
    );
    let files = std::fs::read_dir(&wit).unwrap().filter(|e| {
        e.as_ref()
            .unwrap()
            .path()
            .extension()
            .is_some_and(|x| x == "rack")
    });
    assert_eq!(files.count(), 6);
}

#[test]
fn encode_decode_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let text = format_rack(&dihedral_quandle(5));
    let src = write(dir.path(), "d5.rack", &text);
    assert_eq!(racklab(&["encode", s(&src)]).status.code(), Some(0));
    let enc = dir.path().join("d5.rke");
    assert!(enc.exists());
    let back = dir.path().join("back.rack");
    assert_eq!(
        racklab(&["--out", s(&back), "decode", s(&enc)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(std::fs::read_to_string(&back).unwrap(), text);

    let stdout = racklab(&["decode", s(&enc)]);
    assert_eq!(String::from_utf8(stdout.stdout).unwrap(), text);

    let bytes = std::fs::read(&enc).unwrap();
    let cut = write(dir.path(), "cut.rke", "");
    std::fs::write(&cut, &bytes[..bytes.len() - 1]).unwrap();
    assert_eq!(racklab(&["decode", s(&cut)]).status.code(), Some(2));
    assert_eq!(
        racklab(&["encode", s(&src), "--delta", "9"]).status.code(),
        Some(2)
    );
}

#[test]
fn conformance_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let src = write(dir.path(), "t3.rack", &format_rack(&trivial_rack(3)));
    for threads in ["1", "4"] {
        assert_eq!(
            racklab(&["--threads", threads, "encode", s(&src)])
                .status
                .code(),
            Some(0)
        );
        let bytes = std::fs::read(dir.path().join("t3.rke")).unwrap();
        assert_eq!(
            bytes,
            [0x52, 0x4B, 0x45, 0x31, 0, 3, 0, 2, 0, 2, 0xF0, 0xE1, 0xC3, 0x84, 0, 0]
        );
    }
}

#[test]
fn stats_extremes() {
    let dir = tempfile::tempdir().unwrap();
    let triv = write(dir.path(), "t8.rack", &format_rack(&trivial_rack(8)));
    let v = json(&racklab(&["--format", "json", "stats", s(&triv)]));
    assert_eq!(v["zeta"].as_f64(), Some(0.0));
    assert_eq!(v["cp"], 8);

    let sigma = Perm::from_cycles(8, &[&[0, 1], &[2, 3], &[4, 5], &[6, 7]]).unwrap();
    let pairs = write(
        dir.path(),
        "p8.rack",
        &format_rack(&permutation_rack(&sigma)),
    );
    let dot = dir.path().join("g.dot");
    let out = racklab(&[
        "--format",
        "json",
        "stats",
        s(&pairs),
        "--delta",
        "1",
        "--cap-l",
        "1",
        "--dot",
        s(&dot),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["zeta"].as_f64().unwrap() - 16.0).abs() < 1e-9);
    assert_eq!(v["bound"].as_f64(), Some(16.0));
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .starts_with("digraph"));
}

#[test]
fn audit_and_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let d = write(dir.path(), "d6.rack", &format_rack(&dihedral_quandle(6)));
    let out = racklab(&["--format", "json", "audit", s(&d)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["pass"], true);

    let out = racklab(&["--format", "json", "analyze", "zeta-sweep", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["statistic"].as_f64(), Some(9.0));

    let out = racklab(&[
        "--format", "json", "analyze", "chernoff", "--trials", "5000", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["seed"], 7);
    assert_eq!(
        racklab(&["analyze", "chernoff", "--p", "1.5"])
            .status
            .code(),
        Some(2)
    );
}
