//! End-to-end tests driving the compiled binary.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ramesses"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const SEED_A: &str = "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f";
const SEED_B: &str = "ffeeddccbbaa99887766554433221100ffeeddccbbaa99887766554433221100";

#[test]
fn estimate_preset_l1_reports_the_published_row() {
    let out = run(&["estimate", "--preset", "L1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("t=5"), "{text}");
    assert!(text.contains("public key 256 B"));
    assert!(text.contains("private key 152 B"));
    assert!(text.contains("2^-40"));
    assert!(text.contains("classical_bits=141"));
    assert!(text.contains("claimed_quantum_bits=126"));
    assert!(text.contains("validation=pass"));
}

#[test]
fn params_rejects_the_half_distance_boundary() {
    // w = 16 has delta = 0: decodable, therefore invalid
    let out = run(&["params", "--n", "64", "--k", "32", "--w", "16", "--l", "3"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("validation failure"));
    // the derivable facts are still printed
    assert!(stdout(&out).contains("t=6"));
}

#[test]
fn params_preset_pke128() {
    let out = run(&["params", "--preset", "PKE128"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("public key 984 B"));
    assert!(text.contains("2^-128"));
}

#[test]
fn usage_errors_exit_one() {
    let out = run(&["params"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["params", "--preset", "L9"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["keygen", "--preset", "L1", "--pk", "/tmp/x", "--sk", "/tmp/y", "--seed", "zz"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("failure-sim"));
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn lifecycle_round_trip_is_byte_exact() {
    let dir = tempfile::tempdir().unwrap();
    let pk = dir.path().join("l1.pk");
    let sk = dir.path().join("l1.sk");
    let pt = dir.path().join("msg.pt");
    let ct = dir.path().join("msg.ct");
    let back = dir.path().join("back.pt");

    let out = run(&[
        "keygen", "--preset", "L1",
        "--seed", SEED_A,
        "--pk", path_str(&pk),
        "--sk", path_str(&sk),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = run(&[
        "sample-plaintext", "--preset", "L1",
        "--seed", SEED_B,
        "--out", path_str(&pt),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = run(&[
        "encrypt",
        "--pk", path_str(&pk),
        "--in", path_str(&pt),
        "--out", path_str(&ct),
        "--seed", SEED_B,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = run(&[
        "decrypt",
        "--sk", path_str(&sk),
        "--in", path_str(&ct),
        "--out", path_str(&back),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let original = std::fs::read(&pt).unwrap();
    let recovered = std::fs::read(&back).unwrap();
    assert_eq!(original, recovered, "plaintext must round-trip byte-for-byte");
}

#[test]
fn same_seed_gives_identical_key_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for tag in ["a", "b"] {
        let pk = dir.path().join(format!("{tag}.pk"));
        let sk = dir.path().join(format!("{tag}.sk"));
        let out = run(&[
            "keygen", "--n", "20", "--k", "8", "--w", "5", "--l", "1",
            "--seed", SEED_A,
            "--pk", path_str(&pk),
            "--sk", path_str(&sk),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        files.push((std::fs::read(&pk).unwrap(), std::fs::read(&sk).unwrap()));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn decrypt_with_the_wrong_key_never_crashes() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["pk1", "sk1", "pk2", "sk2", "pt", "ct", "out"]
        .iter()
        .map(|s| dir.path().join(s))
        .collect();
    let args = [
        ("--pk", 0usize, "--sk", 1usize, SEED_A),
        ("--pk", 2, "--sk", 3, SEED_B),
    ];
    for (pkf, pki, skf, ski, seed) in args {
        let out = run(&[
            "keygen", "--n", "20", "--k", "8", "--w", "5", "--l", "1",
            "--seed", seed,
            pkf, path_str(&paths[pki]),
            skf, path_str(&paths[ski]),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let out = run(&[
        "sample-plaintext", "--n", "20", "--k", "8", "--w", "5", "--l", "1",
        "--seed", SEED_A, "--out", path_str(&paths[4]),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "encrypt", "--pk", path_str(&paths[0]),
        "--in", path_str(&paths[4]), "--out", path_str(&paths[5]),
        "--seed", SEED_B,
    ]);
    assert!(out.status.success());

    // decrypting with the unrelated key: failure (3) or a wrong plaintext
    // (0), but never a crash or format error
    let out = run(&[
        "decrypt", "--sk", path_str(&paths[3]),
        "--in", path_str(&paths[5]), "--out", path_str(&paths[6]),
    ]);
    match out.status.code() {
        Some(0) => {
            let wrong = std::fs::read(&paths[6]).unwrap();
            let original = std::fs::read(&paths[4]).unwrap();
            assert_ne!(wrong, original, "wrong key must not recover the plaintext");
        }
        Some(3) => {}
        other => panic!("unexpected exit {other:?}: {}", stderr(&out)),
    }
}

#[test]
fn format_errors_are_distinct_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk");
    std::fs::write(&junk, b"not an RMS1 file at all").unwrap();
    let out_path = dir.path().join("out");
    let out = run(&[
        "decrypt", "--sk", path_str(&junk),
        "--in", path_str(&junk), "--out", path_str(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("format error"));

    // key/ciphertext parameter mismatch is also a format-level diagnostic
    let pk = dir.path().join("pk");
    let sk = dir.path().join("sk");
    let out = run(&[
        "keygen", "--n", "20", "--k", "8", "--w", "5", "--l", "1",
        "--seed", SEED_A, "--pk", path_str(&pk), "--sk", path_str(&sk),
    ]);
    assert!(out.status.success());
    let pt = dir.path().join("pt");
    let ct = dir.path().join("ct");
    let out = run(&[
        "sample-plaintext", "--n", "21", "--k", "8", "--w", "5", "--l", "1",
        "--seed", SEED_A, "--out", path_str(&pt),
    ]);
    assert!(out.status.success());
    let out = run(&[
        "encrypt", "--pk", path_str(&pk),
        "--in", path_str(&pt), "--out", path_str(&ct), "--seed", SEED_A,
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("different parameters"));
}

#[test]
fn failure_sim_reports_and_confirms_the_lemma() {
    let out = run(&[
        "failure-sim", "--n", "16", "--k", "6", "--w", "5", "--l", "1",
        "--trials", "3000", "--seed", SEED_A,
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("trials=3000"));
    assert!(text.contains("bound_exponent=9"));
    assert!(text.contains("lemma_holds=true"));
    assert!(text.contains(&format!("seed={SEED_A}")));
}

#[test]
fn failure_sim_rejects_rankless_parameter_sets() {
    let out = run(&[
        "failure-sim", "--n", "16", "--k", "10", "--w", "5", "--l", "1",
        "--trials", "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
