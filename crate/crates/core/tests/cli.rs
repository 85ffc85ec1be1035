//! End-to-end runs of the command-line binary.

use std::path::Path;
use std::process::{Command, Output};

use pqbench::bench::{ReportView, CSV_HEADER};

const BIN: &str = env!("CARGO_BIN_EXE_pqbench");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("PQBENCH_CLOCK_GHZ").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn kat_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/kat").join(name).display().to_string()
}

#[test]
fn sizes_lists_every_parameter_set() {
    let o = run(&["sizes"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).lines().collect::<Vec<_>>(),
        [
            "kyber512 sk=1632 pk=800 ct=768",
            "kyber768 sk=2400 pk=1184 ct=1088",
            "kyber1024 sk=3168 pk=1568 ct=1568",
            "dilithium2 pk=1312 sig=2420 sk=2528",
            "dilithium3 pk=1952 sig=3293 sk=4000",
            "dilithium5 pk=2592 sig=4595 sk=4864",
        ]
    );
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["bench", "--alg", "nosuch"][..],
        &["bench", "--iters", "0"],
        &["bench", "--clock-ghz", "0"],
        &["bench", "--alg", "kyber", "--levels", "3"],
        &["kat", "--scheme", "kyber512", "--file", "/nonexistent/x.rsp"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn bench_single_iteration_csv() {
    let o = run(&["bench", "--alg", "dilithium2", "--iters", "1", "--warmup", "0", "--gate-seeds", "2", "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.headers().unwrap().iter().collect::<Vec<_>>(), CSV_HEADER);
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    let backends = if pqbench::Backend::Accelerated.is_available() { 2 } else { 1 };
    assert_eq!(rows.len(), 4 * backends);
    for row in &rows {
        assert_eq!((&row[0], &row[1], &row[4]), ("dilithium", "2", "1"));
    }
    let ops: Vec<&str> = rows.iter().take(4).map(|r| r.get(3).unwrap()).collect();
    assert_eq!(ops, ["gen", "sign", "verify", "total"]);
}

#[test]
fn bench_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&[
        "bench", "--alg", "kyber", "--levels", "768", "--backend", "reference", "--iters", "5", "--warmup", "1",
        "--format", "json", "--out", out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let views: Vec<ReportView> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(views.len(), 1);
    let v = &views[0];
    assert_eq!((v.label.as_str(), v.backend.as_str(), v.security_bits), ("Kyber-768", "reference", 192));
    assert!(v.ops.iter().all(|op| op.iterations == 5));
    let sum: f64 = v.ops.iter().map(|op| op.median_ms).sum();
    assert!((v.total_ms.unwrap() - sum).abs() <= 1e-12 * sum);
}

#[test]
fn kat_replay_passes_and_is_stable() {
    let file = kat_path("kyber512.rsp");
    let a = run(&["kat", "--scheme", "kyber512", "--file", &file]);
    let b = run(&["kat", "--scheme", "kyber512", "--file", &file]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("100/100"));
}

#[test]
fn kat_empty_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.rsp");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let o = run(&["kat", "--scheme", "dilithium2", "--file", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn kat_mismatch_names_record_and_field() {
    let text = std::fs::read_to_string(kat_path("kyber512.rsp")).unwrap();
    let mut seen = 0;
    let corrupted: Vec<String> = text
        .lines()
        .map(|l| {
            if l.starts_with("ct = ") {
                seen += 1;
                if seen == 6 {
                    let (head, last) = l.split_at(l.len() - 1);
                    return format!("{head}{}", if last == "0" { "1" } else { "0" });
                }
            }
            l.to_owned()
        })
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.rsp");
    std::fs::write(&bad, corrupted.join("\n")).unwrap();
    let o = run(&["kat", "--scheme", "kyber512", "--file", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report = stdout(&o) + &String::from_utf8_lossy(&o.stderr);
    assert!(report.contains("record 5") && report.contains("field ct"), "{report}");
}

#[test]
fn compare_without_provider() {
    let o = run(&["compare", "--no-provider", "--iters", "2", "--warmup", "0", "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<csv::StringRecord> = csv::Reader::from_reader(text.as_bytes()).records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 14);
    let measured = rows.iter().filter(|r| &r[2] == "reference").count();
    let missing = rows.iter().filter(|r| &r[2] == "unavailable").count();
    assert_eq!((measured, missing), (6, 8));
    assert!(rows.iter().all(|r| &r[3] == "total"));

    let text = stdout(&run(&["compare", "--no-provider", "--iters", "2", "--warmup", "0"]));
    assert_eq!(text.matches("unavailable").count(), 8);
    assert!(text.contains("ECDSA(P-512)*"));
}
