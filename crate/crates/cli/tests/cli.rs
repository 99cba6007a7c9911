use std::path::Path;
use std::process::{Command, Output};

fn digitlab(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digitlab"))
        .args(args)
        .env("DIGITLAB_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn digits_of_sqrt2() {
    let dir = tempfile::tempdir().unwrap();
    let out = digitlab(dir.path(), &["digits", "--radicand", "2", "--bits", "64"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "0110101000001001111001100110011111110011101111001100100100001000"
    );
    assert!(dir.path().join("sqrt2.sqdg").exists());
}

#[test]
fn cached_run_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bounds", "--bits", "300", "--format", "csv"];
    let first = digitlab(dir.path(), &args);
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let second = digitlab(dir.path(), &[&args[..], &["--no-compute"]].concat());
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(
        stdout(&first).starts_with("name,N,K,lhs_num,lhs_den,rhs_num,rhs_den,margin_sign,pass\n")
    );
}

#[test]
fn no_compute_without_cache_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = digitlab(dir.path(), &["digits", "--bits", "32", "--no-compute"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fast_and_naive_agree() {
    let dir = tempfile::tempdir().unwrap();
    let fast = digitlab(dir.path(), &["parity", "--bits", "5000", "--radicand", "3"]);
    let naive = digitlab(
        dir.path(),
        &[
            "parity",
            "--bits",
            "5000",
            "--radicand",
            "3",
            "--fast",
            "false",
        ],
    );
    assert!(fast.status.success());
    assert_eq!(fast.stdout, naive.stdout);
}

#[test]
fn verify_dumps_tables() {
    let dir = tempfile::tempdir().unwrap();
    let r = dir.path().join("r.csv");
    let t = dir.path().join("t.csv");
    let out = digitlab(
        dir.path(),
        &[
            "verify",
            "--bits",
            "2000",
            "--cases",
            "10",
            "--dump-r",
            r.to_str().unwrap(),
            "--dump-t",
            t.to_str().unwrap(),
        ],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = std::fs::read_to_string(r).unwrap();
    assert!(r.starts_with("n,r\n0,1\n1,0\n2,2\n"));
    let t = std::fs::read_to_string(t).unwrap();
    assert!(t.starts_with("R,T,r,parity_exception\n"));
}

#[test]
fn intervals_with_breakpoints_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = digitlab(
        dir.path(),
        &[
            "intervals",
            "--bits",
            "100",
            "--breakpoints",
            "0,10,50,100",
            "--format",
            "json",
        ],
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["name"], "interval_upper_m3");
    assert_eq!(v[0]["pass"], true);

    let bad = digitlab(
        dir.path(),
        &["intervals", "--bits", "100", "--breakpoints", "0,50,200"],
    );
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn forcing_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = digitlab(
        dir.path(),
        &["forcing", "--bits", "1000", "--format", "json"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pattern"], "0100");
    assert_eq!(v["N"], 1000);
    assert_eq!(v["violations"].as_array().unwrap().len(), 0);
}

#[test]
fn ratio_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = digitlab(
        dir.path(),
        &["ratio", "--bits", "1000", "--n-list", "10,100,1000"],
    );
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,nz,ratio,c1_sqrt_n,c2_sqrt_n"));
    assert_eq!(lines.count(), 3);
}
