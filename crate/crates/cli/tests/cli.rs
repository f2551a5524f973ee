use std::path::PathBuf;
use std::process::{Command, Output};

fn crc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crc")).args(args).output().expect("run crc")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("crc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn max_ratio(o: &Output) -> f64 {
    stdout(o).lines().find_map(|l| l.strip_prefix("max_ratio_err: ")).unwrap().parse().unwrap()
}

#[test]
fn gen_is_deterministic_and_counts_records() {
    let (a, b) = (tmp("a.jsonl"), tmp("b.jsonl"));
    for p in [&a, &b] {
        let o = crc(&[
            "gen",
            "--setting",
            "dom2d",
            "--n",
            "1000",
            "--colors",
            "50",
            "--seed",
            "9",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{o:?}");
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert_eq!(text.lines().count(), 1001);
    let mut colors: Vec<&str> =
        text.lines().skip(1).map(|l| l.split("\"color\":").nth(1).unwrap().split(',').next().unwrap()).collect();
    colors.sort();
    colors.dedup();
    assert!(colors.len() <= 50);
}

#[test]
fn gen_empty_writes_only_the_header() {
    let o = crc(&["gen", "--setting", "range3s-2d", "--n", "0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("\"n\":0"));
}

#[test]
fn verify_stab2d_counter_within_tolerance() {
    let o = crc(&["verify", "--setting", "stab3s-2d", "--n", "500", "--colors", "250", "--eps", "0.25", "--seed", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS reproducible"));
    assert!(max_ratio(&o) <= 0.25);
}

#[test]
fn verify_oracle_has_zero_error() {
    let o = crc(&["verify", "--setting", "dom3d", "--n", "200", "--grid", "20", "--structure", "oracle"]);
    assert!(o.status.success());
    assert_eq!(max_ratio(&o), 0.0);
}

#[test]
fn verify_fails_on_corrupted_structure() {
    let o = crc(&["verify", "--setting", "dom2d", "--n", "200", "--corrupt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL contract"));
}

#[test]
fn verify_reads_a_generated_dataset() {
    let p = tmp("r4.jsonl");
    let g = crc(&[
        "gen",
        "--setting",
        "range4s-2d",
        "--n",
        "300",
        "--grid",
        "16",
        "--colors",
        "80",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(g.status.success());
    let o = crc(&["verify", "--dataset", p.to_str().unwrap(), "--eps", "0.5"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn suitability_failure_reports_attempts() {
    let o = Command::new(env!("CARGO_BIN_EXE_crc"))
        .args(["verify", "--setting", "stab3s-2d", "--n", "2048", "--colors", "1024", "--eps", "0.5"])
        .env("CRC_ATTEMPT_CAP", "0")
        .output()
        .unwrap();
    let err = String::from_utf8_lossy(&o.stderr);
    assert_eq!(o.status.code(), Some(2), "{err}");
    assert!(err.contains("after 0 attempts"), "{err}");
}

#[test]
fn bench_emits_rows_with_monotone_n() {
    let o = crc(&[
        "bench",
        "--setting",
        "range3s-2d",
        "--structure",
        "capprox3s",
        "--n",
        "128",
        "--n",
        "256",
        "--n",
        "512",
        "--reps",
        "1",
        "--queries",
        "500",
    ]);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("structure,n,eps,build_ms,qps,space_units,max_ratio_err"));
    let ns: Vec<usize> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(ns, [128, 256, 512]);
}
