use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn phasefn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phasefn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn phase_for_constant_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let qfile = dir.path().join("q.json");
    let out = dir.path().join("phase.csv");
    fs::write(&qfile, r#"{"interval": [0, 1], "polynomial": [4]}"#).unwrap();

    let o = phasefn(&["phase", "--lambda", "10", "--qfile", path(&qfile), "--out", path(&out), "--samples", "11"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let mut rdr = csv::Reader::from_path(&out).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["t", "alpha", "alpha_prime", "u", "v"]);
    let mut count = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let x: Vec<f64> = rec.iter().map(|s| s.parse().unwrap()).collect();
        // alpha = 20 t for q = 4, lambda = 10
        assert!((x[1] - 20.0 * x[0]).abs() < 1e-12);
        assert!((x[2] - 20.0).abs() < 1e-12);
        count += 1;
    }
    assert_eq!(count, 11);
}

#[test]
fn bench_is_deterministic_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let read = |name: &str| {
        let out = dir.path().join(name);
        let o = phasefn(&["bench", "--family", "legendre", "--n-list", "10,1000", "--points", "50", "--seed", "7", "--out", path(&out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let mut rdr = csv::Reader::from_path(&out).unwrap();
        rdr.records()
            .map(|r| {
                let r = r.unwrap();
                // timings vary; the error column does not
                (r[0].to_string(), r[4].to_string(), r[6].to_string())
            })
            .collect::<Vec<_>>()
    };
    let a = read("a.csv");
    assert_eq!(a.len(), 2);
    assert_eq!(a, read("b.csv"));
}

#[test]
fn config_file_is_honoured_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    let qfile = dir.path().join("q.json");
    fs::write(&qfile, r#"{"interval": [-1, 1], "polynomial": [2, 0, 1]}"#).unwrap();

    let good = dir.path().join("good.json");
    fs::write(&good, r#"{"tol": 1e-11}"#).unwrap();
    let o = phasefn(&["--config", path(&good), "phase", "--lambda", "50", "--qfile", path(&qfile), "--samples", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"tolerance": 1e-11}"#).unwrap();
    let o = phasefn(&["--config", path(&bad), "phase", "--lambda", "50", "--qfile", path(&qfile)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verification_suites_pass() {
    for cmd in ["fourier-verify", "backwards-verify"] {
        let o = phasefn(&[cmd]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let text = String::from_utf8(o.stdout).unwrap();
        assert!(text.lines().count() > 2, "{cmd} printed {text}");
    }
}
