use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn curvecross(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvecross")).args(args).output().unwrap()
}

fn read_table(path: &Path) -> Vec<(f64, f64)> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega_cm1,intensity"));
    lines
        .map(|l| {
            let (w, v) = l.split_once(',').unwrap();
            (w.parse().unwrap(), v.parse().unwrap())
        })
        .collect()
}

fn run_in(dir: &Path, args: &[&str]) {
    let mut all = args.to_vec();
    all.extend(["--out", dir.to_str().unwrap()]);
    let out = curvecross(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn default_absorption_writes_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["absorption"]);
    for name in ["absorption_coupled", "absorption_uncoupled"] {
        let rows = read_table(&dir.path().join(format!("{name}.csv")));
        assert_eq!(rows.len(), 401);
        assert_eq!(rows[0].0, 9500.0);
        assert_eq!(rows[400].0, 13500.0);
        let meta = fs::read_to_string(dir.path().join(format!("{name}.meta.txt"))).unwrap();
        assert!(meta.contains("# version = "));
        assert!(meta.contains("# fingerprint = "));
    }
}

#[test]
fn zero_coupling_makes_tables_identical() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["absorption", "--k0", "0"]);
    let a = read_table(&dir.path().join("absorption_coupled.csv"));
    let b = read_table(&dir.path().join("absorption_uncoupled.csv"));
    for (p, q) in a.iter().zip(&b) {
        assert!((p.1 - q.1).abs() <= 1e-12 * q.1.abs(), "{p:?} vs {q:?}");
    }
}

#[test]
fn narrow_lines_peak_at_vibronic_levels() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["absorption", "--gamma", "20", "--k0", "0"]);
    let rows = read_table(&dir.path().join("absorption_uncoupled.csv"));
    for target in [10700.0, 11100.0, 11500.0] {
        let peak = rows
            .iter()
            .filter(|r| (r.0 - target).abs() < 200.0)
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!((peak.0 - target).abs() <= 10.0, "peak at {} for {target}", peak.0);
    }
}

#[test]
fn raman_profiles_and_overtone() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["raman"]);
    assert_eq!(read_table(&dir.path().join("raman_coupled.csv")).len(), 401);
    assert_eq!(read_table(&dir.path().join("raman_uncoupled.csv")).len(), 401);

    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["raman", "--nf", "2"]);
    let rows = read_table(&dir.path().join("raman_coupled.csv"));
    assert!(rows.iter().any(|r| r.1 > 0.0));
    let meta = fs::read_to_string(dir.path().join("raman_coupled.meta.txt")).unwrap();
    assert!(meta.contains("# final_state = 2"));
}

#[test]
fn undisplaced_curve_gives_zero_uncoupled_fundamental() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["raman", "--nf", "1", "--displacement", "0"]);
    let rows = read_table(&dir.path().join("raman_uncoupled.csv"));
    assert!(rows.iter().all(|r| r.1 < 1e-20));
}

#[test]
fn bad_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "[model]\nmass_amu = -35.4\n").unwrap();
    let out = curvecross(&["validate", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).is_empty(), "validation must not run");

    fs::write(&path, "[model]\nmass_amu = 35.4\nbogus = 1\n").unwrap();
    let out = curvecross(&["absorption", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn quick_validation_passes() {
    let out = curvecross(&["validate", "--quick"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.lines().filter(|l| l.starts_with("PASS")).count() >= 8);
}

#[test]
fn identical_runs_are_byte_identical_and_echo_reproduces() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let config = a.path().join("run.toml");
    fs::write(&config, "[scan]\nstart_cm1 = 10000.0\nstop_cm1 = 12000.0\nstep_cm1 = 20.0\n").unwrap();
    run_in(a.path(), &["raman", "--config", config.to_str().unwrap(), "--gamma", "300"]);

    // feed the sidecar back in with no overrides
    let echo = b.path().join("echo.toml");
    fs::copy(a.path().join("raman_coupled.meta.txt"), &echo).unwrap();
    run_in(b.path(), &["raman", "--config", echo.to_str().unwrap()]);
    for name in ["raman_coupled.csv", "raman_uncoupled.csv"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap());
    }
}

#[test]
fn greens_probe_dumps_the_scan() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["greens-probe", "--gamma", "100"]);
    let text = fs::read_to_string(dir.path().join("greens_probe.csv")).unwrap();
    assert_eq!(text.lines().count(), 402);
    assert!(text.starts_with("omega_cm1,re_g1,im_g1"));
}
