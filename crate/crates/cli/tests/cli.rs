use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qfpt(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfpt"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

fn read_csv(path: &Path) -> Vec<[f64; 3]> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,P_r,P_fp"));
    lines
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            [v[0], v[1], v[2]]
        })
        .collect()
}

#[test]
fn two_site_exact_csv() {
    let dir = TempDir::new().unwrap();
    let out = qfpt(
        dir.path(),
        &[
            "solve",
            "chain",
            "--sites",
            "2",
            "--boundary",
            "1",
            "--start",
            "1",
            "--pipeline",
            "exact",
            "--tmax",
            "1.2",
            "--output",
            "two.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let t: f64 = value(&text, "T").parse().unwrap();
    assert!((t - 1.110721).abs() < 1e-5);

    let rows = read_csv(&dir.path().join("two.csv"));
    assert_eq!(rows.len(), 1201);
    let w = 2f64.sqrt();
    for [t, r, f] in rows {
        assert!((r - (w * t).cos()).abs() < 1e-11);
        assert!((f - w * (w * t).sin()).abs() < 1e-11);
    }
    let raw = std::fs::read_to_string(dir.path().join("two.csv")).unwrap();
    assert!(!raw.contains('\r') && raw.ends_with('\n'));
}

#[test]
fn csv_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = [
        "solve",
        "chain",
        "--sites",
        "3",
        "--boundary",
        "2",
        "--tmax",
        "1",
    ];
    for name in ["a.csv", "b.csv"] {
        let mut a = args.to_vec();
        a.extend(["-o", name]);
        assert_eq!(qfpt(dir.path(), &a).status.code(), Some(0));
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn classical_csv_is_exponential() {
    let dir = TempDir::new().unwrap();
    let out = qfpt(
        dir.path(),
        &[
            "solve",
            "classical2",
            "--rate",
            "1",
            "--tmax",
            "5",
            "-o",
            "c.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(value(&stdout(&out), "T"), "none");
    for [t, r, f] in read_csv(&dir.path().join("c.csv")) {
        assert!((r - (-t).exp()).abs() < 1e-5);
        assert!((f - (-t).exp()).abs() < 1e-5);
    }
}

#[test]
fn lattice_inversion_window() {
    let dir = TempDir::new().unwrap();
    let out = qfpt(
        dir.path(),
        &[
            "solve",
            "lattice",
            "--pipeline",
            "lattice-inversion",
            "--tmax",
            "2",
            "-o",
            "l.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = read_csv(&dir.path().join("l.csv"));
    assert_eq!(rows[0], [0.0, 1.0, 0.0]);
    for w in rows.windows(2) {
        assert!(w[1][1] <= w[0][1] + 1e-9, "P_r rises at t={}", w[1][0]);
    }
    assert!(rows.iter().all(|r| r[2] >= -1e-6 && r[1] > 0.0));
    // small-time behaviour P_fp ≈ 2t
    let [t, _, f] = rows[10];
    assert!((f / t - 2.0).abs() < 1e-3);
}

#[test]
fn compare_three_sites() {
    let dir = TempDir::new().unwrap();
    let out = qfpt(
        dir.path(),
        &[
            "compare",
            "chain",
            "--sites",
            "3",
            "--boundary",
            "2",
            "--h",
            "1e-3",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for key in ["max_abs_diff_Pr", "max_abs_diff_Pfp"] {
        let d: f64 = value(&text, key).parse().unwrap();
        assert!(d < 1e-5, "{key}={d}");
    }
}

#[test]
fn compare_converges_at_second_order() {
    let dir = TempDir::new().unwrap();
    let diff = |h: &str| -> f64 {
        let out = qfpt(dir.path(), &["compare", "chain", "--sites", "2", "--h", h]);
        assert_eq!(out.status.code(), Some(0));
        value(&stdout(&out), "max_abs_diff_Pfp").parse().unwrap()
    };
    let ratio = diff("0.01") / diff("0.005");
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn solve_both_reports_differences() {
    let dir = TempDir::new().unwrap();
    let out = qfpt(
        dir.path(),
        &["solve", "chain", "--sites", "2", "--pipeline", "both"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("max_abs_diff_Pr="));
    assert!(dir.path().join("qfpt.csv").exists());
}

#[test]
fn lattice_rejects_exact_pipelines() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["solve", "lattice", "--pipeline", "both"][..],
        &["solve", "lattice", "--pipeline", "exact"][..],
        &["compare", "lattice"][..],
    ] {
        assert_eq!(qfpt(dir.path(), args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn invalid_configs_exit_one() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["solve", "chain", "--sites", "3", "--boundary", "3"][..],
        &[
            "solve",
            "chain",
            "--sites",
            "3",
            "--boundary",
            "2",
            "--start",
            "3",
        ][..],
        &["solve", "chain", "--sites", "3", "--couplings", "1"][..],
        &["solve", "chain", "--tmax", "1", "--h", "0.3"][..],
        &["solve", "chain", "--sites", "2", "--couplings", "0"][..],
        &["solve", "--unknown-flag"][..],
        &["solve", "classical2", "--rate", "-1"][..],
        &["solve", "--config", "missing.conf"][..],
    ] {
        assert_eq!(qfpt(dir.path(), args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn coarse_grid_is_a_solver_error() {
    let dir = TempDir::new().unwrap();
    let out = qfpt(
        dir.path(),
        &[
            "solve",
            "chain",
            "--sites",
            "4",
            "--boundary",
            "1",
            "--pipeline",
            "volterra",
            "--tmax",
            "50",
            "--h",
            "0.02",
        ],
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid too coarse"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validity_violations_exit_three() {
    // starting next to the doorway: P_fp turns negative before P_r first vanishes
    let dir = TempDir::new().unwrap();
    let out = qfpt(
        dir.path(),
        &[
            "solve",
            "chain",
            "--sites",
            "3",
            "--boundary",
            "2",
            "--start",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert_eq!(value(&text, "density_positive"), "false");
    assert_eq!(value(&text, "restricted_monotone"), "false");
    assert!(
        dir.path().join("qfpt.csv").exists(),
        "data is still written"
    );

    let out = qfpt(
        dir.path(),
        &[
            "report",
            "chain",
            "--sites",
            "3",
            "--boundary",
            "2",
            "--start",
            "2",
        ],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn missing_time_domain_needs_no_normalization() {
    let dir = TempDir::new().unwrap();
    let out = qfpt(
        dir.path(),
        &[
            "solve",
            "chain",
            "--sites",
            "2",
            "--pipeline",
            "volterra",
            "--search-max",
            "0.5",
        ],
    );
    assert_eq!(value(&stdout(&out), "T"), "none");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn growing_mode_is_a_solver_error() {
    // a single-site ω in a 4-site chain has a pole with positive real part
    let dir = TempDir::new().unwrap();
    let out = qfpt(
        dir.path(),
        &["solve", "chain", "--sites", "4", "--boundary", "1"],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("real part"));
}

#[test]
fn reports() {
    let dir = TempDir::new().unwrap();
    let out = qfpt(
        dir.path(),
        &[
            "report",
            "chain",
            "--sites",
            "4",
            "--boundary",
            "2",
            "-o",
            "r4.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("r4.txt")).unwrap();
    let t: f64 = value(&text, "T").parse().unwrap();
    assert!((t - 1.86574).abs() < 2e-3);
    for key in [
        "normalization_residual",
        "positivity_violation",
        "monotonicity_violation",
        "mean_fpt",
    ] {
        value(&text, key);
    }

    qfpt(
        dir.path(),
        &["report", "chain", "--sites", "2", "-o", "r2.txt"],
    );
    let text = std::fs::read_to_string(dir.path().join("r2.txt")).unwrap();
    let res: f64 = value(&text, "normalization_residual").parse().unwrap();
    assert!(res <= 1e-10);

    let out = qfpt(
        dir.path(),
        &["report", "classical2", "--tmax", "5", "-o", "rc.txt"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("rc.txt")).unwrap();
    assert_eq!(value(&text, "T"), "none");
}

#[test]
fn config_file_and_dump_round_trip() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("run.conf"),
        "# three-site chain\nsystem = chain\nsites = 3\nboundary = 2\ncouplings = 1, 1\ntmax = 1.5\n",
    )
    .unwrap();
    let out = qfpt(
        dir.path(),
        &["solve", "--config", "run.conf", "--dump-config"],
    );
    assert_eq!(out.status.code(), Some(0));
    let dumped = stdout(&out);
    assert!(dumped.contains("sites = 3"));
    std::fs::write(dir.path().join("dumped.conf"), &dumped).unwrap();
    let again = qfpt(
        dir.path(),
        &["solve", "--config", "dumped.conf", "--dump-config"],
    );
    assert_eq!(stdout(&again), dumped);

    // flags override the file
    let out = qfpt(
        dir.path(),
        &[
            "solve", "--config", "run.conf", "--tmax", "1", "-o", "x.csv",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read_csv(&dir.path().join("x.csv")).len(), 1001);
}
