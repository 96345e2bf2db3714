use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ecaa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecaa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Compare against a stored golden file; `ECAA_BLESS=1` rewrites it.
fn check_golden(name: &str, actual: &[u8]) {
    let path = golden(name);
    if std::env::var_os("ECAA_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        expected == actual,
        "{name} differs from golden (rerun with ECAA_BLESS=1 after review)"
    );
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn pattern_metrics_plot_pipeline_matches_goldens() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = golden("baseline.toml");
    let csv = dir.path().join("pattern.csv");
    let toml = dir.path().join("metrics.toml");
    let svg = dir.path().join("pattern.svg");

    let out = ecaa(&[
        "pattern",
        "--config",
        s(&cfg),
        "--grid",
        "-90:90:0.5",
        "--out",
        s(&csv),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = ecaa(&["metrics", s(&csv), "--out", s(&toml)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = ecaa(&["plot", s(&csv), "--out", s(&svg)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    check_golden("baseline_pattern.csv", read(&csv).as_bytes());
    check_golden("baseline_metrics.toml", read(&toml).as_bytes());
    check_golden("baseline_pattern.svg", read(&svg).as_bytes());
}

#[test]
fn default_pattern_has_3601_rows_and_unit_peak() {
    let out = ecaa(&["pattern"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "theta_deg,phi_deg,re,im,mag,norm_db");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 3601);
    assert_eq!(rows.iter().filter(|r| r.ends_with(",0")).count(), 1);
    assert!(rows[1800].starts_with("0,0,"), "{}", rows[1800]);
}

#[test]
fn single_element_is_flat() {
    let out = ecaa(&[
        "pattern",
        "--set",
        "m_rings=1",
        "--set",
        "n_per_ring=1",
        "--grid",
        "-90:90:1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for row in text.lines().skip(1) {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[4], "1", "{row}");
        assert_eq!(f[5], "0", "{row}");
    }
}

#[test]
fn hyper_unit_exponent_and_main_beam_null() {
    let out = ecaa(&["hyper", "--exponent", "1", "--grid", "-90:90:0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta_deg,phi_deg,sum,diff,hyper,hyper_norm_db"
    );
    for row in lines {
        let f: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
        let (sum, diff, hyper) = (f[2], f[3], f[4]);
        assert!((hyper - (sum - diff)).abs() <= 2e-8 * sum.max(1.0), "{row}");
        if f[0] == 0.0 {
            assert_eq!(diff, 0.0);
        }
    }
}

#[test]
fn hyper_output_feeds_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("h.csv");
    let out = ecaa(&[
        "hyper",
        "--exponent",
        "0.05",
        "--grid",
        "-90:90:0.5",
        "--out",
        s(&csv),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("advisory"));
    let out = ecaa(&["metrics", s(&csv)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["peak_angle", "sll_db", "fnbw_deg", "hpbw_deg"] {
        assert!(text.contains(&format!("{key} = ")), "{text}");
    }
}

#[test]
fn odd_ring_hyper_is_a_usage_error() {
    let out = ecaa(&["hyper", "--exponent", "0.5", "--set", "n_per_ring=11"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even N"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // usage
    assert_eq!(
        ecaa(&["pattern", "--grid", "10:0:1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        ecaa(&["pattern", "--set", "colour=blue"]).status.code(),
        Some(2)
    );
    assert_eq!(ecaa(&["frobnicate"]).status.code(), Some(2));
    // config
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "m_rings = 3\n").unwrap();
    assert_eq!(
        ecaa(&["pattern", "--config", s(&bad)]).status.code(),
        Some(2)
    );
    // format
    let empty = dir.path().join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    assert_eq!(ecaa(&["plot", s(&empty)]).status.code(), Some(2));
    assert_eq!(ecaa(&["metrics", s(&empty)]).status.code(), Some(2));
    // I/O
    let missing = dir.path().join("missing.toml");
    let out = ecaa(&["pattern", "--config", s(&missing)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.toml"));
    let unwritable = dir.path().join("no/such/dir/p.csv");
    assert_eq!(
        ecaa(&["pattern", "--out", s(&unwritable)]).status.code(),
        Some(3)
    );
    // numeric: a single element has no side-lobe structure
    let csv = dir.path().join("flat.csv");
    let out = ecaa(&[
        "pattern",
        "--set",
        "m_rings=1",
        "--set",
        "n_per_ring=1",
        "--out",
        s(&csv),
    ]);
    assert!(out.status.success());
    let out = ecaa(&["metrics", s(&csv)]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("side-lobe"));
}

#[test]
fn plot_rejects_unknown_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("x.csv");
    std::fs::write(&csv, "angle,level\n0,0\n1,-3\n").unwrap();
    let out = ecaa(&["plot", s(&csv)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("theta_deg"));
}

#[test]
fn polar_plot_of_phi_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("az.csv");
    let out = ecaa(&[
        "pattern",
        "--theta-cut",
        "90",
        "--grid",
        "0:359:1",
        "--out",
        s(&csv),
    ]);
    assert!(out.status.success());
    let out = ecaa(&["plot", s(&csv), "--style", "polar"]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 1);
}

#[test]
fn sweep_exponent_table() {
    let out = ecaa(&[
        "sweep",
        "--param",
        "exponent",
        "--values",
        "1,0.5,0.3,0.1",
        "--grid",
        "-90:90:0.1",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("exponent,"));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("best: exponent = 0.1"));
}

#[test]
fn sweep_names_failing_value() {
    let out = ecaa(&["sweep", "--param", "rings", "--values", "2,2.5"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep value 2.5"));
}

#[test]
fn search_with_zero_budget_echoes_initial_config() {
    let out = ecaa(&[
        "search-dv",
        "--seed",
        "42",
        "--iters",
        "0",
        "--grid",
        "-90:90:0.1",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("0,0.5,"), "{}", rows[1]);
    assert!(
        rows[1].contains(",1,0.5,") && rows[1].ends_with(",0"),
        "{}",
        rows[1]
    );
}

#[test]
fn commands_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &[
            "search-dv",
            "--seed",
            "7",
            "--iters",
            "25",
            "--grid",
            "-90:90:0.1",
        ],
        &[
            "sweep",
            "--param",
            "major_axis",
            "--values",
            "1.15,1,0.8,0.6",
        ],
        &["hyper", "--exponent", "0.3"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let a = dir.path().join(format!("a{i}"));
        let b = dir.path().join(format!("b{i}"));
        for p in [&a, &b] {
            let mut full = args.to_vec();
            full.extend(["--out", s(p)]);
            assert!(ecaa(&full).status.success(), "{args:?}");
        }
        assert_eq!(
            std::fs::read(&a).unwrap(),
            std::fs::read(&b).unwrap(),
            "{args:?}"
        );
    }
}

#[test]
fn config_round_trips_through_overrides() {
    // an override producing the file's own values changes nothing
    let cfg = golden("baseline.toml");
    let a = ecaa(&["pattern", "--config", s(&cfg), "--grid", "-90:90:1"]);
    let b = ecaa(&[
        "pattern",
        "--grid",
        "-90:90:1",
        "--set",
        "dv_wl=0.5",
        "--set",
        "b_minor_wl=0.99",
    ]);
    assert_eq!(a.stdout, b.stdout);
}
