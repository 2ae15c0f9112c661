use std::process::Command;

fn copson(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_copson"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn c0_solves_the_quadratic_case() {
    let (stdout, _, code) = copson(&["c0", "--p", "2"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let c0 = doc["c0"].as_f64().unwrap();
    assert!((c0 - (2.0 - 5f64.sqrt())).abs() < 1e-12, "{c0}");
}

#[test]
fn verify_reports_holds_with_exit_zero() {
    let (stdout, _, code) = copson(&[
        "verify", "--family", "C2", "--p", "2", "--c", "0", "--lambda", "const:1", "--x",
        "unit:1", "--N", "100",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["verdict"], "HOLDS");
    assert_eq!(doc["ratio"].as_f64().unwrap(), 0.25);
}

#[test]
fn lemma_failure_exits_one_with_endpoint_witness() {
    let (stdout, _, code) =
        copson(&["lemma", "--cond", "LEMMA21", "--p", "2", "--c", "-0.5", "--grid", "4096"]);
    assert_eq!(code, 1);
    let doc: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["verdict"], "FAIL");
    assert_eq!(doc["witness"]["x"].as_f64().unwrap(), 1.0);
}

#[test]
fn missing_flag_is_a_usage_error() {
    let (_, stderr, code) = copson(&["c0"]);
    assert_eq!(code, 64);
    assert!(stderr.contains("--p"), "{stderr}");
}

#[test]
fn bad_file_is_a_data_error() {
    let (_, _, code) = copson(&[
        "verify", "--family", "C2", "--p", "2", "--c", "0", "--lambda",
        "file:/nonexistent/weights.txt", "--x", "unit:1", "--N", "10",
    ]);
    assert_eq!(code, 65);
}

#[test]
fn config_file_supplies_flags_and_cli_overrides() {
    let dir = std::env::temp_dir().join("copson-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("lemma.conf");
    std::fs::write(&cfg, "cond=LEMMA21\np=2\nc=-0.5\ngrid=512\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let (_, _, code) = copson(&["lemma", "--config", cfg]);
    assert_eq!(code, 1);
    let (_, _, code) = copson(&["lemma", "--config", cfg, "--c", "0"]);
    assert_eq!(code, 0);
}

#[test]
fn region_csv_header_and_jobs_determinism() {
    let args = |jobs: &str| {
        vec![
            "region".to_string(),
            "--mode".into(),
            "pc".into(),
            "--p-range".into(),
            "1.5:2.5:0.5".into(),
            "--second-range".into(),
            "-0.2:0.2:0.2".into(),
            "--N".into(),
            "200".into(),
            "--jobs".into(),
            jobs.to_string(),
        ]
    };
    let run = |jobs: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_copson"))
            .args(args(jobs))
            .output()
            .unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    let one = run("1");
    let eight = run("8");
    assert_eq!(one, eight);
    assert!(one.starts_with("mode,p,second,cert_verdict,battery_verdict,min_margin\n"));
}

#[test]
fn search_is_byte_identical_across_jobs() {
    let run = |jobs: &str| {
        copson(&[
            "search", "--family", "C1", "--p", "2", "--c", "2", "--lambda", "const:1", "--N",
            "128", "--budget", "500", "--seed", "3", "--jobs", jobs,
        ])
        .0
    };
    assert_eq!(run("1"), run("8"));
}

#[test]
fn help_lists_flags_and_exits_zero() {
    let (stdout, _, code) = copson(&["verify", "--help"]);
    assert_eq!(code, 0);
    for flag in ["--family", "--lambda", "--x", "--N", "--reverse"] {
        assert!(stdout.contains(flag), "missing {flag} in help");
    }
}
