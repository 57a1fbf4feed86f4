use std::process::{Command, Output};

fn sarnak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sarnak"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn schedule_table_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.toml");
    let o = sarnak(&[
        "schedule",
        "--epsilon0",
        "1/2",
        "--stages",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let exponents: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().nth(2).unwrap())
        .collect();
    assert_eq!(exponents, ["0", "5", "12", "25", "51"]);
    assert!(text
        .lines()
        .any(|l| l.trim_start().starts_with("3 ") && l.trim_end().ends_with(" 4096")));

    let o = sarnak(&[
        "eval",
        "--schedule",
        path.to_str().unwrap(),
        "--index",
        "4097",
    ]);
    assert_eq!(stdout(&o), "n,value\n4097,1\n");
}

#[test]
fn invalid_inputs_exit_2() {
    let o = sarnak(&["schedule", "--epsilon0", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("epsilon0"));

    let o = sarnak(&[
        "eval",
        "--schedule",
        "x.toml",
        "--epsilon0",
        "1/2",
        "--index",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = sarnak(&["eval", "--range", "5:1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = sarnak(&["average", "--N", "1", "--weight", "zeta"]);
    assert_eq!(o.status.code(), Some(2));

    let o = sarnak(&["average", "--at-KM", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--long"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "epsilon0 = [1, 2]\nM_max = 2\nepsilons = [[1, 2], [1, 6], [1, 18]]\nexponents = [0, 1, 2]\n")
        .unwrap();
    let o = sarnak(&["eval", "--schedule", bad.to_str().unwrap(), "--index", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn runtime_limits_exit_1() {
    let o = sarnak(&["eval", "--stages", "2", "--index", "5000"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("does not reach"));

    let o = sarnak(&["average", "--stages", "2", "--N", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("maximal feasible N = 63"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn eval_values() {
    let o = sarnak(&[
        "eval", "--index", "49", "--index", "0", "--index", "4097", "--index", "-4095",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,value\n49,-1\n0,0\n4097,1\n-4095,1\n");

    let o = sarnak(&["eval", "--range", "-1:1", "--stage", "1"]);
    assert_eq!(stdout(&o), "n,value\n-1,0\n0,0\n1,1\n");

    let o = sarnak(&[
        "eval",
        "--index",
        "16",
        "--index",
        "49",
        "--weight",
        "liouville",
    ]);
    assert_eq!(stdout(&o), "n,value\n16,1\n49,-1\n");
    let o = sarnak(&["eval", "--index", "16"]);
    assert_eq!(stdout(&o), "n,value\n16,0\n");

    let o = sarnak(&["eval", "--index", "4097", "--trace"]);
    assert!(stderr(&o).contains("after stage 2: index 1"));
}

#[test]
fn verify_suites_pass() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.csv");
    let r = report.to_str().unwrap();
    for args in [
        vec!["verify", "residues", "--nmax", "12", "--report", r],
        vec![
            "verify",
            "oracle",
            "--M",
            "3",
            "--range",
            "-20000:20000",
            "--report",
            r,
        ],
        vec!["verify", "toeplitz", "--imax", "500", "--report", r],
        vec!["verify", "discrepancy", "--M", "3", "--report", r],
        vec![
            "verify", "distance", "--M", "2", "--N", "10000", "--report", r,
        ],
        vec![
            "verify",
            "decomposition",
            "--M",
            "2",
            "--range",
            "-9000:9000",
            "--report",
            r,
        ],
        vec![
            "verify",
            "complexity",
            "--range",
            "-20000:20000",
            "--m",
            "8",
            "--report",
            r,
        ],
    ] {
        let o = sarnak(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).contains("PASS"));
        assert!(std::fs::read_to_string(&report).unwrap().lines().count() >= 2);
    }
    let o = sarnak(&["verify", "discrepancy", "--M", "3"]);
    assert!(stdout(&o).contains("bound 1/9"));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("m,lo,hi,sampled_p"));
}

#[test]
fn discrepancy_long_gate() {
    let o = sarnak(&["verify", "discrepancy", "--M", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn average_rows_append() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("avg.csv");
    let p = out.to_str().unwrap();
    let o = sarnak(&["average", "--N", "1", "--weight", "mobius", "--out", p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\n1,1,1.00000000000000,"));
    let o = sarnak(&["average", "--at-KM", "3", "--out", p, "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,S1_num,S1,S2_num,S2,baseline");
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("4096,2460,0.600585937500000,"));
}

#[test]
fn reports_are_identical_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut texts = Vec::new();
    for jobs in ["1", "4"] {
        let path = dir.path().join(format!("d{jobs}.csv"));
        let o = sarnak(&[
            "verify",
            "discrepancy",
            "--jobs",
            jobs,
            "--report",
            path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        texts.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
}
