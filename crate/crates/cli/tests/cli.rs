use std::process::{Command, Output};

fn seqnorm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqnorm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn enclosure(text: &str) -> (f64, f64) {
    let inner = text.trim().strip_prefix('[').unwrap();
    let (lo, rest) = inner.split_once(", ").unwrap();
    let (hi, _) = rest.split_once(']').unwrap();
    (lo.parse().unwrap(), hi.parse().unwrap())
}

#[test]
fn eval_prints_exact_values() {
    let o = seqnorm(&["eval", "day", "[1]"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "0.5\n"));
    let o = seqnorm(&["eval", "davis(sup,l1,1)", "[1]"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 0.5f64.sqrt()).abs() <= 1e-7, "{v}");
    let o = seqnorm(&["eval", "l1", "[[3, 1.5], [7, -2]]"]);
    assert_eq!(stdout(&o), "3.5\n");
}

#[test]
fn eval_prints_enclosures_with_parameters() {
    let o = seqnorm(&["eval", "sym2R(lp(2))", "[1]", "--truncate", "4096"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("truncate=4096"), "{text}");
    let (lo, hi) = enclosure(&text);
    assert!(lo <= 1.3765665 && 1.3765665 <= hi, "{text}");
    let o = seqnorm(&[
        "eval",
        "lp(2)",
        "[1, 2]",
        "--os-classes",
        "8",
        "--format",
        "json",
    ]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(json["osClasses"], 8);
    assert!(json["lo"].as_f64().unwrap() <= json["hi"].as_f64().unwrap());
}

#[test]
fn eval_reads_vector_files() {
    let path = std::env::temp_dir().join(format!("seqnorm-cli-{}.json", std::process::id()));
    std::fs::write(&path, "[0, 0, 4]").unwrap();
    let o = seqnorm(&["eval", "sup", &format!("@{}", path.display())]);
    std::fs::remove_file(&path).ok();
    assert_eq!(stdout(&o), "4\n");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&seqnorm(&["eval", "lp(0.5)", "[1]"])), 2);
    assert_eq!(code(&seqnorm(&["eval", "lp(2", "[1]"])), 2);
    assert_eq!(code(&seqnorm(&["eval", "lp(2)", "[1,"])), 2);
    assert_eq!(code(&seqnorm(&["verify", "no-such-suite", "lp(2)"])), 2);
    assert_eq!(code(&seqnorm(&["eval", "sym2R(l1)", "[1]"])), 3);
    assert_eq!(
        code(&seqnorm(&[
            "verify",
            "hat-bounded",
            "day",
            "--samples",
            "5"
        ])),
        3
    );
    assert_eq!(
        code(&seqnorm(&[
            "verify",
            "davis-sandwich",
            "davis(sup,l1,2)",
            "--samples",
            "500",
            "--seed",
            "7"
        ])),
        0
    );
    assert_eq!(
        code(&seqnorm(&[
            "verify",
            "two-r",
            "sup",
            "--scenario",
            "c0-witness"
        ])),
        1
    );
    assert_eq!(code(&seqnorm(&["verify", "strict-convexity", "lp(2)"])), 0);
    assert_eq!(
        code(&seqnorm(&[
            "verify",
            "two-r",
            "lp(2)",
            "--scenario",
            "normalized-blocks"
        ])),
        4
    );
}

#[test]
fn parse_errors_name_the_position() {
    let o = seqnorm(&["eval", "dayAug(foo)", "[1]"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("byte 7") && err.contains("foo"), "{err}");
}

#[test]
fn json_reports_are_reproducible() {
    let args = [
        "verify",
        "norm-axioms",
        "dayAug(lp(3))",
        "--samples",
        "200",
        "--seed",
        "4",
        "--format",
        "json",
    ];
    let (a, b) = (seqnorm(&args), seqnorm(&args));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["seed"], 4);
}

#[test]
fn csv_lists_violations() {
    let o = seqnorm(&[
        "verify",
        "two-r",
        "sup",
        "--scenario",
        "c0-witness",
        "--format",
        "csv",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sample,check,lhs,rhs,margin,input"));
    assert!(lines.count() > 0);
}

#[test]
fn output_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("seqnorm-report-{}.json", std::process::id()));
    let o = seqnorm(&[
        "verify",
        "hat-subadditive",
        "lp(2)",
        "--samples",
        "50",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(report["suiteName"], "hat-subadditive");
}

#[test]
fn boyd_tables() {
    let o = seqnorm(&["boyd", "lp(3)", "--max-m", "16"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).take(15).collect();
    assert_eq!(rows.len(), 15);
    assert!(
        rows.iter()
            .all(|r| r.split_whitespace().last() == Some("3")),
        "{text}"
    );
    assert!(text.ends_with("p estimate: 3\n"));
    assert!(stdout(&seqnorm(&["boyd", "sup"])).ends_with("p estimate: +inf\n"));
    assert!(stdout(&seqnorm(&["boyd", "l1"])).ends_with("p estimate: 1\n"));
    let json: serde_json::Value =
        serde_json::from_slice(&seqnorm(&["boyd", "sup", "--format", "json"]).stdout).unwrap();
    assert_eq!(json["pEstimate"], "+inf");
}
