use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splitauth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_exit_codes() {
    let good = fixture("2-9-9-4-1.design");
    assert_eq!(code(&run(&["verify", path_str(&good)])), 0);

    let text = fs::read_to_string(&good).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let mutated = dir.path().join("mutated.design");
    fs::write(&mutated, text.replacen("[[1,2],[3,5]]", "[[1,2],[3,6]]", 1)).unwrap();
    let out = run(&["verify", path_str(&mutated), "--format", "kv"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("verdict=failed"));
    assert!(stdout(&out).contains("counterexample="));

    let truncated = dir.path().join("truncated.design");
    let cut = text.rfind('[').unwrap();
    fs::write(&truncated, &text[..cut + 3]).unwrap();
    let out = run(&["verify", path_str(&truncated)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn verify_with_other_strength() {
    let out = run(&[
        "verify",
        path_str(&fixture("3-10-15-6-1.design")),
        "--t",
        "2",
        "--lambda",
        "4",
        "--format",
        "kv",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("histogram.4=45"));
}

#[test]
fn overlapping_matrix_is_a_parse_error() {
    let text = fs::read_to_string(fixture("2-9-9-4-1.matrix")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.matrix");
    fs::write(&bad, text.replacen("{3,5}", "{2,5}", 1)).unwrap();
    let out = run(&["evaluate", path_str(&bad)]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5 (row 1, column 2)"), "{err}");
}

#[test]
fn feasible_verdicts() {
    let ok = run(&[
        "feasible", "--t", "3", "--v", "10", "--c", "2", "--u", "3", "--format", "kv",
    ]);
    assert_eq!(code(&ok), 0);
    let s = stdout(&ok);
    assert!(s.contains("b=15"));
    assert!(s.contains("relation_c=fails"));
    assert!(s.contains("pair_identity=holds"));

    let bad = run(&["feasible", "--t", "2", "--v", "10", "--c", "2", "--u", "2"]);
    assert_eq!(code(&bad), 1);

    let t1 = run(&[
        "feasible", "--t", "1", "--v", "6", "--c", "2", "--u", "3", "--format", "kv",
    ]);
    assert!(stdout(&t1).contains("relation_c=n/a"));

    assert_eq!(code(&run(&["feasible", "--t", "2"])), 2);
}

#[test]
fn round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["2-9-9-4-1.design", "3-10-15-6-1.design"] {
        let matrix = dir.path().join("code.matrix");
        let back = dir.path().join("back.design");
        assert_eq!(
            code(&run(&[
                "to-code",
                path_str(&fixture(name)),
                "-o",
                path_str(&matrix)
            ])),
            0
        );
        assert_eq!(
            code(&run(&[
                "to-design",
                path_str(&matrix),
                "-o",
                path_str(&back)
            ])),
            0
        );
        let again = dir.path().join("again.matrix");
        let third = dir.path().join("third.design");
        run(&["to-code", path_str(&back), "-o", path_str(&again)]);
        run(&["to-design", path_str(&again), "-o", path_str(&third)]);
        let rows = |p: &Path| {
            let mut v: Vec<String> = fs::read_to_string(p)
                .unwrap()
                .lines()
                .skip(3)
                .map(|l| l.split_once(' ').unwrap().1.trim().to_string())
                .collect();
            v.sort();
            v
        };
        assert_eq!(rows(&matrix), rows(&again));
        assert_eq!(fs::read(&back).unwrap(), fs::read(&third).unwrap());
        assert_eq!(code(&run(&["verify", path_str(&back)])), 0);
    }
}

#[test]
fn artifact_goes_to_stdout_without_output_flag() {
    let out = run(&["to-code", path_str(&fixture("2-9-9-4-1.design"))]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("messages 1 2 3"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("9 rules"));
}

#[test]
fn evaluate_reports_orders() {
    let out = run(&[
        "evaluate",
        path_str(&fixture("3-10-15-6-1.matrix")),
        "--format",
        "kv",
    ]);
    assert_eq!(code(&out), 0);
    let s = stdout(&out);
    for line in [
        "order.0.p_d=3/5",
        "order.1.p_d=4/9",
        "order.2.p_d=1/4",
        "security_order=2",
        "optimal=true",
    ] {
        assert!(s.contains(line), "{line} missing from\n{s}");
    }
    let fano = run(&[
        "evaluate",
        path_str(&fixture("2-9-9-4-1.matrix")),
        "--max-order",
        "1",
    ]);
    assert_eq!(code(&fano), 0);
    assert_eq!(
        code(&run(&[
            "evaluate",
            path_str(&fixture("2-9-9-4-1.matrix")),
            "--max-order",
            "5"
        ])),
        2
    );
}

#[test]
fn search_writes_a_verifiable_design() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("found.design");
    let out = run(&[
        "search",
        "--t",
        "3",
        "--v",
        "10",
        "--c",
        "2",
        "--u",
        "3",
        "--seed",
        "7",
        "-o",
        path_str(&out_path),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&run(&["verify", path_str(&out_path)])), 0);

    let from_header = run(&[
        "search",
        "--params",
        path_str(&fixture("2-9-9-4-1.design")),
        "--format",
        "kv",
    ]);
    assert_eq!(code(&from_header), 0);

    let infeasible = run(&[
        "search", "--t", "2", "--v", "10", "--c", "2", "--u", "2", "--format", "kv",
    ]);
    assert_eq!(code(&infeasible), 1);
    assert!(stdout(&infeasible).contains("status=pruned-infeasible"));

    assert_eq!(
        code(&run(&[
            "search", "--t", "2", "--v", "9", "--c", "2", "--u", "2", "--lambda", "2"
        ])),
        1
    );
}

#[test]
fn threads_flag_is_accepted() {
    let out = run(&[
        "--threads",
        "2",
        "verify",
        path_str(&fixture("fano.design")),
    ]);
    assert_eq!(code(&out), 0);
}
