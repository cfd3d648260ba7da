use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fuzzy-cocomo"))
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/projects.csv")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Value after `label:` on the first matching line, e.g. "121.77" from "... effort: 121.77 PM".
fn field(text: &str, label: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with(label))
        .unwrap_or_else(|| panic!("no `{label}` in\n{text}"));
    line[label.len()..]
        .trim_start_matches(':')
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

fn dir_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).unwrap().display().to_string();
                out.push((rel, fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn estimate_reports_crisp_cocomo_alongside_fuzzy() {
    let o = run(&["estimate", "--size", "32", "--mode", "organic"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(field(&text, "COCOMO nominal effort"), 121.77);
    assert_eq!(field(&text, "COCOMO total effort"), 121.77);
    let fuzzy = field(&text, "fuzzy total effort");
    assert!((fuzzy - 121.77).abs() / 121.77 < 0.15, "{fuzzy}");
}

#[test]
fn estimate_at_smallest_size() {
    let o = run(&[
        "estimate", "--size", "1", "--mode", "organic", "--source", "grid",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(field(&text, "COCOMO nominal effort"), 3.2);
    assert!((field(&text, "fuzzy nominal effort") - 3.2).abs() < 0.2);
}

#[test]
fn estimate_with_drivers_matches_table() {
    let o = run(&[
        "estimate", "--size", "32", "--mode", "organic", "--driver", "rely=vh", "--driver",
        "ACAP=h",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let eaf = 1.40 * 0.86;
    assert!((field(&text, "COCOMO EAF") - eaf).abs() < 1e-4);
    assert!((field(&text, "fuzzy EAF") - eaf).abs() < 1e-3);
}

#[test]
fn estimate_between_modes_has_no_crisp_answer() {
    let o = run(&["estimate", "--size", "20", "--mode", "1.1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("COCOMO: n/a"));
}

#[test]
fn estimate_out_of_range_size_is_an_error() {
    let o = run(&["estimate", "--size", "200", "--mode", "organic"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.starts_with("error: "), "{err}");
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn estimate_rejects_bad_inputs() {
    for args in [
        &["estimate", "--size", "10", "--mode", "huge"][..],
        &[
            "estimate", "--size", "10", "--mode", "organic", "--driver", "rely=xh",
        ],
        &[
            "estimate", "--size", "10", "--mode", "organic", "--driver", "bogus=h",
        ],
        &[
            "estimate",
            "--size",
            "10",
            "--mode",
            "organic",
            "--defuzz-resolution",
            "50",
        ],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(stderr(&o).starts_with("error: "), "{args:?}");
    }
}

#[test]
fn estimate_explain_lists_rules() {
    let o = run(&[
        "estimate",
        "--size",
        "10",
        "--mode",
        "embedded",
        "--explain",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("IF mode IS embedded AND size IS"));
    assert!(text.contains("IF sced IS nom THEN em IS unchanged"));
}

#[test]
fn estimate_writes_report_file() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("report.txt");
    let o = run(&[
        "estimate",
        "--size",
        "5",
        "--mode",
        "organic",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&path).unwrap(), stdout(&o));
}

#[test]
fn build_fis_is_deterministic_and_loadable() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let o = run(&[
            "build-fis",
            "--mf-count",
            "7",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(stdout(&o).contains("21 nominal rules"));
    }
    let files = dir_files(&a);
    assert_eq!(files.len(), 16);
    assert_eq!(files, dir_files(&b));

    let nominal = fs::read_to_string(a.join("nominal.toml")).unwrap();
    assert_eq!(nominal.matches("THEN effort IS").count(), 21);

    let built = run(&["estimate", "--size", "40", "--mode", "semidetached"]);
    let loaded = run(&[
        "estimate",
        "--size",
        "40",
        "--mode",
        "semidetached",
        "--fis",
        a.to_str().unwrap(),
    ]);
    assert!(loaded.status.success(), "{}", stderr(&loaded));
    assert_eq!(
        field(&stdout(&built), "fuzzy total effort"),
        field(&stdout(&loaded), "fuzzy total effort")
    );
}

#[test]
fn build_fis_seed_changes_artificial_rules() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    run(&["build-fis", "--out", a.to_str().unwrap()]);
    run(&["build-fis", "--seed", "7", "--out", b.to_str().unwrap()]);
    let na = fs::read(a.join("nominal.toml")).unwrap();
    let nb = fs::read(b.join("nominal.toml")).unwrap();
    assert_ne!(na, nb);
}

#[test]
fn build_fis_rejects_single_membership_function() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("x");
    let o = run(&[
        "build-fis",
        "--mf-count",
        "1",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: "));
    assert!(!dir.join("nominal.toml").exists());
}

#[test]
fn evaluate_scores_exact_cocomo_as_zero_error() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&[
        "evaluate",
        "--dataset",
        fixture().to_str().unwrap(),
        "--out",
        tmp.path().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(
        text.contains("13 projects, 1 outside the size range"),
        "{text}"
    );
    assert!(text.contains("n = 12"), "{text}");
    let cocomo_total = text
        .lines()
        .find(|l| l.starts_with("COCOMO") && l.contains("total"))
        .unwrap();
    let cols: Vec<&str> = cocomo_total.split_whitespace().collect();
    assert_eq!(cols[3], "0.00");
    assert_eq!(cols[4], "100.00");

    let predictions = fs::read_to_string(tmp.path().join("predictions.csv")).unwrap();
    assert!(
        !predictions.contains("p13"),
        "150 KDSI project must be filtered"
    );
    let data_rows = predictions.lines().filter(|l| l.starts_with('p')).count();
    assert_eq!(data_rows, 12);
    let summary = fs::read_to_string(tmp.path().join("summary.txt")).unwrap();
    assert!(summary.starts_with("# fuzzy-cocomo "));
    assert!(summary.ends_with(&text[text.find("projects with size").unwrap()..]));
}

#[test]
fn evaluate_range_flag_changes_filter() {
    let o = run(&[
        "--range",
        "1:200",
        "evaluate",
        "--dataset",
        fixture().to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("n = 13"));
}

#[test]
fn evaluate_missing_dataset_is_an_error() {
    let o = run(&["evaluate", "--dataset", "/nonexistent/projects.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/projects.csv"));
}

#[test]
fn replicate_writes_every_table_deterministically() {
    let tmp = tempfile::tempdir().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let o = run(&[
            "replicate",
            "--dataset",
            fixture().to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let files = dir_files(&a);
    let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names.len(), 11, "{names:?}");
    assert!(names.contains(&"summary.txt"));
    assert!(names.contains(&"pred25_by_mf_count.csv"));
    assert_eq!(names.iter().filter(|n| !n.starts_with("summary")).count(), 10);
    assert_eq!(files, dir_files(&b));

    let table = fs::read_to_string(a.join("pred25_by_mf_count.csv")).unwrap();
    assert!(table.contains("# seed: 42"));
    assert!(table.contains("mf_count,n,tmf_nominal,tmf_total,gmf_nominal,gmf_total"));
}
