use std::fs;
use std::process::Command;

use knottab::tabulate::{emit_table, load_table, resume, run, RunConfig, TabulateError};

fn small(dir: Option<&std::path::Path>) -> RunConfig {
    let mut c = RunConfig::new(7);
    c.input_crossings = 4;
    c.max_colors = 3;
    c.affine_moduli = vec![5];
    c.sym_max = 3;
    c.checkpoint = dir.map(ToOwned::to_owned);
    c
}

#[test]
fn small_census() {
    let report = run(&small(None)).unwrap();
    let counts: Vec<usize> = report.rows.iter().map(|r| r.class_count).collect();
    assert_eq!(counts, [1, 0, 0, 1, 1]);
    assert!(report.rows.iter().all(|r| r.distinguished_count == r.class_count));
    assert_eq!(report.composite().count(), 0);
}

#[test]
fn resume_reuses_and_repairs_stages() {
    let dir = tempfile::tempdir().unwrap();
    let config = small(Some(dir.path()));
    let first = run(&config).unwrap();
    for f in ["config.txt", "codes.txt", "classes.tsv", "invariants.tsv", "table.txt"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert_eq!(load_table(dir.path()).unwrap(), first.rows);
    assert_eq!(fs::read_to_string(dir.path().join("table.txt")).unwrap(), emit_table(&first.rows));

    // a lost later stage is recomputed
    fs::remove_file(dir.path().join("invariants.tsv")).unwrap();
    fs::remove_file(dir.path().join("classes.tsv")).unwrap();
    assert!(matches!(load_table(dir.path()), Err(TabulateError::Incomplete(_))));
    let again = resume(&config).unwrap();
    assert_eq!(again.rows, first.rows);
    assert_eq!(again.classes, first.classes);

    // fewer threads, same answer
    let mut one = config.clone();
    one.jobs = 1;
    assert_eq!(resume(&one).unwrap().rows, first.rows);
}

#[test]
fn damaged_or_foreign_checkpoints_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let config = small(Some(dir.path()));
    run(&config).unwrap();

    let mut other = config.clone();
    other.max_colors = 4;
    match resume(&other) {
        Err(TabulateError::ConfigMismatch { key, .. }) => assert_eq!(key, "max_colors"),
        r => panic!("expected a mismatch, got {r:?}"),
    }

    let codes = dir.path().join("codes.txt");
    let text = fs::read_to_string(&codes).unwrap();
    fs::write(&codes, &text[..text.len() / 2]).unwrap();
    assert!(matches!(resume(&config), Err(TabulateError::CorruptCheckpoint { .. })));

    // a fresh run replaces the damaged checkpoint
    run(&config).unwrap();
    assert!(resume(&config).is_ok());

    assert!(matches!(resume(&small(None)), Err(TabulateError::NoCheckpointDir)));
    let empty = tempfile::tempdir().unwrap();
    assert!(matches!(resume(&small(Some(empty.path()))), Err(TabulateError::MissingCheckpoint(_))));
}

#[test]
fn search_bound_below_inputs_is_an_error() {
    let mut c = small(None);
    c.input_crossings = 8;
    assert!(matches!(run(&c), Err(TabulateError::Config(_))));
}

fn knottab(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_knottab")).args(args).output().unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn command_line() {
    let (ok, out, _) = knottab(&["enumerate", "--max-crossings", "3", "--canonical-only", "--drawable"]);
    assert!(ok);
    assert!(out.lines().any(|l| l == "3;(1,4)(3,6)(5,2)"), "{out}");
    assert_eq!(out.lines().next(), Some("0;"));

    let (ok, out, _) = knottab(&["tests", "--max-colors", "3"]);
    assert!(ok);
    assert_eq!(out, "n=1;1\nn=3;1,3,2|3,2,1|2,1,3\n");

    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.txt");
    fs::write(&suite, &out).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_knottab"))
        .args(["invariants", "--suite", suite.to_str().unwrap()])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(b"3;(1,4)(3,6)(5,2)\n0;\n").unwrap();
    let out = String::from_utf8(child.wait_with_output().unwrap().stdout).unwrap();
    assert_eq!(out, "3;(1,4)(3,6)(5,2)\t1,-1,1\t1 9\n0;\t1\t1 3\n");

    let ck = dir.path().join("ck");
    let ck = ck.to_str().unwrap();
    let args = ["run", "--max-crossings", "6", "--max-colors", "3", "--affine-mods", "5", "--sym-max", "3", "--checkpoint", ck];
    let (ok, table, err) = knottab(&args);
    assert!(ok, "{err}");
    assert!(table.starts_with("crossings"));
    let (ok, again, _) = knottab(&[&args[..], &["--resume", "--jobs", "1"]].concat());
    assert!(ok);
    assert_eq!(again, table);
    let (ok, shown, _) = knottab(&["table", "--checkpoint", ck]);
    assert!(ok);
    assert_eq!(shown, table);

    let (ok, _, err) = knottab(&["table", "--checkpoint", dir.path().join("missing").to_str().unwrap()]);
    assert!(!ok);
    assert!(err.starts_with("error: "), "{err}");
    let (ok, _, err) = knottab(&["run", "--max-crossings", "4", "--affine-mods", "1"]);
    assert!(!ok && err.starts_with("error: "), "{err}");
    let (ok, _, _) = knottab(&["classify"]);
    assert!(!ok);
}
