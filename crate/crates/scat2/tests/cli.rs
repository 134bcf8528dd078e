//! End-to-end coverage of the command-line surface: the committed golden
//! grid, cache files on disk, exit codes, and error diagnostics.

use std::fs;

use scat2::shell::{decode, run_with, Cache};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("scat2").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn table_matches_the_committed_golden_grid() {
    let (code, out, _) = run(&["table", "--b", "3", "--c", "2", "--degree", "14"]);
    assert_eq!(code, 0);
    assert_eq!(out, include_str!("golden/b3c2_d14_table.txt"));
}

#[test]
fn compute_then_table_from_cache_agrees_with_a_direct_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b3c2.tau");
    let spath = path.to_str().unwrap();
    let (code, out, _) = run(&[
        "compute", "--b", "3", "--c", "2", "--degree", "14", "--out", spath,
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let (code, from_cache, _) = run(&["table", "--in", spath]);
    assert_eq!(code, 0);
    let (_, direct, _) = run(&["table", "--b", "3", "--c", "2", "--degree", "14"]);
    assert_eq!(from_cache, direct);
}

#[test]
fn cells_beyond_the_cutoff_print_as_question_marks() {
    let (code, out, _) = run(&[
        "table", "--b", "3", "--c", "2", "--degree", "5", "--imax", "3", "--jmax", "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "0  1  14  ?");
}

#[test]
fn zero_parameters_are_usage_errors() {
    let (code, _, err) = run(&["compute", "--b", "0", "--c", "2", "--degree", "8"]);
    assert_eq!(code, 2);
    assert!(err.contains("positive"), "stderr: {err}");
}

#[test]
fn incomplete_flag_sets_are_usage_errors() {
    assert_eq!(run(&["table"]).0, 2);
    assert_eq!(run(&["fit"]).0, 2);
    assert_eq!(run(&["fit", "--i", "2"]).0, 2);
    assert_eq!(run(&["consistency"]).0, 2);
    assert_eq!(run(&["verify", "--conjecture", "19"]).0, 2);
    assert_eq!(run(&["verify", "--conjecture", "seven"]).0, 2);
    assert_eq!(run(&["no-such-command"]).0, 2);
}

#[test]
fn help_prints_to_stdout_and_exits_zero() {
    let (code, out, err) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("scat2"));
    assert!(err.is_empty());
}

#[test]
fn malformed_cache_lines_are_named_in_the_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tau");
    fs::write(&path, "scat2 v1 numeric b=3 c=2 D=14\ntau 2 3 fourteen\n").unwrap();
    let (code, _, err) = run(&["table", "--in", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "stderr: {err}");
    assert!(err.contains("fourteen"), "stderr: {err}");
}

#[test]
fn consistency_accepts_a_fresh_cache_and_flags_a_corrupted_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b3c2.tau");
    let spath = path.to_str().unwrap();
    run(&["compute", "--b", "3", "--c", "2", "--degree", "8", "--out", spath]);
    let (code, out, _) = run(&["consistency", "--in", spath]);
    assert_eq!(code, 0);
    assert!(out.contains("consistent"), "stdout: {out}");

    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("tau 2 3 14\n"));
    fs::write(&path, text.replace("tau 2 3 14\n", "tau 2 3 13\n")).unwrap();
    let (code, out, _) = run(&["consistency", "--in", spath]);
    assert_eq!(code, 1);
    assert!(out.contains("mismatch at tau(2,3)"), "stdout: {out}");
}

#[test]
fn consistency_runs_directly_from_parameters() {
    let (code, out, _) = run(&["consistency", "--b", "4", "--c", "3", "--degree", "10"]);
    assert_eq!(code, 0);
    assert!(out.contains("no loop defects through degree 10"), "stdout: {out}");
}

#[test]
fn export_canonicalizes_cache_files() {
    let dir = tempfile::tempdir().unwrap();
    let messy = dir.path().join("messy.tau");
    let clean = dir.path().join("clean.tau");
    fs::write(
        &messy,
        "scat2 v1 numeric b=3 c=2 D=6\ntau 2 3 14\ntau 1 1 1\ntau 2 2 2\n",
    )
    .unwrap();
    let (code, _, _) = run(&[
        "export", "--in", messy.to_str().unwrap(), "--out", clean.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&clean).unwrap();
    let records: Vec<&str> = text.lines().filter(|l| l.starts_with("tau")).collect();
    assert_eq!(records, vec!["tau 1 1 1", "tau 2 2 2", "tau 2 3 14"]);
    assert_eq!(
        decode(&text).unwrap(),
        decode(&fs::read_to_string(&messy).unwrap()).unwrap()
    );
}

#[test]
fn export_writes_report_records() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("reports.txt");
    let (code, out, _) = run(&[
        "export", "--conjecture", "13", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("wrote 1 reports"), "stdout: {out}");
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(
        text,
        "conj 13 verified j <= 6 at (b,c) = (1,5) witness: \
         tau^{1,5}(2j,j) for j = 1..6: 2, 5, 17, 64, 259, 1098\n"
    );
}

#[test]
fn verify_prints_a_record_per_check() {
    let (code, out, _) = run(&["verify", "--conjecture", "3", "--imax", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("conj 3 verified 1 <= i,j <= 2"), "stdout: {out}");
}

#[test]
fn fit_emits_a_symbolic_cache_for_a_single_target() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fit.tau");
    let (code, out, err) = run(&[
        "fit", "--i", "2", "--j", "2", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert!(err.contains("validated"), "stderr: {err}");
    let text = fs::read_to_string(&path).unwrap();
    assert!(
        text.contains("tau 2 2 poly: 1/2*g^2 + g*b*c - g*b - g*c + 1/2*g\n"),
        "cache: {text}"
    );
    let Cache::Symbolic(table) = decode(&text).unwrap() else {
        panic!("expected a symbolic cache");
    };
    assert_eq!(table.len(), 1);
}

#[test]
fn fit_on_a_rank_deficient_grid_reports_failure_with_exit_one() {
    let (code, out, err) = run(&["fit", "--i", "2", "--j", "2", "--grid", "1:6,1:6"]);
    assert_eq!(code, 1);
    assert!(err.contains("no polynomial found"), "stderr: {err}");
    let Cache::Symbolic(table) = decode(&out).unwrap() else {
        panic!("expected a symbolic cache");
    };
    assert!(table.is_empty());
}

#[test]
fn fit_square_covers_a_block() {
    let (code, out, _) = run(&["fit", "--imax", "2", "--jmax", "2"]);
    assert_eq!(code, 0);
    let Cache::Symbolic(table) = decode(&out).unwrap() else {
        panic!("expected a symbolic cache");
    };
    assert_eq!(table.len(), 4);
    assert_eq!(table.get(1, 1).unwrap().to_string(), "g");
}
