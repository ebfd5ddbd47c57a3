use std::path::Path;
use std::process::Command;

use locclab_cli::{subsets, CliError, StateSetSpec};
use locclab_core::{prove_infeasible, ProofTrace, WeylIndex};

const EXE: &str = env!("CARGO_BIN_EXE_locclab");

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(EXE).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn weyl_file(dir: &Path, name: &str, d: usize, idx: &[(i64, i64)]) -> String {
    write(
        dir,
        name,
        &StateSetSpec::weyl(d, idx, Default::default()).to_json(),
    )
}

#[test]
fn spec_json_round_trips() {
    let text = r#"{
        "d": 2,
        "base": [[[0.7071067811865476, 0], [0, 0]], [[0, 0], [0.7071067811865476, 0]]],
        "unitaries": [
            {"kind": "weyl", "n": 0, "m": 0},
            {"kind": "matrix", "rows": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]}
        ],
        "direction": "BtoA"
    }"#;
    let spec = StateSetSpec::parse(text, "mem").unwrap();
    let again = StateSetSpec::parse(&spec.to_json(), "mem").unwrap();
    assert_eq!(spec, again);
    let a = spec.load("mem").unwrap();
    let b = again.load("mem").unwrap();
    assert_eq!(a.set, b.set);
    assert!(a.weyl.is_none());
    assert_eq!(a.first_matrix, Some(1));
}

#[test]
fn direction_defaults_to_a_to_b() {
    let spec = StateSetSpec::parse(
        r#"{"d":2,"base":"phi_plus","unitaries":[{"kind":"weyl","n":1,"m":0}]}"#,
        "mem",
    )
    .unwrap();
    assert_eq!(spec, StateSetSpec::weyl(2, &[(1, 0)], Default::default()));
}

#[test]
fn b_to_a_sets_use_transposed_indices() {
    let spec = StateSetSpec::weyl(
        4,
        &[(0, 0), (1, 1), (3, 2)],
        locclab_cli::spec::DirectionSpec::BtoA,
    );
    let loaded = spec.load("mem").unwrap();
    let expect: Vec<_> = [(0, 0), (1, 3), (3, 2)]
        .iter()
        .map(|&(n, m)| WeylIndex::new(n, m, 4).unwrap())
        .collect();
    assert_eq!(loaded.weyl.unwrap(), expect);
    for (u, idx) in loaded.set.unitaries().iter().zip(&expect) {
        assert!(u
            .phase_relative_to(&locclab_core::make_weyl(*idx), 1e-12)
            .is_some());
    }
}

#[test]
fn syntax_errors_report_line_and_column() {
    let err = StateSetSpec::parse("{\n  \"d\": 2,\n  \"base\": phi_plus\n}", "f.json").unwrap_err();
    match err {
        CliError::Parse { line, column, .. } => assert_eq!((line, column), (3, 11)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn semantic_errors_name_the_entry() {
    let not_unitary = r#"{"d":2,"base":"phi_plus","unitaries":[
        {"kind":"weyl","n":0,"m":0},
        {"kind":"matrix","rows":[[[2,0],[0,0]],[[0,0],[1,0]]]}]}"#;
    let e = StateSetSpec::parse(not_unitary, "f")
        .unwrap()
        .load("f")
        .unwrap_err();
    assert!(e.to_string().contains("unitaries[1]"), "{e}");

    let repeated = r#"{"d":3,"base":"phi_plus","unitaries":[
        {"kind":"weyl","n":1,"m":2},{"kind":"weyl","n":0,"m":0},{"kind":"weyl","n":1,"m":2}]}"#;
    let e = StateSetSpec::parse(repeated, "f")
        .unwrap()
        .load("f")
        .unwrap_err();
    assert!(e.to_string().contains("unitaries[0], unitaries[2]"), "{e}");

    let out_of_range = r#"{"d":3,"base":"phi_plus","unitaries":[{"kind":"weyl","n":3,"m":0}]}"#;
    let e = StateSetSpec::parse(out_of_range, "f")
        .unwrap()
        .load("f")
        .unwrap_err();
    assert!(e.to_string().contains("unitaries[0]"), "{e}");
}

#[test]
fn decide_bell_pair_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let f = weyl_file(dir.path(), "bell.json", 2, &[(0, 0), (1, 1)]);
    let (code, out, _) = run(&["decide", &f, "--restarts", "20"]);
    assert_eq!(code, 0);
    assert!(out.contains("solver_verdict: WITNESS_FOUND"));
    assert!(out.contains("basis_completeness: 2"));
    let p: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("success_probability: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(p >= 1.0 - 1e-8);
}

#[test]
fn decide_csv_has_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let f = weyl_file(dir.path(), "ex1.json", 4, &[(0, 0), (1, 1), (3, 2), (3, 1)]);
    let out_path = dir.path().join("report.csv");
    let (code, stdout, _) = run(&[
        "--format",
        "csv",
        "--restarts",
        "30",
        "--out",
        out_path.to_str().unwrap(),
        "decide",
        &f,
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(out_path).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "indices,bound_violated,solver_verdict,best_f,prover_outcome,basis_completeness,success_probability"
    );
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let row = reader.records().next().unwrap().unwrap();
    assert_eq!(&row[0], "(0,0);(1,1);(3,2);(3,1)");
    assert_eq!((&row[1], &row[2]), ("false", "NO_WITNESS_FOUND"));
    let f: f64 = row[3].parse().unwrap();
    assert!(f > 0.5);
    assert_eq!(&row[4], "INFEASIBLE");
}

#[test]
fn decide_exit_code_two_when_undecided() {
    // a witness exists but --skip-sim leaves sufficiency open
    let dir = tempfile::tempdir().unwrap();
    let f = weyl_file(dir.path(), "shift.json", 3, &[(0, 0), (0, 1)]);
    let (code, out, _) = run(&["decide", &f, "--restarts", "10", "--skip-sim"]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("decided: false"));
}

#[test]
fn decide_five_states_in_dimension_four_short_circuits() {
    let dir = tempfile::tempdir().unwrap();
    let f = weyl_file(
        dir.path(),
        "five.json",
        4,
        &[(0, 0), (0, 1), (0, 2), (0, 3), (1, 0)],
    );
    let (code, out, _) = run(&["decide", &f]);
    assert_eq!(code, 0);
    assert!(out.contains("bound_violated: true"));
    assert!(out.contains("solver_verdict: SKIPPED"));
}

#[test]
fn decide_rejects_bad_files_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.json", "{\"d\": 2,\n \"base\": }");
    let (code, _, err) = run(&["decide", &f]);
    assert_eq!(code, 1);
    assert!(err.contains("bad.json:2:"), "{err}");
    let (code, _, _) = run(&["decide", "/nonexistent/spec.json"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["sweep", "--d", "3"]);
    assert_eq!(code, 1);
}

#[test]
fn trace_exit_codes_follow_the_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let ex2 = weyl_file(dir.path(), "ex2.json", 5, &[(0, 0), (0, 1), (3, 1), (2, 2)]);
    let (code, out, _) = run(&["trace", &ex2]);
    assert_eq!(code, 0);
    assert!(out.trim_end().ends_with("OUTCOME: INFEASIBLE"));
    assert!(ProofTrace::parse(&out).is_ok());

    let shifts = weyl_file(
        dir.path(),
        "shifts.json",
        4,
        &[(0, 0), (0, 1), (0, 2), (0, 3)],
    );
    let (code, out, _) = run(&["trace", &shifts]);
    assert_eq!(code, 2);
    assert!(out.trim_end().ends_with("OUTCOME: INCONCLUSIVE"));
}

#[test]
fn trace_refuses_matrix_unitaries() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "m.json",
        r#"{"d":2,"base":"phi_plus","unitaries":[{"kind":"weyl","n":0,"m":0},
            {"kind":"matrix","rows":[[[0,0],[1,0]],[[1,0],[0,0]]]}]}"#,
    );
    let (code, out, err) = run(&["trace", &f]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(
        err.contains("Weyl") && err.contains("unitaries[1]"),
        "{err}"
    );
}

#[test]
fn sweep_reaches_example_one() {
    let target: Vec<WeylIndex> = [(0, 0), (1, 1), (3, 1), (3, 2)]
        .iter()
        .map(|&(n, m)| WeylIndex::new(n, m, 4).unwrap())
        .collect();
    let pos = subsets(4, 4, true)
        .iter()
        .position(|s| *s == target)
        .unwrap();
    let limit = (pos + 1).to_string();
    let (code, out, _) = run(&[
        "--format",
        "csv",
        "--restarts",
        "20",
        "sweep",
        "--d",
        "4",
        "--N",
        "4",
        "--limit",
        &limit,
    ]);
    assert_eq!(code, 0);
    let last = out.lines().last().unwrap();
    assert!(last.starts_with("\"(0,0);(1,1);(3,1);(3,2)\","), "{last}");
    assert!(last.contains(",INFEASIBLE,"), "{last}");
    assert_eq!(out.lines().count(), pos + 2);
}

#[test]
fn sweep_output_is_independent_of_thread_count() {
    let args = [
        "--format",
        "csv",
        "--restarts",
        "10",
        "sweep",
        "--d",
        "3",
        "--N",
        "2",
    ];
    let one = Command::new(EXE)
        .args(args)
        .env("LOCCLAB_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(EXE)
        .args(args)
        .env("LOCCLAB_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    let bad = Command::new(EXE)
        .args(args)
        .env("LOCCLAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn canonicalization_preserves_prover_verdicts() {
    // U_i -> U_1^dag U_i maps every subset to one containing (0,0)
    for idx in subsets(4, 3, false) {
        let base = idx[0];
        let rel: Vec<WeylIndex> = idx.iter().map(|i| i.relative_to(&base)).collect();
        let a = prove_infeasible(&idx).unwrap().outcome;
        let b = prove_infeasible(&rel).unwrap().outcome;
        assert_eq!(a, b, "{idx:?}");
    }
}
